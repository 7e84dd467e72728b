#include "lichee/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace lichee {

namespace {

// Approximate GRCh37 autosome lengths and centromere positions, in Mb.
constexpr std::array<int, 22> kChromLengthMb{249, 243, 198, 191, 181, 171, 159, 146, 141, 136, 135,
                                             134, 115, 107, 103, 90,  81,  78,  59,  63,  48,  51};
constexpr std::array<int, 22> kCentromereMb{125, 93, 91, 50, 48, 61, 60, 45, 49, 40, 53,
                                            35,  17, 17, 19, 36, 24, 17, 26, 28, 12, 15};
constexpr std::int64_t kMb = 1000000;

double log_uniform(Engine& rng, double lo, double hi) {
    if (lo == hi) return lo;
    return std::exp(std::log(lo) + uniform01(rng) * (std::log(hi) - std::log(lo)));
}

double population_size(Engine& rng, const SimulationConfig& cfg) {
    if (cfg.size_law == SizeLaw::Uniform)
        return cfg.min_population + uniform01(rng) * (cfg.max_population - cfg.min_population);
    return log_uniform(rng, cfg.min_population, cfg.max_population);
}

SimSnv random_locus(Engine& rng, int chromosomes) {
    std::int64_t total = 0;
    for (int c = 0; c < chromosomes; ++c) total += kChromLengthMb[static_cast<std::size_t>(c)] * kMb;
    std::int64_t x = static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(total)));
    SimSnv s;
    for (int c = 0; c < chromosomes; ++c) {
        const std::int64_t len = kChromLengthMb[static_cast<std::size_t>(c)] * kMb;
        if (x < len) {
            s.chrom = c + 1;
            s.pos = x + 1;
            s.arm = s.pos > kCentromereMb[static_cast<std::size_t>(c)] * kMb ? 1 : 0;
            break;
        }
        x -= len;
    }
    s.haplotype = static_cast<int>(uniform_index(rng, 2));
    return s;
}

// Picks min(k, pool.size()) entries uniformly without replacement,
// returned in ascending order.
std::vector<int> choose(Engine& rng, std::vector<int> pool, std::size_t k) {
    k = std::min(k, pool.size());
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::vector<int> live_in_subtree(const LineageTree& tree, const std::vector<std::vector<int>>& kids, int r) {
    std::vector<int> out;
    std::vector<int> stack{r};
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        const auto& p = tree.populations[static_cast<std::size_t>(x)];
        if (p.alive && p.parent >= 0) out.push_back(x);
        for (int c : kids[static_cast<std::size_t>(x)]) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SampleDraw finish_draw(const LineageTree& tree, const std::vector<int>& chosen, const SamplingConfig& cfg,
                       double normal_fraction, SamplingScheme scheme, Engine& rng) {
    SampleDraw d;
    d.scheme = scheme;
    d.normal_fraction = normal_fraction;
    d.normal_cells = normal_fraction > 0.0 ? binomial(rng, cfg.cells_per_sample, normal_fraction) : 0;
    const std::uint64_t tumour = cfg.cells_per_sample - d.normal_cells;
    std::vector<double> weights;
    for (int p : chosen) weights.push_back(tree.populations[static_cast<std::size_t>(p)].size);
    const auto counts = multinomial(rng, tumour, weights);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        if (counts[i] > 0) d.cells.emplace_back(chosen[i], counts[i]);
    }
    return d;
}

}  // namespace

void SimulationConfig::validate() const {
    for (double p : {p_ssnv, p_cnv, p_death}) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("simulation probabilities must be in [0,1]");
    }
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (!(min_population > 0.0 && min_population <= max_population))
        throw std::invalid_argument("population size range is invalid");
    if (ssnvs_per_event < 1) throw std::invalid_argument("ssnvs_per_event must be >= 1");
    if (chromosomes < 1 || chromosomes > 22) throw std::invalid_argument("chromosomes must be in 1..22");
}

std::vector<std::vector<int>> LineageTree::children() const {
    std::vector<std::vector<int>> out(populations.size());
    for (const auto& p : populations) {
        if (p.parent >= 0) out[static_cast<std::size_t>(p.parent)].push_back(p.id);
    }
    return out;
}

bool LineageTree::is_ancestor(int a, int b) const {
    int x = populations.at(static_cast<std::size_t>(b)).parent;
    while (x >= 0) {
        if (x == a) return true;
        x = populations[static_cast<std::size_t>(x)].parent;
    }
    return false;
}

std::vector<int> LineageTree::lineage(int p) const {
    std::vector<int> out;
    for (int x = p; x >= 0; x = populations.at(static_cast<std::size_t>(x)).parent) out.push_back(x);
    std::reverse(out.begin(), out.end());
    return out;
}

bool LineageTree::carries(int population, std::size_t snv) const {
    const int origin = snvs.at(snv).origin;
    return origin == population || is_ancestor(origin, population);
}

LocusState locus_state(const LineageTree& tree, int population, const SimSnv& snv) {
    std::array<int, 2> copies{1, 1};
    int variant = 0;
    for (int q : tree.lineage(population)) {
        const auto& p = tree.populations[static_cast<std::size_t>(q)];
        if (q == snv.origin) variant = 1;
        if (p.cnv && p.cnv->chrom == snv.chrom && p.cnv->arm == snv.arm) {
            const auto h = static_cast<std::size_t>(p.cnv->haplotype);
            copies[h] *= 2;
            if (p.cnv->haplotype == snv.haplotype) variant *= 2;
        }
    }
    return {variant, copies[0] + copies[1] - variant};
}

LineageTree grow_tree(const SimulationConfig& cfg, Engine& rng) {
    cfg.validate();
    LineageTree t;
    CellPopulation root;
    root.size = population_size(rng, cfg);
    t.populations.push_back(root);
    for (int it = 1; it <= cfg.iterations; ++it) {
        const std::size_t existing = t.populations.size();
        for (std::size_t p = 0; p < existing; ++p) {
            if (!t.populations[p].alive) continue;
            if (bernoulli(rng, cfg.p_ssnv)) {
                CellPopulation c;
                c.id = static_cast<int>(t.populations.size());
                c.parent = static_cast<int>(p);
                c.size = population_size(rng, cfg);
                c.event = EventKind::Ssnv;
                c.born = it;
                for (int k = 0; k < cfg.ssnvs_per_event; ++k) {
                    SimSnv s = random_locus(rng, cfg.chromosomes);
                    s.id = t.snvs.size();
                    s.origin = c.id;
                    c.ssnvs.push_back(s.id);
                    t.snvs.push_back(s);
                }
                t.populations.push_back(std::move(c));
            }
            if (bernoulli(rng, cfg.p_cnv)) {
                CellPopulation c;
                c.id = static_cast<int>(t.populations.size());
                c.parent = static_cast<int>(p);
                c.size = population_size(rng, cfg);
                c.event = EventKind::Cnv;
                c.born = it;
                const auto arm = uniform_index(rng, static_cast<std::uint64_t>(2 * cfg.chromosomes));
                c.cnv = CnvEvent{static_cast<int>(arm / 2) + 1, static_cast<int>(arm % 2),
                                 static_cast<int>(uniform_index(rng, 2))};
                t.populations.push_back(std::move(c));
            }
            if (p != 0 && bernoulli(rng, cfg.p_death)) t.populations[p].alive = false;
        }
    }
    return t;
}

LineageTree grow_tree(const SimulationConfig& cfg) {
    Engine rng(derive_seed(cfg.seed, 0));
    return grow_tree(cfg, rng);
}

std::vector<int> disjoint_subtrees(const LineageTree& tree, std::size_t n) {
    const auto kids = tree.children();
    const std::size_t count = tree.populations.size();
    std::vector<char> live(count, 0);
    for (std::size_t i = count; i-- > 0;) {
        const auto& p = tree.populations[i];
        if (p.alive && p.parent >= 0) live[i] = 1;
        for (int c : kids[i]) live[i] |= live[static_cast<std::size_t>(c)];
    }
    std::vector<int> depth(count, 0);
    for (std::size_t i = 1; i < count; ++i)
        depth[i] = depth[static_cast<std::size_t>(tree.populations[i].parent)] + 1;

    auto live_children = [&](int v) {
        std::vector<int> out;
        for (int c : kids[static_cast<std::size_t>(v)]) {
            if (live[static_cast<std::size_t>(c)]) out.push_back(c);
        }
        return out;
    };
    // Walks down single-child chains to the first branching point.
    auto branch_point = [&](int v) {
        auto lc = live_children(v);
        while (lc.size() == 1) {
            v = lc.front();
            lc = live_children(v);
        }
        return std::pair(v, lc);
    };

    if (n == 0 || !live[0]) return {};
    std::vector<int> roots = branch_point(0).second;
    if (roots.empty()) return {};
    if (roots.size() > n) roots.resize(n);
    while (roots.size() < n) {
        int best = -1;
        int best_point = -1;
        std::vector<int> best_kids;
        for (std::size_t r = 0; r < roots.size(); ++r) {
            auto [point, lc] = branch_point(roots[r]);
            if (lc.size() < 2) continue;
            const auto key = std::tuple(depth[static_cast<std::size_t>(point)], point);
            if (best < 0 || key < std::tuple(depth[static_cast<std::size_t>(best_point)], best_point)) {
                best = static_cast<int>(r);
                best_point = point;
                best_kids = lc;
            }
        }
        if (best < 0) break;
        const std::size_t room = n - roots.size() + 1;
        if (best_kids.size() > room) best_kids.resize(room);
        roots.erase(roots.begin() + best);
        roots.insert(roots.end(), best_kids.begin(), best_kids.end());
    }
    std::sort(roots.begin(), roots.end(), [&](int a, int b) {
        return std::tuple(depth[static_cast<std::size_t>(a)], a) < std::tuple(depth[static_cast<std::size_t>(b)], b);
    });
    return roots;
}

std::vector<std::uint64_t> multinomial(Engine& rng, std::uint64_t n, const std::vector<double>& weights) {
    std::vector<std::uint64_t> out(weights.size(), 0);
    double remaining = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("multinomial weights must be >= 0");
        remaining += w;
    }
    for (std::size_t i = 0; i < weights.size() && n > 0; ++i) {
        if (i + 1 == weights.size()) {
            out[i] = n;
            break;
        }
        const double p = remaining > 0.0 ? std::clamp(weights[i] / remaining, 0.0, 1.0) : 0.0;
        out[i] = binomial(rng, n, p);
        n -= out[i];
        remaining -= weights[i];
    }
    return out;
}

std::vector<SampleDraw> sample_localized(const LineageTree& tree, const SamplingConfig& cfg, Engine& rng) {
    const auto roots = disjoint_subtrees(tree, cfg.samples);
    const auto kids = tree.children();
    std::vector<std::vector<int>> pools;
    for (int r : roots) pools.push_back(live_in_subtree(tree, kids, r));
    std::vector<SampleDraw> draws;
    const std::size_t m = roots.size();
    for (std::size_t j = 0; j < cfg.samples; ++j) {
        std::vector<int> chosen;
        if (m > 0) {
            const std::size_t s = j % m;
            const auto k = 1 + uniform_index(rng, static_cast<std::uint64_t>(cfg.max_subclones));
            chosen = choose(rng, pools[s], k);
            if (m > 1) {
                const auto& nb = pools[(s + 1) % m];
                chosen.push_back(nb[uniform_index(rng, nb.size())]);
            }
        }
        const double f = uniform01(rng) * cfg.max_normal_fraction;
        draws.push_back(finish_draw(tree, chosen, cfg, f, SamplingScheme::Localized, rng));
    }
    return draws;
}

std::vector<SampleDraw> sample_randomized(const LineageTree& tree, const SamplingConfig& cfg, Engine& rng) {
    std::vector<int> pool;
    for (const auto& p : tree.populations) {
        if (p.alive && p.parent >= 0) pool.push_back(p.id);
    }
    std::vector<SampleDraw> draws;
    for (std::size_t j = 0; j < cfg.samples; ++j) {
        const auto k = 1 + uniform_index(rng, static_cast<std::uint64_t>(cfg.max_subclones));
        draws.push_back(finish_draw(tree, choose(rng, pool, k), cfg, 0.0, SamplingScheme::Randomized, rng));
    }
    return draws;
}

double true_vaf(const LineageTree& tree, const SimSnv& snv, const SampleDraw& draw) {
    double num = 0.0;
    double den = 2.0 * static_cast<double>(draw.normal_cells);
    for (const auto& [pop, cells] : draw.cells) {
        const LocusState st = locus_state(tree, pop, snv);
        num += static_cast<double>(cells) * st.variant;
        den += static_cast<double>(cells) * (st.variant + st.reference);
    }
    return den > 0.0 ? num / den : 0.0;
}

double add_noise(double vaf, const NoiseConfig& cfg, Engine& rng) {
    if (!cfg.coverage) return vaf;
    const std::uint64_t n = *cfg.coverage;
    if (n == 0) throw std::invalid_argument("coverage must be >= 1");
    const std::uint64_t v = binomial(rng, n, std::clamp(vaf, 0.0, 1.0));
    const std::uint64_t lost = binomial(rng, v, cfg.error_rate);
    const std::uint64_t gained = binomial(rng, n - v, cfg.error_rate);
    return static_cast<double>(v - lost + gained) / static_cast<double>(n);
}

SimulatedDataset simulate_dataset(const ExperimentConfig& cfg) {
    SimulatedDataset out;
    auto& truth = out.truth;
    bool ok = false;
    for (std::uint64_t attempt = 0; attempt < 10000 && !ok; ++attempt) {
        Engine grow_rng(derive_seed(cfg.sim.seed, attempt));
        truth.tree = grow_tree(cfg.sim, grow_rng);
        for (const auto& p : truth.tree.populations) {
            if (p.parent >= 0 && p.alive) ok = true;
        }
    }
    if (!ok) throw std::runtime_error("simulate_dataset: no tree with a live tumour population");

    Engine sample_rng(derive_seed(cfg.sim.seed, 0x53414d504c45ULL));
    truth.draws = cfg.scheme == SamplingScheme::Localized ? sample_localized(truth.tree, cfg.sampling, sample_rng)
                                                          : sample_randomized(truth.tree, cfg.sampling, sample_rng);
    const std::size_t S = cfg.sampling.samples + 1;
    truth.samples.names.push_back("normal");
    for (std::size_t j = 1; j < S; ++j) truth.samples.names.push_back("S" + std::to_string(j));
    truth.samples.normal_index = 0;

    const auto& tree = truth.tree;
    for (const auto& snv : tree.snvs) {
        BinaryProfile presence(S);
        bool any = false;
        for (std::size_t j = 0; j < truth.draws.size(); ++j) {
            for (const auto& [pop, cells] : truth.draws[j].cells) {
                if (tree.carries(pop, snv.id)) {
                    presence.set(j + 1, true);
                    any = true;
                    break;
                }
            }
        }
        if (!any) continue;
        std::vector<double> vafs(S, 0.0);
        bool cnv = false;
        for (std::size_t j = 0; j < truth.draws.size(); ++j) {
            vafs[j + 1] = true_vaf(tree, snv, truth.draws[j]);
            for (const auto& [pop, cells] : truth.draws[j].cells) {
                const LocusState st = locus_state(tree, pop, snv);
                if (st.variant + st.reference != 2) cnv = true;
            }
        }
        truth.collected.push_back(snv.id);
        truth.presence.push_back(std::move(presence));
        truth.true_vafs.push_back(std::move(vafs));
        truth.in_cnv_region.push_back(cnv);
    }

    Engine noise_rng(derive_seed(cfg.sim.seed, 0x4e4f495345ULL));
    for (std::size_t r = 0; r < truth.collected.size(); ++r) {
        const auto& snv = tree.snvs[truth.collected[r]];
        SnvRecord rec;
        rec.chrom = "chr" + std::to_string(snv.chrom);
        rec.pos = snv.pos;
        rec.desc = "snv" + std::to_string(snv.id);
        for (double v : truth.true_vafs[r]) rec.vaf.push_back(add_noise(v, cfg.noise, noise_rng));
        out.table.push_back(std::move(rec));
    }
    return out;
}

}  // namespace lichee
