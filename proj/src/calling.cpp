#include "lichee/calling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lichee {

void CallingConfig::validate() const {
    if (!(t_absent >= 0.0 && t_absent <= t_present && t_present <= 1.0)) {
        throw std::invalid_argument("calling thresholds must satisfy 0 <= t_absent <= t_present <= 1");
    }
    if (min_robust_peers < 0) {
        throw std::invalid_argument("min_robust_peers must be non-negative");
    }
    if (sim_threshold_frac < 0.0) {
        throw std::invalid_argument("sim_threshold_frac must be non-negative");
    }
}

TernaryProfile mark_presence(const SnvRecord& snv, const CallingConfig& cfg) {
    std::vector<Mark> marks(snv.vaf.size(), Mark::Unknown);
    for (std::size_t i = 0; i < snv.vaf.size(); ++i) {
        const double v = snv.vaf[i];
        if (cfg.normal_index && *cfg.normal_index == i) {
            marks[i] = Mark::Absent;
        } else if (v >= cfg.t_present) {
            marks[i] = Mark::Present;
        } else if (v <= cfg.t_absent) {
            marks[i] = Mark::Absent;
        }
    }
    return TernaryProfile(std::move(marks));
}

RobustGrouping form_robust_groups(const std::vector<SnvRecord>& snvs, const CallingConfig& cfg) {
    RobustGrouping out;
    std::map<BinaryProfile, std::vector<std::size_t>> resolved;
    std::vector<TernaryProfile> marks;
    marks.reserve(snvs.size());
    for (std::size_t i = 0; i < snvs.size(); ++i) {
        marks.push_back(mark_presence(snvs[i], cfg));
        if (marks.back().resolved()) {
            BinaryProfile p = marks.back().to_binary();
            if (p.all_zero()) {
                out.dropped.push_back({i, "absent from every sample"});
            } else {
                resolved[std::move(p)].push_back(i);
            }
        }
    }
    std::vector<bool> grouped(snvs.size(), false);
    for (auto& [profile, members] : resolved) {
        if (members.size() >= static_cast<std::size_t>(cfg.min_robust_peers) + 1) {
            for (auto m : members) grouped[m] = true;
            out.groups.push_back({profile, members, true});
        }
    }
    for (std::size_t i = 0; i < snvs.size(); ++i) {
        if (grouped[i]) continue;
        if (marks[i].resolved() && marks[i].to_binary().all_zero()) continue;
        out.unresolved.push_back({i, std::move(marks[i])});
    }
    return out;
}

double similarity(const SnvRecord& m, const SnvRecord& n) {
    if (m.vaf.size() != n.vaf.size()) {
        throw std::invalid_argument("similarity: VAF vectors differ in length");
    }
    double sim = 0.0;
    for (std::size_t i = 0; i < m.vaf.size(); ++i) {
        const double lo = std::min(m.vaf[i], n.vaf[i]);
        const double hi = std::max(m.vaf[i], n.vaf[i]);
        if (hi == 0.0) {
            sim += 1.0;
        } else {
            sim += lo / hi;
        }
    }
    return sim;
}

GreyzoneAssignment assign_greyzone(const std::vector<UnresolvedSnv>& unresolved,
                                   const std::vector<SnvGroup>& groups,
                                   const std::vector<SnvRecord>& snvs,
                                   const CallingConfig& cfg) {
    GreyzoneAssignment out;
    out.groups = groups;
    // Robust members are captured up front so assignments never feed back
    // into later comparisons.
    const std::vector<SnvGroup> robust = groups;
    for (const auto& u : unresolved) {
        const SnvRecord& m = snvs.at(u.index);
        const double threshold = cfg.sim_threshold_frac * static_cast<double>(m.vaf.size());
        double best = -1.0;
        std::size_t best_group = 0;
        std::size_t best_member = 0;
        bool found = false;
        for (std::size_t g = 0; g < robust.size(); ++g) {
            if (!robust[g].robust || !ternary_compatible(u.profile, robust[g].profile)) continue;
            for (auto n : robust[g].members) {
                const double s = similarity(m, snvs.at(n));
                bool better = !found || s > best;
                if (found && s == best) {
                    const auto& bp = robust[best_group].profile;
                    better = robust[g].profile < bp || (robust[g].profile == bp && n < best_member);
                }
                if (better) {
                    best = s;
                    best_group = g;
                    best_member = n;
                    found = true;
                }
            }
        }
        if (found && best >= threshold) {
            out.groups[best_group].members.push_back(u.index);
        } else {
            out.residual.push_back(u);
        }
    }
    for (auto& g : out.groups) std::sort(g.members.begin(), g.members.end());
    return out;
}

namespace {

BinaryProfile round_to_nearest(const UnresolvedSnv& u, const SnvRecord& snv, const CallingConfig& cfg) {
    BinaryProfile p = u.profile.to_binary();
    for (std::size_t i = 0; i < u.profile.size(); ++i) {
        if (u.profile[i] != Mark::Unknown) continue;
        const double v = snv.vaf[i];
        p.set(i, std::abs(v - cfg.t_present) < std::abs(v - cfg.t_absent));
    }
    return p;
}

}  // namespace

CoverResult cover_residual(const std::vector<UnresolvedSnv>& residual,
                           const std::vector<SnvRecord>& snvs,
                           const CallingConfig& cfg) {
    CoverResult out;
    std::map<BinaryProfile, std::vector<std::size_t>> formed;  // profile -> SNV indices

    // Candidate targets per residual element (positions into `residual`).
    std::map<BinaryProfile, std::vector<std::size_t>> targets;
    std::vector<bool> covered(residual.size(), false);
    std::vector<std::size_t> direct;
    for (std::size_t k = 0; k < residual.size(); ++k) {
        if (residual[k].profile.unknown_count() > cfg.max_star_positions) {
            covered[k] = true;
            direct.push_back(k);
            continue;
        }
        for (auto& p : residual[k].profile.substitutions()) {
            if (p.all_zero()) continue;
            targets[std::move(p)].push_back(k);
        }
    }

    while (true) {
        std::size_t best_count = 0;
        const BinaryProfile* best = nullptr;
        for (const auto& [profile, elems] : targets) {
            std::size_t c = 0;
            for (auto k : elems) c += covered[k] ? 0 : 1;
            // map order is ascending, so strict improvement keeps the smallest profile on ties
            if (c > best_count) {
                best_count = c;
                best = &profile;
            }
        }
        if (best == nullptr || best_count < 2) break;
        auto& group = formed[*best];
        for (auto k : targets[*best]) {
            if (covered[k]) continue;
            covered[k] = true;
            group.push_back(residual[k].index);
        }
    }

    for (std::size_t k = 0; k < residual.size(); ++k) {
        if (!covered[k]) {
            covered[k] = true;
            direct.push_back(k);
        }
    }
    std::sort(direct.begin(), direct.end());
    for (auto k : direct) {
        const auto& u = residual[k];
        BinaryProfile p = round_to_nearest(u, snvs.at(u.index), cfg);
        if (p.all_zero()) {
            out.dropped.push_back({u.index, "rounded to an all-absent profile"});
            continue;
        }
        formed[std::move(p)].push_back(u.index);
    }

    for (auto& [profile, members] : formed) {
        std::sort(members.begin(), members.end());
        out.groups.push_back({profile, std::move(members), false});
    }
    return out;
}

GroupingResult group_snvs(const std::vector<SnvRecord>& snvs, const CallingConfig& cfg) {
    cfg.validate();
    RobustGrouping robust = form_robust_groups(snvs, cfg);
    GreyzoneAssignment grey = assign_greyzone(robust.unresolved, robust.groups, snvs, cfg);
    CoverResult cover = cover_residual(grey.residual, snvs, cfg);

    GroupingResult out;
    out.groups = std::move(grey.groups);
    for (auto& g : cover.groups) out.groups.push_back(std::move(g));
    std::stable_sort(out.groups.begin(), out.groups.end(), [](const SnvGroup& a, const SnvGroup& b) {
        if (a.profile != b.profile) return a.profile < b.profile;
        return a.robust && !b.robust;
    });
    out.dropped = std::move(robust.dropped);
    for (auto& d : cover.dropped) out.dropped.push_back(std::move(d));
    std::sort(out.dropped.begin(), out.dropped.end(),
              [](const DroppedSnv& a, const DroppedSnv& b) { return a.index < b.index; });
    return out;
}

}  // namespace lichee
