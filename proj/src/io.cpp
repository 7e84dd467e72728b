#include "lichee/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace lichee {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

template <class T>
bool parse_number(const std::string& text, T& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !text.empty();
}

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <class T>
std::string join(const std::vector<T>& values, char sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        if constexpr (std::is_floating_point_v<T>) {
            out += fmt(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

template <class T>
std::vector<T> parse_list(const std::string& field, const std::string& context) {
    std::vector<T> out;
    if (field.empty() || field == ".") return out;
    for (const auto& item : split(field, ',')) {
        T v{};
        if (!parse_number(item, v)) throw InputError(context + "bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

SnvTable read_snv_table(std::istream& in, bool cp, std::size_t normal_index, const std::string& source) {
    SnvTable table;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::size_t S = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split(line, '\t');
        if (!header) {
            if (line[0] != '#') throw InputError(where(source, lineno) + "expected a '#chr' header line");
            if (fields.size() < 5) throw InputError(where(source, lineno) + "header needs at least two sample columns");
            table.samples.names.assign(fields.begin() + 3, fields.end());
            table.samples.normal_index = normal_index;
            try {
                table.samples.validate();
            } catch (const std::invalid_argument& e) {
                throw InputError(where(source, lineno) + e.what());
            }
            S = table.samples.size();
            header = true;
            continue;
        }
        if (fields.size() != S + 3) {
            throw InputError(where(source, lineno) + "expected " + std::to_string(S + 3) + " columns, found " +
                             std::to_string(fields.size()));
        }
        SnvRecord rec;
        rec.chrom = fields[0];
        if (!parse_number(fields[1], rec.pos)) throw InputError(where(source, lineno) + "bad position '" + fields[1] + "'");
        rec.desc = fields[2];
        rec.is_cp = cp;
        for (std::size_t i = 0; i < S; ++i) {
            double v = 0.0;
            const auto& f = fields[3 + i];
            if (!parse_number(f, v)) throw InputError(where(source, lineno) + "bad value '" + f + "'");
            if (!(v >= 0.0 && v <= 1.0)) throw InputError(where(source, lineno) + "value " + f + " outside [0,1]");
            rec.vaf.push_back(cp ? v / 2.0 : v);
        }
        table.snvs.push_back(std::move(rec));
    }
    if (!header) throw InputError(source + ": missing header line");
    return table;
}

SnvTable parse_snv_table(const std::filesystem::path& path, bool cp, std::size_t normal_index) {
    std::ifstream in(path);
    if (!in) throw InputError(path.string() + ": cannot open");
    return read_snv_table(in, cp, normal_index, path.string());
}

void write_snv_table(std::ostream& out, const SnvTable& table) {
    out << "#chr\tposition\tdescription";
    for (const auto& n : table.samples.names) out << '\t' << n;
    out << '\n';
    for (const auto& s : table.snvs) {
        out << s.chrom << '\t' << s.pos << '\t' << s.desc;
        for (double v : s.vaf) out << '\t' << fmt(s.is_cp ? v * 2.0 : v);
        out << '\n';
    }
}

std::vector<Cluster> read_cluster_file(std::istream& in, const SnvTable& table, const std::string& source) {
    std::vector<Cluster> clusters;
    std::set<std::size_t> seen;
    std::string line;
    std::size_t lineno = 0;
    const std::size_t S = table.samples.size();
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        const std::string ctx = where(source, lineno);
        const auto fields = split(line, '\t');
        if (fields.size() != 3) throw InputError(ctx + "expected 3 tab-separated fields");
        Cluster c;
        c.id = static_cast<int>(clusters.size()) + 1;
        try {
            c.profile = BinaryProfile::parse(fields[0]);
        } catch (const std::invalid_argument& e) {
            throw InputError(ctx + e.what());
        }
        if (c.profile.size() != S) {
            throw InputError(ctx + "profile length " + std::to_string(c.profile.size()) + " != sample count " +
                             std::to_string(S));
        }
        if (c.profile[table.samples.normal_index]) throw InputError(ctx + "profile marks the normal sample present");
        if (c.profile.all_zero()) throw InputError(ctx + "profile has no present sample");
        c.centroid = parse_list<double>(fields[1], ctx);
        if (c.centroid.size() != hamming_weight(c.profile)) {
            throw InputError(ctx + "centroid has " + std::to_string(c.centroid.size()) + " values, profile has " +
                             std::to_string(hamming_weight(c.profile)) + " present samples");
        }
        for (double v : c.centroid) {
            if (!(v >= 0.0 && v <= 1.0)) throw InputError(ctx + "centroid value outside [0,1]");
        }
        c.members = parse_list<std::size_t>(fields[2], ctx);
        if (c.members.empty()) throw InputError(ctx + "cluster lists no SSNV rows");
        for (std::size_t m : c.members) {
            if (m >= table.snvs.size()) throw InputError(ctx + "SSNV row " + std::to_string(m) + " out of range");
            if (!seen.insert(m).second) throw InputError(ctx + "SSNV row " + std::to_string(m) + " listed twice");
        }
        const auto given = c.centroid;
        recompute_statistics(c, table.snvs);
        c.centroid = given;
        c.standard_error.resize(given.size(), 0.0);
        c.robust = true;
        clusters.push_back(std::move(c));
    }
    return clusters;
}

std::vector<Cluster> parse_cluster_file(const std::filesystem::path& path, const SnvTable& table) {
    std::ifstream in(path);
    if (!in) throw InputError(path.string() + ": cannot open");
    return read_cluster_file(in, table, path.string());
}

void write_cluster_file(std::ostream& out, const std::vector<Cluster>& clusters) {
    for (const auto& c : clusters) {
        out << c.profile.to_string() << '\t' << join(c.centroid, ',') << '\t' << join(c.members, ',') << '\n';
    }
}

std::string tree_to_dot(const ResultBundle& b, std::size_t tree_index) {
    std::ostringstream out;
    out << "digraph lineage {\n  node [shape=box];\n";
    for (const auto& n : b.nodes) {
        out << "  n" << n.id << " [label=\"";
        if (n.root) {
            out << "germline";
        } else {
            out << n.id << "\\n" << n.profile.to_string() << "\\n" << n.snvs.size() << " SSNVs";
        }
        out << "\"];\n";
    }
    if (tree_index < b.trees.size()) {
        const auto& t = b.trees[tree_index];
        for (const auto& e : t.edges) out << "  n" << e.parent << " -> n" << e.child << ";\n";
        for (const auto& d : t.decompositions) {
            const std::string& name = b.samples.names.at(d.sample);
            out << "  s" << d.sample << " [shape=ellipse,label=\"" << name << "\"];\n";
            for (const auto& l : d.lineages) {
                if (l.path.empty()) continue;
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.3f", l.prevalence);
                out << "  n" << l.path.back() << " -> s" << d.sample << " [style=dashed,label=\"" << buf << "\"];\n";
            }
        }
    }
    out << "}\n";
    return out.str();
}

std::string summary_text(const ResultBundle& b) {
    std::ostringstream out;
    const std::size_t n = b.trees_valid;
    out << n << (n == 1 ? " tree" : " trees");
    if (!b.trees.empty()) {
        const auto& top = b.trees.front();
        const double score = top.qp_objective ? *top.qp_objective : top.local_score;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g", score);
        out << ", score " << buf;
    }
    if (b.truncated) out << " (search truncated)";
    out << '\n';
    out << "spanning trees enumerated: " << b.trees_found << '\n';
    std::size_t placed = 0;
    for (const auto& s : b.snvs) placed += s.node.has_value();
    out << "SSNVs: " << b.snvs.size() << " input, " << placed << " in network nodes, " << b.dropped.size()
        << " dropped\n";
    out << "network: " << b.nodes.size() << " nodes, " << b.network_edges.size() << " edges\n";
    if (!b.adjustments.empty()) out << "nodes removed by network adjustment: " << b.adjustments.size() << '\n';
    if (!b.diagnostic.empty()) out << "note: " << b.diagnostic << '\n';
    return out.str();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path.string() + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void write_outputs(const ResultBundle& bundle, const OutputPaths& paths) {
    if (!paths.json.empty()) write_file(paths.json, dump_bundle(bundle));
    if (!paths.dot.empty()) write_file(paths.dot, tree_to_dot(bundle, 0));
    if (!paths.summary.empty()) write_file(paths.summary, summary_text(bundle));
}

namespace {

const char* event_name(EventKind k) {
    switch (k) {
        case EventKind::Root: return "root";
        case EventKind::Ssnv: return "ssnv";
        case EventKind::Cnv: return "cnv";
    }
    return "root";
}

}  // namespace

void write_truth(std::ostream& out, const SimulationTruth& t) {
    out << "#lichee-truth\t1\n";
    out << "samples";
    for (const auto& n : t.samples.names) out << '\t' << n;
    out << '\n';
    out << "#population\tid\tparent\talive\tsize\tevent\tcnv\tborn\n";
    for (const auto& p : t.tree.populations) {
        out << "population\t" << p.id << '\t' << p.parent << '\t' << (p.alive ? 1 : 0) << '\t' << fmt(p.size) << '\t'
            << event_name(p.event) << '\t';
        if (p.cnv) {
            out << p.cnv->chrom << ':' << (p.cnv->arm ? 'q' : 'p') << ':' << p.cnv->haplotype;
        } else {
            out << '.';
        }
        out << '\t' << p.born << '\n';
    }
    out << "#snv\tid\torigin\tchrom\tpos\tarm\thaplotype\n";
    for (const auto& s : t.tree.snvs) {
        out << "snv\t" << s.id << '\t' << s.origin << '\t' << s.chrom << '\t' << s.pos << '\t' << (s.arm ? 'q' : 'p')
            << '\t' << s.haplotype << '\n';
    }
    out << "#draw\tsample\tscheme\tnormal_fraction\tnormal_cells\tpopulation:cells\n";
    for (std::size_t j = 0; j < t.draws.size(); ++j) {
        const auto& d = t.draws[j];
        out << "draw\t" << j + 1 << '\t' << (d.scheme == SamplingScheme::Localized ? "localized" : "randomized") << '\t'
            << fmt(d.normal_fraction) << '\t' << d.normal_cells << '\t';
        for (std::size_t k = 0; k < d.cells.size(); ++k) {
            if (k) out << ',';
            out << d.cells[k].first << ':' << d.cells[k].second;
        }
        if (d.cells.empty()) out << '.';
        out << '\n';
    }
    out << "#collected\trow\tsnv\tpresence\tin_cnv\ttrue_vafs\n";
    for (std::size_t r = 0; r < t.collected.size(); ++r) {
        out << "collected\t" << r << '\t' << t.collected[r] << '\t' << t.presence[r].to_string() << '\t'
            << (t.in_cnv_region[r] ? 1 : 0) << '\t' << join(t.true_vafs[r], ',') << '\n';
    }
}

SimulationTruth read_truth(std::istream& in, const std::string& source) {
    SimulationTruth t;
    std::string line;
    std::size_t lineno = 0;
    auto num = [&](const std::string& f, auto& v) {
        if (!parse_number(f, v)) throw InputError(where(source, lineno) + "bad number '" + f + "'");
    };
    auto arm_of = [&](const std::string& f) {
        if (f == "p") return 0;
        if (f == "q") return 1;
        throw InputError(where(source, lineno) + "bad arm '" + f + "'");
    };
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        const auto f = split(line, '\t');
        const std::string& kind = f[0];
        auto need = [&](std::size_t n) {
            if (f.size() != n) throw InputError(where(source, lineno) + "expected " + std::to_string(n) + " fields");
        };
        if (kind == "samples") {
            t.samples.names.assign(f.begin() + 1, f.end());
            t.samples.normal_index = 0;
        } else if (kind == "population") {
            need(8);
            CellPopulation p;
            int alive = 0;
            num(f[1], p.id);
            num(f[2], p.parent);
            num(f[3], alive);
            p.alive = alive != 0;
            num(f[4], p.size);
            if (f[5] == "root") p.event = EventKind::Root;
            else if (f[5] == "ssnv") p.event = EventKind::Ssnv;
            else if (f[5] == "cnv") p.event = EventKind::Cnv;
            else throw InputError(where(source, lineno) + "bad event '" + f[5] + "'");
            if (f[6] != ".") {
                const auto parts = split(f[6], ':');
                if (parts.size() != 3) throw InputError(where(source, lineno) + "bad cnv field");
                CnvEvent c;
                num(parts[0], c.chrom);
                c.arm = arm_of(parts[1]);
                num(parts[2], c.haplotype);
                p.cnv = c;
            }
            num(f[7], p.born);
            if (p.id != static_cast<int>(t.tree.populations.size()))
                throw InputError(where(source, lineno) + "populations must be listed in id order");
            t.tree.populations.push_back(std::move(p));
        } else if (kind == "snv") {
            need(7);
            SimSnv s;
            num(f[1], s.id);
            num(f[2], s.origin);
            num(f[3], s.chrom);
            num(f[4], s.pos);
            s.arm = arm_of(f[5]);
            num(f[6], s.haplotype);
            if (s.id != t.tree.snvs.size()) throw InputError(where(source, lineno) + "SSNVs must be listed in id order");
            if (s.origin < 0 || static_cast<std::size_t>(s.origin) >= t.tree.populations.size())
                throw InputError(where(source, lineno) + "unknown origin population");
            t.tree.populations[static_cast<std::size_t>(s.origin)].ssnvs.push_back(s.id);
            t.tree.snvs.push_back(s);
        } else if (kind == "draw") {
            need(6);
            SampleDraw d;
            d.scheme = f[2] == "randomized" ? SamplingScheme::Randomized : SamplingScheme::Localized;
            num(f[3], d.normal_fraction);
            num(f[4], d.normal_cells);
            if (f[5] != ".") {
                for (const auto& item : split(f[5], ',')) {
                    const auto pc = split(item, ':');
                    if (pc.size() != 2) throw InputError(where(source, lineno) + "bad population:cells entry");
                    std::pair<int, std::uint64_t> e;
                    num(pc[0], e.first);
                    num(pc[1], e.second);
                    d.cells.push_back(e);
                }
            }
            t.draws.push_back(std::move(d));
        } else if (kind == "collected") {
            need(6);
            std::size_t row = 0;
            std::size_t id = 0;
            int cnv = 0;
            num(f[1], row);
            num(f[2], id);
            if (row != t.collected.size()) throw InputError(where(source, lineno) + "rows must be listed in order");
            if (id >= t.tree.snvs.size()) throw InputError(where(source, lineno) + "unknown SSNV id");
            t.collected.push_back(id);
            try {
                t.presence.push_back(BinaryProfile::parse(f[3]));
            } catch (const std::invalid_argument& e) {
                throw InputError(where(source, lineno) + e.what());
            }
            num(f[4], cnv);
            t.in_cnv_region.push_back(cnv != 0);
            t.true_vafs.push_back(parse_list<double>(f[5], where(source, lineno)));
        } else {
            throw InputError(where(source, lineno) + "unknown record '" + kind + "'");
        }
    }
    if (t.tree.populations.empty()) throw InputError(source + ": no populations");
    return t;
}

}  // namespace lichee
