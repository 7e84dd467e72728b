#include "lichee/bundle.hpp"

#include <stdexcept>

namespace lichee {

using nlohmann::json;

namespace {

json edges_json(const std::vector<BundleEdge>& edges) {
    json out = json::array();
    for (const auto& e : edges) out.push_back({{"parent", e.parent}, {"child", e.child}});
    return out;
}

std::vector<BundleEdge> edges_from(const json& j) {
    std::vector<BundleEdge> out;
    for (const auto& e : j) out.push_back({e.at("parent").get<int>(), e.at("child").get<int>()});
    return out;
}

}  // namespace

int ResultBundle::node_index(int id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

json to_json(const ResultBundle& b) {
    json doc;
    doc["format"] = kBundleFormat;
    doc["version"] = b.version;
    doc["config"] = b.config;
    if (b.timestamp) doc["timestamp"] = *b.timestamp;
    doc["samples"] = {{"names", b.samples.names}, {"normal_index", b.samples.normal_index}};

    json snvs = json::array();
    for (const auto& s : b.snvs) {
        json j = {{"chrom", s.record.chrom}, {"pos", s.record.pos},     {"desc", s.record.desc},
                  {"vaf", s.record.vaf},     {"cp", s.record.is_cp}};
        j["profile"] = s.profile ? json(s.profile->to_string()) : json(nullptr);
        j["node"] = s.node ? json(*s.node) : json(nullptr);
        snvs.push_back(std::move(j));
    }
    doc["snvs"] = std::move(snvs);

    json dropped = json::array();
    for (const auto& d : b.dropped) dropped.push_back({{"snv", d.index}, {"reason", d.reason}});
    doc["dropped"] = std::move(dropped);

    json nodes = json::array();
    for (const auto& n : b.nodes) {
        nodes.push_back({{"id", n.id},
                         {"root", n.root},
                         {"profile", n.profile.to_string()},
                         {"level", n.level},
                         {"robust", n.robust},
                         {"snvs", n.snvs},
                         {"centroid", n.centroid},
                         {"stderr", n.stderr_}});
    }
    doc["network"] = {{"nodes", std::move(nodes)}, {"edges", edges_json(b.network_edges)}};

    json adjustments = json::array();
    for (const auto& r : b.adjustments) adjustments.push_back({{"node", r.id}, {"snvs", r.snvs}});
    doc["search"] = {{"trees_found", b.trees_found},
                     {"trees_valid", b.trees_valid},
                     {"truncated", b.truncated},
                     {"grow_calls", b.grow_calls},
                     {"adjustments", std::move(adjustments)},
                     {"diagnostic", b.diagnostic}};

    json trees = json::array();
    for (const auto& t : b.trees) {
        json decomps = json::array();
        for (const auto& d : t.decompositions) {
            json lineages = json::array();
            for (const auto& l : d.lineages) lineages.push_back({{"path", l.path}, {"prevalence", l.prevalence}});
            json dj = {{"sample", d.sample}, {"lineages", std::move(lineages)}};
            if (d.sample < b.samples.names.size()) dj["sample_name"] = b.samples.names[d.sample];
            decomps.push_back(std::move(dj));
        }
        trees.push_back({{"rank", t.rank},
                         {"local_score", t.local_score},
                         {"qp_objective", t.qp_objective ? json(*t.qp_objective) : json(nullptr)},
                         {"edges", edges_json(t.edges)},
                         {"deviations", t.deviations},
                         {"decompositions", std::move(decomps)}});
    }
    doc["trees"] = std::move(trees);
    return doc;
}

ResultBundle bundle_from_json(const json& doc) {
    try {
        if (doc.at("format").get<std::string>() != kBundleFormat) throw std::invalid_argument("not a result bundle");
        ResultBundle b;
        b.version = doc.at("version").get<int>();
        if (b.version != kBundleVersion) throw std::invalid_argument("unsupported bundle version");
        b.config = doc.at("config");
        if (doc.contains("timestamp")) b.timestamp = doc["timestamp"].get<std::string>();
        b.samples.names = doc.at("samples").at("names").get<std::vector<std::string>>();
        b.samples.normal_index = doc.at("samples").at("normal_index").get<std::size_t>();

        for (const auto& j : doc.at("snvs")) {
            BundleSnv s;
            s.record.chrom = j.at("chrom").get<std::string>();
            s.record.pos = j.at("pos").get<std::int64_t>();
            s.record.desc = j.at("desc").get<std::string>();
            s.record.vaf = j.at("vaf").get<std::vector<double>>();
            s.record.is_cp = j.at("cp").get<bool>();
            if (!j.at("profile").is_null()) s.profile = BinaryProfile::parse(j["profile"].get<std::string>());
            if (!j.at("node").is_null()) s.node = j["node"].get<int>();
            b.snvs.push_back(std::move(s));
        }
        for (const auto& j : doc.at("dropped")) {
            b.dropped.push_back({j.at("snv").get<std::size_t>(), j.at("reason").get<std::string>()});
        }
        const auto& network = doc.at("network");
        for (const auto& j : network.at("nodes")) {
            BundleNode n;
            n.id = j.at("id").get<int>();
            n.root = j.at("root").get<bool>();
            n.profile = BinaryProfile::parse(j.at("profile").get<std::string>());
            n.level = j.at("level").get<std::size_t>();
            n.robust = j.at("robust").get<bool>();
            n.snvs = j.at("snvs").get<std::vector<std::size_t>>();
            n.centroid = j.at("centroid").get<std::vector<double>>();
            n.stderr_ = j.at("stderr").get<std::vector<double>>();
            b.nodes.push_back(std::move(n));
        }
        b.network_edges = edges_from(network.at("edges"));

        const auto& search = doc.at("search");
        b.trees_found = search.at("trees_found").get<std::size_t>();
        b.trees_valid = search.at("trees_valid").get<std::size_t>();
        b.truncated = search.at("truncated").get<bool>();
        b.grow_calls = search.at("grow_calls").get<std::uint64_t>();
        for (const auto& j : search.at("adjustments")) {
            b.adjustments.push_back({j.at("node").get<int>(), j.at("snvs").get<std::vector<std::size_t>>()});
        }
        b.diagnostic = search.at("diagnostic").get<std::string>();

        for (const auto& j : doc.at("trees")) {
            BundleTree t;
            t.rank = j.at("rank").get<int>();
            t.local_score = j.at("local_score").get<double>();
            if (!j.at("qp_objective").is_null()) t.qp_objective = j["qp_objective"].get<double>();
            t.edges = edges_from(j.at("edges"));
            t.deviations = j.at("deviations").get<std::vector<std::vector<double>>>();
            for (const auto& dj : j.at("decompositions")) {
                BundleDecomposition d;
                d.sample = dj.at("sample").get<std::size_t>();
                for (const auto& lj : dj.at("lineages")) {
                    d.lineages.push_back({lj.at("path").get<std::vector<int>>(), lj.at("prevalence").get<double>()});
                }
                t.decompositions.push_back(std::move(d));
            }
            b.trees.push_back(std::move(t));
        }
        return b;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed bundle: ") + e.what());
    }
}

std::string dump_bundle(const ResultBundle& bundle) { return to_json(bundle).dump(2) + "\n"; }

ResultBundle parse_bundle(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bundle is not valid JSON: ") + e.what());
    }
    return bundle_from_json(doc);
}

}  // namespace lichee
