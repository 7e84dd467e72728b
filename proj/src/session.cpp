#include "lichee/session.hpp"

#include <algorithm>
#include <stdexcept>

namespace lichee {

using nlohmann::json;

std::string validate_view_state(const ResultBundle& b, const ViewState& s) {
    if (!b.trees.empty() && s.active_tree >= b.trees.size()) return "active tree index out of range";
    if (b.trees.empty() && s.active_tree != 0) return "bundle has no trees";
    for (int id : s.hidden_nodes) {
        const int i = b.node_index(id);
        if (i < 0) return "hidden node " + std::to_string(id) + " does not exist";
        if (b.nodes[static_cast<std::size_t>(i)].root) return "the germline root cannot be hidden";
    }
    for (const auto& [x, y] : s.collapsed) {
        const int i = b.node_index(x);
        const int j = b.node_index(y);
        if (i < 0 || j < 0) return "collapsed pair names an unknown node";
        if (x == y) return "a node cannot be collapsed with itself";
        if (b.nodes[static_cast<std::size_t>(i)].profile != b.nodes[static_cast<std::size_t>(j)].profile)
            return "only nodes with the same profile can be collapsed";
    }
    if (s.selection_kind == "none") {
        if (s.selection != -1) return "selection index set without a selection kind";
    } else if (s.selection_kind == "node") {
        if (b.node_index(s.selection) < 0) return "selected node does not exist";
    } else if (s.selection_kind == "sample") {
        if (s.selection < 0 || static_cast<std::size_t>(s.selection) >= b.samples.size())
            return "selected sample does not exist";
    } else {
        return "unknown selection kind '" + s.selection_kind + "'";
    }
    return {};
}

json session_to_json(const Session& session) {
    json doc = to_json(session.bundle);
    const auto& s = session.state;
    json collapsed = json::array();
    for (const auto& [x, y] : s.collapsed) collapsed.push_back({x, y});
    doc["session"] = {{"active_tree", s.active_tree},
                      {"hidden_nodes", s.hidden_nodes},
                      {"collapsed", std::move(collapsed)},
                      {"selection", {{"kind", s.selection_kind}, {"index", s.selection}}}};
    return doc;
}

Session session_from_json(const json& doc) {
    Session out;
    out.bundle = bundle_from_json(doc);
    if (doc.contains("session")) {
        try {
            const auto& j = doc["session"];
            out.state.active_tree = j.at("active_tree").get<std::size_t>();
            out.state.hidden_nodes = j.at("hidden_nodes").get<std::vector<int>>();
            for (const auto& p : j.at("collapsed")) {
                if (p.size() != 2) throw std::invalid_argument("collapsed entries must be node-id pairs");
                out.state.collapsed.emplace_back(p[0].get<int>(), p[1].get<int>());
            }
            out.state.selection_kind = j.at("selection").at("kind").get<std::string>();
            out.state.selection = j.at("selection").at("index").get<int>();
        } catch (const json::exception& e) {
            throw std::invalid_argument(std::string("malformed session: ") + e.what());
        }
    }
    const std::string problem = validate_view_state(out.bundle, out.state);
    if (!problem.empty()) throw std::invalid_argument("invalid session: " + problem);
    return out;
}

std::string dump_session(const Session& session) { return session_to_json(session).dump(2) + "\n"; }

Session parse_session(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("session is not valid JSON: ") + e.what());
    }
    return session_from_json(doc);
}

}  // namespace lichee
