#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lichee/bundle.hpp"

namespace lichee {

/// Viewer state stored alongside a bundle. A session file is the bundle
/// document plus a top-level "session" object, so any session file is
/// also a readable bundle.
struct ViewState {
    std::size_t active_tree = 0;
    std::vector<int> hidden_nodes;                 // node ids
    std::vector<std::pair<int, int>> collapsed;    // merged node-id pairs
    std::string selection_kind = "none";           // none | node | sample
    int selection = -1;                            // node id or sample index

    bool operator==(const ViewState&) const = default;
};

struct Session {
    ResultBundle bundle;
    ViewState state;

    bool operator==(const Session&) const = default;
};

/// Empty when the state is consistent with the bundle, otherwise the reason.
std::string validate_view_state(const ResultBundle& bundle, const ViewState& state);

nlohmann::json session_to_json(const Session& session);
/// Reads a session file; a plain bundle yields the default view state.
Session session_from_json(const nlohmann::json& doc);
std::string dump_session(const Session& session);
Session parse_session(const std::string& text);

}  // namespace lichee
