#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lichee/core.hpp"

namespace lichee {

struct CallingConfig {
    double t_present = 0.005;
    double t_absent = 0.005;
    int min_robust_peers = 1;
    /// Fraction of the largest attainable similarity (the sample count)
    /// a greyzone SNV must reach to join a robust group.
    double sim_threshold_frac = 0.7;
    std::size_t max_star_positions = 10;
    /// Sample forced absent in every somatic profile.
    std::optional<std::size_t> normal_index = 0;

    void validate() const;
};

struct SnvGroup {
    BinaryProfile profile;
    std::vector<std::size_t> members;
    bool robust = false;

    bool operator==(const SnvGroup&) const = default;
};

struct UnresolvedSnv {
    std::size_t index = 0;
    TernaryProfile profile;
};

struct DroppedSnv {
    std::size_t index = 0;
    std::string reason;

    bool operator==(const DroppedSnv&) const = default;
};

struct RobustGrouping {
    std::vector<SnvGroup> groups;
    std::vector<UnresolvedSnv> unresolved;
    std::vector<DroppedSnv> dropped;
};

struct GreyzoneAssignment {
    std::vector<SnvGroup> groups;
    std::vector<UnresolvedSnv> residual;
};

struct CoverResult {
    std::vector<SnvGroup> groups;
    std::vector<DroppedSnv> dropped;
};

struct GroupingResult {
    std::vector<SnvGroup> groups;
    std::vector<DroppedSnv> dropped;
};

/// Per-sample call: 1 at or above t_present, 0 at or below t_absent, '*'
/// in between. The normal sample, when configured, is always 0.
TernaryProfile mark_presence(const SnvRecord& snv, const CallingConfig& cfg);

/// Fully resolved SNVs whose profile is shared by at least
/// `min_robust_peers` other resolved SNVs form robust groups. Resolved
/// all-absent SNVs are dropped; everything else is returned unresolved.
RobustGrouping form_robust_groups(const std::vector<SnvRecord>& snvs, const CallingConfig& cfg);

/// Sum over samples of min/max of the two VAFs. A sample where both are
/// zero contributes 1.
double similarity(const SnvRecord& m, const SnvRecord& n);

/// Moves each unresolved SNV into the compatible robust group holding its
/// most similar robust SNV, when that similarity clears the threshold.
GreyzoneAssignment assign_greyzone(const std::vector<UnresolvedSnv>& unresolved,
                                   const std::vector<SnvGroup>& groups,
                                   const std::vector<SnvRecord>& snvs,
                                   const CallingConfig& cfg);

/// Greedy set cover of the residual SNVs by candidate target profiles;
/// leftovers are rounded mark-by-mark toward the nearer threshold.
CoverResult cover_residual(const std::vector<UnresolvedSnv>& residual,
                           const std::vector<SnvRecord>& snvs,
                           const CallingConfig& cfg);

/// The full calling stage: robust groups, greyzone assignment, cover.
/// Groups are returned sorted by (profile, robust first).
GroupingResult group_snvs(const std::vector<SnvRecord>& snvs, const CallingConfig& cfg);

}  // namespace lichee
