#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lichee {

/// Ordered sample identifiers. The control sample sits at `normal_index`.
struct SampleSet {
    std::vector<std::string> names;
    std::size_t normal_index = 0;

    std::size_t size() const { return names.size(); }

    /// Throws std::invalid_argument on duplicate names, fewer than two
    /// samples or an out-of-range normal index.
    void validate() const;

    bool operator==(const SampleSet&) const = default;
};

/// One somatic SNV with its per-sample allele fractions.
struct SnvRecord {
    std::string chrom;
    std::int64_t pos = 0;
    std::string desc;
    std::vector<double> vaf;
    bool is_cp = false;

    bool operator==(const SnvRecord&) const = default;
};

/// Presence bit-string over samples, in input column order.
class BinaryProfile {
public:
    BinaryProfile() = default;
    explicit BinaryProfile(std::size_t size, bool value = false) : bits_(size, value ? 1 : 0) {}
    explicit BinaryProfile(std::vector<std::uint8_t> bits);

    /// Parses a string of '0'/'1' characters.
    static BinaryProfile parse(std::string_view text);
    static BinaryProfile all_ones(std::size_t size) { return BinaryProfile(size, true); }

    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }

    bool all_zero() const;
    bool all_one() const;
    std::string to_string() const;

    auto operator<=>(const BinaryProfile&) const = default;
    bool operator==(const BinaryProfile&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

enum class Mark : char { Absent = '0', Present = '1', Unknown = '*' };

/// Presence marks with a greyzone value between the two calling thresholds.
class TernaryProfile {
public:
    TernaryProfile() = default;
    explicit TernaryProfile(std::vector<Mark> marks) : marks_(std::move(marks)) {}

    static TernaryProfile parse(std::string_view text);

    std::size_t size() const { return marks_.size(); }
    Mark operator[](std::size_t i) const { return marks_[i]; }
    void set(std::size_t i, Mark m) { marks_[i] = m; }

    std::size_t unknown_count() const;
    bool resolved() const { return unknown_count() == 0; }

    /// Binary profile with every Present mark set; only meaningful when resolved.
    BinaryProfile to_binary() const;

    /// Every binary profile obtained by substituting each '*' by 0 or 1,
    /// in ascending lexicographic order.
    std::vector<BinaryProfile> substitutions() const;

    std::string to_string() const;

    bool operator==(const TernaryProfile&) const = default;

private:
    std::vector<Mark> marks_;
};

/// A cluster of SNVs sharing a profile; centroid and standard error are
/// listed only over the profile's present samples.
struct Cluster {
    int id = 0;
    BinaryProfile profile;
    std::vector<std::size_t> members;  // indices into the SNV table
    std::vector<double> centroid;
    std::vector<double> standard_error;
    bool robust = true;

    /// Expands the centroid to one entry per sample, 0 where absent.
    std::vector<double> full_centroid() const;
    std::vector<double> full_standard_error() const;

    /// Throws std::invalid_argument if the invariants do not hold.
    void validate() const;

    bool operator==(const Cluster&) const = default;
};

std::size_t hamming_weight(const BinaryProfile& p);

/// True iff every present sample of `child` is present in `parent`.
bool covers(const BinaryProfile& parent, const BinaryProfile& child);

/// True iff `g` agrees with `t` at every non-'*' position.
bool ternary_compatible(const TernaryProfile& t, const BinaryProfile& g);

/// Recomputes centroid and standard error (sd / sqrt(n)) of `cluster` from
/// the VAFs of its members.
void recompute_statistics(Cluster& cluster, const std::vector<SnvRecord>& snvs);

}  // namespace lichee
