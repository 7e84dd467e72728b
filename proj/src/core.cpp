#include "lichee/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace lichee {

void SampleSet::validate() const {
    if (names.size() < 2) {
        throw std::invalid_argument("at least two samples are required");
    }
    if (normal_index >= names.size()) {
        throw std::invalid_argument("normal sample index out of range");
    }
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second) {
            throw std::invalid_argument("duplicate sample name: " + n);
        }
    }
}

BinaryProfile::BinaryProfile(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) {
        b = b ? 1 : 0;
    }
}

BinaryProfile BinaryProfile::parse(std::string_view text) {
    BinaryProfile p(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1') {
            p.bits_[i] = 1;
        } else if (text[i] != '0') {
            throw std::invalid_argument("invalid binary profile: " + std::string(text));
        }
    }
    return p;
}

bool BinaryProfile::all_zero() const {
    return std::none_of(bits_.begin(), bits_.end(), [](auto b) { return b != 0; });
}

bool BinaryProfile::all_one() const {
    return std::all_of(bits_.begin(), bits_.end(), [](auto b) { return b != 0; });
}

std::string BinaryProfile::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) s[i] = '1';
    }
    return s;
}

TernaryProfile TernaryProfile::parse(std::string_view text) {
    std::vector<Mark> marks;
    marks.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '0': marks.push_back(Mark::Absent); break;
            case '1': marks.push_back(Mark::Present); break;
            case '*': marks.push_back(Mark::Unknown); break;
            default: throw std::invalid_argument("invalid ternary profile: " + std::string(text));
        }
    }
    return TernaryProfile(std::move(marks));
}

std::size_t TernaryProfile::unknown_count() const {
    return static_cast<std::size_t>(std::count(marks_.begin(), marks_.end(), Mark::Unknown));
}

BinaryProfile TernaryProfile::to_binary() const {
    BinaryProfile p(marks_.size());
    for (std::size_t i = 0; i < marks_.size(); ++i) {
        p.set(i, marks_[i] == Mark::Present);
    }
    return p;
}

std::vector<BinaryProfile> TernaryProfile::substitutions() const {
    std::vector<std::size_t> stars;
    for (std::size_t i = 0; i < marks_.size(); ++i) {
        if (marks_[i] == Mark::Unknown) stars.push_back(i);
    }
    if (stars.size() >= 63) {
        throw std::length_error("too many unknown marks to enumerate");
    }
    const BinaryProfile base = to_binary();
    const std::uint64_t count = std::uint64_t{1} << stars.size();
    std::vector<BinaryProfile> out;
    out.reserve(count);
    // The first star is the most significant position, so counting upwards
    // yields lexicographic order.
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        BinaryProfile p = base;
        for (std::size_t k = 0; k < stars.size(); ++k) {
            const std::size_t shift = stars.size() - 1 - k;
            p.set(stars[k], ((mask >> shift) & 1U) != 0);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::string TernaryProfile::to_string() const {
    std::string s;
    s.reserve(marks_.size());
    for (Mark m : marks_) s.push_back(static_cast<char>(m));
    return s;
}

std::vector<double> Cluster::full_centroid() const {
    std::vector<double> out(profile.size(), 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile[i]) out[i] = centroid.at(k++);
    }
    return out;
}

std::vector<double> Cluster::full_standard_error() const {
    std::vector<double> out(profile.size(), 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile[i]) out[i] = standard_error.at(k++);
    }
    return out;
}

void Cluster::validate() const {
    if (members.empty()) {
        throw std::invalid_argument("cluster " + std::to_string(id) + " has no members");
    }
    const std::size_t w = hamming_weight(profile);
    if (centroid.size() != w || standard_error.size() != w) {
        throw std::invalid_argument("cluster " + std::to_string(id) +
                                    ": centroid arity does not match profile weight");
    }
    for (double c : centroid) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw std::invalid_argument("cluster " + std::to_string(id) + ": centroid outside [0,1]");
        }
    }
}

std::size_t hamming_weight(const BinaryProfile& p) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < p.size(); ++i) w += p[i] ? 1 : 0;
    return w;
}

bool covers(const BinaryProfile& parent, const BinaryProfile& child) {
    if (parent.size() != child.size()) {
        throw std::invalid_argument("profile length mismatch");
    }
    for (std::size_t i = 0; i < parent.size(); ++i) {
        if (child[i] && !parent[i]) return false;
    }
    return true;
}

bool ternary_compatible(const TernaryProfile& t, const BinaryProfile& g) {
    if (t.size() != g.size()) {
        throw std::invalid_argument("profile length mismatch");
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Mark m = t[i];
        if (m == Mark::Present && !g[i]) return false;
        if (m == Mark::Absent && g[i]) return false;
    }
    return true;
}

void recompute_statistics(Cluster& cluster, const std::vector<SnvRecord>& snvs) {
    const std::size_t n = cluster.members.size();
    cluster.centroid.clear();
    cluster.standard_error.clear();
    for (std::size_t i = 0; i < cluster.profile.size(); ++i) {
        if (!cluster.profile[i]) continue;
        double sum = 0.0;
        for (auto m : cluster.members) sum += snvs.at(m).vaf.at(i);
        const double mean = n ? sum / static_cast<double>(n) : 0.0;
        double ss = 0.0;
        for (auto m : cluster.members) {
            const double d = snvs[m].vaf[i] - mean;
            ss += d * d;
        }
        const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        cluster.centroid.push_back(mean);
        cluster.standard_error.push_back(n ? sd / std::sqrt(static_cast<double>(n)) : 0.0);
    }
}

}  // namespace lichee
