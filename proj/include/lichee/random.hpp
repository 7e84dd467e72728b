#pragma once

#include <cstdint>
#include <string_view>

#include <boost/random/mersenne_twister.hpp>

namespace lichee {

/// 64-bit Mersenne Twister with Boost.Random distributions; both are
/// specified algorithms, so draws are identical across platforms.
using Engine = boost::random::mt19937_64;

/// SplitMix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// FNV-1a over a string key, for streams keyed by text (e.g. a profile).
constexpr std::uint64_t hash_key(std::string_view key) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : key) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

double uniform01(Engine& rng);
std::uint64_t uniform_index(Engine& rng, std::uint64_t n);  // in [0, n)
bool bernoulli(Engine& rng, double p);
std::uint64_t binomial(Engine& rng, std::uint64_t n, double p);

}  // namespace lichee
