#include "lichee/random.hpp"

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace lichee {

double uniform01(Engine& rng) {
    return boost::random::uniform_01<double>{}(rng);
}

std::uint64_t uniform_index(Engine& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    return boost::random::uniform_int_distribution<std::uint64_t>{0, n - 1}(rng);
}

bool bernoulli(Engine& rng, double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01(rng) < p;
}

std::uint64_t binomial(Engine& rng, std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    boost::random::binomial_distribution<std::int64_t, double> dist(static_cast<std::int64_t>(n), p);
    return static_cast<std::uint64_t>(dist(rng));
}

}  // namespace lichee
