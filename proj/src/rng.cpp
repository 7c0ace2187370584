#include "dlstream/rng.hpp"

#include <cmath>

#include "dlstream/errors.hpp"

namespace dls {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = master;
    std::uint64_t h = splitmix64(state);
    for (std::uint64_t part : path) {
        state = h ^ (part + 0x632BE59BD9B4E019ULL);
        h = splitmix64(state);
    }
    return h;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("Rng::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
}

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw InvalidArgument("Rng::integer: empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(below(span));
}

unsigned Rng::poisson(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("Rng::poisson: bad rate");
    unsigned total = 0;
    while (lambda > 0.0) {
        const double chunk = lambda > 30.0 ? 30.0 : lambda;
        lambda -= chunk;
        const double limit = std::exp(-chunk);
        double p = uniform();
        unsigned k = 0;
        while (p > limit) {
            ++k;
            p *= uniform();
        }
        total += k;
    }
    return total;
}

}  // namespace dls
