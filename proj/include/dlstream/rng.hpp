#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace dls {

/// Identifier written into run metadata so results can be tied to the exact
/// generator and derivation scheme that produced them.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64-derive/v1";

/// One SplitMix64 step; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

/// Hashes a master seed together with a path of indices (stream, p_u index,
/// run, ...) into an independent sub-seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Seedable 64-bit generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; all distributions are implemented here
/// because the std:: distributions are not portable across library vendors.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n) by rejection; n must be > 0.
    std::uint64_t below(std::uint64_t n);

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi);

    bool bernoulli(double p) { return uniform() < p; }

    /// Poisson draw (multiplication method, rate split in chunks of at most 30).
    unsigned poisson(double lambda);

  private:
    std::mt19937_64 engine_;
};

}  // namespace dls
