#include "dlstream/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlstream/errors.hpp"

namespace dls {

void validate_bound_query(const BoundQuery& q) {
    if (!(q.epsilon > 0.0 && std::isfinite(q.epsilon))) throw InvalidArgument("epsilon must be > 0");
    if (!(q.delta_target > 0.0 && q.delta_target < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
    if (!(q.shattering_exponent > 0.0 && std::isfinite(q.shattering_exponent))) {
        throw InvalidArgument("shattering exponent must be > 0");
    }
}

double log_delta_of_n(double n, double epsilon, double c) {
    return std::numbers::ln2 + c * std::log(n) - 2.0 * n * epsilon * epsilon;
}

double delta_of_n(std::uint64_t n, double epsilon, double c) {
    if (n < 1) throw InvalidArgument("n must be >= 1");
    return std::exp(log_delta_of_n(static_cast<double>(n), epsilon, c));
}

double stationary_point(double epsilon, double c) { return c / (2.0 * epsilon * epsilon); }

SampleSize min_sample_size(const BoundQuery& q) {
    validate_bound_query(q);
    const double eps = q.epsilon;
    const double c = q.shattering_exponent;
    const double log_target = std::log(q.delta_target);
    auto above = [&](std::uint64_t n) { return log_delta_of_n(static_cast<double>(n), eps, c) > log_target; };

    // delta(n) rises up to the stationary point and falls after it, so its
    // supremum over integers sits at floor or ceil of n*.
    const double star = stationary_point(eps, c);
    std::uint64_t lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(star)));
    std::uint64_t peak = lo;
    if (log_delta_of_n(static_cast<double>(lo + 1), eps, c) > log_delta_of_n(static_cast<double>(lo), eps, c)) peak = lo + 1;
    if (!above(peak)) return {1, true};

    // Bracket: above(lo) holds, find hi with !above(hi) by doubling.
    lo = peak;
    std::uint64_t hi = std::max<std::uint64_t>(lo * 2, 2);
    while (above(hi)) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (above(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {hi, false};
}

double generalization_gap(std::uint64_t n, double delta, double c) {
    if (n < 1) throw InvalidArgument("n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
    const double nn = static_cast<double>(n);
    return std::sqrt(4.0 / nn * (std::numbers::ln2 + c * std::log(nn) - std::log(delta)));
}

double gap_constant(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
    return 4.0 * (std::numbers::ln2 - std::log(delta));
}

}  // namespace dls
