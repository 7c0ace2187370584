#pragma once

// Uniform-convergence calculators with a polynomial shattering coefficient
// N(F, 2n) = n^c. Natural logarithms throughout.

#include <cstdint>

namespace dls {

struct BoundQuery {
    double epsilon = 0.05;
    double delta_target = 0.1;
    double shattering_exponent = 2.0;
};

void validate_bound_query(const BoundQuery& q);

/// log(2 n^c exp(-2 n eps^2)).
double log_delta_of_n(double n, double epsilon, double c);

/// 2 n^c exp(-2 n eps^2), evaluated in log space.
double delta_of_n(std::uint64_t n, double epsilon, double c);

/// n at which delta_of_n peaks: c / (2 eps^2).
double stationary_point(double epsilon, double c);

struct SampleSize {
    std::uint64_t n = 1;
    /// True when the target is at or above sup delta(n), so any n works.
    bool trivially_satisfied = false;
};

/// Smallest n past the stationary point with delta(n) <= target < delta(n - 1).
SampleSize min_sample_size(const BoundQuery& q);

/// sqrt( (4/n) (ln 2 + c ln n - ln delta) ).
double generalization_gap(std::uint64_t n, double delta, double c);

/// The n-independent constant 4 (ln 2 - ln delta) of the gap's squared form.
double gap_constant(double delta);

}  // namespace dls
