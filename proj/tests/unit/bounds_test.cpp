#include <gtest/gtest.h>

#include <cmath>

#include "dlstream/bounds.hpp"
#include "dlstream/errors.hpp"

using namespace dls;

namespace {

long double direct_delta(std::uint64_t n, long double eps, long double c) {
    const long double nn = static_cast<long double>(n);
    return 2.0L * std::pow(nn, c) * std::exp(-2.0L * nn * eps * eps);
}

// Linear scan from the peak: first n whose delta is at or below the target.
std::uint64_t scan_min_n(double eps, double target, double c) {
    auto n = static_cast<std::uint64_t>(std::ceil(c / (2 * eps * eps)));
    while (direct_delta(n, eps, c) > target) ++n;
    return n;
}

}  // namespace

TEST(Bounds, LogSpaceMatchesDirectEvaluation) {
    for (double c : {1.0, 2.0, 2.5}) {
        for (std::uint64_t n : {1ull, 2ull, 10ull, 400ull, 3908ull, 20000ull}) {
            const long double direct = direct_delta(n, 0.05, c);
            EXPECT_NEAR(delta_of_n(n, 0.05, c) / static_cast<double>(direct), 1.0, 1e-12) << n;
        }
    }
    EXPECT_NEAR(delta_of_n(1, 0.3, 2.0), 2 * std::exp(-2 * 0.09), 1e-15);
    // Far past overflow of n^c alone the log form still works.
    EXPECT_TRUE(std::isfinite(log_delta_of_n(1e300, 0.05, 3.0)));
}

TEST(Bounds, MonotoneTailPastStationaryPoint) {
    EXPECT_DOUBLE_EQ(stationary_point(0.05, 2.0), 400.0);
    for (std::uint64_t n = 401; n < 20000; ++n) ASSERT_LT(delta_of_n(n + 1, 0.05, 2.0), delta_of_n(n, 0.05, 2.0));
}

TEST(Bounds, MinimalSampleSizeWorkedExample) {
    const auto r = min_sample_size({0.05, 0.1, 2.0});
    EXPECT_EQ(r.n, 3908u);
    EXPECT_FALSE(r.trivially_satisfied);
    EXPECT_LE(delta_of_n(3908, 0.05, 2.0), 0.1);
    EXPECT_GT(delta_of_n(3907, 0.05, 2.0), 0.1);
    EXPECT_EQ(r.n, scan_min_n(0.05, 0.1, 2.0));
}

TEST(Bounds, MinimalSampleSizeAgreesWithScan) {
    const auto r = min_sample_size({0.05, 0.05, 2.0});
    EXPECT_EQ(r.n, scan_min_n(0.05, 0.05, 2.0));
    EXPECT_NEAR(static_cast<double>(r.n), 4060.0, 30.0);
    for (double eps : {0.02, 0.05, 0.1, 0.2}) {
        for (double delta : {0.01, 0.05, 0.2}) {
            for (double c : {1.0, 2.0, 3.5}) {
                const auto q = min_sample_size({eps, delta, c});
                if (q.trivially_satisfied) continue;
                EXPECT_LE(delta_of_n(q.n, eps, c), delta);
                EXPECT_GT(delta_of_n(q.n - 1, eps, c), delta);
                EXPECT_EQ(q.n, scan_min_n(eps, delta, c)) << eps << " " << delta << " " << c;
            }
        }
    }
}

TEST(Bounds, LooserToleranceNeverNeedsMoreData) {
    for (double eps = 0.01; eps < 0.2; eps += 0.01) {
        EXPECT_GE(min_sample_size({eps, 0.05, 2.0}).n, min_sample_size({2 * eps, 0.05, 2.0}).n);
    }
}

TEST(Bounds, UnreachableTargetIsFlagged) {
    // sup over n >= 1 is delta(1) = 2 exp(-8), below the target.
    EXPECT_LT(delta_of_n(1, 2.0, 0.1), 0.5);
    const auto r = min_sample_size({2.0, 0.5, 0.1});
    EXPECT_EQ(r.n, 1u);
    EXPECT_TRUE(r.trivially_satisfied);
    EXPECT_THROW(min_sample_size({0.0, 0.1, 2.0}), InvalidArgument);
    EXPECT_THROW(min_sample_size({0.05, 1.0, 2.0}), InvalidArgument);
    EXPECT_THROW(min_sample_size({0.05, 0.1, 0.0}), InvalidArgument);
}

TEST(Bounds, GapConstantAndValues) {
    EXPECT_NEAR(gap_constant(0.05), 14.7555, 0.0005);
    EXPECT_NEAR(gap_constant(0.05), 4 * (std::log(2.0) - std::log(0.05)), 1e-12);
    const double g = generalization_gap(10000, 0.05, 2.0);
    EXPECT_NEAR(g, std::sqrt(8 * std::log(1e4) / 1e4 + 14.7555 / 1e4), 1e-6);
    EXPECT_NEAR(g, 0.0940, 5e-5);
    EXPECT_LT(generalization_gap(100000000, 0.05, 2.0), generalization_gap(10000, 0.05, 2.0));
    EXPECT_LT(generalization_gap(10000, 0.05, 2.0), generalization_gap(100, 0.05, 2.0));
    for (std::uint64_t n = 3; n < 1000000; n += 997) {
        ASSERT_LT(generalization_gap(n + 1, 0.05, 2.0), generalization_gap(n, 0.05, 2.0));
    }
}
