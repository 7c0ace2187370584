#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dlstream/errors.hpp"
#include "dlstream/generators.hpp"
#include "dlstream/replay.hpp"

using namespace dls;

namespace {

AgrawalRecord person(int age, double salary = 60000, int elevel = 0) {
    AgrawalRecord r;
    r.age = age;
    r.salary = salary;
    r.elevel = elevel;
    return r;
}

DriftSchedule paper_schedule() {
    return DriftSchedule{{{0, AgrawalConfig{1, 0}},
                          {25000, AgrawalConfig{2, 0}},
                          {50000, AgrawalConfig{3, 0}},
                          {75000, AgrawalConfig{4, 0}}},
                         100000};
}

// Recovers the raw record from a generated (unperturbed) feature vector.
AgrawalRecord record_of(const FeatureVector& x) {
    AgrawalRecord r;
    r.salary = x.numeric[0];
    r.commission = x.numeric[1];
    r.age = static_cast<int>(x.numeric[2]);
    r.hvalue = x.numeric[3];
    r.hyears = static_cast<int>(x.numeric[4]);
    r.loan = x.numeric[5];
    r.elevel = static_cast<int>(x.nominal[0]);
    r.car = static_cast<int>(x.nominal[1]) + 1;
    r.zipcode = static_cast<int>(x.nominal[2]);
    return r;
}

}  // namespace

TEST(Agrawal, FunctionOneExamples) {
    EXPECT_EQ(agrawal_classify(1, person(35)), 0u);
    EXPECT_EQ(agrawal_classify(1, person(50)), 1u);
    EXPECT_EQ(agrawal_classify(1, person(60)), 0u);
    EXPECT_EQ(agrawal_classify(1, person(40)), 1u);
}

TEST(Agrawal, BandedFunctions) {
    EXPECT_EQ(agrawal_classify(2, person(30, 60000)), 0u);
    EXPECT_EQ(agrawal_classify(2, person(30, 120000)), 1u);
    EXPECT_EQ(agrawal_classify(2, person(45, 100000)), 0u);
    EXPECT_EQ(agrawal_classify(2, person(70, 80000)), 1u);
    EXPECT_EQ(agrawal_classify(3, person(30, 0, 1)), 0u);
    EXPECT_EQ(agrawal_classify(3, person(30, 0, 2)), 1u);
    EXPECT_EQ(agrawal_classify(3, person(65, 0, 4)), 0u);
    EXPECT_EQ(agrawal_classify(4, person(30, 30000, 0)), 0u);
    EXPECT_EQ(agrawal_classify(4, person(30, 30000, 3)), 1u);
    EXPECT_EQ(agrawal_classify(4, person(50, 110000, 0)), 0u);
    EXPECT_THROW(agrawal_classify(5, person(30)), InvalidArgument);
}

TEST(Agrawal, AttributeDomainsAndLabelConsistency) {
    AgrawalGenerator g(AgrawalConfig{2, 0.0}, 17);
    for (int i = 0; i < 20000; ++i) {
        const auto inst = g.next();
        const auto& x = inst.x;
        ASSERT_EQ(x.numeric.size(), 6u);
        ASSERT_EQ(x.nominal.size(), 3u);
        EXPECT_GE(x.numeric[0], 20000.0);
        EXPECT_LT(x.numeric[0], 150000.0);
        if (x.numeric[0] >= 75000.0) {
            EXPECT_EQ(x.numeric[1], 0.0);
        } else {
            EXPECT_GE(x.numeric[1], 10000.0);
            EXPECT_LT(x.numeric[1], 75000.0);
        }
        EXPECT_GE(x.numeric[2], 20.0);
        EXPECT_LE(x.numeric[2], 79.0);
        EXPECT_EQ(x.numeric[2], std::floor(x.numeric[2]));
        EXPECT_LT(x.nominal[0], 5u);
        EXPECT_LT(x.nominal[1], 20u);
        EXPECT_LT(x.nominal[2], 9u);
        const double zip_scale = (9.0 - x.nominal[2]) * 100000.0;
        EXPECT_GE(x.numeric[3], 0.5 * zip_scale);
        EXPECT_LT(x.numeric[3], 1.5 * zip_scale);
        EXPECT_GE(x.numeric[4], 1.0);
        EXPECT_LE(x.numeric[4], 30.0);
        EXPECT_GE(x.numeric[5], 0.0);
        EXPECT_LT(x.numeric[5], 500000.0);
        EXPECT_EQ(inst.y, agrawal_classify(2, record_of(x)));
    }
}

TEST(Agrawal, FunctionOneClassBalance) {
    AgrawalGenerator g(AgrawalConfig{1, 0.0}, 2024);
    const int n = 100000;
    int a = 0;
    for (int i = 0; i < n; ++i) a += g.next().y == 0;
    EXPECT_NEAR(static_cast<double>(a) / n, 2.0 / 3.0, 0.01);
}

TEST(Agrawal, PerturbationKeepsDomainsAndShiftsValues) {
    AgrawalGenerator clean(AgrawalConfig{1, 0.0}, 5);
    AgrawalGenerator noisy(AgrawalConfig{1, 0.2}, 5);
    int moved = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto x = noisy.next().x;
        EXPECT_GE(x.numeric[0], 20000.0);
        EXPECT_LE(x.numeric[0], 150000.0);
        EXPECT_GE(x.numeric[2], 20.0);
        EXPECT_LE(x.numeric[2], 79.0);
        moved += x.numeric[5] != clean.next().x.numeric[5];
    }
    EXPECT_GT(moved, 1000);
    EXPECT_THROW(AgrawalGenerator(AgrawalConfig{1, 1.0}, 1), InvalidArgument);
}

TEST(Hyperplane, BoundaryConvention) {
    // Equal weights, the centroid lies exactly on the plane: class 1 by the >= rule.
    const double w = 0.25;
    double dot = 0.0, total = 0.0;
    for (int i = 0; i < 4; ++i) {
        dot += w * 0.5;
        total += w;
    }
    EXPECT_TRUE(dot >= 0.5 * total);
}

TEST(Hyperplane, StationaryNoiselessLabelsAreALinearRule) {
    HyperplaneGenerator g(HyperplaneConfig{5, 0.0, 0.0}, 3);
    const auto w = g.weights();
    double total = 0.0;
    for (double v : w) total += v;
    for (int i = 0; i < 5000; ++i) {
        const auto inst = g.next();
        double dot = 0.0;
        for (std::size_t d = 0; d < 5; ++d) dot += w[d] * inst.x.numeric[d];
        EXPECT_EQ(inst.y, dot >= 0.5 * total ? 1u : 0u);
    }
    EXPECT_EQ(g.weights(), w);
}

TEST(Hyperplane, NoiseRateIsBinomial) {
    HyperplaneGenerator g(HyperplaneConfig{10, 0.0, 0.1}, 8);
    const auto w = g.weights();
    double total = 0.0;
    for (double v : w) total += v;
    const int n = 50000;
    int flipped = 0;
    for (int i = 0; i < n; ++i) {
        const auto inst = g.next();
        double dot = 0.0;
        for (std::size_t d = 0; d < 10; ++d) dot += w[d] * inst.x.numeric[d];
        flipped += inst.y != (dot >= 0.5 * total ? 1u : 0u);
    }
    EXPECT_NEAR(static_cast<double>(flipped) / n, 0.1, 3.0 * std::sqrt(0.1 * 0.9 / n));
}

TEST(Hyperplane, WeightsDriftWithMagnitude) {
    HyperplaneGenerator g(HyperplaneConfig{4, 0.01, 0.0}, 8);
    const auto w0 = g.weights();
    g.next();
    for (std::size_t d = 0; d < 4; ++d) EXPECT_NEAR(std::abs(g.weights()[d] - w0[d]), 0.01, 1e-15);
}

TEST(Generate, SingleSegmentLayout) {
    const auto s = generate(DriftSchedule{{{0, AgrawalConfig{}}}, 10}, DelayPolicy::fixed(0), 1);
    ASSERT_EQ(s.events.size(), 20u);
    for (std::size_t k = 0; k < 10; ++k) {
        EXPECT_EQ(s.events[2 * k].kind, EventKind::Instance);
        EXPECT_EQ(s.events[2 * k].time, k);
        EXPECT_EQ(s.events[2 * k + 1].kind, EventKind::Label);
        EXPECT_EQ(s.events[2 * k + 1].id, k);
        EXPECT_EQ(s.events[2 * k + 1].time, k);
    }
    EXPECT_NO_THROW(validate_section(s));
}

TEST(Generate, PaperScheduleSegmentBoundaries) {
    const auto s = generate(paper_schedule(), DelayPolicy::immediate(), 11);
    EXPECT_NO_THROW(validate_section(s));
    std::vector<const StreamEvent*> inst(100000, nullptr);
    std::vector<ClassLabel> label(100000, 0);
    for (const auto& e : s.events) {
        if (e.is_instance()) {
            inst[e.id] = &e;
        } else {
            label[e.id] = e.class_label();
        }
    }
    const int fn_of[4] = {1, 2, 3, 4};
    for (std::uint64_t k = 0; k < 100000; ++k) {
        const int fn = fn_of[k / 25000];
        ASSERT_EQ(label[k], agrawal_classify(fn, record_of(inst[k]->features()))) << k;
    }
    // Each boundary: the first instance of a segment follows the new concept.
    for (std::uint64_t b : {25000u, 50000u, 75000u}) {
        EXPECT_EQ(label[b], agrawal_classify(fn_of[b / 25000], record_of(inst[b]->features())));
        EXPECT_EQ(label[b - 1], agrawal_classify(fn_of[(b - 1) / 25000], record_of(inst[b - 1]->features())));
    }
}

TEST(Generate, DeterministicReplayBytes) {
    auto bytes = [](std::uint64_t seed) {
        std::ostringstream out;
        write_replay(out, generate(paper_schedule(), DelayPolicy::fixed(10000), seed));
        return out.str();
    };
    const auto a = bytes(3);
    EXPECT_EQ(a, bytes(3));
    EXPECT_NE(a, bytes(4));
}

TEST(Generate, MalformedSchedules) {
    EXPECT_THROW(generate(DriftSchedule{{}, 10}, DelayPolicy::immediate(), 1), InvalidArgument);
    EXPECT_THROW(generate(DriftSchedule{{{5, AgrawalConfig{}}}, 10}, DelayPolicy::immediate(), 1), InvalidArgument);
    EXPECT_THROW(generate(DriftSchedule{{{0, AgrawalConfig{}}, {0, AgrawalConfig{}}}, 10}, DelayPolicy::immediate(), 1),
                 InvalidArgument);
    EXPECT_THROW(generate(DriftSchedule{{{0, AgrawalConfig{}}}, 0}, DelayPolicy::immediate(), 1), InvalidArgument);
    EXPECT_THROW(generate(DriftSchedule{{{0, AgrawalConfig{}}, {5, HyperplaneConfig{}}}, 10}, DelayPolicy::immediate(), 1),
                 InvalidArgument);
    EXPECT_THROW(generate(DriftSchedule{{{0, AgrawalConfig{7, 0}}}, 10}, DelayPolicy::immediate(), 1), InvalidArgument);
}
