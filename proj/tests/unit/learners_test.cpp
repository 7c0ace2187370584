#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dlstream/errors.hpp"
#include "dlstream/generators.hpp"
#include "dlstream/learners.hpp"

using namespace dls;

namespace {

Schema numeric1() { return Schema({{"x", AttributeKind::Numeric, 0}}, 2); }

FeatureVector num(double v) { return FeatureVector{{v}, {}}; }

double gauss(double x, double mean, double var) {
    return std::exp(-(x - mean) * (x - mean) / (2 * var)) / std::sqrt(2 * std::numbers::pi * var);
}

void expect_probability_vector(const Prediction& p) {
    double s = 0.0;
    for (double v : p.scores) {
        EXPECT_GE(v, 0.0);
        s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
}

}  // namespace

TEST(Prediction, FromScoresNormalizesAndBreaksTiesLow) {
    const auto p = Prediction::from_scores({2.0, 2.0, 1.0});
    EXPECT_EQ(p.label, 0u);
    EXPECT_DOUBLE_EQ(p.scores[0], 0.4);
    const auto z = Prediction::from_scores({0.0, 0.0});
    EXPECT_EQ(z.scores, (std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(Prediction::from_scores({0.1, 0.3, 0.3}).label, 1u);
    EXPECT_FALSE(Prediction::unscored(1).scored());
    EXPECT_EQ(argmax_lowest(std::vector<double>{}), 0u);
}

TEST(NaiveBayes, UntrainedIsUniform) {
    NaiveBayes nb(numeric1());
    const auto p = nb.predict(num(3));
    EXPECT_EQ(p.scores, (std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(p.label, 0u);
}

TEST(NaiveBayes, SingleClassDegeneracy) {
    NaiveBayes nb(agrawal_schema());
    AgrawalGenerator g(AgrawalConfig{}, 1);
    for (int i = 0; i < 5; ++i) nb.train(g.next().x, 0);
    for (int i = 0; i < 20; ++i) {
        const auto p = nb.predict(g.next().x);
        EXPECT_EQ(p.label, 0u);
        EXPECT_EQ(p.scores[0], 1.0);
    }
}

TEST(NaiveBayes, SymmetricDataGivesEvenScores) {
    NaiveBayes nb(numeric1());
    for (double v : {-1.0, 0.0, 1.0}) {
        nb.train(num(v), 0);
        nb.train(num(v), 1);
    }
    const auto p = nb.predict(num(0.3));
    EXPECT_DOUBLE_EQ(p.scores[0], 0.5);
    EXPECT_DOUBLE_EQ(p.scores[1], 0.5);
    EXPECT_EQ(p.label, 0u);
}

TEST(NaiveBayes, HandComputedGaussianPosterior) {
    NaiveBayes nb(numeric1());
    for (double v : {1.0, 2.0, 3.0}) nb.train(num(v), 0);
    for (double v : {7.0, 8.0, 9.0}) nb.train(num(v), 1);
    EXPECT_DOUBLE_EQ(nb.mean(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(nb.variance(1, 0), 1.0);
    // Equal priors, sample variance 1 for both classes.
    const double a = gauss(2.0, 2.0, 1.0);
    const double b = gauss(2.0, 8.0, 1.0);
    const auto p = nb.predict(num(2.0));
    EXPECT_EQ(p.label, 0u);
    EXPECT_NEAR(p.scores[0], a / (a + b), 1e-12);
    EXPECT_NEAR(p.scores[1], b / (a + b), 1e-12);
}

TEST(NaiveBayes, NominalLaplaceSmoothing) {
    Schema s({{"c", AttributeKind::Nominal, 3}}, 2);
    NaiveBayes nb(s);
    nb.train(FeatureVector{{}, {0}}, 0);
    nb.train(FeatureVector{{}, {0}}, 0);
    nb.train(FeatureVector{{}, {1}}, 1);
    // prior0 = 3/5, prior1 = 2/5; P(v=2|0) = 1/5, P(v=2|1) = 1/4
    const double s0 = 3.0 / 5.0 * 1.0 / 5.0;
    const double s1 = 2.0 / 5.0 * 1.0 / 4.0;
    const auto p = nb.predict(FeatureVector{{}, {2}});
    EXPECT_NEAR(p.scores[0], s0 / (s0 + s1), 1e-12);
}

TEST(NaiveBayes, VarianceFloorOnConstantAttribute) {
    NaiveBayes nb(numeric1());
    for (int i = 0; i < 4; ++i) nb.train(num(5.0), 0);
    for (int i = 0; i < 4; ++i) nb.train(num(6.0), 1);
    EXPECT_EQ(nb.variance(0, 0), NaiveBayes::kVarianceFloor);
    const auto p = nb.predict(num(5.0));
    EXPECT_EQ(p.label, 0u);
    EXPECT_TRUE(std::isfinite(p.scores[0]));
}

TEST(NaiveBayes, SchemaMismatchRejected) {
    NaiveBayes nb(numeric1());
    EXPECT_THROW(nb.train(FeatureVector{{1.0, 2.0}, {}}, 0), InvalidArgument);
    EXPECT_THROW(nb.train(num(1.0), 2), InvalidArgument);
}

TEST(NaiveBayes, OrderInvariance) {
    AgrawalGenerator g(AgrawalConfig{3, 0}, 4);
    std::vector<LabelledInstance> data;
    for (int i = 0; i < 500; ++i) data.push_back(g.next());
    NaiveBayes a(agrawal_schema()), b(agrawal_schema());
    for (const auto& d : data) a.train(d.x, d.y);
    auto shuffled = data;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(7));
    for (const auto& d : shuffled) b.train(d.x, d.y);
    for (int i = 0; i < 200; ++i) {
        const auto q = g.next().x;
        const auto pa = a.predict(q), pb = b.predict(q);
        EXPECT_EQ(pa.label, pb.label);
        EXPECT_NEAR(pa.scores[0], pb.scores[0], 1e-9);
        expect_probability_vector(pa);
    }

    // Nominal-only data: counts are identical so predictions are bitwise equal.
    Schema s({{"c", AttributeKind::Nominal, 4}, {"d", AttributeKind::Nominal, 3}}, 3);
    NaiveBayes c(s), e(s);
    std::mt19937 rng(3);
    std::vector<std::pair<FeatureVector, ClassLabel>> nom;
    for (int i = 0; i < 300; ++i) {
        nom.push_back({FeatureVector{{}, {static_cast<std::uint32_t>(rng() % 4), static_cast<std::uint32_t>(rng() % 3)}},
                       static_cast<ClassLabel>(rng() % 3)});
    }
    for (const auto& [x, y] : nom) c.train(x, y);
    std::reverse(nom.begin(), nom.end());
    for (const auto& [x, y] : nom) e.train(x, y);
    for (std::uint32_t u = 0; u < 4; ++u) {
        for (std::uint32_t v = 0; v < 3; ++v) EXPECT_EQ(c.predict({{}, {u, v}}).scores, e.predict({{}, {u, v}}).scores);
    }
}

TEST(NaiveBayes, ResetAndClone) {
    NaiveBayes nb(numeric1());
    nb.train(num(1), 1);
    auto copy = nb.clone();
    nb.reset();
    EXPECT_EQ(nb.total_count(), 0u);
    EXPECT_EQ(copy->predict(num(1)).label, 1u);
}

TEST(NoChange, Examples) {
    EXPECT_EQ(no_change_predict(1, 2).label, 1u);
    EXPECT_EQ(no_change_predict(std::nullopt, 2).label, 0u);
    NoChange nc(2);
    std::vector<ClassLabel> got;
    for (ClassLabel y : {0u, 0u, 1u}) {
        nc.train(num(0), y);
        got.push_back(nc.predict(num(0)).label);
    }
    EXPECT_EQ(got, (std::vector<ClassLabel>{0, 0, 1}));
}

TEST(Majority, Examples) {
    const std::vector<std::uint64_t> h1{3, 1};
    const auto p = majority_predict(h1);
    EXPECT_EQ(p.label, 0u);
    EXPECT_EQ(p.scores, (std::vector<double>{0.75, 0.25}));
    EXPECT_EQ(majority_predict(std::vector<std::uint64_t>{2, 2}).label, 0u);
    const auto e = majority_predict(std::vector<std::uint64_t>{0, 0});
    EXPECT_EQ(e.label, 0u);
    EXPECT_EQ(e.scores, (std::vector<double>{0.5, 0.5}));
    MajorityClass m(2);
    m.train(num(0), 1);
    EXPECT_EQ(m.predict(num(0)).label, 1u);
    EXPECT_THROW(m.train(num(0), 5), InvalidArgument);
}
