#include <gtest/gtest.h>

#include <deque>
#include <map>

#include "dlstream/drift.hpp"
#include "dlstream/errors.hpp"
#include "dlstream/generators.hpp"
#include "oracles.hpp"

using namespace dls;

namespace {

// Each clone gets a fresh id; its scores come from a table keyed by id.
class Voter final : public Learner {
  public:
    static inline int next_id = 0;
    static inline std::map<int, std::vector<double>> table;

    Voter() : id(next_id++) {}
    Voter(const Voter&) : id(next_id++) {}
    void train(const FeatureVector&, ClassLabel) override { ++trained; }
    Prediction predict(const FeatureVector&) const override {
        const auto it = table.find(id);
        return it == table.end() ? Prediction::uniform(2) : Prediction{argmax_lowest(it->second) == 0 ? 0u : 1u, it->second};
    }
    void reset() override { trained = 0; }
    std::unique_ptr<Learner> clone() const override { return std::make_unique<Voter>(*this); }
    std::size_t model_size() const override { return 0; }
    std::string name() const override { return "voter"; }
    int id;
    int trained = 0;
};

const Voter& voter(const AdwinBagging& b, std::size_t i) { return dynamic_cast<const Voter&>(b.member(i)); }

FeatureVector none() { return FeatureVector{{0.0}, {}}; }

}  // namespace

TEST(Adwin, CutThresholdFormula) {
    // m = 1/(1/100 + 1/300) = 75
    EXPECT_DOUBLE_EQ(Adwin::cut_threshold(100, 300, 400, 0.002), std::sqrt(std::log(4.0 * 400 / 0.002) / 150.0));
}

TEST(Adwin, RejectsNonBinaryInput) {
    Adwin a;
    EXPECT_THROW(a.add(2), InvalidArgument);
    EXPECT_THROW(a.add(-1), InvalidArgument);
    EXPECT_THROW(Adwin(0.0), InvalidArgument);
    EXPECT_THROW(Adwin(0.01, 1), InvalidArgument);
}

TEST(Adwin, AllOnesNeverCuts) {
    Adwin a;
    for (int i = 0; i < 20000; ++i) ASSERT_FALSE(a.add(1));
    EXPECT_EQ(a.width(), 20000u);
    EXPECT_EQ(a.total(), 20000u);
}

TEST(Adwin, StationaryFalseAlarmRate) {
    std::uint64_t alarms = 0, inserts = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Adwin a;
        Rng r(seed);
        for (int i = 0; i < 1000; ++i) {
            alarms += a.add(r.uniform() < 0.5 ? 1 : 0);
            ++inserts;
        }
    }
    EXPECT_LE(static_cast<double>(alarms) / static_cast<double>(inserts), 0.01);

    Adwin alt;
    int flagged = 0;
    for (int i = 0; i < 1000; ++i) flagged += alt.add(i % 2);
    EXPECT_LE(flagged, 10);
}

TEST(Adwin, DetectsAStepQuickly) {
    Adwin a;
    for (int i = 0; i < 500; ++i) ASSERT_FALSE(a.add(0));
    int first = -1;
    for (int i = 0; i < 500; ++i) {
        if (a.add(1) && first < 0) first = i + 1;
    }
    ASSERT_GT(first, 0);
    EXPECT_LE(first, 300);
    // Almost all of the zero era is gone by the end.
    EXPECT_LE(a.width() - a.total(), 50u);
}

TEST(Adwin, BucketsMatchShadowWindowAndReference) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng r(seed);
        Adwin a;
        oracle::ReferenceAdwin ref(a.delta(), a.max_buckets_per_row());
        std::deque<int> shadow;
        const double p0 = 0.2 + 0.6 * r.uniform();
        for (int i = 0; i < 2000; ++i) {
            const int bit = r.uniform() < (i < 1000 ? p0 : 1.0 - p0) ? 1 : 0;
            const bool cut = a.add(bit);
            ASSERT_EQ(cut, ref.add(bit)) << seed << ":" << i;
            shadow.push_back(bit);
            for (std::uint64_t k = 0; k < a.last_dropped(); ++k) shadow.pop_front();
            std::uint64_t sum = 0;
            for (int b : shadow) sum += static_cast<std::uint64_t>(b);
            ASSERT_EQ(a.width(), shadow.size());
            ASSERT_EQ(a.total(), sum);
            ASSERT_EQ(a.width(), ref.width());
            ASSERT_EQ(a.total(), ref.total());
            for (const auto& row : a.rows()) ASSERT_LE(row.size(), a.max_buckets_per_row());
        }
    }
}

TEST(ScoreVector, UnscoredIsOneHot) {
    EXPECT_EQ(score_vector(Prediction::unscored(1), 3), (std::vector<double>{0, 1, 0}));
    EXPECT_EQ(score_vector(Prediction{0, {0.7, 0.3}}, 2), (std::vector<double>{0.7, 0.3}));
}

TEST(AdwinBagging, SingleMemberIsTheMember) {
    NaiveBayes nb(agrawal_schema());
    AdwinBagging bag(nb, 2, {1, 1.0, 0.002, 3, false});
    AgrawalGenerator g(AgrawalConfig{2, 0}, 3);
    for (int i = 0; i < 2000; ++i) {
        const auto inst = g.next();
        const auto p = bag.predict(inst.x), q = bag.member(0).predict(inst.x);
        ASSERT_EQ(p.label, q.label);
        for (std::size_t c = 0; c < 2; ++c) ASSERT_NEAR(p.scores[c], q.scores[c], 1e-12);
        bag.train(inst.x, inst.y);
    }
}

TEST(AdwinBagging, AveragesMemberScores) {
    Voter proto;
    AdwinBagging two(proto, 2, {2, 1.0, 0.002, 1, false});
    Voter::table[voter(two, 0).id] = {1.0, 0.0};
    Voter::table[voter(two, 1).id] = {0.0, 1.0};
    const auto p = two.predict(none());
    EXPECT_EQ(p.scores, (std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(p.label, 0u);

    AdwinBagging three(proto, 2, {3, 1.0, 0.002, 1, false});
    Voter::table[voter(three, 0).id] = {0.9, 0.1};
    Voter::table[voter(three, 1).id] = {0.8, 0.2};
    Voter::table[voter(three, 2).id] = {0.2, 0.8};
    const auto q = three.predict(none());
    EXPECT_NEAR(q.scores[0], 1.9 / 3.0, 1e-12);
    EXPECT_NEAR(q.scores[1], 1.1 / 3.0, 1e-12);
    EXPECT_EQ(q.label, 0u);
}

TEST(AdwinBagging, PoissonWeightsAndZeroDraws) {
    Voter proto;
    AdwinBagging bag(proto, 2, {3, 1.0, 0.002, 42, false});
    for (int i = 0; i < 1000; ++i) bag.train(none(), 0);
    // Each member's train count is its own Poisson(1) total.
    for (std::size_t i = 0; i < 3; ++i) {
        Rng r(derive_seed(42, {i}));
        int expected = 0;
        for (int k = 0; k < 1000; ++k) expected += static_cast<int>(r.poisson(1.0));
        EXPECT_EQ(voter(bag, i).trained, expected);
    }

    AdwinBagging idle(proto, 2, {3, 1e-12, 0.002, 42, false});
    for (int i = 0; i < 500; ++i) idle.train(none(), 1);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(voter(idle, i).trained, 0);
}

TEST(AdwinBagging, DeterministicForASeed) {
    NaiveBayes nb(agrawal_schema());
    auto run = [&](std::uint64_t seed) {
        AdwinBagging bag(nb, 2, {4, 6.0, 0.002, seed, false});
        const auto s = generate(DriftSchedule{{{0, AgrawalConfig{1, 0}}, {3000, AgrawalConfig{3, 0}}}, 6000},
                                DelayPolicy::immediate(), 5);
        std::vector<double> trace;
        std::vector<std::size_t> events;
        for (const auto& e : s.events) {
            if (e.is_instance()) {
                trace.push_back(bag.predict(e.features()).scores[0]);
                bag.train(e.features(), 0);
            }
            for (auto i : bag.take_drift_events()) events.push_back(i);
        }
        return std::make_pair(trace, events);
    };
    EXPECT_EQ(run(8), run(8));
}

TEST(AdwinBagging, ResetsOnChangeAndRelearns) {
    NaiveBayes nb(agrawal_schema());
    AdwinBagging bag(nb, 2, {5, 6.0, 0.002, 2, false});
    AgrawalGenerator g(AgrawalConfig{1, 0}, 4);
    for (int i = 0; i < 3000; ++i) bag.train(g.next().x, 1);
    for (int i = 0; i < 3000; ++i) bag.train(g.next().x, 0);
    std::vector<std::size_t> seen = bag.take_drift_events();
    EXPECT_TRUE(bag.take_drift_events().empty());
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_GE(bag.resets(i), 1u);
        EXPECT_NE(std::find(seen.begin(), seen.end(), i), seen.end());
    }

    bag.reset();
    for (int i = 0; i < 50; ++i) bag.train(g.next().x, 0);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(bag.member(i).predict(g.next().x).label, 0u);
}

TEST(AdwinBagging, RejectsBadConfig) {
    NaiveBayes nb(agrawal_schema());
    EXPECT_THROW(AdwinBagging(nb, 2, {0, 6.0, 0.002, 1, false}), InvalidArgument);
    EXPECT_THROW(AdwinBagging(nb, 2, {3, 0.0, 0.002, 1, false}), InvalidArgument);
    EXPECT_THROW(AdwinBagging(nb, 2, {3, 6.0, 1.5, 1, false}), InvalidArgument);
}
