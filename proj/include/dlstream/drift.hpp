#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "dlstream/learners.hpp"
#include "dlstream/rng.hpp"

namespace dls {

/// ADWIN over a 0/1 stream, stored as an exponential histogram: row i holds up
/// to M buckets of 2^i bits each (oldest first). Every insert tests all
/// bucket-boundary splits into an older part W0 and a newer part W1 and drops
/// the oldest bucket while some split has |mean0 - mean1| >= cut_threshold.
class Adwin {
  public:
    static constexpr double kDefaultDelta = 0.002;
    static constexpr std::size_t kDefaultMaxBuckets = 5;

    explicit Adwin(double delta = kDefaultDelta, std::size_t max_buckets_per_row = kDefaultMaxBuckets);

    /// Returns true when the window shrank on this insert. Throws InvalidArgument
    /// for a value other than 0 or 1.
    bool add(int bit);
    void reset();

    std::uint64_t width() const { return width_; }
    std::uint64_t total() const { return total_; }
    double mean() const { return width_ ? static_cast<double>(total_) / static_cast<double>(width_) : 0.0; }
    double delta() const { return delta_; }
    std::size_t max_buckets_per_row() const { return max_buckets_; }
    std::size_t bucket_count() const;
    /// Row i: bucket sums, oldest first; every bucket in row i covers 2^i bits.
    const std::vector<std::deque<std::uint64_t>>& rows() const { return rows_; }
    /// Number of bits discarded by the most recent add().
    std::uint64_t last_dropped() const { return last_dropped_; }

    /// sqrt( ln(4 n_w / delta) / (2 m) ) with m = 1 / (1/n0 + 1/n1).
    static double cut_threshold(std::uint64_t n0, std::uint64_t n1, std::uint64_t n_w, double delta);

  private:
    void compress();
    bool cut_found() const;
    void drop_oldest();

    double delta_;
    std::size_t max_buckets_;
    std::vector<std::deque<std::uint64_t>> rows_;
    std::uint64_t width_ = 0;
    std::uint64_t total_ = 0;
    std::uint64_t last_dropped_ = 0;
};

struct EnsembleConfig {
    std::size_t size = 10;
    double lambda = 6.0;
    double delta = Adwin::kDefaultDelta;
    std::uint64_t seed = 1;
    /// Reset a member only when its error rate went up across the cut.
    bool reset_on_increase_only = false;
};

/// Online bagging with one ADWIN per member watching that member's 0/1 error
/// stream. Member i draws its Poisson weights from derive_seed(seed, {i}).
class AdwinBagging final : public Learner {
  public:
    AdwinBagging(const Learner& prototype, std::size_t n_classes, EnsembleConfig config);
    AdwinBagging(const AdwinBagging& other);

    /// Per member: predict x, draw w ~ Poisson(lambda), train w times, feed the
    /// ADWIN the error bit of the prediction; on drift reset learner and ADWIN.
    void train(const FeatureVector& x, ClassLabel y) override;
    /// Unweighted mean of member score vectors, lowest-index argmax.
    Prediction predict(const FeatureVector& x) const override;
    void reset() override;
    std::unique_ptr<Learner> clone() const override { return std::make_unique<AdwinBagging>(*this); }
    std::size_t model_size() const override;
    std::string name() const override { return "adwin_bagging(" + prototype_->name() + ")"; }
    std::vector<std::size_t> take_drift_events() override;

    std::size_t size() const { return members_.size(); }
    const Learner& member(std::size_t i) const { return *members_.at(i).learner; }
    const Adwin& detector(std::size_t i) const { return members_.at(i).adwin; }
    std::uint64_t resets(std::size_t i) const { return members_.at(i).resets; }
    const EnsembleConfig& config() const { return config_; }

  private:
    struct Member {
        std::unique_ptr<Learner> learner;
        Adwin adwin;
        Rng rng;
        std::uint64_t resets = 0;
    };

    std::unique_ptr<Learner> prototype_;
    std::size_t n_classes_;
    EnsembleConfig config_;
    std::vector<Member> members_;
    std::vector<std::size_t> pending_events_;
};

/// Score vector of a prediction over n classes; an unscored prediction counts
/// as a one-hot vote.
std::vector<double> score_vector(const Prediction& p, std::size_t n_classes);

}  // namespace dls
