#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dlstream/stream_model.hpp"

namespace dls {

/// Class prediction with an optional probability vector. An unscored
/// prediction carries only a label.
struct Prediction {
    ClassLabel label = 0;
    std::vector<double> scores;

    bool scored() const { return !scores.empty(); }
    /// Largest score, or 0 when unscored.
    double confidence() const;

    /// Normalizes `scores` (all-zero -> uniform) and picks the lowest-index argmax.
    static Prediction from_scores(std::vector<double> scores);
    static Prediction unscored(ClassLabel label) { return Prediction{label, {}}; }
    static Prediction uniform(std::size_t n_classes);
};

/// Index of the largest value; lowest index wins ties. Empty span -> 0.
std::size_t argmax_lowest(std::span<const double> values);

/// Incremental classifier contract shared by base learners, wrappers and ensembles.
class Learner {
  public:
    virtual ~Learner() = default;

    virtual void train(const FeatureVector& x, ClassLabel y) = 0;
    virtual void train_unlabelled(const FeatureVector&) {}
    virtual Prediction predict(const FeatureVector& x) const = 0;
    virtual void reset() = 0;
    virtual std::unique_ptr<Learner> clone() const = 0;
    /// Approximate model size in stored counters / statistics.
    virtual std::size_t model_size() const = 0;
    virtual std::string name() const = 0;
    /// Member indices reset by drift handling since the last call.
    virtual std::vector<std::size_t> take_drift_events() { return {}; }
};

/// Incremental Naive Bayes. Nominal attributes use add-1 smoothed value
/// counts; numeric attributes use a Gaussian with Welford mean and sample
/// variance, floored at kVarianceFloor. Class priors are add-1 smoothed.
/// A class never seen in training has zero posterior; before any training
/// the prediction is uniform.
class NaiveBayes final : public Learner {
  public:
    static constexpr double kVarianceFloor = 1e-6;

    explicit NaiveBayes(Schema schema);

    void train(const FeatureVector& x, ClassLabel y) override;
    Prediction predict(const FeatureVector& x) const override;
    void reset() override;
    std::unique_ptr<Learner> clone() const override { return std::make_unique<NaiveBayes>(*this); }
    std::size_t model_size() const override;
    std::string name() const override { return "naive_bayes"; }

    std::uint64_t class_count(ClassLabel c) const { return class_counts_.at(c); }
    std::uint64_t total_count() const { return total_; }
    double mean(ClassLabel c, std::size_t numeric_attr) const;
    double variance(ClassLabel c, std::size_t numeric_attr) const;

  private:
    struct Gaussian {
        std::uint64_t n = 0;
        double mean = 0.0;
        double m2 = 0.0;
    };

    Schema schema_;
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> class_counts_;
    // [class][numeric attr]
    std::vector<std::vector<Gaussian>> gaussians_;
    // [class][nominal attr][value]
    std::vector<std::vector<std::vector<std::uint64_t>>> value_counts_;
};

/// The No-Change baseline prediction: the last true label (class 0 before any).
Prediction no_change_predict(std::optional<ClassLabel> last_true_label, std::size_t n_classes);

/// Modal class of the histogram, lowest index on ties; scores are the
/// normalized histogram (uniform when empty).
Prediction majority_predict(std::span<const std::uint64_t> class_histogram);

class NoChange final : public Learner {
  public:
    explicit NoChange(std::size_t n_classes) : n_classes_(n_classes) {}

    void train(const FeatureVector&, ClassLabel y) override { last_ = y; }
    Prediction predict(const FeatureVector&) const override { return no_change_predict(last_, n_classes_); }
    void reset() override { last_.reset(); }
    std::unique_ptr<Learner> clone() const override { return std::make_unique<NoChange>(*this); }
    std::size_t model_size() const override { return 1; }
    std::string name() const override { return "no_change"; }

  private:
    std::size_t n_classes_;
    std::optional<ClassLabel> last_;
};

class MajorityClass final : public Learner {
  public:
    explicit MajorityClass(std::size_t n_classes) : histogram_(n_classes, 0) {}

    void train(const FeatureVector&, ClassLabel y) override;
    Prediction predict(const FeatureVector&) const override { return majority_predict(histogram_); }
    void reset() override { std::fill(histogram_.begin(), histogram_.end(), 0); }
    std::unique_ptr<Learner> clone() const override { return std::make_unique<MajorityClass>(*this); }
    std::size_t model_size() const override { return histogram_.size(); }
    std::string name() const override { return "majority"; }

  private:
    std::vector<std::uint64_t> histogram_;
};

}  // namespace dls
