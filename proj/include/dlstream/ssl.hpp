#pragma once

// Semi-supervised wrappers: self-training over any base learner, and
// cluster-then-label over additive micro-clusters.

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlstream/learners.hpp"
#include "dlstream/stream_model.hpp"

namespace dls {

/// Dense embedding shared by the distance-based components: numeric
/// attributes as-is, nominal attributes one-hot. Distances standardize numeric
/// dimensions by the running per-attribute standard deviation and weight each
/// one-hot dimension by 1/2, so a nominal mismatch contributes exactly 1.
class FeatureSpace {
  public:
    explicit FeatureSpace(const Schema& schema);

    std::size_t dims() const { return dims_; }
    std::vector<double> embed(const FeatureVector& x) const;
    /// Updates the running numeric statistics.
    void observe(const FeatureVector& x);
    void clear();

    /// Per-dimension squared-distance weights.
    const std::vector<double>& weights() const { return weights_; }
    double squared_distance(std::span<const double> a, std::span<const double> b) const;
    double distance(std::span<const double> a, std::span<const double> b) const;

    struct NumericStat {
        std::uint64_t n = 0;
        double mean = 0.0;
        double m2 = 0.0;
    };
    const std::vector<NumericStat>& numeric_stats() const { return stats_; }
    void restore(std::vector<NumericStat> stats);

  private:
    void refresh_weights();

    std::size_t numeric_count_;
    std::vector<std::uint32_t> cardinalities_;
    std::size_t dims_;
    std::vector<NumericStat> stats_;
    std::vector<double> weights_;
};

// ---------------------------------------------------------------- self-training

enum class ScoreKind { Posterior, Distance };

struct SelfTrainingConfig {
    ScoreKind score = ScoreKind::Posterior;
    /// false: fixed threshold `theta`; true: mean of the last `window` scores
    /// (with `theta` used until `window` scores have been seen).
    bool adaptive = false;
    double theta = 0.9;
    std::size_t window = 100;
    /// Accept on score > threshold instead of score >= threshold.
    bool strict = false;
};

/// Tolerance applied to threshold comparisons so that a windowed mean such as
/// (0.6 + 0.8 + 1.0) / 3 compares equal to 0.8.
inline constexpr double kThresholdTolerance = 1e-12;

bool accepts(double score, double threshold, bool strict);

/// Max class score; 0 for an unscored prediction.
double posterior_score(const Prediction& p);

/// 1 - d_near / (d_near + d_next) over distances to class centroids:
/// 0 with no centroid, 1 with a single centroid, 0.5 when both are zero.
double distance_score(std::span<const double> centroid_distances);

/// Running per-class mean of embedded labelled instances.
class ClassCentroids {
  public:
    ClassCentroids(std::size_t n_classes, std::size_t dims);

    void add(std::span<const double> point, ClassLabel y);
    void clear();
    std::uint64_t count(ClassLabel y) const { return counts_.at(y); }
    std::vector<double> centroid(ClassLabel y) const;
    /// Distances from `point` to every class centroid that has data.
    std::vector<double> distances(std::span<const double> point, const FeatureSpace& space) const;
    std::size_t size_estimate() const { return sums_.size() * (dims_ + 1); }

  private:
    std::size_t dims_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::vector<double>> sums_;
};

class SelfTraining final : public Learner {
  public:
    SelfTraining(std::unique_ptr<Learner> base, const Schema& schema, SelfTrainingConfig config);
    SelfTraining(const SelfTraining& other);

    void train(const FeatureVector& x, ClassLabel y) override;
    /// One self-training step: score the base prediction, pseudo-label when the
    /// score clears the current threshold, then record the score.
    void train_unlabelled(const FeatureVector& x) override;
    Prediction predict(const FeatureVector& x) const override { return base_->predict(x); }
    void reset() override;
    std::unique_ptr<Learner> clone() const override { return std::make_unique<SelfTraining>(*this); }
    std::size_t model_size() const override;
    std::string name() const override { return "self_training(" + base_->name() + ")"; }

    double confidence(const Prediction& p, const FeatureVector& x) const;
    double current_threshold() const;
    std::uint64_t pseudo_labels() const { return pseudo_labels_; }
    std::uint64_t unlabelled_seen() const { return unlabelled_seen_; }
    const Learner& base() const { return *base_; }
    const SelfTrainingConfig& config() const { return config_; }

  private:
    std::unique_ptr<Learner> base_;
    SelfTrainingConfig config_;
    FeatureSpace space_;
    ClassCentroids centroids_;
    std::deque<double> recent_scores_;
    std::uint64_t pseudo_labels_ = 0;
    std::uint64_t unlabelled_seen_ = 0;
};

// ---------------------------------------------------------------- micro-clusters

struct MicroCluster {
    std::uint64_t n = 0;
    std::vector<double> ls;
    std::vector<double> ss;
    std::vector<std::uint64_t> label_counts;
    Tick last_update_tick = 0;

    static MicroCluster from_point(std::span<const double> point, std::size_t n_classes,
                                   std::optional<ClassLabel> y, Tick tick);

    std::vector<double> centroid() const;
    void absorb(std::span<const double> point, std::optional<ClassLabel> y, Tick tick);
    /// Adds all statistics of `other`.
    void merge(const MicroCluster& other);
    /// sqrt of the weighted per-dimension variance sum.
    double rms_deviation(std::span<const double> weights) const;
    std::uint64_t labelled() const;

    bool operator==(const MicroCluster&) const = default;
};

struct ClusterModelConfig {
    std::size_t max_clusters = 100;
    double radius_factor = 2.0;
};

/// CluStream-style online micro-clustering (no time decay) with per-cluster
/// label counts.
///
/// An instance joins its nearest cluster when within radius_factor times that
/// cluster's RMS deviation; a singleton's radius is half the distance to the
/// nearest other cluster (0 when it is the only one). Otherwise it starts a new
/// cluster and, if that exceeds max_clusters, the two clusters with the closest
/// centroids are merged into the lower index. Distance ties go to the lower index.
class ClusterModel {
  public:
    ClusterModel(const Schema& schema, ClusterModelConfig config);

    void update(const FeatureVector& x, std::optional<ClassLabel> y, Tick tick);

    /// Modal label of the nearest cluster; when that cluster holds no labels,
    /// the nearest cluster that does; unscored class 0 when no cluster is
    /// labelled. Throws ModelEmpty on an empty model.
    Prediction predict(const FeatureVector& x) const;

    const std::vector<MicroCluster>& clusters() const { return clusters_; }
    const FeatureSpace& space() const { return space_; }
    const ClusterModelConfig& config() const { return config_; }
    std::size_t n_classes() const { return n_classes_; }
    bool empty() const { return clusters_.empty(); }
    void clear();

    /// One line of space statistics, then one line per micro-cluster:
    ///   space <n>:<mean>:<m2> ...
    ///   mc n=<n> tick=<t> ls=<v;...> ss=<v;...> labels=<c;...>
    std::string to_text() const;
    static ClusterModel from_text(const Schema& schema, ClusterModelConfig config, std::string_view text);

  private:
    std::size_t nearest(std::span<const double> point) const;
    double radius(std::size_t i) const;
    void merge_closest_pair();

    ClusterModelConfig config_;
    std::size_t n_classes_;
    FeatureSpace space_;
    std::vector<MicroCluster> clusters_;
};

class ClusterThenLabel final : public Learner {
  public:
    ClusterThenLabel(const Schema& schema, ClusterModelConfig config);

    void train(const FeatureVector& x, ClassLabel y) override { model_.update(x, y, tick_++); }
    void train_unlabelled(const FeatureVector& x) override { model_.update(x, std::nullopt, tick_++); }
    /// Unscored class 0 on an empty model.
    Prediction predict(const FeatureVector& x) const override;
    void reset() override;
    std::unique_ptr<Learner> clone() const override { return std::make_unique<ClusterThenLabel>(*this); }
    std::size_t model_size() const override;
    std::string name() const override { return "cluster_then_label"; }

    const ClusterModel& model() const { return model_; }

  private:
    ClusterModel model_;
    Tick tick_ = 0;
};

}  // namespace dls
