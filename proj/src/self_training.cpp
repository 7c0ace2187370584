#include <algorithm>
#include <cmath>

#include "dlstream/errors.hpp"
#include "dlstream/ssl.hpp"

namespace dls {

FeatureSpace::FeatureSpace(const Schema& schema)
    : numeric_count_(schema.numeric_count()), cardinalities_(schema.nominal_cardinalities()) {
    dims_ = numeric_count_;
    for (std::uint32_t c : cardinalities_) dims_ += c;
    clear();
}

void FeatureSpace::clear() {
    stats_.assign(numeric_count_, {});
    refresh_weights();
}

void FeatureSpace::restore(std::vector<NumericStat> stats) {
    if (stats.size() != numeric_count_) throw InvalidArgument("numeric statistics do not match the schema");
    stats_ = std::move(stats);
    refresh_weights();
}

std::vector<double> FeatureSpace::embed(const FeatureVector& x) const {
    if (x.numeric.size() != numeric_count_ || x.nominal.size() != cardinalities_.size()) {
        throw InvalidArgument("feature vector does not match the schema");
    }
    std::vector<double> out(dims_, 0.0);
    std::copy(x.numeric.begin(), x.numeric.end(), out.begin());
    std::size_t offset = numeric_count_;
    for (std::size_t i = 0; i < cardinalities_.size(); ++i) {
        if (x.nominal[i] >= cardinalities_[i]) throw InvalidArgument("nominal value out of range");
        out[offset + x.nominal[i]] = 1.0;
        offset += cardinalities_[i];
    }
    return out;
}

void FeatureSpace::observe(const FeatureVector& x) {
    if (x.numeric.size() != numeric_count_) throw InvalidArgument("feature vector does not match the schema");
    for (std::size_t i = 0; i < numeric_count_; ++i) {
        auto& s = stats_[i];
        ++s.n;
        const double d = x.numeric[i] - s.mean;
        s.mean += d / static_cast<double>(s.n);
        s.m2 += d * (x.numeric[i] - s.mean);
    }
    refresh_weights();
}

void FeatureSpace::refresh_weights() {
    weights_.assign(dims_, 0.5);
    for (std::size_t i = 0; i < numeric_count_; ++i) {
        const auto& s = stats_[i];
        const double var = s.n > 1 ? s.m2 / static_cast<double>(s.n - 1) : 0.0;
        weights_[i] = var > 0.0 ? 1.0 / var : 1.0;
    }
}

double FeatureSpace::squared_distance(std::span<const double> a, std::span<const double> b) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < dims_; ++i) {
        const double d = a[i] - b[i];
        sum += weights_[i] * d * d;
    }
    return sum;
}

double FeatureSpace::distance(std::span<const double> a, std::span<const double> b) const {
    return std::sqrt(squared_distance(a, b));
}

bool accepts(double score, double threshold, bool strict) {
    return strict ? score > threshold + kThresholdTolerance : score >= threshold - kThresholdTolerance;
}

double posterior_score(const Prediction& p) { return p.confidence(); }

double distance_score(std::span<const double> d) {
    if (d.empty()) return 0.0;
    if (d.size() == 1) return 1.0;
    std::vector<double> sorted(d.begin(), d.end());
    std::partial_sort(sorted.begin(), sorted.begin() + 2, sorted.end());
    const double sum = sorted[0] + sorted[1];
    if (sum == 0.0) return 0.5;
    return 1.0 - sorted[0] / sum;
}

ClassCentroids::ClassCentroids(std::size_t n_classes, std::size_t dims)
    : dims_(dims), counts_(n_classes, 0), sums_(n_classes, std::vector<double>(dims, 0.0)) {}

void ClassCentroids::add(std::span<const double> point, ClassLabel y) {
    if (y >= counts_.size()) throw InvalidArgument("class label out of range");
    ++counts_[y];
    for (std::size_t i = 0; i < dims_; ++i) sums_[y][i] += point[i];
}

void ClassCentroids::clear() {
    std::fill(counts_.begin(), counts_.end(), 0);
    for (auto& s : sums_) std::fill(s.begin(), s.end(), 0.0);
}

std::vector<double> ClassCentroids::centroid(ClassLabel y) const {
    if (counts_.at(y) == 0) throw NotFound("class has no centroid");
    std::vector<double> c = sums_[y];
    for (double& v : c) v /= static_cast<double>(counts_[y]);
    return c;
}

std::vector<double> ClassCentroids::distances(std::span<const double> point, const FeatureSpace& space) const {
    std::vector<double> out;
    for (std::size_t c = 0; c < counts_.size(); ++c) {
        if (counts_[c] == 0) continue;
        out.push_back(space.distance(point, centroid(static_cast<ClassLabel>(c))));
    }
    return out;
}

SelfTraining::SelfTraining(std::unique_ptr<Learner> base, const Schema& schema, SelfTrainingConfig config)
    : base_(std::move(base)), config_(config), space_(schema), centroids_(schema.n_classes(), space_.dims()) {
    if (!base_) throw InvalidArgument("self-training needs a base learner");
    if (!(config_.theta >= 0.0 && config_.theta <= 1.0)) throw InvalidArgument("threshold must lie in [0,1]");
    if (config_.adaptive && config_.window == 0) throw InvalidArgument("adaptive threshold window must be >= 1");
}

SelfTraining::SelfTraining(const SelfTraining& other)
    : base_(other.base_->clone()),
      config_(other.config_),
      space_(other.space_),
      centroids_(other.centroids_),
      recent_scores_(other.recent_scores_),
      pseudo_labels_(other.pseudo_labels_),
      unlabelled_seen_(other.unlabelled_seen_) {}

void SelfTraining::train(const FeatureVector& x, ClassLabel y) {
    base_->train(x, y);
    if (config_.score == ScoreKind::Distance) {
        space_.observe(x);
        centroids_.add(space_.embed(x), y);
    }
}

double SelfTraining::confidence(const Prediction& p, const FeatureVector& x) const {
    if (config_.score == ScoreKind::Posterior) return posterior_score(p);
    const auto point = space_.embed(x);
    const auto d = centroids_.distances(point, space_);
    return distance_score(d);
}

double SelfTraining::current_threshold() const {
    if (!config_.adaptive || recent_scores_.size() < config_.window) return config_.theta;
    double sum = 0.0;
    for (double s : recent_scores_) sum += s;
    return sum / static_cast<double>(recent_scores_.size());
}

void SelfTraining::train_unlabelled(const FeatureVector& x) {
    ++unlabelled_seen_;
    if (config_.score == ScoreKind::Distance) space_.observe(x);
    const Prediction p = base_->predict(x);
    const double s = confidence(p, x);
    if (accepts(s, current_threshold(), config_.strict)) {
        base_->train(x, p.label);
        ++pseudo_labels_;
    }
    if (config_.adaptive) {
        recent_scores_.push_back(s);
        if (recent_scores_.size() > config_.window) {
            recent_scores_.pop_front();
        }
    }
}

void SelfTraining::reset() {
    base_->reset();
    space_.clear();
    centroids_.clear();
    recent_scores_.clear();
    pseudo_labels_ = 0;
    unlabelled_seen_ = 0;
}

std::size_t SelfTraining::model_size() const {
    std::size_t n = base_->model_size() + recent_scores_.size();
    if (config_.score == ScoreKind::Distance) n += centroids_.size_estimate() + 3 * space_.numeric_stats().size();
    return n;
}

}  // namespace dls
