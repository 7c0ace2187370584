#include "dlstream/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "dlstream/errors.hpp"

namespace dls {

double Prediction::confidence() const {
    if (scores.empty()) return 0.0;
    return *std::max_element(scores.begin(), scores.end());
}

std::size_t argmax_lowest(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

Prediction Prediction::from_scores(std::vector<double> scores) {
    if (scores.empty()) return unscored(0);
    double sum = 0.0;
    for (double s : scores) sum += s;
    if (!(sum > 0.0)) {
        std::fill(scores.begin(), scores.end(), 1.0 / static_cast<double>(scores.size()));
    } else {
        for (double& s : scores) s /= sum;
    }
    const auto label = static_cast<ClassLabel>(argmax_lowest(scores));
    return Prediction{label, std::move(scores)};
}

Prediction Prediction::uniform(std::size_t n_classes) {
    return from_scores(std::vector<double>(n_classes, 1.0));
}

NaiveBayes::NaiveBayes(Schema schema) : schema_(std::move(schema)) { reset(); }

void NaiveBayes::reset() {
    const std::size_t k = schema_.n_classes();
    total_ = 0;
    class_counts_.assign(k, 0);
    gaussians_.assign(k, std::vector<Gaussian>(schema_.numeric_count()));
    value_counts_.assign(k, {});
    for (auto& per_class : value_counts_) {
        for (std::uint32_t card : schema_.nominal_cardinalities()) per_class.emplace_back(card, 0);
    }
}

void NaiveBayes::train(const FeatureVector& x, ClassLabel y) {
    validate_features(schema_, x);
    validate_label(schema_, y);
    ++total_;
    ++class_counts_[y];
    auto& gs = gaussians_[y];
    for (std::size_t i = 0; i < x.numeric.size(); ++i) {
        auto& g = gs[i];
        ++g.n;
        const double delta = x.numeric[i] - g.mean;
        g.mean += delta / static_cast<double>(g.n);
        g.m2 += delta * (x.numeric[i] - g.mean);
    }
    auto& vc = value_counts_[y];
    for (std::size_t i = 0; i < x.nominal.size(); ++i) ++vc[i][x.nominal[i]];
}

double NaiveBayes::mean(ClassLabel c, std::size_t a) const { return gaussians_.at(c).at(a).mean; }

double NaiveBayes::variance(ClassLabel c, std::size_t a) const {
    const auto& g = gaussians_.at(c).at(a);
    const double v = g.n > 1 ? g.m2 / static_cast<double>(g.n - 1) : 0.0;
    return std::max(v, kVarianceFloor);
}

Prediction NaiveBayes::predict(const FeatureVector& x) const {
    const std::size_t k = schema_.n_classes();
    if (total_ == 0) return Prediction::uniform(k);
    validate_features(schema_, x);

    std::vector<double> log_post(k, -INFINITY);
    const double log_norm = std::log(static_cast<double>(total_ + k));
    for (std::size_t c = 0; c < k; ++c) {
        if (class_counts_[c] == 0) continue;
        double lp = std::log(static_cast<double>(class_counts_[c] + 1)) - log_norm;
        for (std::size_t i = 0; i < x.numeric.size(); ++i) {
            const double var = variance(static_cast<ClassLabel>(c), i);
            const double d = x.numeric[i] - gaussians_[c][i].mean;
            lp += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
        }
        const auto& cards = schema_.nominal_cardinalities();
        for (std::size_t i = 0; i < x.nominal.size(); ++i) {
            const double num = static_cast<double>(value_counts_[c][i][x.nominal[i]] + 1);
            const double den = static_cast<double>(class_counts_[c] + cards[i]);
            lp += std::log(num / den);
        }
        log_post[c] = lp;
    }
    const double top = *std::max_element(log_post.begin(), log_post.end());
    std::vector<double> scores(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        if (class_counts_[c] != 0) scores[c] = std::exp(log_post[c] - top);
    }
    return Prediction::from_scores(std::move(scores));
}

std::size_t NaiveBayes::model_size() const {
    std::size_t n = class_counts_.size();
    n += class_counts_.size() * schema_.numeric_count() * 3;
    for (std::uint32_t card : schema_.nominal_cardinalities()) n += class_counts_.size() * card;
    return n;
}

Prediction no_change_predict(std::optional<ClassLabel> last, std::size_t n_classes) {
    const ClassLabel y = last.value_or(0);
    std::vector<double> scores(std::max<std::size_t>(n_classes, y + 1), 0.0);
    scores[y] = 1.0;
    return Prediction{y, std::move(scores)};
}

Prediction majority_predict(std::span<const std::uint64_t> histogram) {
    std::vector<double> scores(histogram.begin(), histogram.end());
    return Prediction::from_scores(std::move(scores));
}

void MajorityClass::train(const FeatureVector&, ClassLabel y) {
    if (y >= histogram_.size()) throw InvalidArgument("class label out of range");
    ++histogram_[y];
}

}  // namespace dls
