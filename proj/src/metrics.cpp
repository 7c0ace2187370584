#include "dlstream/metrics.hpp"

#include <algorithm>

#include "dlstream/errors.hpp"

namespace dls {

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes) : n_(n_classes), cells_(n_classes * n_classes, 0) {
    if (n_classes < 1) throw InvalidArgument("confusion matrix needs at least one class");
}

void ConfusionMatrix::add(ClassLabel predicted, ClassLabel truth) {
    if (predicted >= n_ || truth >= n_) throw InvalidArgument("class label out of range");
    ++cells_[truth * n_ + predicted];
    ++total_;
}

void ConfusionMatrix::remove(ClassLabel predicted, ClassLabel truth) {
    auto& cell = cells_.at(truth * n_ + predicted);
    if (cell == 0) throw InvalidArgument("removing an outcome that was never added");
    --cell;
    --total_;
}

void ConfusionMatrix::clear() {
    std::fill(cells_.begin(), cells_.end(), 0);
    total_ = 0;
}

std::uint64_t ConfusionMatrix::correct() const {
    std::uint64_t s = 0;
    for (std::size_t c = 0; c < n_; ++c) s += cells_[c * n_ + c];
    return s;
}

std::uint64_t ConfusionMatrix::row_sum(ClassLabel truth) const {
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < n_; ++p) s += cells_.at(truth * n_ + p);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(ClassLabel predicted) const {
    std::uint64_t s = 0;
    for (std::size_t t = 0; t < n_; ++t) s += cells_.at(t * n_ + predicted);
    return s;
}

std::optional<double> ConfusionMatrix::accuracy() const {
    if (total_ == 0) return std::nullopt;
    return static_cast<double>(correct()) / static_cast<double>(total_);
}

ConfusionMatrix ConfusionMatrix::from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
    ConfusionMatrix m(rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != rows.size()) throw InvalidArgument("confusion matrix must be square");
        for (std::size_t p = 0; p < rows.size(); ++p) {
            m.cells_[t * m.n_ + p] = rows[t][p];
            m.total_ += rows[t][p];
        }
    }
    return m;
}

std::optional<double> kappa(const ConfusionMatrix& m) {
    using wide = __int128;
    const wide n = m.total();
    if (n == 0) return std::nullopt;
    wide chance = 0;
    for (std::size_t c = 0; c < m.n_classes(); ++c) {
        chance += static_cast<wide>(m.row_sum(static_cast<ClassLabel>(c))) * m.col_sum(static_cast<ClassLabel>(c));
    }
    const wide den = n * n - chance;
    if (den == 0) return std::nullopt;
    const wide num = n * static_cast<wide>(m.correct()) - chance;
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

std::optional<double> kappa_temporal(double p0, double p_nc) {
    if (!(p0 >= 0.0 && p0 <= 1.0) || !(p_nc >= 0.0 && p_nc <= 1.0)) {
        throw InvalidArgument("kappa_temporal inputs must lie in [0,1]");
    }
    if (p_nc == 1.0) return std::nullopt;
    return (p0 - p_nc) / (1.0 - p_nc);
}

std::optional<double> kappa_temporal(std::uint64_t correct, std::uint64_t nc_correct, std::uint64_t n) {
    if (correct > n || nc_correct > n) throw InvalidArgument("correct counts exceed the total");
    if (n == 0 || nc_correct == n) return std::nullopt;
    const double num = static_cast<double>(correct) - static_cast<double>(nc_correct);
    return num / static_cast<double>(n - nc_correct);
}

MetricAccumulator::MetricAccumulator(std::size_t n_classes, std::size_t window, double alpha)
    : window_(window), alpha_(alpha), cumulative_(n_classes), window_matrix_(n_classes) {
    if (window < 1) throw InvalidArgument("metric window must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("fading factor must lie in (0,1]");
}

void MetricAccumulator::update(ClassLabel predicted, ClassLabel truth, ClassLabel no_change_predicted) {
    cumulative_.add(predicted, truth);
    window_matrix_.add(predicted, truth);
    const bool nc = no_change_predicted == truth;
    nc_correct_ += nc;
    window_nc_correct_ += nc;
    buffer_.push_back({predicted, truth, nc});
    if (buffer_.size() > window_) {
        const auto& old = buffer_.front();
        window_matrix_.remove(old.predicted, old.truth);
        window_nc_correct_ -= old.nc_correct;
        buffer_.pop_front();
    }
    faded_correct_ = alpha_ * faded_correct_ + (predicted == truth ? 1.0 : 0.0);
    faded_count_ = alpha_ * faded_count_ + 1.0;
}

std::optional<double> MetricAccumulator::kappa_temporal() const {
    return dls::kappa_temporal(cumulative_.correct(), nc_correct_, cumulative_.total());
}

std::optional<double> MetricAccumulator::window_kappa_temporal() const {
    return dls::kappa_temporal(window_matrix_.correct(), window_nc_correct_, window_matrix_.total());
}

std::optional<double> MetricAccumulator::faded_accuracy() const {
    if (faded_count_ == 0.0) return std::nullopt;
    return faded_correct_ / faded_count_;
}

}  // namespace dls
