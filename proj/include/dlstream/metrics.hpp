#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "dlstream/stream_model.hpp"

namespace dls {

/// Square count matrix, rows = true class, columns = predicted class.
class ConfusionMatrix {
  public:
    explicit ConfusionMatrix(std::size_t n_classes = 2);

    void add(ClassLabel predicted, ClassLabel truth);
    void remove(ClassLabel predicted, ClassLabel truth);
    void clear();

    std::size_t n_classes() const { return n_; }
    std::uint64_t at(ClassLabel truth, ClassLabel predicted) const { return cells_.at(truth * n_ + predicted); }
    std::uint64_t total() const { return total_; }
    std::uint64_t correct() const;
    std::uint64_t row_sum(ClassLabel truth) const;
    std::uint64_t col_sum(ClassLabel predicted) const;
    /// Undefined on an empty matrix.
    std::optional<double> accuracy() const;

    static ConfusionMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows);

  private:
    std::size_t n_;
    std::vector<std::uint64_t> cells_;
    std::uint64_t total_ = 0;
};

/// Cohen's kappa, evaluated from integer counts as
/// (N * sum_diag - sum_c r_c k_c) / (N^2 - sum_c r_c k_c).
/// Undefined for an empty matrix or when chance agreement is 1.
std::optional<double> kappa(const ConfusionMatrix& m);

/// (p0 - p_nc) / (1 - p_nc); Undefined when p_nc == 1. Throws InvalidArgument
/// when either input lies outside [0,1].
std::optional<double> kappa_temporal(double p0, double p_nc);

/// Count form, exact up to the final division: (c - c_nc) / (n - c_nc).
std::optional<double> kappa_temporal(std::uint64_t correct, std::uint64_t nc_correct, std::uint64_t n);

/// Streaming measures for one prediction type: cumulative confusion matrix,
/// a sliding window of the last w outcomes, and fading-factor accuracy.
class MetricAccumulator {
  public:
    MetricAccumulator(std::size_t n_classes, std::size_t window, double alpha);

    void update(ClassLabel predicted, ClassLabel truth, ClassLabel no_change_predicted);

    std::uint64_t count() const { return cumulative_.total(); }
    const ConfusionMatrix& cumulative() const { return cumulative_; }
    const ConfusionMatrix& windowed() const { return window_matrix_; }
    std::uint64_t no_change_correct() const { return nc_correct_; }
    std::uint64_t window_no_change_correct() const { return window_nc_correct_; }

    std::optional<double> accuracy() const { return cumulative_.accuracy(); }
    std::optional<double> kappa() const { return dls::kappa(cumulative_); }
    std::optional<double> kappa_temporal() const;
    std::optional<double> window_accuracy() const { return window_matrix_.accuracy(); }
    std::optional<double> window_kappa() const { return dls::kappa(window_matrix_); }
    std::optional<double> window_kappa_temporal() const;
    /// S / N with S <- alpha S + correct, N <- alpha N + 1.
    std::optional<double> faded_accuracy() const;

    std::size_t window() const { return window_; }
    double alpha() const { return alpha_; }

  private:
    struct Outcome {
        ClassLabel predicted;
        ClassLabel truth;
        bool nc_correct;
    };

    std::size_t window_;
    double alpha_;
    ConfusionMatrix cumulative_;
    ConfusionMatrix window_matrix_;
    std::deque<Outcome> buffer_;
    std::uint64_t nc_correct_ = 0;
    std::uint64_t window_nc_correct_ = 0;
    double faded_correct_ = 0.0;
    double faded_count_ = 0.0;
};

}  // namespace dls
