#pragma once

// Single-pass evaluation of one learner on one delayed, partially labelled
// stream with initial / periodic / final predictions.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlstream/learners.hpp"
#include "dlstream/metrics.hpp"
#include "dlstream/stream_model.hpp"

namespace dls {

enum class PredictionType { Initial = 0, Periodic = 1, Final = 2 };

std::string_view to_string(PredictionType t);

/// When to re-predict the pending instances after a delayed label arrives.
struct PeriodicPolicy {
    enum class Kind { EveryLabel, Batch, None };
    Kind kind = Kind::EveryLabel;
    /// Batch only: re-predict after every `batch` delayed labels.
    std::uint64_t batch = 1;

    static PeriodicPolicy every_label() { return {Kind::EveryLabel, 1}; }
    static PeriodicPolicy every(std::uint64_t b) { return {Kind::Batch, b}; }
    static PeriodicPolicy none() { return {Kind::None, 0}; }
    std::string describe() const;
};

struct EvalConfig {
    std::size_t window = 1000;
    double alpha = 0.995;
    PeriodicPolicy periodic;
    /// Prediction types that are scored; unscored types are still produced.
    std::array<bool, 3> score = {true, true, true};
    /// Keep every full timeline in the result (tests and small runs only).
    bool keep_timelines = false;
};

void validate_eval_config(const EvalConfig& config);

struct TimedPrediction {
    Prediction prediction;
    Tick tick = 0;
};

struct PredictionTimeline {
    InstanceId id = 0;
    TimedPrediction initial;
    std::vector<TimedPrediction> periodic;
    std::optional<TimedPrediction> final;
};

struct MetricRow {
    PredictionType type = PredictionType::Initial;
    std::string measure;
    /// Index of the block of `window` scored predictions; nullopt = cumulative.
    std::optional<std::uint64_t> window;
    std::optional<double> value;
};

struct DriftEvent {
    Tick tick = 0;
    std::size_t member = 0;

    bool operator==(const DriftEvent&) const = default;
};

struct EvalResult {
    std::vector<MetricRow> rows;
    std::vector<DriftEvent> drifts;
    /// Completed timelines in label-arrival order, then still-pending ones by id.
    std::vector<PredictionTimeline> timelines;
    std::uint64_t events_consumed = 0;
    std::uint64_t train_calls = 0;
    std::uint64_t unlabelled_train_calls = 0;
    std::size_t model_size = 0;
    double wall_seconds = 0.0;
    /// Left pending at stream end (label never arrived).
    std::uint64_t pending_at_end = 0;

    /// Value of a cumulative measure; NotFound if absent.
    std::optional<double> cumulative(PredictionType type, std::string_view measure) const;
    /// Window rows of one measure, in window order.
    std::vector<std::optional<double>> windows(PredictionType type, std::string_view measure) const;
};

/// Replays `stream` once through `method`.
///
/// Instance: record the initial prediction, add to the pending set, then
/// train_unlabelled. Delayed label: record the final prediction, score
/// initial/periodic/final, drop the instance from the pending set, re-predict
/// pending instances per the periodic policy, then train. A label in the same
/// tick as its instance reuses the initial prediction as the final one. An
/// oracle label only trains. The No-Change reference predicts the last true
/// label delivered to the learner (class 0 before any) at each prediction tick.
///
/// Throws ProtocolViolation on a label for an unseen or already labelled instance.
EvalResult run_stream_eval(const StreamSection& stream, Learner& method, const EvalConfig& config);

}  // namespace dls
