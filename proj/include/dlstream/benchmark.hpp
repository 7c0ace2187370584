#pragma once

// Benchmark grid: streams x methods x label-removal probabilities x runs,
// covering both reference-baseline scenarios (label removal and
// unlabelled-instance removal).

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dlstream/drift.hpp"
#include "dlstream/evaluation.hpp"
#include "dlstream/learners.hpp"
#include "dlstream/ssl.hpp"
#include "dlstream/stream_model.hpp"

namespace dls {

enum class MethodKind { NaiveBayes, NoChange, Majority, SelfTraining, ClusterThenLabel, AdwinBagging };
enum class MethodRole { Ssl, Fs };

/// Declarative learner description; wrappers (self-training, ensemble) hold
/// exactly one base spec.
struct MethodSpec {
    std::string id;
    MethodRole role = MethodRole::Fs;
    MethodKind kind = MethodKind::NaiveBayes;
    SelfTrainingConfig self_training;
    ClusterModelConfig cluster;
    EnsembleConfig ensemble;  // seed is replaced per task
    std::vector<MethodSpec> base;
};

std::string_view to_string(MethodKind k);
std::string_view to_string(MethodRole r);

/// Builds a fresh learner; `seed` feeds any randomized component.
std::unique_ptr<Learner> make_learner(const MethodSpec& spec, const Schema& schema, std::uint64_t seed);

struct NamedStream {
    std::string id;
    StreamSection section;
};

struct BenchmarkConfig {
    std::vector<double> p_u_grid;
    std::uint64_t runs = 1;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    EvalConfig eval;
};

struct ReportRow {
    std::string stream;
    std::string method;
    std::string scenario;
    std::optional<double> p_u;
    std::string run;
    PredictionType type = PredictionType::Initial;
    std::string measure;
    std::optional<std::uint64_t> window;
    std::optional<double> value;
};

struct DriftRow {
    std::string stream;
    std::string method;
    std::optional<double> p_u;
    std::string run;
    Tick tick = 0;
    std::size_t member = 0;
};

struct TaskRecord {
    std::string stream;
    std::string method;
    std::string scenario;
    std::optional<double> p_u;
    std::uint64_t run = 0;
    std::uint64_t method_seed = 0;
    std::uint64_t stream_seed = 0;
    double wall_seconds = 0.0;
    std::size_t model_size = 0;
    std::uint64_t events_consumed = 0;
    std::uint64_t stream_events = 0;
    bool ok = true;
    std::string error;
};

struct EvalReport {
    std::vector<ReportRow> rows;
    std::vector<DriftRow> drifts;
    std::vector<TaskRecord> tasks;
    std::vector<std::pair<std::string, StreamStats>> stream_stats;

    bool failed() const;
};

/// Scenario labels in the results:
///   original  SSL methods on the stream as given          (p_u NA, run 0)
///   ufs       FS methods on F_L(stream)                   (p_u NA, run 0)
///   ssl       SSL methods on F_U(F_L(stream), p_u)        (run 1..R)
///   lfs       FS methods on F_L(F_U(F_L(stream), p_u))    (run 1..R)
/// plus run = "mean" / "std" aggregates of the cumulative ssl and lfs rows,
/// and per-pair comparison rows under scenarios label_removal (ufs vs ssl)
/// and unlabelled_instance_removal (lfs vs ssl).
///
/// Sub-seeds: F_U uses derive_seed(seed, {q, 1 + i, r}); methods use
/// derive_seed(seed, {q, 0, 0, m}) on base streams and
/// derive_seed(seed, {q, 1 + i, r, m}) on derived ones. Rows are emitted in
/// task order regardless of `jobs`. A task that throws is recorded as failed.
EvalReport benchmark_matrix(const std::vector<NamedStream>& streams, const std::vector<MethodSpec>& methods,
                            const BenchmarkConfig& config);

void write_results_csv(std::ostream& out, const EvalReport& report);
void write_drifts_csv(std::ostream& out, const EvalReport& report);

inline constexpr const char* kResultsHeader = "stream,method,scenario,p_u,run,pred_type,measure,window,value";
inline constexpr const char* kDriftsHeader = "stream,method,p_u,run,tick,member";

}  // namespace dls
