#pragma once

// JSON run configuration: parsing with field-level diagnostics, stream
// materialization and the batch run that writes results, drifts and metadata.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dlstream/benchmark.hpp"
#include "dlstream/generators.hpp"

namespace dls {

struct StreamConfig {
    enum class Type { Agrawal, Hyperplane, Replay };

    std::string id;
    Type type = Type::Agrawal;
    DriftSchedule schedule;       // generated streams
    std::filesystem::path path;   // replay streams, resolved against the config directory
    std::optional<DelayPolicy> delay;
};

struct RunConfig {
    std::uint64_t seed = 1;
    std::uint64_t runs = 5;
    std::vector<double> p_u = {0.90, 0.95, 0.99};
    std::size_t jobs = 1;
    EvalConfig eval;
    std::vector<StreamConfig> streams;
    std::vector<MethodSpec> methods;
};

struct ConfigParse {
    std::optional<RunConfig> config;
    /// "<field path>: <problem>", one per violation; empty when valid.
    std::vector<std::string> violations;
};

/// `base_dir` anchors relative replay paths.
ConfigParse parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ConfigParse load_run_config(const std::filesystem::path& path);

/// The effective configuration with every default filled in.
nlohmann::json to_json(const RunConfig& config);

/// Stream q is generated with derive_seed(seed, {q}); replay files are read as
/// is and re-timed only when a delay is configured.
std::vector<NamedStream> materialize_streams(const RunConfig& config, std::vector<std::uint64_t>* seeds = nullptr);

struct RunOutcome {
    int exit_code = 0;
    std::string message;
};

/// Runs the benchmark grid and writes results.csv, drifts.csv and
/// metadata.json into `out_dir`. Exit code 0 on success, 1 when any task (or
/// stream construction) fails; partial results are still written and the
/// metadata status is "FAILED".
RunOutcome execute_run(const RunConfig& config, const nlohmann::json& effective, const std::filesystem::path& out_dir);

}  // namespace dls
