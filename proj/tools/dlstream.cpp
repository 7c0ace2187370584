// dlstream: batch driver for delayed partially labelled stream benchmarks.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "dlstream/bounds.hpp"
#include "dlstream/errors.hpp"
#include "dlstream/replay.hpp"
#include "dlstream/run_config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalidConfig = 2;

void print_violations(const std::vector<std::string>& violations) {
    for (const auto& v : violations) std::cerr << "invalid config: " << v << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evaluate stream learners under delayed and partial labelling"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "results";
    std::uint64_t seed = 0;
    std::size_t jobs = 0;
    bool validate_only = false;

    auto* run = app.add_subcommand("run", "run the benchmark grid described by a config file");
    run->add_option("--config", config_path, "JSON run configuration")->required();
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    auto* seed_opt = run->add_option("--seed", seed, "master seed (overrides the config)");
    auto* jobs_opt = run->add_option("--jobs", jobs, "parallel evaluation tasks (overrides the config)")
                         ->check(CLI::PositiveNumber);
    run->add_flag("--validate-only", validate_only, "check the config and exit");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "list every violation in a config file");
    validate->add_option("config", validate_path, "JSON run configuration")->required();

    std::vector<double> epsilons{0.05};
    std::vector<double> deltas{0.1, 0.05};
    std::vector<double> exponents{2.0};
    auto* bounds = app.add_subcommand("bounds", "minimal labelled sample sizes and generalization gaps");
    bounds->add_option("--epsilon", epsilons, "divergence tolerances")->capture_default_str();
    bounds->add_option("--delta", deltas, "probability bounds")->capture_default_str();
    bounds->add_option("--c", exponents, "shattering exponents (N(F,2n) = n^c)")->capture_default_str();

    std::string gen_config;
    std::string gen_stream;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "write one configured stream as a replay file");
    gen->add_option("--config", gen_config, "JSON run configuration")->required();
    gen->add_option("--stream", gen_stream, "stream id (default: first stream)");
    gen->add_option("--out", gen_out, "replay file to write")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            const auto parsed = dls::load_run_config(validate_path);
            if (parsed.violations.empty()) {
                std::cout << "valid\n";
                return kExitOk;
            }
            for (const auto& v : parsed.violations) std::cout << v << '\n';
            return kExitInvalidConfig;
        }

        if (*bounds) {
            std::printf("%10s %10s %6s %12s %8s %12s\n", "epsilon", "delta", "c", "n_min", "trivial", "gap(n_min)");
            for (double e : epsilons) {
                for (double d : deltas) {
                    for (double c : exponents) {
                        const dls::BoundQuery q{e, d, c};
                        const auto n = dls::min_sample_size(q);
                        std::printf("%10g %10g %6g %12llu %8s %12.6f\n", e, d, c, static_cast<unsigned long long>(n.n),
                                    n.trivially_satisfied ? "yes" : "no", dls::generalization_gap(n.n, d, c));
                    }
                }
            }
            return kExitOk;
        }

        if (*gen) {
            const auto parsed = dls::load_run_config(gen_config);
            if (!parsed.config) {
                print_violations(parsed.violations);
                return kExitInvalidConfig;
            }
            const auto streams = dls::materialize_streams(*parsed.config);
            for (const auto& s : streams) {
                if (gen_stream.empty() || s.id == gen_stream) {
                    dls::write_replay_file(gen_out, s.section);
                    std::cout << "wrote " << s.section.events.size() << " events of " << s.id << " to " << gen_out << '\n';
                    return kExitOk;
                }
            }
            std::cerr << "no stream with id '" << gen_stream << "'\n";
            return kExitInvalidConfig;
        }

        auto parsed = dls::load_run_config(config_path);
        if (!parsed.config) {
            print_violations(parsed.violations);
            return kExitInvalidConfig;
        }
        auto& cfg = *parsed.config;
        if (*seed_opt) cfg.seed = seed;
        if (*jobs_opt) cfg.jobs = jobs;
        if (validate_only) {
            std::cout << "valid\n";
            return kExitOk;
        }
        const auto outcome = dls::execute_run(cfg, dls::to_json(cfg), out_dir);
        if (outcome.exit_code != 0) {
            std::cerr << "run failed: " << outcome.message << " (partial results in " << out_dir << ")\n";
        } else {
            std::cout << "results written to " << out_dir << '\n';
        }
        return outcome.exit_code;
    } catch (const dls::InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
