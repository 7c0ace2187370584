#include "dlstream/benchmark.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>

#include "dlstream/errors.hpp"
#include "dlstream/replay.hpp"

namespace dls {

std::string_view to_string(MethodKind k) {
    switch (k) {
        case MethodKind::NaiveBayes: return "naive_bayes";
        case MethodKind::NoChange: return "no_change";
        case MethodKind::Majority: return "majority";
        case MethodKind::SelfTraining: return "self_training";
        case MethodKind::ClusterThenLabel: return "cluster_then_label";
        case MethodKind::AdwinBagging: return "adwin_bagging";
    }
    return "?";
}

std::string_view to_string(MethodRole r) { return r == MethodRole::Ssl ? "ssl" : "fs"; }

std::unique_ptr<Learner> make_learner(const MethodSpec& spec, const Schema& schema, std::uint64_t seed) {
    auto base = [&]() -> std::unique_ptr<Learner> {
        if (spec.base.size() != 1) throw InvalidArgument("method '" + spec.id + "' needs exactly one base learner");
        return make_learner(spec.base.front(), schema, derive_seed(seed, {0}));
    };
    switch (spec.kind) {
        case MethodKind::NaiveBayes: return std::make_unique<NaiveBayes>(schema);
        case MethodKind::NoChange: return std::make_unique<NoChange>(schema.n_classes());
        case MethodKind::Majority: return std::make_unique<MajorityClass>(schema.n_classes());
        case MethodKind::ClusterThenLabel: return std::make_unique<ClusterThenLabel>(schema, spec.cluster);
        case MethodKind::SelfTraining: return std::make_unique<SelfTraining>(base(), schema, spec.self_training);
        case MethodKind::AdwinBagging: {
            EnsembleConfig cfg = spec.ensemble;
            cfg.seed = seed;
            return std::make_unique<AdwinBagging>(*base(), schema.n_classes(), cfg);
        }
    }
    throw InvalidArgument("unknown method kind");
}

bool EvalReport::failed() const {
    for (const auto& t : tasks) {
        if (!t.ok) return true;
    }
    return false;
}

namespace {

enum class Scenario { Original, Ufs, Ssl, Lfs };

std::string_view scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Original: return "original";
        case Scenario::Ufs: return "ufs";
        case Scenario::Ssl: return "ssl";
        case Scenario::Lfs: return "lfs";
    }
    return "?";
}

struct Task {
    std::size_t q = 0;
    std::size_t m = 0;
    Scenario scenario = Scenario::Original;
    std::size_t pu = 0;  // index into the grid; derived scenarios only
    std::uint64_t run = 0;
    const StreamSection* section = nullptr;
    std::uint64_t stream_seed = 0;
};

struct Key {
    std::size_t q, m;
    Scenario scenario;
    std::size_t pu;
    std::uint64_t run;
    auto operator<=>(const Key&) const = default;
};

std::string fmt_opt(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

void validate_benchmark(const std::vector<NamedStream>& streams, const std::vector<MethodSpec>& methods,
                        const BenchmarkConfig& config) {
    if (methods.empty()) throw InvalidArgument("benchmark needs at least one method");
    if (streams.empty()) throw InvalidArgument("benchmark needs at least one stream");
    if (config.runs < 1) throw InvalidArgument("runs must be >= 1");
    for (double p : config.p_u_grid) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p_u values must lie in [0,1]");
    }
    validate_eval_config(config.eval);
}

}  // namespace

EvalReport benchmark_matrix(const std::vector<NamedStream>& streams, const std::vector<MethodSpec>& methods,
                            const BenchmarkConfig& config) {
    validate_benchmark(streams, methods, config);
    const std::size_t n_pu = config.p_u_grid.size();

    // Derived streams are built once, sequentially, before any evaluation.
    std::vector<StreamSection> ufs(streams.size());
    std::map<std::tuple<std::size_t, std::size_t, std::uint64_t>, std::pair<StreamSection, StreamSection>> derived;
    std::map<std::tuple<std::size_t, std::size_t, std::uint64_t>, std::uint64_t> derived_seed;
    for (std::size_t q = 0; q < streams.size(); ++q) {
        ufs[q] = drop_unlabelled(streams[q].section);
        for (std::size_t i = 0; i < n_pu; ++i) {
            for (std::uint64_t r = 1; r <= config.runs; ++r) {
                const std::uint64_t s = derive_seed(config.seed, {q, 1 + i, r});
                StreamSection ssl = remove_labels(ufs[q], config.p_u_grid[i], s);
                StreamSection lfs = drop_unlabelled(ssl);
                derived.emplace(std::tuple{q, i, r}, std::pair{std::move(ssl), std::move(lfs)});
                derived_seed.emplace(std::tuple{q, i, r}, s);
            }
        }
    }

    std::vector<Task> tasks;
    for (std::size_t q = 0; q < streams.size(); ++q) {
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const bool ssl = methods[m].role == MethodRole::Ssl;
            tasks.push_back({q, m, ssl ? Scenario::Original : Scenario::Ufs, 0, 0,
                             ssl ? &streams[q].section : &ufs[q], 0});
        }
        for (std::size_t i = 0; i < n_pu; ++i) {
            for (std::uint64_t r = 1; r <= config.runs; ++r) {
                const auto& [ssl_sec, lfs_sec] = derived.at({q, i, r});
                for (std::size_t m = 0; m < methods.size(); ++m) {
                    const bool ssl = methods[m].role == MethodRole::Ssl;
                    tasks.push_back({q, m, ssl ? Scenario::Ssl : Scenario::Lfs, i, r, ssl ? &ssl_sec : &lfs_sec,
                                     derived_seed.at({q, i, r})});
                }
            }
        }
    }

    std::vector<std::optional<EvalResult>> results(tasks.size());
    std::vector<TaskRecord> records(tasks.size());
    auto method_seed = [&](const Task& t) {
        return t.scenario == Scenario::Original || t.scenario == Scenario::Ufs
                   ? derive_seed(config.seed, {t.q, 0, 0, t.m})
                   : derive_seed(config.seed, {t.q, 1 + t.pu, t.run, t.m});
    };
    auto execute = [&](std::size_t k) {
        const Task& t = tasks[k];
        TaskRecord& rec = records[k];
        rec.stream = streams[t.q].id;
        rec.method = methods[t.m].id;
        rec.scenario = std::string(scenario_name(t.scenario));
        if (t.scenario == Scenario::Ssl || t.scenario == Scenario::Lfs) rec.p_u = config.p_u_grid[t.pu];
        rec.run = t.run;
        rec.method_seed = method_seed(t);
        rec.stream_seed = t.stream_seed;
        rec.stream_events = t.section->events.size();
        try {
            auto learner = make_learner(methods[t.m], t.section->schema, rec.method_seed);
            EvalResult res = run_stream_eval(*t.section, *learner, config.eval);
            rec.wall_seconds = res.wall_seconds;
            rec.model_size = res.model_size;
            rec.events_consumed = res.events_consumed;
            results[k] = std::move(res);
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
        }
    };

    const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, tasks.size()));
    if (jobs == 1) {
        for (std::size_t k = 0; k < tasks.size(); ++k) execute(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < tasks.size(); k = next++) execute(k);
            });
        }
        for (auto& th : pool) th.join();
    }

    EvalReport report;
    report.tasks = records;
    for (const auto& s : streams) report.stream_stats.emplace_back(s.id, compute_stats(s.section, config.eval.window));

    std::map<Key, const EvalResult*> by_key;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        const Task& t = tasks[k];
        const TaskRecord& rec = records[k];
        if (!results[k]) continue;
        by_key[{t.q, t.m, t.scenario, t.pu, t.run}] = &*results[k];
        const std::string run = std::to_string(t.run);
        for (const auto& r : results[k]->rows) {
            report.rows.push_back({rec.stream, rec.method, rec.scenario, rec.p_u, run, r.type, r.measure, r.window, r.value});
        }
        for (const auto& d : results[k]->drifts) {
            report.drifts.push_back({rec.stream, rec.method, rec.p_u, run, d.tick, d.member});
        }
    }

    auto cumulative = [&](const Key& key, PredictionType type, std::string_view measure) -> std::optional<double> {
        auto it = by_key.find(key);
        if (it == by_key.end()) return std::nullopt;
        for (const auto& r : it->second->rows) {
            if (r.type == type && !r.window && r.measure == measure) return r.value;
        }
        return std::nullopt;
    };

    // Mean and sample standard deviation of cumulative rows over runs.
    for (std::size_t q = 0; q < streams.size(); ++q) {
        for (std::size_t i = 0; i < n_pu; ++i) {
            for (std::size_t m = 0; m < methods.size(); ++m) {
                const Scenario sc = methods[m].role == MethodRole::Ssl ? Scenario::Ssl : Scenario::Lfs;
                const auto first = by_key.find({q, m, sc, i, 1});
                if (first == by_key.end()) continue;
                for (const auto& proto : first->second->rows) {
                    if (proto.window) continue;
                    std::vector<double> vals;
                    for (std::uint64_t r = 1; r <= config.runs; ++r) {
                        if (auto v = cumulative({q, m, sc, i, r}, proto.type, proto.measure)) vals.push_back(*v);
                    }
                    std::optional<double> mean, sd;
                    if (!vals.empty()) {
                        double s = 0.0;
                        for (double v : vals) s += v;
                        mean = s / static_cast<double>(vals.size());
                    }
                    if (vals.size() >= 2) {
                        double ss = 0.0;
                        for (double v : vals) ss += (v - *mean) * (v - *mean);
                        sd = std::sqrt(ss / static_cast<double>(vals.size() - 1));
                    }
                    const std::string sname(scenario_name(sc));
                    report.rows.push_back({streams[q].id, methods[m].id, sname, config.p_u_grid[i], "mean", proto.type,
                                           proto.measure, std::nullopt, mean});
                    report.rows.push_back({streams[q].id, methods[m].id, sname, config.p_u_grid[i], "std", proto.type,
                                           proto.measure, std::nullopt, sd});
                }
            }
        }
    }

    // Reference-baseline comparisons: Ψ_UFS as the expected upper bound and
    // Ψ_LFS as the expected lower bound of each SSL run.
    for (std::size_t q = 0; q < streams.size(); ++q) {
        for (std::size_t i = 0; i < n_pu; ++i) {
            for (std::size_t s = 0; s < methods.size(); ++s) {
                if (methods[s].role != MethodRole::Ssl) continue;
                for (std::size_t f = 0; f < methods.size(); ++f) {
                    if (methods[f].role != MethodRole::Fs) continue;
                    const std::string pair = methods[f].id + "|" + methods[s].id;
                    for (int ti = 0; ti < 3; ++ti) {
                        const auto type = static_cast<PredictionType>(ti);
                        if (!config.eval.score[ti]) continue;
                        const auto upper = cumulative({q, f, Scenario::Ufs, 0, 0}, type, "accuracy");
                        for (const bool label_removal : {true, false}) {
                            const char* scen = label_removal ? "label_removal" : "unlabelled_instance_removal";
                            const char* measure = label_removal ? "upper_bound_holds" : "lower_bound_holds";
                            double hits = 0.0;
                            std::uint64_t defined = 0;
                            for (std::uint64_t r = 1; r <= config.runs; ++r) {
                                const auto ssl_acc = cumulative({q, s, Scenario::Ssl, i, r}, type, "accuracy");
                                const auto ref = label_removal ? upper : cumulative({q, f, Scenario::Lfs, i, r}, type, "accuracy");
                                std::optional<double> holds;
                                if (ssl_acc && ref) {
                                    holds = label_removal ? (*ref > *ssl_acc ? 1.0 : 0.0) : (*ref < *ssl_acc ? 1.0 : 0.0);
                                    hits += *holds;
                                    ++defined;
                                }
                                report.rows.push_back({streams[q].id, pair, scen, config.p_u_grid[i], std::to_string(r), type,
                                                       measure, std::nullopt, holds});
                            }
                            std::optional<double> rate;
                            if (defined) rate = hits / static_cast<double>(defined);
                            report.rows.push_back({streams[q].id, pair, scen, config.p_u_grid[i], "mean", type, measure,
                                                   std::nullopt, rate});
                        }
                    }
                }
            }
        }
    }
    return report;
}

void write_results_csv(std::ostream& out, const EvalReport& report) {
    out << kResultsHeader << '\n';
    for (const auto& r : report.rows) {
        out << r.stream << ',' << r.method << ',' << r.scenario << ',' << fmt_opt(r.p_u) << ',' << r.run << ','
            << to_string(r.type) << ',' << r.measure << ',' << (r.window ? std::to_string(*r.window) : "CUMULATIVE") << ','
            << fmt_opt(r.value) << '\n';
    }
}

void write_drifts_csv(std::ostream& out, const EvalReport& report) {
    out << kDriftsHeader << '\n';
    for (const auto& d : report.drifts) {
        out << d.stream << ',' << d.method << ',' << fmt_opt(d.p_u) << ',' << d.run << ',' << d.tick << ',' << d.member
            << '\n';
    }
}

}  // namespace dls
