#include "dlstream/run_config.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "dlstream/errors.hpp"
#include "dlstream/replay.hpp"
#include "dlstream/rng.hpp"

namespace dls {

using nlohmann::json;

namespace {

class Reader {
  public:
    explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

    void error(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }

    bool object(const json& v, const std::string& path) {
        if (v.is_object()) return true;
        error(path, "must be an object");
        return false;
    }

    void known_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool ok = false;
            for (const char* k : keys) ok = ok || it.key() == k;
            if (!ok) error(join(path, it.key()), "unknown field");
        }
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    std::uint64_t uint(const json& obj, const std::string& key, const std::string& path, std::uint64_t fallback,
                       std::uint64_t min = 0) {
        if (!obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            error(join(path, key), "must be a non-negative integer");
            return fallback;
        }
        const auto x = v.get<std::uint64_t>();
        if (x < min) {
            error(join(path, key), "must be >= " + std::to_string(min));
            return fallback;
        }
        return x;
    }

    double number(const json& obj, const std::string& key, const std::string& path, double fallback,
                  const std::function<bool(double)>& valid, const std::string& requirement) {
        if (!obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_number()) {
            error(join(path, key), "must be a number");
            return fallback;
        }
        const double x = v.get<double>();
        if (!valid(x)) {
            error(join(path, key), requirement);
            return fallback;
        }
        return x;
    }

    std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path, bool required) {
        if (!obj.contains(key)) {
            if (required) error(join(path, key), "is required");
            return std::nullopt;
        }
        if (!obj.at(key).is_string()) {
            error(join(path, key), "must be a string");
            return std::nullopt;
        }
        return obj.at(key).get<std::string>();
    }

    bool boolean(const json& obj, const std::string& key, const std::string& path, bool fallback) {
        if (!obj.contains(key)) return fallback;
        if (!obj.at(key).is_boolean()) {
            error(join(path, key), "must be true or false");
            return fallback;
        }
        return obj.at(key).get<bool>();
    }

  private:
    std::vector<std::string>& errors_;
};

bool valid_id(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r' || c == '|') return false;
    }
    return true;
}

std::optional<DelayPolicy> parse_delay(Reader& rd, const json& v, const std::string& path) {
    if (!rd.object(v, path)) return std::nullopt;
    rd.known_keys(v, path, {"mode", "ticks", "min", "max"});
    const auto mode = rd.string(v, "mode", path, true);
    if (!mode) return std::nullopt;
    if (*mode == "immediate") return DelayPolicy::immediate();
    if (*mode == "fixed") {
        if (!v.contains("ticks")) {
            rd.error(Reader::join(path, "ticks"), "is required for a fixed delay");
            return std::nullopt;
        }
        return DelayPolicy::fixed(rd.uint(v, "ticks", path, 0));
    }
    if (*mode == "uniform") {
        const auto lo = rd.uint(v, "min", path, 0);
        const auto hi = rd.uint(v, "max", path, 0);
        if (lo > hi) {
            rd.error(Reader::join(path, "min"), "must not exceed max");
            return std::nullopt;
        }
        return DelayPolicy::uniform(lo, hi);
    }
    rd.error(Reader::join(path, "mode"), "must be one of immediate, fixed, uniform");
    return std::nullopt;
}

std::optional<StreamConfig> parse_stream(Reader& rd, const json& v, const std::string& path,
                                         const std::filesystem::path& base_dir) {
    if (!rd.object(v, path)) return std::nullopt;
    rd.known_keys(v, path, {"id", "type", "length", "segments", "delay", "path"});
    StreamConfig s;
    const auto id = rd.string(v, "id", path, true);
    const auto type = rd.string(v, "type", path, true);
    if (id) {
        if (!valid_id(*id)) rd.error(Reader::join(path, "id"), "must be non-empty without , \" | or newlines");
        s.id = *id;
    }
    if (v.contains("delay")) s.delay = parse_delay(rd, v.at("delay"), Reader::join(path, "delay"));
    if (!type) return std::nullopt;

    if (*type == "replay") {
        s.type = StreamConfig::Type::Replay;
        const auto p = rd.string(v, "path", path, true);
        if (p) {
            s.path = std::filesystem::path(*p).is_absolute() ? std::filesystem::path(*p) : base_dir / *p;
            if (!std::filesystem::is_regular_file(s.path)) {
                rd.error(Reader::join(path, "path"), "replay file not found: " + s.path.string());
            }
        }
        return s;
    }
    if (*type != "agrawal" && *type != "hyperplane") {
        rd.error(Reader::join(path, "type"), "must be one of agrawal, hyperplane, replay");
        return std::nullopt;
    }
    const bool agrawal = *type == "agrawal";
    s.type = agrawal ? StreamConfig::Type::Agrawal : StreamConfig::Type::Hyperplane;
    if (!v.contains("length")) rd.error(Reader::join(path, "length"), "is required");
    s.schedule.total_length = rd.uint(v, "length", path, 0, 1);
    const std::string seg_path = Reader::join(path, "segments");
    if (!v.contains("segments") || !v.at("segments").is_array() || v.at("segments").empty()) {
        rd.error(seg_path, "must be a non-empty array");
        return std::nullopt;
    }
    std::size_t i = 0;
    for (const auto& sv : v.at("segments")) {
        const std::string sp = seg_path + "[" + std::to_string(i++) + "]";
        if (!rd.object(sv, sp)) continue;
        DriftSegment seg;
        if (agrawal) {
            rd.known_keys(sv, sp, {"start", "function", "perturbation"});
            AgrawalConfig c;
            c.function_id = static_cast<int>(rd.uint(sv, "function", sp, 1, 1));
            if (c.function_id > 4) rd.error(Reader::join(sp, "function"), "must be 1..4");
            c.perturbation = rd.number(sv, "perturbation", sp, 0.0, [](double x) { return x >= 0.0 && x < 1.0; },
                                       "must lie in [0,1)");
            seg.config = c;
        } else {
            rd.known_keys(sv, sp, {"start", "dims", "magnitude", "noise"});
            HyperplaneConfig c;
            c.n_dims = rd.uint(sv, "dims", sp, 10, 2);
            c.magnitude_of_change = rd.number(sv, "magnitude", sp, 0.001, [](double x) { return x >= 0.0; }, "must be >= 0");
            c.noise = rd.number(sv, "noise", sp, 0.05, [](double x) { return x >= 0.0 && x < 1.0; }, "must lie in [0,1)");
            seg.config = c;
        }
        seg.start = rd.uint(sv, "start", sp, 0);
        s.schedule.segments.push_back(seg);
    }
    try {
        validate_schedule(s.schedule);
    } catch (const std::exception& e) {
        rd.error(seg_path, e.what());
    }
    return s;
}

std::optional<MethodKind> parse_kind(const std::string& k) {
    for (auto kind : {MethodKind::NaiveBayes, MethodKind::NoChange, MethodKind::Majority, MethodKind::SelfTraining,
                      MethodKind::ClusterThenLabel, MethodKind::AdwinBagging}) {
        if (to_string(kind) == k) return kind;
    }
    return std::nullopt;
}

std::optional<MethodSpec> parse_method(Reader& rd, const json& v, const std::string& path, bool top_level) {
    if (!rd.object(v, path)) return std::nullopt;
    rd.known_keys(v, path,
                  {"id", "kind", "role", "base", "score", "threshold", "strict", "max_clusters", "radius_factor", "size",
                   "lambda", "delta", "reset_on_increase_only"});
    MethodSpec m;
    if (top_level) {
        if (const auto id = rd.string(v, "id", path, true)) {
            if (!valid_id(*id)) rd.error(Reader::join(path, "id"), "must be non-empty without , \" | or newlines");
            m.id = *id;
        }
    }
    const auto kind_s = rd.string(v, "kind", path, true);
    if (!kind_s) return std::nullopt;
    const auto kind = parse_kind(*kind_s);
    if (!kind) {
        rd.error(Reader::join(path, "kind"),
                 "must be one of naive_bayes, no_change, majority, self_training, cluster_then_label, adwin_bagging");
        return std::nullopt;
    }
    m.kind = *kind;
    m.role = (m.kind == MethodKind::SelfTraining || m.kind == MethodKind::ClusterThenLabel) ? MethodRole::Ssl : MethodRole::Fs;
    if (const auto role = rd.string(v, "role", path, false)) {
        if (*role == "ssl") {
            m.role = MethodRole::Ssl;
        } else if (*role == "fs") {
            m.role = MethodRole::Fs;
        } else {
            rd.error(Reader::join(path, "role"), "must be ssl or fs");
        }
    }

    const bool wrapper = m.kind == MethodKind::SelfTraining || m.kind == MethodKind::AdwinBagging;
    if (wrapper) {
        if (!v.contains("base")) {
            rd.error(Reader::join(path, "base"), "is required for " + *kind_s);
        } else if (auto b = parse_method(rd, v.at("base"), Reader::join(path, "base"), false)) {
            m.base.push_back(std::move(*b));
        }
    } else if (v.contains("base")) {
        rd.error(Reader::join(path, "base"), "is only allowed for self_training and adwin_bagging");
    }

    if (m.kind == MethodKind::SelfTraining) {
        auto& st = m.self_training;
        if (const auto sc = rd.string(v, "score", path, false)) {
            if (*sc == "posterior") {
                st.score = ScoreKind::Posterior;
            } else if (*sc == "distance") {
                st.score = ScoreKind::Distance;
            } else {
                rd.error(Reader::join(path, "score"), "must be posterior or distance");
            }
        }
        st.strict = rd.boolean(v, "strict", path, false);
        if (v.contains("threshold")) {
            const std::string tp = Reader::join(path, "threshold");
            const json& t = v.at("threshold");
            if (rd.object(t, tp)) {
                rd.known_keys(t, tp, {"mode", "theta", "window"});
                const auto mode = rd.string(t, "mode", tp, false).value_or("fixed");
                if (mode != "fixed" && mode != "adaptive") rd.error(Reader::join(tp, "mode"), "must be fixed or adaptive");
                st.adaptive = mode == "adaptive";
                st.theta = rd.number(t, "theta", tp, st.theta, [](double x) { return x >= 0.0 && x <= 1.0; },
                                     "must lie in [0,1]");
                st.window = rd.uint(t, "window", tp, st.window, 1);
            }
        }
    }
    if (m.kind == MethodKind::ClusterThenLabel) {
        m.cluster.max_clusters = rd.uint(v, "max_clusters", path, m.cluster.max_clusters, 1);
        m.cluster.radius_factor = rd.number(v, "radius_factor", path, m.cluster.radius_factor,
                                            [](double x) { return x > 0.0 && std::isfinite(x); }, "must be > 0");
    }
    if (m.kind == MethodKind::AdwinBagging) {
        m.ensemble.size = rd.uint(v, "size", path, m.ensemble.size, 1);
        m.ensemble.lambda = rd.number(v, "lambda", path, m.ensemble.lambda,
                                      [](double x) { return x > 0.0 && std::isfinite(x); }, "must be > 0");
        m.ensemble.delta = rd.number(v, "delta", path, m.ensemble.delta, [](double x) { return x > 0.0 && x < 1.0; },
                                     "must lie in (0,1)");
        m.ensemble.reset_on_increase_only = rd.boolean(v, "reset_on_increase_only", path, m.ensemble.reset_on_increase_only);
    }
    if (!top_level) m.id = std::string(to_string(m.kind));
    return m;
}

void parse_metrics(Reader& rd, const json& v, EvalConfig& eval) {
    const std::string path = "metrics";
    if (!rd.object(v, path)) return;
    rd.known_keys(v, path, {"window", "alpha", "periodic", "score"});
    eval.window = rd.uint(v, "window", path, eval.window, 1);
    eval.alpha = rd.number(v, "alpha", path, eval.alpha, [](double x) { return x > 0.0 && x <= 1.0; }, "must lie in (0,1]");
    if (v.contains("periodic")) {
        const json& p = v.at("periodic");
        const std::string pp = "metrics.periodic";
        if (p.is_string() && p.get<std::string>() == "every_label") {
            eval.periodic = PeriodicPolicy::every_label();
        } else if (p.is_string() && p.get<std::string>() == "none") {
            eval.periodic = PeriodicPolicy::none();
        } else if (p.is_object() && p.contains("batch")) {
            rd.known_keys(p, pp, {"batch"});
            eval.periodic = PeriodicPolicy::every(rd.uint(p, "batch", pp, 1, 1));
        } else {
            rd.error(pp, "must be \"every_label\", \"none\" or {\"batch\": B}");
        }
    }
    if (v.contains("score")) {
        const json& s = v.at("score");
        if (!s.is_array()) {
            rd.error("metrics.score", "must be an array of prediction types");
            return;
        }
        eval.score = {false, false, false};
        for (const auto& t : s) {
            const std::string name = t.is_string() ? t.get<std::string>() : "";
            if (name == "initial") {
                eval.score[0] = true;
            } else if (name == "periodic") {
                eval.score[1] = true;
            } else if (name == "final") {
                eval.score[2] = true;
            } else {
                rd.error("metrics.score", "entries must be initial, periodic or final");
            }
        }
    }
}

json delay_json(const DelayPolicy& d) {
    switch (d.mode()) {
        case DelayPolicy::Mode::Immediate: return {{"mode", "immediate"}};
        case DelayPolicy::Mode::Fixed: return {{"mode", "fixed"}, {"ticks", d.min_delay()}};
        case DelayPolicy::Mode::RandomUniform: return {{"mode", "uniform"}, {"min", d.min_delay()}, {"max", d.max_delay()}};
    }
    return nullptr;
}

json method_json(const MethodSpec& m, bool top_level) {
    json j;
    if (top_level) {
        j["id"] = m.id;
        j["role"] = std::string(to_string(m.role));
    }
    j["kind"] = std::string(to_string(m.kind));
    switch (m.kind) {
        case MethodKind::SelfTraining:
            j["score"] = m.self_training.score == ScoreKind::Posterior ? "posterior" : "distance";
            j["threshold"] = {{"mode", m.self_training.adaptive ? "adaptive" : "fixed"},
                              {"theta", m.self_training.theta},
                              {"window", m.self_training.window}};
            j["strict"] = m.self_training.strict;
            break;
        case MethodKind::ClusterThenLabel:
            j["max_clusters"] = m.cluster.max_clusters;
            j["radius_factor"] = m.cluster.radius_factor;
            break;
        case MethodKind::AdwinBagging:
            j["size"] = m.ensemble.size;
            j["lambda"] = m.ensemble.lambda;
            j["delta"] = m.ensemble.delta;
            j["reset_on_increase_only"] = m.ensemble.reset_on_increase_only;
            break;
        default: break;
    }
    if (!m.base.empty()) j["base"] = method_json(m.base.front(), false);
    return j;
}

}  // namespace

ConfigParse parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
    ConfigParse out;
    Reader rd(out.violations);
    if (!rd.object(doc, "config")) return out;
    rd.known_keys(doc, "", {"seed", "runs", "p_u", "jobs", "metrics", "streams", "methods"});
    RunConfig cfg;
    cfg.seed = rd.uint(doc, "seed", "", cfg.seed);
    cfg.runs = rd.uint(doc, "runs", "", cfg.runs, 1);
    cfg.jobs = rd.uint(doc, "jobs", "", cfg.jobs, 1);
    if (doc.contains("p_u")) {
        const json& p = doc.at("p_u");
        if (!p.is_array()) {
            rd.error("p_u", "must be an array of probabilities");
        } else {
            cfg.p_u.clear();
            for (std::size_t i = 0; i < p.size(); ++i) {
                const std::string path = "p_u[" + std::to_string(i) + "]";
                if (!p[i].is_number()) {
                    rd.error(path, "must be a number");
                    continue;
                }
                const double x = p[i].get<double>();
                if (!(x >= 0.0 && x <= 1.0)) {
                    rd.error(path, "must lie in [0,1] (got " + format_double(x) + ")");
                    continue;
                }
                cfg.p_u.push_back(x);
            }
        }
    }
    if (doc.contains("metrics")) parse_metrics(rd, doc.at("metrics"), cfg.eval);

    std::set<std::string> ids;
    if (!doc.contains("streams") || !doc.at("streams").is_array() || doc.at("streams").empty()) {
        rd.error("streams", "must be a non-empty array");
    } else {
        std::size_t i = 0;
        for (const auto& s : doc.at("streams")) {
            const std::string path = "streams[" + std::to_string(i++) + "]";
            if (auto sc = parse_stream(rd, s, path, base_dir)) {
                if (!sc->id.empty() && !ids.insert(sc->id).second) rd.error(path + ".id", "duplicate stream id");
                cfg.streams.push_back(std::move(*sc));
            }
        }
    }
    ids.clear();
    if (!doc.contains("methods") || !doc.at("methods").is_array() || doc.at("methods").empty()) {
        rd.error("methods", "must be a non-empty array");
    } else {
        std::size_t i = 0;
        for (const auto& m : doc.at("methods")) {
            const std::string path = "methods[" + std::to_string(i++) + "]";
            if (auto ms = parse_method(rd, m, path, true)) {
                if (!ms->id.empty() && !ids.insert(ms->id).second) rd.error(path + ".id", "duplicate method id");
                cfg.methods.push_back(std::move(*ms));
            }
        }
    }
    if (out.violations.empty()) out.config = std::move(cfg);
    return out;
}

ConfigParse load_run_config(const std::filesystem::path& path) {
    ConfigParse out;
    std::ifstream in(path);
    if (!in) {
        out.violations.push_back("config: cannot open " + path.string());
        return out;
    }
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        out.violations.push_back(std::string("config: not valid JSON: ") + e.what());
        return out;
    }
    return parse_run_config(doc, path.parent_path());
}

json to_json(const RunConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["runs"] = c.runs;
    j["p_u"] = c.p_u;
    j["jobs"] = c.jobs;
    json score = json::array();
    for (int t = 0; t < 3; ++t) {
        if (c.eval.score[t]) score.push_back(std::string(to_string(static_cast<PredictionType>(t))));
    }
    json periodic;
    switch (c.eval.periodic.kind) {
        case PeriodicPolicy::Kind::EveryLabel: periodic = "every_label"; break;
        case PeriodicPolicy::Kind::None: periodic = "none"; break;
        case PeriodicPolicy::Kind::Batch: periodic = {{"batch", c.eval.periodic.batch}}; break;
    }
    j["metrics"] = {{"window", c.eval.window}, {"alpha", c.eval.alpha}, {"periodic", periodic}, {"score", score}};
    j["streams"] = json::array();
    for (const auto& s : c.streams) {
        json sj;
        sj["id"] = s.id;
        if (s.type == StreamConfig::Type::Replay) {
            sj["type"] = "replay";
            sj["path"] = s.path.string();
        } else {
            sj["type"] = s.type == StreamConfig::Type::Agrawal ? "agrawal" : "hyperplane";
            sj["length"] = s.schedule.total_length;
            sj["segments"] = json::array();
            for (const auto& seg : s.schedule.segments) {
                json g{{"start", seg.start}};
                if (const auto* a = std::get_if<AgrawalConfig>(&seg.config)) {
                    g["function"] = a->function_id;
                    g["perturbation"] = a->perturbation;
                } else {
                    const auto& h = std::get<HyperplaneConfig>(seg.config);
                    g["dims"] = h.n_dims;
                    g["magnitude"] = h.magnitude_of_change;
                    g["noise"] = h.noise;
                }
                sj["segments"].push_back(g);
            }
        }
        if (s.delay) {
            sj["delay"] = delay_json(*s.delay);
        } else if (s.type != StreamConfig::Type::Replay) {
            sj["delay"] = delay_json(DelayPolicy::immediate());
        }
        j["streams"].push_back(sj);
    }
    j["methods"] = json::array();
    for (const auto& m : c.methods) j["methods"].push_back(method_json(m, true));
    return j;
}

std::vector<NamedStream> materialize_streams(const RunConfig& config, std::vector<std::uint64_t>* seeds) {
    std::vector<NamedStream> out;
    for (std::size_t q = 0; q < config.streams.size(); ++q) {
        const auto& s = config.streams[q];
        const std::uint64_t seed = derive_seed(config.seed, {q});
        if (seeds) seeds->push_back(seed);
        NamedStream ns{s.id, {}};
        if (s.type == StreamConfig::Type::Replay) {
            ns.section = read_replay_file(s.path);
            if (s.delay && s.delay->mode() != DelayPolicy::Mode::Immediate) ns.section = inject_delay(ns.section, *s.delay, seed);
        } else {
            ns.section = generate(s.schedule, s.delay.value_or(DelayPolicy::immediate()), seed);
        }
        out.push_back(std::move(ns));
    }
    return out;
}

namespace {

json stats_json(const StreamStats& st) {
    json lat = json::object();
    for (const auto& [bucket, count] : st.latency_histogram) lat[std::to_string(bucket)] = count;
    return {{"n_instances", st.n_instances},
            {"n_labelled", st.n_labelled},
            {"n_unlabelled", st.n_unlabelled},
            {"n_oracle_labels", st.n_oracle_labels},
            {"class_histogram", st.class_histogram},
            {"latency_bucket_width", st.latency_bucket_width},
            {"latency_histogram", lat},
            {"labelled_fraction_window", st.labelled_fraction_window}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NotFound("cannot write " + path.string());
    out << text;
}

}  // namespace

RunOutcome execute_run(const RunConfig& config, const json& effective, const std::filesystem::path& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);
    json meta;
    meta["effective_config"] = effective;
    meta["rng_algorithm"] = std::string(kRngAlgorithm);
    meta["master_seed"] = config.seed;
    meta["periodic_policy"] = config.eval.periodic.describe();
    meta["versions"] = {{"dlstream", "1.0.0"}, {"compiler", __VERSION__}, {"cxx_standard", __cplusplus}};

    RunOutcome outcome;
    EvalReport report;
    std::vector<std::uint64_t> seeds;
    try {
        const auto streams = materialize_streams(config, &seeds);
        BenchmarkConfig bc;
        bc.p_u_grid = config.p_u;
        bc.runs = config.runs;
        bc.seed = config.seed;
        bc.jobs = config.jobs;
        bc.eval = config.eval;
        std::vector<MethodSpec> methods = config.methods;
        report = benchmark_matrix(streams, methods, bc);
        if (report.failed()) {
            outcome.exit_code = 1;
            outcome.message = "one or more evaluation tasks failed";
        }
    } catch (const std::exception& e) {
        outcome.exit_code = 1;
        outcome.message = e.what();
    }

    json stream_seeds = json::object();
    for (std::size_t q = 0; q < seeds.size(); ++q) stream_seeds[config.streams[q].id] = seeds[q];
    meta["stream_seeds"] = stream_seeds;
    json stats = json::object();
    for (const auto& [id, st] : report.stream_stats) stats[id] = stats_json(st);
    meta["stream_stats"] = stats;
    json tasks = json::array();
    for (const auto& t : report.tasks) {
        json tj{{"stream", t.stream},
                {"method", t.method},
                {"scenario", t.scenario},
                {"p_u", t.p_u ? json(*t.p_u) : json("NA")},
                {"run", t.run},
                {"method_seed", t.method_seed},
                {"stream_seed", t.stream_seed},
                {"wall_seconds", t.wall_seconds},
                {"model_size", t.model_size},
                {"events_consumed", t.events_consumed},
                {"stream_events", t.stream_events},
                {"status", t.ok ? "OK" : "FAILED"}};
        if (!t.ok) tj["error"] = t.error;
        tasks.push_back(tj);
    }
    meta["tasks"] = tasks;
    meta["status"] = outcome.exit_code == 0 ? "OK" : "FAILED";
    if (!outcome.message.empty()) meta["error"] = outcome.message;
    meta["total_wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream results, drifts;
    write_results_csv(results, report);
    write_drifts_csv(drifts, report);
    write_text(out_dir / "results.csv", results.str());
    write_text(out_dir / "drifts.csv", drifts.str());
    write_text(out_dir / "metadata.json", meta.dump(2) + "\n");
    return outcome;
}

}  // namespace dls
