#include "dlstream/evaluation.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <unordered_set>

#include "dlstream/errors.hpp"

namespace dls {

std::string_view to_string(PredictionType t) {
    switch (t) {
        case PredictionType::Initial: return "initial";
        case PredictionType::Periodic: return "periodic";
        case PredictionType::Final: return "final";
    }
    return "?";
}

std::string PeriodicPolicy::describe() const {
    switch (kind) {
        case Kind::EveryLabel: return "every_label";
        case Kind::Batch: return "batch(" + std::to_string(batch) + ")";
        case Kind::None: return "none";
    }
    return "?";
}

void validate_eval_config(const EvalConfig& config) {
    if (config.window < 1) throw InvalidArgument("window must be >= 1");
    if (!(config.alpha > 0.0 && config.alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0,1]");
    if (config.periodic.kind == PeriodicPolicy::Kind::Batch && config.periodic.batch < 1) {
        throw InvalidArgument("periodic batch must be >= 1");
    }
}

std::optional<double> EvalResult::cumulative(PredictionType type, std::string_view measure) const {
    for (const auto& r : rows) {
        if (r.type == type && !r.window && r.measure == measure) return r.value;
    }
    throw NotFound("no cumulative row for " + std::string(measure));
}

std::vector<std::optional<double>> EvalResult::windows(PredictionType type, std::string_view measure) const {
    std::vector<std::optional<double>> out;
    for (const auto& r : rows) {
        if (r.type == type && r.window && r.measure == measure) out.push_back(r.value);
    }
    return out;
}

namespace {

struct Compact {
    ClassLabel label;
    Tick tick;
    ClassLabel no_change;
};

struct Pending {
    std::shared_ptr<const FeatureVector> x;
    Compact initial;
    std::vector<Compact> periodic;
    bool will_be_labelled = false;
    std::unique_ptr<PredictionTimeline> full;
};

class Engine {
  public:
    Engine(const StreamSection& stream, Learner& method, const EvalConfig& config)
        : stream_(stream), method_(method), config_(config) {
        const std::size_t k = stream.schema.n_classes();
        for (int t = 0; t < 3; ++t) acc_.emplace_back(k, config.window, config.alpha);
        for (const auto& e : stream.events) {
            if (e.kind == EventKind::Label) labelled_ids_.insert(e.id);
        }
    }

    EvalResult run() {
        const auto start = std::chrono::steady_clock::now();
        for (const auto& e : stream_.events) {
            ++result_.events_consumed;
            switch (e.kind) {
                case EventKind::Instance: on_instance(e); break;
                case EventKind::Label: on_label(e); break;
                case EventKind::OracleLabel: on_oracle(e); break;
            }
        }
        for (int t = 0; t < 3; ++t) emit(static_cast<PredictionType>(t), std::nullopt);
        result_.pending_at_end = pending_.size();
        if (config_.keep_timelines) {
            for (auto& [id, p] : pending_) result_.timelines.push_back(std::move(*p.full));
        }
        result_.model_size = method_.model_size();
        result_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return std::move(result_);
    }

  private:
    ClassLabel no_change() const { return last_label_.value_or(0); }

    void on_instance(const StreamEvent& e) {
        if (!seen_.insert(e.id).second) throw ProtocolViolation("duplicate instance id " + std::to_string(e.id));
        Pending p;
        p.x = e.features_ptr();
        const Prediction pred = method_.predict(*p.x);
        p.initial = {pred.label, e.time, no_change()};
        p.will_be_labelled = labelled_ids_.contains(e.id);
        if (config_.keep_timelines) {
            p.full = std::make_unique<PredictionTimeline>();
            p.full->id = e.id;
            p.full->initial = {pred, e.time};
        }
        const auto x = p.x;
        pending_.emplace(e.id, std::move(p));
        method_.train_unlabelled(*x);
        ++result_.unlabelled_train_calls;
        collect_drifts(e.time);
    }

    Pending take_pending(const StreamEvent& e) {
        auto it = pending_.find(e.id);
        if (it == pending_.end()) {
            if (seen_.contains(e.id)) throw ProtocolViolation("duplicate label for instance " + std::to_string(e.id));
            throw ProtocolViolation("label for unseen instance " + std::to_string(e.id));
        }
        Pending p = std::move(it->second);
        pending_.erase(it);
        return p;
    }

    void on_label(const StreamEvent& e) {
        Pending p = take_pending(e);
        const ClassLabel y = e.class_label();
        if (y >= stream_.schema.n_classes()) throw ProtocolViolation("label out of range for instance " + std::to_string(e.id));
        const bool delayed = e.time > p.initial.tick;

        Compact final = p.initial;
        if (delayed) {
            const Prediction pred = method_.predict(*p.x);
            final = {pred.label, e.time, no_change()};
            if (p.full) p.full->final = TimedPrediction{pred, e.time};
        } else if (p.full) {
            p.full->final = p.full->initial;
        }
        // Periodic predictions must precede the label tick.
        while (!p.periodic.empty() && p.periodic.back().tick >= e.time) p.periodic.pop_back();
        if (p.full) {
            auto& per = p.full->periodic;
            while (!per.empty() && per.back().tick >= e.time) per.pop_back();
        }

        score(PredictionType::Initial, p.initial, y);
        for (const auto& c : p.periodic) score(PredictionType::Periodic, c, y);
        score(PredictionType::Final, final, y);
        if (p.full) result_.timelines.push_back(std::move(*p.full));

        if (delayed) {
            ++delayed_labels_;
            if (periodic_due()) repredict(e.time);
        }
        train(*p.x, y, e.time);
    }

    void on_oracle(const StreamEvent& e) {
        auto it = pending_.find(e.id);
        if (it == pending_.end()) throw ProtocolViolation("oracle label for non-pending instance " + std::to_string(e.id));
        if (!oracle_seen_.insert(e.id).second) throw ProtocolViolation("duplicate oracle label for " + std::to_string(e.id));
        const auto x = it->second.x;
        train(*x, e.class_label(), e.time);
    }

    void train(const FeatureVector& x, ClassLabel y, Tick tick) {
        method_.train(x, y);
        ++result_.train_calls;
        last_label_ = y;
        collect_drifts(tick);
    }

    bool periodic_due() const {
        switch (config_.periodic.kind) {
            case PeriodicPolicy::Kind::EveryLabel: return true;
            case PeriodicPolicy::Kind::Batch: return delayed_labels_ % config_.periodic.batch == 0;
            case PeriodicPolicy::Kind::None: return false;
        }
        return false;
    }

    void repredict(Tick tick) {
        for (auto& [id, p] : pending_) {
            // Predictions for instances that are never labelled could never be scored.
            if (!p.will_be_labelled) continue;
            const Prediction pred = method_.predict(*p.x);
            p.periodic.push_back({pred.label, tick, no_change()});
            if (p.full) p.full->periodic.push_back({pred, tick});
        }
    }

    void score(PredictionType type, const Compact& c, ClassLabel y) {
        const auto t = static_cast<std::size_t>(type);
        if (!config_.score[t]) return;
        auto& acc = acc_[t];
        acc.update(c.label, y, c.no_change);
        if (acc.count() % config_.window == 0) emit(type, acc.count() / config_.window - 1);
    }

    void emit(PredictionType type, std::optional<std::uint64_t> window) {
        const auto t = static_cast<std::size_t>(type);
        if (!config_.score[t]) return;
        const auto& acc = acc_[t];
        auto row = [&](const char* measure, std::optional<double> v) {
            result_.rows.push_back(MetricRow{type, measure, window, v});
        };
        if (window) {
            row("accuracy", acc.window_accuracy());
            row("kappa", acc.window_kappa());
            row("kappa_temporal", acc.window_kappa_temporal());
            row("faded_accuracy", acc.faded_accuracy());
        } else {
            row("accuracy", acc.accuracy());
            row("kappa", acc.kappa());
            row("kappa_temporal", acc.kappa_temporal());
            row("faded_accuracy", acc.faded_accuracy());
            row("n_scored", static_cast<double>(acc.count()));
        }
    }

    void collect_drifts(Tick tick) {
        for (std::size_t m : method_.take_drift_events()) result_.drifts.push_back({tick, m});
    }

    const StreamSection& stream_;
    Learner& method_;
    const EvalConfig& config_;
    std::vector<MetricAccumulator> acc_;
    std::unordered_set<InstanceId> labelled_ids_;
    std::unordered_set<InstanceId> seen_;
    std::unordered_set<InstanceId> oracle_seen_;
    std::map<InstanceId, Pending> pending_;
    std::optional<ClassLabel> last_label_;
    std::uint64_t delayed_labels_ = 0;
    EvalResult result_;
};

}  // namespace

EvalResult run_stream_eval(const StreamSection& stream, Learner& method, const EvalConfig& config) {
    validate_eval_config(config);
    if (stream.schema.n_classes() < 1) throw InvalidArgument("stream schema has no classes");
    Engine engine(stream, method, config);
    return engine.run();
}

}  // namespace dls
