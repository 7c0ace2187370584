#include "dlstream/stream_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "dlstream/errors.hpp"
#include "dlstream/rng.hpp"

namespace dls {

Schema::Schema(std::vector<Attribute> attributes, std::uint32_t n_classes)
    : attributes_(std::move(attributes)), n_classes_(n_classes) {
    if (n_classes_ < 1) throw InvalidArgument("schema needs at least one class");
    for (const auto& a : attributes_) {
        if (a.kind == AttributeKind::Numeric) {
            ++numeric_count_;
        } else {
            if (a.cardinality < 1) throw InvalidArgument("nominal attribute '" + a.name + "' has zero cardinality");
            ++nominal_count_;
            cardinalities_.push_back(a.cardinality);
        }
    }
}

bool Schema::operator==(const Schema& other) const {
    if (n_classes_ != other.n_classes_ || attributes_.size() != other.attributes_.size()) return false;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        const auto& a = attributes_[i];
        const auto& b = other.attributes_[i];
        if (a.name != b.name || a.kind != b.kind || a.cardinality != b.cardinality) return false;
    }
    return true;
}

void validate_features(const Schema& schema, const FeatureVector& x) {
    if (x.numeric.size() != schema.numeric_count() || x.nominal.size() != schema.nominal_count()) {
        throw InvalidArgument("feature vector does not match schema");
    }
    for (double v : x.numeric) {
        if (!std::isfinite(v)) throw InvalidArgument("non-finite numeric attribute");
    }
    const auto& card = schema.nominal_cardinalities();
    for (std::size_t i = 0; i < x.nominal.size(); ++i) {
        if (x.nominal[i] >= card[i]) throw InvalidArgument("nominal value out of range");
    }
}

void validate_label(const Schema& schema, ClassLabel y) {
    if (y >= schema.n_classes()) throw InvalidArgument("class label out of range");
}

StreamEvent StreamEvent::instance(InstanceId id, Tick time, FeatureVector x) {
    return instance(id, time, std::make_shared<const FeatureVector>(std::move(x)));
}

StreamEvent StreamEvent::instance(InstanceId id, Tick time, std::shared_ptr<const FeatureVector> x) {
    if (!x) throw InvalidArgument("instance event without features");
    return StreamEvent{EventKind::Instance, id, time, std::move(x)};
}

StreamEvent StreamEvent::label(InstanceId id, Tick time, ClassLabel y) {
    return StreamEvent{EventKind::Label, id, time, y};
}

StreamEvent StreamEvent::oracle_label(InstanceId id, Tick time, ClassLabel y) {
    return StreamEvent{EventKind::OracleLabel, id, time, y};
}

const FeatureVector& StreamEvent::features() const { return *features_ptr(); }

const std::shared_ptr<const FeatureVector>& StreamEvent::features_ptr() const {
    const auto* p = std::get_if<std::shared_ptr<const FeatureVector>>(&payload);
    if (p == nullptr) throw std::logic_error("label event has no features");
    return *p;
}

ClassLabel StreamEvent::class_label() const {
    const auto* p = std::get_if<ClassLabel>(&payload);
    if (p == nullptr) throw std::logic_error("instance event has no class label");
    return *p;
}

bool StreamEvent::operator==(const StreamEvent& other) const {
    if (kind != other.kind || id != other.id || time != other.time) return false;
    if (is_instance()) return features() == other.features();
    return class_label() == other.class_label();
}

namespace {

using OrderKey = std::tuple<Tick, int, InstanceId, int>;

int kind_rank(EventKind k) {
    switch (k) {
        case EventKind::Instance: return 0;
        case EventKind::Label: return 1;
        case EventKind::OracleLabel: return 2;
    }
    return 3;
}

std::vector<OrderKey> order_keys(const std::vector<StreamEvent>& events) {
    std::unordered_map<InstanceId, Tick> instance_time;
    instance_time.reserve(events.size());
    for (const auto& e : events) {
        if (e.is_instance()) instance_time.emplace(e.id, e.time);
    }
    std::vector<OrderKey> keys;
    keys.reserve(events.size());
    for (const auto& e : events) {
        int group = 1;
        if (!e.is_instance()) {
            auto it = instance_time.find(e.id);
            if (it == instance_time.end() || e.time > it->second) group = 0;
        }
        keys.emplace_back(e.time, group, e.id, kind_rank(e.kind));
    }
    return keys;
}

}  // namespace

void canonical_sort(std::vector<StreamEvent>& events) {
    const auto keys = order_keys(events);
    std::vector<std::size_t> idx(events.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<StreamEvent> sorted;
    sorted.reserve(events.size());
    for (std::size_t i : idx) sorted.push_back(std::move(events[i]));
    events = std::move(sorted);
}

bool is_canonically_ordered(const std::vector<StreamEvent>& events) {
    const auto keys = order_keys(events);
    return std::is_sorted(keys.begin(), keys.end());
}

void validate_section(const StreamSection& s) {
    if (s.t_min > s.t_max) throw ProtocolViolation("t_min > t_max");
    std::unordered_map<InstanceId, Tick> instance_time;
    std::unordered_set<InstanceId> labelled;
    std::unordered_set<InstanceId> oracled;
    for (const auto& e : s.events) {
        if (e.time < s.t_min || e.time > s.t_max) {
            throw ProtocolViolation("event time outside section bounds (id " + std::to_string(e.id) + ")");
        }
        switch (e.kind) {
            case EventKind::Instance:
                if (!instance_time.emplace(e.id, e.time).second) {
                    throw ProtocolViolation("duplicate instance id " + std::to_string(e.id));
                }
                try {
                    validate_features(s.schema, e.features());
                } catch (const InvalidArgument& err) {
                    throw ProtocolViolation("instance " + std::to_string(e.id) + ": " + err.what());
                }
                break;
            case EventKind::Label:
            case EventKind::OracleLabel: {
                auto it = instance_time.find(e.id);
                if (it == instance_time.end()) {
                    throw ProtocolViolation("label precedes or lacks its instance (id " + std::to_string(e.id) + ")");
                }
                if (e.time < it->second) throw ProtocolViolation("label time before instance time");
                auto& seen = e.kind == EventKind::Label ? labelled : oracled;
                if (!seen.insert(e.id).second) throw ProtocolViolation("duplicate label for id " + std::to_string(e.id));
                if (e.class_label() >= s.schema.n_classes()) {
                    throw ProtocolViolation("class label out of range (id " + std::to_string(e.id) + ")");
                }
                break;
            }
        }
    }
    if (!is_canonically_ordered(s.events)) throw ProtocolViolation("events are not in canonical order");
}

void fit_time_bounds(StreamSection& s) {
    if (s.events.empty()) {
        s.t_min = s.t_max = 0;
        return;
    }
    auto [lo, hi] = std::minmax_element(s.events.begin(), s.events.end(),
                                        [](const StreamEvent& a, const StreamEvent& b) { return a.time < b.time; });
    s.t_min = lo->time;
    s.t_max = hi->time;
}

Tick Latency::ticks() const {
    if (!ticks_) throw std::logic_error("latency is infinite");
    return *ticks_;
}

Latency verification_latency(const StreamSection& section, InstanceId k) {
    std::optional<Tick> tx;
    std::optional<Tick> ty;
    for (const auto& e : section.events) {
        if (e.id != k) continue;
        if (e.kind == EventKind::Instance) tx = e.time;
        if (e.kind == EventKind::Label) ty = e.time;
    }
    if (!tx) throw NotFound("no instance with id " + std::to_string(k));
    if (!ty) return Latency::infinite();
    return Latency::finite(*ty - *tx);
}

DelayPolicy DelayPolicy::uniform(Tick lo, Tick hi) {
    if (lo > hi) throw InvalidArgument("delay policy: min delay exceeds max delay");
    return DelayPolicy(Mode::RandomUniform, lo, hi);
}

std::string DelayPolicy::describe() const {
    switch (mode_) {
        case Mode::Immediate: return "immediate";
        case Mode::Fixed: return "fixed(" + std::to_string(lo_) + ")";
        case Mode::RandomUniform: return "uniform(" + std::to_string(lo_) + "," + std::to_string(hi_) + ")";
    }
    return "?";
}

StreamSection inject_delay(const StreamSection& section, const DelayPolicy& policy, std::uint64_t seed) {
    Rng rng(seed);
    std::unordered_map<InstanceId, Tick> instance_time;
    for (const auto& e : section.events) {
        if (e.is_instance()) instance_time.emplace(e.id, e.time);
    }
    StreamSection out{section.schema, section.t_min, section.t_max, section.events};
    for (auto& e : out.events) {
        if (e.kind != EventKind::Label) continue;
        auto it = instance_time.find(e.id);
        if (it == instance_time.end()) throw ProtocolViolation("label without instance (id " + std::to_string(e.id) + ")");
        Tick d = 0;
        switch (policy.mode()) {
            case DelayPolicy::Mode::Immediate: d = 0; break;
            case DelayPolicy::Mode::Fixed: d = policy.min_delay(); break;
            case DelayPolicy::Mode::RandomUniform:
                d = static_cast<Tick>(rng.integer(static_cast<std::int64_t>(policy.min_delay()),
                                                  static_cast<std::int64_t>(policy.max_delay())));
                break;
        }
        e.time = it->second + d;
        out.t_max = std::max(out.t_max, e.time);
    }
    canonical_sort(out.events);
    return out;
}

StreamSection remove_labels(const StreamSection& section, double p_u, std::uint64_t seed) {
    if (!(p_u >= 0.0 && p_u <= 1.0)) throw InvalidArgument("p_u must lie in [0,1]");
    Rng rng(seed);
    StreamSection out{section.schema, section.t_min, section.t_max, {}};
    out.events.reserve(section.events.size());
    for (const auto& e : section.events) {
        if (e.kind == EventKind::Label && rng.bernoulli(p_u)) continue;
        out.events.push_back(e);
    }
    return out;
}

StreamSection drop_unlabelled(const StreamSection& section) {
    std::unordered_set<InstanceId> labelled;
    for (const auto& e : section.events) {
        if (e.kind == EventKind::Label) labelled.insert(e.id);
    }
    StreamSection out{section.schema, section.t_min, section.t_max, {}};
    out.events.reserve(section.events.size());
    for (const auto& e : section.events) {
        if (labelled.count(e.id) != 0) out.events.push_back(e);
    }
    return out;
}

StreamStats compute_stats(const StreamSection& section, std::size_t window, Tick latency_bucket_width) {
    if (window < 1 || latency_bucket_width < 1) throw InvalidArgument("compute_stats: window and bucket width must be >= 1");
    StreamStats st;
    st.latency_bucket_width = latency_bucket_width;
    st.class_histogram.assign(section.schema.n_classes(), 0);

    std::unordered_map<InstanceId, Tick> instance_time;
    std::vector<InstanceId> arrival_order;
    std::unordered_set<InstanceId> labelled;
    for (const auto& e : section.events) {
        switch (e.kind) {
            case EventKind::Instance:
                instance_time.emplace(e.id, e.time);
                arrival_order.push_back(e.id);
                break;
            case EventKind::Label: {
                labelled.insert(e.id);
                const ClassLabel y = e.class_label();
                if (y >= st.class_histogram.size()) st.class_histogram.resize(y + 1, 0);
                ++st.class_histogram[y];
                auto it = instance_time.find(e.id);
                if (it != instance_time.end()) {
                    const Tick lat = e.time - it->second;
                    ++st.latency_histogram[(lat / latency_bucket_width) * latency_bucket_width];
                }
                break;
            }
            case EventKind::OracleLabel: ++st.n_oracle_labels; break;
        }
    }
    st.n_instances = arrival_order.size();
    for (std::size_t start = 0; start < arrival_order.size(); start += window) {
        const std::size_t end = std::min(arrival_order.size(), start + window);
        std::size_t n_lab = 0;
        for (std::size_t i = start; i < end; ++i) n_lab += labelled.count(arrival_order[i]);
        st.labelled_fraction_window.push_back(static_cast<double>(n_lab) / static_cast<double>(end - start));
    }
    for (InstanceId id : arrival_order) st.n_labelled += labelled.count(id);
    st.n_unlabelled = st.n_instances - st.n_labelled;
    return st;
}

}  // namespace dls
