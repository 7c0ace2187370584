#pragma once

// Delayed partially labelled stream model: instances and true labels arrive as
// separate timestamped events, a label may arrive late or never.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dls {

using InstanceId = std::uint64_t;
using Tick = std::uint64_t;
using ClassLabel = std::uint32_t;

enum class AttributeKind { Numeric, Nominal };

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::Numeric;
    std::uint32_t cardinality = 0;  // nominal only
};

/// Ordered attribute list plus the number of classes. A FeatureVector stores
/// numeric and nominal values separately, each in schema order.
class Schema {
  public:
    Schema() = default;
    Schema(std::vector<Attribute> attributes, std::uint32_t n_classes);

    const std::vector<Attribute>& attributes() const { return attributes_; }
    std::uint32_t n_classes() const { return n_classes_; }
    std::size_t numeric_count() const { return numeric_count_; }
    std::size_t nominal_count() const { return nominal_count_; }
    /// Cardinalities of the nominal attributes in schema order.
    const std::vector<std::uint32_t>& nominal_cardinalities() const { return cardinalities_; }

    bool operator==(const Schema& other) const;

  private:
    std::vector<Attribute> attributes_;
    std::uint32_t n_classes_ = 0;
    std::size_t numeric_count_ = 0;
    std::size_t nominal_count_ = 0;
    std::vector<std::uint32_t> cardinalities_;
};

struct FeatureVector {
    std::vector<double> numeric;
    std::vector<std::uint32_t> nominal;

    bool operator==(const FeatureVector&) const = default;
};

/// Throws InvalidArgument when lengths, nominal ranges or finiteness are violated.
void validate_features(const Schema& schema, const FeatureVector& x);
void validate_label(const Schema& schema, ClassLabel y);

enum class EventKind { Instance, Label, OracleLabel };

struct StreamEvent {
    EventKind kind = EventKind::Instance;
    InstanceId id = 0;
    Tick time = 0;
    std::variant<std::shared_ptr<const FeatureVector>, ClassLabel> payload;

    static StreamEvent instance(InstanceId id, Tick time, FeatureVector x);
    static StreamEvent instance(InstanceId id, Tick time, std::shared_ptr<const FeatureVector> x);
    static StreamEvent label(InstanceId id, Tick time, ClassLabel y);
    static StreamEvent oracle_label(InstanceId id, Tick time, ClassLabel y);

    bool is_instance() const { return kind == EventKind::Instance; }
    const FeatureVector& features() const;
    const std::shared_ptr<const FeatureVector>& features_ptr() const;
    ClassLabel class_label() const;

    /// Value equality (feature vectors compared by content).
    bool operator==(const StreamEvent& other) const;
};

struct StreamSection {
    Schema schema;
    Tick t_min = 0;
    Tick t_max = 0;
    std::vector<StreamEvent> events;

    bool operator==(const StreamSection&) const = default;
};

/// Sorts events into canonical order: ascending time; within one tick, labels
/// that arrive after their instance's tick come first (ascending id), then each
/// new instance (ascending id) immediately followed by any same-tick label or
/// oracle label for it.
void canonical_sort(std::vector<StreamEvent>& events);
bool is_canonically_ordered(const std::vector<StreamEvent>& events);

/// Checks every stream invariant: canonical order, times within [t_min,t_max],
/// one instance and at most one label (and one oracle label) per id, no label
/// before its instance, payloads valid for the schema. Throws ProtocolViolation.
void validate_section(const StreamSection& section);

/// Recomputes t_min/t_max as the event time range (0,0 when empty).
void fit_time_bounds(StreamSection& section);

/// Verification latency: a tick count, or infinite for a never-labelled instance.
class Latency {
  public:
    static Latency finite(Tick ticks) { return Latency(ticks); }
    static Latency infinite() { return Latency(); }

    bool is_infinite() const { return !ticks_.has_value(); }
    /// Throws std::logic_error on the infinite value.
    Tick ticks() const;

    bool operator==(const Latency&) const = default;

  private:
    Latency() = default;
    explicit Latency(Tick t) : ticks_(t) {}
    std::optional<Tick> ticks_;
};

Latency verification_latency(const StreamSection& section, InstanceId k);

class DelayPolicy {
  public:
    enum class Mode { Immediate, Fixed, RandomUniform };

    static DelayPolicy immediate() { return DelayPolicy(Mode::Immediate, 0, 0); }
    static DelayPolicy fixed(Tick d) { return DelayPolicy(Mode::Fixed, d, d); }
    /// Throws InvalidArgument when lo > hi.
    static DelayPolicy uniform(Tick lo, Tick hi);

    Mode mode() const { return mode_; }
    Tick min_delay() const { return lo_; }
    Tick max_delay() const { return hi_; }

    std::string describe() const;

  private:
    DelayPolicy(Mode m, Tick lo, Tick hi) : mode_(m), lo_(lo), hi_(hi) {}
    Mode mode_;
    Tick lo_;
    Tick hi_;
};

/// Re-times every LabelArrival to T(x_k) + d, d drawn per policy in event order.
StreamSection inject_delay(const StreamSection& section, const DelayPolicy& policy, std::uint64_t seed);

/// F_U: deletes each LabelArrival independently with probability p_u.
StreamSection remove_labels(const StreamSection& section, double p_u, std::uint64_t seed);

/// F_L: keeps only instances (and their label / oracle events) whose true label
/// arrives within the section.
StreamSection drop_unlabelled(const StreamSection& section);

struct StreamStats {
    std::uint64_t n_instances = 0;
    std::uint64_t n_labelled = 0;
    std::uint64_t n_unlabelled = 0;
    std::uint64_t n_oracle_labels = 0;
    std::vector<std::uint64_t> class_histogram;  // over arrived true labels
    Tick latency_bucket_width = 1;
    std::map<Tick, std::uint64_t> latency_histogram;  // bucket start -> count
    std::vector<double> labelled_fraction_window;     // per block of `window` instances
    /// Labels the harness removed (F_U), per class; empty unless filled in by the caller.
    std::vector<std::uint64_t> hidden_class_histogram;

    bool operator==(const StreamStats&) const = default;
};

/// `window` groups instances (in arrival order) for the labelled fraction;
/// `latency_bucket_width` buckets finite latencies. Both must be >= 1.
StreamStats compute_stats(const StreamSection& section, std::size_t window, Tick latency_bucket_width = 1000);

}  // namespace dls
