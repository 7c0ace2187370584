#pragma once

// Synthetic fully labelled streams with abrupt concept drift.
//
// AGRAWAL: nine attributes drawn per instance in this order
//   salary     uniform [20000, 150000)
//   commission 0 if salary >= 75000, else uniform [10000, 75000)
//   age        uniform integer [20, 80)
//   elevel     uniform 0..4           (nominal, 5 values)
//   car        uniform 1..20          (nominal, stored as 0..19)
//   zipcode    uniform 0..8           (nominal, 9 values)
//   hvalue     (9 - zipcode) * 100000 * uniform [0.5, 1.5)
//   hyears     uniform integer 1..30
//   loan       uniform [0, 500000)
// Class 0 is "group A":
//   F1  age < 40 or age >= 60
//   F2  age < 40: 50k <= salary <= 100k; age < 60: 75k..125k; else 25k..75k
//   F3  age < 40: elevel in {0,1}; age < 60: elevel in {1,2,3}; else {2,3,4}
//   F4  as F3's elevel bands, choosing a salary band per branch:
//       age < 40: in-band 25k..75k, else 50k..100k
//       age < 60: in-band 50k..100k, else 75k..125k
//       otherwise: in-band 50k..100k, else 25k..75k
// With perturbation p > 0, numeric attributes are shifted by
// range * p * uniform[-1, 1) and clamped after the class is decided.
//
// Hyperplane: x uniform in [0,1)^d, class 1 iff sum(w_i x_i) >= 0.5 sum(w_i).
// After each instance every weight moves by magnitude * direction_i and each
// direction flips with probability 0.1. The label is flipped with probability noise.

#include <cstdint>
#include <variant>
#include <vector>

#include "dlstream/rng.hpp"
#include "dlstream/stream_model.hpp"

namespace dls {

struct AgrawalConfig {
    int function_id = 1;
    double perturbation = 0.0;
};

struct HyperplaneConfig {
    std::size_t n_dims = 10;
    double magnitude_of_change = 0.001;
    double noise = 0.05;
};

using GeneratorConfig = std::variant<AgrawalConfig, HyperplaneConfig>;

struct DriftSegment {
    std::uint64_t start = 0;
    GeneratorConfig config;
};

struct DriftSchedule {
    std::vector<DriftSegment> segments;
    std::uint64_t total_length = 0;
};

struct LabelledInstance {
    FeatureVector x;
    ClassLabel y = 0;
};

Schema agrawal_schema();
Schema hyperplane_schema(std::size_t n_dims);

/// Raw AGRAWAL attribute values, used by the classification functions.
struct AgrawalRecord {
    double salary = 0;
    double commission = 0;
    int age = 0;
    int elevel = 0;
    int car = 1;
    int zipcode = 0;
    double hvalue = 0;
    int hyears = 1;
    double loan = 0;
};

/// Class of `r` under function `function_id` (1..4); throws InvalidArgument otherwise.
ClassLabel agrawal_classify(int function_id, const AgrawalRecord& r);

class AgrawalGenerator {
  public:
    AgrawalGenerator(AgrawalConfig config, std::uint64_t seed);

    LabelledInstance next();
    const AgrawalConfig& config() const { return config_; }

  private:
    AgrawalConfig config_;
    Rng rng_;
};

class HyperplaneGenerator {
  public:
    HyperplaneGenerator(HyperplaneConfig config, std::uint64_t seed);

    LabelledInstance next();
    const std::vector<double>& weights() const { return weights_; }
    const HyperplaneConfig& config() const { return config_; }

  private:
    HyperplaneConfig config_;
    Rng rng_;
    std::vector<double> weights_;
    std::vector<double> directions_;
};

/// Throws InvalidArgument on an empty schedule, a first start other than 0,
/// non-increasing starts, total_length <= last start, out-of-range parameters,
/// or segments whose schemas differ.
void validate_schedule(const DriftSchedule& schedule);

Schema schedule_schema(const DriftSchedule& schedule);

/// Instance k comes from the segment containing index k, arrives at tick k and
/// its label is timed by `delay`. Segment i is generated with sub-seed
/// derive_seed(seed, {i}); delays draw from derive_seed(seed, {~0}).
StreamSection generate(const DriftSchedule& schedule, const DelayPolicy& delay, std::uint64_t seed);

}  // namespace dls
