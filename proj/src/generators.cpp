#include "dlstream/generators.hpp"

#include <algorithm>
#include <cmath>

#include "dlstream/errors.hpp"

namespace dls {

namespace {

constexpr std::uint64_t kDelayStream = ~std::uint64_t{0};

bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

}  // namespace

Schema agrawal_schema() {
    using K = AttributeKind;
    return Schema({{"salary", K::Numeric, 0},
                   {"commission", K::Numeric, 0},
                   {"age", K::Numeric, 0},
                   {"elevel", K::Nominal, 5},
                   {"car", K::Nominal, 20},
                   {"zipcode", K::Nominal, 9},
                   {"hvalue", K::Numeric, 0},
                   {"hyears", K::Numeric, 0},
                   {"loan", K::Numeric, 0}},
                  2);
}

Schema hyperplane_schema(std::size_t n_dims) {
    std::vector<Attribute> attrs;
    for (std::size_t i = 0; i < n_dims; ++i) attrs.push_back({"x" + std::to_string(i), AttributeKind::Numeric, 0});
    return Schema(std::move(attrs), 2);
}

ClassLabel agrawal_classify(int function_id, const AgrawalRecord& r) {
    const double s = r.salary;
    const int age = r.age;
    const int e = r.elevel;
    bool group_a = false;
    switch (function_id) {
        case 1: group_a = age < 40 || age >= 60; break;
        case 2:
            if (age < 40) {
                group_a = in_band(s, 50000, 100000);
            } else if (age < 60) {
                group_a = in_band(s, 75000, 125000);
            } else {
                group_a = in_band(s, 25000, 75000);
            }
            break;
        case 3:
            if (age < 40) {
                group_a = e == 0 || e == 1;
            } else if (age < 60) {
                group_a = e >= 1 && e <= 3;
            } else {
                group_a = e >= 2 && e <= 4;
            }
            break;
        case 4:
            if (age < 40) {
                group_a = (e == 0 || e == 1) ? in_band(s, 25000, 75000) : in_band(s, 50000, 100000);
            } else if (age < 60) {
                group_a = (e >= 1 && e <= 3) ? in_band(s, 50000, 100000) : in_band(s, 75000, 125000);
            } else {
                group_a = (e >= 2 && e <= 4) ? in_band(s, 50000, 100000) : in_band(s, 25000, 75000);
            }
            break;
        default: throw InvalidArgument("AGRAWAL function must be 1..4");
    }
    return group_a ? 0 : 1;
}

AgrawalGenerator::AgrawalGenerator(AgrawalConfig config, std::uint64_t seed) : config_(config), rng_(seed) {
    if (config_.function_id < 1 || config_.function_id > 4) throw InvalidArgument("AGRAWAL function must be 1..4");
    if (!(config_.perturbation >= 0.0 && config_.perturbation < 1.0)) {
        throw InvalidArgument("AGRAWAL perturbation must lie in [0,1)");
    }
}

LabelledInstance AgrawalGenerator::next() {
    AgrawalRecord r;
    r.salary = rng_.uniform(20000.0, 150000.0);
    r.commission = r.salary >= 75000.0 ? 0.0 : rng_.uniform(10000.0, 75000.0);
    r.age = static_cast<int>(rng_.integer(20, 79));
    r.elevel = static_cast<int>(rng_.integer(0, 4));
    r.car = static_cast<int>(rng_.integer(1, 20));
    r.zipcode = static_cast<int>(rng_.integer(0, 8));
    r.hvalue = (9.0 - r.zipcode) * 100000.0 * rng_.uniform(0.5, 1.5);
    r.hyears = static_cast<int>(rng_.integer(1, 30));
    r.loan = rng_.uniform(0.0, 500000.0);

    const ClassLabel y = agrawal_classify(config_.function_id, r);

    double age = r.age;
    double hyears = r.hyears;
    if (config_.perturbation > 0.0) {
        const double p = config_.perturbation;
        auto perturb = [&](double v, double range, double lo, double hi) {
            v += range * p * rng_.uniform(-1.0, 1.0);
            return std::clamp(v, lo, hi);
        };
        r.salary = perturb(r.salary, 130000.0, 20000.0, 150000.0);
        if (r.commission > 0.0) r.commission = perturb(r.commission, 65000.0, 10000.0, 75000.0);
        age = std::round(perturb(age, 60.0, 20.0, 79.0));
        r.hvalue = perturb(r.hvalue, (9.0 - r.zipcode) * 100000.0, 0.0, 1350000.0);
        hyears = std::round(perturb(hyears, 29.0, 1.0, 30.0));
        r.loan = perturb(r.loan, 500000.0, 0.0, 500000.0);
    }

    LabelledInstance out;
    out.x.numeric = {r.salary, r.commission, age, r.hvalue, hyears, r.loan};
    out.x.nominal = {static_cast<std::uint32_t>(r.elevel), static_cast<std::uint32_t>(r.car - 1),
                     static_cast<std::uint32_t>(r.zipcode)};
    out.y = y;
    return out;
}

HyperplaneGenerator::HyperplaneGenerator(HyperplaneConfig config, std::uint64_t seed) : config_(config), rng_(seed) {
    if (config_.n_dims < 2) throw InvalidArgument("hyperplane needs at least 2 dimensions");
    if (!(config_.magnitude_of_change >= 0.0)) throw InvalidArgument("hyperplane magnitude must be >= 0");
    if (!(config_.noise >= 0.0 && config_.noise < 1.0)) throw InvalidArgument("hyperplane noise must lie in [0,1)");
    weights_.resize(config_.n_dims);
    directions_.resize(config_.n_dims);
    for (auto& w : weights_) w = rng_.uniform();
    for (auto& d : directions_) d = rng_.bernoulli(0.5) ? -1.0 : 1.0;
}

LabelledInstance HyperplaneGenerator::next() {
    LabelledInstance out;
    out.x.numeric.resize(config_.n_dims);
    double dot = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < config_.n_dims; ++i) {
        out.x.numeric[i] = rng_.uniform();
        dot += weights_[i] * out.x.numeric[i];
        total += weights_[i];
    }
    out.y = dot >= 0.5 * total ? 1 : 0;
    if (rng_.bernoulli(config_.noise)) out.y = 1 - out.y;
    if (config_.magnitude_of_change > 0.0) {
        for (std::size_t i = 0; i < config_.n_dims; ++i) {
            weights_[i] += directions_[i] * config_.magnitude_of_change;
            if (rng_.bernoulli(0.1)) directions_[i] = -directions_[i];
        }
    }
    return out;
}

namespace {

Schema config_schema(const GeneratorConfig& c) {
    if (const auto* h = std::get_if<HyperplaneConfig>(&c)) return hyperplane_schema(h->n_dims);
    return agrawal_schema();
}

}  // namespace

void validate_schedule(const DriftSchedule& schedule) {
    if (schedule.segments.empty()) throw InvalidArgument("drift schedule has no segments");
    if (schedule.segments.front().start != 0) throw InvalidArgument("first segment must start at 0");
    for (std::size_t i = 1; i < schedule.segments.size(); ++i) {
        if (schedule.segments[i].start <= schedule.segments[i - 1].start) {
            throw InvalidArgument("segment starts must be strictly increasing");
        }
    }
    if (schedule.total_length <= schedule.segments.back().start) {
        throw InvalidArgument("total_length must exceed the last segment start");
    }
    const Schema first = config_schema(schedule.segments.front().config);
    for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
        const auto& c = schedule.segments[i].config;
        if (!(config_schema(c) == first)) throw InvalidArgument("all segments must share one schema");
        // Construct once to run parameter checks.
        std::visit(
            [](const auto& cfg) {
                using T = std::decay_t<decltype(cfg)>;
                if constexpr (std::is_same_v<T, AgrawalConfig>) {
                    AgrawalGenerator g(cfg, 0);
                } else {
                    HyperplaneGenerator g(cfg, 0);
                }
            },
            c);
    }
}

Schema schedule_schema(const DriftSchedule& schedule) {
    validate_schedule(schedule);
    return config_schema(schedule.segments.front().config);
}

StreamSection generate(const DriftSchedule& schedule, const DelayPolicy& delay, std::uint64_t seed) {
    validate_schedule(schedule);
    StreamSection section;
    section.schema = config_schema(schedule.segments.front().config);
    section.events.reserve(2 * schedule.total_length);
    for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
        const std::uint64_t begin = schedule.segments[s].start;
        const std::uint64_t end = s + 1 < schedule.segments.size() ? schedule.segments[s + 1].start : schedule.total_length;
        const std::uint64_t sub_seed = derive_seed(seed, {s});
        std::visit(
            [&](const auto& cfg) {
                using T = std::decay_t<decltype(cfg)>;
                std::conditional_t<std::is_same_v<T, AgrawalConfig>, AgrawalGenerator, HyperplaneGenerator> gen(cfg, sub_seed);
                for (std::uint64_t k = begin; k < end; ++k) {
                    auto inst = gen.next();
                    section.events.push_back(StreamEvent::instance(k, k, std::move(inst.x)));
                    section.events.push_back(StreamEvent::label(k, k, inst.y));
                }
            },
            schedule.segments[s].config);
    }
    fit_time_bounds(section);
    if (delay.mode() == DelayPolicy::Mode::Immediate) return section;
    return inject_delay(section, delay, derive_seed(seed, {kDelayStream}));
}

}  // namespace dls
