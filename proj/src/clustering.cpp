#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "dlstream/errors.hpp"
#include "dlstream/replay.hpp"
#include "dlstream/ssl.hpp"

namespace dls {

MicroCluster MicroCluster::from_point(std::span<const double> point, std::size_t n_classes,
                                      std::optional<ClassLabel> y, Tick tick) {
    MicroCluster mc;
    mc.ls.assign(point.size(), 0.0);
    mc.ss.assign(point.size(), 0.0);
    mc.label_counts.assign(n_classes, 0);
    mc.absorb(point, y, tick);
    return mc;
}

std::vector<double> MicroCluster::centroid() const {
    std::vector<double> c(ls.size(), 0.0);
    if (n == 0) return c;
    for (std::size_t i = 0; i < ls.size(); ++i) c[i] = ls[i] / static_cast<double>(n);
    return c;
}

void MicroCluster::absorb(std::span<const double> point, std::optional<ClassLabel> y, Tick tick) {
    ++n;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        ls[i] += point[i];
        ss[i] += point[i] * point[i];
    }
    if (y) {
        if (*y >= label_counts.size()) throw InvalidArgument("class label out of range");
        ++label_counts[*y];
    }
    last_update_tick = std::max(last_update_tick, tick);
}

void MicroCluster::merge(const MicroCluster& other) {
    if (other.ls.size() != ls.size() || other.label_counts.size() != label_counts.size()) {
        throw InvalidArgument("micro-cluster shapes differ");
    }
    n += other.n;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        ls[i] += other.ls[i];
        ss[i] += other.ss[i];
    }
    for (std::size_t c = 0; c < label_counts.size(); ++c) label_counts[c] += other.label_counts[c];
    last_update_tick = std::max(last_update_tick, other.last_update_tick);
}

double MicroCluster::rms_deviation(std::span<const double> weights) const {
    if (n == 0) return 0.0;
    const double nn = static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const double mean = ls[i] / nn;
        sum += weights[i] * std::max(0.0, ss[i] / nn - mean * mean);
    }
    return std::sqrt(sum);
}

std::uint64_t MicroCluster::labelled() const {
    std::uint64_t s = 0;
    for (auto c : label_counts) s += c;
    return s;
}

ClusterModel::ClusterModel(const Schema& schema, ClusterModelConfig config)
    : config_(config), n_classes_(schema.n_classes()), space_(schema) {
    if (config_.max_clusters < 1) throw InvalidArgument("max_clusters must be >= 1");
    if (!(config_.radius_factor > 0.0)) throw InvalidArgument("radius_factor must be > 0");
}

void ClusterModel::clear() {
    clusters_.clear();
    space_.clear();
}

std::size_t ClusterModel::nearest(std::span<const double> point) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
        const double d = space_.squared_distance(point, clusters_[i].centroid());
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

double ClusterModel::radius(std::size_t i) const {
    const auto& mc = clusters_[i];
    if (mc.n >= 2) return config_.radius_factor * mc.rms_deviation(space_.weights());
    const auto c = mc.centroid();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < clusters_.size(); ++j) {
        if (j == i) continue;
        best = std::min(best, space_.distance(c, clusters_[j].centroid()));
    }
    return std::isinf(best) ? 0.0 : best / 2.0;
}

void ClusterModel::update(const FeatureVector& x, std::optional<ClassLabel> y, Tick tick) {
    if (y && *y >= n_classes_) throw InvalidArgument("class label out of range");
    space_.observe(x);
    const auto point = space_.embed(x);
    if (!clusters_.empty()) {
        const std::size_t i = nearest(point);
        if (space_.distance(point, clusters_[i].centroid()) <= radius(i)) {
            clusters_[i].absorb(point, y, tick);
            return;
        }
    }
    clusters_.push_back(MicroCluster::from_point(point, n_classes_, y, tick));
    if (clusters_.size() > config_.max_clusters) merge_closest_pair();
}

void ClusterModel::merge_closest_pair() {
    std::vector<std::vector<double>> centroids;
    centroids.reserve(clusters_.size());
    for (const auto& mc : clusters_) centroids.push_back(mc.centroid());
    std::size_t bi = 0;
    std::size_t bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
        for (std::size_t j = i + 1; j < clusters_.size(); ++j) {
            const double d = space_.squared_distance(centroids[i], centroids[j]);
            if (d < best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    clusters_[bi].merge(clusters_[bj]);
    clusters_.erase(clusters_.begin() + static_cast<std::ptrdiff_t>(bj));
}

Prediction ClusterModel::predict(const FeatureVector& x) const {
    if (clusters_.empty()) throw ModelEmpty("cluster model has no micro-clusters");
    const auto point = space_.embed(x);
    std::size_t pick = nearest(point);
    if (clusters_[pick].labelled() == 0) {
        double best = std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t i = 0; i < clusters_.size(); ++i) {
            if (clusters_[i].labelled() == 0) continue;
            const double d = space_.squared_distance(point, clusters_[i].centroid());
            if (d < best) {
                best = d;
                pick = i;
                found = true;
            }
        }
        if (!found) return Prediction::unscored(0);
    }
    const auto& counts = clusters_[pick].label_counts;
    return Prediction::from_scores(std::vector<double>(counts.begin(), counts.end()));
}

namespace {

template <typename T>
void write_list(std::ostream& out, const std::vector<T>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ';';
        if constexpr (std::is_floating_point_v<T>) {
            out << format_double(values[i]);
        } else {
            out << values[i];
        }
    }
}

template <typename T>
T parse_number(std::string_view s) {
    T v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw InvalidArgument("cluster dump: bad number '" + std::string(s) + "'");
    }
    return v;
}

template <typename T>
std::vector<T> parse_list(std::string_view s, char sep) {
    std::vector<T> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = s.find(sep, start);
        out.push_back(parse_number<T>(s.substr(start, end == std::string_view::npos ? end : end - start)));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

std::string_view field(std::string_view token, std::string_view key) {
    if (token.substr(0, key.size()) != key) throw InvalidArgument("cluster dump: expected '" + std::string(key) + "'");
    return token.substr(key.size());
}

}  // namespace

std::string ClusterModel::to_text() const {
    std::ostringstream out;
    out << "space";
    for (const auto& s : space_.numeric_stats()) {
        out << ' ' << s.n << ':' << format_double(s.mean) << ':' << format_double(s.m2);
    }
    out << '\n';
    for (const auto& mc : clusters_) {
        out << "mc n=" << mc.n << " tick=" << mc.last_update_tick << " ls=";
        write_list(out, mc.ls);
        out << " ss=";
        write_list(out, mc.ss);
        out << " labels=";
        write_list(out, mc.label_counts);
        out << '\n';
    }
    return out.str();
}

ClusterModel ClusterModel::from_text(const Schema& schema, ClusterModelConfig config, std::string_view text) {
    ClusterModel model(schema, config);
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("cluster dump: missing space line");
    {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok != "space") throw InvalidArgument("cluster dump: missing space line");
        std::vector<FeatureSpace::NumericStat> stats;
        while (ls >> tok) {
            const auto parts = parse_list<double>(tok, ':');
            if (parts.size() != 3) throw InvalidArgument("cluster dump: bad space statistic");
            const std::size_t colon = tok.find(':');
            stats.push_back({parse_number<std::uint64_t>(std::string_view(tok).substr(0, colon)), parts[1], parts[2]});
        }
        model.space_.restore(std::move(stats));
    }
    const std::size_t dims = model.space_.dims();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string head, n, tick, lsum, ssum, labels;
        if (!(ls >> head >> n >> tick >> lsum >> ssum >> labels) || head != "mc") {
            throw InvalidArgument("cluster dump: malformed line '" + line + "'");
        }
        MicroCluster mc;
        mc.n = parse_number<std::uint64_t>(field(n, "n="));
        mc.last_update_tick = parse_number<std::uint64_t>(field(tick, "tick="));
        mc.ls = parse_list<double>(field(lsum, "ls="), ';');
        mc.ss = parse_list<double>(field(ssum, "ss="), ';');
        mc.label_counts = parse_list<std::uint64_t>(field(labels, "labels="), ';');
        if (mc.ls.size() != dims || mc.ss.size() != dims || mc.label_counts.size() != model.n_classes_ || mc.n == 0) {
            throw InvalidArgument("cluster dump: micro-cluster shape does not match the schema");
        }
        model.clusters_.push_back(std::move(mc));
    }
    if (model.clusters_.size() > config.max_clusters) throw InvalidArgument("cluster dump: more clusters than max_clusters");
    return model;
}

ClusterThenLabel::ClusterThenLabel(const Schema& schema, ClusterModelConfig config) : model_(schema, config) {}

Prediction ClusterThenLabel::predict(const FeatureVector& x) const {
    if (model_.empty()) return Prediction::unscored(0);
    return model_.predict(x);
}

void ClusterThenLabel::reset() {
    model_.clear();
    tick_ = 0;
}

std::size_t ClusterThenLabel::model_size() const {
    std::size_t n = 0;
    for (const auto& mc : model_.clusters()) n += 2 + mc.ls.size() + mc.ss.size() + mc.label_counts.size();
    return n;
}

}  // namespace dls
