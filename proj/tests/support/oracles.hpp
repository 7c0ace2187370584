#pragma once
// Independent reference implementations used as test oracles. They share no
// code with the library beyond public types.
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "dlstream/learners.hpp"
#include "dlstream/ssl.hpp"

namespace dls::oracle {

/// Plain ADWIN: the window is an explicit bit list; buckets are kept as a flat
/// oldest-first list of sizes and merged by scanning for the oldest pair of
/// an over-full size class.
class ReferenceAdwin {
  public:
    ReferenceAdwin(double delta, std::size_t max_buckets) : delta_(delta), max_(max_buckets) {}

    bool add(int bit) {
        bits_.push_back(bit);
        sizes_.push_back(1);
        compress();
        bool shrank = false;
        while (bits_.size() > 1 && has_cut()) {
            const std::uint64_t s = sizes_.front();
            sizes_.pop_front();
            for (std::uint64_t i = 0; i < s; ++i) bits_.pop_front();
            shrank = true;
        }
        return shrank;
    }

    std::uint64_t width() const { return bits_.size(); }
    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (int b : bits_) t += static_cast<std::uint64_t>(b);
        return t;
    }
    const std::deque<std::uint64_t>& sizes() const { return sizes_; }

  private:
    void compress() {
        for (std::uint64_t cap = 1;; cap *= 2) {
            std::size_t count = 0;
            std::size_t first = 0;
            for (std::size_t i = 0; i < sizes_.size(); ++i) {
                if (sizes_[i] != cap) continue;
                if (count == 0) first = i;
                ++count;
            }
            if (count <= max_) return;
            // Oldest two of this size are adjacent in time order.
            sizes_[first] = 2 * cap;
            sizes_.erase(sizes_.begin() + static_cast<std::ptrdiff_t>(first) + 1);
        }
    }

    // Every bucket boundary, with the older part counted bit by bit.
    bool has_cut() const {
        const double n = static_cast<double>(bits_.size());
        double all = 0;
        for (int b : bits_) all += b;
        std::uint64_t boundary = 0;
        std::uint64_t pos = 0;
        double s0 = 0;
        for (std::size_t b = 0; b + 1 < sizes_.size(); ++b) {
            boundary += sizes_[b];
            for (; pos < boundary; ++pos) s0 += bits_[pos];
            const double s1 = all - s0;
            const double n0 = static_cast<double>(boundary);
            const double n1 = n - n0;
            const double harmonic = 2.0 / (1.0 / n0 + 1.0 / n1);
            // The library's m is half the harmonic mean: 1/(1/n0 + 1/n1).
            const double m = harmonic / 2.0;
            const double eps = std::sqrt(std::log(4.0 * n / delta_) / (2.0 * m));
            if (std::abs(s0 / n0 - s1 / n1) >= eps) return true;
        }
        return false;
    }

    double delta_;
    std::size_t max_;
    std::deque<int> bits_;
    std::deque<std::uint64_t> sizes_;
};

/// Cluster-then-label prediction by exhaustive scan over centroids.
inline Prediction brute_force_cluster_predict(const ClusterModel& model, const FeatureVector& x) {
    const auto point = model.space().embed(x);
    const auto& w = model.space().weights();
    const auto& cs = model.clusters();
    auto dist = [&](const MicroCluster& mc) {
        double s = 0.0;
        for (std::size_t d = 0; d < point.size(); ++d) {
            const double diff = point[d] - mc.ls[d] / static_cast<double>(mc.n);
            s += w[d] * diff * diff;
        }
        return s;
    };
    auto scan = [&](bool labelled_only) {
        std::ptrdiff_t best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cs.size(); ++i) {
            std::uint64_t lab = 0;
            for (auto c : cs[i].label_counts) lab += c;
            if (labelled_only && lab == 0) continue;
            const double d = dist(cs[i]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<std::ptrdiff_t>(i);
            }
        }
        return best;
    };
    std::ptrdiff_t pick = scan(false);
    std::uint64_t lab = 0;
    for (auto c : cs[static_cast<std::size_t>(pick)].label_counts) lab += c;
    if (lab == 0) pick = scan(true);
    if (pick < 0) return Prediction::unscored(0);
    const auto& counts = cs[static_cast<std::size_t>(pick)].label_counts;
    return Prediction::from_scores(std::vector<double>(counts.begin(), counts.end()));
}

}  // namespace dls::oracle
