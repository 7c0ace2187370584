#include <cmath>

#include "dlstream/drift.hpp"
#include "dlstream/errors.hpp"

namespace dls {

Adwin::Adwin(double delta, std::size_t max_buckets_per_row) : delta_(delta), max_buckets_(max_buckets_per_row) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("ADWIN delta must lie in (0,1)");
    if (max_buckets_per_row < 2) throw InvalidArgument("ADWIN needs at least 2 buckets per row");
}

void Adwin::reset() {
    rows_.clear();
    width_ = 0;
    total_ = 0;
    last_dropped_ = 0;
}

std::size_t Adwin::bucket_count() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
}

double Adwin::cut_threshold(std::uint64_t n0, std::uint64_t n1, std::uint64_t n_w, double delta) {
    const double m = 1.0 / (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1));
    return std::sqrt(std::log(4.0 * static_cast<double>(n_w) / delta) / (2.0 * m));
}

void Adwin::compress() {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i].size() <= max_buckets_) break;
        const std::uint64_t merged = rows_[i][0] + rows_[i][1];
        rows_[i].pop_front();
        rows_[i].pop_front();
        if (i + 1 == rows_.size()) rows_.emplace_back();
        rows_[i + 1].push_back(merged);
    }
}

bool Adwin::cut_found() const {
    std::uint64_t n0 = 0;
    std::uint64_t s0 = 0;
    for (std::size_t r = rows_.size(); r-- > 0;) {
        const std::uint64_t cap = std::uint64_t{1} << r;
        for (std::uint64_t sum : rows_[r]) {
            n0 += cap;
            s0 += sum;
            const std::uint64_t n1 = width_ - n0;
            if (n1 == 0) return false;
            const double mu0 = static_cast<double>(s0) / static_cast<double>(n0);
            const double mu1 = static_cast<double>(total_ - s0) / static_cast<double>(n1);
            if (std::abs(mu0 - mu1) >= cut_threshold(n0, n1, width_, delta_)) return true;
        }
    }
    return false;
}

void Adwin::drop_oldest() {
    while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
    const std::size_t r = rows_.size() - 1;
    const std::uint64_t cap = std::uint64_t{1} << r;
    total_ -= rows_[r].front();
    width_ -= cap;
    last_dropped_ += cap;
    rows_[r].pop_front();
    while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
}

bool Adwin::add(int bit) {
    if (bit != 0 && bit != 1) throw InvalidArgument("ADWIN input must be 0 or 1");
    last_dropped_ = 0;
    if (rows_.empty()) rows_.emplace_back();
    rows_[0].push_back(static_cast<std::uint64_t>(bit));
    ++width_;
    total_ += static_cast<std::uint64_t>(bit);
    compress();
    bool shrank = false;
    while (width_ > 1 && cut_found()) {
        drop_oldest();
        shrank = true;
    }
    return shrank;
}

}  // namespace dls
