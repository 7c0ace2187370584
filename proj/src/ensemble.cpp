#include "dlstream/drift.hpp"
#include "dlstream/errors.hpp"

namespace dls {

std::vector<double> score_vector(const Prediction& p, std::size_t n_classes) {
    std::vector<double> v(n_classes, 0.0);
    if (p.scored()) {
        for (std::size_t c = 0; c < n_classes && c < p.scores.size(); ++c) v[c] = p.scores[c];
    } else if (p.label < n_classes) {
        v[p.label] = 1.0;
    }
    return v;
}

AdwinBagging::AdwinBagging(const Learner& prototype, std::size_t n_classes, EnsembleConfig config)
    : prototype_(prototype.clone()), n_classes_(n_classes), config_(config) {
    if (config_.size < 1) throw InvalidArgument("ensemble size must be >= 1");
    if (!(config_.lambda > 0.0)) throw InvalidArgument("ensemble lambda must be > 0");
    if (n_classes_ < 1) throw InvalidArgument("ensemble needs at least one class");
    Adwin probe(config_.delta);  // validates delta
    members_.reserve(config_.size);
    for (std::size_t i = 0; i < config_.size; ++i) {
        members_.push_back(Member{prototype_->clone(), Adwin(config_.delta), Rng(derive_seed(config_.seed, {i})), 0});
        members_.back().learner->reset();
    }
}

AdwinBagging::AdwinBagging(const AdwinBagging& other)
    : prototype_(other.prototype_->clone()),
      n_classes_(other.n_classes_),
      config_(other.config_),
      pending_events_(other.pending_events_) {
    members_.reserve(other.members_.size());
    for (const auto& m : other.members_) members_.push_back(Member{m.learner->clone(), m.adwin, m.rng, m.resets});
}

void AdwinBagging::train(const FeatureVector& x, ClassLabel y) {
    for (std::size_t i = 0; i < members_.size(); ++i) {
        auto& m = members_[i];
        const int error = m.learner->predict(x).label != y ? 1 : 0;
        const unsigned w = m.rng.poisson(config_.lambda);
        for (unsigned k = 0; k < w; ++k) m.learner->train(x, y);
        const double before = m.adwin.mean();
        if (m.adwin.add(error)) {
            if (config_.reset_on_increase_only && !(m.adwin.mean() > before)) continue;
            m.learner->reset();
            m.adwin.reset();
            ++m.resets;
            pending_events_.push_back(i);
        }
    }
}

Prediction AdwinBagging::predict(const FeatureVector& x) const {
    std::vector<double> mean(n_classes_, 0.0);
    for (const auto& m : members_) {
        const auto v = score_vector(m.learner->predict(x), n_classes_);
        for (std::size_t c = 0; c < n_classes_; ++c) mean[c] += v[c];
    }
    for (double& v : mean) v /= static_cast<double>(members_.size());
    return Prediction::from_scores(std::move(mean));
}

void AdwinBagging::reset() {
    for (std::size_t i = 0; i < members_.size(); ++i) {
        auto& m = members_[i];
        m.learner->reset();
        m.adwin.reset();
        m.rng = Rng(derive_seed(config_.seed, {i}));
        m.resets = 0;
    }
    pending_events_.clear();
}

std::size_t AdwinBagging::model_size() const {
    std::size_t n = 0;
    for (const auto& m : members_) n += m.learner->model_size() + 2 * m.adwin.bucket_count();
    return n;
}

std::vector<std::size_t> AdwinBagging::take_drift_events() {
    std::vector<std::size_t> out;
    out.swap(pending_events_);
    return out;
}

}  // namespace dls
