#include "corrbound/correlation.hpp"

#include <algorithm>
#include <cmath>

namespace corrbound {

namespace {

void check_model(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                 const ScoreVector& t_score) {
    detail::require_same_size(w.size(), p0.size(), "initial distribution");
    detail::require_same_size(w.size(), s.size(), "score S");
    detail::require_same_size(w.size(), t_score.size(), "score T");
}

constexpr std::uint64_t kMcStream = 0x6d63'3270'7400ULL; // "mc2pt"

Index sample_index(const Vector& weights, double total, double u) {
    double target = u * total;
    Index last = -1;
    for (Index i = 0; i < weights.size(); ++i) {
        if (weights(i) <= 0.0) continue;
        last = i;
        if (target < weights(i)) return i;
        target -= weights(i);
    }
    return last;
}

} // namespace

double two_point(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                 const ScoreVector& t_score, double t) {
    check_model(w, p0, s, t_score);
    const Vector weighted = s.values().cwiseProduct(p0.values());
    return t_score.values().dot(propagator(w, t) * weighted);
}

double correlation_derivative(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                              const ScoreVector& t_score, double t) {
    check_model(w, p0, s, t_score);
    const Vector weighted = w.matrix() * s.values().cwiseProduct(p0.values());
    return t_score.values().dot(propagator(w, t) * weighted);
}

double equal_time_product(const ProbVector& p0, const std::vector<ScoreVector>& scores) {
    Vector v = p0.values();
    for (const auto& s : scores) {
        detail::require_same_size(p0.size(), s.size(), "score");
        v = v.cwiseProduct(s.values());
    }
    return v.sum();
}

double multipoint(const RateMatrix& w, const ProbVector& p0, const std::vector<ScoreVector>& scores,
                  const std::vector<double>& times) {
    if (scores.empty() || scores.size() != times.size())
        throw Error(ErrorCode::DimensionMismatch, "need one time per score and at least one score");
    detail::require_same_size(w.size(), p0.size(), "initial distribution");
    if (times.front() != 0.0) throw Error(ErrorCode::TimesNotSorted, "first time must be 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] >= times[i - 1]))
            throw Error(ErrorCode::TimesNotSorted, "times must be non-decreasing");

    Vector v = p0.values();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        detail::require_same_size(w.size(), scores[i].size(), "score");
        if (i > 0 && times[i] > times[i - 1]) v = propagator(w, times[i] - times[i - 1]) * v;
        v = scores[i].values().cwiseProduct(v);
    }
    return v.sum();
}

Index Trajectory::state_at(double t) const {
    Index state = initial_state;
    for (const auto& jump : jumps) {
        if (jump.time > t) break;
        state = jump.state;
    }
    return state;
}

Trajectory sample_trajectory(const RateMatrix& w, const ProbVector& p0, double horizon,
                             Xoshiro256& rng) {
    detail::require_same_size(w.size(), p0.size(), "initial distribution");
    detail::require_time(horizon);
    Trajectory path;
    path.horizon = horizon;
    path.initial_state = sample_index(p0.values(), 1.0, rng.uniform());

    const Vector& escape = w.escape_rates();
    Index state = path.initial_state;
    double clock = 0.0;
    Vector column(w.size());
    while (true) {
        const double rate = escape(state);
        clock += rng.exponential(rate);
        if (!(clock < horizon)) break;
        column = w.matrix().col(state);
        column(state) = 0.0;
        const Index next = sample_index(column, rate, rng.uniform());
        path.jumps.push_back({clock, next});
        state = next;
    }
    return path;
}

void Moments::add(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void Moments::merge(const Moments& other) noexcept {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    n_ += other.n_;
}

double Moments::variance() const noexcept {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double Moments::std_error() const noexcept {
    return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

Moments mc_two_point_samples(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                             const ScoreVector& t_score, double t, std::uint64_t n_samples,
                             Xoshiro256& rng) {
    check_model(w, p0, s, t_score);
    detail::require_time(t);
    Moments acc;
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        const Trajectory path = sample_trajectory(w, p0, t, rng);
        acc.add(s[path.initial_state] * t_score[path.final_state()]);
    }
    return acc;
}

McEstimate mc_two_point(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                        const ScoreVector& t_score, double t, std::uint64_t n_samples,
                        std::uint64_t seed) {
    if (n_samples < kMinMcSamples)
        throw Error(ErrorCode::TooFewSamples, "Monte Carlo needs at least 100 samples");
    Xoshiro256 rng(seed, kMcStream);
    const Moments m = mc_two_point_samples(w, p0, s, t_score, t, n_samples, rng);
    return {m.mean(), m.std_error()};
}

} // namespace corrbound
