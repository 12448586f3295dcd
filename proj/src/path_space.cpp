#include "corrbound/path_space.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "corrbound/bounds.hpp"

namespace corrbound {

std::uint64_t skeleton_path_count(Index n_states, int n_steps) {
    if (n_steps < 1) throw Error(ErrorCode::BadInput, "skeletons need at least one step");
    std::uint64_t count = static_cast<std::uint64_t>(n_states);
    for (int k = 0; k < n_steps; ++k) {
        count *= static_cast<std::uint64_t>(n_states);
        if (count > kMaxSkeletonPaths)
            throw Error(ErrorCode::TooManyPaths, "skeleton enumeration exceeds 1e6 paths");
    }
    return count;
}

FiniteDistribution skeleton_distribution(const RateMatrix& w, const ProbVector& p0, double tau,
                                         int n_steps, double t) {
    detail::require_same_size(w.size(), p0.size(), "initial distribution");
    detail::require_time(t);
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw Error(ErrorCode::BadInterval, "horizon tau must be positive");
    const std::uint64_t total = skeleton_path_count(w.size(), n_steps);
    const auto n = static_cast<std::uint64_t>(w.size());

    const Matrix step = propagator(w.scaled(t / tau), tau / n_steps);

    std::vector<double> prob(p0.values().data(), p0.values().data() + p0.size());
    std::uint64_t stride = n; // N^(k+1) for the prefix length k+1
    for (int k = 0; k < n_steps; ++k) {
        const std::uint64_t prev_stride = stride / n;
        std::vector<double> next(stride * n);
        for (std::uint64_t key = 0; key < stride; ++key) {
            const auto last = static_cast<Index>(key / prev_stride);
            for (std::uint64_t x = 0; x < n; ++x)
                next[key + x * stride] = prob[key] * step(static_cast<Index>(x), last);
        }
        prob = std::move(next);
        stride *= n;
    }

    std::vector<FiniteDistribution::Entry> entries;
    entries.reserve(total);
    for (std::uint64_t key = 0; key < total; ++key) entries.emplace_back(key, prob[key]);
    return FiniteDistribution::from_entries(std::move(entries));
}

Index skeleton_state(std::uint64_t key, Index n_states, int step) {
    const auto n = static_cast<std::uint64_t>(n_states);
    for (int k = 0; k < step; ++k) key /= n;
    return static_cast<Index>(key % n);
}

double bhat_survival(const RateMatrix& w, const ProbVector& p0, double t) {
    detail::require_same_size(w.size(), p0.size(), "initial distribution");
    detail::require_time(t);
    return p0.values().dot((-0.5 * t * w.escape_rates()).array().exp().matrix());
}

double eta(const RateMatrix& w, const ProbVector& p0, double t) {
    const double b = bhat_survival(w, p0, t);
    return b * b;
}

double one_minus_eta(const RateMatrix& w, const ProbVector& p0, double t) {
    detail::require_same_size(w.size(), p0.size(), "initial distribution");
    detail::require_time(t);
    double gap = 0.0; // 1 - bhat
    const Vector& escape = w.escape_rates();
    for (Index mu = 0; mu < p0.size(); ++mu) gap -= p0[mu] * std::expm1(-0.5 * t * escape(mu));
    return gap * (2.0 - gap);
}

PathInequalityReport verify_path_inequalities(const RateMatrix& w, const ProbVector& p0,
                                              double tau, int n_steps, double t1, double t2) {
    if (!(t1 >= 0.0) || !(t2 >= t1) || !(t2 <= tau))
        throw Error(ErrorCode::BadInterval, "need 0 <= t1 <= t2 <= tau");
    skeleton_path_count(w.size(), n_steps);

    const FiniteDistribution q1 = skeleton_distribution(w, p0, tau, n_steps, t1);
    const FiniteDistribution q2 = skeleton_distribution(w, p0, tau, n_steps, t2);

    PathInequalityReport report;
    report.tvd_path = tvd(q1, q2);
    report.bhat_path = bhattacharyya(q1, q2);
    // arccos(1 - h) = 2 asin(sqrt(h / 2)) avoids the cancellation near 1.
    report.arccos_lhs = 2.0 * std::asin(std::sqrt(0.5 * hellinger_sq(q1, q2)));
    report.geodesic_arg = t2 > t1 ? geodesic_arg(w, p0, t1, t2) : 0.0;
    report.in_domain = report.geodesic_arg <= std::numbers::pi / 2;
    report.sin_rhs = report.in_domain ? std::sin(report.geodesic_arg) : 1.0;
    report.bhat_holds = report.arccos_lhs <= report.geodesic_arg + kPathSlack;
    report.tvd_holds = !report.in_domain || report.tvd_path <= report.sin_rhs + kPathSlack;
    return report;
}

} // namespace corrbound
