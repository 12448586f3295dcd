#include "corrbound/distances.hpp"

#include <algorithm>
#include <cmath>

#include "corrbound/error.hpp"

namespace corrbound {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        carry_ += (sum_ - t) + x;
    else
        carry_ += (x - t) + sum_;
    sum_ = t;
}

FiniteDistribution FiniteDistribution::from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    CompensatedSum total;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i > 0 && entries[i].first == entries[i - 1].first)
            throw Error(ErrorCode::BadInput, "duplicate outcome key");
        double& w = entries[i].second;
        if (!std::isfinite(w)) throw Error(ErrorCode::NonFinite, "non-finite outcome weight");
        if (w < 0.0) {
            if (w < -1e-14) throw Error(ErrorCode::InvalidProbability, "negative outcome weight");
            w = 0.0;
        }
        total.add(w);
    }
    if (entries.empty() || std::abs(total.value() - 1.0) > 1e-10)
        throw Error(ErrorCode::InvalidProbability, "outcome weights do not sum to one");
    return FiniteDistribution(std::move(entries));
}

FiniteDistribution FiniteDistribution::from_map(const std::map<Key, double>& weights) {
    return from_entries(std::vector<Entry>(weights.begin(), weights.end()));
}

FiniteDistribution FiniteDistribution::from_vector(const Eigen::VectorXd& weights) {
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(weights.size()));
    for (Eigen::Index i = 0; i < weights.size(); ++i)
        entries.emplace_back(static_cast<Key>(i), weights(i));
    return from_entries(std::move(entries));
}

bool FiniteDistribution::same_support_keys(const FiniteDistribution& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].first != other.entries_[i].first) return false;
    return true;
}

namespace {

template <typename Term>
double pairwise_sum(const FiniteDistribution& p, const FiniteDistribution& q, Term term) {
    if (!p.same_support_keys(q))
        throw Error(ErrorCode::KeyMismatch, "distributions are defined on different key sets");
    CompensatedSum acc;
    const auto& a = p.entries();
    const auto& b = q.entries();
    for (std::size_t i = 0; i < a.size(); ++i) acc.add(term(a[i].second, b[i].second));
    return acc.value();
}

} // namespace

double tvd(const FiniteDistribution& p, const FiniteDistribution& q) {
    const double d = 0.5 * pairwise_sum(p, q, [](double x, double y) { return std::abs(x - y); });
    return std::clamp(d, 0.0, 1.0);
}

double bhattacharyya(const FiniteDistribution& p, const FiniteDistribution& q) {
    const double b = pairwise_sum(p, q, [](double x, double y) { return std::sqrt(x * y); });
    return std::clamp(b, 0.0, 1.0);
}

double hellinger_sq(const FiniteDistribution& p, const FiniteDistribution& q) {
    const double h = 0.5 * pairwise_sum(p, q, [](double x, double y) {
                         const double d = std::sqrt(x) - std::sqrt(y);
                         return d * d;
                     });
    return std::clamp(h, 0.0, 1.0);
}

} // namespace corrbound
