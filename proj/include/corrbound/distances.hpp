#pragma once

// Classical statistical distances between distributions on a finite set of
// opaque outcome keys. Two distributions are comparable only when their key
// sets are identical; nothing is zero-padded.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace corrbound {

class FiniteDistribution {
  public:
    using Key = std::uint64_t;
    using Entry = std::pair<Key, double>;

    /// Entries in [-1e-14, 0) are clamped to zero; the total must be one
    /// within 1e-10. Duplicate keys are rejected.
    static FiniteDistribution from_entries(std::vector<Entry> entries);
    static FiniteDistribution from_map(const std::map<Key, double>& weights);
    /// Keys 0 .. size-1.
    static FiniteDistribution from_vector(const Eigen::VectorXd& weights);

    /// Sorted by key.
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    bool same_support_keys(const FiniteDistribution& other) const;

  private:
    explicit FiniteDistribution(std::vector<Entry> entries) : entries_(std::move(entries)) {}

    std::vector<Entry> entries_;
};

/// 1/2 sum |p - q|.
double tvd(const FiniteDistribution& p, const FiniteDistribution& q);

/// sum sqrt(p q).
double bhattacharyya(const FiniteDistribution& p, const FiniteDistribution& q);

/// 1/2 sum (sqrt p - sqrt q)^2, which equals 1 - bhattacharyya(p, q).
double hellinger_sq(const FiniteDistribution& p, const FiniteDistribution& q);

/// Neumaier-compensated running sum.
class CompensatedSum {
  public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + carry_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

} // namespace corrbound
