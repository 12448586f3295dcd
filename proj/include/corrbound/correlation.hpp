#pragma once

#include <cstdint>
#include <vector>

#include "corrbound/markov.hpp"
#include "corrbound/rng.hpp"

namespace corrbound {

/// C(t) = <S(X(0)) T(X(t))> = 1 T e^{W t} S p0.
double two_point(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                 const ScoreVector& t_score, double t);

/// dC/dt = 1 T e^{W t} W S p0.
double correlation_derivative(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                              const ScoreVector& t_score, double t);

/// <S_1(t_1) S_2(t_2) ... S_J(t_J)> with t_1 = 0, evaluated as a
/// right-to-left chain of matrix-vector products.
double multipoint(const RateMatrix& w, const ProbVector& p0, const std::vector<ScoreVector>& scores,
                  const std::vector<double>& times);

/// <S_1(0) S_2(0) ... S_J(0)>, the all-times-zero limit of `multipoint`.
double equal_time_product(const ProbVector& p0, const std::vector<ScoreVector>& scores);

struct Jump {
    double time;
    Index state;
};

/// A sampled jump path on [0, horizon]. Jump times are strictly increasing
/// and lie in (0, horizon); consecutive states differ.
struct Trajectory {
    Index initial_state = 0;
    std::vector<Jump> jumps;
    double horizon = 0.0;

    std::size_t jump_count() const noexcept { return jumps.size(); }
    Index state_at(double t) const;
    Index final_state() const { return jumps.empty() ? initial_state : jumps.back().state; }
};

/// Gillespie sampling. States with zero escape rate hold forever.
Trajectory sample_trajectory(const RateMatrix& w, const ProbVector& p0, double horizon,
                             Xoshiro256& rng);

/// Welford moments that merge exactly across shards.
class Moments {
  public:
    void add(double x) noexcept;
    void merge(const Moments& other) noexcept;

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept;
    double std_error() const noexcept;

  private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct McEstimate {
    double estimate;
    double std_error;
};

inline constexpr std::uint64_t kMinMcSamples = 100;

/// Accumulates `n_samples` draws of S(X(0)) T(X(t)) from the caller's stream.
Moments mc_two_point_samples(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                             const ScoreVector& t_score, double t, std::uint64_t n_samples,
                             Xoshiro256& rng);

/// Sample mean and standard error of S(X(0)) T(X(t)). Uses its own stream
/// derived from `seed`, so calls with the same arguments are reproducible.
McEstimate mc_two_point(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                        const ScoreVector& t_score, double t, std::uint64_t n_samples,
                        std::uint64_t seed);

} // namespace corrbound
