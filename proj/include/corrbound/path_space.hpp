#pragma once

// Discrete-time skeletons of the scaled path measure Q(w_tau; t), i.e. the
// process with generator (t / tau) W observed at L + 1 equally spaced times
// on [0, tau]. The skeleton is a coarse-graining of the full path measure,
// and coarse-graining can only lower TVD and raise the Bhattacharyya
// coefficient (data processing), so any continuous-time inequality of the
// form TVD <= f or arccos(Bhat) <= g must also hold on every skeleton.

#include <cstdint>

#include "corrbound/distances.hpp"
#include "corrbound/markov.hpp"

namespace corrbound {

inline constexpr std::uint64_t kMaxSkeletonPaths = 1'000'000;

/// Number of skeleton paths, N^(L+1); throws TooManyPaths past the guard.
std::uint64_t skeleton_path_count(Index n_states, int n_steps);

/// Path (x_0, ..., x_L) has key sum_k x_k N^k and probability
/// p0(x_0) prod_k M(x_{k+1}, x_k) with M = e^{(t/tau) W tau/L}.
FiniteDistribution skeleton_distribution(const RateMatrix& w, const ProbVector& p0, double tau,
                                         int n_steps, double t);

/// State x_k encoded in a skeleton path key.
Index skeleton_state(std::uint64_t key, Index n_states, int step);

/// Bhat(Q(w; 0), Q(w; t)) = sum_mu p0(mu) exp(-t R(mu) / 2), exact in
/// continuous time.
double bhat_survival(const RateMatrix& w, const ProbVector& p0, double t);

/// eta(t) = bhat_survival^2.
double eta(const RateMatrix& w, const ProbVector& p0, double t);

/// 1 - eta(t), evaluated with expm1 so it stays accurate as t -> 0.
double one_minus_eta(const RateMatrix& w, const ProbVector& p0, double t);

struct PathInequalityReport {
    double tvd_path = 0.0;
    double bhat_path = 1.0;
    double geodesic_arg = 0.0;
    double sin_rhs = 0.0;      // sin(geodesic_arg), meaningful when in_domain
    double arccos_lhs = 0.0;   // arccos(bhat_path), from the Hellinger form
    bool in_domain = true;     // geodesic_arg <= pi/2
    bool tvd_holds = true;
    bool bhat_holds = true;

    bool holds() const noexcept { return tvd_holds && bhat_holds; }
};

inline constexpr double kPathSlack = 1e-9;

/// Compares skeleton distances between t1 and t2 against the geodesic
/// argument: arccos(Bhat) <= geo and, for geo <= pi/2, TVD <= sin(geo).
PathInequalityReport verify_path_inequalities(const RateMatrix& w, const ProbVector& p0,
                                              double tau, int n_steps, double t1, double t2);

} // namespace corrbound
