#pragma once

#include <cmath>
#include <vector>

#include "corrbound/error.hpp"

namespace corrbound::quadrature {

struct Rule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes from Newton iteration on P_n.
Rule gauss_legendre(int n);

/// The fixed rule used by `adaptive`.
const Rule& default_rule();

template <typename F>
double apply(const Rule& rule, F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

namespace detail {

template <typename F>
double adaptive_step(const Rule& rule, F& f, double a, double b, double whole, double tol,
                     int depth, int max_depth) {
    const double mid = 0.5 * (a + b);
    const double left = apply(rule, f, a, mid);
    const double right = apply(rule, f, mid, b);
    const double refined = left + right;
    if (std::abs(refined - whole) <= tol) return refined;
    if (depth >= max_depth)
        throw Error(ErrorCode::QuadratureFailure,
                    "adaptive Gauss-Legendre did not converge within the refinement limit");
    return adaptive_step(rule, f, a, mid, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_step(rule, f, mid, b, right, 0.5 * tol, depth + 1, max_depth);
}

} // namespace detail

/// Adaptive bisection with the default Gauss-Legendre rule: an interval is
/// accepted when its two halves agree with the whole to the interval's share
/// of `abs_tol`. Non-convergence after `max_depth` levels throws.
template <typename F>
double adaptive(F&& f, double a, double b, double abs_tol = 1e-9, int max_depth = 20) {
    if (a == b) return 0.0;
    const Rule& rule = default_rule();
    const double whole = apply(rule, f, a, b);
    return detail::adaptive_step(rule, f, a, b, whole, abs_tol, 0, max_depth);
}

} // namespace corrbound::quadrature
