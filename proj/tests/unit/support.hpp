#pragma once

// Reference models and independent oracles shared by the unit and
// acceptance tests.

#include <cmath>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "corrbound/markov.hpp"

namespace corrbound::testing {

// Two states, B2 -> B1 at rate 1, start in B2, S = T = (-1, 1).
struct AbsorbingTwoState {
    RateMatrix w;
    ProbVector p0;
    ScoreVector s;

    AbsorbingTwoState()
        : w(RateMatrix::validate((Matrix(2, 2) << 0.0, 1.0, 0.0, 0.0).finished())),
          p0(ProbVector::point_mass(2, 1)),
          s((Vector(2) << -1.0, 1.0).finished()) {}

    static double correlation(double t) { return 2.0 * std::exp(-t) - 1.0; }
    static double derivative(double t) { return -2.0 * std::exp(-t); }
    static double activity(double t) { return -std::expm1(-t); }
    static double eta(double t) { return std::exp(-t); }
};

// Two states, both rates 1, started from the stationary (1/2, 1/2).
struct SymmetricTwoState {
    RateMatrix w;
    ProbVector p_st;
    ScoreVector s;

    SymmetricTwoState()
        : w(RateMatrix::validate((Matrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished())),
          p_st(ProbVector::uniform(2)),
          s((Vector(2) << -1.0, 1.0).finished()) {}

    static double correlation(double t) { return std::exp(-2.0 * t); }
};

inline Matrix raw(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (const auto& r : rows) {
        Index j = 0;
        for (double x : r) m(i, j++) = x;
        ++i;
    }
    return m;
}

inline Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

/// Eigen's own matrix exponential (unsupported module), used only as an
/// independent reference.
inline Matrix eigen_expm(const Matrix& a) { return a.exp(); }

/// Taylor series of e^A after scaling by 2^-k, then squared back.
inline Matrix series_expm(const Matrix& a) {
    int k = 0;
    double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    while (norm > 0.5) {
        norm /= 2.0;
        ++k;
    }
    const Matrix scaled = a / std::ldexp(1.0, k);
    Matrix term = Matrix::Identity(a.rows(), a.cols());
    Matrix sum = term;
    for (int j = 1; j < 40; ++j) {
        term = term * scaled / j;
        sum += term;
    }
    for (int i = 0; i < k; ++i) sum = sum * sum;
    return sum;
}

/// Composite midpoint rule with n cells.
template <typename F>
double midpoint(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += f(a + (i + 0.5) * h);
    return acc * h;
}

/// Random ergodic model with the library generator.
inline RandomModel model(Index n, std::uint64_t seed) { return random_model(n, seed); }

} // namespace corrbound::testing
