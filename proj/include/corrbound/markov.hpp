#pragma once

// Finite-state continuous-time Markov jump processes: generator validation,
// exact propagation, steady states and seeded random models.
//
// Convention: w(nu, mu) is the rate of the jump mu -> nu, so probability
// vectors are columns and every column of a generator sums to zero.

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "corrbound/error.hpp"

namespace corrbound {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kColumnSumTolerance = 1e-12;
inline constexpr double kProbabilityTolerance = 1e-12;

class RateMatrix {
  public:
    /// Checks a raw square matrix and rebuilds its diagonal from the
    /// off-diagonal rates. The input diagonal is ignored.
    static RateMatrix validate(const Matrix& raw);

    /// Generator with every rate zero (the frozen process).
    static RateMatrix zero(Index n);

    Index size() const noexcept { return w_.rows(); }
    const Matrix& matrix() const noexcept { return w_; }
    double operator()(Index to, Index from) const { return w_(to, from); }

    /// R(mu) = sum over nu != mu of w(nu, mu).
    const Vector& escape_rates() const noexcept { return escape_; }
    double max_escape_rate() const noexcept { return escape_.size() ? escape_.maxCoeff() : 0.0; }

    /// Same process run `factor` times faster.
    RateMatrix scaled(double factor) const;

  private:
    RateMatrix(Matrix w, Vector escape) : w_(std::move(w)), escape_(std::move(escape)) {}

    Matrix w_;
    Vector escape_;
};

inline RateMatrix validate_rate_matrix(const Matrix& raw) { return RateMatrix::validate(raw); }

class ProbVector {
  public:
    /// Entries in [-tolerance, 0) are clamped to zero and the vector is
    /// renormalized when its sum is within `tolerance` of one. Anything
    /// further off is rejected with InvalidProbability.
    static ProbVector make(const Vector& p, double tolerance = kProbabilityTolerance);

    static ProbVector uniform(Index n);
    static ProbVector point_mass(Index n, Index state);

    Index size() const noexcept { return p_.size(); }
    const Vector& values() const noexcept { return p_; }
    double operator[](Index i) const { return p_(i); }

  private:
    explicit ProbVector(Vector p) : p_(std::move(p)) {}

    Vector p_;
};

class ScoreVector {
  public:
    explicit ScoreVector(Vector s);

    Index size() const noexcept { return s_.size(); }
    const Vector& values() const noexcept { return s_; }
    double operator[](Index i) const { return s_(i); }

    double max_abs() const noexcept { return max_abs_; }
    double min() const noexcept { return s_.minCoeff(); }
    double max() const noexcept { return s_.maxCoeff(); }

  private:
    Vector s_;
    double max_abs_ = 0.0;
};

/// Dense matrix exponential. Uses the eigendecomposition when the
/// eigenvector basis is well conditioned and falls back to Pade(13)
/// scaling-and-squaring otherwise.
Matrix matrix_exponential(const Matrix& a);

/// Pade(13) scaling-and-squaring core (Higham 2005), exposed for testing.
Matrix matrix_exponential_pade(const Matrix& a);

/// Eigenvector condition number above which the spectral route is refused.
inline constexpr double kSpectralConditionLimit = 1e4;

/// e^{W t}, column stochastic.
Matrix propagator(const RateMatrix& w, double t);

/// P(t) = e^{W t} P(0).
ProbVector propagate(const RateMatrix& w, const ProbVector& p0, double t);

/// \int_0^t e^{W s} ds, read from the upper-right block of
/// exp([[W t, I t], [0, 0]]).
Matrix propagator_integral(const RateMatrix& w, double t);

/// Unique stationary distribution (kernel of W).
ProbVector steady_state(const RateMatrix& w);

/// Cached spectral data for repeated evaluation at many times. Falls back
/// to the direct routes when W is not diagonalizable with a well
/// conditioned basis.
class Evolution {
  public:
    explicit Evolution(RateMatrix w);

    const RateMatrix& generator() const noexcept { return w_; }
    bool spectral() const noexcept { return spectral_; }

    Matrix propagator(double t) const;
    Matrix integral(double t) const;

    /// Row vector `left` contracted with \int_0^t e^{W s} ds acting on `right`.
    double integral_form(const Vector& left, const Vector& right, double t) const;

  private:
    RateMatrix w_;
    bool spectral_ = false;
    Eigen::VectorXcd lambda_;
    Eigen::MatrixXcd basis_;
    Eigen::MatrixXcd basis_inv_;
};

struct RandomModel {
    RateMatrix w;
    ProbVector p0;
    ScoreVector s;
};

/// Draw order, from one xoshiro256** stream seeded with `seed`:
///   1. off-diagonal rates column by column, each uniform on (0, 1];
///   2. p0 as normalized Exp(1) variates (uniform on the simplex);
///   3. scores uniform on [-1, 1).
RandomModel random_model(Index n, std::uint64_t seed);

inline constexpr const char* kRandomModelDistributions =
    "rates~U(0,1], p0~Dirichlet(1,...,1), S~U[-1,1)";

namespace detail {
void require_time(double t);
void require_same_size(Index a, Index b, const char* what);
} // namespace detail

} // namespace corrbound
