#include "corrbound/markov.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "corrbound/rng.hpp"

namespace corrbound {

namespace detail {

void require_time(double t) {
    if (!std::isfinite(t)) throw Error(ErrorCode::NonFinite, "time must be finite");
    if (t < 0.0) throw Error(ErrorCode::NegativeTime, "time must be >= 0");
}

void require_same_size(Index a, Index b, const char* what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": " << a << " vs " << b;
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

} // namespace detail

namespace {

using Complex = std::complex<double>;

// (e^z - 1) / z without cancellation near zero.
Complex phi1(Complex z) {
    if (std::abs(z) < 1e-2) {
        Complex term = 1.0;
        Complex sum = 1.0;
        for (int k = 2; k <= 9; ++k) {
            term *= z / static_cast<double>(k);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

struct Spectral {
    bool ok = false;
    Eigen::VectorXcd lambda;
    Eigen::MatrixXcd basis;
    Eigen::MatrixXcd basis_inv;
};

Spectral decompose(const Matrix& a) {
    Spectral out;
    if (a.rows() == 0) return out;
    Eigen::EigenSolver<Matrix> solver(a, true);
    if (solver.info() != Eigen::Success) return out;
    out.basis = solver.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.basis);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    if (!(smallest > 0.0) || sv(0) / smallest > kSpectralConditionLimit) return out;
    out.lambda = solver.eigenvalues();
    out.basis_inv = out.basis.inverse();
    out.ok = out.basis_inv.allFinite();
    return out;
}

Matrix spectral_apply(const Spectral& sp, const Eigen::VectorXcd& diag) {
    Eigen::MatrixXcd m = sp.basis * diag.asDiagonal() * sp.basis_inv;
    return m.real();
}

} // namespace

// ---------------------------------------------------------------------------
// RateMatrix / ProbVector / ScoreVector

RateMatrix RateMatrix::validate(const Matrix& raw) {
    if (raw.rows() != raw.cols()) {
        std::ostringstream os;
        os << "rate matrix is " << raw.rows() << "x" << raw.cols();
        throw Error(ErrorCode::NonSquare, os.str());
    }
    const Index n = raw.rows();
    Matrix w = raw;
    Vector escape = Vector::Zero(n);
    for (Index mu = 0; mu < n; ++mu) {
        if (!std::isfinite(raw(mu, mu))) {
            // The diagonal is recomputed, but NaN there still means a broken input.
            std::ostringstream os;
            os << "entry (" << mu << ", " << mu << ") is not finite";
            throw Error(ErrorCode::NonFinite, os.str(), std::pair<std::size_t, std::size_t>(mu, mu));
        }
        for (Index nu = 0; nu < n; ++nu) {
            if (nu == mu) continue;
            const double rate = raw(nu, mu);
            if (!std::isfinite(rate)) {
                std::ostringstream os;
                os << "entry (" << nu << ", " << mu << ") is not finite";
                throw Error(ErrorCode::NonFinite, os.str(),
                            std::pair<std::size_t, std::size_t>(nu, mu));
            }
            if (rate < 0.0) {
                std::ostringstream os;
                os << "entry (" << nu << ", " << mu << ") = " << rate << " is negative";
                throw Error(ErrorCode::NegativeRate, os.str(),
                            std::pair<std::size_t, std::size_t>(nu, mu));
            }
            escape(mu) += rate;
        }
        w(mu, mu) = -escape(mu);
    }
    return RateMatrix(std::move(w), std::move(escape));
}

RateMatrix RateMatrix::zero(Index n) { return validate(Matrix::Zero(n, n)); }

RateMatrix RateMatrix::scaled(double factor) const {
    if (!(factor >= 0.0) || !std::isfinite(factor))
        throw Error(ErrorCode::BadInput, "scale factor must be finite and >= 0");
    return RateMatrix(w_ * factor, escape_ * factor);
}

ProbVector ProbVector::make(const Vector& p, double tolerance) {
    if (!p.allFinite()) throw Error(ErrorCode::NonFinite, "probability vector has non-finite entries");
    if (p.size() == 0) throw Error(ErrorCode::InvalidProbability, "empty probability vector");
    Vector q = p;
    for (Index i = 0; i < q.size(); ++i) {
        if (q(i) < 0.0) {
            if (q(i) < -tolerance) {
                std::ostringstream os;
                os << "entry " << i << " = " << q(i) << " is negative";
                throw Error(ErrorCode::InvalidProbability, os.str());
            }
            q(i) = 0.0;
        }
    }
    const double sum = q.sum();
    if (std::abs(sum - 1.0) > tolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "entries sum to " << sum;
        throw Error(ErrorCode::InvalidProbability, os.str());
    }
    q /= sum;
    return ProbVector(std::move(q));
}

ProbVector ProbVector::uniform(Index n) {
    return ProbVector(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::point_mass(Index n, Index state) {
    Vector p = Vector::Zero(n);
    p(state) = 1.0;
    return ProbVector(std::move(p));
}

ScoreVector::ScoreVector(Vector s) : s_(std::move(s)) {
    if (!s_.allFinite()) throw Error(ErrorCode::NonFinite, "score vector has non-finite entries");
    max_abs_ = s_.size() ? s_.cwiseAbs().maxCoeff() : 0.0;
}

// ---------------------------------------------------------------------------
// Matrix exponential

Matrix matrix_exponential_pade(const Matrix& a) {
    static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
    static constexpr double theta13 = 5.371920351148152;

    const Index n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    const Matrix as = a / std::ldexp(1.0, squarings);

    const Matrix a2 = as * as;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                           b[3] * a2 + b[1] * ident;
    const Matrix u = as * u_inner;
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                     b[2] * a2 + b[0] * ident;
    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) r = r * r;
    return r;
}

Matrix matrix_exponential(const Matrix& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::NonSquare, "matrix exponential of non-square matrix");
    if (!a.allFinite()) throw Error(ErrorCode::NonFinite, "matrix exponential of non-finite matrix");
    if (a.isZero(0.0)) return Matrix::Identity(a.rows(), a.cols());
    const Spectral sp = decompose(a);
    if (sp.ok) return spectral_apply(sp, sp.lambda.array().exp().matrix());
    return matrix_exponential_pade(a);
}

Matrix propagator(const RateMatrix& w, double t) {
    detail::require_time(t);
    return matrix_exponential(w.matrix() * t);
}

ProbVector propagate(const RateMatrix& w, const ProbVector& p0, double t) {
    detail::require_same_size(w.size(), p0.size(), "propagate");
    return ProbVector::make(propagator(w, t) * p0.values());
}

Matrix propagator_integral(const RateMatrix& w, double t) {
    detail::require_time(t);
    const Index n = w.size();
    Matrix block = Matrix::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = w.matrix() * t;
    block.topRightCorner(n, n) = Matrix::Identity(n, n) * t;
    // The block generator always has a nontrivial Jordan structure at zero,
    // so go straight to Pade.
    return matrix_exponential_pade(block).topRightCorner(n, n);
}

ProbVector steady_state(const RateMatrix& w) {
    const Index n = w.size();
    if (n == 1) return ProbVector::uniform(1);
    Eigen::JacobiSVD<Matrix> svd(w.matrix(), Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double scale = std::max(1.0, sv(0));
    if (sv(n - 2) <= 1e-12 * scale)
        throw Error(ErrorCode::NonUniqueSteadyState, "generator kernel has dimension > 1");
    Vector kernel = svd.matrixV().col(n - 1);
    const double total = kernel.sum();
    if (!(std::abs(total) > 1e-300))
        throw Error(ErrorCode::NoConvergence, "kernel vector is not normalizable");
    kernel /= total;
    for (Index i = 0; i < n; ++i) {
        if (kernel(i) < 0.0) {
            if (kernel(i) < -1e-10) throw Error(ErrorCode::NoConvergence, "kernel vector has mixed signs");
            kernel(i) = 0.0;
        }
    }
    kernel /= kernel.sum();
    const double residual = (w.matrix() * kernel).cwiseAbs().maxCoeff();
    if (residual > 1e-10 * scale)
        throw Error(ErrorCode::NoConvergence, "stationary residual too large");
    return ProbVector::make(kernel);
}

// ---------------------------------------------------------------------------
// Evolution

Evolution::Evolution(RateMatrix w) : w_(std::move(w)) {
    if (w_.matrix().isZero(0.0)) return;
    Spectral sp = decompose(w_.matrix());
    if (!sp.ok) return;
    spectral_ = true;
    lambda_ = std::move(sp.lambda);
    basis_ = std::move(sp.basis);
    basis_inv_ = std::move(sp.basis_inv);
}

Matrix Evolution::propagator(double t) const {
    detail::require_time(t);
    if (!spectral_) return corrbound::propagator(w_, t);
    Eigen::VectorXcd d = (lambda_ * t).array().exp().matrix();
    return (basis_ * d.asDiagonal() * basis_inv_).real();
}

Matrix Evolution::integral(double t) const {
    detail::require_time(t);
    if (!spectral_) return corrbound::propagator_integral(w_, t);
    Eigen::VectorXcd d(lambda_.size());
    for (Index k = 0; k < lambda_.size(); ++k) d(k) = t * phi1(lambda_(k) * t);
    return (basis_ * d.asDiagonal() * basis_inv_).real();
}

double Evolution::integral_form(const Vector& left, const Vector& right, double t) const {
    detail::require_time(t);
    if (!spectral_) return left.dot(corrbound::propagator_integral(w_, t) * right);
    const Eigen::RowVectorXcd l = left.transpose().cast<Complex>() * basis_;
    const Eigen::VectorXcd r = basis_inv_ * right.cast<Complex>();
    Complex acc = 0.0;
    for (Index k = 0; k < lambda_.size(); ++k) acc += l(k) * t * phi1(lambda_(k) * t) * r(k);
    return acc.real();
}

// ---------------------------------------------------------------------------
// Random models

RandomModel random_model(Index n, std::uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::BadDimension, "random models need n >= 2");
    Xoshiro256 rng(seed);
    Matrix raw = Matrix::Zero(n, n);
    for (Index mu = 0; mu < n; ++mu)
        for (Index nu = 0; nu < n; ++nu)
            if (nu != mu) raw(nu, mu) = rng.uniform_open_closed();

    Vector p(n);
    for (Index i = 0; i < n; ++i) p(i) = -std::log(rng.uniform_open_closed());
    p /= p.sum();

    Vector s(n);
    for (Index i = 0; i < n; ++i) s(i) = 2.0 * rng.uniform() - 1.0;

    return RandomModel{RateMatrix::validate(raw), ProbVector::make(p), ScoreVector(std::move(s))};
}

} // namespace corrbound
