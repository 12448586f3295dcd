#pragma once

// First-order response of a stationary Markov process to a weak
// perturbation W -> W + chi F f(t).

#include <utility>
#include <vector>

#include "corrbound/bounds.hpp"
#include "corrbound/markov.hpp"

namespace corrbound {

enum class DriveKind { Pulse, Step, Sampled };

class Drive {
  public:
    /// Dirac pulse at t = 0. `width` only matters to the direct-integration
    /// oracle, which replaces the delta with a rectangle of that width and
    /// height 1 / width.
    static Drive pulse(double width = 1e-4);
    /// Heaviside step switched on at t = 0.
    static Drive step();
    /// Piecewise-linear f(t) through (time, value) samples, zero outside.
    static Drive sampled(std::vector<std::pair<double, double>> samples);

    DriveKind kind() const noexcept { return kind_; }
    double pulse_width() const noexcept { return width_; }
    const std::vector<std::pair<double, double>>& samples() const noexcept { return samples_; }

    /// f(t) for step and sampled drives.
    double value(double t) const;

  private:
    DriveKind kind_ = DriveKind::Step;
    double width_ = 1e-4;
    std::vector<std::pair<double, double>> samples_;
};

struct Perturbation {
    Matrix f;
    double chi;
    Drive drive;

    /// Rejects chi == 0 and non-finite F.
    static Perturbation make(Matrix f, double chi, Drive drive);
};

/// F = W diag(S), the perturbation under which R_T = dC/dt.
Matrix canonical_perturbation(const RateMatrix& w, const ScoreVector& s);

inline constexpr double kSteadyStateTolerance = 1e-8;

/// R_G(t) = 1 G e^{W t} F P_st for t >= 0 and 0 for t < 0.
double response_function(const RateMatrix& w, const ProbVector& p_st, const Matrix& f,
                         const ScoreVector& g, double t);

/// chi dC/dt: shift of <T> after a pulse of W diag(S).
double pulse_shift(const RateMatrix& w, const ProbVector& p_st, const ScoreVector& s,
                   const ScoreVector& t_score, double chi, double t);

/// chi (C(t) - C(0)): shift of <T> under a step of W diag(S).
double step_shift(const RateMatrix& w, const ProbVector& p_st, const ScoreVector& s,
                  const ScoreVector& t_score, double chi, double t);

/// |chi| cmax sqrt(a / t), a the steady activity rate.
BoundReport bound_pulse(const RateMatrix& w, const ProbVector& p_st, const ScoreVector& s,
                        const ScoreVector& t_score, double chi, double t,
                        CmaxMode mode = CmaxMode::Standard);

/// 2 |chi| cmax sin(sqrt(a t)) while sqrt(a t) <= pi/2, else 2 |chi| cmax.
BoundReport bound_step(const RateMatrix& w, const ProbVector& p_st, const ScoreVector& s,
                       const ScoreVector& t_score, double chi, double t,
                       CmaxMode mode = CmaxMode::Standard);

/// chi 1 G P_1(t), the linear prediction for any drive. Pulse and step use
/// closed forms; sampled drives use a trapezoidal convolution over the
/// sample times.
double linear_shift(const RateMatrix& w, const ProbVector& p_st, const Perturbation& pert,
                    const ScoreVector& g, double t);

struct OracleSeries {
    Vector stationary;
    std::vector<double> times;
    std::vector<Vector> probabilities;

    /// 1 G (P(t_i) - P_st).
    double shift(const ScoreVector& g, std::size_t i) const;
    /// Shift at the last sample not after t.
    double shift_at(const ScoreVector& g, double t) const;
};

/// Integrates dP/dt = (W + chi F f(t)) P from P_st with classical RK4 and a
/// fixed step. chi = 0 is allowed here (it must reproduce P_st).
/// dt must not exceed 1e-3 / max escape rate.
OracleSeries perturbed_oracle(const RateMatrix& w, const Matrix& f, double chi,
                              const Drive& drive, double t_end, double dt);

struct ResponseRow {
    double t;
    double shift;
    double bound_rhs;
    double ratio;
    bool in_domain;
};

inline constexpr const char* kResponseCsvHeader = "t,shift,bound_rhs,ratio,in_domain";
std::string to_csv_row(const ResponseRow& row);

} // namespace corrbound
