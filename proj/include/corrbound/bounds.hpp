#pragma once

// Dynamical activity, the geodesic argument and the catalogue of
// correlation bounds. Every bound comes back as a BoundReport carrying both
// sides of the inequality.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corrbound/correlation.hpp"
#include "corrbound/markov.hpp"

namespace corrbound {

enum class BoundId {
    MainEq5,
    ZeroTEq6,
    DerivEq7,
    EtaEq8,
    TangentS29,
    MultiSinS40,
    MultiEtaS39,
    OnepointSinS42,
    OnepointEtaS41,
    OnepointActivityS45,
    PulseEq11,
    StepEq12,
};

inline constexpr BoundId kAllBoundIds[] = {
    BoundId::MainEq5,        BoundId::ZeroTEq6,       BoundId::DerivEq7,
    BoundId::EtaEq8,         BoundId::TangentS29,     BoundId::MultiSinS40,
    BoundId::MultiEtaS39,    BoundId::OnepointSinS42, BoundId::OnepointEtaS41,
    BoundId::OnepointActivityS45, BoundId::PulseEq11, BoundId::StepEq12,
};

const char* to_string(BoundId id);
/// Accepts the upper-case tags used in CSV output, e.g. "ETA_EQ8".
std::optional<BoundId> parse_bound_id(std::string_view tag);

enum class CmaxMode { Standard, Tight };

const char* to_string(CmaxMode mode);
std::optional<CmaxMode> parse_cmax_mode(std::string_view tag);

/// Slack allowed on lhs / rhs before a report counts as a violation.
inline constexpr double kRatioSlack = 1e-9;
/// Both sides at or below this are treated as an exact 0 <= 0.
inline constexpr double kNegligible = 1e-13;
/// Absolute tolerance of the geodesic quadrature.
inline constexpr double kGeodesicTolerance = 1e-9;

struct BoundReport {
    BoundId bound_id = BoundId::MainEq5;
    double t1 = 0.0;
    double t2 = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool in_validity_domain = true;
    std::optional<double> geodesic_arg;
    CmaxMode cmax_mode = CmaxMode::Standard;
    /// Companion right-hand side evaluated for comparison: the sine rhs for
    /// the tangent bound, and the other variant's rhs for the one-point
    /// sine/activity pair.
    std::optional<double> reference_rhs;

    bool holds(double slack = kRatioSlack) const { return ratio <= 1.0 + slack; }
};

/// lhs / rhs, with 0 when both sides are negligible and +inf when only the
/// right side is.
double bound_ratio(double lhs, double rhs);

inline constexpr const char* kBoundCsvHeader = "bound_id,t1,t2,lhs,rhs,ratio,in_domain,cmax_mode";
std::string to_csv_row(const BoundReport& report);

// ---------------------------------------------------------------------------
// Dynamical activity

/// sum_mu R(mu) p(mu): expected jump rate in distribution p.
double activity_rate(const RateMatrix& w, const ProbVector& p);

/// Steady-state activity rate (the activity of P_st).
double steady_activity_rate(const RateMatrix& w);

/// A(t) = sum_mu R(mu) [\int_0^t e^{W s} ds p0]_mu, via the block exponential.
double dynamical_activity(const RateMatrix& w, const ProbVector& p0, double t);

/// A(t) for one (W, p0), evaluated repeatedly from cached spectral data.
class ActivityCurve {
  public:
    ActivityCurve(const RateMatrix& w, const ProbVector& p0);

    double operator()(double t) const;
    double initial_rate() const noexcept { return initial_rate_; }
    /// True when p0 is stationary, so that A(t) = rate * t exactly.
    bool stationary() const noexcept { return stationary_; }
    const Evolution& evolution() const noexcept { return evolution_; }

  private:
    Evolution evolution_;
    Vector escape_;
    Vector p0_;
    double initial_rate_ = 0.0;
    bool stationary_ = false;
};

/// 1/2 \int_{t1}^{t2} sqrt(A(t)) / t dt. Integrated in s = sqrt(t), which
/// turns the integrand into the bounded sqrt(A(s^2)) / s.
double geodesic_arg(const RateMatrix& w, const ProbVector& p0, double t1, double t2);
double geodesic_arg(const ActivityCurve& activity, double t1, double t2);

/// Score prefactor: S_max T_max (standard) or half the range of S(a) T(b)
/// over all state pairs (tight).
double cmax(const ScoreVector& s, const ScoreVector& t_score, CmaxMode mode);

/// Same prefactor for a product of J scores.
double cmax_product(const std::vector<ScoreVector>& scores, CmaxMode mode);

// ---------------------------------------------------------------------------
// Bound catalogue

enum class MultipointVariant { Sin, Eta };
enum class OnepointVariant { Sin, Eta, Activity };

/// Evaluates bounds for one model. Holds the spectral cache so sweeps over
/// many times do not redo the decomposition.
class BoundEvaluator {
  public:
    BoundEvaluator(RateMatrix w, ProbVector p0, ScoreVector s, ScoreVector t_score,
                   CmaxMode mode = CmaxMode::Standard);

    const RateMatrix& generator() const noexcept { return w_; }
    const ProbVector& initial() const noexcept { return p0_; }
    const ActivityCurve& activity() const noexcept { return activity_; }
    CmaxMode mode() const noexcept { return mode_; }

    double correlation(double t) const;
    double correlation_derivative(double t) const;

    BoundReport main(double t1, double t2) const;
    BoundReport zero_to_t(double t) const;
    BoundReport derivative(double t) const;
    BoundReport eta(double t) const;
    BoundReport tangent(double t) const;
    BoundReport multipoint(const std::vector<ScoreVector>& scores, const std::vector<double>& times,
                           MultipointVariant variant) const;
    /// Uses the evaluator's S as the observable.
    BoundReport onepoint(double t, OnepointVariant variant) const;

  private:
    RateMatrix w_;
    ProbVector p0_;
    ScoreVector s_;
    ScoreVector t_score_;
    CmaxMode mode_;
    ActivityCurve activity_;
    Vector weighted_;          // S p0
    Vector weighted_rate_;     // W S p0
};

BoundReport bound_main(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                       const ScoreVector& t_score, double t1, double t2,
                       CmaxMode mode = CmaxMode::Standard);
BoundReport bound_zero_to_t(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                            const ScoreVector& t_score, double t,
                            CmaxMode mode = CmaxMode::Standard);
BoundReport bound_derivative(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                             const ScoreVector& t_score, double t,
                             CmaxMode mode = CmaxMode::Standard);
BoundReport bound_eta(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                      const ScoreVector& t_score, double t, CmaxMode mode = CmaxMode::Standard);
BoundReport bound_tangent_tur(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                              const ScoreVector& t_score, double t,
                              CmaxMode mode = CmaxMode::Standard);
BoundReport bound_multipoint(const RateMatrix& w, const ProbVector& p0,
                             const std::vector<ScoreVector>& scores,
                             const std::vector<double>& times, MultipointVariant variant,
                             CmaxMode mode = CmaxMode::Standard);
BoundReport bound_onepoint(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                           double t, OnepointVariant variant, CmaxMode mode = CmaxMode::Standard);

} // namespace corrbound
