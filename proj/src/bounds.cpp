#include "corrbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "corrbound/path_space.hpp"
#include "corrbound/quadrature.hpp"

namespace corrbound {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

struct BoundTag {
    BoundId id;
    const char* tag;
};

constexpr BoundTag kBoundTags[] = {
    {BoundId::MainEq5, "MAIN_EQ5"},
    {BoundId::ZeroTEq6, "ZERO_T_EQ6"},
    {BoundId::DerivEq7, "DERIV_EQ7"},
    {BoundId::EtaEq8, "ETA_EQ8"},
    {BoundId::TangentS29, "TANGENT_S29"},
    {BoundId::MultiSinS40, "MULTI_SIN_S40"},
    {BoundId::MultiEtaS39, "MULTI_ETA_S39"},
    {BoundId::OnepointSinS42, "ONEPOINT_SIN_S42"},
    {BoundId::OnepointEtaS41, "ONEPOINT_ETA_S41"},
    {BoundId::OnepointActivityS45, "ONEPOINT_ACTIVITY_S45"},
    {BoundId::PulseEq11, "PULSE_EQ11"},
    {BoundId::StepEq12, "STEP_EQ12"},
};

void require_interval(double t1, double t2) {
    if (!std::isfinite(t1) || !std::isfinite(t2) || t1 < 0.0 || !(t1 < t2))
        throw Error(ErrorCode::BadInterval, "need 0 <= t1 < t2");
}

BoundReport make_report(BoundId id, double t1, double t2, double lhs, double rhs, bool in_domain,
                        CmaxMode mode) {
    BoundReport r;
    r.bound_id = id;
    r.t1 = t1;
    r.t2 = t2;
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = bound_ratio(lhs, rhs);
    r.in_validity_domain = in_domain;
    r.cmax_mode = mode;
    return r;
}

// 2 c sin(geo) inside the domain, the trivial 2 c outside it.
std::pair<double, bool> sine_rhs(double prefactor, double geo) {
    if (geo <= kHalfPi) return {2.0 * prefactor * std::sin(geo), true};
    return {2.0 * prefactor, false};
}

void fmt_real(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

} // namespace

const char* to_string(BoundId id) {
    for (const auto& t : kBoundTags)
        if (t.id == id) return t.tag;
    return "UNKNOWN";
}

std::optional<BoundId> parse_bound_id(std::string_view tag) {
    for (const auto& t : kBoundTags)
        if (tag == t.tag) return t.id;
    return std::nullopt;
}

const char* to_string(CmaxMode mode) { return mode == CmaxMode::Tight ? "tight" : "standard"; }

std::optional<CmaxMode> parse_cmax_mode(std::string_view tag) {
    if (tag == "standard") return CmaxMode::Standard;
    if (tag == "tight") return CmaxMode::Tight;
    return std::nullopt;
}

double bound_ratio(double lhs, double rhs) {
    if (std::abs(lhs) <= kNegligible && std::abs(rhs) <= kNegligible) return 0.0;
    if (rhs <= 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

std::string to_csv_row(const BoundReport& r) {
    std::string out = to_string(r.bound_id);
    for (double x : {r.t1, r.t2, r.lhs, r.rhs, r.ratio}) {
        out += ',';
        fmt_real(out, x);
    }
    out += r.in_validity_domain ? ",1," : ",0,";
    out += to_string(r.cmax_mode);
    return out;
}

// ---------------------------------------------------------------------------
// Activity

double activity_rate(const RateMatrix& w, const ProbVector& p) {
    detail::require_same_size(w.size(), p.size(), "distribution");
    return w.escape_rates().dot(p.values());
}

double steady_activity_rate(const RateMatrix& w) { return activity_rate(w, steady_state(w)); }

double dynamical_activity(const RateMatrix& w, const ProbVector& p0, double t) {
    detail::require_same_size(w.size(), p0.size(), "initial distribution");
    const double a = w.escape_rates().dot(propagator_integral(w, t) * p0.values());
    return std::max(a, 0.0);
}

ActivityCurve::ActivityCurve(const RateMatrix& w, const ProbVector& p0)
    : evolution_(w), escape_(w.escape_rates()), p0_(p0.values()) {
    detail::require_same_size(w.size(), p0.size(), "initial distribution");
    initial_rate_ = escape_.dot(p0_);
    const double drift = (w.matrix() * p0_).cwiseAbs().maxCoeff();
    stationary_ = drift <= 1e-12 * std::max(1.0, w.max_escape_rate());
}

double ActivityCurve::operator()(double t) const {
    detail::require_time(t);
    if (t == 0.0) return 0.0;
    if (stationary_) return initial_rate_ * t;
    return std::max(evolution_.integral_form(escape_, p0_, t), 0.0);
}

double geodesic_arg(const ActivityCurve& activity, double t1, double t2) {
    require_interval(t1, t2);
    const double s1 = std::sqrt(t1);
    const double s2 = std::sqrt(t2);
    if (activity.stationary()) return std::sqrt(activity.initial_rate()) * (s2 - s1);
    if (activity.initial_rate() == 0.0) return 0.0;
    auto integrand = [&activity](double s) { return std::sqrt(activity(s * s)) / s; };
    return quadrature::adaptive(integrand, s1, s2, kGeodesicTolerance);
}

double geodesic_arg(const RateMatrix& w, const ProbVector& p0, double t1, double t2) {
    require_interval(t1, t2);
    return geodesic_arg(ActivityCurve(w, p0), t1, t2);
}

double cmax(const ScoreVector& s, const ScoreVector& t_score, CmaxMode mode) {
    if (mode == CmaxMode::Standard) return s.max_abs() * t_score.max_abs();
    return cmax_product({s, t_score}, mode);
}

double cmax_product(const std::vector<ScoreVector>& scores, CmaxMode mode) {
    if (scores.empty()) return 0.0;
    if (mode == CmaxMode::Standard) {
        double c = 1.0;
        for (const auto& s : scores) c *= s.max_abs();
        return c;
    }
    // Extremes of a product of independent factors are reached at the
    // factors' own extremes, so track the running [lo, hi].
    double lo = scores.front().min();
    double hi = scores.front().max();
    for (std::size_t i = 1; i < scores.size(); ++i) {
        const double a = scores[i].min();
        const double b = scores[i].max();
        const double c[] = {lo * a, lo * b, hi * a, hi * b};
        lo = *std::min_element(std::begin(c), std::end(c));
        hi = *std::max_element(std::begin(c), std::end(c));
    }
    return 0.5 * (hi - lo);
}

// ---------------------------------------------------------------------------
// BoundEvaluator

BoundEvaluator::BoundEvaluator(RateMatrix w, ProbVector p0, ScoreVector s, ScoreVector t_score,
                               CmaxMode mode)
    : w_(std::move(w)),
      p0_(std::move(p0)),
      s_(std::move(s)),
      t_score_(std::move(t_score)),
      mode_(mode),
      activity_(w_, p0_) {
    detail::require_same_size(w_.size(), s_.size(), "score S");
    detail::require_same_size(w_.size(), t_score_.size(), "score T");
    weighted_ = s_.values().cwiseProduct(p0_.values());
    weighted_rate_ = w_.matrix() * weighted_;
}

double BoundEvaluator::correlation(double t) const {
    return t_score_.values().dot(activity_.evolution().propagator(t) * weighted_);
}

double BoundEvaluator::correlation_derivative(double t) const {
    return t_score_.values().dot(activity_.evolution().propagator(t) * weighted_rate_);
}

BoundReport BoundEvaluator::main(double t1, double t2) const {
    require_interval(t1, t2);
    const double lhs = std::abs(correlation(t1) - correlation(t2));
    const double geo = geodesic_arg(activity_, t1, t2);
    const auto [rhs, in_domain] = sine_rhs(cmax(s_, t_score_, mode_), geo);
    BoundReport r = make_report(BoundId::MainEq5, t1, t2, lhs, rhs, in_domain, mode_);
    r.geodesic_arg = geo;
    return r;
}

BoundReport BoundEvaluator::zero_to_t(double t) const {
    detail::require_time(t);
    if (t == 0.0) {
        BoundReport r = make_report(BoundId::ZeroTEq6, 0.0, 0.0, 0.0, 0.0, true, mode_);
        r.geodesic_arg = 0.0;
        return r;
    }
    BoundReport r = main(0.0, t);
    r.bound_id = BoundId::ZeroTEq6;
    return r;
}

BoundReport BoundEvaluator::derivative(double t) const {
    if (!(t > 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::NonPositiveTime, "derivative bound needs t > 0");
    const double lhs = std::abs(correlation_derivative(t));
    const double rhs = cmax(s_, t_score_, mode_) * std::sqrt(activity_(t)) / t;
    return make_report(BoundId::DerivEq7, t, t, lhs, rhs, true, mode_);
}

BoundReport BoundEvaluator::eta(double t) const {
    detail::require_time(t);
    const double lhs = std::abs(correlation(0.0) - correlation(t));
    const double rhs = 2.0 * cmax(s_, t_score_, mode_) * std::sqrt(one_minus_eta(w_, p0_, t));
    return make_report(BoundId::EtaEq8, 0.0, t, lhs, rhs, true, mode_);
}

BoundReport BoundEvaluator::tangent(double t) const {
    detail::require_time(t);
    const double c = cmax(s_, t_score_, mode_);
    if (t == 0.0) {
        BoundReport r = make_report(BoundId::TangentS29, 0.0, 0.0, 0.0, 0.0, true, mode_);
        r.geodesic_arg = 0.0;
        r.reference_rhs = 0.0;
        return r;
    }
    const double lhs = std::abs(correlation(0.0) - correlation(t));
    const double geo = geodesic_arg(activity_, 0.0, t);
    BoundReport r;
    if (geo < kHalfPi) {
        r = make_report(BoundId::TangentS29, 0.0, t, lhs, 2.0 * c * std::tan(geo), true, mode_);
    } else {
        r = make_report(BoundId::TangentS29, 0.0, t, lhs, std::numeric_limits<double>::infinity(),
                        false, mode_);
    }
    r.geodesic_arg = geo;
    r.reference_rhs = sine_rhs(c, geo).first;
    return r;
}

BoundReport BoundEvaluator::multipoint(const std::vector<ScoreVector>& scores,
                                       const std::vector<double>& times,
                                       MultipointVariant variant) const {
    const double value = corrbound::multipoint(w_, p0_, scores, times);
    const double lhs = std::abs(equal_time_product(p0_, scores) - value);
    const double t_end = times.back();
    const double c = cmax_product(scores, mode_);
    if (variant == MultipointVariant::Eta) {
        const double rhs = 2.0 * c * std::sqrt(one_minus_eta(w_, p0_, t_end));
        return make_report(BoundId::MultiEtaS39, 0.0, t_end, lhs, rhs, true, mode_);
    }
    const double geo = t_end > 0.0 ? geodesic_arg(activity_, 0.0, t_end) : 0.0;
    const auto [rhs, in_domain] = sine_rhs(c, geo);
    BoundReport r = make_report(BoundId::MultiSinS40, 0.0, t_end, lhs, rhs, in_domain, mode_);
    r.geodesic_arg = geo;
    return r;
}

BoundReport BoundEvaluator::onepoint(double t, OnepointVariant variant) const {
    detail::require_time(t);
    const double c = mode_ == CmaxMode::Standard ? s_.max_abs() : 0.5 * (s_.max() - s_.min());
    const Vector pt = activity_.evolution().propagator(t) * p0_.values();
    const double lhs = std::abs(s_.values().dot(p0_.values()) - s_.values().dot(pt));

    if (variant == OnepointVariant::Eta) {
        const double rhs = 2.0 * c * std::sqrt(one_minus_eta(w_, p0_, t));
        return make_report(BoundId::OnepointEtaS41, 0.0, t, lhs, rhs, true, mode_);
    }
    const double geo = t > 0.0 ? geodesic_arg(activity_, 0.0, t) : 0.0;
    const auto [sin_rhs, in_domain] = sine_rhs(c, geo);
    const double activity_rhs = 2.0 * c * activity_(t);
    BoundReport r;
    if (variant == OnepointVariant::Sin) {
        r = make_report(BoundId::OnepointSinS42, 0.0, t, lhs, sin_rhs, in_domain, mode_);
        r.reference_rhs = activity_rhs;
    } else {
        r = make_report(BoundId::OnepointActivityS45, 0.0, t, lhs, activity_rhs, true, mode_);
        r.reference_rhs = sin_rhs;
    }
    r.geodesic_arg = geo;
    return r;
}

// ---------------------------------------------------------------------------
// Free-function forms

BoundReport bound_main(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                       const ScoreVector& t_score, double t1, double t2, CmaxMode mode) {
    require_interval(t1, t2);
    return BoundEvaluator(w, p0, s, t_score, mode).main(t1, t2);
}

BoundReport bound_zero_to_t(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                            const ScoreVector& t_score, double t, CmaxMode mode) {
    return BoundEvaluator(w, p0, s, t_score, mode).zero_to_t(t);
}

BoundReport bound_derivative(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                             const ScoreVector& t_score, double t, CmaxMode mode) {
    return BoundEvaluator(w, p0, s, t_score, mode).derivative(t);
}

BoundReport bound_eta(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                      const ScoreVector& t_score, double t, CmaxMode mode) {
    return BoundEvaluator(w, p0, s, t_score, mode).eta(t);
}

BoundReport bound_tangent_tur(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                              const ScoreVector& t_score, double t, CmaxMode mode) {
    return BoundEvaluator(w, p0, s, t_score, mode).tangent(t);
}

BoundReport bound_multipoint(const RateMatrix& w, const ProbVector& p0,
                             const std::vector<ScoreVector>& scores,
                             const std::vector<double>& times, MultipointVariant variant,
                             CmaxMode mode) {
    if (scores.empty()) throw Error(ErrorCode::DimensionMismatch, "need at least one score");
    return BoundEvaluator(w, p0, scores.front(), scores.front(), mode)
        .multipoint(scores, times, variant);
}

BoundReport bound_onepoint(const RateMatrix& w, const ProbVector& p0, const ScoreVector& s,
                           double t, OnepointVariant variant, CmaxMode mode) {
    return BoundEvaluator(w, p0, s, s, mode).onepoint(t, variant);
}

} // namespace corrbound
