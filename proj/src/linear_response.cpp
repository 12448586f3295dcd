#include "corrbound/linear_response.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "corrbound/correlation.hpp"

namespace corrbound {

namespace {

void require_steady(const RateMatrix& w, const ProbVector& p_st) {
    detail::require_same_size(w.size(), p_st.size(), "stationary distribution");
    const double residual = (w.matrix() * p_st.values()).cwiseAbs().maxCoeff();
    if (residual > kSteadyStateTolerance)
        throw Error(ErrorCode::NotSteadyState, "W P_st is not zero");
}

void require_chi(double chi) {
    if (!std::isfinite(chi) || chi == 0.0)
        throw Error(ErrorCode::BadPerturbation, "perturbation strength must be finite and nonzero");
}

void require_positive_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::NonPositiveTime, "need t > 0");
}

} // namespace

// ---------------------------------------------------------------------------
// Drive / Perturbation

Drive Drive::pulse(double width) {
    if (!(width > 0.0) || !std::isfinite(width))
        throw Error(ErrorCode::BadInput, "pulse width must be positive");
    Drive d;
    d.kind_ = DriveKind::Pulse;
    d.width_ = width;
    return d;
}

Drive Drive::step() {
    Drive d;
    d.kind_ = DriveKind::Step;
    return d;
}

Drive Drive::sampled(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) throw Error(ErrorCode::BadInput, "sampled drive needs two samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].first) || !std::isfinite(samples[i].second))
            throw Error(ErrorCode::NonFinite, "sampled drive has non-finite entries");
        if (i > 0 && !(samples[i].first > samples[i - 1].first))
            throw Error(ErrorCode::TimesNotSorted, "drive sample times must increase");
    }
    Drive d;
    d.kind_ = DriveKind::Sampled;
    d.samples_ = std::move(samples);
    return d;
}

double Drive::value(double t) const {
    switch (kind_) {
    case DriveKind::Step: return t >= 0.0 ? 1.0 : 0.0;
    case DriveKind::Pulse: return (t >= 0.0 && t < width_) ? 1.0 / width_ : 0.0;
    case DriveKind::Sampled: {
        if (t < samples_.front().first || t > samples_.back().first) return 0.0;
        auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                                   [](const auto& s, double x) { return s.first < x; });
        if (it->first == t) return it->second;
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double frac = (t - lo.first) / (hi.first - lo.first);
        return lo.second + frac * (hi.second - lo.second);
    }
    }
    return 0.0;
}

Perturbation Perturbation::make(Matrix f, double chi, Drive drive) {
    if (f.rows() != f.cols()) throw Error(ErrorCode::NonSquare, "perturbation matrix is not square");
    if (!f.allFinite()) throw Error(ErrorCode::NonFinite, "perturbation matrix is not finite");
    require_chi(chi);
    return Perturbation{std::move(f), chi, std::move(drive)};
}

Matrix canonical_perturbation(const RateMatrix& w, const ScoreVector& s) {
    detail::require_same_size(w.size(), s.size(), "score S");
    return w.matrix() * s.values().asDiagonal();
}

// ---------------------------------------------------------------------------
// Response functions and shifts

double response_function(const RateMatrix& w, const ProbVector& p_st, const Matrix& f,
                         const ScoreVector& g, double t) {
    require_steady(w, p_st);
    detail::require_same_size(w.size(), f.rows(), "perturbation");
    detail::require_same_size(w.size(), g.size(), "score G");
    if (!std::isfinite(t)) throw Error(ErrorCode::NonFinite, "time must be finite");
    if (t < 0.0) return 0.0;
    return g.values().dot(propagator(w, t) * (f * p_st.values()));
}

double pulse_shift(const RateMatrix& w, const ProbVector& p_st, const ScoreVector& s,
                   const ScoreVector& t_score, double chi, double t) {
    require_steady(w, p_st);
    require_chi(chi);
    require_positive_time(t);
    return chi * correlation_derivative(w, p_st, s, t_score, t);
}

double step_shift(const RateMatrix& w, const ProbVector& p_st, const ScoreVector& s,
                  const ScoreVector& t_score, double chi, double t) {
    require_steady(w, p_st);
    require_chi(chi);
    detail::require_time(t);
    if (t == 0.0) return 0.0;
    return chi * (two_point(w, p_st, s, t_score, t) - two_point(w, p_st, s, t_score, 0.0));
}

BoundReport bound_pulse(const RateMatrix& w, const ProbVector& p_st, const ScoreVector& s,
                        const ScoreVector& t_score, double chi, double t, CmaxMode mode) {
    const double shift = pulse_shift(w, p_st, s, t_score, chi, t);
    const double rate = activity_rate(w, p_st);
    BoundReport r;
    r.bound_id = BoundId::PulseEq11;
    r.t1 = t;
    r.t2 = t;
    r.lhs = std::abs(shift);
    r.rhs = std::abs(chi) * cmax(s, t_score, mode) * std::sqrt(rate / t);
    r.ratio = bound_ratio(r.lhs, r.rhs);
    r.in_validity_domain = true;
    r.cmax_mode = mode;
    return r;
}

BoundReport bound_step(const RateMatrix& w, const ProbVector& p_st, const ScoreVector& s,
                       const ScoreVector& t_score, double chi, double t, CmaxMode mode) {
    const double shift = step_shift(w, p_st, s, t_score, chi, t);
    const double rate = activity_rate(w, p_st);
    const double arg = std::sqrt(rate * t);
    const double scale = 2.0 * std::abs(chi) * cmax(s, t_score, mode);
    BoundReport r;
    r.bound_id = BoundId::StepEq12;
    r.t1 = 0.0;
    r.t2 = t;
    r.lhs = std::abs(shift);
    r.in_validity_domain = arg <= std::numbers::pi / 2;
    r.rhs = r.in_validity_domain ? scale * std::sin(arg) : scale;
    r.ratio = bound_ratio(r.lhs, r.rhs);
    r.geodesic_arg = arg;
    r.cmax_mode = mode;
    return r;
}

double linear_shift(const RateMatrix& w, const ProbVector& p_st, const Perturbation& pert,
                    const ScoreVector& g, double t) {
    require_steady(w, p_st);
    detail::require_same_size(w.size(), pert.f.rows(), "perturbation");
    detail::require_same_size(w.size(), g.size(), "score G");
    const Vector source = pert.f * p_st.values();
    switch (pert.drive.kind()) {
    case DriveKind::Pulse:
        if (t < 0.0) return 0.0;
        return pert.chi * g.values().dot(propagator(w, t) * source);
    case DriveKind::Step:
        if (t <= 0.0) return 0.0;
        return pert.chi * g.values().dot(propagator_integral(w, t) * source);
    case DriveKind::Sampled: {
        const Evolution evolution(w);
        std::vector<double> nodes;
        for (const auto& [time, value] : pert.drive.samples())
            if (time <= t) nodes.push_back(time);
        if (nodes.empty()) return 0.0;
        if (nodes.back() < t && t <= pert.drive.samples().back().first) nodes.push_back(t);
        auto integrand = [&](double tp) {
            return g.values().dot(evolution.propagator(t - tp) * source) * pert.drive.value(tp);
        };
        double acc = 0.0;
        for (std::size_t i = 1; i < nodes.size(); ++i)
            acc += 0.5 * (nodes[i] - nodes[i - 1]) * (integrand(nodes[i]) + integrand(nodes[i - 1]));
        return pert.chi * acc;
    }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Direct integration oracle

double OracleSeries::shift(const ScoreVector& g, std::size_t i) const {
    return g.values().dot(probabilities.at(i) - stationary);
}

double OracleSeries::shift_at(const ScoreVector& g, double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) throw Error(ErrorCode::BadInterval, "time precedes the series");
    return shift(g, static_cast<std::size_t>(std::distance(times.begin(), it) - 1));
}

OracleSeries perturbed_oracle(const RateMatrix& w, const Matrix& f, double chi,
                              const Drive& drive, double t_end, double dt) {
    if (f.rows() != w.size() || f.cols() != w.size())
        throw Error(ErrorCode::DimensionMismatch, "perturbation size differs from W");
    if (!f.allFinite() || !std::isfinite(chi))
        throw Error(ErrorCode::NonFinite, "perturbation is not finite");
    detail::require_time(t_end);
    if (!(dt > 0.0)) throw Error(ErrorCode::StepTooLarge, "step must be positive");
    const double max_rate = w.max_escape_rate();
    if (max_rate > 0.0 && dt > 1e-3 / max_rate)
        throw Error(ErrorCode::StepTooLarge, "dt exceeds 1e-3 / max escape rate");

    OracleSeries series;
    series.stationary = steady_state(w).values();
    const Matrix& base = w.matrix();

    Vector p = series.stationary;
    double clock = drive.kind() == DriveKind::Sampled ? std::min(0.0, drive.samples().front().first)
                                                      : 0.0;
    series.times.push_back(clock);
    series.probabilities.push_back(p);

    auto rk4 = [&](double h, auto&& drive_at) {
        auto rhs = [&](double time, const Vector& x) -> Vector {
            return base * x + (chi * drive_at(time)) * (f * x);
        };
        const Vector k1 = rhs(clock, p);
        const Vector k2 = rhs(clock + 0.5 * h, p + 0.5 * h * k1);
        const Vector k3 = rhs(clock + 0.5 * h, p + 0.5 * h * k2);
        const Vector k4 = rhs(clock + h, p + h * k3);
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        clock += h;
        if (!p.allFinite()) throw Error(ErrorCode::NonFinite, "oracle integration diverged");
        series.times.push_back(clock);
        series.probabilities.push_back(p);
    };

    auto march = [&](double until, auto&& drive_at) {
        while (clock < until) {
            const double h = std::min(dt, until - clock);
            if (h <= 1e-15 * std::max(1.0, until)) break;
            rk4(h, drive_at);
        }
    };

    if (drive.kind() == DriveKind::Pulse) {
        // Integrate the rectangle on its own grid so no stage straddles the edge.
        const double width = std::min(drive.pulse_width(), t_end);
        const double height = 1.0 / drive.pulse_width();
        const int substeps = std::max(20, static_cast<int>(std::ceil(width / dt)));
        const double h = width / substeps;
        for (int k = 0; k < substeps; ++k) rk4(h, [height](double) { return height; });
        clock = width;
        series.times.back() = width;
        march(t_end, [](double) { return 0.0; });
    } else if (drive.kind() == DriveKind::Step) {
        march(t_end, [](double) { return 1.0; });
    } else {
        march(t_end, [&drive](double time) { return drive.value(time); });
    }
    return series;
}

std::string to_csv_row(const ResponseRow& row) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d", row.t, row.shift, row.bound_rhs,
                  row.ratio, row.in_domain ? 1 : 0);
    return buf;
}

} // namespace corrbound
