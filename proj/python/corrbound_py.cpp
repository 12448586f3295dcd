#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <variant>

#include "corrbound/bounds.hpp"
#include "corrbound/correlation.hpp"
#include "corrbound/distances.hpp"
#include "corrbound/harness.hpp"
#include "corrbound/linear_response.hpp"
#include "corrbound/markov.hpp"
#include "corrbound/path_space.hpp"

namespace py = pybind11;
using namespace corrbound;

namespace {

// Python callers pass plain arrays; every call re-validates them.
RateMatrix rates(const Matrix& raw) { return RateMatrix::validate(raw); }
ProbVector prob(const Vector& p) { return ProbVector::make(p); }
ScoreVector score(const Vector& s) { return ScoreVector(s); }

std::vector<ScoreVector> scores(const std::vector<Vector>& raw) {
    std::vector<ScoreVector> out;
    out.reserve(raw.size());
    for (const auto& s : raw) out.emplace_back(s);
    return out;
}

using DistInput = std::variant<std::map<FiniteDistribution::Key, double>, Vector>;

FiniteDistribution dist(const DistInput& in) {
    if (const auto* m = std::get_if<0>(&in)) return FiniteDistribution::from_map(*m);
    return FiniteDistribution::from_vector(std::get<1>(in));
}

CmaxMode mode_of(const std::string& tag) {
    const auto mode = parse_cmax_mode(tag);
    if (!mode) throw Error(ErrorCode::BadInput, "cmax must be 'standard' or 'tight'");
    return *mode;
}

MultipointVariant multipoint_variant(const std::string& tag) {
    if (tag == "sin") return MultipointVariant::Sin;
    if (tag == "eta") return MultipointVariant::Eta;
    throw Error(ErrorCode::BadInput, "variant must be 'sin' or 'eta'");
}

OnepointVariant onepoint_variant(const std::string& tag) {
    if (tag == "sin") return OnepointVariant::Sin;
    if (tag == "eta") return OnepointVariant::Eta;
    if (tag == "activity") return OnepointVariant::Activity;
    throw Error(ErrorCode::BadInput, "variant must be 'sin', 'eta' or 'activity'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Correlation bounds for finite-state Markov jump processes";
    m.attr("__version__") = kVersion;

    static py::handle error_type =
        py::exception<Error>(m, "CorrboundError", PyExc_ValueError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("code") = to_string(e.code());
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<BoundReport>(m, "BoundReport")
        .def_property_readonly("bound_id", [](const BoundReport& r) { return to_string(r.bound_id); })
        .def_readonly("t1", &BoundReport::t1)
        .def_readonly("t2", &BoundReport::t2)
        .def_readonly("lhs", &BoundReport::lhs)
        .def_readonly("rhs", &BoundReport::rhs)
        .def_readonly("ratio", &BoundReport::ratio)
        .def_readonly("in_validity_domain", &BoundReport::in_validity_domain)
        .def_readonly("geodesic_arg", &BoundReport::geodesic_arg)
        .def_readonly("reference_rhs", &BoundReport::reference_rhs)
        .def_property_readonly("cmax_mode", [](const BoundReport& r) { return to_string(r.cmax_mode); })
        .def("holds", &BoundReport::holds, py::arg("slack") = kRatioSlack)
        .def("csv_row", [](const BoundReport& r) { return to_csv_row(r); })
        .def("__repr__", [](const BoundReport& r) { return "<BoundReport " + to_csv_row(r) + ">"; });

    py::class_<PathInequalityReport>(m, "PathInequalityReport")
        .def_readonly("tvd_path", &PathInequalityReport::tvd_path)
        .def_readonly("bhat_path", &PathInequalityReport::bhat_path)
        .def_readonly("geodesic_arg", &PathInequalityReport::geodesic_arg)
        .def_readonly("sin_rhs", &PathInequalityReport::sin_rhs)
        .def_readonly("arccos_lhs", &PathInequalityReport::arccos_lhs)
        .def_readonly("in_domain", &PathInequalityReport::in_domain)
        .def_readonly("tvd_holds", &PathInequalityReport::tvd_holds)
        .def_readonly("bhat_holds", &PathInequalityReport::bhat_holds)
        .def("holds", &PathInequalityReport::holds);

    m.attr("BOUND_IDS") = [] {
        py::list ids;
        for (BoundId id : kAllBoundIds) ids.append(to_string(id));
        return ids;
    }();

    // markov_core
    m.def("validate_rate_matrix", [](const Matrix& raw) { return rates(raw).matrix(); }, py::arg("raw"));
    m.def("propagator", [](const Matrix& w, double t) { return propagator(rates(w), t); },
          py::arg("w"), py::arg("t"));
    m.def("propagate",
          [](const Matrix& w, const Vector& p0, double t) { return propagate(rates(w), prob(p0), t).values(); },
          py::arg("w"), py::arg("p0"), py::arg("t"));
    m.def("propagator_integral", [](const Matrix& w, double t) { return propagator_integral(rates(w), t); },
          py::arg("w"), py::arg("t"));
    m.def("steady_state", [](const Matrix& w) { return steady_state(rates(w)).values(); }, py::arg("w"));
    m.def("random_model",
          [](Index n, std::uint64_t seed) {
              RandomModel r = random_model(n, seed);
              return py::make_tuple(r.w.matrix(), r.p0.values(), r.s.values());
          },
          py::arg("n"), py::arg("seed"));

    // distances
    m.def("tvd", [](const DistInput& p, const DistInput& q) { return tvd(dist(p), dist(q)); });
    m.def("bhattacharyya", [](const DistInput& p, const DistInput& q) { return bhattacharyya(dist(p), dist(q)); });
    m.def("hellinger_sq", [](const DistInput& p, const DistInput& q) { return hellinger_sq(dist(p), dist(q)); });

    // correlation
    m.def("two_point",
          [](const Matrix& w, const Vector& p0, const Vector& s, const Vector& t_score, double t) {
              return two_point(rates(w), prob(p0), score(s), score(t_score), t);
          },
          py::arg("w"), py::arg("p0"), py::arg("s"), py::arg("t_score"), py::arg("t"));
    m.def("correlation_derivative",
          [](const Matrix& w, const Vector& p0, const Vector& s, const Vector& t_score, double t) {
              return correlation_derivative(rates(w), prob(p0), score(s), score(t_score), t);
          },
          py::arg("w"), py::arg("p0"), py::arg("s"), py::arg("t_score"), py::arg("t"));
    m.def("multipoint",
          [](const Matrix& w, const Vector& p0, const std::vector<Vector>& s, const std::vector<double>& times) {
              return multipoint(rates(w), prob(p0), scores(s), times);
          },
          py::arg("w"), py::arg("p0"), py::arg("scores"), py::arg("times"));
    m.def("mc_two_point",
          [](const Matrix& w, const Vector& p0, const Vector& s, const Vector& t_score, double t,
             std::uint64_t n_samples, std::uint64_t seed) {
              const McEstimate e = mc_two_point(rates(w), prob(p0), score(s), score(t_score), t, n_samples, seed);
              return py::make_tuple(e.estimate, e.std_error);
          },
          py::arg("w"), py::arg("p0"), py::arg("s"), py::arg("t_score"), py::arg("t"), py::arg("n_samples"),
          py::arg("seed"));

    // path_space
    m.def("eta", [](const Matrix& w, const Vector& p0, double t) { return eta(rates(w), prob(p0), t); },
          py::arg("w"), py::arg("p0"), py::arg("t"));
    m.def("verify_path_inequalities",
          [](const Matrix& w, const Vector& p0, double tau, int n_steps, double t1, double t2) {
              return verify_path_inequalities(rates(w), prob(p0), tau, n_steps, t1, t2);
          },
          py::arg("w"), py::arg("p0"), py::arg("tau"), py::arg("n_steps"), py::arg("t1"), py::arg("t2"));

    // bounds
    m.def("dynamical_activity",
          [](const Matrix& w, const Vector& p0, double t) { return dynamical_activity(rates(w), prob(p0), t); },
          py::arg("w"), py::arg("p0"), py::arg("t"));
    m.def("geodesic_arg",
          [](const Matrix& w, const Vector& p0, double t1, double t2) {
              return geodesic_arg(rates(w), prob(p0), t1, t2);
          },
          py::arg("w"), py::arg("p0"), py::arg("t1"), py::arg("t2"));

    m.def("bound_main",
          [](const Matrix& w, const Vector& p0, const Vector& s, const Vector& t_score, double t1, double t2,
             const std::string& cmax) {
              return bound_main(rates(w), prob(p0), score(s), score(t_score), t1, t2, mode_of(cmax));
          },
          py::arg("w"), py::arg("p0"), py::arg("s"), py::arg("t_score"), py::arg("t1"), py::arg("t2"),
          py::arg("cmax") = "standard");

#define CORRBOUND_SINGLE_TIME(name)                                                                  \
    m.def(#name,                                                                                     \
          [](const Matrix& w, const Vector& p0, const Vector& s, const Vector& t_score, double t,     \
             const std::string& cmax) {                                                               \
              return name(rates(w), prob(p0), score(s), score(t_score), t, mode_of(cmax));            \
          },                                                                                          \
          py::arg("w"), py::arg("p0"), py::arg("s"), py::arg("t_score"), py::arg("t"),                \
          py::arg("cmax") = "standard")
    CORRBOUND_SINGLE_TIME(bound_zero_to_t);
    CORRBOUND_SINGLE_TIME(bound_derivative);
    CORRBOUND_SINGLE_TIME(bound_eta);
    CORRBOUND_SINGLE_TIME(bound_tangent_tur);
#undef CORRBOUND_SINGLE_TIME

    m.def("bound_multipoint",
          [](const Matrix& w, const Vector& p0, const std::vector<Vector>& s, const std::vector<double>& times,
             const std::string& variant, const std::string& cmax) {
              return bound_multipoint(rates(w), prob(p0), scores(s), times, multipoint_variant(variant),
                                      mode_of(cmax));
          },
          py::arg("w"), py::arg("p0"), py::arg("scores"), py::arg("times"), py::arg("variant") = "sin",
          py::arg("cmax") = "standard");
    m.def("bound_onepoint",
          [](const Matrix& w, const Vector& p0, const Vector& s, double t, const std::string& variant,
             const std::string& cmax) {
              return bound_onepoint(rates(w), prob(p0), score(s), t, onepoint_variant(variant), mode_of(cmax));
          },
          py::arg("w"), py::arg("p0"), py::arg("s"), py::arg("t"), py::arg("variant") = "sin",
          py::arg("cmax") = "standard");

    // linear_response
    m.def("response_function",
          [](const Matrix& w, const Vector& p_st, const Matrix& f, const Vector& g, double t) {
              return response_function(rates(w), prob(p_st), f, score(g), t);
          },
          py::arg("w"), py::arg("p_st"), py::arg("f"), py::arg("g"), py::arg("t"));
    m.def("canonical_perturbation",
          [](const Matrix& w, const Vector& s) { return canonical_perturbation(rates(w), score(s)); },
          py::arg("w"), py::arg("s"));
    m.def("pulse_shift",
          [](const Matrix& w, const Vector& p_st, const Vector& s, const Vector& t_score, double chi, double t) {
              return pulse_shift(rates(w), prob(p_st), score(s), score(t_score), chi, t);
          },
          py::arg("w"), py::arg("p_st"), py::arg("s"), py::arg("t_score"), py::arg("chi"), py::arg("t"));
    m.def("step_shift",
          [](const Matrix& w, const Vector& p_st, const Vector& s, const Vector& t_score, double chi, double t) {
              return step_shift(rates(w), prob(p_st), score(s), score(t_score), chi, t);
          },
          py::arg("w"), py::arg("p_st"), py::arg("s"), py::arg("t_score"), py::arg("chi"), py::arg("t"));
    m.def("bound_pulse",
          [](const Matrix& w, const Vector& p_st, const Vector& s, const Vector& t_score, double chi, double t,
             const std::string& cmax) {
              return bound_pulse(rates(w), prob(p_st), score(s), score(t_score), chi, t, mode_of(cmax));
          },
          py::arg("w"), py::arg("p_st"), py::arg("s"), py::arg("t_score"), py::arg("chi"), py::arg("t"),
          py::arg("cmax") = "standard");
    m.def("bound_step",
          [](const Matrix& w, const Vector& p_st, const Vector& s, const Vector& t_score, double chi, double t,
             const std::string& cmax) {
              return bound_step(rates(w), prob(p_st), score(s), score(t_score), chi, t, mode_of(cmax));
          },
          py::arg("w"), py::arg("p_st"), py::arg("s"), py::arg("t_score"), py::arg("chi"), py::arg("t"),
          py::arg("cmax") = "standard");
}
