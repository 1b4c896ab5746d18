#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cnls/analysis.hpp"
#include "cnls/evolve.hpp"
#include "cnls/odesys.hpp"
#include "cnls/snapshot_io.hpp"

namespace py = pybind11;
using namespace cnls;

namespace {

py::array_t<std::complex<double>> to_array(const std::vector<cplx>& v) {
    py::array_t<std::complex<double>> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<cplx> from_array(const py::array_t<std::complex<double>, py::array::c_style |
                                                                         py::array::forcecast>& a) {
    return {a.data(), a.data() + a.size()};
}

std::vector<double> from_real_array(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return {a.data(), a.data() + a.size()};
}

Field make_field(const GridPtr& grid, const py::array_t<std::complex<double>>& values,
                 const std::string& space) {
    if (space != "physical" && space != "frequency")
        throw ConfigError("space must be \"physical\" or \"frequency\"");
    return Field(grid, space == "physical" ? Space::physical : Space::frequency,
                 from_array(values));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "coupled cubic NLS laboratory: spectral operators, profile evaluation, "
              "split-step and profile-frame solvers, rate fitting";
    m.attr("__version__") = "0.1.0";

    py::register_exception<Error>(m, "CnlsError");

    py::enum_<Regime>(m, "Regime")
        .value("Deceleration", Regime::Deceleration)
        .value("Threshold", Regime::Threshold)
        .value("Oscillatory", Regime::Oscillatory);

    py::class_<Coefficients>(m, "Coefficients")
        .def_readonly("lambda1", &Coefficients::lambda1)
        .def_readonly("lambda6", &Coefficients::lambda6)
        .def_readonly("eta", &Coefficients::eta)
        .def_readonly("regime", &Coefficients::regime)
        .def_property_readonly("mu",
                               [](const Coefficients& c) -> py::object {
                                   if (!c.mu) return py::none();
                                   return py::float_(*c.mu);
                               })
        .def("__repr__", [](const Coefficients& c) {
            return "<Coefficients lambda1=" + std::to_string(c.lambda1) +
                   " lambda6=" + std::to_string(c.lambda6) + " " + regime_name(c.regime) + ">";
        });

    m.def("derive", &derive, py::arg("lambda1"), py::arg("lambda6"),
          "classify a coupling pair and derive eta, mu");

    py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
        .def(py::init([](std::size_t n, double length) {
                 return std::const_pointer_cast<Grid>(Grid::make(n, length));
             }),
             py::arg("n"), py::arg("length"))
        .def_readonly("n", &Grid::n)
        .def_readonly("length", &Grid::length)
        .def_readonly("dx", &Grid::dx)
        .def_readonly("dxi", &Grid::dxi)
        .def_property_readonly("x", [](const Grid& g) { return to_array(g.x); })
        .def_property_readonly("xi", [](const Grid& g) { return to_array(g.xi); });

    py::class_<Field>(m, "Field")
        .def(py::init(&make_field), py::arg("grid"), py::arg("values"),
             py::arg("space") = "physical")
        .def_property_readonly("values", [](const Field& f) { return to_array(f.values); })
        .def_property_readonly("grid", [](const Field& f) { return f.grid; })
        .def_property_readonly("space", [](const Field& f) {
            return f.space == Space::physical ? "physical" : "frequency";
        });

    py::class_<GaussianSpec>(m, "GaussianSpec")
        .def(py::init([](double amplitude, double sigma, double center, double phase) {
                 return GaussianSpec{amplitude, sigma, center, phase};
             }),
             py::arg("amplitude"), py::arg("sigma") = 1.0, py::arg("center") = 0.0,
             py::arg("phase") = 0.0);

    py::class_<FinalData>(m, "FinalData")
        .def(py::init([](const GridPtr& g, const py::array_t<std::complex<double>>& w1,
                         const py::array_t<std::complex<double>>& w2) {
                 return FinalData(g, from_array(w1), from_array(w2));
             }),
             py::arg("grid"), py::arg("w1"), py::arg("w2"))
        .def_property_readonly("w1", [](const FinalData& d) { return to_array(d.w1); })
        .def_property_readonly("w2", [](const FinalData& d) { return to_array(d.w2); })
        .def_property_readonly("grid", [](const FinalData& d) { return d.grid; })
        .def("max_abs_w1", &FinalData::max_abs_w1)
        .def("max_abs_w2", &FinalData::max_abs_w2);

    m.def("gaussian_final_data", &make_gaussian_final_data, py::arg("grid"), py::arg("w1"),
          py::arg("w2"));
    m.def(
        "make_vanishing_data",
        [](const GridPtr& g, const py::array_t<double>& w1, const py::array_t<double>& r,
           const Coefficients& c) {
            return make_vanishing_data(g, from_real_array(w1), from_real_array(r), c);
        },
        py::arg("grid"), py::arg("w1"), py::arg("r"), py::arg("coeffs"));
    m.def(
        "check_nonvanishing",
        [](const FinalData& d, const Coefficients& c) {
            const auto mask = check_nonvanishing(d, c);
            py::array_t<bool> out(mask.size());
            for (std::size_t i = 0; i < mask.size(); ++i) out.mutable_data()[i] = mask[i];
            return out;
        },
        py::arg("data"), py::arg("coeffs"));

    m.def(
        "eval_f1",
        [](double t, const FinalData& d, const Coefficients& c) {
            return to_array(eval_f1(t, d, c));
        },
        py::arg("t"), py::arg("data"), py::arg("coeffs"));
    m.def(
        "eval_w2tilde",
        [](double t, const FinalData& d, const Coefficients& c) {
            return to_array(eval_w2tilde(t, d, c));
        },
        py::arg("t"), py::arg("data"), py::arg("coeffs"));
    m.def(
        "eval_f2",
        [](double t, const FinalData& d, const Coefficients& c) {
            return to_array(eval_f2(t, d, c));
        },
        py::arg("t"), py::arg("data"), py::arg("coeffs"));
    m.def(
        "sample_uap",
        [](double t, int j, const FinalData& d, const Coefficients& c, const GridPtr& g,
           double mass_tol) { return sample_uap(t, j, d, c, g, nullptr, mass_tol); },
        py::arg("t"), py::arg("j"), py::arg("data"), py::arg("coeffs"), py::arg("grid"),
        py::arg("mass_tol") = 1e-6);

    m.def(
        "integrate_rk4",
        [](double t0, cplx a1, cplx a2, double t_end, std::size_t n_steps,
           const std::string& preset, double lambda1, double lambda6) {
            const auto sys = CubicSystem::from_preset(preset, lambda1, lambda6);
            const auto end = integrate_rk4(OdeState{t0, a1, a2}, t_end, n_steps, sys);
            return py::make_tuple(end.a1, end.a2);
        },
        py::arg("t0"), py::arg("a1"), py::arg("a2"), py::arg("t_end"), py::arg("n_steps"),
        py::arg("preset") = "paper", py::arg("lambda1") = 0.0, py::arg("lambda6") = 0.0);

    m.def("cft", &cft, py::arg("field"));
    m.def("icft", &icft, py::arg("field"));
    m.def("free_propagate", &free_propagate, py::arg("field"), py::arg("t"));
    m.def("apply_M", &apply_M, py::arg("field"), py::arg("t"));
    m.def(
        "apply_D",
        [](const Field& f, double t, double mass_tol) {
            return apply_D(f, t, nullptr, mass_tol);
        },
        py::arg("field"), py::arg("t"), py::arg("mass_tol") = 1e-6);
    m.def("apply_J", &apply_J, py::arg("field"), py::arg("t"));
    m.def(
        "factorization_residual",
        [](const Field& f, double t) { return factorization_residual(f, t); }, py::arg("field"),
        py::arg("t"));
    m.def("chirp_residual", &chirp_residual, py::arg("field"), py::arg("t"));
    m.def("l2_norm", &l2_norm, py::arg("field"));
    m.def("linf_norm", &linf_norm, py::arg("field"));

    py::enum_<RunMode>(m, "RunMode")
        .value("physical", RunMode::physical)
        .value("profile_frame", RunMode::profile_frame);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("mode", &SolverConfig::mode)
        .def_readwrite("t0", &SolverConfig::t0)
        .def_readwrite("t1", &SolverConfig::t1)
        .def_readwrite("dt", &SolverConfig::dt)
        .def_readwrite("steps_per_decade", &SolverConfig::steps_per_decade)
        .def_readwrite("snapshot_times", &SolverConfig::snapshot_times)
        .def_readwrite("leak_tol", &SolverConfig::leak_tol)
        .def_readwrite("store_snapshots", &SolverConfig::store_snapshots);

    py::class_<FieldPair>(m, "FieldPair")
        .def(py::init<Field, Field, double>(), py::arg("u1"), py::arg("u2"), py::arg("t"))
        .def_readonly("u1", &FieldPair::u1)
        .def_readonly("u2", &FieldPair::u2)
        .def_readonly("t", &FieldPair::t);

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("times", [](const Trajectory& t) { return to_array(t.times); })
        .def("series",
             [](const Trajectory& t, const std::string& q) { return to_array(t.series(q)); })
        .def_property_readonly("snapshots",
                               [](const Trajectory& t) { return t.snapshots; })
        .def_property_readonly("has_errors", [](const Trajectory& t) { return t.has_errors; });

    m.def("strang_step", &strang_step, py::arg("state"), py::arg("dt"), py::arg("coeffs"),
          py::arg("leak_tol") = 1e-6);
    m.def("solve_cauchy", &solve_cauchy, py::arg("initial"), py::arg("config"),
          py::arg("coeffs"));
    m.def("solve_profile_frame", &solve_profile_frame, py::arg("initial_v"), py::arg("config"),
          py::arg("coeffs"));
    m.def("solve_final_state", &solve_final_state, py::arg("data"), py::arg("coeffs"),
          py::arg("T"), py::arg("T_max"), py::arg("config"));
    m.def(
        "residual_E",
        [](double t, const FinalData& d, const Coefficients& c, int j) {
            const auto r = residual_Ej(t, d, c, d.grid, j);
            return py::make_tuple(r.l2, r.j_norm);
        },
        py::arg("t"), py::arg("data"), py::arg("coeffs"), py::arg("j"));

    m.def(
        "fit_decay_rate",
        [](const py::array_t<double>& times, const py::array_t<double>& values, double lo,
           double hi) {
            const auto fit = fit_decay_rate(from_real_array(times), from_real_array(values), lo, hi);
            py::dict out;
            out["slope"] = fit.slope;
            out["intercept"] = fit.intercept;
            out["r_squared"] = fit.r_squared;
            out["window"] = py::make_tuple(fit.t_lo, fit.t_hi);
            out["n_points"] = fit.n_points;
            return out;
        },
        py::arg("times"), py::arg("values"), py::arg("t_lo"), py::arg("t_hi"));

    m.def(
        "extract_scattering",
        [](const Trajectory& traj, const Coefficients& c) {
            const auto s = extract_scattering(traj, c);
            py::dict out;
            out["times"] = to_array(s.times);
            out["alpha"] = to_array(s.alpha);
            out["phi1_final"] = to_array(s.phi1_final);
            out["theta1"] = to_array(s.theta1);
            out["w1_est"] = to_array(s.w1_est);
            py::list series;
            for (const auto& a : s.alpha_series) series.append(to_array(a));
            out["alpha_series"] = series;
            return out;
        },
        py::arg("trajectory"), py::arg("coeffs"));
}
