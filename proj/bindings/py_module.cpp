#include "sblab/bernstein.hpp"
#include "sblab/exterior.hpp"
#include "sblab/experiments.hpp"
#include "sblab/geometry.hpp"
#include "sblab/kernels.hpp"
#include "sblab/montecarlo.hpp"
#include "sblab/rng.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <stdexcept>
#include <vector>

namespace py = pybind11;
using namespace sblab;

namespace {

geometry::Point to_point(const std::vector<double>& v) {
    if (v.size() < 2 || v.size() > 3)
        throw std::invalid_argument("points have 2 or 3 coordinates");
    geometry::Point p{0, 0, 0};
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
    return p;
}

std::vector<double> from_point(const geometry::Point& p, int d) {
    return std::vector<double>(p.begin(), p.begin() + d);
}

py::dict witness_dict(const bernstein::AssumptionWitness& w) {
    py::dict out;
    out["family"] = w.family;
    out["d"] = w.d;
    out["global_ok"] = w.global.ok;
    out["delta"] = w.a3.delta;
    out["sigma"] = w.a3.sigma;
    out["a3"] = bernstein::to_string(w.a3.verdict);
    out["delta0"] = w.a4.exponent;
    out["a4"] = bernstein::to_string(w.a4.verdict);
    out["delta1"] = w.a5.exponent;
    out["a5"] = bernstein::to_string(w.a5.verdict);
    out["a6_converges"] = w.a6.converges;
    out["hup_c"] = w.hup.c;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "subordinate Brownian motion boundary-behavior laboratory";

    py::register_exception<exp::config_error>(m, "ConfigError",
                                              PyExc_ValueError);

    py::class_<bernstein::BernsteinFunction>(m, "BernsteinFunction")
        .def_static("make", &bernstein::BernsteinFunction::make,
                    py::arg("family"), py::arg("alpha"),
                    py::arg("kappa") = 0.0, py::arg("m") = 0.0)
        .def("phi", &bernstein::BernsteinFunction::phi)
        .def("phi_prime", &bernstein::BernsteinFunction::phi_prime)
        .def("phi_second", &bernstein::BernsteinFunction::phi_second)
        .def("label", &bernstein::BernsteinFunction::label)
        .def_property_readonly("family",
                               &bernstein::BernsteinFunction::family)
        .def_property_readonly("alpha", &bernstein::BernsteinFunction::alpha);

    m.def("family_names", &bernstein::BernsteinFunction::family_names);

    m.def(
        "certify",
        [](const bernstein::BernsteinFunction& f, int d, double lambda0) {
            return witness_dict(bernstein::certify(f, d, lambda0));
        },
        py::arg("f"), py::arg("d") = 2, py::arg("lambda0") = 1.0);

    m.def(
        "fit_a3",
        [](const bernstein::BernsteinFunction& f, double lambda0) {
            bernstein::FitA3 r = bernstein::fit_A3(f, lambda0);
            return py::make_tuple(r.delta, r.sigma);
        },
        py::arg("f"), py::arg("lambda0") = 1.0);

    py::class_<geometry::Domain>(m, "Domain")
        .def_static(
            "ball",
            [](const std::vector<double>& center, double radius) {
                return geometry::Domain::ball(to_point(center), radius,
                                              static_cast<int>(center.size()));
            },
            py::arg("center"), py::arg("radius"))
        .def_static(
            "half_space_graph",
            [](int d, double box_half) {
                return geometry::Domain::graph(geometry::GraphProfile::flat(),
                                               d, box_half);
            },
            py::arg("d") = 2, py::arg("box_half") = 10.0)
        .def_property_readonly("d", &geometry::Domain::dim)
        .def("contains",
             [](const geometry::Domain& D, const std::vector<double>& x) {
                 return D.contains(to_point(x));
             })
        .def("dist_to_boundary",
             [](const geometry::Domain& D, const std::vector<double>& x) {
                 return D.dist_to_boundary(to_point(x));
             });

    py::class_<exterior::ExteriorFunction>(m, "ExteriorFunction")
        .def_static(
            "power",
            [](double beta, double cap, const std::vector<double>& y0) {
                return exterior::ExteriorFunction::power(beta, cap,
                                                         to_point(y0));
            },
            py::arg("beta"), py::arg("cap") = 1.0,
            py::arg("y0") = std::vector<double>{0.0, 0.0})
        .def_static("constant", &exterior::ExteriorFunction::constant)
        .def("__call__",
             [](const exterior::ExteriorFunction& f,
                const std::vector<double>& y) { return f(to_point(y)); })
        .def_property_readonly("beta", &exterior::ExteriorFunction::beta);

    m.def(
        "boundary_limit",
        [](const geometry::Domain& D, const exterior::ExteriorFunction& f,
           const std::vector<double>& xi, double gamma, int k_max,
           std::uint64_t n) {
            exterior::BoundaryMean bm =
                exterior::boundary_limit(D, f, to_point(xi), gamma, k_max, n);
            py::dict out;
            out["limit"] = bm.limit;
            out["diagnostic"] = bm.diagnostic;
            out["non_cauchy"] = bm.non_cauchy;
            out["means"] = bm.means;
            out["radii"] = bm.radii;
            return out;
        },
        py::arg("domain"), py::arg("f"), py::arg("xi"), py::arg("gamma"),
        py::arg("k_max") = 12, py::arg("n") = 20000);

    m.def(
        "subordinator_increments",
        [](const bernstein::BernsteinFunction& f, double dt, std::uint64_t n,
           std::uint64_t seed) {
            mc::SubordinatorStepper st(f);
            std::vector<double> out(n);
            for (std::uint64_t i = 0; i < n; ++i) {
                rng::Philox g(seed, i);
                out[i] = st.increment(dt, g);
            }
            return out;
        },
        py::arg("f"), py::arg("dt"), py::arg("n"), py::arg("seed") = 0,
        "one exact subordinator increment per stream index");

    m.def(
        "estimate_u_f",
        [](const geometry::Domain& D, const exterior::ExteriorFunction& f,
           const std::vector<double>& x, std::uint64_t n,
           const bernstein::BernsteinFunction& phi, std::uint64_t seed,
           double c_time, int workers) {
            mc::SubordinatorStepper st(phi);
            mc::StepControl ctrl;
            ctrl.c_time = c_time;
            mc::HarmonicEstimate est = mc::estimate_u_f(
                D, f, to_point(x), n, st, seed, ctrl, workers);
            py::dict out;
            out["value"] = est.value;
            out["se"] = est.se;
            out["n"] = est.n;
            out["censored"] = est.censored;
            out["heavy_tail_warning"] = est.heavy_tail_warning;
            return out;
        },
        py::arg("domain"), py::arg("f"), py::arg("x"), py::arg("n"),
        py::arg("phi"), py::arg("seed") = 12345, py::arg("c_time") = 0.05,
        py::arg("workers") = 1);

    m.def(
        "tangential_curve",
        [](const geometry::Domain& D, const bernstein::BernsteinFunction& phi,
           const std::vector<double>& xi, double gamma, double a, double M,
           const std::vector<double>& radii) {
            geometry::ApproachRegion reg{&D, &phi, to_point(xi), gamma, a, M};
            auto curve = geometry::tangential_curve(reg, radii);
            py::list out;
            for (const auto& cp : curve) {
                py::dict row;
                row["x"] = from_point(cp.x, D.dim());
                row["companion"] = from_point(cp.companion, D.dim());
                row["r"] = cp.r;
                row["delta"] = cp.delta;
                row["companion_delta"] = cp.companion_delta;
                out.append(row);
            }
            return out;
        },
        py::arg("domain"), py::arg("phi"), py::arg("xi"), py::arg("gamma"),
        py::arg("a"), py::arg("M"), py::arg("radii"));

    m.def(
        "run_config",
        [](const std::string& path, const std::string& out_dir, int workers) {
            exp::ExperimentConfig cfg = exp::ExperimentConfig::load(path);
            std::string dir =
                out_dir.empty() ? exp::default_out_dir(cfg) : out_dir;
            exp::ExperimentReport rep = exp::run_experiment(cfg, dir, workers);
            py::dict out;
            out["overall"] = rep.overall;
            out["exit_code"] = rep.exit_code();
            out["out_dir"] = dir;
            out["report"] = rep.to_json().dump();
            return out;
        },
        py::arg("path"), py::arg("out_dir") = std::string(),
        py::arg("workers") = 1);

    m.def("validate_config", [](const std::string& path) {
        exp::ExperimentConfig cfg = exp::ExperimentConfig::load(path);
        return cfg.experiment;
    });
}
