#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spge/checks.hpp"
#include "spge/diagnostics.hpp"
#include "spge/experiments.hpp"
#include "spge/problems.hpp"
#include "spge/solver.hpp"

namespace py = pybind11;
using namespace spge;

namespace {

DVector to_pieces(const std::vector<int>& labels) {
  DVector d;
  d.reserve(labels.size());
  for (int l : labels) d.push_back(piece_from_label(l));
  return d;
}

std::vector<int> to_labels(const DVector& d) {
  std::vector<int> out;
  out.reserve(d.size());
  for (Piece p : d) out.push_back(label_of(p));
  return out;
}

// keyword overrides on top of a preset, e.g. solve(p, L=2.0, maxiter=500)
SolverConfig apply_overrides(SolverConfig c, const py::kwargs& kw) {
  for (auto item : kw) {
    const auto key = item.first.cast<std::string>();
    const py::handle val = item.second;
    if (key == "L") c.L = val.cast<double>();
    else if (key == "alpha") c.alpha = val.cast<double>();
    else if (key == "sigma") c.sigma = val.cast<double>();
    else if (key == "mu0") c.mu0 = val.cast<double>();
    else if (key == "epsilon") c.epsilon = val.cast<double>();
    else if (key == "maxiter") c.maxiter = val.cast<long>();
    else if (key == "a") c.a = val.cast<double>();
    else if (key == "kappa") c.kappa = val.cast<double>();
    else if (key == "restart_period") c.restart_period = val.cast<long>();
    else if (key == "step_tol") c.step_tol = val.cast<double>();
    else if (key == "beta_schedule") c.beta_schedule = parse_beta_schedule(val.cast<std::string>());
    else if (key == "tau_convention") c.tau_convention = parse_tau_convention(val.cast<std::string>());
    else if (key == "reset_mu_on_fixed_restart") c.reset_mu_on_fixed_restart = val.cast<bool>();
    else if (key == "reset_mu_on_adaptive_restart") c.reset_mu_on_adaptive_restart = val.cast<bool>();
    else if (key == "record_residual") c.record_residual = val.cast<bool>();
    else if (key == "record_time") c.record_time = val.cast<bool>();
    else throw ConfigError(key, "unknown solver option");
  }
  c.validate();
  return c;
}

SolverConfig preset_for(LossKind kind) {
  switch (kind) {
    case LossKind::ToyAbs: return toy_config();
    case LossKind::L1Regression: return l1_regression_config();
    case LossKind::CensoredRegression: return censored_config();
  }
  return SolverConfig{};
}

py::dict trace_columns(const std::vector<IterationRecord>& trace) {
  const auto n = static_cast<Index>(trace.size());
  Eigen::VectorXd mu(n), beta(n), obj(n), sobj(n), mon(n), step(n), res(n), t(n);
  Eigen::VectorXi k(n), nnz(n);
  for (Index i = 0; i < n; ++i) {
    const IterationRecord& r = trace[static_cast<std::size_t>(i)];
    k[i] = static_cast<int>(r.k);
    mu[i] = r.mu;
    beta[i] = r.beta;
    obj[i] = r.objective;
    sobj[i] = r.smoothed_objective;
    mon[i] = r.monitor;
    step[i] = r.step_norm;
    res[i] = r.residual;
    nnz[i] = static_cast<int>(r.nnz);
    t[i] = r.time_s;
  }
  py::dict d;
  d["k"] = k;
  d["mu"] = mu;
  d["beta"] = beta;
  d["objective"] = obj;
  d["smoothed_objective"] = sobj;
  d["monitor"] = mon;
  d["step_norm"] = step;
  d["residual"] = res;
  d["nnz"] = nnz;
  d["time_s"] = t;
  return d;
}

py::dict report_dict(const CheckReport& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["passed"] = r.passed;
  d["max_violation"] = r.max_violation;
  d["tolerance"] = r.tolerance;
  d["cases"] = r.cases;
  d["seconds"] = r.seconds;
  d["worst"] = r.worst;
  return d;
}

}  // namespace

PYBIND11_MODULE(_spge, m) {
  m.doc() = "Smoothing proximal gradient with extrapolation for capped-l1 sparse regression";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);

  m.def("phi", &phi, py::arg("t"), py::arg("v"));
  m.def("theta_tilde", &theta_tilde, py::arg("s"), py::arg("mu"));
  m.def("plus_tilde", &plus_tilde, py::arg("s"), py::arg("mu"));
  m.def(
      "d_select", [](const Vector& x, double v) { return to_labels(d_select(x, v)); },
      py::arg("x"), py::arg("v"), "Piece labels (1 flat, 2 rising, 3 falling) per coordinate.");
  m.def(
      "prox",
      [](const Vector& w, const std::vector<int>& d, double tau, double v, const Vector& lower,
         const Vector& upper) {
        return prox_capped_piece(w, to_pieces(d), tau, v, BoxConstraint(lower, upper));
      },
      py::arg("w"), py::arg("d"), py::arg("tau"), py::arg("v"), py::arg("lower"),
      py::arg("upper"));

  py::class_<ProblemInstance>(m, "Instance")
      .def_property_readonly("kind", [](const ProblemInstance& p) { return std::string(to_string(p.kind)); })
      .def_readonly("A", &ProblemInstance::A)
      .def_readonly("b", &ProblemInstance::b)
      .def_readonly("c", &ProblemInstance::c)
      .def_readonly("x0", &ProblemInstance::x0)
      .def_readonly("x_true", &ProblemInstance::x_true)
      .def_readonly("seed", &ProblemInstance::seed)
      .def_property_readonly("lam", [](const ProblemInstance& p) { return p.penalty.lambda(); })
      .def_property_readonly("v", [](const ProblemInstance& p) { return p.penalty.v(); })
      .def_property_readonly("lower", [](const ProblemInstance& p) { return p.box.lower(); })
      .def_property_readonly("upper", [](const ProblemInstance& p) { return p.box.upper(); })
      .def("objective", &ProblemInstance::objective, py::arg("x"))
      .def("save", [](const ProblemInstance& p, const std::string& path) { save_instance(p, path); })
      .def("__repr__", [](const ProblemInstance& p) {
        return "<Instance " + std::string(to_string(p.kind)) + " m=" + std::to_string(p.m()) +
               " n=" + std::to_string(p.n()) + ">";
      });

  m.def("gen_toy", &gen_toy, py::arg("lam") = 1.0, py::arg("v") = 0.5);
  m.def(
      "gen_l1_regression",
      [](Index m_, Index n, Index s, std::uint64_t seed, double lam, double noise_std) {
        L1RegressionOptions o;
        o.lambda = lam;
        o.noise_std = noise_std;
        return gen_l1_regression(m_, n, s, seed, o);
      },
      py::arg("m"), py::arg("n"), py::arg("s"), py::arg("seed") = 1, py::arg("lam") = 18.8,
      py::arg("noise_std") = 0.0);
  m.def(
      "gen_censored",
      [](Index m_, Index n, Index s, std::uint64_t seed, double lambda0, double noise_std) {
        CensoredOptions o;
        o.lambda0 = lambda0;
        o.noise_std = noise_std;
        return gen_censored(m_, n, s, seed, o);
      },
      py::arg("m"), py::arg("n"), py::arg("s"), py::arg("seed") = 1, py::arg("lambda0") = 0.01,
      py::arg("noise_std") = 0.0);
  m.def("load_instance", [](const std::string& path) { return load_instance(path); });

  m.def(
      "solve",
      [](const ProblemInstance& p, const std::string& algorithm, const py::kwargs& kw) {
        if (algorithm != "spge" && algorithm != "spg") {
          throw ConfigError("algorithm", "expected 'spge' or 'spg'");
        }
        const SolverConfig c = apply_overrides(preset_for(p.kind), kw);
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = algorithm == "spg" ? spg_solve(p, c) : spge_solve(p, c);
        }
        py::dict out;
        out["x"] = r.x_final;
        out["iterations"] = r.iterations;
        out["termination"] = std::string(to_string(r.termination));
        out["objective"] = p.objective(r.x_final);
        out["trace"] = trace_columns(r.trace);
        return out;
      },
      py::arg("instance"), py::arg("algorithm") = "spge",
      "Run SPGE (or SPG) from the instance start point. Keyword arguments override the "
      "preset solver settings for the instance kind.");

  m.def(
      "lower_bound_ok", [](const Vector& x, double v, double tol) { return lower_bound_check(x, v, tol).ok; },
      py::arg("x"), py::arg("v"), py::arg("tol") = 1e-3);

  m.def("check_prox", [](std::size_t n) { return report_dict(check_prox(n)); },
        py::arg("tuples") = 10000);
  m.def("check_grad", [](std::size_t n) { return report_dict(check_grad(n)); },
        py::arg("points") = 1000);
  m.def("check_monitor", [](int seeds) { return report_dict(check_monitor(60, 120, 12, seeds)); },
        py::arg("seeds") = 5);
  m.def("check_rate", []() { return report_dict(check_rate()); });
}
