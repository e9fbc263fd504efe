#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coopsense/detector.hpp"
#include "coopsense/fusion.hpp"
#include "coopsense/montecarlo.hpp"
#include "coopsense/optimizer.hpp"
#include "coopsense/specfun.hpp"

namespace py = pybind11;
using namespace coopsense;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Globally optimal n-out-of-N cooperative energy detection";

  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);

  m.def("reg_inc_beta", [](double x, double a, double b) { return reg_inc_beta(x, a, b); }, py::arg("x"),
        py::arg("a"), py::arg("b"));
  m.def("inv_reg_inc_beta", [](double y, double a, double b) { return inv_reg_inc_beta(y, a, b); }, py::arg("y"),
        py::arg("a"), py::arg("b"));
  m.def("zeta", [](int M, double x) { return zeta(M, x); }, py::arg("M"), py::arg("x"));
  m.def("inv_zeta", [](int M, double p) { return inv_zeta(M, p); }, py::arg("M"), py::arg("p"));
  m.def("marcum_q", [](double order, double a, double b) { return marcum_q(order, a, b); }, py::arg("order"),
        py::arg("a"), py::arg("b"));

  py::class_<SensingConfig>(m, "SensingConfig")
      .def(py::init([](int users, int samples, double avg_snr, double alpha) {
             SensingConfig cfg{users, samples, avg_snr, alpha};
             cfg.validate();
             return cfg;
           }),
           py::arg("num_users"), py::arg("num_samples"), py::arg("avg_snr"), py::arg("alpha"))
      .def_static("from_db", &SensingConfig::from_db, py::arg("num_users"), py::arg("num_samples"),
                  py::arg("snr_db"), py::arg("alpha"))
      .def_readwrite("num_users", &SensingConfig::num_users)
      .def_readwrite("num_samples", &SensingConfig::num_samples)
      .def_readwrite("avg_snr", &SensingConfig::avg_snr)
      .def_readwrite("alpha", &SensingConfig::alpha);

  m.def("local_pf", &local_pf, py::arg("M"), py::arg("lam"));
  m.def("local_pd", &local_pd, py::arg("M"), py::arg("lam"), py::arg("gamma"));
  m.def("avg_pd", &avg_pd, py::arg("M"), py::arg("lam"), py::arg("avg_snr"));

  py::class_<FusionRule>(m, "FusionRule")
      .def_static("or_rule", &FusionRule::or_rule, py::arg("num_users"))
      .def_static("and_rule", &FusionRule::and_rule, py::arg("num_users"))
      .def_static("majority_rule", &FusionRule::majority_rule, py::arg("num_users"))
      .def_static("k_of_n", &FusionRule::k_of_n, py::arg("n"), py::arg("num_users"))
      .def_static("parse", [](const std::string& text, int users) { return FusionRule::parse(text, users); },
                  py::arg("text"), py::arg("num_users"))
      .def_property_readonly("n", &FusionRule::n)
      .def_property_readonly("num_users", &FusionRule::num_users)
      .def_property_readonly("name", &FusionRule::name);

  py::class_<ThresholdPair>(m, "ThresholdPair")
      .def(py::init([](int n, double lam) { return ThresholdPair{n, lam}; }), py::arg("n"), py::arg("lam"))
      .def_readwrite("n", &ThresholdPair::n)
      .def_readwrite("lam", &ThresholdPair::lambda);

  py::class_<GlobalMetrics>(m, "GlobalMetrics")
      .def_readonly("q_f", &GlobalMetrics::q_f)
      .def_readonly("q_d", &GlobalMetrics::q_d);

  m.def("global_qf", &global_qf, py::arg("n"), py::arg("N"), py::arg("p_f"));
  m.def("global_qd", &global_qd, py::arg("n"), py::arg("N"), py::arg("p_d_avg"));
  m.def("global_tail_direct", &global_tail_direct, py::arg("n"), py::arg("N"), py::arg("p"));
  m.def("pf_for_alpha", &pf_for_alpha, py::arg("alpha"), py::arg("n"), py::arg("N"));
  m.def("lambda_for_alpha", &lambda_for_alpha, py::arg("alpha"), py::arg("n"), py::arg("N"), py::arg("M"));
  m.def("phi", &phi, py::arg("lam"), py::arg("n"), py::arg("N"), py::arg("M"));
  m.def("alpha_matched_pair", &alpha_matched_pair, py::arg("cfg"), py::arg("rule"));
  m.def("evaluate_pair", &evaluate_pair, py::arg("cfg"), py::arg("pair"));

  py::class_<OptimizationResult>(m, "OptimizationResult")
      .def_readonly("n_opt", &OptimizationResult::n_opt)
      .def_readonly("lambda_opt", &OptimizationResult::lambda_opt)
      .def_readonly("q_d", &OptimizationResult::q_d)
      .def_readonly("objective_trace", &OptimizationResult::objective_trace)
      .def_readonly("used_fallback", &OptimizationResult::used_fallback)
      .def_property_readonly("evaluations", &OptimizationResult::evaluations);

  py::class_<ConvexityReport>(m, "ConvexityReport")
      .def_readonly("convex", &ConvexityReport::convex)
      .def_readonly("first_violation", &ConvexityReport::first_violation);

  m.def("objective", &objective, py::arg("n"), py::arg("cfg"));
  m.def("binary_search_opt", py::overload_cast<const SensingConfig&>(&binary_search_opt), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("exhaustive_opt", py::overload_cast<const SensingConfig&>(&exhaustive_opt), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("convexity_check", py::overload_cast<const SensingConfig&, double>(&convexity_check), py::arg("cfg"),
        py::arg("slack") = 1e-9, py::call_guard<py::gil_scoped_release>());

  py::class_<TrialConfig>(m, "TrialConfig")
      .def(py::init([](std::uint64_t trials, std::uint64_t seed, int workers) {
             return TrialConfig{trials, seed, workers};
           }),
           py::arg("trials") = 100000, py::arg("seed") = 1, py::arg("workers") = 1)
      .def_readwrite("trials", &TrialConfig::trials)
      .def_readwrite("seed", &TrialConfig::seed)
      .def_readwrite("workers", &TrialConfig::workers);

  py::class_<EmpiricalMetrics>(m, "EmpiricalMetrics")
      .def_readonly("q_f_hat", &EmpiricalMetrics::q_f_hat)
      .def_readonly("q_d_hat", &EmpiricalMetrics::q_d_hat)
      .def_readonly("stderr_f", &EmpiricalMetrics::stderr_f)
      .def_readonly("stderr_d", &EmpiricalMetrics::stderr_d)
      .def_readonly("trials", &EmpiricalMetrics::trials);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("analytic", &ValidationReport::analytic)
      .def_readonly("empirical", &ValidationReport::empirical)
      .def_readonly("tolerance_f", &ValidationReport::tolerance_f)
      .def_readonly("tolerance_d", &ValidationReport::tolerance_d)
      .def_readonly("pass_f", &ValidationReport::pass_f)
      .def_readonly("pass_d", &ValidationReport::pass_d)
      .def_property_readonly("passed", &ValidationReport::passed);

  m.def("simulate", &simulate, py::arg("cfg"), py::arg("pair"), py::arg("trial_cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("validate_against_analytic", &validate_against_analytic, py::arg("cfg"), py::arg("pair"),
        py::arg("trial_cfg"), py::call_guard<py::gil_scoped_release>());
}
