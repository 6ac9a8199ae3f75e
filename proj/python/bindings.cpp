// Copyright 2026 The beq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "beq/algorithms.hpp"
#include "beq/diagnostics.hpp"
#include "beq/expression.hpp"
#include "beq/problems.hpp"
#include "beq/resolvents.hpp"
#include "beq/trace.hpp"

namespace py = pybind11;
using namespace beq;

namespace {

Method method_or_throw(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) throw py::value_error("unknown method '" + name + "'");
  return *m;
}

py::dict trace_to_dict(const Trace& t, Eigen::Index dim) {
  const auto rows = static_cast<py::ssize_t>(t.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  py::array_t<long> n(rows);
  py::array_t<double> lambda(rows), beta(rows), alpha(rows), step(rows), err(rows), ep(rows);
  py::array_t<double> x({rows, static_cast<py::ssize_t>(dim)});
  auto xn = x.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < rows; ++i) {
    const auto& r = t[static_cast<std::size_t>(i)];
    n.mutable_at(i) = r.n;
    lambda.mutable_at(i) = r.lambda;
    beta.mutable_at(i) = r.beta;
    alpha.mutable_at(i) = r.alpha;
    step.mutable_at(i) = r.step_norm;
    err.mutable_at(i) = r.err_to_ref.value_or(nan);
    ep.mutable_at(i) = r.ep_residual.value_or(nan);
    for (Eigen::Index j = 0; j < dim; ++j) xn(i, j) = r.x[j];
  }
  py::dict d;
  d["n"] = n;
  d["lambda"] = lambda;
  d["beta"] = beta;
  d["alpha"] = alpha;
  d["step_norm"] = step;
  d["err_to_ref"] = err;
  d["ep_residual"] = ep;
  d["x"] = x;
  return d;
}

}  // namespace

PYBIND11_MODULE(_beq, m) {
  m.doc() = "Inertial splitting methods for bilevel equilibrium problems";

  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);

  m.def("prox_max_one_norm", &prox_max_one_norm, py::arg("t"), py::arg("w"),
        "prox of t max{1, |.|} at w");

  m.def("problems", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : registered_problems()) out.emplace_back(p.name, p.description);
    return out;
  });

  m.def("methods", [] {
    std::vector<std::string> out;
    for (Method mm : all_methods()) out.push_back(to_string(mm));
    return out;
  });

  m.def(
      "reference_point",
      [](const std::string& name, Eigen::Index dim, std::uint64_t seed) -> std::optional<Vector> {
        return make_problem(name, dim, seed).reference;
      },
      py::arg("problem") = "paper-r5", py::arg("dim") = 5, py::arg("seed") = 0);

  m.def(
      "run",
      [](const std::string& problem, const std::string& method, const std::string& lambda,
         const std::string& beta, const std::string& alpha, bool clamp, long budget,
         Eigen::Index dim, std::uint64_t problem_seed, std::uint64_t seed, double inner_tol,
         bool record_residual) {
        const Problem p = make_problem(problem, dim, problem_seed);
        const Schedule s = schedule_from_expressions(lambda, beta, alpha, clamp);
        RunOptions opt;
        opt.budget = budget;
        opt.seed = seed;
        opt.inner.inner_tol = inner_tol;
        opt.inner.seed = seed;
        opt.record_residual = record_residual;
        Trace t;
        {
          py::gil_scoped_release release;
          t = run(p, method_or_throw(method), s, opt);
        }
        return trace_to_dict(t, p.dim());
      },
      py::arg("problem") = "paper-r5", py::arg("method") = "ipsa", py::arg("lambda_") = "1/n",
      py::arg("beta") = "1+n", py::arg("alpha") = "0.1-1/n", py::arg("clamp_alpha") = true,
      py::arg("budget") = 1000, py::arg("dim") = 5, py::arg("problem_seed") = 0,
      py::arg("seed") = 0, py::arg("inner_tol") = 1e-10, py::arg("record_residual") = false,
      "Runs a method on a registered problem; returns the trace columns as arrays.");

  m.def(
      "validate_regime",
      [](const std::string& lambda, const std::string& beta, const std::string& alpha,
         bool clamp, long horizon) {
        const RegimeReport r =
            validate_regime(schedule_from_expressions(lambda, beta, alpha, clamp), horizon);
        py::dict d;
        d["weak"] = r.weak;
        d["strong"] = r.strong;
        d["weak_violations"] = r.weak_violations;
        d["strong_violations"] = r.strong_violations;
        d["summary"] = r.summary();
        return d;
      },
      py::arg("lambda_") = "1/n", py::arg("beta") = "1+n", py::arg("alpha") = "0.1-1/n",
      py::arg("clamp_alpha") = true, py::arg("horizon") = 4096);

  m.def(
      "ep_residual",
      [](const Vector& x, const std::string& problem, Eigen::Index dim, std::uint64_t seed) {
        const Problem p = make_problem(problem, dim, seed);
        if (x.size() != p.dim()) throw py::value_error("x has the wrong dimension");
        return ep_residual(*p.lower, p.set, x, seed);
      },
      py::arg("x"), py::arg("problem") = "paper-r5", py::arg("dim") = 5, py::arg("seed") = 0,
      "Lower-level residual max(0, sup_y -f(x, y)).");
}
