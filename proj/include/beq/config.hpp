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

#ifndef BEQ_CONFIG_HPP_
#define BEQ_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "beq/algorithms.hpp"
#include "beq/problem.hpp"

namespace beq {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProblemSpec {
  std::string name = "paper-r5";
  Eigen::Index dim = 5;
  std::uint64_t seed = 0;
  std::optional<nlohmann::json> definition;  // inline problem, overrides name
};

struct ExperimentConfig {
  ProblemSpec problem;
  Method method = Method::kIpsa;
  std::string lambda = "1/n";
  std::string beta = "1+n";
  std::string alpha = "0.1-1/n";
  bool clamp_alpha = true;
  long budget = 1000;
  double step_tol = 0.0;
  double residual_tol = 0.0;
  double inner_tol = 1e-10;
  long inner_budget = 100000;
  std::uint64_t seed = 0;
  std::string output = "trace.csv";
  bool record_residual = true;
  long regime_horizon = 4096;
};

// Schema (schema_version 1):
// {
//   "schema_version": 1,
//   "problem": "paper-r5" | {"name": ..., "dim": 5, "seed": 0}
//              | {"definition": <problem definition>},
//   "method": "ipsa" | "psm" | "inertial_prox" | "ppm_penalization" | "rppm",
//   "schedule": {"lambda": "1/n", "beta": "1+n", "alpha": "0.1-1/n",
//                "clamp_alpha": true},
//   "budget": 1000,
//   "stop": {"step_tol": 0, "residual_tol": 0},
//   "inner": {"tol": 1e-10, "budget": 100000},
//   "seed": 0,
//   "output": "trace.csv",
//   "diagnostics": {"ep_residual": true, "regime_horizon": 4096}
// }
// Every key is optional; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Problem definition:
// {
//   "name": "custom",
//   "dim": 2,
//   "set": {"type": "whole_space"} | {"type": "ball", "center": [..], "radius": r}
//          | {"type": "box", "lower": [..], "upper": [..]}
//          | {"type": "halfspace", "normal": [..], "offset": b},
//   "lower": <bifunction>, "upper": <bifunction>,
//   "lower_solutions": <set>, "reference": [..], "x0": [..], "x1": [..]
// }
// <bifunction> is {"type": "affine", "A": [[..]], "B": [[..]], "c": [..]} or
// {"type": "difference", "phi": {"type": "max_one_norm"}
//                        | {"type": "squared_distance", "center": [..], "kappa": k}}.
// Without "reference" but with "lower_solutions" the reference point is
// computed by reference_solution.
Problem problem_from_json(const nlohmann::json& def);

Problem build_problem(const ProblemSpec& spec);
Schedule build_schedule(const ExperimentConfig& config);
RunOptions build_run_options(const ExperimentConfig& config);

}  // namespace beq

#endif  // BEQ_CONFIG_HPP_
