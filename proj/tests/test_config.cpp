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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "beq/config.hpp"

using namespace beq;
using nlohmann::json;

TEST_CASE("empty document gives defaults") {
  const ExperimentConfig c = config_from_json(json::object());
  CHECK(c.problem.name == "paper-r5");
  CHECK(c.method == Method::kIpsa);
  CHECK(c.lambda == "1/n");
  CHECK(c.beta == "1+n");
  CHECK(c.alpha == "0.1-1/n");
  CHECK(c.clamp_alpha);
  CHECK(c.budget == 1000);
  CHECK(c.inner_tol == 1e-10);
  CHECK(c.output == "trace.csv");
}

TEST_CASE("full document") {
  const json doc = json::parse(R"({
    "schema_version": 1,
    "problem": {"name": "quadratic-hierarchical", "dim": 3, "seed": 7},
    "method": "rppm",
    "schedule": {"lambda": "1", "beta": "n", "alpha": "0", "clamp_alpha": false},
    "budget": 50,
    "stop": {"step_tol": 1e-9, "residual_tol": 1e-6},
    "inner": {"tol": 1e-12, "budget": 500},
    "seed": 3,
    "output": "out.csv",
    "diagnostics": {"ep_residual": false, "regime_horizon": 200}
  })");
  const ExperimentConfig c = config_from_json(doc);
  CHECK(c.problem.name == "quadratic-hierarchical");
  CHECK(c.problem.dim == 3);
  CHECK(c.problem.seed == 7);
  CHECK(c.method == Method::kRppm);
  CHECK_FALSE(c.clamp_alpha);
  CHECK(c.budget == 50);
  CHECK(c.step_tol == 1e-9);
  CHECK(c.residual_tol == 1e-6);
  CHECK(c.inner_budget == 500);
  CHECK_FALSE(c.record_residual);
  CHECK(c.regime_horizon == 200);

  // Round trip.
  const ExperimentConfig again = config_from_json(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));

  const Problem p = build_problem(c.problem);
  CHECK(p.dim() == 3);
  const RunOptions opt = build_run_options(c);
  CHECK(opt.budget == 50);
  CHECK(opt.inner.inner_tol == 1e-12);
  CHECK(build_schedule(c).beta(4) == 4.0);
}

TEST_CASE("strict validation") {
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bugdet": 5})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"schedule": {"lamda": "1"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"schema_version": 2})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"method": "newton"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"budget": "many"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"budget": -1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"([1, 2])")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/beq.json"), ConfigError);
}

TEST_CASE("problem given as a string") {
  const auto c = config_from_json(json::parse(R"({"problem": "toy-1d"})"));
  CHECK(c.problem.name == "toy-1d");
  CHECK(build_problem(c.problem).dim() == 1);
}

TEST_CASE("inline problem definition") {
  const json def = json::parse(R"({
    "name": "custom",
    "dim": 2,
    "set": {"type": "box", "lower": [-2, -2], "upper": [2, 2]},
    "lower": {"type": "difference", "phi": {"type": "max_one_norm"}},
    "upper": {"type": "affine", "A": [[2, 0], [0, 2]], "B": [[1, 0], [0, 1]], "c": [-3, 0]},
    "lower_solutions": {"type": "ball", "center": [0, 0], "radius": 1},
    "x0": [2, 2],
    "x1": [2, 2]
  })");
  const Problem p = problem_from_json(def);
  CHECK(p.dim() == 2);
  CHECK(p.name == "custom");
  // <x - (3, 0), y - x> over the unit ball: reference (1, 0).
  REQUIRE(p.reference.has_value());
  CHECK((*p.reference - Vector::Unit(2, 0)).norm() <= 1e-9);

  json wrapped = json::object();
  wrapped["problem"] = json{{"definition", def}};
  const auto c = config_from_json(wrapped);
  CHECK(build_problem(c.problem).dim() == 2);

  json broken = def;
  broken["set"] = json{{"type", "simplex"}};
  CHECK_THROWS_AS(problem_from_json(broken), ConfigError);
  broken = def;
  broken["x0"] = json::array({1, 2, 3});
  CHECK_THROWS(problem_from_json(broken));
}

TEST_CASE("load from file") {
  const auto path = std::filesystem::temp_directory_path() / "beq_test_config.json";
  {
    std::ofstream f(path);
    f << R"({"method": "psm", "budget": 12})";
  }
  const auto c = load_config(path.string());
  CHECK(c.method == Method::kPsm);
  CHECK(c.budget == 12);
  {
    std::ofstream f(path);
    f << "{ not json";
  }
  CHECK_THROWS_AS(load_config(path.string()), ConfigError);
  std::filesystem::remove(path);
}
