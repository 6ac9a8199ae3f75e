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

#include "beq/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "beq/expression.hpp"
#include "beq/problems.hpp"

namespace beq {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.count(item.key())) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

const json& require_object(const json& v, const std::string& where) {
  if (!v.is_object()) throw ConfigError(where + ": expected an object");
  return v;
}

template <typename T>
T get_as(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

long get_count(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<long>();
}

Vector to_vector(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a nonempty array");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(where + ": entries must be numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

Matrix to_matrix(const json& v, Eigen::Index dim, const std::string& where) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != dim) {
    throw ConfigError(where + ": expected " + std::to_string(dim) + " rows");
  }
  Matrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Vector row = to_vector(v[static_cast<std::size_t>(i)], where);
    if (row.size() != dim) throw ConfigError(where + ": row length mismatch");
    out.row(i) = row.transpose();
  }
  return out;
}

Vector sized(const json& v, Eigen::Index dim, const std::string& where) {
  Vector out = to_vector(v, where);
  if (out.size() != dim) {
    throw ConfigError(where + ": expected length " + std::to_string(dim));
  }
  return out;
}

ConvexSet set_from_json(const json& v, Eigen::Index dim, const std::string& where) {
  require_object(v, where);
  const std::string type = get_as<std::string>(v, "type", where);
  try {
    if (type == "whole_space") {
      reject_unknown(v, {"type"}, where);
      return ConvexSet::whole_space(dim);
    }
    if (type == "ball") {
      reject_unknown(v, {"type", "center", "radius"}, where);
      return ConvexSet::ball(sized(v.at("center"), dim, where + ".center"),
                             get_number(v, "radius", where));
    }
    if (type == "box") {
      reject_unknown(v, {"type", "lower", "upper"}, where);
      return ConvexSet::box(sized(v.at("lower"), dim, where + ".lower"),
                            sized(v.at("upper"), dim, where + ".upper"));
    }
    if (type == "halfspace") {
      reject_unknown(v, {"type", "normal", "offset"}, where);
      return ConvexSet::halfspace(sized(v.at("normal"), dim, where + ".normal"),
                                  get_number(v, "offset", where));
    }
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown set type '" + type + "'");
}

BifunctionPtr bifunction_from_json(const json& v, Eigen::Index dim,
                                   const std::string& where) {
  require_object(v, where);
  const std::string type = get_as<std::string>(v, "type", where);
  try {
    if (type == "affine") {
      reject_unknown(v, {"type", "A", "B", "c"}, where);
      const Matrix a = to_matrix(v.at("A"), dim, where + ".A");
      const Matrix b = to_matrix(v.at("B"), dim, where + ".B");
      const Vector c = v.contains("c") ? sized(v.at("c"), dim, where + ".c")
                                       : Vector::Zero(dim);
      return make_affine(a, b, c);
    }
    if (type == "difference") {
      reject_unknown(v, {"type", "phi"}, where);
      const json& phi = require_object(v.at("phi"), where + ".phi");
      const std::string kind = get_as<std::string>(phi, "type", where + ".phi");
      if (kind == "max_one_norm") {
        reject_unknown(phi, {"type"}, where + ".phi");
        return make_difference(dim, std::make_shared<MaxOneNorm>());
      }
      if (kind == "squared_distance") {
        reject_unknown(phi, {"type", "center", "kappa"}, where + ".phi");
        const double kappa = phi.contains("kappa") ? get_number(phi, "kappa", where) : 1.0;
        return make_difference(
            dim, std::make_shared<ScaledSquaredDistance>(
                     sized(phi.at("center"), dim, where + ".phi.center"), kappa));
      }
      throw ConfigError(where + ".phi: unknown function type '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown bifunction type '" + type + "'");
}

}  // namespace

Problem problem_from_json(const json& def) {
  const std::string where = "problem.definition";
  require_object(def, where);
  reject_unknown(def, {"name", "dim", "set", "lower", "upper", "lower_solutions",
                       "reference", "x0", "x1"},
                 where);
  if (!def.contains("dim")) throw ConfigError(where + ": missing 'dim'");
  const long dim = get_count(def, "dim", where);
  if (dim < 1) throw ConfigError(where + ".dim: must be >= 1");
  for (const char* key : {"set", "lower", "upper", "x1"}) {
    if (!def.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  }
  Problem p{
      .name = def.contains("name") ? get_as<std::string>(def, "name", where) : "custom",
      .set = set_from_json(def.at("set"), dim, where + ".set"),
      .lower = bifunction_from_json(def.at("lower"), dim, where + ".lower"),
      .upper = bifunction_from_json(def.at("upper"), dim, where + ".upper"),
      .lower_solutions = std::nullopt,
      .reference = std::nullopt,
      .x0 = Vector(),
      .x1 = sized(def.at("x1"), dim, where + ".x1"),
  };
  p.x0 = def.contains("x0") ? sized(def.at("x0"), dim, where + ".x0") : p.x1;
  if (def.contains("lower_solutions")) {
    p.lower_solutions = set_from_json(def.at("lower_solutions"), dim,
                                      where + ".lower_solutions");
  }
  if (def.contains("reference")) {
    p.reference = sized(def.at("reference"), dim, where + ".reference");
  } else if (p.lower_solutions && p.upper->has_diagonal_subgradient()) {
    p.reference = reference_solution(p);
  }
  if (!p.set.contains(p.x0) || !p.set.contains(p.x1)) {
    throw ConfigError(where + ": x0 and x1 must lie in the set");
  }
  return p;
}

ExperimentConfig config_from_json(const json& doc) {
  const std::string where = "config";
  require_object(doc, where);
  reject_unknown(doc, {"schema_version", "problem", "method", "schedule", "budget",
                       "stop", "inner", "seed", "output", "diagnostics"},
                 where);
  ExperimentConfig cfg;
  try {
    if (doc.contains("schema_version")) {
      const long version = get_count(doc, "schema_version", where);
      if (version != kSchemaVersion) {
        throw ConfigError("config.schema_version: unsupported version " +
                          std::to_string(version));
      }
    }
    if (doc.contains("problem")) {
      const json& p = doc.at("problem");
      if (p.is_string()) {
        cfg.problem.name = p.get<std::string>();
      } else {
        require_object(p, "config.problem");
        reject_unknown(p, {"name", "dim", "seed", "definition"}, "config.problem");
        if (p.contains("name")) cfg.problem.name = get_as<std::string>(p, "name", "config.problem");
        if (p.contains("dim")) cfg.problem.dim = get_count(p, "dim", "config.problem");
        if (p.contains("seed")) cfg.problem.seed = get_as<std::uint64_t>(p, "seed", "config.problem");
        if (p.contains("definition")) cfg.problem.definition = p.at("definition");
      }
    }
    if (doc.contains("method")) {
      const std::string name = get_as<std::string>(doc, "method", where);
      const auto m = parse_method(name);
      if (!m) throw ConfigError("config.method: unknown method '" + name + "'");
      cfg.method = *m;
    }
    if (doc.contains("schedule")) {
      const json& s = require_object(doc.at("schedule"), "config.schedule");
      reject_unknown(s, {"lambda", "beta", "alpha", "clamp_alpha"}, "config.schedule");
      if (s.contains("lambda")) cfg.lambda = get_as<std::string>(s, "lambda", "config.schedule");
      if (s.contains("beta")) cfg.beta = get_as<std::string>(s, "beta", "config.schedule");
      if (s.contains("alpha")) cfg.alpha = get_as<std::string>(s, "alpha", "config.schedule");
      if (s.contains("clamp_alpha")) {
        cfg.clamp_alpha = get_as<bool>(s, "clamp_alpha", "config.schedule");
      }
    }
    if (doc.contains("budget")) cfg.budget = get_count(doc, "budget", where);
    if (doc.contains("stop")) {
      const json& s = require_object(doc.at("stop"), "config.stop");
      reject_unknown(s, {"step_tol", "residual_tol"}, "config.stop");
      if (s.contains("step_tol")) cfg.step_tol = get_number(s, "step_tol", "config.stop");
      if (s.contains("residual_tol")) {
        cfg.residual_tol = get_number(s, "residual_tol", "config.stop");
      }
    }
    if (doc.contains("inner")) {
      const json& s = require_object(doc.at("inner"), "config.inner");
      reject_unknown(s, {"tol", "budget"}, "config.inner");
      if (s.contains("tol")) cfg.inner_tol = get_number(s, "tol", "config.inner");
      if (s.contains("budget")) cfg.inner_budget = get_count(s, "budget", "config.inner");
    }
    if (doc.contains("seed")) cfg.seed = get_as<std::uint64_t>(doc, "seed", where);
    if (doc.contains("output")) cfg.output = get_as<std::string>(doc, "output", where);
    if (doc.contains("diagnostics")) {
      const json& s = require_object(doc.at("diagnostics"), "config.diagnostics");
      reject_unknown(s, {"ep_residual", "regime_horizon"}, "config.diagnostics");
      if (s.contains("ep_residual")) {
        cfg.record_residual = get_as<bool>(s, "ep_residual", "config.diagnostics");
      }
      if (s.contains("regime_horizon")) {
        cfg.regime_horizon = get_count(s, "regime_horizon", "config.diagnostics");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.budget < 0) throw ConfigError("config.budget: must be >= 0");
  if (cfg.inner_budget < 1) throw ConfigError("config.inner.budget: must be >= 1");
  if (!(cfg.inner_tol > 0.0)) throw ConfigError("config.inner.tol: must be > 0");
  if (cfg.regime_horizon < 100) throw ConfigError("config.diagnostics.regime_horizon: must be >= 100");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const ExperimentConfig& c) {
  json problem;
  if (c.problem.definition) {
    problem = {{"definition", *c.problem.definition}};
  } else {
    problem = {{"name", c.problem.name}, {"dim", c.problem.dim}, {"seed", c.problem.seed}};
  }
  return {
      {"schema_version", kSchemaVersion},
      {"problem", problem},
      {"method", to_string(c.method)},
      {"schedule",
       {{"lambda", c.lambda}, {"beta", c.beta}, {"alpha", c.alpha},
        {"clamp_alpha", c.clamp_alpha}}},
      {"budget", c.budget},
      {"stop", {{"step_tol", c.step_tol}, {"residual_tol", c.residual_tol}}},
      {"inner", {{"tol", c.inner_tol}, {"budget", c.inner_budget}}},
      {"seed", c.seed},
      {"output", c.output},
      {"diagnostics",
       {{"ep_residual", c.record_residual}, {"regime_horizon", c.regime_horizon}}},
  };
}

Problem build_problem(const ProblemSpec& spec) {
  if (spec.definition) return problem_from_json(*spec.definition);
  try {
    return make_problem(spec.name, spec.dim, spec.seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Schedule build_schedule(const ExperimentConfig& config) {
  try {
    return schedule_from_expressions(config.lambda, config.beta, config.alpha,
                                     config.clamp_alpha);
  } catch (const ExpressionError& e) {
    throw ConfigError(e.what());
  }
}

RunOptions build_run_options(const ExperimentConfig& config) {
  RunOptions opt;
  opt.budget = config.budget;
  opt.step_tol = config.step_tol;
  opt.residual_tol = config.residual_tol;
  opt.record_residual = config.record_residual;
  opt.inner.inner_tol = config.inner_tol;
  opt.inner.inner_budget = config.inner_budget;
  opt.inner.seed = config.seed;
  opt.seed = config.seed;
  return opt;
}

}  // namespace beq
