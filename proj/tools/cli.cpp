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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "beq/algorithms.hpp"
#include "beq/config.hpp"
#include "beq/expression.hpp"
#include "beq/problems.hpp"

namespace beq::cli {
namespace {

namespace fs = std::filesystem;

// Flags shared by run, sweep and validate. Only flags given on the command
// line override values loaded from --config.
struct CommonFlags {
  std::string config_path;
  std::string problem;
  long dim = 5;
  std::uint64_t problem_seed = 0;
  std::string method;
  std::string lambda, beta, alpha;
  bool no_clamp = false;
  long iters = 0;
  double step_tol = 0.0, residual_tol = 0.0;
  double inner_tol = 0.0;
  long inner_budget = 0;
  std::uint64_t seed = 0;
  std::string output;
  bool no_residual = false;
  long horizon = 0;

  CLI::Option* o_problem = nullptr;
  CLI::Option* o_dim = nullptr;
  CLI::Option* o_problem_seed = nullptr;
  CLI::Option* o_method = nullptr;
  CLI::Option* o_lambda = nullptr;
  CLI::Option* o_beta = nullptr;
  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_no_clamp = nullptr;
  CLI::Option* o_iters = nullptr;
  CLI::Option* o_step_tol = nullptr;
  CLI::Option* o_residual_tol = nullptr;
  CLI::Option* o_inner_tol = nullptr;
  CLI::Option* o_inner_budget = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_output = nullptr;
  CLI::Option* o_no_residual = nullptr;
  CLI::Option* o_horizon = nullptr;
};

void add_schedule_flags(CLI::App& app, CommonFlags& f) {
  app.add_option("--config", f.config_path, "JSON experiment config");
  f.o_lambda = app.add_option("--lambda", f.lambda, "lambda_n expression in n");
  f.o_beta = app.add_option("--beta", f.beta, "beta_n expression in n");
  f.o_alpha = app.add_option("--alpha", f.alpha, "alpha_n expression in n");
  f.o_no_clamp = app.add_flag("--no-clamp", f.no_clamp, "use alpha_n unclamped");
  f.o_horizon = app.add_option("--horizon", f.horizon, "regime check horizon (>= 100)");
}

void add_run_flags(CLI::App& app, CommonFlags& f) {
  add_schedule_flags(app, f);
  f.o_problem = app.add_option("--problem", f.problem, "registered problem name");
  f.o_dim = app.add_option("--dim", f.dim, "dimension for quadratic-hierarchical");
  f.o_problem_seed = app.add_option("--problem-seed", f.problem_seed,
                                    "seed for quadratic-hierarchical");
  f.o_method = app.add_option("--method", f.method,
                              "ipsa | psm | inertial_prox | ppm_penalization | rppm");
  f.o_iters = app.add_option("--iters", f.iters, "iteration budget");
  f.o_step_tol = app.add_option("--step-tol", f.step_tol, "stop when step norm is below");
  f.o_residual_tol = app.add_option("--residual-tol", f.residual_tol,
                                    "and the equilibrium residual is below");
  f.o_inner_tol = app.add_option("--inner-tol", f.inner_tol, "inner solver tolerance");
  f.o_inner_budget = app.add_option("--inner-budget", f.inner_budget,
                                    "inner solver iteration budget");
  f.o_seed = app.add_option("--seed", f.seed, "random seed");
  f.o_no_residual = app.add_flag("--no-residual", f.no_residual,
                                 "skip the ep_residual column");
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = load_config(f.config_path);
  auto given = [](const CLI::Option* o) { return o != nullptr && o->count() > 0; };
  if (given(f.o_problem)) {
    cfg.problem.name = f.problem;
    cfg.problem.definition.reset();
  }
  if (given(f.o_dim)) cfg.problem.dim = f.dim;
  if (given(f.o_problem_seed)) cfg.problem.seed = f.problem_seed;
  if (given(f.o_method)) {
    const auto m = parse_method(f.method);
    if (!m) throw ConfigError("unknown method '" + f.method + "'");
    cfg.method = *m;
  }
  if (given(f.o_lambda)) cfg.lambda = f.lambda;
  if (given(f.o_beta)) cfg.beta = f.beta;
  if (given(f.o_alpha)) cfg.alpha = f.alpha;
  if (given(f.o_no_clamp)) cfg.clamp_alpha = !f.no_clamp;
  if (given(f.o_iters)) cfg.budget = f.iters;
  if (given(f.o_step_tol)) cfg.step_tol = f.step_tol;
  if (given(f.o_residual_tol)) cfg.residual_tol = f.residual_tol;
  if (given(f.o_inner_tol)) cfg.inner_tol = f.inner_tol;
  if (given(f.o_inner_budget)) cfg.inner_budget = f.inner_budget;
  if (given(f.o_seed)) cfg.seed = f.seed;
  if (given(f.o_output)) cfg.output = f.output;
  if (given(f.o_no_residual)) cfg.record_residual = !f.no_residual;
  if (given(f.o_horizon)) cfg.regime_horizon = f.horizon;
  // Re-validate the merged document.
  return config_from_json(config_to_json(cfg));
}

void print_regime(const ExperimentConfig& cfg, const Schedule& schedule,
                  std::ostream& out) {
  out << "schedule: lambda_n = " << cfg.lambda << ", beta_n = " << cfg.beta
      << ", alpha_n = " << cfg.alpha << (cfg.clamp_alpha ? " (clamped)" : " (unclamped)")
      << '\n';
  out << validate_regime(schedule, cfg.regime_horizon).summary();
}

struct RunOutcome {
  bool failed = false;
  std::string message;
  long final_n = 0;
  std::optional<double> final_err;
  double final_step = 0.0;
  std::optional<double> final_residual;
};

RunOutcome execute(const ExperimentConfig& cfg, const Problem& problem,
                   const std::string& path) {
  const Schedule schedule = build_schedule(cfg);
  RunOutcome outcome;
  Trace trace;
  try {
    trace = run(problem, cfg.method, schedule, build_run_options(cfg));
  } catch (const SolverFailure& e) {
    outcome.failed = true;
    outcome.message = e.what();
    trace = e.partial();
  }
  emit_trace(trace, path, problem.dim());
  if (!trace.empty()) {
    const auto& last = trace.back();
    outcome.final_n = last.n;
    outcome.final_err = last.err_to_ref;
    outcome.final_step = last.step_norm;
    outcome.final_residual = last.ep_residual;
  }
  return outcome;
}

std::string format_real(std::optional<double> v) {
  if (!v) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  return buf;
}

int cmd_run(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  Problem problem = paper_r5();
  std::optional<Schedule> schedule;
  try {
    cfg = resolve(flags);
    problem = build_problem(cfg.problem);
    schedule = build_schedule(cfg);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  out << "problem: " << problem.name << ", method: " << to_string(cfg.method) << '\n';
  print_regime(cfg, *schedule, out);
  RunOutcome outcome;
  try {
    outcome = execute(cfg, problem, cfg.output);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  if (outcome.failed) {
    err << "solver failure: " << outcome.message << " (partial trace written to "
        << cfg.output << ")\n";
    return kExitSolver;
  }
  out << "wrote " << cfg.output << " (last n = " << outcome.final_n
      << ", err_to_ref = " << format_real(outcome.final_err) << ")\n";
  return kExitOk;
}

int cmd_validate(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig cfg = resolve(flags);
    print_regime(cfg, build_schedule(cfg), out);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

int cmd_problems(std::ostream& out) {
  for (const auto& info : registered_problems()) {
    out << std::left << std::setw(24) << info.name << info.description << '\n';
  }
  return kExitOk;
}

unsigned sweep_threads(std::size_t jobs) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BEQ_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(cap, std::max<std::size_t>(jobs, 1)));
}

std::string gnuplot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

int cmd_sweep(const CommonFlags& flags, const std::string& vary_name,
              const std::string& vary_values, const std::string& out_dir,
              std::ostream& out, std::ostream& err) {
  ExperimentConfig base;
  std::vector<std::string> values;
  std::vector<ExperimentConfig> configs;
  std::vector<Problem> problems;
  try {
    base = resolve(flags);
    values = split_top_level(vary_values);
    if (values.empty()) throw ConfigError("--vary needs at least one value");
    for (const auto& v : values) {
      ExperimentConfig c = base;
      if (vary_name == "lambda") {
        c.lambda = v;
      } else if (vary_name == "beta") {
        c.beta = v;
      } else if (vary_name == "alpha") {
        c.alpha = v;
      } else if (vary_name == "method") {
        const auto m = parse_method(v);
        if (!m) throw ConfigError("unknown method '" + v + "'");
        c.method = *m;
      } else if (vary_name == "seed") {
        c.seed = std::stoull(v);
      } else {
        throw ConfigError("--vary: unknown parameter '" + vary_name +
                          "' (lambda, beta, alpha, method, seed)");
      }
      c.output = (fs::path(out_dir) / ("run_" + std::to_string(configs.size()) + ".csv")).string();
      build_schedule(c);
      configs.push_back(std::move(c));
    }
    // Problems are immutable; build one per job so runs share nothing.
    for (const auto& c : configs) problems.push_back(build_problem(c.problem));
    fs::create_directories(out_dir);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  for (std::size_t i = 0; i < configs.size(); ++i) {
    out << "[" << i << "] " << vary_name << " = " << values[i] << '\n';
    print_regime(configs[i], build_schedule(configs[i]), out);
  }

  std::vector<RunOutcome> outcomes(configs.size());
  std::vector<std::string> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        outcomes[i] = execute(configs[i], problems[i], configs[i].output);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned threads = sweep_threads(configs.size());
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int code = kExitOk;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (!errors[i].empty()) {
      err << "run " << i << ": " << errors[i] << '\n';
      code = kExitSolver;
    } else if (outcomes[i].failed) {
      err << "run " << i << ": solver failure: " << outcomes[i].message << '\n';
      code = kExitSolver;
    }
  }

  // Rank by final error (or residual when no reference is known); failed
  // runs last, ties by input order.
  auto key = [&](std::size_t i) {
    const auto& o = outcomes[i];
    if (!errors[i].empty() || o.failed) return std::numeric_limits<double>::infinity();
    if (o.final_err) return *o.final_err;
    return o.final_residual.value_or(std::numeric_limits<double>::infinity());
  };
  std::vector<std::size_t> order(configs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  const fs::path summary_path = fs::path(out_dir) / "summary.csv";
  std::ofstream summary(summary_path);
  summary << "rank,run," << vary_name << ",status,final_n,final_err,final_step,final_residual,csv\n";
  out << "\nrank  run  final_err               " << vary_name << '\n';
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t i = order[r];
    const auto& o = outcomes[i];
    const std::string status = !errors[i].empty() ? "error" : (o.failed ? "failed" : "ok");
    summary << r + 1 << ',' << i << ",\"" << values[i] << "\"," << status << ','
            << o.final_n << ',' << format_real(o.final_err) << ','
            << format_real(o.final_step) << ',' << format_real(o.final_residual) << ','
            << fs::path(configs[i].output).filename().string() << '\n';
    out << std::left << std::setw(6) << r + 1 << std::setw(5) << i << std::setw(24)
        << format_real(o.final_err) << values[i] << '\n';
  }

  std::ofstream plot(fs::path(out_dir) / "plot.gp");
  plot << "# gnuplot -persist plot.gp\n"
       << "set datafile separator \",\"\n"
       << "set logscale y\n"
       << "set xlabel \"n\"\n"
       << "set ylabel \"err_to_ref\"\n"
       << "plot \\\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    plot << "  \"" << fs::path(configs[i].output).filename().string()
         << "\" using 1:6 skip 1 with lines title \"" << vary_name << " = "
         << gnuplot_escape(values[i]) << "\"" << (i + 1 < configs.size() ? ", \\" : "")
         << '\n';
  }
  out << "wrote " << summary_path.string() << " and plot.gp\n";
  return code;
}

}  // namespace

std::vector<std::string> split_top_level(const std::string& list) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : list) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  for (auto& p : parts) {
    const auto b = p.find_first_not_of(" \t");
    const auto e = p.find_last_not_of(" \t");
    p = b == std::string::npos ? std::string() : p.substr(b, e - b + 1);
  }
  parts.erase(std::remove(parts.begin(), parts.end(), std::string()), parts.end());
  return parts;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inertial proximal splitting for bilevel equilibrium problems"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "run one experiment and write a CSV trace");
  add_run_flags(*run_cmd, run_flags);
  run_flags.o_output = run_cmd->add_option("-o,--output", run_flags.output, "CSV path");

  CommonFlags sweep_flags;
  std::vector<std::string> vary;
  std::string out_dir = "sweep";
  auto* sweep_cmd = app.add_subcommand("sweep", "run one experiment per value of a parameter");
  add_run_flags(*sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--vary", vary, "PARAM \"v1,v2,...\"")->expected(2)->required();
  sweep_cmd->add_option("--out-dir", out_dir, "output directory");

  CommonFlags validate_flags;
  auto* validate_cmd = app.add_subcommand("validate", "check a schedule against the convergence hypotheses");
  add_schedule_flags(*validate_cmd, validate_flags);

  auto* problems_cmd = app.add_subcommand("problems", "list registered problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (run_cmd->parsed()) return cmd_run(run_flags, out, err);
  if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, vary[0], vary[1], out_dir, out, err);
  if (validate_cmd->parsed()) return cmd_validate(validate_flags, out, err);
  if (problems_cmd->parsed()) return cmd_problems(out);
  return kExitConfig;
}

}  // namespace beq::cli
