// contraction-lab: command-line front end. Exit codes: 0 success, 2 bad
// configuration or arguments, 3 numeric failure, 4 a requested check failed.
#include <CLI11.hpp>

#include <clab/bounds.hpp>
#include <clab/dynamics.hpp>
#include <clab/errors.hpp>
#include <clab/experiment.hpp>
#include <clab/lp.hpp>
#include <clab/serialization.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitVerification = 4;

clab::LpProblem load_problem(const std::string& ref) {
  if (ref == "box3") return clab::box3_problem();
  return clab::problem_from_json(clab::load_json_file(ref));
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

nlohmann::json kkt_to_json(const clab::KktResidual& kkt) {
  return {{"stationarity", kkt.stationarity},
          {"primal", kkt.primal},
          {"dual", kkt.dual},
          {"complementarity", kkt.complementarity}};
}

void warn_if_uncertified(const clab::ContractionProfile& profile) {
  if (!profile.equiv.minimal)
    std::cerr << "warning: equivalence coefficients are sampled lower "
                 "bounds; the emitted bound is not certified\n";
}

int run_linexp_eval(const std::string& params_path, const std::string& grid) {
  const auto p = clab::linexp_from_json(clab::load_json_file(params_path));
  const auto times = clab::parse_time_grid(grid);
  std::vector<double> values(times.size());
  for (size_t i = 0; i < times.size(); ++i)
    values[i] = clab::linexp_eval(times[i], p);
  clab::write_series_csv(std::cout, "value", times, values);
  return kExitOk;
}

int run_bound(const std::string& mode, const std::string& profile_path,
              double dist0, std::optional<double> rho,
              const std::string& grid) {
  const auto j = clab::load_json_file(profile_path);
  const auto times = clab::parse_time_grid(grid);
  std::vector<double> values(times.size());

  if (mode == "same") {
    const auto profile = clab::profile_from_json(j);
    const auto env = clab::same_norm_bound(profile, dist0);
    for (size_t i = 0; i < times.size(); ++i) values[i] = env(times[i]);
  } else if (mode == "diff") {
    const auto profile = clab::profile_from_json(j);
    warn_if_uncertified(profile);
    const double used_rho =
        rho ? *rho : clab::optimize_rho(profile, dist0).rho;
    const auto env = clab::diff_norm_bound(profile, dist0, used_rho);
    for (size_t i = 0; i < times.size(); ++i) values[i] = env(times[i]);
  } else if (mode == "gB") {
    const auto profile = clab::profile_from_json(j);
    warn_if_uncertified(profile);
    const double used_rho =
        rho ? *rho : clab::optimize_rho(profile, dist0).rho;
    for (size_t i = 0; i < times.size(); ++i)
      values[i] = clab::piecewise_bound_gB(times[i], profile, dist0, used_rho);
  } else if (mode == "iss") {
    const auto profile = clab::iss_profile_from_json(j);
    for (size_t i = 0; i < times.size(); ++i)
      values[i] = clab::iss_bound(times[i], profile, dist0);
  } else {
    throw clab::ConfigError("unknown bound mode: " + mode);
  }
  clab::write_series_csv(std::cout, "bound", times, values);
  return kExitOk;
}

clab::VectorFieldHandle parse_field(const std::string& text) {
  if (text.rfind("sat:", 0) == 0) {
    const auto rest = text.substr(4);
    const auto sep = rest.find(':');
    if (sep == std::string::npos)
      throw clab::ConfigError("saturated field needs sat:<c>:<d>");
    try {
      const double c = std::stod(rest.substr(0, sep));
      const double d = std::stod(rest.substr(sep + 1));
      return clab::make_saturated_field(c, d);
    } catch (const clab::ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw clab::ConfigError("bad saturated field spec: " + text);
    }
  }
  if (text.rfind("lp:", 0) == 0)
    return clab::make_lp_field(load_problem(text.substr(3)));
  throw clab::ConfigError("unknown field spec: " + text +
                          " (expected sat:<c>:<d> or lp:<problem>)");
}

int run_simulate(const std::string& field_spec, const std::string& x0_text,
                 double dt, double t_end, const std::string& scheme_name,
                 int stride) {
  const auto field = parse_field(field_spec);
  const Eigen::VectorXd x0 = clab::parse_vector(x0_text);
  if (x0.size() != field.dim)
    throw clab::ConfigError("x0 has dimension " + std::to_string(x0.size()) +
                            " but the field expects " +
                            std::to_string(field.dim));
  clab::Scheme scheme;
  if (scheme_name == "euler")
    scheme = clab::Scheme::Euler;
  else if (scheme_name == "rk4")
    scheme = clab::Scheme::Rk4;
  else
    throw clab::ConfigError("unknown scheme: " + scheme_name);
  const auto traj = clab::integrate(field, x0, t_end, dt, scheme);
  clab::write_trajectory_csv(std::cout, traj.times, traj.states, stride);
  return kExitOk;
}

int run_lp_solve(const std::string& problem_ref, const std::string& x0_text,
                 double dt, double t_end, double tol) {
  const auto prob = load_problem(problem_ref);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(prob.n());
  Eigen::VectorXd lambda0 = Eigen::VectorXd::Zero(prob.m());
  if (!x0_text.empty()) {
    const Eigen::VectorXd z0 = clab::parse_vector(x0_text);
    if (z0.size() == prob.n()) {
      x0 = z0;
    } else if (z0.size() == prob.n() + prob.m()) {
      x0 = z0.head(prob.n());
      lambda0 = z0.tail(prob.m());
    } else {
      throw clab::ConfigError("x0 must have length n or n+m");
    }
  }
  const auto result =
      clab::solve_lp_by_integration(prob, x0, lambda0, dt, t_end, tol);
  nlohmann::json out{{"x", vector_to_json(result.z.x)},
                     {"lambda", vector_to_json(result.z.lambda)},
                     {"converged", result.converged},
                     {"residual_inf", result.residual_inf},
                     {"t_integrated", result.t_integrated},
                     {"objective", prob.c.dot(result.z.x)},
                     {"kkt", kkt_to_json(result.kkt)}};
  std::cout << out.dump(2) << '\n';
  return result.converged ? kExitOk : kExitVerification;
}

int run_lp_check_hurwitz(const std::string& problem_ref,
                         const std::string& at_text, double dt, double t_end,
                         double tol) {
  const auto prob = load_problem(problem_ref);
  clab::PrimalDualState z;
  bool solved = false;
  if (!at_text.empty()) {
    const Eigen::VectorXd stacked = clab::parse_vector(at_text);
    z = clab::PrimalDualState::split(prob, stacked);
  } else {
    const auto result = clab::solve_lp_by_integration(
        prob, Eigen::VectorXd::Zero(prob.n()), Eigen::VectorXd::Zero(prob.m()),
        dt, t_end, tol);
    if (!result.converged)
      throw clab::NumericError(
          "flow did not reach an equilibrium; pass --at or raise --t-end");
    z = result.z;
    solved = true;
  }
  const auto jac = clab::jacobian_f_lp(z, prob);
  const auto verdict = clab::check_hurwitz(jac.J);
  nlohmann::json out{{"alpha", verdict.alpha},
                     {"hurwitz", verdict.hurwitz},
                     {"kink_rows", jac.kink_rows},
                     {"z", vector_to_json(z.stacked())},
                     {"z_source", solved ? "integrated" : "given"}};
  std::cout << out.dump(2) << '\n';
  return verdict.hurwitz ? kExitOk : kExitVerification;
}

int run_lp_probe(uint64_t seed, int count) {
  const auto records = clab::conjecture_probe(seed, count);
  nlohmann::json rows = nlohmann::json::array();
  int conclusive = 0, agreements = 0;
  for (const auto& r : records) {
    rows.push_back({{"index", r.index},
                    {"n", r.n},
                    {"m", r.m},
                    {"unique_solution", r.unique_solution},
                    {"hurwitz", r.hurwitz},
                    {"alpha", r.alpha},
                    {"converged", r.converged},
                    {"kink_adjacent", r.kink_adjacent},
                    {"inconclusive", r.inconclusive},
                    {"agree", r.agree}});
    if (!r.inconclusive) {
      ++conclusive;
      if (r.agree) ++agreements;
    }
  }
  nlohmann::json out{{"records", rows},
                     {"conclusive", conclusive},
                     {"agreements", agreements},
                     {"seed", seed}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int run_experiment_cmd(const clab::ExperimentConfig& config) {
  const auto prob = clab::resolve_problem(config);
  const auto summary = clab::run_experiment(config, prob);
  std::cout << clab::summary_to_json(summary).dump(2) << '\n';
  return kExitOk;
}

int run_overlay(const std::string& summary_path,
                const std::string& profile_path, const std::string& mode,
                std::optional<double> rho, std::optional<double> dist0_arg) {
  const auto sj = clab::load_json_file(summary_path);
  std::vector<double> mean, stddev;
  double dt = 0.0;
  try {
    mean = sj.at("mean_distance").get<std::vector<double>>();
    stddev = sj.at("std_distance").get<std::vector<double>>();
    dt = sj.at("dt").get<double>();
  } catch (const std::exception& e) {
    throw clab::ConfigError(std::string("bad summary file: ") + e.what());
  }
  if (mean.empty()) throw clab::ConfigError("summary has no distance data");
  std::vector<double> times(mean.size());
  for (size_t k = 0; k < times.size(); ++k)
    times[k] = static_cast<double>(k) * dt;
  const double dist0 = dist0_arg ? *dist0_arg : mean.front();

  const auto j = clab::load_json_file(profile_path);
  std::vector<std::pair<std::string, std::function<double(double)>>> columns;
  if (mode == "same") {
    const auto profile = clab::profile_from_json(j);
    const auto env = clab::same_norm_bound(profile, dist0);
    columns.emplace_back("bound", [env](double t) { return env(t); });
  } else if (mode == "diff") {
    const auto profile = clab::profile_from_json(j);
    warn_if_uncertified(profile);
    const double used_rho =
        rho ? *rho : clab::optimize_rho(profile, dist0).rho;
    const auto env = clab::diff_norm_bound(profile, dist0, used_rho);
    columns.emplace_back("linexp", [env](double t) { return env(t); });
    columns.emplace_back("g_B", [profile, dist0, used_rho](double t) {
      return clab::piecewise_bound_gB(t, profile, dist0, used_rho);
    });
  } else if (mode == "iss") {
    const auto profile = clab::iss_profile_from_json(j);
    columns.emplace_back("bound", [profile, dist0](double t) {
      return clab::iss_bound(t, profile, dist0);
    });
  } else {
    throw clab::ConfigError("unknown overlay mode: " + mode);
  }
  clab::emit_bound_overlay(std::cout, times, mean, stddev, columns);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "contraction-lab: linear-exponential convergence bounds for "
      "weakly/strongly contracting flows and primal-dual LP dynamics"};
  app.require_subcommand(1);

  // linexp-eval
  std::string params_path, grid;
  auto* linexp_cmd =
      app.add_subcommand("linexp-eval", "Evaluate a linexp curve on a grid");
  linexp_cmd->add_option("--params", params_path, "Parameter JSON file")
      ->required();
  linexp_cmd->add_option("--t-grid", grid, "Grid start:stop:step")->required();

  // bound
  std::string bound_mode = "same", profile_path;
  double dist0 = 0.0;
  std::optional<double> rho;
  auto* bound_cmd =
      app.add_subcommand("bound", "Emit a convergence bound on a grid");
  bound_cmd->add_option("--mode", bound_mode, "same|diff|iss|gB");
  bound_cmd->add_option("--profile", profile_path, "Profile JSON file")
      ->required();
  bound_cmd->add_option("--dist0", dist0, "Initial distance")->required();
  bound_cmd->add_option("--rho", rho,
                        "Contraction factor in (0,1); swept when omitted");
  bound_cmd->add_option("--t-grid", grid, "Grid start:stop:step")->required();

  // simulate
  std::string field_spec, x0_text, scheme_name = "euler";
  double dt = 1e-3, t_end = 10.0;
  int stride = 1;
  auto* sim_cmd = app.add_subcommand("simulate", "Integrate a vector field");
  sim_cmd->add_option("--field", field_spec, "sat:<c>:<d> or lp:<problem>")
      ->required();
  sim_cmd->add_option("--x0", x0_text, "Initial state, comma-separated")
      ->required();
  sim_cmd->add_option("--dt", dt, "Step size");
  sim_cmd->add_option("--t-end", t_end, "End time");
  sim_cmd->add_option("--scheme", scheme_name, "euler|rk4");
  sim_cmd->add_option("--stride", stride, "Keep every k-th sample");

  // lp family
  auto* lp_cmd = app.add_subcommand("lp", "Primal-dual LP operations");
  lp_cmd->require_subcommand(1);
  std::string problem_ref = "box3", at_text;
  double lp_dt = 1e-3, lp_t_end = 300.0, lp_tol = 1e-6;
  auto* solve_cmd =
      lp_cmd->add_subcommand("solve", "Solve an LP by integrating the flow");
  solve_cmd->add_option("--problem", problem_ref, "Problem JSON or box3");
  solve_cmd->add_option("--x0", x0_text, "Start state (length n or n+m)");
  solve_cmd->add_option("--dt", lp_dt, "Step size");
  solve_cmd->add_option("--t-end", lp_t_end, "Integration budget");
  solve_cmd->add_option("--tol", lp_tol, "Residual tolerance");

  auto* hurwitz_cmd = lp_cmd->add_subcommand(
      "check-hurwitz", "Check the Jacobian at an equilibrium");
  hurwitz_cmd->add_option("--problem", problem_ref, "Problem JSON or box3");
  hurwitz_cmd->add_option("--at", at_text,
                          "Stacked state (default: solve first)");
  hurwitz_cmd->add_option("--dt", lp_dt, "Step size for the solve");
  hurwitz_cmd->add_option("--t-end", lp_t_end, "Integration budget");
  hurwitz_cmd->add_option("--tol", lp_tol, "Residual tolerance");

  uint64_t probe_seed = 1;
  int probe_count = 20;
  auto* probe_cmd = lp_cmd->add_subcommand(
      "probe", "Random instances: uniqueness vs Hurwitz evidence");
  probe_cmd->add_option("--seed", probe_seed, "Base seed");
  probe_cmd->add_option("--count", probe_count, "Instance count");

  std::optional<uint64_t> exp_seed;
  std::optional<int> exp_n;
  std::optional<std::string> exp_out;
  auto* lp_exp_cmd = lp_cmd->add_subcommand(
      "experiment", "Ensemble run on one problem with default settings");
  lp_exp_cmd->add_option("--problem", problem_ref, "Problem JSON or box3");
  lp_exp_cmd->add_option("--seed", exp_seed, "Ensemble seed");
  lp_exp_cmd->add_option("--n-trajectories", exp_n, "Ensemble size");
  lp_exp_cmd->add_option("--out", exp_out, "Artifact directory");

  // experiment (full config control)
  std::string config_path;
  std::optional<int> threads_arg;
  auto* exp_cmd =
      app.add_subcommand("experiment", "Ensemble run from a config file");
  exp_cmd->add_option("--config", config_path, "Experiment config JSON")
      ->required();
  exp_cmd->add_option("--out", exp_out, "Artifact directory (overrides config)");
  exp_cmd->add_option("--threads", threads_arg, "Worker count");

  // overlay
  std::string summary_path, overlay_mode = "same";
  std::optional<double> overlay_dist0;
  auto* overlay_cmd = app.add_subcommand(
      "overlay", "Join an experiment summary with bound columns");
  overlay_cmd->add_option("--summary", summary_path, "summary.json path")
      ->required();
  overlay_cmd->add_option("--profile", profile_path, "Profile JSON file")
      ->required();
  overlay_cmd->add_option("--mode", overlay_mode, "same|diff|iss");
  overlay_cmd->add_option("--rho", rho, "Contraction factor for diff mode");
  overlay_cmd->add_option("--dist0", overlay_dist0,
                          "Initial distance (default: mean_distance[0])");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (linexp_cmd->parsed()) return run_linexp_eval(params_path, grid);
    if (bound_cmd->parsed())
      return run_bound(bound_mode, profile_path, dist0, rho, grid);
    if (sim_cmd->parsed())
      return run_simulate(field_spec, x0_text, dt, t_end, scheme_name, stride);
    if (solve_cmd->parsed())
      return run_lp_solve(problem_ref, x0_text, lp_dt, lp_t_end, lp_tol);
    if (hurwitz_cmd->parsed())
      return run_lp_check_hurwitz(problem_ref, at_text, lp_dt, lp_t_end,
                                  lp_tol);
    if (probe_cmd->parsed()) return run_lp_probe(probe_seed, probe_count);
    if (lp_exp_cmd->parsed()) {
      clab::ExperimentConfig config;
      config.problem_tag = problem_ref;
      if (exp_seed) config.seed = *exp_seed;
      if (exp_n) config.n_trajectories = *exp_n;
      if (exp_out) config.out_dir = *exp_out;
      return run_experiment_cmd(config);
    }
    if (exp_cmd->parsed()) {
      auto config =
          clab::experiment_config_from_json(clab::load_json_file(config_path));
      if (exp_out) config.out_dir = *exp_out;
      if (threads_arg) config.threads = *threads_arg;
      return run_experiment_cmd(config);
    }
    if (overlay_cmd->parsed())
      return run_overlay(summary_path, profile_path, overlay_mode, rho,
                         overlay_dist0);
    std::cerr << "no subcommand selected\n";
    return kExitConfig;
  } catch (const clab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const clab::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const clab::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
