#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "clab/lp.hpp"

namespace clab {

// Ensemble run of the primal-dual flow: one base initial state drawn
// uniformly from [-5,5]^{n+m}, the rest Gaussian perturbations of it.
struct ExperimentConfig {
  uint64_t seed = 1;
  int n_trajectories = 150;
  double noise_std = 2.0;
  double dt = 1e-3;
  double t_end = 40.0;
  std::optional<double> gamma;  // overrides the problem's gamma when set

  // "box3", a path to a problem JSON, or an inline problem.
  std::string problem_tag = "box3";
  std::optional<LpProblem> problem_inline;

  std::optional<Eigen::VectorXd> x0;  // overrides the random base state
  std::optional<std::string> out_dir;
  bool write_trajectories = true;
  int csv_stride = 100;  // full resolution is ~8 MB per trajectory file
  double convergence_tol = 1e-6;
  int threads = 0;  // 0 = CONTRACTION_LAB_THREADS or hardware default
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
LpProblem resolve_problem(const ExperimentConfig& config);

struct ExperimentSummary {
  Eigen::VectorXd z_star;  // equilibrium reached from the origin
  double alpha = 0.0;      // spectral abscissa of the Jacobian at z_star
  bool hurwitz = false;
  std::vector<double> times;
  std::vector<double> mean_distance;  // l2 distance to z_star, per step
  std::vector<double> std_distance;   // population std, per step
  std::vector<Eigen::VectorXd> finals;
  std::vector<int> nonconverged;  // trajectory indices
  double final_linf_max = 0.0;    // max_i ||z_i(T) - z_star||_inf
  double dt = 0.0;
  double t_end = 0.0;
  uint64_t seed = 0;
};

// Integrates the ensemble (forward Euler, the scheme the flow is defined
// with), writes summary.json and traj_XXX.csv files when out_dir is set, and
// never aborts on non-converged trajectories — they are listed instead.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const LpProblem& prob);

nlohmann::json summary_to_json(const ExperimentSummary& summary);

// Joins an ensemble's distance statistics with one or more envelopes on the
// same grid: columns t, mean_dist, std_dist, then one column per envelope.
// Throws ConfigError when the trajectory set is empty.
void emit_bound_overlay(
    std::ostream& os, const std::vector<double>& times,
    const std::vector<double>& mean_dist, const std::vector<double>& std_dist,
    const std::vector<std::pair<std::string, std::function<double(double)>>>&
        envelopes);

// Worker budget: CONTRACTION_LAB_THREADS when set, hardware concurrency
// otherwise; `requested` > 0 wins over both.
int thread_budget(int requested = 0);

}  // namespace clab
