#include "clab/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include "clab/serialization.hpp"

namespace clab {

namespace {

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

int thread_budget(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CONTRACTION_LAB_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.seed = j.value("seed", cfg.seed);
    cfg.n_trajectories = j.value("n_trajectories", cfg.n_trajectories);
    cfg.noise_std = j.value("noise_std", cfg.noise_std);
    cfg.dt = j.value("dt", cfg.dt);
    cfg.t_end = j.value("t_end", cfg.t_end);
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
    if (j.contains("problem")) {
      if (j.at("problem").is_string())
        cfg.problem_tag = j.at("problem").get<std::string>();
      else
        cfg.problem_inline = problem_from_json(j.at("problem"));
    }
    if (j.contains("x0")) {
      const auto& arr = j.at("x0");
      Eigen::VectorXd x0(arr.size());
      for (size_t i = 0; i < arr.size(); ++i) x0(i) = arr[i].get<double>();
      cfg.x0 = x0;
    }
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    cfg.write_trajectories =
        j.value("write_trajectories", cfg.write_trajectories);
    cfg.csv_stride = j.value("csv_stride", cfg.csv_stride);
    cfg.convergence_tol = j.value("convergence_tol", cfg.convergence_tol);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }
  if (cfg.n_trajectories < 1)
    throw ConfigError("n_trajectories must be positive");
  if (!(cfg.noise_std >= 0.0)) throw ConfigError("noise_std must be >= 0");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_end >= cfg.dt)) throw ConfigError("t_end must be at least dt");
  if (!(cfg.convergence_tol > 0.0))
    throw ConfigError("convergence_tol must be positive");
  if (cfg.gamma && !(*cfg.gamma > 0.0))
    throw ConfigError("gamma must be positive");
  if (cfg.csv_stride < 1) throw ConfigError("csv_stride must be positive");
  return cfg;
}

LpProblem resolve_problem(const ExperimentConfig& config) {
  LpProblem prob = [&] {
    if (config.problem_inline) return *config.problem_inline;
    if (config.problem_tag == "box3")
      return box3_problem(config.gamma.value_or(0.5));
    return problem_from_json(load_json_file(config.problem_tag));
  }();
  if (config.gamma) prob.gamma = *config.gamma;
  return prob;
}

ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const LpProblem& prob) {
  const int n = prob.n(), m = prob.m(), dim = n + m;
  const int count = config.n_trajectories;

  // All randomness is drawn up front, in a fixed order, so the integration
  // can run on any number of workers without changing results.
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> box(-5.0, 5.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd base(dim);
  for (int i = 0; i < dim; ++i) base(i) = box(rng);
  if (config.x0) {
    if (config.x0->size() != dim)
      throw ConfigError("x0 dimension does not match problem");
    base = *config.x0;
  }
  std::vector<Eigen::VectorXd> starts(count);
  starts[0] = base;
  for (int i = 1; i < count; ++i) {
    starts[i] = base;
    for (int d = 0; d < dim; ++d) starts[i](d) += config.noise_std * gauss(rng);
  }

  // Reference equilibrium: integrate from the origin until the flow is
  // essentially stationary.
  const LpSolveResult ref = solve_lp_by_integration(
      prob, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(m), config.dt,
      std::max(4.0 * config.t_end, 160.0), 1e-10);
  const Eigen::VectorXd z_star = ref.z.stacked();

  const VectorFieldHandle field = make_lp_field(prob);
  const long n_steps = std::lround(config.t_end / config.dt);

  ExperimentSummary summary;
  summary.z_star = z_star;
  summary.dt = config.dt;
  summary.t_end = config.t_end;
  summary.seed = config.seed;
  summary.times.resize(n_steps + 1);
  for (long k = 0; k <= n_steps; ++k)
    summary.times[k] = static_cast<double>(k) * config.dt;
  summary.finals.resize(count);

  std::optional<std::filesystem::path> out_dir;
  if (config.out_dir) {
    out_dir = *config.out_dir;
    std::filesystem::create_directories(*out_dir);
  }

  std::vector<std::vector<double>> distance(count);
  std::vector<char> converged(count, 0);
  parallel_for(count, thread_budget(config.threads), [&](int i) {
    auto& dist = distance[i];
    dist.resize(n_steps + 1);
    std::ofstream csv;
    if (out_dir && config.write_trajectories) {
      char name[32];
      std::snprintf(name, sizeof(name), "traj_%03d.csv", i);
      csv.open(*out_dir / name);
      csv << 't';
      for (int d = 0; d < dim; ++d) csv << ",x" << (d + 1);
      csv << '\n';
    }
    Eigen::VectorXd final_state;
    integrate_observe(field, starts[i], config.t_end, config.dt, Scheme::Euler,
                      [&](long k, double t, const Eigen::VectorXd& z) {
                        dist[k] = (z - z_star).norm();
                        if (csv.is_open() &&
                            (k % config.csv_stride == 0 || k == n_steps)) {
                          csv << format_double(t);
                          for (int d = 0; d < dim; ++d)
                            csv << ',' << format_double(z(d));
                          csv << '\n';
                        }
                        if (k == n_steps) final_state = z;
                      });
    summary.finals[i] = final_state;
    const PrimalDualState dz =
        f_lp(PrimalDualState::split(prob, final_state), prob);
    converged[i] = std::max(dz.x.lpNorm<Eigen::Infinity>(),
                            dz.lambda.lpNorm<Eigen::Infinity>()) <=
                   config.convergence_tol;
  });

  summary.mean_distance.resize(n_steps + 1);
  summary.std_distance.resize(n_steps + 1);
  for (long k = 0; k <= n_steps; ++k) {
    double mean = 0.0;
    for (int i = 0; i < count; ++i) mean += distance[i][k];
    mean /= count;
    double var = 0.0;
    for (int i = 0; i < count; ++i) {
      const double d = distance[i][k] - mean;
      var += d * d;
    }
    summary.mean_distance[k] = mean;
    summary.std_distance[k] = std::sqrt(var / count);
  }
  for (int i = 0; i < count; ++i) {
    if (!converged[i]) summary.nonconverged.push_back(i);
    summary.final_linf_max =
        std::max(summary.final_linf_max,
                 (summary.finals[i] - z_star).lpNorm<Eigen::Infinity>());
  }

  const HurwitzReport hw =
      check_hurwitz(jacobian_f_lp(PrimalDualState::split(prob, z_star), prob).J);
  summary.alpha = hw.alpha;
  summary.hurwitz = hw.hurwitz;

  if (out_dir) {
    std::ofstream os(*out_dir / "summary.json");
    os << summary_to_json(summary).dump(2) << '\n';
  }
  return summary;
}

nlohmann::json summary_to_json(const ExperimentSummary& summary) {
  nlohmann::json z = nlohmann::json::array();
  for (Eigen::Index i = 0; i < summary.z_star.size(); ++i)
    z.push_back(summary.z_star(i));
  nlohmann::json finals = nlohmann::json::array();
  for (const auto& f : summary.finals) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index i = 0; i < f.size(); ++i) row.push_back(f(i));
    finals.push_back(std::move(row));
  }
  return {{"z_star", z},
          {"alpha", summary.alpha},
          {"hurwitz", summary.hurwitz},
          {"mean_distance", summary.mean_distance},
          {"std_distance", summary.std_distance},
          {"finals", finals},
          {"nonconverged", summary.nonconverged},
          {"final_linf_max", summary.final_linf_max},
          {"dt", summary.dt},
          {"t_end", summary.t_end},
          {"seed", summary.seed},
          {"n_trajectories", summary.finals.size()}};
}

void emit_bound_overlay(
    std::ostream& os, const std::vector<double>& times,
    const std::vector<double>& mean_dist, const std::vector<double>& std_dist,
    const std::vector<std::pair<std::string, std::function<double(double)>>>&
        envelopes) {
  if (times.empty()) throw ConfigError("empty trajectory set");
  if (mean_dist.size() != times.size() || std_dist.size() != times.size())
    throw ConfigError("overlay series lengths do not match");
  os << "t,mean_dist,std_dist";
  for (const auto& [name, fn] : envelopes) os << ',' << name;
  os << '\n';
  for (size_t k = 0; k < times.size(); ++k) {
    os << format_double(times[k]) << ',' << format_double(mean_dist[k]) << ','
       << format_double(std_dist[k]);
    for (const auto& [name, fn] : envelopes)
      os << ',' << format_double(fn(times[k]));
    os << '\n';
  }
}

}  // namespace clab
