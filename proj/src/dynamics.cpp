#include "clab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace clab {

namespace {

long step_count(double t_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const long n = std::lround(t_end / dt);
  if (n < 1 || !(t_end >= dt * (1.0 - 1e-9)))
    throw std::invalid_argument("t_end must cover at least one step");
  return n;
}

Eigen::VectorXd step_state(const VectorFieldHandle& vf, double t,
                           const Eigen::VectorXd& x, double dt,
                           Scheme scheme) {
  if (scheme == Scheme::Euler) return x + dt * vf.eval(t, x);
  const Eigen::VectorXd k1 = vf.eval(t, x);
  const Eigen::VectorXd k2 = vf.eval(t + 0.5 * dt, x + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = vf.eval(t + 0.5 * dt, x + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = vf.eval(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double default_fd_step(const Eigen::VectorXd& x) {
  const double scale = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  return 1e-6 * std::max(1.0, scale);
}

}  // namespace

IntegrationError::IntegrationError(long step, Eigen::VectorXd last_state)
    : NumericError("integration aborted: non-finite state at step " +
                   std::to_string(step)),
      step_(step),
      last_state_(std::move(last_state)) {}

void integrate_observe(
    const VectorFieldHandle& vf, const Eigen::VectorXd& x0, double t_end,
    double dt, Scheme scheme,
    const std::function<void(long, double, const Eigen::VectorXd&)>& observer) {
  if (!vf.eval) throw std::invalid_argument("vector field has no eval");
  if (vf.dim != x0.size())
    throw std::invalid_argument("initial state does not match field dimension");
  const long n_steps = step_count(t_end, dt);
  Eigen::VectorXd x = x0;
  observer(0, 0.0, x);
  for (long k = 1; k <= n_steps; ++k) {
    x = step_state(vf, static_cast<double>(k - 1) * dt, x, dt, scheme);
    if (!x.allFinite()) throw IntegrationError(k, x);
    observer(k, static_cast<double>(k) * dt, x);
  }
}

Trajectory integrate(const VectorFieldHandle& vf, const Eigen::VectorXd& x0,
                     double t_end, double dt, Scheme scheme) {
  Trajectory traj;
  traj.scheme = scheme;
  traj.dt = dt;
  const long n_steps = step_count(t_end, dt);
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  integrate_observe(vf, x0, t_end, dt, scheme,
                    [&](long, double t, const Eigen::VectorXd& x) {
                      traj.times.push_back(t);
                      traj.states.push_back(x);
                    });
  return traj;
}

Eigen::MatrixXd jacobian_fd(const VectorFieldHandle& vf, double t,
                            const Eigen::VectorXd& x, double h) {
  if (!vf.eval) throw std::invalid_argument("vector field has no eval");
  if (h <= 0.0) h = default_fd_step(x);
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd J(n, n);
  Eigen::VectorXd xp = x, xm = x;
  for (int j = 0; j < n; ++j) {
    xp(j) = x(j) + h;
    xm(j) = x(j) - h;
    J.col(j) = (vf.eval(t, xp) - vf.eval(t, xm)) / (2.0 * h);
    xp(j) = x(j);
    xm(j) = x(j);
  }
  return J;
}

std::vector<double> estimate_dini(const std::vector<double>& distances,
                                  double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (distances.size() < 2)
    throw std::invalid_argument("need at least two samples");
  std::vector<double> slopes(distances.size() - 1);
  for (size_t k = 0; k + 1 < distances.size(); ++k)
    slopes[k] = (distances[k + 1] - distances[k]) / dt;
  return slopes;
}

Eigen::VectorXd sample_in_ball(std::mt19937_64& rng, const BallSpec& ball) {
  if (!(ball.radius >= 0.0))
    throw std::invalid_argument("radius must be nonnegative");
  const int n = static_cast<int>(ball.center.size());
  if (n == 0) throw std::invalid_argument("ball center is empty");
  if (ball.norm.dim() && *ball.norm.dim() != n)
    throw std::invalid_argument("norm weight does not match ball dimension");

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::exponential_distribution<double> expo(1.0);

  Eigen::VectorXd y(n);
  const PNorm p = ball.norm.p();
  switch (p) {
    case PNorm::Two: {
      for (int i = 0; i < n; ++i) y(i) = gauss(rng);
      y.normalize();
      y *= ball.radius * std::pow(unit(rng), 1.0 / n);
      break;
    }
    case PNorm::One: {
      // iid exponential magnitudes with random signs land uniformly on the
      // l1 sphere after normalization.
      for (int i = 0; i < n; ++i)
        y(i) = expo(rng) * (unit(rng) < 0.5 ? -1.0 : 1.0);
      y /= y.lpNorm<1>();
      y *= ball.radius * std::pow(unit(rng), 1.0 / n);
      break;
    }
    case PNorm::Inf: {
      for (int i = 0; i < n; ++i) y(i) = sym(rng) * ball.radius;
      break;
    }
  }
  if (ball.norm.is_weighted()) y = ball.norm.weight_inverse() * y;
  return ball.center + y;
}

ContractionRateEstimate empirical_contraction_rate(const VectorFieldHandle& vf,
                                                   const BallSpec& ball,
                                                   int samples,
                                                   uint64_t seed) {
  if (!vf.eval) throw std::invalid_argument("vector field has no eval");
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  std::mt19937_64 rng(seed);
  ContractionRateEstimate out;
  out.sup_mu = -std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(ball.center.size());
  Eigen::MatrixXd Jf(n, n), Jb(n, n);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = sample_in_ball(rng, ball);
    const double h = default_fd_step(x);
    const Eigen::VectorXd f0 = vf.eval(0.0, x);
    Eigen::VectorXd xs = x;
    for (int j = 0; j < n; ++j) {
      xs(j) = x(j) + h;
      Jf.col(j) = (vf.eval(0.0, xs) - f0) / h;
      xs(j) = x(j) - h;
      Jb.col(j) = (f0 - vf.eval(0.0, xs)) / h;
      xs(j) = x(j);
    }
    if ((Jf - Jb).cwiseAbs().maxCoeff() > 1e-3) {
      ++out.excluded_kinks;
      continue;
    }
    const Eigen::MatrixXd J =
        vf.jacobian ? vf.jacobian(0.0, x) : Eigen::MatrixXd(0.5 * (Jf + Jb));
    const double mu = log_norm(J, ball.norm);
    ++out.used_samples;
    if (mu > out.sup_mu) {
      out.sup_mu = mu;
      out.argmax = x;
    }
  }
  if (out.used_samples == 0)
    throw NumericError("all samples were kink-adjacent; nothing to estimate");
  return out;
}

RadiusEstimate estimate_radius(const VectorFieldHandle& vf,
                               const Eigen::VectorXd& x_star,
                               const NormSpec& norm, double c_target,
                               const RadiusSearch& search, int samples,
                               uint64_t seed) {
  if (!(c_target > 0.0)) throw std::invalid_argument("c_target must be positive");
  if (!(search.r_min > 0.0) || !(search.r_max > search.r_min))
    throw std::invalid_argument("need 0 < r_min < r_max");
  if (vf.eval(0.0, x_star).lpNorm<Eigen::Infinity>() > 1e-9)
    throw std::invalid_argument("x_star is not an equilibrium");

  auto rate_at = [&](double r) {
    return empirical_contraction_rate(vf, {x_star, r, norm}, samples, seed)
        .sup_mu;
  };
  const double at_min = rate_at(search.r_min);
  if (at_min > -c_target) return {false, 0.0, at_min};
  const double at_max = rate_at(search.r_max);
  if (at_max <= -c_target) return {true, search.r_max, at_max};

  double lo = search.r_min, hi = search.r_max, mu_lo = at_min;
  for (int i = 0; i < search.steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double mu = rate_at(mid);
    if (mu <= -c_target) {
      lo = mid;
      mu_lo = mu;
    } else {
      hi = mid;
    }
  }
  return {true, lo, mu_lo};
}

EnvelopeReport verify_envelope(const Trajectory& traj,
                               const Eigen::VectorXd& x_star,
                               const NormSpec& norm,
                               const std::function<double(double)>& envelope,
                               std::optional<double> tol) {
  if (traj.states.empty()) throw std::invalid_argument("empty trajectory");
  EnvelopeReport report;
  report.max_violation = -std::numeric_limits<double>::infinity();
  double max_step = 0.0;
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const double dist = vector_norm(traj.states[k] - x_star, norm);
    const double gap = dist - envelope(traj.times[k]);
    if (gap > report.max_violation) {
      report.max_violation = gap;
      report.argmax_t = traj.times[k];
    }
    if (k + 1 < traj.states.size())
      max_step = std::max(
          max_step, vector_norm(traj.states[k + 1] - traj.states[k], norm));
  }
  report.tol = tol ? *tol : 1e-6 + 10.0 * max_step;
  report.pass = report.max_violation <= report.tol;
  return report;
}

VectorFieldHandle make_saturated_field(double c, double d, double x_star) {
  if (!(c > 0.0) || !(d > 0.0))
    throw std::invalid_argument("c and d must be positive");
  VectorFieldHandle vf;
  vf.dim = 1;
  auto sat = [d](double v) { return std::clamp(v, -d, d); };
  vf.eval = [c, sat, x_star](double, const Eigen::VectorXd& x) {
    Eigen::VectorXd out(1);
    out(0) = -c * sat(x(0) - x_star);
    return out;
  };
  vf.jacobian = [c, d, x_star](double, const Eigen::VectorXd& x) {
    Eigen::MatrixXd J(1, 1);
    J(0, 0) = std::abs(x(0) - x_star) <= d ? -c : 0.0;
    return J;
  };
  vf.input_eval = [c, sat, x_star](double, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& u) {
    Eigen::VectorXd out(1);
    out(0) = -c * sat(x(0) - x_star) + u(0);
    return out;
  };
  return vf;
}

VectorFieldHandle make_linear_field(const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& x_star) {
  if (A.rows() != A.cols() || A.rows() != x_star.size())
    throw std::invalid_argument("A must be square and match x_star");
  VectorFieldHandle vf;
  vf.dim = static_cast<int>(A.rows());
  vf.eval = [A, x_star](double, const Eigen::VectorXd& x) {
    return Eigen::VectorXd(A * (x - x_star));
  };
  vf.jacobian = [A](double, const Eigen::VectorXd&) { return A; };
  vf.input_eval = [A, x_star](double, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u) {
    return Eigen::VectorXd(A * (x - x_star) + u);
  };
  return vf;
}

}  // namespace clab
