#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "clab/errors.hpp"
#include "clab/norms.hpp"

namespace clab {

// Time-varying vector field xdot = eval(t, x); `jacobian` and `input_eval`
// (xdot = input_eval(t, x, u)) may be left empty.
struct VectorFieldHandle {
  int dim = 0;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> eval;
  std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)> jacobian;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      input_eval;
};

enum class Scheme { Euler, Rk4 };

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  Scheme scheme = Scheme::Euler;
  double dt = 0.0;
};

// Raised when a state stops being finite; carries where it happened.
class IntegrationError : public NumericError {
 public:
  IntegrationError(long step, Eigen::VectorXd last_state);
  long step() const { return step_; }
  const Eigen::VectorXd& last_state() const { return last_state_; }

 private:
  long step_;
  Eigen::VectorXd last_state_;
};

// Fixed-step explicit integration on the uniform grid t_k = k*dt,
// k = 0..round(t_end/dt). Requires dt > 0 and t_end >= dt.
Trajectory integrate(const VectorFieldHandle& vf, const Eigen::VectorXd& x0,
                     double t_end, double dt, Scheme scheme);

// Same stepping, but hands each (k, t_k, x_k) to `observer` instead of
// storing states; useful for long ensembles.
void integrate_observe(
    const VectorFieldHandle& vf, const Eigen::VectorXd& x0, double t_end,
    double dt, Scheme scheme,
    const std::function<void(long, double, const Eigen::VectorXd&)>& observer);

// Central-difference Jacobian; h <= 0 picks 1e-6 * max(1, ||x||_inf).
Eigen::MatrixXd jacobian_fd(const VectorFieldHandle& vf, double t,
                            const Eigen::VectorXd& x, double h = 0.0);

// Forward-difference slopes (d_{k+1} - d_k) / dt; size is distances.size()-1.
std::vector<double> estimate_dini(const std::vector<double>& distances,
                                  double dt);

struct BallSpec {
  Eigen::VectorXd center;
  double radius = 1.0;
  NormSpec norm = NormSpec::l2();
};

// Uniform draw from the ball (exact for l1/l2/linf; weighted balls are the
// image of a plain-ball draw under Q^{-1}, which preserves uniformity).
Eigen::VectorXd sample_in_ball(std::mt19937_64& rng, const BallSpec& ball);

struct ContractionRateEstimate {
  double sup_mu = 0.0;          // max log norm of the Jacobian over samples
  Eigen::VectorXd argmax;       // sample attaining it
  int used_samples = 0;
  int excluded_kinks = 0;       // samples where one-sided Jacobians disagreed
};

// Samples the ball and reports sup mu(Df(x)) in ball.norm. Samples whose
// forward and backward difference Jacobians disagree by more than 1e-3 sit on
// a kink and are excluded. Uses vf.jacobian when available, central
// differences otherwise. Sampled estimate: a lower bound on the true sup.
ContractionRateEstimate empirical_contraction_rate(const VectorFieldHandle& vf,
                                                   const BallSpec& ball,
                                                   int samples, uint64_t seed);

struct RadiusSearch {
  double r_min = 1e-3;
  double r_max = 1.0;
  int steps = 30;
};

struct RadiusEstimate {
  bool found = false;
  double radius = 0.0;
  double sup_mu = 0.0;  // rate observed at `radius` (at r_min when !found)
};

// Bisects for the largest radius around x_star whose sampled contraction rate
// stays at or below -c_target. Sampling makes this an estimate, not a
// certificate. Requires ||f(x_star)||_inf <= 1e-9.
RadiusEstimate estimate_radius(const VectorFieldHandle& vf,
                               const Eigen::VectorXd& x_star,
                               const NormSpec& norm, double c_target,
                               const RadiusSearch& search, int samples,
                               uint64_t seed);

struct EnvelopeReport {
  double max_violation = 0.0;  // max over the grid of dist - envelope
  double argmax_t = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Checks dist(t_k) <= envelope(t_k) + tol along a trajectory. When tol is not
// given it defaults to 1e-6 plus a discretization allowance of ten times the
// largest single-step displacement.
EnvelopeReport verify_envelope(const Trajectory& traj,
                               const Eigen::VectorXd& x_star,
                               const NormSpec& norm,
                               const std::function<double(double)>& envelope,
                               std::optional<double> tol = std::nullopt);

// Scalar field xdot = -c * sat_d(x - x_star), the saturated decay building
// block; its input variant adds u to the right-hand side.
VectorFieldHandle make_saturated_field(double c, double d,
                                       double x_star = 0.0);

// xdot = A (x - x_star).
VectorFieldHandle make_linear_field(const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& x_star);

}  // namespace clab
