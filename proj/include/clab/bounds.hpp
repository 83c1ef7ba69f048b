#pragma once

#include <Eigen/Dense>
#include <optional>

#include "clab/linexp.hpp"
#include "clab/norms.hpp"

namespace clab {

// Convergence envelope: either a pure exponential prefactor*e^{-rate*t}
// (initial condition already inside the strong-contraction ball) or a
// linear-exponential curve. `certified` is false when the envelope was built
// from sampled (non-minimal) equivalence coefficients.
class DecayEnvelope {
 public:
  static DecayEnvelope exponential(double prefactor, double rate,
                                   bool certified = true);
  static DecayEnvelope linear_exponential(const LinExpParams& p,
                                          bool certified = true);

  double operator()(double t) const;
  bool is_exponential() const { return !linexp_.has_value(); }
  double prefactor() const;
  double rate() const;
  const LinExpParams& params() const;
  bool certified() const { return certified_; }

 private:
  DecayEnvelope() = default;
  std::optional<LinExpParams> linexp_;
  double prefactor_ = 0.0;
  double rate_ = 0.0;
  bool certified_ = true;
};

// A system that is weakly contracting everywhere in `global_norm` and
// c_exp-strongly contracting in `local_norm` on the ball of radius r (in the
// global norm) around the equilibrium x_star. `equiv` relates the two norms:
// ||.||_local <= k_ab ||.||_global and ||.||_global <= k_ba ||.||_local, so
// equiv.ratio() is the blow-up factor k incurred by a round trip.
struct ContractionProfile {
  NormSpec global_norm;
  NormSpec local_norm;
  double c_exp;
  double r;
  EquivalencePair equiv;
  Eigen::VectorXd x_star;

  ContractionProfile(NormSpec global, NormSpec local, double c_exp_, double r_,
                     EquivalencePair equiv_, Eigen::VectorXd x_star_);

  static ContractionProfile same_norm(NormSpec norm, double c_exp_, double r_,
                                      Eigen::VectorXd x_star_);

  bool norms_match() const { return global_norm.same_as(local_norm); }
  double k() const { return equiv.ratio(); }
};

// Adds a bounded disturbance channel to a same-norm profile: the field is
// L_u-Lipschitz in the input, and inputs are bounded by u_max < r * c_exp.
struct IssProfile {
  ContractionProfile base;
  double L_u;
  double u_max;

  IssProfile(ContractionProfile base_, double L_u_, double u_max_);
};

// Envelope for matching global/local norms. Inside the ball (dist0 <= r) the
// decay is dist0*e^{-c_exp t}; outside it is linexp with q = dist0,
// c_lin = c_exp * r, t_c = (q - r) / c_lin.
DecayEnvelope same_norm_bound(const ContractionProfile& profile, double dist0);

// Envelope for distinct norms, valid for any rho in (0,1). Inside the ball the
// decay is k*dist0*e^{-c_exp t}; outside, with T = ceil((dist0-r)/((1-rho)r)):
//   c_lin = c_exp r (1-rho) / ln(k/rho)
//   q     = dist0 + r (1-rho) ln(k) / ln(k/rho)
//   t_c   = T ln(k/rho) / c_exp + ln(k) / c_exp.
DecayEnvelope diff_norm_bound(const ContractionProfile& profile, double dist0,
                              double rho);

// The piecewise staircase bound underlying diff_norm_bound (requires
// dist0 > r); never exceeds the linexp envelope built from the same data.
double piecewise_bound_gB(double t, const ContractionProfile& profile,
                          double dist0, double rho);

// Disturbed same-norm envelope (requires dist0 > r):
//   linexp(t; dist0, r*c_exp - u_max, c_exp, (dist0-r)/c_lin)
//   + 1_{t >= t_c} (L_u / c_exp) (1 - e^{-c_exp t}) u_max.
double iss_bound(double t, const IssProfile& profile, double dist0);

// Time for distances to shrink by a factor rho under rate-c exponential decay,
// and its cross-norm variant paying the equivalence ratio k once.
double rho_contraction_time(double c, double rho);
double rho_contraction_time_cross_norm(double c, double rho, double k);

struct BallInclusionRadii {
  double inner;  // B_beta(x, inner) is contained in B_alpha(x, r)
  double outer;  // B_alpha(x, r) is contained in B_beta(x, outer)
};

BallInclusionRadii ball_inclusion_radii(const NormSpec& alpha,
                                        const NormSpec& beta, double r, int n);

struct RhoChoice {
  double rho;
  LinExpParams params;
};

// Sweeps rho over an evenly spaced grid in (0,1) and returns the grid point
// whose diff_norm_bound has the earliest crossing time t_c. Convenience
// helper; any rho in (0,1) yields a valid envelope.
RhoChoice optimize_rho(const ContractionProfile& profile, double dist0,
                       int grid_points = 99);

}  // namespace clab
