#include "clab/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace clab {

namespace {

// ceil() robust against arguments that are an ulp above an exact integer.
double stable_ceil(double v) {
  return std::ceil(v - 1e-12 * std::max(1.0, std::abs(v)));
}

void check_rho(double rho) {
  if (!(rho > 0.0) || !(rho < 1.0))
    throw std::invalid_argument("rho must lie in (0, 1)");
}

}  // namespace

DecayEnvelope DecayEnvelope::exponential(double prefactor, double rate,
                                         bool certified) {
  if (!(prefactor >= 0.0) || !(rate > 0.0))
    throw std::invalid_argument("exponential envelope needs prefactor >= 0, rate > 0");
  DecayEnvelope e;
  e.prefactor_ = prefactor;
  e.rate_ = rate;
  e.certified_ = certified;
  return e;
}

DecayEnvelope DecayEnvelope::linear_exponential(const LinExpParams& p,
                                                bool certified) {
  DecayEnvelope e;
  e.linexp_ = p;
  e.certified_ = certified;
  return e;
}

double DecayEnvelope::operator()(double t) const {
  if (linexp_) return linexp_eval(t, *linexp_);
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  return prefactor_ * std::exp(-rate_ * t);
}

double DecayEnvelope::prefactor() const {
  if (linexp_) throw std::logic_error("envelope is not pure-exponential");
  return prefactor_;
}

double DecayEnvelope::rate() const {
  if (linexp_) throw std::logic_error("envelope is not pure-exponential");
  return rate_;
}

const LinExpParams& DecayEnvelope::params() const {
  if (!linexp_) throw std::logic_error("envelope has no linexp parameters");
  return *linexp_;
}

ContractionProfile::ContractionProfile(NormSpec global, NormSpec local,
                                       double c_exp_, double r_,
                                       EquivalencePair equiv_,
                                       Eigen::VectorXd x_star_)
    : global_norm(std::move(global)),
      local_norm(std::move(local)),
      c_exp(c_exp_),
      r(r_),
      equiv(equiv_),
      x_star(std::move(x_star_)) {
  if (!(c_exp > 0.0) || !(r > 0.0))
    throw std::invalid_argument("c_exp and r must be positive");
  if (!(equiv.k_ab > 0.0) || !(equiv.k_ba > 0.0))
    throw std::invalid_argument("equivalence coefficients must be positive");
  if (norms_match() && equiv.ratio() != 1.0)
    throw std::invalid_argument("matching norms require unit equivalence");
  if (!norms_match() && !(equiv.ratio() >= 1.0))
    throw std::invalid_argument("equivalence ratio must be at least 1");
  for (const auto* s : {&global_norm, &local_norm})
    if (s->dim() && *s->dim() != x_star.size())
      throw std::invalid_argument("norm weight dimension does not match x_star");
}

ContractionProfile ContractionProfile::same_norm(NormSpec norm, double c_exp_,
                                                 double r_,
                                                 Eigen::VectorXd x_star_) {
  NormSpec copy = norm;
  return ContractionProfile(std::move(norm), std::move(copy), c_exp_, r_,
                            EquivalencePair{1.0, 1.0, true},
                            std::move(x_star_));
}

IssProfile::IssProfile(ContractionProfile base_, double L_u_, double u_max_)
    : base(std::move(base_)), L_u(L_u_), u_max(u_max_) {
  if (!base.norms_match())
    throw std::invalid_argument("ISS profile requires matching norms");
  if (!(L_u >= 0.0)) throw std::invalid_argument("L_u must be nonnegative");
  if (!(u_max >= 0.0) || !(u_max < base.r * base.c_exp))
    throw std::invalid_argument("u_max must lie in [0, r*c_exp)");
}

DecayEnvelope same_norm_bound(const ContractionProfile& profile,
                              double dist0) {
  if (!profile.norms_match())
    throw std::invalid_argument("same_norm_bound requires matching norms");
  if (!(dist0 >= 0.0)) throw std::invalid_argument("dist0 must be nonnegative");
  if (dist0 <= profile.r)
    return DecayEnvelope::exponential(dist0, profile.c_exp);
  const double c_lin = profile.c_exp * profile.r;
  return DecayEnvelope::linear_exponential(
      LinExpParams(dist0, c_lin, profile.c_exp, (dist0 - profile.r) / c_lin));
}

DecayEnvelope diff_norm_bound(const ContractionProfile& profile, double dist0,
                              double rho) {
  check_rho(rho);
  if (!(dist0 >= 0.0)) throw std::invalid_argument("dist0 must be nonnegative");
  const double k = profile.k();
  const bool certified = profile.equiv.minimal;
  if (dist0 <= profile.r)
    return DecayEnvelope::exponential(k * dist0, profile.c_exp, certified);
  const double log_k_rho = std::log(k / rho);
  const double T =
      stable_ceil((dist0 - profile.r) / ((1.0 - rho) * profile.r));
  const double c_lin = profile.c_exp * profile.r * (1.0 - rho) / log_k_rho;
  const double q = dist0 + profile.r * (1.0 - rho) * std::log(k) / log_k_rho;
  const double t_c = (T * log_k_rho + std::log(k)) / profile.c_exp;
  return DecayEnvelope::linear_exponential(
      LinExpParams(q, c_lin, profile.c_exp, t_c), certified);
}

double piecewise_bound_gB(double t, const ContractionProfile& profile,
                          double dist0, double rho) {
  check_rho(rho);
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  if (!(dist0 > profile.r))
    throw std::invalid_argument("piecewise bound requires dist0 > r");
  const double k = profile.k();
  const double c = profile.c_exp;
  const double r = profile.r;
  const double t_rho = std::log(k / rho) / c;  // per-stage dwell time
  const double T = stable_ceil((dist0 - r) / ((1.0 - rho) * r));
  const double stage = std::floor(t / t_rho);
  if (stage >= T) {
    const double plateau = dist0 - T * r * (1.0 - rho);
    return std::min(plateau, k * plateau * std::exp(-c * (t - T * t_rho)));
  }
  const double plateau = dist0 - stage * r * (1.0 - rho);
  const double dip =
      plateau - r * (1.0 - k * std::exp(-c * (t - stage * t_rho)));
  return std::min(plateau, dip);
}

double iss_bound(double t, const IssProfile& profile, double dist0) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  if (!(dist0 > profile.base.r))
    throw std::invalid_argument("iss_bound requires dist0 > r");
  const double c = profile.base.c_exp;
  const double c_lin = profile.base.r * c - profile.u_max;
  const double t_c = (dist0 - profile.base.r) / c_lin;
  LinExpParams le(dist0, c_lin, c, t_c);
  double value = linexp_eval(t, le);
  if (t >= t_c)
    value += (profile.L_u / c) * (1.0 - std::exp(-c * t)) * profile.u_max;
  return value;
}

double rho_contraction_time(double c, double rho) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  check_rho(rho);
  return std::log(1.0 / rho) / c;
}

double rho_contraction_time_cross_norm(double c, double rho, double k) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(k >= 1.0)) throw std::invalid_argument("k must be at least 1");
  check_rho(rho);
  return std::log(k / rho) / c;
}

BallInclusionRadii ball_inclusion_radii(const NormSpec& alpha,
                                        const NormSpec& beta, double r,
                                        int n) {
  if (!(r >= 0.0)) throw std::invalid_argument("r must be nonnegative");
  EquivalencePair eq = equivalence_coefficients(alpha, beta, n);
  return {r / eq.k_ab, r * eq.k_ba};
}

RhoChoice optimize_rho(const ContractionProfile& profile, double dist0,
                       int grid_points) {
  if (grid_points < 1) throw std::invalid_argument("grid must be non-empty");
  if (!(dist0 > profile.r))
    throw std::invalid_argument("rho only matters for dist0 > r");
  std::optional<RhoChoice> best;
  for (int i = 1; i <= grid_points; ++i) {
    const double rho = static_cast<double>(i) / (grid_points + 1);
    DecayEnvelope env = diff_norm_bound(profile, dist0, rho);
    if (!best || env.params().t_c() < best->params.t_c())
      best = RhoChoice{rho, env.params()};
  }
  return *best;
}

}  // namespace clab
