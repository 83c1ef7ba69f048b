#include "clab/linexp.hpp"

#include <cmath>
#include <stdexcept>

namespace clab {

LinExpParams::LinExpParams(double q, double c_lin, double c_exp, double t_c)
    : q_(q), c_lin_(c_lin), c_exp_(c_exp), t_c_(t_c) {
  if (!(q > 0.0) || !(c_lin > 0.0) || !(c_exp > 0.0))
    throw std::invalid_argument("q, c_lin, c_exp must be positive");
  if (!(t_c >= 0.0)) throw std::invalid_argument("t_c must be nonnegative");
  if (!(t_c < q / c_lin))
    throw std::invalid_argument("t_c must be below q / c_lin");
}

double linexp_eval(double t, const LinExpParams& p) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  if (t <= p.t_c()) return p.q() - p.c_lin() * t;
  return (p.q() - p.c_lin() * p.t_c()) * std::exp(-p.c_exp() * (t - p.t_c()));
}

SaturatedOdeParams::SaturatedOdeParams(double c_exp, double d, double q,
                                       double u_max)
    : c_exp_(c_exp), d_(d), q_(q), u_max_(u_max) {
  if (!(c_exp > 0.0) || !(d > 0.0))
    throw std::invalid_argument("c_exp and d must be positive");
  if (!(q > d)) throw std::invalid_argument("q must exceed d");
  if (!(u_max >= 0.0) || !(u_max < d * c_exp))
    throw std::invalid_argument("u_max must lie in [0, d*c_exp)");
}

double saturated_ode_solution(double t, const SaturatedOdeParams& p) {
  if (p.u_max() != 0.0)
    throw std::invalid_argument("exact solution requires u_max == 0");
  const double c_lin = p.d() * p.c_exp();
  LinExpParams le(p.q(), c_lin, p.c_exp(), p.q() / c_lin - 1.0 / p.c_exp());
  return linexp_eval(t, le);
}

double saturated_ode_input_bound(double t, const SaturatedOdeParams& p) {
  const double c_lin = p.d() * p.c_exp() - p.u_max();
  const double t_c = (p.q() - p.d()) / c_lin;
  LinExpParams le(p.q(), c_lin, p.c_exp(), t_c);
  double value = linexp_eval(t, le);
  if (t >= t_c)
    value += (1.0 - std::exp(-p.c_exp() * (t - t_c))) * p.u_max() / p.c_exp();
  return value;
}

}  // namespace clab
