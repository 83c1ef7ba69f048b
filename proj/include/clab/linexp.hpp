#pragma once

namespace clab {

// Parameters of a linear-exponential decay curve: linear descent from q with
// slope -c_lin until the crossing time t_c, exponential decay at rate c_exp
// afterwards. Validity requires t_c < q / c_lin so the exponential branch
// starts at a positive value.
class LinExpParams {
 public:
  LinExpParams(double q, double c_lin, double c_exp, double t_c);

  double q() const { return q_; }
  double c_lin() const { return c_lin_; }
  double c_exp() const { return c_exp_; }
  double t_c() const { return t_c_; }

 private:
  double q_, c_lin_, c_exp_, t_c_;
};

// Evaluates the curve at t >= 0; t == t_c uses the linear branch (the two
// branches agree there).
double linexp_eval(double t, const LinExpParams& p);

// Scalar saturated system  xdot = -c_exp * sat_d(x) (+ input), x(0) = q > d,
// where sat_d clips to [-d, d]. With u_max = 0 the solution is exactly
// linear-exponential; with a disturbance bounded by u_max < d*c_exp only an
// upper bound is available.
class SaturatedOdeParams {
 public:
  SaturatedOdeParams(double c_exp, double d, double q, double u_max = 0.0);

  double c_exp() const { return c_exp_; }
  double d() const { return d_; }
  double q() const { return q_; }
  double u_max() const { return u_max_; }

 private:
  double c_exp_, d_, q_, u_max_;
};

// Exact solution for the disturbance-free case (requires u_max == 0):
// linexp with c_lin = d*c_exp and t_c = q/c_lin - 1/c_exp.
double saturated_ode_solution(double t, const SaturatedOdeParams& p);

// Upper bound under any |u(t)| <= u_max:
//   linexp(t; q, d*c_exp - u_max, c_exp, (q-d)/c_lin)
//   + 1_{t >= t_c} (1 - e^{-c_exp (t - t_c)}) u_max / c_exp.
double saturated_ode_input_bound(double t, const SaturatedOdeParams& p);

}  // namespace clab
