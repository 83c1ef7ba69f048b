#pragma once

#include <Eigen/Dense>
#include <random>

namespace testutil {

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline Eigen::VectorXd random_vector(std::mt19937_64& gen, int n,
                                     double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = gauss(gen);
  return v;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& gen, int rows, int cols,
                                     double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = gauss(gen);
  return M;
}

// Forward-Euler reference for the scalar saturated system
// xdot = -c * sat_d(x) + u(t); independent of the library integrators.
template <typename InputFn>
double euler_saturated(double c, double d, double x0, double t, double dt,
                       const InputFn& u) {
  double x = x0;
  const long steps = std::lround(t / dt);
  for (long k = 0; k < steps; ++k) {
    const double sat = std::clamp(x, -d, d);
    x += dt * (-c * sat + u(static_cast<double>(k) * dt));
  }
  return x;
}

inline double euler_saturated(double c, double d, double x0, double t,
                              double dt) {
  return euler_saturated(c, d, x0, t, dt, [](double) { return 0.0; });
}

}  // namespace testutil
