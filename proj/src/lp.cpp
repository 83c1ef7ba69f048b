#include "clab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace clab {

namespace {

constexpr double kKinkTol = 1e-9;

Eigen::VectorXd relu(const Eigen::VectorXd& v) {
  return v.cwiseMax(0.0);
}

// Active-set combinations in lexicographic order.
bool next_combination(std::vector<int>& idx, int m) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < m - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

LpProblem::LpProblem(Eigen::VectorXd c_, Eigen::MatrixXd A_, Eigen::VectorXd b_,
                     double gamma_)
    : c(std::move(c_)), A(std::move(A_)), b(std::move(b_)), gamma(gamma_) {
  if (A.rows() == 0 || A.cols() == 0)
    throw std::invalid_argument("constraint matrix must be non-empty");
  if (c.size() != A.cols() || b.size() != A.rows())
    throw std::invalid_argument("c/b dimensions do not match A");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
}

LpProblem box3_problem(double gamma) {
  Eigen::MatrixXd A(6, 3);
  A << Eigen::MatrixXd::Identity(3, 3), -Eigen::MatrixXd::Identity(3, 3);
  return LpProblem(Eigen::VectorXd::Ones(3), A, Eigen::VectorXd::Ones(6),
                   gamma);
}

Eigen::VectorXd PrimalDualState::stacked() const {
  Eigen::VectorXd z(x.size() + lambda.size());
  z << x, lambda;
  return z;
}

PrimalDualState PrimalDualState::split(const LpProblem& prob,
                                       const Eigen::VectorXd& z) {
  if (z.size() != prob.n() + prob.m())
    throw std::invalid_argument("stacked state has wrong dimension");
  return {z.head(prob.n()), z.tail(prob.m())};
}

Eigen::VectorXd moreau_gradient_box(const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& b, double gamma) {
  if (y.size() != b.size())
    throw std::invalid_argument("y and b dimensions differ");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  return relu(y - b) / gamma;
}

PrimalDualState f_lp(const PrimalDualState& state, const LpProblem& prob) {
  if (state.x.size() != prob.n() || state.lambda.size() != prob.m())
    throw std::invalid_argument("state dimensions do not match problem");
  const Eigen::VectorXd active =
      relu(prob.A * state.x + prob.gamma * state.lambda - prob.b);
  return {-prob.c - prob.A.transpose() * active / prob.gamma,
          -prob.gamma * state.lambda + active};
}

LpJacobian jacobian_f_lp(const PrimalDualState& state, const LpProblem& prob) {
  if (state.x.size() != prob.n() || state.lambda.size() != prob.m())
    throw std::invalid_argument("state dimensions do not match problem");
  const int n = prob.n(), m = prob.m();
  const Eigen::VectorXd y =
      prob.A * state.x + prob.gamma * state.lambda - prob.b;
  LpJacobian out;
  Eigen::VectorXd g(m);
  for (int i = 0; i < m; ++i) {
    g(i) = y(i) > 0.0 ? 1.0 : 0.0;  // derivative of relu; 0 at the kink
    if (std::abs(y(i)) <= kKinkTol) out.kink_rows.push_back(i);
  }
  const Eigen::MatrixXd GA = g.asDiagonal() * prob.A;
  out.J.resize(n + m, n + m);
  out.J.topLeftCorner(n, n) = -prob.A.transpose() * GA / prob.gamma;
  out.J.topRightCorner(n, m) = -GA.transpose();
  out.J.bottomLeftCorner(m, n) = GA;
  out.J.bottomRightCorner(m, m) =
      (-prob.gamma * (Eigen::VectorXd::Ones(m) - g)).asDiagonal();
  return out;
}

double spectral_abscissa(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols() || M.rows() == 0)
    throw std::invalid_argument("matrix must be square and non-empty");
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  if (es.info() != Eigen::Success)
    throw NumericError("eigensolve failed");
  return es.eigenvalues().real().maxCoeff();
}

HurwitzReport check_hurwitz(const Eigen::MatrixXd& M, double eps) {
  const double alpha = spectral_abscissa(M);
  return {alpha < -eps, alpha};
}

WeakContractionReport weak_contraction_certificate(const LpProblem& prob,
                                                   int samples,
                                                   uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 10.0);
  const int n = prob.n(), m = prob.m();
  WeakContractionReport report;
  report.max_mu2 = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    PrimalDualState z{Eigen::VectorXd(n), Eigen::VectorXd(m)};
    for (int i = 0; i < n; ++i) z.x(i) = gauss(rng);
    for (int i = 0; i < m; ++i) z.lambda(i) = gauss(rng);
    const LpJacobian jac = jacobian_f_lp(z, prob);
    if (!jac.kink_rows.empty()) {
      ++report.kink_skipped;
      continue;
    }
    const Eigen::MatrixXd sym = 0.5 * (jac.J + jac.J.transpose());
    report.max_offdiag_sym =
        std::max({report.max_offdiag_sym,
                  sym.topRightCorner(n, m).cwiseAbs().maxCoeff(),
                  sym.bottomLeftCorner(m, n).cwiseAbs().maxCoeff()});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym,
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericError("symmetric eigensolve failed");
    report.max_mu2 = std::max(report.max_mu2, es.eigenvalues().maxCoeff());
    ++report.used_samples;
  }
  report.pass = report.used_samples > 0 && report.max_mu2 <= 1e-9;
  return report;
}

double KktResidual::max_residual() const {
  return std::max({stationarity, primal, dual, complementarity});
}

KktResidual kkt_residual(const PrimalDualState& state, const LpProblem& prob) {
  if (state.x.size() != prob.n() || state.lambda.size() != prob.m())
    throw std::invalid_argument("state dimensions do not match problem");
  const Eigen::VectorXd slack = prob.A * state.x - prob.b;
  KktResidual res;
  res.stationarity = (prob.c + prob.A.transpose() * state.lambda)
                         .lpNorm<Eigen::Infinity>();
  res.primal = relu(slack).lpNorm<Eigen::Infinity>();
  res.dual = relu(-state.lambda).lpNorm<Eigen::Infinity>();
  res.complementarity =
      state.lambda.cwiseProduct(slack).cwiseAbs().maxCoeff();
  return res;
}

LpSolveResult solve_lp_by_integration(const LpProblem& prob,
                                      const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& lambda0, double dt,
                                      double t_end, double tol) {
  if (x0.size() != prob.n() || lambda0.size() != prob.m())
    throw std::invalid_argument("initial state dimensions do not match");
  if (!(dt > 0.0) || !(t_end >= dt))
    throw std::invalid_argument("need dt > 0 and t_end >= dt");
  PrimalDualState z{x0, lambda0};
  const long n_steps = std::lround(t_end / dt);
  LpSolveResult out;
  long k = 0;
  for (; k < n_steps; ++k) {
    const PrimalDualState dz = f_lp(z, prob);
    const double res = std::max(dz.x.lpNorm<Eigen::Infinity>(),
                                dz.lambda.lpNorm<Eigen::Infinity>());
    if (res <= tol) break;
    z.x += dt * dz.x;
    z.lambda += dt * dz.lambda;
    if (!z.x.allFinite() || !z.lambda.allFinite())
      throw IntegrationError(k + 1, z.stacked());
  }
  const PrimalDualState dz = f_lp(z, prob);
  out.z = z;
  out.residual_inf = std::max(dz.x.lpNorm<Eigen::Infinity>(),
                              dz.lambda.lpNorm<Eigen::Infinity>());
  out.converged = out.residual_inf <= tol;
  out.t_integrated = static_cast<double>(k) * dt;
  out.kkt = kkt_residual(z, prob);
  return out;
}

VertexOracleResult vertex_oracle(const LpProblem& prob) {
  const int n = prob.n(), m = prob.m();
  if (n > 8 || m > 16)
    throw std::invalid_argument("oracle limited to n <= 8, m <= 16");
  if (m < n) return {};

  const double feas_tol = 1e-9 * (1.0 + prob.b.lpNorm<Eigen::Infinity>());
  std::vector<Eigen::VectorXd> vertices;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Eigen::MatrixXd As(n, n);
  Eigen::VectorXd bs(n);
  do {
    for (int i = 0; i < n; ++i) {
      As.row(i) = prob.A.row(idx[i]);
      bs(i) = prob.b(idx[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(As);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd v = lu.solve(bs);
    if (((prob.A * v - prob.b).array() > feas_tol).any()) continue;
    const bool known = std::any_of(
        vertices.begin(), vertices.end(), [&](const Eigen::VectorXd& w) {
          return (w - v).lpNorm<Eigen::Infinity>() <= 1e-7;
        });
    if (!known) vertices.push_back(v);
  } while (next_combination(idx, m));

  VertexOracleResult out;
  out.vertex_count = static_cast<int>(vertices.size());
  if (vertices.empty()) return out;
  out.feasible = true;
  out.optimal_value = std::numeric_limits<double>::infinity();
  for (const auto& v : vertices)
    out.optimal_value = std::min(out.optimal_value, prob.c.dot(v));
  const double opt_tol = 1e-9 * (1.0 + std::abs(out.optimal_value));
  for (const auto& v : vertices)
    if (prob.c.dot(v) <= out.optimal_value + opt_tol)
      out.optimal_vertices.push_back(v);
  out.unique = out.optimal_vertices.size() == 1;
  return out;
}

VectorFieldHandle make_lp_field(const LpProblem& prob) {
  VectorFieldHandle vf;
  vf.dim = prob.n() + prob.m();
  vf.eval = [prob](double, const Eigen::VectorXd& z) {
    return f_lp(PrimalDualState::split(prob, z), prob).stacked();
  };
  vf.jacobian = [prob](double, const Eigen::VectorXd& z) {
    return jacobian_f_lp(PrimalDualState::split(prob, z), prob).J;
  };
  return vf;
}

LocalContractionCertificate local_contraction_certificate(
    const LpProblem& prob, const PrimalDualState& z_star) {
  const LpJacobian jac = jacobian_f_lp(z_star, prob);
  LocalContractionCertificate cert;
  if (!jac.kink_rows.empty()) return cert;
  if (!check_hurwitz(jac.J).hurwitz) return cert;

  // Lyapunov equation Df^T P + P Df = -I via the Kronecker form
  // (I (x) Df^T + Df^T (x) I) vec(P) = -vec(I).
  const int N = static_cast<int>(jac.J.rows());
  const Eigen::MatrixXd At = jac.J.transpose();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N * N, N * N);
  for (int i = 0; i < N; ++i)
    K.block(i * N, i * N, N, N) = At;  // I (x) Df^T
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      K.block(i * N, j * N, N, N).diagonal().array() += At(i, j);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N * N);
  for (int i = 0; i < N; ++i) rhs(i * N + i) = -1.0;
  const Eigen::VectorXd p = K.partialPivLu().solve(rhs);
  Eigen::MatrixXd P(N, N);
  for (int j = 0; j < N; ++j) P.col(j) = p.segment(j * N, N);
  P = 0.5 * (P + P.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    return cert;
  cert.Q = es.operatorSqrt();
  cert.c_exp = -log_norm(jac.J, NormSpec::weighted(PNorm::Two, cert.Q));
  cert.valid = cert.c_exp > 0.0;
  return cert;
}

std::vector<ProbeRecord> conjecture_probe(uint64_t seed, int count) {
  if (count < 1) throw std::invalid_argument("count must be positive");
  std::vector<ProbeRecord> records(count);
  for (int i = 0; i < count; ++i) {
    // Independent per-instance stream so instances can be regenerated alone.
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * (i + 1));
    std::uniform_int_distribution<int> pick_n(2, 3);
    std::uniform_int_distribution<int> pick_rows(1, 4);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const int n = pick_n(rng);
    const int extra = pick_rows(rng);
    const int m = 2 * n + extra;
    const double box = 5.0;
    Eigen::MatrixXd A(m, n);
    Eigen::VectorXd b(m);
    A.topRows(n) = Eigen::MatrixXd::Identity(n, n);
    A.middleRows(n, n) = -Eigen::MatrixXd::Identity(n, n);
    b.head(2 * n).setConstant(box);
    Eigen::VectorXd interior(n);
    for (int j = 0; j < n; ++j) interior(j) = (unif(rng) - 0.5) * box;
    for (int rIdx = 0; rIdx < extra; ++rIdx) {
      Eigen::VectorXd row(n);
      for (int j = 0; j < n; ++j) row(j) = gauss(rng);
      A.row(2 * n + rIdx) = row;
      b(2 * n + rIdx) = row.dot(interior) + 0.1 + 1.9 * unif(rng);
    }
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c(j) = gauss(rng);
    if (c.norm() < 1e-3) c.setOnes();
    c.normalize();
    // One instance in five minimizes a single coordinate, so the whole box
    // facet is optimal and the solution is generically non-unique.
    if (unif(rng) < 0.2) {
      c.setZero();
      c(static_cast<int>(unif(rng) * n) % n) = 1.0;
    }

    LpProblem prob(c, A, b, 0.5);
    ProbeRecord& rec = records[i];
    rec.index = i;
    rec.n = n;
    rec.m = m;

    const VertexOracleResult oracle = vertex_oracle(prob);
    rec.unique_solution = oracle.unique;

    const LpSolveResult sol = solve_lp_by_integration(
        prob, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(m), 1e-3, 300.0,
        1e-8);
    rec.converged = sol.converged;
    const LpJacobian jac = jacobian_f_lp(sol.z, prob);
    rec.kink_adjacent = !jac.kink_rows.empty();
    const HurwitzReport hw = check_hurwitz(jac.J);
    rec.hurwitz = hw.hurwitz;
    rec.alpha = hw.alpha;
    rec.inconclusive = !rec.converged || rec.kink_adjacent;
    rec.agree = !rec.inconclusive && rec.unique_solution == rec.hurwitz;
  }
  return records;
}

}  // namespace clab
