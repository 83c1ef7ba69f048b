#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "clab/dynamics.hpp"

namespace clab {

// min c^T x  s.t.  A x <= b, with the regularization weight gamma used by the
// primal-dual flow.
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double gamma = 0.5;

  LpProblem(Eigen::VectorXd c_, Eigen::MatrixXd A_, Eigen::VectorXd b_,
            double gamma_ = 0.5);

  int n() const { return static_cast<int>(A.cols()); }
  int m() const { return static_cast<int>(A.rows()); }
};

// The three-variable box instance min 1^T x s.t. -1 <= x <= 1.
LpProblem box3_problem(double gamma = 0.5);

struct PrimalDualState {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;

  Eigen::VectorXd stacked() const;
  static PrimalDualState split(const LpProblem& prob, const Eigen::VectorXd& z);
};

// Gradient of the Moreau envelope of the box indicator at y:
// (1/gamma) * relu(y - b), componentwise.
Eigen::VectorXd moreau_gradient_box(const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& b, double gamma);

// Primal-dual flow
//   xdot      = -c - (1/gamma) A^T relu(A x + gamma lambda - b)
//   lambdadot = -gamma lambda + relu(A x + gamma lambda - b).
PrimalDualState f_lp(const PrimalDualState& state, const LpProblem& prob);

struct LpJacobian {
  Eigen::MatrixXd J;
  // Constraint rows with |A x + gamma lambda - b| <= 1e-9: the derivative of
  // relu is taken as 0 there, so J is one-sided at these rows.
  std::vector<int> kink_rows;
};

// Piecewise-constant Jacobian
//   [ -(1/gamma) A^T G A   -A^T G        ]
//   [  G A                 -gamma (I - G) ]
// with G = diag(1 if y_i > 0 else 0).
LpJacobian jacobian_f_lp(const PrimalDualState& state, const LpProblem& prob);

double spectral_abscissa(const Eigen::MatrixXd& M);

struct HurwitzReport {
  bool hurwitz = false;
  double alpha = 0.0;
};

HurwitzReport check_hurwitz(const Eigen::MatrixXd& M, double eps = 1e-9);

struct WeakContractionReport {
  double max_mu2 = 0.0;          // largest mu_2 of the Jacobian over samples
  double max_offdiag_sym = 0.0;  // largest |entry| of the symmetric part's
                                 // off-diagonal blocks (vanishes exactly)
  int used_samples = 0;
  int kink_skipped = 0;
  bool pass = false;             // max_mu2 <= 1e-9
};

// Samples Gaussian states (componentwise std 10) and checks mu_2(Df) <= 0 up
// to roundoff at every non-kink state.
WeakContractionReport weak_contraction_certificate(const LpProblem& prob,
                                                   int samples, uint64_t seed);

struct KktResidual {
  double stationarity = 0.0;     // ||c + A^T lambda||_inf
  double primal = 0.0;           // ||relu(A x - b)||_inf
  double dual = 0.0;             // ||relu(-lambda)||_inf
  double complementarity = 0.0;  // max_i |lambda_i (A x - b)_i|

  double max_residual() const;
};

KktResidual kkt_residual(const PrimalDualState& state, const LpProblem& prob);

struct LpSolveResult {
  PrimalDualState z;
  bool converged = false;
  double residual_inf = 0.0;  // ||f_lp(z)||_inf at the final state
  double t_integrated = 0.0;
  KktResidual kkt;
};

// Integrates the flow (forward Euler) until ||f_lp(z)||_inf <= tol or t_end is
// exhausted.
LpSolveResult solve_lp_by_integration(const LpProblem& prob,
                                      const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& lambda0, double dt,
                                      double t_end, double tol = 1e-6);

struct VertexOracleResult {
  bool feasible = false;  // at least one feasible basic point found
  bool unique = false;
  double optimal_value = 0.0;
  std::vector<Eigen::VectorXd> optimal_vertices;
  int vertex_count = 0;  // distinct feasible vertices enumerated
};

// Exhaustive active-set enumeration; intended for n <= 8, m <= 16.
VertexOracleResult vertex_oracle(const LpProblem& prob);

struct ProbeRecord {
  int index = 0;
  int n = 0;
  int m = 0;
  bool unique_solution = false;
  bool hurwitz = false;
  double alpha = 0.0;
  bool converged = false;
  bool kink_adjacent = false;  // equilibrium sits on a relu kink
  bool inconclusive = false;   // no converged, kink-free equilibrium
  bool agree = false;          // unique_solution == hurwitz (when conclusive)
};

// Random small LPs: solves each by integration, checks uniqueness with the
// vertex oracle and Hurwitzness at the equilibrium, and records whether the
// two verdicts agree. Gathers evidence; asserts nothing.
std::vector<ProbeRecord> conjecture_probe(uint64_t seed, int count);

VectorFieldHandle make_lp_field(const LpProblem& prob);

struct LocalContractionCertificate {
  bool valid = false;
  Eigen::MatrixXd Q;   // weight of the norm in which the flow contracts
  double c_exp = 0.0;  // -mu_{2,Q}(Df(z_star))
};

// Solves Df^T P + P Df = -I at z_star and returns Q = P^{1/2} with the
// contraction rate in ||.||_{2,Q}. Fails (valid = false) when the Jacobian is
// not Hurwitz or the equilibrium sits on a kink.
LocalContractionCertificate local_contraction_certificate(
    const LpProblem& prob, const PrimalDualState& z_star);

}  // namespace clab
