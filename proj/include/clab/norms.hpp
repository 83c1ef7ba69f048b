#pragma once

#include <Eigen/Dense>
#include <optional>

namespace clab {

enum class NormKind { L1, L2, Linf, WeightedLp };
enum class PNorm { One, Two, Inf };

// Identifies a vector norm: plain l1/l2/linf, or a weighted norm
// ||x||_{p,Q} = ||Q x||_p with invertible Q and p in {1, 2, inf}.
class NormSpec {
 public:
  static NormSpec l1() { return NormSpec(NormKind::L1, PNorm::One); }
  static NormSpec l2() { return NormSpec(NormKind::L2, PNorm::Two); }
  static NormSpec linf() { return NormSpec(NormKind::Linf, PNorm::Inf); }

  // Rejects Q unless square and numerically invertible
  // (sigma_min / sigma_max >= 1e-12).
  static NormSpec weighted(PNorm p, const Eigen::MatrixXd& Q);

  NormKind kind() const { return kind_; }
  PNorm p() const { return p_; }
  bool is_weighted() const { return kind_ == NormKind::WeightedLp; }
  const Eigen::MatrixXd& weight() const;
  const Eigen::MatrixXd& weight_inverse() const;

  // Weighted specs pin the dimension; plain ones work in any.
  std::optional<int> dim() const;
  bool same_as(const NormSpec& other) const;

 private:
  NormSpec(NormKind kind, PNorm p) : kind_(kind), p_(p) {}

  NormKind kind_;
  PNorm p_;
  Eigen::MatrixXd Q_;
  Eigen::MatrixXd Q_inv_;
};

double vector_norm(const Eigen::VectorXd& x, const NormSpec& spec);

// Operator norm induced by the vector norm `spec` acts in.
double induced_matrix_norm(const Eigen::MatrixXd& M, const NormSpec& spec);

// Log norm (matrix measure) mu(A). Closed forms:
//   mu_1(A)   = max_j ( a_jj + sum_{i!=j} |a_ij| )
//   mu_2(A)   = lambda_max( (A + A^T)/2 )
//   mu_inf(A) = max_i ( a_ii + sum_{j!=i} |a_ij| )
//   mu_{p,Q}(A) = mu_p( Q A Q^{-1} )
double log_norm(const Eigen::MatrixXd& A, const NormSpec& spec);

// Difference-quotient oracle (||I + hA|| - 1) / h; converges to mu(A) as h -> 0+.
double log_norm_limit_oracle(const Eigen::MatrixXd& A, const NormSpec& spec,
                             double h = 1e-7);

// Coefficients relating two norms on R^n:
//   ||x||_alpha <= k_ab ||x||_beta   and   ||x||_beta <= k_ba ||x||_alpha.
struct EquivalencePair {
  double k_ab = 1.0;
  double k_ba = 1.0;
  // `minimal` is true when both coefficients come from a closed form (and are
  // the smallest possible); sampled fallbacks are lower bounds only.
  bool minimal = true;

  double ratio() const { return k_ab * k_ba; }
};

// Closed forms cover: identical specs, all plain/plain pairs, and pairs that
// share the exponent p (weighted vs plain, weighted vs weighted), where the
// minimal coefficients are induced norms of the weight ratio. Anything else
// falls back to a deterministic sampled lower bound with minimal = false.
EquivalencePair equivalence_coefficients(const NormSpec& alpha,
                                         const NormSpec& beta, int n);

}  // namespace clab
