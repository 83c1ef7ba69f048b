#include "clab/norms.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace clab {

namespace {

double lp_norm(const Eigen::VectorXd& v, PNorm p) {
  switch (p) {
    case PNorm::One:
      return v.lpNorm<1>();
    case PNorm::Two:
      return v.norm();
    case PNorm::Inf:
      return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  }
  throw std::logic_error("unreachable");
}

double induced_plain_norm(const Eigen::MatrixXd& M, PNorm p) {
  switch (p) {
    case PNorm::One:
      return M.cwiseAbs().colwise().sum().maxCoeff();
    case PNorm::Inf:
      return M.cwiseAbs().rowwise().sum().maxCoeff();
    case PNorm::Two: {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
      return svd.singularValues()(0);
    }
  }
  throw std::logic_error("unreachable");
}

double plain_log_norm(const Eigen::MatrixXd& A, PNorm p) {
  const Eigen::Index n = A.rows();
  switch (p) {
    case PNorm::One: {
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        double s = A(j, j);
        for (Eigen::Index i = 0; i < n; ++i)
          if (i != j) s += std::abs(A(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case PNorm::Inf: {
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < n; ++i) {
        double s = A(i, i);
        for (Eigen::Index j = 0; j < n; ++j)
          if (j != i) s += std::abs(A(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case PNorm::Two: {
      Eigen::MatrixXd sym = 0.5 * (A + A.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym,
                                                        Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("symmetric eigensolve failed");
      return es.eigenvalues().maxCoeff();
    }
  }
  throw std::logic_error("unreachable");
}

void require_square(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() == 0)
    throw std::invalid_argument("matrix must be square and non-empty");
}

// Minimal k with ||x||_a <= k ||x||_b for the plain norms on R^n.
double plain_pair_coefficient(NormKind a, NormKind b, int n) {
  if (a == b) return 1.0;
  const double sn = std::sqrt(static_cast<double>(n));
  if (a == NormKind::L1 && b == NormKind::L2) return sn;
  if (a == NormKind::L1 && b == NormKind::Linf) return static_cast<double>(n);
  if (a == NormKind::L2 && b == NormKind::Linf) return sn;
  // The reverse directions all have coefficient 1.
  return 1.0;
}

}  // namespace

NormSpec NormSpec::weighted(PNorm p, const Eigen::MatrixXd& Q) {
  require_square(Q);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) / sv(0) >= 1e-12))
    throw std::invalid_argument("weight matrix is singular or ill-conditioned");
  NormSpec spec(NormKind::WeightedLp, p);
  spec.Q_ = Q;
  spec.Q_inv_ = Q.partialPivLu().inverse();
  return spec;
}

const Eigen::MatrixXd& NormSpec::weight() const {
  if (!is_weighted()) throw std::logic_error("norm has no weight matrix");
  return Q_;
}

const Eigen::MatrixXd& NormSpec::weight_inverse() const {
  if (!is_weighted()) throw std::logic_error("norm has no weight matrix");
  return Q_inv_;
}

std::optional<int> NormSpec::dim() const {
  if (is_weighted()) return static_cast<int>(Q_.rows());
  return std::nullopt;
}

bool NormSpec::same_as(const NormSpec& other) const {
  if (kind_ != other.kind_) return false;
  if (!is_weighted()) return true;
  if (p_ != other.p_ || Q_.rows() != other.Q_.rows()) return false;
  return (Q_ - other.Q_).cwiseAbs().maxCoeff() == 0.0;
}

double vector_norm(const Eigen::VectorXd& x, const NormSpec& spec) {
  if (spec.is_weighted()) {
    if (x.size() != spec.weight().rows())
      throw std::invalid_argument("vector dimension does not match weight");
    return lp_norm(spec.weight() * x, spec.p());
  }
  return lp_norm(x, spec.p());
}

double induced_matrix_norm(const Eigen::MatrixXd& M, const NormSpec& spec) {
  require_square(M);
  if (spec.is_weighted()) {
    if (M.rows() != spec.weight().rows())
      throw std::invalid_argument("matrix dimension does not match weight");
    return induced_plain_norm(spec.weight() * M * spec.weight_inverse(),
                              spec.p());
  }
  return induced_plain_norm(M, spec.p());
}

double log_norm(const Eigen::MatrixXd& A, const NormSpec& spec) {
  require_square(A);
  if (spec.is_weighted()) {
    if (A.rows() != spec.weight().rows())
      throw std::invalid_argument("matrix dimension does not match weight");
    return plain_log_norm(spec.weight() * A * spec.weight_inverse(), spec.p());
  }
  return plain_log_norm(A, spec.p());
}

double log_norm_limit_oracle(const Eigen::MatrixXd& A, const NormSpec& spec,
                             double h) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  require_square(A);
  Eigen::MatrixXd M =
      Eigen::MatrixXd::Identity(A.rows(), A.cols()) + h * A;
  return (induced_matrix_norm(M, spec) - 1.0) / h;
}

EquivalencePair equivalence_coefficients(const NormSpec& alpha,
                                         const NormSpec& beta, int n) {
  if (n <= 0) throw std::invalid_argument("dimension must be positive");
  for (const auto* s : {&alpha, &beta})
    if (s->dim() && *s->dim() != n)
      throw std::invalid_argument("weight dimension does not match n");

  if (alpha.same_as(beta)) return {1.0, 1.0, true};

  if (!alpha.is_weighted() && !beta.is_weighted())
    return {plain_pair_coefficient(alpha.kind(), beta.kind(), n),
            plain_pair_coefficient(beta.kind(), alpha.kind(), n), true};

  // Same exponent p: ||x||_{p,Q1} = ||Q1 Q2^{-1} (Q2 x)||_p, and since Q2 is
  // onto, the minimal coefficient is the induced p-norm of the weight ratio.
  if (alpha.p() == beta.p()) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd& Qa = alpha.is_weighted() ? alpha.weight() : id;
    const Eigen::MatrixXd& Qb_inv =
        beta.is_weighted() ? beta.weight_inverse() : id;
    const Eigen::MatrixXd& Qb = beta.is_weighted() ? beta.weight() : id;
    const Eigen::MatrixXd& Qa_inv =
        alpha.is_weighted() ? alpha.weight_inverse() : id;
    NormSpec plain = alpha.p() == PNorm::One
                         ? NormSpec::l1()
                         : (alpha.p() == PNorm::Two ? NormSpec::l2()
                                                    : NormSpec::linf());
    return {induced_matrix_norm(Qa * Qb_inv, plain),
            induced_matrix_norm(Qb * Qa_inv, plain), true};
  }

  // No closed form: deterministic sampled lower bound (not minimal).
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double k_ab = 0.0, k_ba = 0.0;
  auto consider = [&](const Eigen::VectorXd& x) {
    const double na = vector_norm(x, alpha);
    const double nb = vector_norm(x, beta);
    if (nb > 0.0) k_ab = std::max(k_ab, na / nb);
    if (na > 0.0) k_ba = std::max(k_ba, nb / na);
  };
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) {
    x.setZero();
    x(i) = 1.0;
    consider(x);
  }
  if (n <= 10) {  // all sign patterns
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      for (int i = 0; i < n; ++i) x(i) = (mask >> i) & 1u ? 1.0 : -1.0;
      consider(x);
    }
  }
  for (int s = 0; s < 100000; ++s) {
    for (int i = 0; i < n; ++i) x(i) = gauss(rng);
    consider(x);
  }
  return {k_ab, k_ba, false};
}

}  // namespace clab
