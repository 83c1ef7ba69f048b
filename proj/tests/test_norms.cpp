#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clab/norms.hpp>

#include "test_util.hpp"

using namespace clab;

TEST_CASE("vector norms on fixed points") {
  Eigen::VectorXd v(2);
  v << 3.0, 4.0;
  CHECK(vector_norm(v, NormSpec::l2()) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(vector_norm(v, NormSpec::l1()) == doctest::Approx(7.0).epsilon(1e-15));

  Eigen::VectorXd w(3);
  w << 1.0, -2.0, 3.0;
  CHECK(vector_norm(w, NormSpec::linf()) == 3.0);

  Eigen::MatrixXd Q(2, 2);
  Q << 2.0, 0.0, 0.0, 1.0;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  CHECK(vector_norm(ones, NormSpec::weighted(PNorm::Two, Q)) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("norm is zero only at the origin") {
  auto gen = testutil::rng(11);
  Eigen::MatrixXd Q(3, 3);
  Q << 1, 0.2, 0, 0, 2, 0, 0.1, 0, 0.5;
  const NormSpec specs[] = {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(),
                            NormSpec::weighted(PNorm::One, Q)};
  for (const auto& spec : specs) {
    CHECK(vector_norm(Eigen::VectorXd::Zero(3), spec) == 0.0);
    for (int i = 0; i < 100; ++i) {
      Eigen::VectorXd x = testutil::random_vector(gen, 3);
      if (x.isZero()) continue;
      CHECK(vector_norm(x, spec) > 0.0);
    }
  }
}

TEST_CASE("invalid norm inputs are rejected") {
  Eigen::VectorXd v(2);
  v << 1.0, 2.0;
  Eigen::MatrixXd Q3 = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(vector_norm(v, NormSpec::weighted(PNorm::Two, Q3)),
                  std::invalid_argument);

  Eigen::MatrixXd singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(NormSpec::weighted(PNorm::Two, singular),
                  std::invalid_argument);
  Eigen::MatrixXd nearly = Eigen::MatrixXd::Identity(2, 2);
  nearly(1, 1) = 1e-15;
  CHECK_THROWS_AS(NormSpec::weighted(PNorm::Two, nearly),
                  std::invalid_argument);
  CHECK_THROWS_AS(NormSpec::weighted(PNorm::Two, Eigen::MatrixXd::Zero(2, 3)),
                  std::invalid_argument);
}

TEST_CASE("identity weight reproduces the plain norms exactly") {
  auto gen = testutil::rng(12);
  Eigen::MatrixXd I4 = Eigen::MatrixXd::Identity(4, 4);
  const std::pair<PNorm, NormSpec> pairs[] = {
      {PNorm::One, NormSpec::l1()},
      {PNorm::Two, NormSpec::l2()},
      {PNorm::Inf, NormSpec::linf()}};
  for (const auto& [p, plain] : pairs) {
    NormSpec weighted = NormSpec::weighted(p, I4);
    for (int i = 0; i < 100; ++i) {
      Eigen::VectorXd x = testutil::random_vector(gen, 4, 3.0);
      CHECK(vector_norm(x, weighted) == vector_norm(x, plain));
    }
  }
}

TEST_CASE("triangle inequality and absolute homogeneity") {
  auto gen = testutil::rng(13);
  Eigen::MatrixXd Q(3, 3);
  Q << 2, 0.5, 0, 0, 1, -0.3, 0, 0, 0.8;
  const NormSpec specs[] = {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(),
                            NormSpec::weighted(PNorm::Two, Q),
                            NormSpec::weighted(PNorm::Inf, Q)};
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  for (const auto& spec : specs) {
    for (int i = 0; i < 10000; ++i) {
      Eigen::VectorXd x = testutil::random_vector(gen, 3, 2.0);
      Eigen::VectorXd y = testutil::random_vector(gen, 3, 2.0);
      const double nx = vector_norm(x, spec), ny = vector_norm(y, spec);
      CHECK(vector_norm(x + y, spec) <= nx + ny + 1e-12 * (nx + ny));
      const double a = coef(gen);
      CHECK(vector_norm(a * x, spec) ==
            doctest::Approx(std::abs(a) * nx).epsilon(1e-12));
    }
  }
}

TEST_CASE("log norm closed forms on fixed matrices") {
  Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
  CHECK(log_norm(-I2, NormSpec::l2()) == doctest::Approx(-1.0).epsilon(1e-14));

  Eigen::MatrixXd A(2, 2);
  A << -2.0, 1.0, 0.0, -3.0;
  CHECK(log_norm(A, NormSpec::linf()) == -1.0);
  // mu_1 sums columns instead: max(-2 + 0, -3 + 1) = -2.
  CHECK(log_norm(A, NormSpec::l1()) == -2.0);
  for (double h : {1e-4, 1e-6})
    CHECK(log_norm_limit_oracle(A, NormSpec::linf(), h) ==
          doctest::Approx(-1.0).epsilon(1e-3));

  Eigen::MatrixXd skew(2, 2);
  skew << 0.0, 5.0, -5.0, 0.0;
  CHECK(log_norm(skew, NormSpec::l2()) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("limit oracle agrees with the closed forms") {
  auto gen = testutil::rng(14);
  const NormSpec specs[] = {NormSpec::l1(), NormSpec::l2(), NormSpec::linf()};
  for (int i = 0; i < 300; ++i) {
    Eigen::MatrixXd A = testutil::random_matrix(gen, 5, 5);
    for (const auto& spec : specs)
      CHECK(std::abs(log_norm(A, spec) - log_norm_limit_oracle(A, spec)) <=
            1e-5);
  }
  CHECK(log_norm_limit_oracle(-Eigen::MatrixXd::Identity(2, 2),
                              NormSpec::l2(), 1e-7) ==
        doctest::Approx(-1.0).epsilon(1e-6));
  // Zero matrix: ||I|| = 1 in every induced norm, so the quotient vanishes.
  for (const auto& spec : specs)
    CHECK(log_norm_limit_oracle(Eigen::MatrixXd::Zero(3, 3), spec) == 0.0);
}

TEST_CASE("weighted log norm is the plain log norm of Q A Q^{-1}") {
  auto gen = testutil::rng(15);
  for (int i = 0; i < 50; ++i) {
    Eigen::MatrixXd A = testutil::random_matrix(gen, 4, 4);
    Eigen::MatrixXd Q =
        testutil::random_matrix(gen, 4, 4) + 5.0 * Eigen::MatrixXd::Identity(4, 4);
    NormSpec spec = NormSpec::weighted(PNorm::Two, Q);
    const double direct = log_norm(A, spec);
    const double oracle = log_norm_limit_oracle(A, spec, 1e-7);
    CHECK(std::abs(direct - oracle) <= 1e-4 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("log norm dominates the spectral abscissa") {
  auto gen = testutil::rng(16);
  for (int i = 0; i < 200; ++i) {
    Eigen::MatrixXd A = testutil::random_matrix(gen, 4, 4);
    const double abscissa =
        Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues().real().maxCoeff();
    for (const auto& spec : {NormSpec::l1(), NormSpec::l2(), NormSpec::linf()})
      CHECK(log_norm(A, spec) >= abscissa - 1e-9);
  }
}

TEST_CASE("log norm subadditivity and positive homogeneity") {
  auto gen = testutil::rng(17);
  std::uniform_real_distribution<double> coef(0.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    Eigen::MatrixXd A = testutil::random_matrix(gen, 4, 4);
    Eigen::MatrixXd B = testutil::random_matrix(gen, 4, 4);
    const double a = coef(gen);
    for (const auto& spec : {NormSpec::l1(), NormSpec::l2(), NormSpec::linf()}) {
      CHECK(log_norm(A + B, spec) <= log_norm(A, spec) + log_norm(B, spec) + 1e-9);
      CHECK(log_norm(a * A, spec) ==
            doctest::Approx(a * log_norm(A, spec)).epsilon(1e-9));
    }
  }
}

TEST_CASE("equivalence coefficients: closed-form pairs") {
  const auto e2inf = equivalence_coefficients(NormSpec::l2(), NormSpec::linf(), 2);
  CHECK(e2inf.k_ab == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(e2inf.k_ba == 1.0);
  CHECK(e2inf.minimal);

  const auto e1inf = equivalence_coefficients(NormSpec::l1(), NormSpec::linf(), 3);
  CHECK(e1inf.k_ab == 3.0);
  CHECK(e1inf.k_ba == 1.0);

  const auto e12 = equivalence_coefficients(NormSpec::l1(), NormSpec::l2(), 9);
  CHECK(e12.k_ab == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(e12.k_ba == 1.0);

  const auto same = equivalence_coefficients(NormSpec::l2(), NormSpec::l2(), 7);
  CHECK(same.k_ab == 1.0);
  CHECK(same.k_ba == 1.0);
  CHECK(same.ratio() == 1.0);
}

TEST_CASE("equivalence coefficients: weighted l2 against l2") {
  Eigen::MatrixXd Q(2, 2);
  Q << 2.0, 0.0, 0.0, 1.0;
  NormSpec w = NormSpec::weighted(PNorm::Two, Q);
  const auto eq = equivalence_coefficients(w, NormSpec::l2(), 2);
  CHECK(eq.minimal);
  CHECK(eq.k_ab == doctest::Approx(2.0).epsilon(1e-12));  // sigma_max
  CHECK(eq.k_ba == doctest::Approx(1.0).epsilon(1e-12));  // 1 / sigma_min
  CHECK(eq.ratio() == doctest::Approx(2.0).epsilon(1e-12));

  // The supremum over directions approaches sigma_max.
  auto gen = testutil::rng(18);
  double best = 0.0;
  for (int i = 0; i < 100000; ++i) {
    Eigen::VectorXd x = testutil::random_vector(gen, 2);
    const double denom = vector_norm(x, NormSpec::l2());
    if (denom == 0.0) continue;
    best = std::max(best, vector_norm(x, w) / denom);
  }
  CHECK(best <= eq.k_ab + 1e-12);
  CHECK(best == doctest::Approx(eq.k_ab).epsilon(1e-3));
}

TEST_CASE("equivalence inequalities hold on random vectors") {
  auto gen = testutil::rng(19);
  Eigen::MatrixXd Q(3, 3);
  Q << 1.5, 0.2, 0, 0, 0.7, 0, 0, 0.1, 2.0;
  const NormSpec specs[] = {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(),
                            NormSpec::weighted(PNorm::Two, Q),
                            NormSpec::weighted(PNorm::One, Q)};
  for (const auto& alpha : specs) {
    for (const auto& beta : specs) {
      const auto eq = equivalence_coefficients(alpha, beta, 3);
      if (eq.minimal) CHECK(eq.ratio() >= 1.0 - 1e-12);
      for (int i = 0; i < 2000; ++i) {
        Eigen::VectorXd x = testutil::random_vector(gen, 3, 2.0);
        const double na = vector_norm(x, alpha);
        const double nb = vector_norm(x, beta);
        if (eq.minimal) {
          CHECK(na <= eq.k_ab * nb * (1.0 + 1e-12));
          CHECK(nb <= eq.k_ba * na * (1.0 + 1e-12));
        } else {
          // Sampled coefficients are lower bounds: they may clip some
          // directions, but never by more than the sampling slack.
          CHECK(na <= eq.k_ab * nb * 1.05);
          CHECK(nb <= eq.k_ba * na * 1.05);
        }
      }
    }
  }
}

TEST_CASE("mixed-p weighted pairs fall back to a sampled lower bound") {
  Eigen::MatrixXd Q(2, 2);
  Q << 3.0, 0.0, 0.0, 1.0;
  const auto eq = equivalence_coefficients(NormSpec::weighted(PNorm::Two, Q),
                                           NormSpec::linf(), 2);
  CHECK(!eq.minimal);
  // ||Qx||_2 <= 3 sqrt(2) ||x||_inf with equality near x = (1, 1) scaled by
  // the weight; the sampled bound must sit below the true supremum.
  CHECK(eq.k_ab <= std::sqrt(10.0) + 1e-9);
  CHECK(eq.k_ab > 3.0 - 1e-6);
}
