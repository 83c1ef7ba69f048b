#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clab/bounds.hpp>
#include <clab/dynamics.hpp>

#include "test_util.hpp"

using namespace clab;

namespace {

VectorFieldHandle scalar_decay() {
  Eigen::MatrixXd a(1, 1);
  a << -1.0;
  return make_linear_field(a, Eigen::VectorXd::Zero(1));
}

}  // namespace

TEST_CASE("integration grid bookkeeping") {
  auto traj = integrate(scalar_decay(), Eigen::VectorXd::Ones(1), 1.0, 0.25,
                        Scheme::Euler);
  REQUIRE(traj.times.size() == 5);
  REQUIRE(traj.states.size() == 5);
  for (int k = 0; k < 5; ++k) CHECK(traj.times[k] == 0.25 * k);
  CHECK(traj.dt == 0.25);
  CHECK(traj.scheme == Scheme::Euler);
  // One Euler step of xdot = -x from 1.
  CHECK(traj.states[1](0) == doctest::Approx(0.75).epsilon(1e-15));

  CHECK_THROWS_AS(
      integrate(scalar_decay(), Eigen::VectorXd::Ones(1), 1.0, 0.0,
                Scheme::Euler),
      std::invalid_argument);
  CHECK_THROWS_AS(
      integrate(scalar_decay(), Eigen::VectorXd::Ones(1), 0.05, 0.1,
                Scheme::Euler),
      std::invalid_argument);
  CHECK_THROWS_AS(
      integrate(scalar_decay(), Eigen::VectorXd::Ones(2), 1.0, 0.1,
                Scheme::Euler),
      std::invalid_argument);
}

TEST_CASE("schemes converge at their expected rates") {
  const double exact = std::exp(-2.0);
  auto err = [&](Scheme s, double dt) {
    auto traj = integrate(scalar_decay(), Eigen::VectorXd::Ones(1), 2.0, dt, s);
    return std::abs(traj.states.back()(0) - exact);
  };
  const double e1 = err(Scheme::Euler, 1e-2), e2 = err(Scheme::Euler, 5e-3);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.05));
  const double r1 = err(Scheme::Rk4, 1e-1), r2 = err(Scheme::Rk4, 5e-2);
  CHECK(r1 / r2 == doctest::Approx(16.0).epsilon(0.15));
  CHECK(err(Scheme::Rk4, 1e-2) <= 1e-10);
}

TEST_CASE("observer sees every step exactly once") {
  std::vector<long> ks;
  std::vector<double> xs;
  integrate_observe(scalar_decay(), Eigen::VectorXd::Ones(1), 0.5, 0.1,
                    Scheme::Rk4,
                    [&](long k, double t, const Eigen::VectorXd& x) {
                      CHECK(t == 0.1 * k);
                      ks.push_back(k);
                      xs.push_back(x(0));
                    });
  REQUIRE(ks.size() == 6);
  for (long k = 0; k < 6; ++k) CHECK(ks[k] == k);
  auto traj = integrate(scalar_decay(), Eigen::VectorXd::Ones(1), 0.5, 0.1,
                        Scheme::Rk4);
  for (int k = 0; k < 6; ++k) CHECK(xs[k] == traj.states[k](0));
}

TEST_CASE("blow-up raises an integration error with location") {
  VectorFieldHandle vf;
  vf.dim = 1;
  vf.eval = [](double, const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x(0) * x(0));
  };
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 10.0);
  try {
    integrate(vf, x0, 10.0, 0.5, Scheme::Euler);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.step() > 0);
    CHECK(e.last_state().size() == 1);
    CHECK(std::string(e.what()).find("finite") != std::string::npos);
  }
}

TEST_CASE("finite-difference jacobian matches an analytic one") {
  VectorFieldHandle vf;
  vf.dim = 2;
  vf.eval = [](double, const Eigen::VectorXd& x) {
    Eigen::VectorXd f(2);
    f << x(0) * x(0), x(0) * x(1);
    return f;
  };
  Eigen::VectorXd x(2);
  x << 1.3, -0.7;
  Eigen::MatrixXd expected(2, 2);
  expected << 2.6, 0.0, -0.7, 1.3;
  CHECK((jacobian_fd(vf, 0.0, x) - expected).cwiseAbs().maxCoeff() <= 1e-7);
  CHECK((jacobian_fd(vf, 0.0, x, 1e-5) - expected).cwiseAbs().maxCoeff() <=
        1e-8);
}

TEST_CASE("dini slope estimates recover exponential rates") {
  const double c = 1.3, dt = 1e-3;
  std::vector<double> dist;
  for (int k = 0; k <= 2000; ++k) dist.push_back(2.0 * std::exp(-c * k * dt));
  auto slopes = estimate_dini(dist, dt);
  REQUIRE(slopes.size() == dist.size() - 1);
  for (size_t k = 0; k < slopes.size(); ++k) {
    const double rate = -slopes[k] / dist[k];
    CHECK(rate == doctest::Approx(c).epsilon(1e-3));
  }
  CHECK_THROWS_AS(estimate_dini({1.0}, dt), std::invalid_argument);
  CHECK_THROWS_AS(estimate_dini(dist, 0.0), std::invalid_argument);
}

TEST_CASE("ball samples stay inside and fill the ball") {
  auto gen = testutil::rng(41);
  Eigen::MatrixXd Q(2, 2);
  Q << 2.0, 1.0, 0.0, 1.0;
  const NormSpec specs[] = {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(),
                            NormSpec::weighted(PNorm::Two, Q)};
  for (const auto& spec : specs) {
    Eigen::VectorXd center(2);
    center << 1.0, -2.0;
    BallSpec ball{center, 1.7, spec};
    double max_norm = 0.0, mean_norm = 0.0;
    const int n_draws = 20000;
    for (int i = 0; i < n_draws; ++i) {
      Eigen::VectorXd x = sample_in_ball(gen, ball);
      const double nrm = vector_norm(x - center, spec);
      CHECK(nrm <= 1.7 * (1.0 + 1e-12));
      max_norm = std::max(max_norm, nrm);
      mean_norm += nrm / n_draws;
    }
    // Radii of uniform draws follow R * U^{1/n}: mean R*n/(n+1), sup R.
    CHECK(max_norm > 1.7 * 0.995);
    CHECK(mean_norm == doctest::Approx(1.7 * 2.0 / 3.0).epsilon(0.02));
  }
}

TEST_CASE("empirical rate of a linear field is its log norm") {
  auto gen = testutil::rng(42);
  Eigen::MatrixXd A = testutil::random_matrix(gen, 4, 4);
  auto vf = make_linear_field(A, Eigen::VectorXd::Zero(4));
  for (const auto& spec :
       {NormSpec::l1(), NormSpec::l2(), NormSpec::linf()}) {
    BallSpec ball{Eigen::VectorXd::Zero(4), 2.0, spec};
    auto est = empirical_contraction_rate(vf, ball, 50, 7);
    CHECK(est.sup_mu == doctest::Approx(log_norm(A, spec)).epsilon(1e-9));
    CHECK(est.used_samples == 50);
    CHECK(est.excluded_kinks == 0);
  }
}

TEST_CASE("kink samples are excluded from rate estimates") {
  // |x| has one-sided slopes -1 / +1 at the origin; the estimator must not
  // average across the corner.
  VectorFieldHandle vf;
  vf.dim = 1;
  vf.eval = [](double, const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, std::abs(x(0)));
  };
  // Samples land on both sides of the fd stencil width, so some draws are
  // dropped and the rest are kept.
  BallSpec mixed{Eigen::VectorXd::Zero(1), 3e-6, NormSpec::linf()};
  auto est = empirical_contraction_rate(vf, mixed, 40, 11);
  CHECK(est.excluded_kinks > 0);
  CHECK(est.used_samples > 0);
  CHECK(est.used_samples + est.excluded_kinks == 40);

  // A ball entirely inside the stencil width leaves nothing to estimate.
  BallSpec tiny{Eigen::VectorXd::Zero(1), 1e-9, NormSpec::linf()};
  CHECK_THROWS_AS(empirical_contraction_rate(vf, tiny, 40, 11), NumericError);

  BallSpec off_center{Eigen::VectorXd::Constant(1, 5.0), 1.0,
                      NormSpec::linf()};
  auto clean = empirical_contraction_rate(vf, off_center, 40, 11);
  CHECK(clean.excluded_kinks == 0);
  CHECK(clean.sup_mu == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("radius search brackets the saturation boundary") {
  const double c = 2.0, d = 0.6;
  auto vf = make_saturated_field(c, d);
  RadiusSearch search{1e-3, 3.0, 40};
  auto est = estimate_radius(vf, Eigen::VectorXd::Zero(1), NormSpec::linf(),
                             c / 2.0, search, 200, 5);
  REQUIRE(est.found);
  // Inside |x| <= d the rate is exactly -c; outside it drops to 0. Sampling
  // brackets the boundary only approximately: a radius slightly past it can
  // survive when no draw lands in the thin outer shell.
  CHECK(est.radius <= 1.1 * d);
  CHECK(est.radius >= 0.9 * d);
  CHECK(est.sup_mu == doctest::Approx(-c).epsilon(1e-12));

  auto hopeless = estimate_radius(vf, Eigen::VectorXd::Zero(1),
                                  NormSpec::linf(), 3.0 * c, search, 200, 5);
  CHECK(!hopeless.found);

  Eigen::VectorXd off_equilibrium = Eigen::VectorXd::Constant(1, 0.3);
  CHECK_THROWS_AS(estimate_radius(vf, off_equilibrium, NormSpec::linf(),
                                  c / 2.0, search, 200, 5),
                  std::invalid_argument);
}

TEST_CASE("envelope verification separates valid from violated bounds") {
  const double c = 1.0, d = 1.0, q = 3.0;
  auto vf = make_saturated_field(c, d);
  auto traj = integrate(vf, Eigen::VectorXd::Constant(1, q), 8.0, 1e-4,
                        Scheme::Rk4);
  auto profile = ContractionProfile::same_norm(NormSpec::linf(), c, d,
                                               Eigen::VectorXd::Zero(1));
  auto env = same_norm_bound(profile, q);

  auto report = verify_envelope(traj, Eigen::VectorXd::Zero(1),
                                NormSpec::linf(), env);
  CHECK(report.pass);
  CHECK(report.max_violation <= report.tol);

  auto squeezed = verify_envelope(
      traj, Eigen::VectorXd::Zero(1), NormSpec::linf(),
      [&](double t) { return 0.9 * env(t); }, 1e-9);
  CHECK(!squeezed.pass);
  CHECK(squeezed.max_violation > 0.01);
  CHECK(squeezed.argmax_t >= 0.0);
}

TEST_CASE("prebuilt fields expose values, jacobians and inputs") {
  auto sat = make_saturated_field(2.0, 0.5, 1.0);
  REQUIRE(sat.dim == 1);
  CHECK(sat.eval(0.0, Eigen::VectorXd::Constant(1, 1.2))(0) ==
        doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(sat.eval(0.0, Eigen::VectorXd::Constant(1, 3.0))(0) == -1.0);
  CHECK(sat.jacobian(0.0, Eigen::VectorXd::Constant(1, 1.2))(0, 0) == -2.0);
  CHECK(sat.jacobian(0.0, Eigen::VectorXd::Constant(1, 3.0))(0, 0) == 0.0);
  REQUIRE(sat.input_eval);
  CHECK(sat.input_eval(0.0, Eigen::VectorXd::Constant(1, 3.0),
                       Eigen::VectorXd::Constant(1, 0.25))(0) ==
        doctest::Approx(-0.75).epsilon(1e-15));

  Eigen::MatrixXd A(2, 2);
  A << 0.0, 1.0, -1.0, 0.0;
  Eigen::VectorXd xs(2);
  xs << 1.0, 1.0;
  auto lin = make_linear_field(A, xs);
  Eigen::VectorXd x(2);
  x << 2.0, 1.0;
  CHECK(lin.eval(0.0, x)(0) == 0.0);
  CHECK(lin.eval(0.0, x)(1) == -1.0);
  CHECK(lin.jacobian(0.0, x) == A);
}
