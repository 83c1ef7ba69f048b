#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <clab/bounds.hpp>
#include <clab/dynamics.hpp>
#include <clab/errors.hpp>
#include <clab/experiment.hpp>
#include <clab/linexp.hpp>
#include <clab/lp.hpp>
#include <clab/norms.hpp>

namespace py = pybind11;
using namespace clab;

PYBIND11_MODULE(contraction_lab, m) {
  m.doc() =
      "Linear-exponential convergence bounds for weakly/strongly contracting "
      "flows, with primal-dual LP dynamics";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
  py::register_exception<VerificationError>(m, "VerificationError",
                                            PyExc_RuntimeError);

  // ---- norms ----
  py::enum_<PNorm>(m, "PNorm")
      .value("One", PNorm::One)
      .value("Two", PNorm::Two)
      .value("Inf", PNorm::Inf);

  py::class_<NormSpec>(m, "NormSpec")
      .def_static("l1", &NormSpec::l1)
      .def_static("l2", &NormSpec::l2)
      .def_static("linf", &NormSpec::linf)
      .def_static("weighted", &NormSpec::weighted, py::arg("p"),
                  py::arg("Q"))
      .def("is_weighted", &NormSpec::is_weighted)
      .def("same_as", &NormSpec::same_as)
      .def("__repr__", [](const NormSpec& s) {
        if (s.is_weighted()) return std::string("NormSpec(weighted)");
        switch (s.p()) {
          case PNorm::One:
            return std::string("NormSpec(l1)");
          case PNorm::Two:
            return std::string("NormSpec(l2)");
          default:
            return std::string("NormSpec(linf)");
        }
      });

  m.def("vector_norm", &vector_norm, py::arg("x"), py::arg("spec"));
  m.def("induced_matrix_norm", &induced_matrix_norm, py::arg("A"),
        py::arg("spec"));
  m.def("log_norm", &log_norm, py::arg("A"), py::arg("spec"));
  m.def("log_norm_limit_oracle", &log_norm_limit_oracle, py::arg("A"),
        py::arg("spec"), py::arg("h") = 1e-7);

  py::class_<EquivalencePair>(m, "EquivalencePair")
      .def(py::init([](double k_ab, double k_ba, bool minimal) {
             return EquivalencePair{k_ab, k_ba, minimal};
           }),
           py::arg("k_ab"), py::arg("k_ba"), py::arg("minimal") = true)
      .def_readonly("k_ab", &EquivalencePair::k_ab)
      .def_readonly("k_ba", &EquivalencePair::k_ba)
      .def_readonly("minimal", &EquivalencePair::minimal)
      .def("ratio", &EquivalencePair::ratio);
  m.def("equivalence_coefficients", &equivalence_coefficients,
        py::arg("alpha"), py::arg("beta"), py::arg("n"));

  // ---- linexp ----
  py::class_<LinExpParams>(m, "LinExpParams")
      .def(py::init<double, double, double, double>(), py::arg("q"),
           py::arg("c_lin"), py::arg("c_exp"), py::arg("t_c"))
      .def_property_readonly("q", &LinExpParams::q)
      .def_property_readonly("c_lin", &LinExpParams::c_lin)
      .def_property_readonly("c_exp", &LinExpParams::c_exp)
      .def_property_readonly("t_c", &LinExpParams::t_c);
  m.def("linexp_eval", &linexp_eval, py::arg("t"), py::arg("params"));

  py::class_<SaturatedOdeParams>(m, "SaturatedOdeParams")
      .def(py::init<double, double, double, double>(), py::arg("c_exp"),
           py::arg("d"), py::arg("q"), py::arg("u_max") = 0.0);
  m.def("saturated_ode_solution", &saturated_ode_solution, py::arg("t"),
        py::arg("params"));
  m.def("saturated_ode_input_bound", &saturated_ode_input_bound, py::arg("t"),
        py::arg("params"));

  // ---- bounds ----
  py::class_<DecayEnvelope>(m, "DecayEnvelope")
      .def("__call__", &DecayEnvelope::operator())
      .def("is_exponential", &DecayEnvelope::is_exponential)
      .def_property_readonly("certified", &DecayEnvelope::certified)
      .def("params", &DecayEnvelope::params);

  py::class_<ContractionProfile>(m, "ContractionProfile")
      .def(py::init<NormSpec, NormSpec, double, double, EquivalencePair,
                    Eigen::VectorXd>(),
           py::arg("global_norm"), py::arg("local_norm"), py::arg("c_exp"),
           py::arg("r"), py::arg("equiv"), py::arg("x_star"))
      .def_static("same_norm", &ContractionProfile::same_norm,
                  py::arg("norm"), py::arg("c_exp"), py::arg("r"),
                  py::arg("x_star"))
      .def_readonly("c_exp", &ContractionProfile::c_exp)
      .def_readonly("r", &ContractionProfile::r)
      .def_readonly("equiv", &ContractionProfile::equiv)
      .def_readonly("x_star", &ContractionProfile::x_star)
      .def("k", &ContractionProfile::k)
      .def("norms_match", &ContractionProfile::norms_match);

  py::class_<IssProfile>(m, "IssProfile")
      .def(py::init<ContractionProfile, double, double>(), py::arg("base"),
           py::arg("L_u"), py::arg("u_max"))
      .def_readonly("L_u", &IssProfile::L_u)
      .def_readonly("u_max", &IssProfile::u_max);

  m.def("same_norm_bound", &same_norm_bound, py::arg("profile"),
        py::arg("dist0"));
  m.def("diff_norm_bound", &diff_norm_bound, py::arg("profile"),
        py::arg("dist0"), py::arg("rho"));
  m.def("piecewise_bound_gB", &piecewise_bound_gB, py::arg("t"),
        py::arg("profile"), py::arg("dist0"), py::arg("rho"));
  m.def("iss_bound", &iss_bound, py::arg("t"), py::arg("profile"),
        py::arg("dist0"));
  m.def("rho_contraction_time", &rho_contraction_time, py::arg("c"),
        py::arg("rho"));
  m.def("rho_contraction_time_cross_norm", &rho_contraction_time_cross_norm,
        py::arg("c"), py::arg("rho"), py::arg("k"));

  py::class_<BallInclusionRadii>(m, "BallInclusionRadii")
      .def_readonly("inner", &BallInclusionRadii::inner)
      .def_readonly("outer", &BallInclusionRadii::outer);
  m.def("ball_inclusion_radii", &ball_inclusion_radii, py::arg("alpha"),
        py::arg("beta"), py::arg("r"), py::arg("n"));

  py::class_<RhoChoice>(m, "RhoChoice")
      .def_readonly("rho", &RhoChoice::rho)
      .def_readonly("params", &RhoChoice::params);
  m.def("optimize_rho", &optimize_rho, py::arg("profile"), py::arg("dist0"),
        py::arg("grid_points") = 99);

  // ---- dynamics ----
  py::enum_<Scheme>(m, "Scheme")
      .value("Euler", Scheme::Euler)
      .value("Rk4", Scheme::Rk4);

  py::class_<VectorFieldHandle>(m, "VectorFieldHandle")
      .def_readonly("dim", &VectorFieldHandle::dim)
      .def("eval",
           [](const VectorFieldHandle& vf, double t, const Eigen::VectorXd& x) {
             return vf.eval(t, x);
           })
      .def("jacobian", [](const VectorFieldHandle& vf, double t,
                          const Eigen::VectorXd& x) {
        if (!vf.jacobian)
          throw NumericError("field has no analytic jacobian");
        return vf.jacobian(t, x);
      });

  m.def(
      "make_field",
      [](int dim,
         std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> eval,
         std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)>
             jacobian) {
        VectorFieldHandle vf;
        vf.dim = dim;
        vf.eval = std::move(eval);
        if (jacobian) vf.jacobian = std::move(jacobian);
        return vf;
      },
      py::arg("dim"), py::arg("eval"), py::arg("jacobian") = nullptr,
      "Wrap python callables (t, x) -> xdot / Jacobian as a vector field");
  m.def("make_saturated_field", &make_saturated_field, py::arg("c"),
        py::arg("d"), py::arg("x_star") = 0.0);
  m.def("make_linear_field", &make_linear_field, py::arg("A"),
        py::arg("x_star"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("dt", &Trajectory::dt)
      .def_readonly("scheme", &Trajectory::scheme);
  m.def("integrate", &integrate, py::arg("field"), py::arg("x0"),
        py::arg("t_end"), py::arg("dt"), py::arg("scheme") = Scheme::Euler);
  m.def("jacobian_fd", &jacobian_fd, py::arg("field"), py::arg("t"),
        py::arg("x"), py::arg("h") = 0.0);
  m.def("estimate_dini", &estimate_dini, py::arg("distances"), py::arg("dt"));

  py::class_<BallSpec>(m, "BallSpec")
      .def(py::init([](Eigen::VectorXd center, double radius, NormSpec norm) {
             return BallSpec{std::move(center), radius, std::move(norm)};
           }),
           py::arg("center"), py::arg("radius"),
           py::arg("norm") = NormSpec::l2())
      .def_readonly("center", &BallSpec::center)
      .def_readonly("radius", &BallSpec::radius)
      .def_readonly("norm", &BallSpec::norm);
  m.def(
      "sample_in_ball",
      [](uint64_t seed, const BallSpec& ball, int count) {
        std::mt19937_64 rng(seed);
        std::vector<Eigen::VectorXd> out;
        out.reserve(count);
        for (int i = 0; i < count; ++i) out.push_back(sample_in_ball(rng, ball));
        return out;
      },
      py::arg("seed"), py::arg("ball"), py::arg("count") = 1);

  py::class_<ContractionRateEstimate>(m, "ContractionRateEstimate")
      .def_readonly("sup_mu", &ContractionRateEstimate::sup_mu)
      .def_readonly("argmax", &ContractionRateEstimate::argmax)
      .def_readonly("used_samples", &ContractionRateEstimate::used_samples)
      .def_readonly("excluded_kinks", &ContractionRateEstimate::excluded_kinks);
  m.def("empirical_contraction_rate", &empirical_contraction_rate,
        py::arg("field"), py::arg("ball"), py::arg("samples"), py::arg("seed"));

  py::class_<RadiusSearch>(m, "RadiusSearch")
      .def(py::init([](double r_min, double r_max, int steps) {
             return RadiusSearch{r_min, r_max, steps};
           }),
           py::arg("r_min") = 1e-3, py::arg("r_max") = 1.0,
           py::arg("steps") = 30);
  py::class_<RadiusEstimate>(m, "RadiusEstimate")
      .def_readonly("found", &RadiusEstimate::found)
      .def_readonly("radius", &RadiusEstimate::radius)
      .def_readonly("sup_mu", &RadiusEstimate::sup_mu);
  m.def("estimate_radius", &estimate_radius, py::arg("field"),
        py::arg("x_star"), py::arg("norm"), py::arg("c_target"),
        py::arg("search"), py::arg("samples"), py::arg("seed"));

  py::class_<EnvelopeReport>(m, "EnvelopeReport")
      .def_readonly("max_violation", &EnvelopeReport::max_violation)
      .def_readonly("argmax_t", &EnvelopeReport::argmax_t)
      .def_readonly("tol", &EnvelopeReport::tol)
      .def_readonly("pass_", &EnvelopeReport::pass)
      .def("__bool__", [](const EnvelopeReport& r) { return r.pass; });
  m.def(
      "verify_envelope",
      [](const Trajectory& traj, const Eigen::VectorXd& x_star,
         const NormSpec& norm, const std::function<double(double)>& envelope,
         std::optional<double> tol) {
        return verify_envelope(traj, x_star, norm, envelope, tol);
      },
      py::arg("trajectory"), py::arg("x_star"), py::arg("norm"),
      py::arg("envelope"), py::arg("tol") = std::nullopt);

  // ---- lp ----
  py::class_<LpProblem>(m, "LpProblem")
      .def(py::init<Eigen::VectorXd, Eigen::MatrixXd, Eigen::VectorXd,
                    double>(),
           py::arg("c"), py::arg("A"), py::arg("b"), py::arg("gamma") = 0.5)
      .def_readonly("c", &LpProblem::c)
      .def_readonly("A", &LpProblem::A)
      .def_readonly("b", &LpProblem::b)
      .def_readonly("gamma", &LpProblem::gamma)
      .def_property_readonly("n", &LpProblem::n)
      .def_property_readonly("m", &LpProblem::m);
  m.def("box3_problem", &box3_problem, py::arg("gamma") = 0.5);

  py::class_<PrimalDualState>(m, "PrimalDualState")
      .def(py::init([](Eigen::VectorXd x, Eigen::VectorXd lambda) {
             return PrimalDualState{std::move(x), std::move(lambda)};
           }),
           py::arg("x"), py::arg("lambda_"))
      .def_readwrite("x", &PrimalDualState::x)
      .def_readwrite("lambda_", &PrimalDualState::lambda)
      .def("stacked", &PrimalDualState::stacked)
      .def_static("split", &PrimalDualState::split, py::arg("problem"),
                  py::arg("z"));

  m.def("moreau_gradient_box", &moreau_gradient_box, py::arg("y"), py::arg("b"),
        py::arg("gamma"));
  m.def("f_lp", &f_lp, py::arg("state"), py::arg("problem"));

  py::class_<LpJacobian>(m, "LpJacobian")
      .def_readonly("J", &LpJacobian::J)
      .def_readonly("kink_rows", &LpJacobian::kink_rows);
  m.def("jacobian_f_lp", &jacobian_f_lp, py::arg("state"), py::arg("problem"));
  m.def("spectral_abscissa", &spectral_abscissa, py::arg("M"));

  py::class_<HurwitzReport>(m, "HurwitzReport")
      .def_readonly("hurwitz", &HurwitzReport::hurwitz)
      .def_readonly("alpha", &HurwitzReport::alpha);
  m.def("check_hurwitz", &check_hurwitz, py::arg("M"), py::arg("eps") = 1e-9);

  py::class_<WeakContractionReport>(m, "WeakContractionReport")
      .def_readonly("max_mu2", &WeakContractionReport::max_mu2)
      .def_readonly("max_offdiag_sym", &WeakContractionReport::max_offdiag_sym)
      .def_readonly("used_samples", &WeakContractionReport::used_samples)
      .def_readonly("kink_skipped", &WeakContractionReport::kink_skipped)
      .def_readonly("pass_", &WeakContractionReport::pass);
  m.def("weak_contraction_certificate", &weak_contraction_certificate,
        py::arg("problem"), py::arg("samples"), py::arg("seed"));

  py::class_<KktResidual>(m, "KktResidual")
      .def_readonly("stationarity", &KktResidual::stationarity)
      .def_readonly("primal", &KktResidual::primal)
      .def_readonly("dual", &KktResidual::dual)
      .def_readonly("complementarity", &KktResidual::complementarity)
      .def("max_residual", &KktResidual::max_residual);
  m.def("kkt_residual", &kkt_residual, py::arg("state"), py::arg("problem"));

  py::class_<LpSolveResult>(m, "LpSolveResult")
      .def_readonly("z", &LpSolveResult::z)
      .def_readonly("converged", &LpSolveResult::converged)
      .def_readonly("residual_inf", &LpSolveResult::residual_inf)
      .def_readonly("t_integrated", &LpSolveResult::t_integrated)
      .def_readonly("kkt", &LpSolveResult::kkt);
  m.def("solve_lp_by_integration", &solve_lp_by_integration,
        py::arg("problem"), py::arg("x0"), py::arg("lambda0"),
        py::arg("dt") = 1e-3, py::arg("t_end") = 300.0,
        py::arg("tol") = 1e-6);

  py::class_<VertexOracleResult>(m, "VertexOracleResult")
      .def_readonly("feasible", &VertexOracleResult::feasible)
      .def_readonly("unique", &VertexOracleResult::unique)
      .def_readonly("optimal_value", &VertexOracleResult::optimal_value)
      .def_readonly("optimal_vertices", &VertexOracleResult::optimal_vertices)
      .def_readonly("vertex_count", &VertexOracleResult::vertex_count);
  m.def("vertex_oracle", &vertex_oracle, py::arg("problem"));

  py::class_<ProbeRecord>(m, "ProbeRecord")
      .def_readonly("index", &ProbeRecord::index)
      .def_readonly("n", &ProbeRecord::n)
      .def_readonly("m", &ProbeRecord::m)
      .def_readonly("unique_solution", &ProbeRecord::unique_solution)
      .def_readonly("hurwitz", &ProbeRecord::hurwitz)
      .def_readonly("alpha", &ProbeRecord::alpha)
      .def_readonly("converged", &ProbeRecord::converged)
      .def_readonly("kink_adjacent", &ProbeRecord::kink_adjacent)
      .def_readonly("inconclusive", &ProbeRecord::inconclusive)
      .def_readonly("agree", &ProbeRecord::agree);
  m.def("conjecture_probe", &conjecture_probe, py::arg("seed"),
        py::arg("count"));

  m.def("make_lp_field", &make_lp_field, py::arg("problem"));

  py::class_<LocalContractionCertificate>(m, "LocalContractionCertificate")
      .def_readonly("valid", &LocalContractionCertificate::valid)
      .def_readonly("Q", &LocalContractionCertificate::Q)
      .def_readonly("c_exp", &LocalContractionCertificate::c_exp);
  m.def("local_contraction_certificate", &local_contraction_certificate,
        py::arg("problem"), py::arg("z_star"));

  // ---- experiment ----
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("n_trajectories", &ExperimentConfig::n_trajectories)
      .def_readwrite("noise_std", &ExperimentConfig::noise_std)
      .def_readwrite("dt", &ExperimentConfig::dt)
      .def_readwrite("t_end", &ExperimentConfig::t_end)
      .def_readwrite("gamma", &ExperimentConfig::gamma)
      .def_readwrite("problem_tag", &ExperimentConfig::problem_tag)
      .def_readwrite("x0", &ExperimentConfig::x0)
      .def_readwrite("out_dir", &ExperimentConfig::out_dir)
      .def_readwrite("write_trajectories",
                     &ExperimentConfig::write_trajectories)
      .def_readwrite("csv_stride", &ExperimentConfig::csv_stride)
      .def_readwrite("convergence_tol", &ExperimentConfig::convergence_tol)
      .def_readwrite("threads", &ExperimentConfig::threads);

  py::class_<ExperimentSummary>(m, "ExperimentSummary")
      .def_readonly("z_star", &ExperimentSummary::z_star)
      .def_readonly("alpha", &ExperimentSummary::alpha)
      .def_readonly("hurwitz", &ExperimentSummary::hurwitz)
      .def_readonly("times", &ExperimentSummary::times)
      .def_readonly("mean_distance", &ExperimentSummary::mean_distance)
      .def_readonly("std_distance", &ExperimentSummary::std_distance)
      .def_readonly("finals", &ExperimentSummary::finals)
      .def_readonly("nonconverged", &ExperimentSummary::nonconverged)
      .def_readonly("final_linf_max", &ExperimentSummary::final_linf_max);
  m.def("resolve_problem", &resolve_problem, py::arg("config"));
  m.def(
      "run_experiment",
      [](const ExperimentConfig& config, std::optional<LpProblem> prob) {
        return run_experiment(config,
                              prob ? *prob : resolve_problem(config));
      },
      py::arg("config"), py::arg("problem") = std::nullopt);
  m.def("thread_budget", &thread_budget, py::arg("requested") = 0);
}
