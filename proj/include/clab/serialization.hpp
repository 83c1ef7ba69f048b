#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "clab/bounds.hpp"
#include "clab/linexp.hpp"
#include "clab/lp.hpp"
#include "clab/norms.hpp"

namespace clab {

// JSON shapes:
//   norm     {"kind":"l1"|"l2"|"linf"} or {"kind":"weighted","p":1|2|"inf","Q":[[...]]}
//   linexp   {"q":..,"c_lin":..,"c_exp":..,"t_c":..}
//   problem  {"c":[..],"A":[[..]],"b":[..],"gamma":..}
//   profile  {"global_norm":..,"local_norm":..,"c_exp":..,"r":..,"x_star":[..],
//             "equiv":{"k_ab":..,"k_ba":..,"minimal":..}?,  // derived if absent
//             "L_u":..?, "u_max":..?}                        // ISS extras
// Parse failures throw ConfigError.

nlohmann::json norm_to_json(const NormSpec& spec);
NormSpec norm_from_json(const nlohmann::json& j);

nlohmann::json linexp_to_json(const LinExpParams& p);
LinExpParams linexp_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const LpProblem& prob);
LpProblem problem_from_json(const nlohmann::json& j);

ContractionProfile profile_from_json(const nlohmann::json& j);
IssProfile iss_profile_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

// Shortest decimal that round-trips (17 significant digits).
std::string format_double(double v);

// Uniform grid "start:stop:step" (stop inclusive up to roundoff).
std::vector<double> parse_time_grid(const std::string& text);

// Comma-separated float list, e.g. a CLI --x0 argument.
Eigen::VectorXd parse_vector(const std::string& text);

// Header t,x1,...,xn and one 17-digit row per sample.
void write_trajectory_csv(std::ostream& os, const std::vector<double>& times,
                          const std::vector<Eigen::VectorXd>& states,
                          int stride = 1);

void write_series_csv(std::ostream& os, const std::string& value_header,
                      const std::vector<double>& times,
                      const std::vector<double>& values);

}  // namespace clab
