#include "clab/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "clab/errors.hpp"

namespace clab {

namespace {

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("expected a JSON array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigError("expected a non-empty JSON array of rows");
  const size_t cols = j[0].size();
  Eigen::MatrixXd M(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ConfigError("matrix rows have inconsistent lengths");
    for (size_t k = 0; k < cols; ++k) M(i, k) = j[i][k].get<double>();
  }
  return M;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    out.push_back(row);
  }
  return out;
}

PNorm p_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return PNorm::Inf;
    throw ConfigError("norm exponent must be 1, 2 or \"inf\"");
  }
  const double p = j.get<double>();
  if (p == 1.0) return PNorm::One;
  if (p == 2.0) return PNorm::Two;
  throw ConfigError("norm exponent must be 1, 2 or \"inf\"");
}

template <typename Fn>
auto wrap_config(const Fn& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

nlohmann::json norm_to_json(const NormSpec& spec) {
  switch (spec.kind()) {
    case NormKind::L1:
      return {{"kind", "l1"}};
    case NormKind::L2:
      return {{"kind", "l2"}};
    case NormKind::Linf:
      return {{"kind", "linf"}};
    case NormKind::WeightedLp: {
      nlohmann::json j{{"kind", "weighted"}, {"Q", matrix_to_json(spec.weight())}};
      j["p"] = spec.p() == PNorm::Inf
                   ? nlohmann::json("inf")
                   : nlohmann::json(spec.p() == PNorm::One ? 1 : 2);
      return j;
    }
  }
  throw std::logic_error("unreachable");
}

NormSpec norm_from_json(const nlohmann::json& j) {
  return wrap_config([&] {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "l1") return NormSpec::l1();
    if (kind == "l2") return NormSpec::l2();
    if (kind == "linf") return NormSpec::linf();
    if (kind == "weighted")
      return NormSpec::weighted(p_from_json(j.at("p")),
                                matrix_from_json(j.at("Q")));
    throw ConfigError("unknown norm kind: " + kind);
  });
}

nlohmann::json linexp_to_json(const LinExpParams& p) {
  return {{"q", p.q()},
          {"c_lin", p.c_lin()},
          {"c_exp", p.c_exp()},
          {"t_c", p.t_c()}};
}

LinExpParams linexp_from_json(const nlohmann::json& j) {
  return wrap_config([&] {
    return LinExpParams(j.at("q").get<double>(), j.at("c_lin").get<double>(),
                        j.at("c_exp").get<double>(),
                        j.at("t_c").get<double>());
  });
}

nlohmann::json problem_to_json(const LpProblem& prob) {
  return {{"c", vector_to_json(prob.c)},
          {"A", matrix_to_json(prob.A)},
          {"b", vector_to_json(prob.b)},
          {"gamma", prob.gamma}};
}

LpProblem problem_from_json(const nlohmann::json& j) {
  return wrap_config([&] {
    return LpProblem(vector_from_json(j.at("c")), matrix_from_json(j.at("A")),
                     vector_from_json(j.at("b")),
                     j.value("gamma", 0.5));
  });
}

ContractionProfile profile_from_json(const nlohmann::json& j) {
  return wrap_config([&] {
    NormSpec global = norm_from_json(j.at("global_norm"));
    NormSpec local = norm_from_json(j.at("local_norm"));
    Eigen::VectorXd x_star = vector_from_json(j.at("x_star"));
    EquivalencePair equiv;
    if (j.contains("equiv")) {
      const auto& e = j.at("equiv");
      equiv = {e.at("k_ab").get<double>(), e.at("k_ba").get<double>(),
               e.value("minimal", true)};
    } else if (!global.same_as(local)) {
      equiv = equivalence_coefficients(local, global,
                                       static_cast<int>(x_star.size()));
    }
    return ContractionProfile(std::move(global), std::move(local),
                              j.at("c_exp").get<double>(),
                              j.at("r").get<double>(), equiv,
                              std::move(x_star));
  });
}

IssProfile iss_profile_from_json(const nlohmann::json& j) {
  return wrap_config([&] {
    return IssProfile(profile_from_json(j), j.at("L_u").get<double>(),
                      j.at("u_max").get<double>());
  });
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_time_grid(const std::string& text) {
  double start = 0.0, stop = 0.0, step = 0.0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
    throw ConfigError("time grid must look like start:stop:step");
  if (!(step > 0.0) || stop < start)
    throw ConfigError("time grid needs step > 0 and stop >= start");
  const long count = static_cast<long>((stop - start) / step + 1e-9);
  std::vector<double> grid(count + 1);
  for (long k = 0; k <= count; ++k)
    grid[k] = start + static_cast<double>(k) * step;
  return grid;
}

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> values;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t used = 0;
    try {
      values.push_back(std::stod(text.substr(pos), &used));
    } catch (const std::exception&) {
      throw ConfigError("bad float list: " + text);
    }
    pos += used;
    if (pos < text.size()) {
      if (text[pos] != ',') throw ConfigError("bad float list: " + text);
      ++pos;
    }
  }
  if (values.empty()) throw ConfigError("empty float list");
  return Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
}

void write_trajectory_csv(std::ostream& os, const std::vector<double>& times,
                          const std::vector<Eigen::VectorXd>& states,
                          int stride) {
  if (times.size() != states.size())
    throw std::invalid_argument("times/states size mismatch");
  if (times.empty()) throw std::invalid_argument("empty trajectory");
  if (stride < 1) throw std::invalid_argument("stride must be positive");
  os << 't';
  for (Eigen::Index i = 0; i < states[0].size(); ++i) os << ",x" << (i + 1);
  os << '\n';
  const size_t last = times.size() - 1;
  for (size_t k = 0; k <= last; k += stride) {
    os << format_double(times[k]);
    for (Eigen::Index i = 0; i < states[k].size(); ++i)
      os << ',' << format_double(states[k](i));
    os << '\n';
    if (k != last && k + stride > last) {  // always include the final sample
      os << format_double(times[last]);
      for (Eigen::Index i = 0; i < states[last].size(); ++i)
        os << ',' << format_double(states[last](i));
      os << '\n';
      break;
    }
  }
}

void write_series_csv(std::ostream& os, const std::string& value_header,
                      const std::vector<double>& times,
                      const std::vector<double>& values) {
  if (times.size() != values.size())
    throw std::invalid_argument("times/values size mismatch");
  os << "t," << value_header << '\n';
  for (size_t k = 0; k < times.size(); ++k)
    os << format_double(times[k]) << ',' << format_double(values[k]) << '\n';
}

}  // namespace clab
