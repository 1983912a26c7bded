#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsvar/errors.hpp"
#include "tsvar/lagrangian.hpp"
#include "tsvar/solver.hpp"
#include "tsvar/timescale.hpp"
#include "tsvar/variational.hpp"

namespace tsvar {

using json = nlohmann::json;

/// Schema tag accepted in problem files.
inline constexpr const char* kProblemSchema = "tsvar/1";

/// Problem file or CSV input that cannot be used.
class InputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// -- JSON -------------------------------------------------------------------

inline json to_json(const TimeScale& ts) {
  return json(std::vector<double>(ts.points().begin(), ts.points().end()));
}

inline TimeScale timescale_from_json(const json& j) {
  if (!j.is_array()) throw InputError("time scale must be a JSON array of numbers");
  std::vector<double> points;
  for (const auto& x : j) {
    if (!x.is_number()) throw InputError("time scale must be a JSON array of numbers");
    points.push_back(x.get<double>());
  }
  return TimeScale(std::move(points));
}

inline json to_json(const GridFunction& f) {
  return {{"scale", to_json(f.scale())},
          {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

inline GridFunction grid_function_from_json(const json& j) {
  if (!j.is_object() || !j.contains("scale") || !j.contains("values")) {
    throw InputError("grid function must be an object with 'scale' and 'values'");
  }
  return GridFunction(timescale_from_json(j.at("scale")), j.at("values").get<std::vector<double>>());
}

inline json to_json(const ELReport& r) {
  return {{"which", std::string(to_string(r.which))},
          {"domain",
           {{"kind", std::string(to_string(r.domain.kind))},
            {"begin", r.domain.begin},
            {"end", r.domain.end}}},
          {"t", r.t},
          {"trace", r.residual_trace},
          {"constant_c", r.constant_c},
          {"deviation", r.deviation},
          {"j_delta", r.j_delta},
          {"j_nabla", r.j_nabla}};
}

inline ELReport el_report_from_json(const json& j) {
  ELReport r;
  r.which = el_form_from_string(j.at("which").get<std::string>());
  const json& d = j.at("domain");
  r.domain = KappaSet{kappa_from_string(d.at("kind").get<std::string>()),
                      d.at("begin").get<Index>(), d.at("end").get<Index>()};
  r.t = j.at("t").get<std::vector<double>>();
  r.residual_trace = j.at("trace").get<std::vector<double>>();
  r.constant_c = j.at("constant_c").get<double>();
  r.deviation = j.at("deviation").get<double>();
  r.j_delta = j.at("j_delta").get<double>();
  r.j_nabla = j.at("j_nabla").get<double>();
  return r;
}

inline json to_json(const SolveResult& r) {
  return {{"y", to_json(r.y)},
          {"j_value", r.j_value},
          {"gradient_norm", r.gradient_norm},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"el1", to_json(r.el1)},
          {"el2", to_json(r.el2)},
          {"j_history", r.j_history}};
}

inline SolveResult solve_result_from_json(const json& j) {
  return SolveResult{grid_function_from_json(j.at("y")),
                     j.at("j_value").get<double>(),
                     j.at("gradient_norm").get<double>(),
                     j.at("iterations").get<int>(),
                     j.at("converged").get<bool>(),
                     el_report_from_json(j.at("el1")),
                     el_report_from_json(j.at("el2")),
                     j.at("j_history").get<std::vector<double>>()};
}

// -- CSV --------------------------------------------------------------------

/// 17 significant digits: enough for an exact double round trip.
inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Header `t,y`, one row per point, LF line endings.
inline void write_solution_csv(std::ostream& out, const GridFunction& y) {
  out << "t,y\n";
  for (Index i = 0; i < y.scale().size(); ++i) {
    out << format_g17(y.scale()[i]) << ',' << format_g17(y(i)) << '\n';
  }
}

/// Columns t, trace, c, trace − c.
inline void write_el_csv(std::ostream& out, const ELReport& r) {
  out << "t,trace,c,trace_minus_c\n";
  for (std::size_t j = 0; j < r.t.size(); ++j) {
    out << format_g17(r.t[j]) << ',' << format_g17(r.residual_trace[j]) << ','
        << format_g17(r.constant_c) << ',' << format_g17(r.residual_trace[j] - r.constant_c)
        << '\n';
  }
}

/// Rows of a `t,y` CSV file.
inline std::vector<std::pair<double, double>> read_solution_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,y") throw InputError("CSV: expected header 't,y' on line 1");
  std::vector<std::pair<double, double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw InputError("CSV line " + std::to_string(line_no) + ": expected two columns");
    }
    try {
      std::size_t used_t = 0, used_y = 0;
      const std::string ts = line.substr(0, comma), ys = line.substr(comma + 1);
      const double t = std::stod(ts, &used_t);
      const double y = std::stod(ys, &used_y);
      if (used_t != ts.size() || used_y != ys.size()) throw std::invalid_argument("trailing");
      rows.emplace_back(t, y);
    } catch (const std::logic_error&) {
      throw InputError("CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return rows;
}

/// Grid function from CSV rows whose t column lists the scale's points
/// (compared to within 1e-12·(1 + |t|)).
inline GridFunction grid_function_from_rows(const TimeScale& ts,
                                            const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() != ts.size()) {
    throw InputError("CSV has " + std::to_string(rows.size()) + " rows but the scale has " +
                     std::to_string(ts.size()) + " points");
  }
  std::vector<double> values;
  values.reserve(rows.size());
  for (Index i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i].first - ts[i]) > 1e-12 * (1.0 + std::abs(ts[i]))) {
      throw InputError("CSV row " + std::to_string(i + 1) + ": t = " + format_g17(rows[i].first) +
                       " does not match scale point " + format_g17(ts[i]));
    }
    values.push_back(rows[i].second);
  }
  return GridFunction(ts, std::move(values));
}

inline GridFunction read_grid_function_csv(const std::string& path, const TimeScale& ts) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return grid_function_from_rows(ts, read_solution_csv(in));
}

// -- Problem files ------------------------------------------------------------

struct ProblemSpec {
  VariationalProblem problem;
  SolverConfig solver;
};

namespace detail {

inline double number_at(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw InputError(where + ": missing key '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw InputError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InputError(where + ": unknown key '" + key + "'");
  }
}

inline TimeScale parse_timescale_field(const json& j) {
  if (j.is_array()) return timescale_from_json(j);
  if (j.is_object()) {
    reject_unknown_keys(j, {"uniform"}, "timescale");
    if (!j.contains("uniform") || !j.at("uniform").is_object()) {
      throw InputError("timescale: expected an array or {\"uniform\": {...}}");
    }
    const json& u = j.at("uniform");
    reject_unknown_keys(u, {"a", "b", "n"}, "timescale.uniform");
    const double n = number_at(u, "n", "timescale.uniform");
    if (n != std::floor(n) || n < 3) throw InputError("timescale.uniform: 'n' must be an integer >= 3");
    return uniform_scale(number_at(u, "a", "timescale.uniform"),
                         number_at(u, "b", "timescale.uniform"), static_cast<std::size_t>(n));
  }
  throw InputError("timescale: expected an array or {\"uniform\": {...}}");
}

inline Lagrangian parse_lagrangian_field(const json& j, const TimeScale& ts, const std::string& key) {
  if (j.is_string()) return parse_lagrangian(j.get<std::string>());
  if (j.is_object()) {
    reject_unknown_keys(j, {"catalog"}, key);
    if (!j.contains("catalog") || !j.at("catalog").is_string()) {
      throw InputError(key + ": expected {\"catalog\": name}");
    }
    return catalog(j.at("catalog").get<std::string>(), CatalogContext{ts.a(), ts.b()});
  }
  throw InputError(key + ": expected an expression string or {\"catalog\": name}");
}

inline SolverConfig parse_solver_field(const json& j) {
  if (!j.is_object()) throw InputError("solver: expected an object");
  reject_unknown_keys(j,
                      {"max_iterations", "gradient_tolerance", "armijo_c", "backtrack_factor",
                       "initial_step", "seed", "maximize"},
                      "solver");
  SolverConfig c;
  auto integer = [&](const char* key) {
    const double v = number_at(j, key, "solver");
    if (v != std::floor(v) || v < 0) throw InputError(std::string("solver: '") + key + "' must be a non-negative integer");
    return v;
  };
  if (j.contains("max_iterations")) c.max_iterations = static_cast<int>(integer("max_iterations"));
  if (j.contains("gradient_tolerance")) c.gradient_tolerance = number_at(j, "gradient_tolerance", "solver");
  if (j.contains("armijo_c")) c.armijo_c = number_at(j, "armijo_c", "solver");
  if (j.contains("backtrack_factor")) c.backtrack_factor = number_at(j, "backtrack_factor", "solver");
  if (j.contains("initial_step")) c.initial_step = number_at(j, "initial_step", "solver");
  if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(integer("seed"));
  if (j.contains("maximize")) {
    if (!j.at("maximize").is_boolean()) throw InputError("solver: 'maximize' must be a boolean");
    c.maximize = j.at("maximize").get<bool>();
  }
  c.validate();
  return c;
}

}  // namespace detail

/// Validates a parsed problem document (schema "tsvar/1").
inline ProblemSpec problem_from_json(const json& j) {
  if (!j.is_object()) throw InputError("problem file must contain a JSON object");
  detail::reject_unknown_keys(
      j, {"schema", "timescale", "lagrangian_delta", "lagrangian_nabla", "alpha", "beta", "solver"},
      "problem");
  if (j.contains("schema") && j.at("schema") != kProblemSchema) {
    throw InputError(std::string("problem: unsupported schema (expected \"") + kProblemSchema + "\")");
  }
  for (const char* key : {"timescale", "lagrangian_delta", "lagrangian_nabla"}) {
    if (!j.contains(key)) throw InputError(std::string("problem: missing key '") + key + "'");
  }
  TimeScale ts = detail::parse_timescale_field(j.at("timescale"));
  Lagrangian ld = detail::parse_lagrangian_field(j.at("lagrangian_delta"), ts, "lagrangian_delta");
  Lagrangian ln = detail::parse_lagrangian_field(j.at("lagrangian_nabla"), ts, "lagrangian_nabla");
  const double alpha = detail::number_at(j, "alpha", "problem");
  const double beta = detail::number_at(j, "beta", "problem");
  SolverConfig cfg = j.contains("solver") ? detail::parse_solver_field(j.at("solver")) : SolverConfig{};
  return {VariationalProblem(std::move(ts), std::move(ld), std::move(ln), alpha, beta), cfg};
}

/// Reads and validates a problem file. JSON syntax errors keep the parser's
/// byte position in the message.
inline ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw InputError(path + ": JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return problem_from_json(doc);
}

}  // namespace tsvar
