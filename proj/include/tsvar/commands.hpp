#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <string>

#include "tsvar/calculus.hpp"
#include "tsvar/io.hpp"
#include "tsvar/random.hpp"
#include "tsvar/solver.hpp"
#include "tsvar/variational.hpp"

namespace tsvar::cli {

/// Process exit codes.
enum ExitCode : int { kSuccess = 0, kInputError = 1, kNumericFailure = 2 };

struct SolveOptions {
  std::string out_dir = ".";
  bool maximize = false;
};

/// Solves the problem in `problem_path`; writes solution.csv, report.json,
/// el1.csv and el2.csv into out_dir and prints a summary.
inline int cmd_solve(const std::string& problem_path, const SolveOptions& opts, std::ostream& out,
                     std::ostream& err) {
  try {
    ProblemSpec spec = load_problem_file(problem_path);
    if (opts.maximize) spec.solver.maximize = true;
    const SolveResult r = solve(spec.problem, spec.solver);

    const std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    {
      std::ofstream f(dir / "solution.csv", std::ios::binary);
      write_solution_csv(f, r.y);
    }
    {
      std::ofstream f(dir / "report.json", std::ios::binary);
      f << to_json(r).dump(2) << '\n';
    }
    {
      std::ofstream f(dir / "el1.csv", std::ios::binary);
      write_el_csv(f, r.el1);
    }
    {
      std::ofstream f(dir / "el2.csv", std::ios::binary);
      write_el_csv(f, r.el2);
    }

    out << "J            = " << format_g17(r.j_value) << '\n'
        << "J_delta      = " << format_g17(r.el1.j_delta) << '\n'
        << "J_nabla      = " << format_g17(r.el1.j_nabla) << '\n'
        << "|grad J|_inf = " << format_g17(r.gradient_norm) << '\n'
        << "iterations   = " << r.iterations << '\n'
        << "EL1 deviation = " << format_g17(r.el1.deviation) << " (c = " << format_g17(r.el1.constant_c) << ")\n"
        << "EL2 deviation = " << format_g17(r.el2.deviation) << " (c = " << format_g17(r.el2.constant_c) << ")\n"
        << (r.converged ? "converged" : "NOT converged") << '\n';
    return r.converged ? kSuccess : kNumericFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const Error& e) {
    err << "error: " << problem_path << ": " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

struct CheckOptions {
  std::string y_path;
  double tolerance = kELTolerance;
};

/// Evaluates both Euler-Lagrange integral equations at the y in a CSV file.
inline int cmd_check_el(const std::string& problem_path, const CheckOptions& opts,
                        std::ostream& out, std::ostream& err) {
  try {
    const ProblemSpec spec = load_problem_file(problem_path);
    const GridFunction y = read_grid_function_csv(opts.y_path, spec.problem.scale());
    const ELReport reports[] = {el_residual_1(spec.problem, y), el_residual_2(spec.problem, y)};
    bool pass = true;
    for (const ELReport& r : reports) {
      const bool ok = r.passes(opts.tolerance);
      pass = pass && ok;
      out << to_string(r.which) << " on " << to_string(r.domain.kind) << '\n';
      write_el_csv(out, r);
      out << to_string(r.which) << " deviation = " << format_g17(r.deviation)
          << " c = " << format_g17(r.constant_c) << (ok ? " PASS" : " FAIL") << "\n\n";
    }
    out << (pass ? "pass" : "fail") << '\n';
    return pass ? kSuccess : kNumericFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

/// Prints J_Δ, J_∇, J and ‖y‖₁,∞ as one JSON object.
inline int cmd_eval(const std::string& problem_path, const std::string& y_path, std::ostream& out,
                    std::ostream& err) {
  try {
    const ProblemSpec spec = load_problem_file(problem_path);
    const GridFunction y = read_grid_function_csv(y_path, spec.problem.scale());
    const double jd = j_delta(spec.problem, y);
    const double jn = j_nabla(spec.problem, y);
    json j = {{"j_delta", jd}, {"j_nabla", jn}, {"j", jd * jn}, {"norm", c1_diamond_norm(y)}};
    out << j.dump() << '\n';
    return kSuccess;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

/// Worst relative residual of each exact identity over the randomized cases.
struct IdentitySummary {
  static constexpr std::size_t kCount = 12;
  static constexpr std::array<const char*, kCount> kNames = {
      "parts: int f^sigma g^Delta",  "parts: int f g^Delta",
      "parts: int f^rho g^nabla",    "parts: int f g^nabla",
      "derivative: f^nabla = (f^Delta)^rho", "derivative: f^Delta = (f^nabla)^sigma",
      "conversion: delta -> nabla",  "conversion: nabla -> delta",
      "splitting: delta at rho(b)",  "splitting: delta at sigma(a)",
      "splitting: nabla at rho(b)",  "splitting: nabla at sigma(a)"};
  std::array<double, kCount> worst{};
  int cases = 0;
};

/// Random scales of 5-50 points with log-uniform graininess in [1e-3, 10] and
/// random values in [-1, 1].
inline IdentitySummary run_identity_cases(std::uint64_t seed, int cases) {
  IdentitySummary s;
  s.cases = cases;
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const TimeScale ts = random_timescale(rng, 5, 50, 1e-3, 10.0);
    const GridFunction f = random_grid_function(rng, ts);
    const GridFunction g = random_grid_function(rng, ts);
    std::size_t k = 0;
    auto record = [&](const Residual& r) {
      s.worst[k] = std::max(s.worst[k], r.relative());
      ++k;
    };
    for (const Residual& r : check_parts_formulas(f, g)) record(r);
    for (const Residual& r : check_derivative_relation(f)) record(r);
    for (const Residual& r : check_integral_conversion(f)) record(r);
    for (const Residual& r : check_integral_splitting(f)) record(r);
  }
  return s;
}

inline int cmd_verify_identities(std::uint64_t seed, int cases, std::ostream& out, std::ostream& err) {
  if (cases < 0) {
    err << "error: --cases must be non-negative\n";
    return kInputError;
  }
  if (cases == 0) err << "warning: 0 cases requested; nothing was checked\n";
  const IdentitySummary s = run_identity_cases(seed, cases);
  bool pass = true;
  for (std::size_t k = 0; k < IdentitySummary::kCount; ++k) {
    const bool ok = s.worst[k] <= kIdentityTolerance;
    pass = pass && ok;
    out << (ok ? "PASS " : "FAIL ") << IdentitySummary::kNames[k] << "  worst relative residual "
        << format_g17(s.worst[k]) << '\n';
  }
  out << cases << " cases, seed " << seed << '\n';
  return pass ? kSuccess : kNumericFailure;
}

}  // namespace tsvar::cli
