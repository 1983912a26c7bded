#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tsvar/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tsvar: calculus of variations on finite time scales"};
  app.require_subcommand(1);

  std::string problem;
  std::string y_path;
  tsvar::cli::SolveOptions solve_opts;
  double tol = tsvar::kELTolerance;
  std::uint64_t seed = 0;
  int cases = 1000;

  auto* solve = app.add_subcommand("solve", "minimize J = J_delta * J_nabla for a problem file");
  solve->add_option("problem", problem, "problem file (JSON, schema tsvar/1)")->required();
  solve->add_option("--out", solve_opts.out_dir, "output directory")->capture_default_str();
  solve->add_flag("--maximize", solve_opts.maximize, "maximize J instead of minimizing it");

  auto* check = app.add_subcommand("check-el", "evaluate both Euler-Lagrange integral equations at y");
  check->add_option("problem", problem, "problem file")->required();
  check->add_option("--y", y_path, "CSV file with columns t,y")->required();
  check->add_option("--tol", tol, "relative constancy tolerance")->capture_default_str();

  auto* verify = app.add_subcommand("verify-identities", "randomized check of the exact calculus identities");
  verify->add_option("--seed", seed, "random seed")->capture_default_str();
  verify->add_option("--cases", cases, "number of random cases")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "print J_delta, J_nabla, J and the C1 norm of y");
  eval->add_option("problem", problem, "problem file")->required();
  eval->add_option("--y", y_path, "CSV file with columns t,y")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tsvar::cli::kInputError;
  }

  if (*solve) return tsvar::cli::cmd_solve(problem, solve_opts, std::cout, std::cerr);
  if (*check) return tsvar::cli::cmd_check_el(problem, {y_path, tol}, std::cout, std::cerr);
  if (*verify) return tsvar::cli::cmd_verify_identities(seed, cases, std::cout, std::cerr);
  if (*eval) return tsvar::cli::cmd_eval(problem, y_path, std::cout, std::cerr);
  return tsvar::cli::kInputError;
}
