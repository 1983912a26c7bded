#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "tsvar/commands.hpp"

#ifndef TSVAR_SOURCE_DIR
#error "TSVAR_SOURCE_DIR must be defined"
#endif

namespace tsvar {
namespace {

using cli::kInputError;
using cli::kNumericFailure;
using cli::kSuccess;
using testing::read_file;
using testing::TempDir;

const std::filesystem::path kSource(TSVAR_SOURCE_DIR);

std::string problem_text(const std::string& scale, const std::string& ld, const std::string& ln,
                         double alpha, double beta, const std::string& extra = "") {
  std::ostringstream s;
  s << "{\"timescale\": " << scale << ", \"lagrangian_delta\": " << ld
    << ", \"lagrangian_nabla\": " << ln << ", \"alpha\": " << alpha << ", \"beta\": " << beta
    << extra << "}";
  return s.str();
}

GridFunction read_solution(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  const auto rows = read_solution_csv(in);
  std::vector<double> t, y;
  for (auto [a, b] : rows) {
    t.push_back(a);
    y.push_back(b);
  }
  return GridFunction(make_timescale(t), y);
}

TEST(CliSolve, ThreePointExample) {
  TempDir dir("solve");
  const std::string p = dir.write("p.json", problem_text("[0,1,2]", "\"dy^2\"", "\"dy^2\"", 0, 2));
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_solve(p, {(dir.path() / "out").string(), false}, out, err), kSuccess) << err.str();
  const GridFunction y = read_solution(dir.path() / "out" / "solution.csv");
  ASSERT_EQ(y.scale().size(), 3u);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(y(i), static_cast<double>(i), 1e-6);
  const json report = json::parse(read_file(dir.path() / "out" / "report.json"));
  EXPECT_NEAR(report.at("j_value").get<double>(), 4.0, 1e-8);
  EXPECT_TRUE(report.at("converged").get<bool>());
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "out" / "el1.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "out" / "el2.csv"));
  EXPECT_NE(out.str().find("converged"), std::string::npos);
}

TEST(CliSolve, ParseErrorExitsOne) {
  TempDir dir("parse");
  const std::string p = dir.write("p.json", problem_text("[0,1,2]", "\"y ++ dy\"", "\"dy^2\"", 0, 2));
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_solve(p, {dir.path().string(), false}, out, err), kInputError);
  EXPECT_NE(err.str().find("syntax error at offset 4"), std::string::npos) << err.str();
}

TEST(CliSolve, ValidationErrorsExitOne) {
  TempDir dir("valid");
  std::ostringstream out, err;
  const std::string dup = dir.write("d.json", problem_text("[0,1,1]", "\"dy^2\"", "\"dy^2\"", 0, 2));
  EXPECT_EQ(cli::cmd_solve(dup, {dir.path().string(), false}, out, err), kInputError);
  EXPECT_NE(err.str().find("duplicate point at index 2"), std::string::npos) << err.str();
  EXPECT_EQ(cli::cmd_solve((dir.path() / "nope.json").string(), {dir.path().string(), false}, out, err),
            kInputError);
}

TEST(CliSolve, NonConvergenceExitsTwo) {
  TempDir dir("noconv");
  const std::string p = dir.write(
      "p.json", problem_text("[0,0.3,1,2.5,3]", "\"dy^2 + y^2\"", "\"dy^2\"", 1, 0,
                             ", \"solver\": {\"max_iterations\": 1}"));
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_solve(p, {(dir.path() / "o").string(), false}, out, err), kNumericFailure);
  EXPECT_NE(out.str().find("NOT converged"), std::string::npos);
}

TEST(CliSolve, DomainErrorExitsTwo) {
  TempDir dir("domain");
  const std::string p = dir.write("p.json", problem_text("[0,1,2]", "\"log(y)\"", "\"dy^2\"", -1, 2));
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_solve(p, {(dir.path() / "o").string(), false}, out, err), kNumericFailure);
  EXPECT_NE(err.str().find("log"), std::string::npos) << err.str();
}

TEST(CliCheckEl, StraightLinePassesOtherFails) {
  TempDir dir("check");
  const std::string p = dir.write("p.json", problem_text("[0,1,2]", "\"dy^2\"", "\"dy^2\"", 0, 2));
  const std::string good = dir.write("good.csv", "t,y\n0,0\n1,1\n2,2\n");
  const std::string bad = dir.write("bad.csv", "t,y\n0,0\n1,0.5\n2,2\n");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_check_el(p, {good, 1e-6}, out, err), kSuccess);
  EXPECT_NE(out.str().find("pass"), std::string::npos);
  std::ostringstream out2;
  EXPECT_EQ(cli::cmd_check_el(p, {bad, 1e-6}, out2, err), kNumericFailure);
  EXPECT_NE(out2.str().find("FAIL"), std::string::npos);
}

TEST(CliCheckEl, ConstantLagrangiansPassEverywhere) {
  TempDir dir("const");
  const std::string p = dir.write(
      "p.json", problem_text("[0,0.5,2]", "{\"catalog\": \"const(1)\"}", "{\"catalog\": \"const(1)\"}", 3, -1));
  const std::string y = dir.write("y.csv", "t,y\n0,3\n0.5,100\n2,-1\n");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_check_el(p, {y, 1e-6}, out, err), kSuccess) << out.str() << err.str();
}

TEST(CliCheckEl, MismatchedCsvExitsOne) {
  TempDir dir("mismatch");
  const std::string p = dir.write("p.json", problem_text("[0,1,2]", "\"dy^2\"", "\"dy^2\"", 0, 2));
  const std::string y = dir.write("y.csv", "t,y\n0,0\n1.5,1\n2,2\n");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_check_el(p, {y, 1e-6}, out, err), kInputError);
  EXPECT_NE(err.str().find("does not match"), std::string::npos);
}

TEST(CliEval, ReportsBothFunctionalsAndNorm) {
  TempDir dir("eval");
  const std::string p = dir.write("p.json", problem_text("[0,1,2]", "\"dy^2\"", "\"dy^2\"", 0, 2));
  const std::string y = dir.write("y.csv", "t,y\n0,0\n1,1\n2,2\n");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_eval(p, y, out, err), kSuccess) << err.str();
  const json j = json::parse(out.str());
  EXPECT_DOUBLE_EQ(j.at("j_delta").get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(j.at("j_nabla").get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(j.at("j").get<double>(), 4.0);
  EXPECT_DOUBLE_EQ(j.at("norm").get<double>(), 4.0);

  const std::string zero = dir.write("z.csv", "t,y\n0,0\n1,0\n2,0\n");
  std::ostringstream out2;
  ASSERT_EQ(cli::cmd_eval(p, zero, out2, err), kSuccess);
  EXPECT_EQ(json::parse(out2.str()).at("j").get<double>(), 0.0);
  EXPECT_EQ(json::parse(out2.str()).at("norm").get<double>(), 0.0);

  const std::string pc = dir.write(
      "c.json", problem_text("[0,1,2]", "{\"catalog\": \"const(1/(b-a))\"}",
                             "{\"catalog\": \"const(1/(b-a))\"}", 0, 2));
  std::ostringstream out3;
  ASSERT_EQ(cli::cmd_eval(pc, y, out3, err), kSuccess);
  const json c = json::parse(out3.str());
  EXPECT_DOUBLE_EQ(c.at("j_delta").get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(c.at("j_nabla").get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(c.at("j").get<double>(), 1.0);
}

TEST(CliVerifyIdentities, ZeroCasesWarnsAndPasses) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_verify_identities(1, 0, out, err), kSuccess);
  EXPECT_NE(err.str().find("warning"), std::string::npos);
}

TEST(CliVerifyIdentities, DeterministicForSeed) {
  std::ostringstream a, b, err;
  EXPECT_EQ(cli::cmd_verify_identities(42, 50, a, err), kSuccess) << a.str();
  EXPECT_EQ(cli::cmd_verify_identities(42, 50, b, err), kSuccess);
  EXPECT_EQ(a.str(), b.str());
}

class GoldenProblem : public ::testing::TestWithParam<const char*> {};

TEST_P(GoldenProblem, MatchesStoredSolution) {
  const std::string name = GetParam();
  TempDir dir("golden");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_solve((kSource / "problems" / (name + ".json")).string(),
                           {dir.path().string(), false}, out, err),
            kSuccess)
      << err.str();
  const GridFunction got = read_solution(dir.path() / "solution.csv");
  const GridFunction want = read_solution(kSource / "tests" / "golden" / (name + "_solution.csv"));
  ASSERT_EQ(got.scale().size(), want.scale().size());
  for (Index i = 0; i < got.scale().size(); ++i) {
    EXPECT_NEAR(got.scale()[i], want.scale()[i], 1e-12);
    EXPECT_NEAR(got(i), want(i), 1e-8) << "i=" << i;
  }
  const json expected = json::parse(read_file(kSource / "tests" / "golden" / "expected_j.json"));
  const json report = json::parse(read_file(dir.path() / "report.json"));
  const double j = expected.at(name).get<double>();
  EXPECT_NEAR(report.at("j_value").get<double>(), j, 1e-8 * j);
}

INSTANTIATE_TEST_SUITE_P(Problems, GoldenProblem,
                         ::testing::Values("example1_xi2", "example1_xi4", "example1_uniform101"));

TEST(ShippedProblems, AllLoad) {
  for (const auto& entry : std::filesystem::directory_iterator(kSource / "problems")) {
    EXPECT_NO_THROW(load_problem_file(entry.path().string())) << entry.path();
  }
}

}  // namespace
}  // namespace tsvar
