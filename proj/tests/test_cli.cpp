#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "opm/cli.hpp"
#include "opm/types.hpp"

using opm::Json;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = opm::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST(Cli, ValidateZooModel) {
  CliRun r = run({"validate", "classical:3"});
  EXPECT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["command"], "validate");
  EXPECT_EQ(j["exit_code"], 0);
}

TEST(Cli, ValidateModelFile) {
  std::string path = ::testing::TempDir() + "opm_cli_bit.json";
  {
    std::ofstream f(path);
    f << R"({"outcomes": ["a", "b"], "tests": [["a", "b"]], "pure_states": [{"a": 1}, {"b": 1}]})";
  }
  EXPECT_EQ(run({"validate", path}).code, 0);
  {
    std::ofstream f(path);
    f << R"({"outcomes": ["a", "b"], "tests": [["a", "b"]], "pure_states": [{"a": 0.6, "b": 0.6}]})";
  }
  CliRun bad = run({"validate", path});
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(Json::parse(bad.out)["result"]["errors"][0]["error"], "StateSumViolation");
  std::remove(path.c_str());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"validate", "/nonexistent/model.json"}).code, 3);
  EXPECT_EQ(run({"validate", "classical:3", "--bogus"}).code, 2);
  EXPECT_EQ(run({"verify-axioms", "square-bit"}).code, 1);
  EXPECT_EQ(run({"verify-axioms", "classical:2"}).code, 0);
  EXPECT_EQ(run({"haar-lambda", "2"}).code, 2);
}

TEST(Cli, LambdaReportsBoundary) {
  Json ok = Json::parse(run({"lambda", "3", "0.5"}).out);
  EXPECT_TRUE(ok["result"]["positive"].get<bool>());
  Json bad = Json::parse(run({"lambda", "3", "1.2"}).out);
  EXPECT_FALSE(bad["result"]["positive"].get<bool>());
  EXPECT_NEAR(bad["result"]["orthogonal_pair_value"].get<double>(), (1 - 1.2) / 9, 1e-12);
}

TEST(Cli, EntropyOfSquareBitEdge) {
  CliRun r = run({"entropy", "square-bit", "--state", "x0=1,y0=1/2"});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  Json j = Json::parse(r.out)["result"];
  EXPECT_EQ(j["H"].get<double>(), 0.0);
  EXPECT_EQ(j["S"].get<double>(), 1.0);
  EXPECT_FALSE(j["monoentropic"].get<bool>());
}

TEST(Cli, HomogeneityMap) {
  CliRun r = run({"homogeneity-map", "classical:2", "--a", "1,2", "--b", "2,1"});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  Json j = Json::parse(r.out)["result"];
  EXPECT_LT(j["residual"].get<double>(), 1e-12);
}

TEST(Cli, TextFormat) {
  CliRun r = run({"--format", "text", "validate", "classical:3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_THROW(Json::parse(r.out), Json::parse_error);
  EXPECT_FALSE(r.out.empty());
}

TEST(Cli, ToleranceOverridesAppearInEnvelope) {
  Json j = Json::parse(run({"--tol", "sum=1e-6", "validate", "classical:3"}).out);
  EXPECT_DOUBLE_EQ(j["tolerances"]["sum"].get<double>(), 1e-6);
  EXPECT_EQ(run({"--tol", "nonsense=1", "validate", "classical:3"}).code, 2);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands = {
      {"validate", "quantum:2"},
      {"verify-axioms", "quantum:2", "--seed", "7"},
      {"entropy", "classical:3", "--state", "a=1/2,b=1/3"},
      {"embed", "spin:3"},
      {"homogeneity-map", "classical:3", "--a", "1,1/2,1/3", "--b", "1/5,1,1"},
      {"lambda", "2", "0.7"},
      {"haar-lambda", "2", "--samples", "2000", "--seed", "4"},
  };
  for (const auto& c : commands) {
    CliRun a = run(c);
    CliRun b = run(c);
    EXPECT_EQ(a.out, b.out) << c[0];
    EXPECT_EQ(a.code, b.code) << c[0];
  }
}
