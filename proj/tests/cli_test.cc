#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "persuasion/cli.h"
#include "persuasion/json_io.h"

namespace persuasion {
namespace {

std::string Data(const std::string& name) { return std::string(TEST_DATA_DIR) + "/" + name; }

std::string Temp(const std::string& name) {
  return ::testing::TempDir() + "persuade_" + name;
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = Dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

TEST(Cli, CheckCraterOnSShape) {
  EXPECT_EQ(Call({"check-crater", Data("sshape.json")}).code, kExitPass);
}

TEST(Cli, CheckCraterOnSinFitFails) {
  const std::string out = Temp("crater.json");
  const Outcome r = Call({"check-crater", Data("sinfit.json"), "--out", out});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_FALSE(ReadJsonFile(out)["witness"].is_null());
}

TEST(Cli, CheckOlcSquareAgainstLinear) {
  const std::string out = Temp("olc.json");
  const Outcome r = Call({"check-olc", Data("usq.json"), Data("ulin.json"), "--out", out});
  EXPECT_EQ(r.code, kExitFail);
  const Json j = ReadJsonFile(out);
  EXPECT_FALSE(j["holds"].get<bool>());
  const Json& w = j["witness"];
  EXPECT_LT(w["x"].get<double>(), w["z"].get<double>());
  EXPECT_GT(w["alpha"].get<double>(), 0.0);
  EXPECT_LT(w["alpha"].get<double>(), 1.0);
  EXPECT_NE(r.out.find("witness"), std::string::npos);
}

TEST(Cli, CheckOlcLinearAgainstSquare) {
  EXPECT_EQ(Call({"check-olc", Data("ulin.json"), Data("usq.json"), "--grid", "41"}).code,
            kExitPass);
}

TEST(Cli, CheckRegular) {
  EXPECT_EQ(Call({"check-regular", Data("sshape.json")}).code, kExitPass);
  const Outcome r = Call({"check-regular", Data("step.json")});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_NE(r.out.find("not regular"), std::string::npos);
}

TEST(Cli, CounterexampleForSinFit) {
  const std::string out = Temp("cx.json"), csv = Temp("cx.csv");
  const Outcome r = Call({"counterexample", Data("sinfit.json"), "--out", out, "--csv", csv});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  const Json j = ReadJsonFile(out);
  for (const char* key : {"f0", "v", "f", "necessity"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j["necessity"]["pass"].get<bool>());
  EXPECT_LE(j["necessity"]["gap"].get<double>(), 1e-6);
  EXPECT_GT(j["necessity"]["v_drop"].get<double>(), 0.0);
  const std::vector<std::string> lines = ReadLines(csv);
  ASSERT_EQ(lines.size(), 402u);
  EXPECT_EQ(lines[0], "m,u,v,p,F0_density,F_cdf");
}

TEST(Cli, CounterexampleWhenCraterHolds) {
  EXPECT_EQ(Call({"counterexample", Data("sshape.json")}).code, kExitFail);
}

TEST(Cli, ChordCounterexample) {
  const std::string out = Temp("chord.json");
  const Outcome r = Call({"counterexample", Data("usq.json"), Data("ulin.json"), "--grid", "21",
                      "--out", out});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  const Json j = ReadJsonFile(out);
  EXPECT_TRUE(j["comparison"]["strictly_higher"].get<bool>());
  EXPECT_EQ(DistributionFromJson(j["prior"]).atoms().size(), 2u);
}

TEST(Cli, CounterexampleOnTooCoarseGrid) {
  EXPECT_EQ(Call({"counterexample", Data("sinfit.json"), "--grid", "5"}).code, kExitNumeric);
}

TEST(Cli, SolveWithCsv) {
  const std::string out = Temp("solve.json"), csv = Temp("solve.csv");
  const Outcome r = Call({"solve", Data("uconcave.json"), Data("uniform.json"), "--grid", "11",
                      "--out", out, "--csv", csv});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  const Json j = ReadJsonFile(out);
  EXPECT_NEAR(j["value"].get<double>(), 0.25, 1e-12);
  const Distribution f = DistributionFromJson(j["optimizer"]);
  ASSERT_EQ(f.atoms().size(), 1u);
  EXPECT_NEAR(f.atoms()[0].x, 0.5, 1e-12);
  const std::vector<std::string> lines = ReadLines(csv);
  ASSERT_EQ(lines.size(), 12u);
  EXPECT_EQ(lines[0], "x,F0cdf,Fcdf,C_F0,C_F,u,p");
}

TEST(Cli, SolveOutputRoundTrips) {
  const std::string out = Temp("solve_rt.json");
  ASSERT_EQ(Call({"solve", Data("sshape.json"), Data("uniform.json"), "--grid", "41", "--out",
                  out}).code,
            kExitPass);
  const Json j = ReadJsonFile(out);
  const Distribution f = DistributionFromJson(j["optimizer"]);
  EXPECT_EQ(ToJson(f).dump(), j["optimizer"].dump());
}

TEST(Cli, Binary) {
  const std::string out = Temp("binary.json");
  EXPECT_EQ(Call({"binary", Data("step.json"), Data("binary.json"), "--out", out}).code, kExitPass);
  EXPECT_NEAR(ReadJsonFile(out)["value"].get<double>(), 0.6, 1e-12);
  const Outcome r = Call({"binary", Data("step.json"), "--mu", "0.3"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_NE(r.out.find("= 0.6"), std::string::npos);
  EXPECT_EQ(Call({"binary", Data("step.json")}).code, kExitUsage);
}

TEST(Cli, Certify) {
  EXPECT_EQ(Call({"certify", Data("uconcave.json"), Data("uniform.json"), Data("half.json"),
                  "--grid", "101"}).code,
            kExitPass);
  EXPECT_EQ(Call({"certify", Data("uconcave.json"), Data("uniform.json"), Data("uniform.json"),
                  "--grid", "101"}).code,
            kExitFail);
}

TEST(Cli, Compare) {
  const std::string out = Temp("compare.json");
  const Outcome r = Call({"compare", Data("uconcave.json"), Data("usq.json"), Data("uniform.json"),
                      "--grid", "41", "--out", out});
  EXPECT_EQ(r.code, kExitPass);
  const Json j = ReadJsonFile(out);
  EXPECT_TRUE(j["strictly_lower"].get<bool>());
  EXPECT_FALSE(j["u_probe_values"].empty());
}

TEST(Cli, ExperimentAndAlias) {
  const std::string out = Temp("exp.json"), csv = Temp("exp.csv");
  EXPECT_EQ(Call({"experiment", "--kind", "prop1", "--count", "5", "--out", out, "--csv", csv})
                .code,
            kExitPass);
  const Json j = ReadJsonFile(out);
  EXPECT_EQ(j["passes"], 5);
  EXPECT_EQ(ReadLines(csv).size(), 6u);
  EXPECT_EQ(Call({"oracle", "--kind", "duality", "--count", "2", "--seed", "4"}).code, kExitPass);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(Call({}).code, kExitUsage);
  EXPECT_EQ(Call({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Call({"check-olc", Data("usq.json")}).code, kExitUsage);
  EXPECT_EQ(Call({"check-crater", Data("missing.json")}).code, kExitUsage);
  EXPECT_EQ(Call({"check-crater", Data("bad.json")}).code, kExitUsage);
  EXPECT_EQ(Call({"solve", Data("usq.json"), Data("uniform.json"), "--grid", "2"}).code,
            kExitUsage);
  EXPECT_EQ(Call({"experiment", "--kind", "thm9"}).code, kExitUsage);
  EXPECT_EQ(Call({"experiment"}).code, kExitUsage);
  // A payoff used as a prior does not parse against the distribution schema.
  EXPECT_EQ(Call({"solve", Data("usq.json"), Data("usq.json")}).code, kExitUsage);
}

TEST(Cli, Help) {
  const Outcome r = Call({"--help"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_NE(r.out.find("counterexample"), std::string::npos);
}

}  // namespace
}  // namespace persuasion
