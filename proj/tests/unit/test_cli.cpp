#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "persuade/fixtures.hpp"
#include "persuade/io.hpp"

using namespace persuade;

namespace {

const std::filesystem::path kData = PERSUADE_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("persuade_cli_" + name)).string();
}

std::string data(const std::string& name) { return (kData / name).string(); }

}  // namespace

TEST(CliSolve, ExampleOneBiCriteria) {
  auto r = invoke({"solve", data("example1.json"), "--eps", "0.05", "--mode", "bi"});
  ASSERT_EQ(r.code, 0) << r.err;
  json doc = json::parse(r.out);
  EXPECT_GE(doc["value"].get<double>(), 0.45);
  EXPECT_LE(doc["report"]["max_violation"].get<double>(), 0.05);
  auto s = scheme_from_json(doc);
  EXPECT_LE(s.size(), 3u);
}

TEST(CliSolve, SingleCriteriaNeedsMargin) {
  EXPECT_EQ(invoke({"solve", data("example1.json"), "--mode", "single"}).code, 1);
  auto r = invoke({"solve", data("example1.json"), "--mode", "single", "--slater-margin", "0.1666", "--eps", "0.05",
                "--out", tmp("single.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  json doc = read_json_file(tmp("single.json"));
  EXPECT_LE(doc["report"]["max_violation"].get<double>(), 1e-9);
}

TEST(CliSolve, ExitCodes) {
  auto inf = invoke({"solve", data("infeasible.json")});
  EXPECT_EQ(inf.code, 2);
  EXPECT_NE(inf.err.find("infeasible"), std::string::npos);
  auto bad = invoke({"solve", data("bad_prior.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("/prior"), std::string::npos) << bad.err;
  EXPECT_EQ(invoke({"solve", data("missing.json")}).code, 1);
  EXPECT_EQ(invoke({"solve", data("example1.json"), "--eps", "-1"}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({}).code, 1);
}

TEST(CliSolve, DeterministicAndSeedRecorded) {
  auto a = invoke({"solve", data("kl_budget.json"), "--eps", "0.1", "--seed", "9"});
  auto b = invoke({"solve", data("kl_budget.json"), "--eps", "0.1", "--seed", "9"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["report"]["seed"], 9);
}

TEST(CliSolve, GridCsv) {
  auto r = invoke({"solve", data("example1.json"), "--eps", "0.2", "--grid-csv", tmp("grid.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(tmp("grid.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "value,q0,q1");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_GT(rows, 2u);
}

TEST(CliConvert, HypercubeRatio) {
  ASSERT_EQ(invoke({"fixture", "appE1:2", "--out", tmp("e1.json"), "--scheme-out", tmp("e1_full.json")}).code, 0);
  auto r = invoke({"convert", tmp("e1.json"), tmp("e1_full.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  json doc = json::parse(r.out);
  EXPECT_NEAR(doc["report"]["ratio"].get<double>(), 0.25, 1e-9);
}

TEST(CliConvert, FeasibleSchemeKeepsRatioOne) {
  write_json_file(tmp("prior_only.json"), scheme_to_json(SignalingScheme::no_revelation(Posterior::uniform(2))));
  auto r = invoke({"convert", data("example1.json"), tmp("prior_only.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(json::parse(r.out)["report"]["ratio"].get<double>(), 1.0);
}

TEST(CliConvert, RejectsNonConvexAndInvalidInput) {
  ASSERT_EQ(invoke({"fixture", "prop3:2,1", "--out", tmp("p3.json"), "--scheme-out", tmp("p3_ref.json")}).code, 0);
  EXPECT_EQ(invoke({"convert", tmp("p3.json"), tmp("p3_ref.json")}).code, 1);
  write_json_file(tmp("full2.json"), scheme_to_json(SignalingScheme::full_revelation(Posterior::uniform(2))));
  auto tight = build_fixture(FixtureId{}).instance;
  tight.constraints[0].mode = ConstraintMode::ExAnte;
  tight.constraints[0].bound = 0.4;
  write_json_file(tmp("tight.json"), instance_to_json(tight));
  EXPECT_EQ(invoke({"convert", tmp("tight.json"), tmp("full2.json")}).code, 2);
}

TEST(CliVerify, Prop3ReferenceAndPerturbation) {
  ASSERT_EQ(invoke({"fixture", "prop3:2,2", "--out", tmp("p32.json"), "--scheme-out", tmp("p32_ref.json")}).code, 0);
  EXPECT_EQ(invoke({"verify", tmp("p32.json"), tmp("p32_ref.json")}).code, 0);
  json s = read_json_file(tmp("p32_ref.json"));
  double p0 = s["probs"][0].get<double>();
  s["probs"][0] = p0 + 0.01;
  s["probs"][1] = s["probs"][1].get<double>() - 0.01;
  write_json_file(tmp("p32_bad.json"), s);
  auto r = invoke({"verify", tmp("p32.json"), tmp("p32_bad.json")});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(json::parse(r.out)["valid"].get<bool>());
}

TEST(CliVerify, NoRevelationUnderTrivialConstraints) {
  ProblemInstance inst = build_fixture(FixtureId{}).instance;
  inst.constraints.clear();
  write_json_file(tmp("trivial.json"), instance_to_json(inst));
  write_json_file(tmp("prior2.json"), scheme_to_json(SignalingScheme::no_revelation(inst.prior)));
  EXPECT_EQ(invoke({"verify", tmp("trivial.json"), tmp("prior2.json")}).code, 0);
  write_json_file(tmp("prior3.json"), scheme_to_json(SignalingScheme::no_revelation(Posterior::uniform(3))));
  EXPECT_EQ(invoke({"verify", tmp("trivial.json"), tmp("prior3.json")}).code, 1);
}

TEST(CliFixture, VerifyAndErrors) {
  auto a = invoke({"fixture", "example1:0.16666666666666666", "--verify"});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_TRUE(json::parse(a.out)["pass"].get<bool>());
  auto b = invoke({"fixture", "appE3:2", "--verify"});
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(invoke({"fixture", "bogus"}).code, 1);
  auto c = invoke({"fixture", "appE2:3"});
  ASSERT_EQ(c.code, 0);
  EXPECT_NO_THROW(instance_from_json(json::parse(c.out)));
}
