#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "bfp/config.h"

using namespace bfp;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(BFP_FIXTURE_DIR) + "/" + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool has_error(const ParseResult& r, const std::string& needle) {
  for (const auto& e : r.errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

const char* kScalarFaces = R"({
  "faces": [{"density": [[1]]}, {"density": [[1]]}],
  "checks": ["commutation"]
})";

}  // namespace

TEST(ParseConfig, MinimalScalarFacesWarnTrivial) {
  const auto r = parse_config(kScalarFaces);
  ASSERT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front());
  ASSERT_EQ(r.config->warnings.size(), 1u);
  EXPECT_NE(r.config->warnings.front().find("trivial"), std::string::npos);
  EXPECT_EQ(r.config->truncation, 4u);
}

TEST(ParseConfig, ReportsAllErrors) {
  const auto r = parse_config(R"({
    "faces": [{"density": [[0.5, 0], [0, 0.4]], "left_generators": [[[1, 0, 0], [0, 1, 0]]]},
              {"density": [[1.2, 0], [0, -0.2]]}],
    "checks": ["witness", "bogus"],
    "colour": 3
  })");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_error(r, "trace"));
  EXPECT_TRUE(has_error(r, "-0.2"));
  EXPECT_TRUE(has_error(r, "not square"));
  EXPECT_TRUE(has_error(r, "unknown check 'bogus'"));
  EXPECT_TRUE(has_error(r, "unknown top-level key 'colour'"));
  EXPECT_TRUE(has_error(r, "requires a 'witness' block"));
  EXPECT_GE(r.errors.size(), 6u);
}

TEST(ParseConfig, EmptyChecksAndBadJsonRejected) {
  EXPECT_TRUE(has_error(parse_config(R"({"faces": [{"density": [[1]]}], "checks": []})"), "non-empty"));
  EXPECT_TRUE(has_error(parse_config("{faces"), "not valid JSON"));
  EXPECT_TRUE(has_error(parse_config(R"({"faces": [{"density": [[1]]}], "checks": ["commutation"],
                                        "expected": {"witness": {}}})"),
                        "not requested"));
}

TEST(ParseConfig, ComplexLiteralsAndOverrides) {
  const auto r = parse_config(R"({
    "faces": [{"left_generators": [[[0, [0, -1]], [[0, 1], 0]]], "density": [[0.5, 0], [0, 0.5]]},
              {"left_generators": [[[1, 0], [0, -1]]], "density": [[0.5, 0], [0, 0.5]], "product_split": [2, 1]}],
    "truncation": 3, "word_len_max": 5, "tolerance": {"eq_tol": 1e-7}, "seed": 42,
    "checks": ["commutation", "biindependence"]
  })");
  ASSERT_TRUE(r.ok()) << r.errors.front();
  const auto& c = *r.config;
  EXPECT_EQ(c.faces[0].left_generators[0](0, 1), cplx(0, -1));
  EXPECT_EQ(c.truncation, 3u);
  EXPECT_EQ(c.tol.eq_tol, 1e-7);
  EXPECT_EQ(c.seed, 42u);
  ASSERT_TRUE(c.faces[1].product_split.has_value());
  EXPECT_NE(c.warnings.front().find("below word_len_max"), std::string::npos);
}

TEST(Run, WitnessFixtureRoundTrip) {
  const auto r = parse_config(read_fixture("witness_pauli.json"));
  ASSERT_TRUE(r.ok());
  const auto rep = run(*r.config);
  EXPECT_TRUE(rep.ok()) << (rep.mismatches.empty() ? "" : rep.mismatches.front());
  ASSERT_EQ(rep.checks.size(), 2u);
  const auto& w = rep.checks[0].result;
  EXPECT_NEAR(w["witness_norm_lower"].get<double>(), 2.0, 1e-8);
  EXPECT_LE(w["vacuum_norm"].get<double>(), 1e-10);
}

TEST(Run, ErrorsSurfaceWithoutAborting) {
  const auto r = parse_config(read_fixture("noncommuting_error.json"));
  ASSERT_TRUE(r.ok());
  const auto rep = run(*r.config);
  ASSERT_EQ(rep.checks.size(), 2u);
  EXPECT_FALSE(rep.checks[0].error.has_value());
  ASSERT_TRUE(rep.checks[1].error.has_value());
  EXPECT_NE(rep.checks[1].error->find("unsupported-structure"), std::string::npos);
  EXPECT_TRUE(rep.ok());
  const Json j = Json::parse(report_to_json(rep));
  EXPECT_EQ(j["checks"][1]["status"], "error");
}

TEST(Run, ExpectationMismatchFailsRun) {
  auto r = parse_config(read_fixture("biindependence_pauli.json"));
  ASSERT_TRUE(r.ok());
  r.config->expected["biindependence"]["max_defect"] = Json{{"max", 0.5}};
  r.config->expected["biindependence"]["verdict"] = "bifree";
  const auto rep = run(*r.config);
  EXPECT_FALSE(rep.ok());
  EXPECT_EQ(rep.mismatches.size(), 2u);
}

TEST(Report, DeterministicModuloTiming) {
  const auto r = parse_config(read_fixture("witness_pauli.json"));
  ASSERT_TRUE(r.ok());
  const std::string a = report_to_json(run(*r.config), false);
  const std::string b = report_to_json(run(*r.config), false);
  EXPECT_EQ(a, b);
  const Json timed = Json::parse(report_to_json(run(*r.config), true));
  EXPECT_TRUE(timed.contains("timing"));
  EXPECT_FALSE(Json::parse(a).contains("timing"));
}

TEST(Report, SeventeenSignificantDigits) {
  const Json j = {{"x", 0.1}, {"y", 1.0 / 3}, {"n", 3}};
  EXPECT_EQ(dump_json(j, -1), R"({"x":0.10000000000000001,"y":0.33333333333333331,"n":3})");
  EXPECT_DOUBLE_EQ(Json::parse(dump_json(j))["y"].get<double>(), 1.0 / 3);
}
