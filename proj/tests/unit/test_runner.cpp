#include <gtest/gtest.h>

#include <set>

#include <json.hpp>

#include "gkernel/errors.hpp"
#include "gkernel/runner.hpp"

using namespace gkernel;
using namespace gkernel::runner;
using json = nlohmann::json;

namespace {

const std::string kData = GKERNEL_DATA_DIR;

std::size_t error_line(const std::string& text) {
  try {
    parse_config(text, kData);
  } catch (const ParseError& e) {
    return e.position;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return 0;
}

const char* kSmall =
    "[suite]\n"
    "checks = kernel-identity, sigma-tensor\n"
    "[group]\n"
    "cyclic = 3\n"
    "[model]\n"
    "d = 2\n"
    "V1 = \"diag 0 1/3\"\n"
    "[object.X]\n"
    "points = \"a:1:1, b:2:2\"\n";

}  // namespace

TEST(Runner, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Runner, ParsesModelAndObjects) {
  SuiteConfig c = parse_config(kSmall);
  ASSERT_TRUE(c.model);
  EXPECT_EQ(c.group.order(), 3);
  EXPECT_EQ(c.model->d(), 2);
  // V_2 defaults to V_1² on a cyclic group.
  EXPECT_LT((c.model->V(2) - c.model->V(1) * c.model->V(1)).norm(), 1e-15);
  EXPECT_NEAR(std::arg(c.model->V(1)(1, 1)), 2 * M_PI / 3, 1e-15);
  ASSERT_EQ(c.objects.count("X"), 1u);
  EXPECT_EQ(c.checks.size(), 2u);
  EXPECT_EQ(c.tolerance, 1e-10);
}

TEST(Runner, ParsesBTable) {
  SuiteConfig c = parse_config(
      "[suite]\nchecks = lift\n[group]\ncyclic = 4\n[model]\nd = 2\nb = \"1,1 = 1/4; 2,3 = 3/8\"\n");
  EXPECT_EQ(c.model->b()(1, 1), Phase(1, 4));
  EXPECT_EQ(c.model->b()(2, 3), Phase(3, 8));
  EXPECT_EQ(c.model->b()(3, 2), Phase(0, 1));
}

TEST(Runner, ErrorsCarryLines) {
  std::string undeclared = std::string(kSmall) + "[check.sigma-tensor]\npairs = \"X Q\"\n";
  EXPECT_EQ(error_line(undeclared), 11u);
  EXPECT_EQ(error_line("[suite]\nchecks = lift\nseeed = 3\n"), 3u);
  EXPECT_EQ(error_line("[suite]\nchecks = lift, nonsense\n"), 2u);
  EXPECT_EQ(error_line("[suite]\nchecks = lift\n"), 2u);  // lift needs a model
  EXPECT_EQ(error_line("[suite]\nchecks = lift\n[group]\ncyclic = 2\n[model]\nd = 2\nV1 = \"diag 0 1/2 1/4\"\n"), 7u);
  EXPECT_EQ(error_line("[suite]\nchecks = is_cocycle\n[cocycle]\nkind = trivial\n[extra]\na = 1\n"), 5u);
  EXPECT_EQ(error_line("[suite]\nchecks = is_cocycle\n[cocycle]\nkind = trivial\n[check.lift]\n"), 5u);
  EXPECT_EQ(error_line("[suite]\nchecks = prove\n[check.prove]\nscript = missing.script\n"), 4u);
  EXPECT_EQ(error_line("[suite]\nchecks = is_cocycle\n[group]\ncyclic = 3\n[cocycle]\nkind = standard\nn = 2\n"), 5u);
}

TEST(Runner, ExplainCoversEveryCheck) {
  for (const auto& n : check_names()) EXPECT_NE(explain(n).find(n), std::string::npos);
  EXPECT_THROW(explain("no-such-check"), std::out_of_range);
}

TEST(Runner, BundledZ2SuitePasses) {
  SuiteConfig c = load_config(kData + "/z2_diag.toml");
  SuiteResult r = run_suite(c);
  EXPECT_TRUE(r.all_pass) << r.report;
  json j = json::parse(r.report);
  std::set<std::string> ops;
  for (const auto& rec : j["checks"]) {
    ops.insert(rec["operation"].get<std::string>());
    if (rec["name"] == "pentagon-sigma") EXPECT_LE(rec["residual"].get<double>(), 1e-10);
  }
  EXPECT_EQ(ops.size(), j["checks"].size());
  EXPECT_EQ(j["checks"].size(), check_names().size());
}

TEST(Runner, ReportIsDeterministicAcrossThreads) {
  SuiteConfig c = load_config(kData + "/z3_random.toml");
  SuiteResult a = run_suite(c, 1);
  SuiteResult b = run_suite(load_config(kData + "/z3_random.toml"), 4);
  EXPECT_EQ(a.report, b.report);
  EXPECT_EQ(a.report.find("wall"), std::string::npos);
  EXPECT_NE(a.timing.find("wall_ms"), std::string::npos);
}

TEST(Runner, SeedOverrideChangesModelAndHash) {
  SuiteResult a = run_suite(load_config(kData + "/z3_random.toml"));
  SuiteResult b = run_suite(load_config(kData + "/z3_random.toml", 99));
  EXPECT_NE(json::parse(a.report)["config_sha256"], json::parse(b.report)["config_sha256"]);
  EXPECT_EQ(json::parse(b.report)["seed"], 99);
}

TEST(Runner, FailingCheckIsRecorded) {
  SuiteResult r = run_suite(load_config(kData + "/z3_random.toml", std::nullopt, 1e-30));
  EXPECT_FALSE(r.all_pass);
  std::string bad = std::string(kSmall) + "[cocycle]\nkind = trivial\n";
  bad.replace(bad.find("kernel-identity, sigma-tensor"), 29, "cohomologous");
  bad += "[check.cohomologous]\nexpect = \"not cohomologous\"\n";
  SuiteResult s = run_suite(parse_config(bad));
  EXPECT_FALSE(s.all_pass);
  EXPECT_EQ(json::parse(s.report)["checks"][0]["verdict"], "cohomologous");
}

TEST(Runner, ThreadsFromEnv) {
  setenv("GKERNEL_THREADS", "3", 1);
  EXPECT_EQ(threads_from_env(), 3);
  setenv("GKERNEL_THREADS", "zero", 1);
  EXPECT_EQ(threads_from_env(), 1);
  unsetenv("GKERNEL_THREADS");
  EXPECT_EQ(threads_from_env(), 1);
}
