#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "occo/cli.hpp"
#include "support/golden.hpp"

namespace {

using namespace occo;
namespace fs = std::filesystem;

const std::string kFixtures = std::string(OCCO_TEST_DIR) + "/fixtures/";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_path(const std::string& name) {
  auto p = fs::temp_directory_path() / ("occo_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove(p);
  return p;
}

class EnvGuard {
 public:
  EnvGuard() {
    if (const char* v = std::getenv("OCCO_GRAPH")) saved_ = v;
  }
  ~EnvGuard() {
    if (saved_) ::setenv("OCCO_GRAPH", saved_->c_str(), 1);
    else ::unsetenv("OCCO_GRAPH");
  }

 private:
  std::optional<std::string> saved_;
};

TEST(Cli, SchemaCommands) {
  auto r = run({"schema", "hash"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, builtin_schema().hash() + "\n");
  r = run({"schema", "dump"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, builtin_schema().dump());
}

TEST(Cli, LoadSummary) {
  const auto r = run({"load", "--graph", kFixtures + "triad.occg"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto g = load_graph_file(kFixtures + "triad.occg");
  EXPECT_EQ(r.out, "entities " + std::to_string(g.entities().size()) + "\nassertions " +
                       std::to_string(g.assertions().size()) + "\nextension_classes 0\nschema_hash " +
                       builtin_schema().hash() + "\n");
}

TEST(Cli, ValidateExitCodes) {
  auto r = run({"validate", "bs_ana", "--graph", kFixtures + "triad.occg", "--at", "2023-01-01"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "bs_ana Valid\n");
  r = run({"validate", "cred1", "--graph", kFixtures + "forged_diploma.occg", "--at", "2023-01-01"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "cred1 Invalid NO_ISSUANCE\n");
  r = run({"validate", "ana", "--graph", kFixtures + "triad.occg", "--at", "2023-01-01"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error: not-a-credential: ", 0), 0u) << r.err;
  r = run({"validate", "bs_ana", "--graph", kFixtures + "triad.occg", "--at", "01/01/2023"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("parse-error"), std::string::npos);
  r = run({"validate", "bs_ana", "--graph", kFixtures + "missing.occg", "--at", "2023-01-01"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("io-error"), std::string::npos);
}

TEST(Cli, StrictRevocationFlag) {
  const auto path = temp_path("strict.occg");
  {
    auto g = load_graph_file(kFixtures + "triad.occg");
    g = revoke(g, EntityId("accr_state_u"), Date::parse("2022-01-01"));
    write_file_atomic(path, export_graph(g));
  }
  auto r = run({"validate", "bs_ana", "--graph", path.string(), "--at", "2023-01-01"});
  EXPECT_EQ(r.code, 0);
  r = run({"validate", "bs_ana", "--graph", path.string(), "--at", "2023-01-01", "--strict-revocation"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "bs_ana Invalid ACCREDITATION_INACTIVE\n");
  r = run({"explain", "bs_ana", "--graph", path.string(), "--at", "2023-01-01", "--strict-revocation"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ACCREDITATION_INACTIVE"), std::string::npos);
  fs::remove(path);
}

TEST(Cli, UsageErrors) {
  auto r = run({});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("validate"), std::string::npos);
  r = run({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  r = run({"validate", "bs_ana", "--graph", kFixtures + "triad.occg"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--at"), std::string::npos);
  r = run({"match", "--graph", kFixtures + "triad.occg", "--at", "2023-01-01", "-k", "many", "--holder", "ana"});
  EXPECT_EQ(r.code, 2);
  r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("pathway"), std::string::npos);
}

TEST(Cli, GraphFromEnvironment) {
  EnvGuard guard;
  ::unsetenv("OCCO_GRAPH");
  auto r = run({"load"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("OCCO_GRAPH"), std::string::npos);
  ::setenv("OCCO_GRAPH", (kFixtures + "forged_diploma.occg").c_str(), 1);
  r = run({"validate", "cred1", "--at", "2023-01-01"});
  EXPECT_EQ(r.code, 1);
  r = run({"validate", "bs_ana", "--graph", kFixtures + "triad.occg", "--at", "2023-01-01"});
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, MatchRowsAndKnobs) {
  auto r = run({"match", "--holder", "ana", "--graph", kFixtures + "triad.occg", "--at", "2023-01-01", "-k", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["holder"], "ana");
    ++n;
  }
  EXPECT_EQ(n, 2);
  r = run({"match", "--holder", "ana", "--jobs", "j_qa_insp", "--graph", kFixtures + "triad.occg", "--at",
           "2023-01-01"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
  r = run({"match", "--holder", "ana", "--jobs", "nope", "--graph", kFixtures + "triad.occg", "--at", "2023-01-01"});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, PathwayErrors) {
  const auto path = temp_path("uncoverable.occg");
  {
    auto g = load_graph_file(kFixtures + "triad.occg");
    g = add_entity(g, Entity{EntityId("speaking"), TermId("speaking"), "Speaking", {}});
    g = add_entity(g, Entity{EntityId("j_talk"), TermId("job_description"), "j_talk", {{"employer", std::string("acme")}}});
    g = add_assertion(g, Assertion{EntityId("rq"), EntityId("j_talk"), TermId("requires_competence"),
                                   EntityId("speaking"), Date::parse("2020-01-01"), std::nullopt, ""});
    write_file_atomic(path, export_graph(g));
  }
  const auto r = run({"pathway", "--holder", "ana", "--job", "j_talk", "--graph", path.string(), "--at", "2023-01-01"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err, "error: uncoverable-gap: no template covers: speaking\n");
  fs::remove(path);
}

TEST(Cli, RecruitsAndExport) {
  auto r = run({"recruits", "--provider", "state_u", "--graph", kFixtures + "triad.occg", "--at", "2023-01-01", "-k", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
  r = run({"recruits", "--provider", "acme", "--graph", kFixtures + "triad.occg", "--at", "2023-01-01"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("provider-has-no-templates"), std::string::npos);
  r = run({"export", "--graph", kFixtures + "triad.occg"});
  EXPECT_EQ(r.out, export_graph(load_graph_file(kFixtures + "triad.occg")));
}

TEST(Cli, ImportCtdlCreatesAndExtendsGraph) {
  const auto path = temp_path("ctdl.occg");
  auto r = run({"import-ctdl", kFixtures + "sample.ctdl.jsonl", "--graph", path.string(), "--valid-from", "2022-01-01"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto report = nlohmann::json::parse(r.out);
  EXPECT_GT(report["entities_created"].get<int>(), 0);
  const auto g = load_graph_file(path);
  EXPECT_EQ(g.entities().size(), report["entities_created"].get<std::size_t>());
  r = run({"import-ctdl", kFixtures + "sample.ctdl.jsonl", "--graph", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report["entities_created"], 0);
  EXPECT_EQ(report["assertions_created"], 0);
  EXPECT_TRUE(load_graph_file(path) == g);
  r = run({"import-ctdl", kFixtures + "nope.jsonl", "--graph", path.string()});
  EXPECT_EQ(r.code, 3);
  fs::remove(path);
}

TEST(Cli, ServeRejectsBadBind) {
  const auto r = run({"serve", "--graph", kFixtures + "triad.occg", "--bind", "nowhere"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("invalid-argument"), std::string::npos);
}

TEST(Cli, GoldenOutputsInProcess) {
  const auto cases = occo::test::load_golden_cases(std::string(OCCO_TEST_DIR));
  ASSERT_FALSE(cases.empty());
  for (const auto& c : cases) {
    auto args = c.args;
    for (auto& a : args)
      if (a.rfind("fixtures/", 0) == 0) a = std::string(OCCO_TEST_DIR) + "/" + a;
    const auto r = run(args);
    EXPECT_EQ(r.code, c.exit_code) << c.name << ": " << r.err;
    EXPECT_EQ(r.out, occo::test::read_golden(std::string(OCCO_TEST_DIR), c.name)) << c.name;
  }
}

}  // namespace
