// Copyright 2026 The fgaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fgaudit/anonymizer.h"
#include "fgaudit/errors.h"
#include "fgaudit/io.h"
#include "report.h"
#include "test_support.h"

namespace fgaudit::cli {
namespace {

namespace fs = std::filesystem;
using testing::data_path;

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fgaudit_cli_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::vector<std::string> pair_args() const {
    return {"--config", data_path("newton_config.json"), "--qi-file",
            data_path("newton_qi.csv"), "--sensitive-file",
            data_path("newton_sensitive.csv")};
  }
  std::vector<std::string> with(std::string cmd, std::vector<std::string> extra) const {
    std::vector<std::string> args = {std::move(cmd)};
    for (auto& a : pair_args()) args.push_back(a);
    for (auto& a : extra) args.push_back(std::move(a));
    return args;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, AnonymizeWritesThreeGroupsDeterministically) {
  const std::vector<std::string> base = {
      "anonymize", "--config", data_path("newton_config.json"), "--table",
      data_path("newton_raw.csv"), "--l", "2", "--strategy", "anatomy", "--seed", "9"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", path("a")});
  b.insert(b.end(), {"--out", path("b")});
  Outcome ra = run(a);
  ASSERT_EQ(ra.status, 0) << ra.err;
  EXPECT_NE(ra.out.find("3 groups"), std::string::npos) << ra.out;
  ASSERT_EQ(run(b).status, 0);
  EXPECT_EQ(slurp(path("a/qi.csv")), slurp(path("b/qi.csv")));
  EXPECT_EQ(slurp(path("a/sensitive.csv")), slurp(path("b/sensitive.csv")));
  AnonymizedDataset ds = load_anonymized(path("a/qi.csv"), path("a/sensitive.csv"),
                                         load_schema_config(data_path("newton_config.json")));
  EXPECT_EQ(ds.groups().size(), 3u);
  EXPECT_TRUE(check_l_diversity(ds, 2));
}

TEST_F(CliTest, AnonymizeIneligibleTable) {
  std::ofstream(path("bad.csv")) << "A,X\na,x\nb,x\nc,y\n";
  Outcome r = run({"anonymize", "--qi", "A", "--sensitive-attr", "X", "--sensitive-values",
               "x", "--table", path("bad.csv"), "--l", "2", "--out", path("o")});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("not l-eligible"), std::string::npos) << r.err;
}

TEST_F(CliTest, MineNewtonExample) {
  Outcome r = run(with("mine", {"--min-support", "1", "--out", path("k.json")}));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("f=(0.666667, 0.000000)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("converged=yes"), std::string::npos);
  Json k = Json::parse(slurp(path("k.json")));
  ASSERT_EQ(k["distributions"].size(), 1u);
  const auto& d = k["distributions"][0];
  EXPECT_EQ(d["attributes"][0], "A");
  EXPECT_TRUE(d["converged"].get<bool>());
  EXPECT_LE(d["residual"].get<double>(), 1e-8);
  EXPECT_NEAR(d["signatures"][0]["f"].get<double>(), 0.666667, 1e-4);
  EXPECT_LE(d["signatures"][1]["f"].get<double>(), 1e-4);
  EXPECT_EQ(d["signatures"][0]["signature"]["A"], "s1");
  EXPECT_EQ(k["config"]["mine"]["min_support"], 1);
  EXPECT_EQ(k["config"]["mine"]["epsilon"], 0.01);
  for (const char* section : {"config", "distributions", "base_rates", "diagnostics"}) {
    EXPECT_TRUE(k.contains(section)) << section;
  }
}

TEST_F(CliTest, MineIsDeterministic) {
  Outcome a = run(with("mine", {"--min-support", "1", "--workers", "3"}));
  Outcome b = run(with("mine", {"--min-support", "1", "--workers", "3"}));
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}

TEST_F(CliTest, MineWithDefaultGateAdmitsNothing) {
  Outcome r = run(with("mine", {}));
  ASSERT_EQ(r.status, 0) << r.err;
  Json k = Json::parse(r.out);
  EXPECT_TRUE(k["distributions"].empty());
  EXPECT_EQ(k["diagnostics"]["min_support"], 3993);
}

TEST_F(CliTest, MineNonConvergenceIsNotAnError) {
  Outcome r = run(with("mine", {"--min-support", "1", "--max-iter", "1"}));
  ASSERT_EQ(r.status, 0) << r.err;
  Json k = Json::parse(r.out);
  EXPECT_FALSE(k["distributions"][0]["converged"].get<bool>());
  EXPECT_NE(r.err.find("did not converge"), std::string::npos);
}

TEST_F(CliTest, AuditFlagsFirstTuple) {
  Outcome r = run(with("audit", {"--min-support", "1", "--original", data_path("newton_raw.csv"),
                             "--r", "2", "--out", path("a.json")}));
  ASSERT_EQ(r.status, 0) << r.err;
  Json a = Json::parse(slurp(path("a.json")));
  EXPECT_TRUE(a["tuples"][0]["flagged"].get<bool>());
  EXPECT_NEAR(a["tuples"][0]["max_linkage"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(a["tuples"][0]["group"], "L1");
  EXPECT_EQ(a["metrics"]["recall"], 0.5);
  EXPECT_NE(r.out.find("recall: 0.5"), std::string::npos) << r.out;
  for (const char* section :
       {"config", "distributions", "tuples", "metrics", "diagnostics"}) {
    EXPECT_TRUE(a.contains(section)) << section;
  }
}

TEST_F(CliTest, AuditAtROneFlagsNothing) {
  Outcome r = run(with("audit", {"--min-support", "1", "--r", "1"}));
  ASSERT_EQ(r.status, 0) << r.err;
  Json a = Json::parse(r.out);
  for (const auto& t : a["tuples"]) EXPECT_FALSE(t["flagged"].get<bool>());
  EXPECT_EQ(a["metrics"]["flagged_tuples"], 0);
}

TEST_F(CliTest, AuditWithoutOriginalOmitsRecall) {
  Outcome r = run(with("audit", {"--min-support", "1"}));
  ASSERT_EQ(r.status, 0) << r.err;
  Json a = Json::parse(r.out);
  EXPECT_TRUE(a["metrics"]["recall"].is_null());
  EXPECT_TRUE(a["tuples"][0]["max_linkage"].is_number());
  EXPECT_NE(r.err.find("no original table"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("recall: omitted"), std::string::npos) << r.err;
}

TEST_F(CliTest, AuditReadsMinedKnowledge) {
  ASSERT_EQ(run(with("mine", {"--min-support", "1", "--out", path("k.json")})).status, 0);
  Outcome r = run(with("audit", {"--knowledge", path("k.json")}));
  ASSERT_EQ(r.status, 0) << r.err;
  Json a = Json::parse(r.out);
  EXPECT_TRUE(a["tuples"][0]["flagged"].get<bool>());
  EXPECT_EQ(a["config"]["knowledge"], path("k.json"));
}

TEST_F(CliTest, AuditWithNothingMined) {
  Outcome r = run(with("audit", {}));
  EXPECT_EQ(r.status, 1);
  Outcome ok = run(with("audit", {"--allow-base-rate-only"}));
  EXPECT_EQ(ok.status, 0) << ok.err;
}

TEST_F(CliTest, QueryErrorIdentityIsZero) {
  SchemaConfig cfg = load_schema_config(data_path("newton_config.json"));
  Table raw = load_table(data_path("newton_raw.csv"), cfg);
  save_anonymized(singleton_partition(raw), path("qi.csv"), path("s.csv"));
  const std::vector<std::string> args = {
      "query-error", "--config", data_path("newton_config.json"), "--qi-file",
      path("qi.csv"), "--sensitive-file", path("s.csv"), "--original",
      data_path("newton_raw.csv"), "--queries", "200", "--seed", "4"};
  Outcome r = run(args);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("query error: 0 "), std::string::npos) << r.out;
}

TEST_F(CliTest, QueryErrorIsSeeded) {
  std::vector<std::string> args = {"query-error", "--config",
                                   data_path("newton_config.json"), "--qi-file",
                                   data_path("newton_qi.csv"), "--sensitive-file",
                                   data_path("newton_sensitive.csv"), "--original",
                                   data_path("newton_raw.csv"), "--selectivity", "0.05",
                                   "--queries", "300", "--seed", "8"};
  Outcome a = run(args);
  Outcome b = run(args);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  args.insert(args.end(), {"--out", path("q.json")});
  ASSERT_EQ(run(args).status, 0);
  Json q = Json::parse(slurp(path("q.json")));
  EXPECT_EQ(q["metrics"]["qd"], 1);
  EXPECT_EQ(q["config"]["seed"], 8);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_NE(run({}).status, 0);
  EXPECT_NE(run({"mine", "--bogus"}).status, 0);
  Outcome missing = run({"mine", "--config", data_path("newton_config.json")});
  EXPECT_EQ(missing.status, 1);
  EXPECT_NE(missing.err.find("--qi-file"), std::string::npos) << missing.err;
  Outcome schema = run({"mine", "--qi-file", data_path("newton_qi.csv"), "--sensitive-file",
                    data_path("newton_sensitive.csv")});
  EXPECT_EQ(schema.status, 1);
  EXPECT_NE(schema.err.find("QI"), std::string::npos) << schema.err;
}

TEST_F(CliTest, KnowledgeRoundTrip) {
  ASSERT_EQ(run(with("mine", {"--min-support", "1", "--out", path("k.json")})).status, 0);
  AnonymizedDataset ds = testing::newton_example();
  MinedKnowledge k = knowledge_from_json(Json::parse(slurp(path("k.json"))), ds.schema());
  ASSERT_EQ(k.distributions().size(), 1u);
  Json again = distributions_to_json(k, ds.schema());
  EXPECT_EQ(again, Json::parse(slurp(path("k.json")))["distributions"]);
  EXPECT_THROW(knowledge_from_json(Json::parse(R"({"distributions": 3})"), ds.schema()),
               fgaudit::ParseError);
}

}  // namespace
}  // namespace fgaudit::cli
