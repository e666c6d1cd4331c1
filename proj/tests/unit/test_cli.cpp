/*
 * Copyright (c) 2026, The crosswalk authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>

#include "crosswalk/blake2b.hpp"
#include "crosswalk/cli.hpp"
#include "crosswalk/error.hpp"
#include "crosswalk/files.hpp"
#include "crosswalk/json_io.hpp"
#include "support.hpp"

namespace crosswalk {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return parse_json(out); }
  Json error() const { return parse_json(err.substr(0, err.find('\n'))); }
};

class Cli : public ::testing::Test {
 protected:
  testing::TempDir dir{"cli"};
  const fs::path rates = testing::data_dir() / "rates";

  CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), {"--json", "-p", (dir / "p").string()});
    std::ostringstream out;
    std::ostringstream err;
    CliResult r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
  }

  /// Project with the rates fixture, destination schema and validated
  /// case-study crosswalk.
  void author() {
    ASSERT_EQ(run({"init"}).code, kExitOk);
    ASSERT_EQ(run({"ingest", (rates / "business_rates.csv").string()}).code, kExitOk);
    ASSERT_EQ(run({"schema", "import", (rates / "dest_schema.json").string()}).code, kExitOk);
    ASSERT_EQ(run({"crosswalk", "new", "--dest", "ndr_occupation"}).code, kExitOk);
    ASSERT_EQ(run({"crosswalk", "add", "--file", (rates / "crosswalk.txt").string()}).code, kExitOk);
    const auto v = run({"crosswalk", "validate"});
    ASSERT_EQ(v.code, kExitOk) << v.out << v.err;
    ASSERT_TRUE(v.json()["ok"].get<bool>());
  }
};

TEST_F(Cli, AuthorRunAndVerify) {
  author();
  const auto out = dir / "out.csv";
  const auto run_result = run({"crosswalk", "run", "--out", out.string()});
  ASSERT_EQ(run_result.code, kExitOk) << run_result.err;
  const auto doc = run_result.json();
  EXPECT_EQ(doc["output"]["digest"], hash_file(out));
  EXPECT_EQ(doc["output"]["row_count"], 6);
  EXPECT_EQ(doc["violations"], 0);

  const auto& cs = testing::case_study();
  const auto direct = apply_crosswalk(cs.table, cs.crosswalk, cs.source, cs.dest);
  EXPECT_EQ(read_text_file(out), render_table(direct.table, ExportFormat::csv, cs.dest));

  const std::string id = doc["transform"];
  const auto verify = run({"verify", id.substr(0, 8)});
  EXPECT_EQ(verify.code, kExitOk);
  EXPECT_TRUE(verify.json()["ok"].get<bool>());
  EXPECT_EQ(verify.json()["replayed_digest"], doc["output"]["digest"]);

  const auto list = run({"transform", "list"});
  ASSERT_EQ(list.json().size(), 1u);
  EXPECT_EQ(list.json()[0]["uuid"], id);
}

TEST_F(Cli, TextOutput) {
  author();
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(run_cli({"-p", (dir / "p").string(), "crosswalk", "show"}, out, err), kExitOk);
  EXPECT_NE(out.str().find("  0  NEW > 'localAuthorityCode' < ['E07000223']"), std::string::npos);
  EXPECT_NE(out.str().find("(validated)"), std::string::npos);
}

TEST_F(Cli, SecondFileIsMatchedAndNeedsConfirmation) {
  author();
  const auto copy = dir / "rates_2021.csv";
  write_file_atomic(copy, read_text_file(rates / "business_rates.csv"));
  auto bytes = read_text_file(copy);
  bytes.replace(bytes.find("DAVIS"), 5, "DAVID");
  write_file_atomic(copy, bytes);
  const auto ingest = run({"ingest", copy.string()});
  ASSERT_EQ(ingest.code, kExitOk);
  const auto res = ingest.json()["resources"][0];
  EXPECT_TRUE(res["auto_assigned"].get<bool>());
  EXPECT_FALSE(res["matched_crosswalk"].is_null());
  const std::string id = res["resource"];

  const auto refused = run({"crosswalk", "run", "--resource", id});
  EXPECT_EQ(refused.code, kExitValidation);
  EXPECT_EQ(refused.error()["error"], "state");
  EXPECT_EQ(run({"crosswalk", "confirm", "--resource", id}).code, kExitOk);
  EXPECT_EQ(run({"crosswalk", "run", "--resource", id}).code, kExitOk);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"crosswalk", "frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"resource", "list"}).code, kExitUsage);  // no project yet
  ASSERT_EQ(run({"init"}).code, kExitOk);

  const auto missing = run({"ingest", (dir / "absent.csv").string()});
  EXPECT_EQ(missing.code, kExitIo);
  EXPECT_EQ(missing.error()["error"], "io");
  EXPECT_EQ(missing.error()["exit_code"], int(kExitIo));

  const auto bad_csv = dir / "bad.csv";
  write_file_atomic(bad_csv, "a,b\n1,\"open\n");
  const auto parse = run({"ingest", bad_csv.string()});
  EXPECT_EQ(parse.code, kExitIo);
  EXPECT_EQ(parse.error()["row"], 1);

  const auto dup = dir / "dup.csv";
  write_file_atomic(dup, "a,a\n1,2\n");
  EXPECT_EQ(run({"ingest", dup.string()}).error()["names"], Json::array({"a"}));

  ASSERT_EQ(run({"ingest", (rates / "business_rates.csv").string()}).code, kExitOk);
  ASSERT_EQ(run({"schema", "import", (rates / "dest_schema.json").string()}).code, kExitOk);
  ASSERT_EQ(run({"crosswalk", "new", "--dest", "ndr_occupation"}).code, kExitOk);
  const auto syntax = run({"crosswalk", "add", "RENAME > 'x' <"});
  EXPECT_EQ(syntax.code, kExitIo);
  EXPECT_EQ(syntax.error()["offset"], 14);
  EXPECT_EQ(run({"crosswalk", "add", "EXPLODE > 'x' < ['y']"}).error()["name"], "EXPLODE");

  ASSERT_EQ(run({"crosswalk", "add", "RENAME > 'localBillingReference' < ['Nope']"}).code, kExitOk);
  const auto invalid = run({"crosswalk", "validate"});
  EXPECT_EQ(invalid.code, kExitValidation);
  EXPECT_FALSE(invalid.json()["ok"].get<bool>());
  EXPECT_EQ(run({"crosswalk", "run"}).code, kExitValidation);
  EXPECT_EQ(run({"verify", "0000"}).code, kExitUsage);
}

TEST_F(Cli, VerifyDetectsTampering) {
  author();
  const auto doc = run({"crosswalk", "run"}).json();
  const auto resources = run({"resource", "list"}).json();
  const fs::path stored = dir / "p" / resources[0]["stored_file"].get<std::string>();
  auto text = read_text_file(stored);
  text[10] ^= 1;
  write_file_atomic(stored, text);
  const auto verify = run({"verify", doc["transform"]});
  EXPECT_EQ(verify.code, kExitProbity);
  EXPECT_EQ(verify.error()["error"], "probity");
}

TEST_F(Cli, SchemaEditing) {
  ASSERT_EQ(run({"init"}).code, kExitOk);
  ASSERT_EQ(run({"ingest", (rates / "business_rates.csv").string()}).code, kExitOk);
  EXPECT_EQ(run({"schema", "set-type", "RV", "number"}).code, kExitOk);
  EXPECT_EQ(run({"schema", "set-type", "Nope", "number"}).code, kExitValidation);
  EXPECT_EQ(run({"schema", "set-type", "RV", "decimal"}).code, kExitUsage);
  const auto cat = run({"schema", "categorise", "Retail", "--mode", "boolean"});
  ASSERT_EQ(cat.code, kExitOk) << cat.err;
  const auto shown = run({"schema", "show"}).json();
  EXPECT_EQ(shown["version"], 3);
  EXPECT_EQ(shown["fields"][2]["type"], "number");
}

TEST(CliBinary, HelpAndExitStatus) {
  const std::string binary = CROSSWALK_XWALK_BINARY;
  EXPECT_EQ(std::system((binary + " --help >/dev/null").c_str()), 0);
  const int status = std::system((binary + " >/dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(status), kExitUsage);
}

}  // namespace
}  // namespace crosswalk
