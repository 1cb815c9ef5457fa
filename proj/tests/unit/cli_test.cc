// Copyright 2026 The zsre Authors.
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "json.hpp"
#include "test_util.h"

namespace {

using nlohmann::json;
using zsre::testing::SourceDir;
using zsre::testing::TempDir;

struct CliResult {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell, capturing stdout (stderr is discarded).
CliResult Cli(const std::string& args) {
  const std::string cmd = std::string(ZSRE_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::string Docs() { return Q(SourceDir() / "data/synthetic/docs.json"); }
std::string Lexicon() { return Q(SourceDir() / "data/synthetic/hypernyms.json"); }

TEST(CliTest, VersionAndHelp) {
  const auto v = Cli("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
  EXPECT_EQ(Cli("--help").code, 0);
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("frobnicate").code, 2);
  EXPECT_EQ(Cli("score --mode nonsense").code, 2);
  EXPECT_EQ(Cli("corpus validate --dataset /nonexistent/docs.json").code, 2);
  TempDir dir;
  zsre::testing::WriteText(dir / "bad.json", R"({"sed": 1})");
  EXPECT_EQ(Cli("--config " + Q(dir / "bad.json") + " config").code, 2);
}

TEST(CliTest, ValidateGoodAndBad) {
  const auto ok = Cli("corpus validate --dataset " + Docs());
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(json::parse(ok.out)["valid"].get<bool>());

  TempDir dir;
  json docs = zsre::testing::TwoDocCorpus();
  docs[0]["labels"][0]["h"] = 9;
  zsre::testing::WriteText(dir / "d.json", docs.dump());
  const auto bad = Cli("corpus validate --dataset " + Q(dir / "d.json"));
  EXPECT_EQ(bad.code, 3);
  EXPECT_FALSE(json::parse(bad.out)["valid"].get<bool>());
  EXPECT_EQ(Cli("--lenient corpus validate --dataset " + Q(dir / "d.json")).code, 0);
}

TEST(CliTest, EndToEndSubcommands) {
  TempDir dir;
  const std::string si = Q(dir / "si.jsonl");
  const std::string emb = "--embeddings " + Q(dir / "emb.jsonl");
  ASSERT_EQ(Cli("-q sideinfo build --llm-provider stub --stub-lexicon " + Lexicon() + " --dataset " + Docs() +
                " --out " + si).code,
            0);
  EXPECT_EQ(zsre::testing::CountLines(dir / "si.jsonl"), 120u);

  ASSERT_EQ(Cli("-q --seed 13 " + emb + " embed warm --sideinfo " + si + " --labels " +
                Q(SourceDir() / "data/synthetic/labels.txt") + " --dataset " + Docs() + " --out " + Q(dir / "emb.jsonl"))
                .code,
            0);

  ASSERT_EQ(Cli("-q --seed 13 " + emb + " score --dataset " + Docs() + " --sideinfo " + si + " --out " +
                Q(dir / "bd.jsonl")).code,
            0);
  EXPECT_GT(zsre::testing::CountLines(dir / "bd.jsonl"), 0u);

  const auto eval = Cli("--seed 13 " + emb + " eval run --dataset " + Docs() + " --sideinfo " + si + " --out " +
                        Q(dir / "report.json"));
  ASSERT_EQ(eval.code, 0);
  EXPECT_NE(eval.out.find("97.30"), std::string::npos) << eval.out;
  EXPECT_NE(eval.out.find("Gap"), std::string::npos) << eval.out;
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));

  const auto gap = Cli("gap --predictions " + Q(dir / "report.predictions.jsonl") + " --size 5 --json");
  ASSERT_EQ(gap.code, 0);
  EXPECT_EQ(json::parse(gap.out).size(), 6u);

  const auto explain = Cli("--seed 13 " + emb + " explain --dataset " + Docs() + " --sideinfo " + si +
                           " --doc 'Synthetic record 00' --head 0 --tail 1 --json");
  ASSERT_EQ(explain.code, 0);
  EXPECT_EQ(json::parse(explain.out)["rows"].size(), 16u);

  // Explaining an unknown document is a stage failure.
  EXPECT_EQ(Cli("--seed 13 " + emb + " explain --dataset " + Docs() + " --sideinfo " + si +
                " --doc nope --head 0 --tail 1").code,
            3);
}

TEST(CliTest, ScoreWithoutSideInfoFails) {
  TempDir dir;
  zsre::testing::WriteText(dir / "empty.jsonl", "");
  const auto r = Cli("score --dataset " + Docs() + " --sideinfo " + Q(dir / "empty.jsonl") + " --out " +
                     Q(dir / "bd.jsonl"));
  EXPECT_EQ(r.code, 3);
  const json manifest = json::parse(zsre::testing::ReadText(dir / "manifest.json"));
  EXPECT_EQ(manifest["failed_stage"], "score");
}

TEST(CliTest, OfflineHttpBuildFailsWithoutNetwork) {
  TempDir dir;
  const auto r = Cli("--offline sideinfo build --dataset " + Docs() + " --out " + Q(dir / "si.jsonl") +
                     " --base-url http://127.0.0.1:9");
  EXPECT_EQ(r.code, 3);
}

TEST(CliTest, RunFromConfigAndDryRun) {
  TempDir dir;
  const json cfg = {{"dataset", {{"path", (SourceDir() / "data/synthetic/docs.json").string()}}},
                    {"llm", {{"provider", "stub"}, {"stub_lexicon", (SourceDir() / "data/synthetic/hypernyms.json").string()}}},
                    {"output_dir", (dir / "out").string()},
                    {"seed", 13}};
  zsre::testing::WriteText(dir / "cfg.json", cfg.dump());
  EXPECT_EQ(Cli("-q --dry-run --config " + Q(dir / "cfg.json") + " run --stages validate,sideinfo,embed").code, 0);
  EXPECT_FALSE(std::filesystem::exists(dir / "out"));
  EXPECT_EQ(Cli("-q --config " + Q(dir / "cfg.json") + " run --stages validate,sideinfo,embed,score,eval").code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "out/report.json"));
  const auto shown = Cli("--config " + Q(dir / "cfg.json") + " --seed 99 config");
  ASSERT_EQ(shown.code, 0);
  EXPECT_EQ(json::parse(shown.out)["seed"], 99);
}

}  // namespace
