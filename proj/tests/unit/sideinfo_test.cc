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

#include <atomic>
#include <chrono>
#include <fstream>

#include "common/error.h"
#include "common/io.h"
#include "sideinfo/chat_client.h"
#include "sideinfo/generator.h"
#include "sideinfo/prompts.h"
#include "sideinfo/store.h"
#include "test_util.h"

namespace zsre::sideinfo {
namespace {

using testing::Record;
using testing::TempDir;
using testing::WriteText;

corpus::Dataset TwoDocs(const TempDir& dir) {
  WriteText(dir / "d.json", testing::TwoDocCorpus().dump());
  return corpus::LoadDataset(dir / "d.json", {});
}

GenerationConfig FastConfig() {
  GenerationConfig cfg;
  cfg.retry_backoff = std::chrono::milliseconds(1);
  cfg.parallelism = 1;
  return cfg;
}

// Returns `reply` for every call.
FunctionChatClient Fixed(std::string reply) {
  return FunctionChatClient([reply](const ChatRequest&) { return reply; });
}

TEST(NormalizeHypernymTest, StripsClauseArticlesAndPunctuation) {
  EXPECT_EQ(NormalizeHypernym("Maybank Sdn Bhd is a banking institution.", "Maybank Sdn Bhd"),
            "banking institution");
  EXPECT_EQ(NormalizeHypernym("  \nHypernym: The Business Executive\nextra", ""), "business executive");
  EXPECT_EQ(NormalizeHypernym("\"city\"", ""), "city");
  EXPECT_EQ(NormalizeHypernym("an a the port", ""), "port");
}

TEST(NormalizeHypernymTest, RejectsEmptyAndLong) {
  try {
    NormalizeHypernym(" .\n", "");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCompletion);
  }
  std::string thirty;
  for (int i = 0; i < 30; ++i) thirty += "word ";
  try {
    NormalizeHypernym(thirty, "");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
  }
  EXPECT_NO_THROW(NormalizeHypernym("one two three four five six seven eight", ""));
}

TEST(NormalizeDescriptionTest, CollapsesAndTruncatesAtWord) {
  EXPECT_EQ(NormalizeDescription("  a\n\tb   c ", 100), "a b c");
  EXPECT_EQ(NormalizeDescription("alpha beta gamma", 12), "alpha beta");
  EXPECT_LE(NormalizeDescription(std::string(600, 'x'), 512).size(), 512u);
}

TEST(GenerateDescriptionTest, ReturnsCompletionVerbatimAfterWhitespaceCleanup) {
  TempDir dir;
  const auto ds = TwoDocs(dir);
  auto client = Fixed("Orbit Labs is a company in Lisbon.");
  EXPECT_EQ(GenerateDescription(ds.documents[0], 1, client, FastConfig()), "Orbit Labs is a company in Lisbon.");
}

TEST(GenerateDescriptionTest, RendersPromptWithDocument) {
  TempDir dir;
  const auto ds = TwoDocs(dir);
  ChatRequest seen;
  FunctionChatClient client([&](const ChatRequest& r) {
    seen = r;
    return "x";
  });
  GenerateDescription(ds.documents[0], 2, client, FastConfig());
  ASSERT_EQ(seen.messages.size(), 2u);
  EXPECT_EQ(seen.messages[0].role, "system");
  const std::string& user = seen.messages[1].content;
  EXPECT_NE(user.find("Document title: Doc A"), std::string::npos);
  EXPECT_NE(user.find("Ana Silva works at Orbit Labs .\nOrbit Labs is based in Lisbon ."), std::string::npos);
  EXPECT_NE(user.find("Entity: Lisbon\nEntity type: LOC"), std::string::npos);
  EXPECT_EQ(seen.model, "gpt-4o-mini");
  EXPECT_EQ(seen.temperature, 0.0);
}

TEST(GenerateDescriptionTest, EmptyCompletionAndBadIndex) {
  TempDir dir;
  const auto ds = TwoDocs(dir);
  auto empty = Fixed("  \n ");
  try {
    GenerateDescription(ds.documents[0], 0, empty, FastConfig());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCompletion);
  }
  try {
    GenerateDescription(ds.documents[0], 3, empty, FastConfig());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndex);
  }
}

TEST(GenerateHypernymTest, EmptyInputsAreRejectedWithoutCalls) {
  int calls = 0;
  FunctionChatClient client([&](const ChatRequest&) {
    ++calls;
    return "city";
  });
  try {
    GenerateHypernym("Lisbon", "LOC", "", client, FastConfig());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyField);
  }
  EXPECT_EQ(calls, 0);
  EXPECT_EQ(GenerateHypernym("Lisbon", "LOC", "Lisbon is a city.", client, FastConfig()), "city");
}

TEST(DocumentContextTest, WindowAndBudget) {
  corpus::Document d;
  d.doc_id = "d";
  for (int i = 0; i < 6; ++i) d.sentences.push_back({"s" + std::to_string(i)});
  d.entities.push_back({0, {{"s2", 2, 0, 1}}, "T"});
  GenerationConfig cfg;
  EXPECT_EQ(DocumentContext(d, 0, cfg), "s0\ns1\ns2\ns3\ns4\ns5");
  cfg.context_window_sentences = 1;
  EXPECT_EQ(DocumentContext(d, 0, cfg), "s1\ns2\ns3");
  cfg.context_window_sentences = -1;
  cfg.max_document_chars = 5;
  EXPECT_EQ(DocumentContext(d, 0, cfg), "s2");
}

TEST(CompleteWithRetryTest, RetriesTransientStatusesOnly) {
  auto cfg = FastConfig();
  for (int status : {0, 429, 503}) {
    int calls = 0;
    FunctionChatClient flaky([&](const ChatRequest&) -> std::string {
      if (++calls < 3) throw ServiceError(status, "busy", "test");
      return "ok";
    });
    EXPECT_EQ(CompleteWithRetry(flaky, {}, cfg), "ok");
    EXPECT_EQ(calls, 3);
  }
  int calls = 0;
  FunctionChatClient bad([&](const ChatRequest&) -> std::string {
    ++calls;
    throw ServiceError(400, "bad request", "test");
  });
  EXPECT_THROW(CompleteWithRetry(bad, {}, cfg), ServiceError);
  EXPECT_EQ(calls, 1);

  calls = 0;
  FunctionChatClient down([&](const ChatRequest&) -> std::string {
    ++calls;
    throw ServiceError(503, "down", "test");
  });
  EXPECT_THROW(CompleteWithRetry(down, {}, cfg), ServiceError);
  EXPECT_EQ(calls, cfg.max_retries + 1);
}

TEST(BuildSideInfoTest, GeneratesOnceThenReuses) {
  TempDir dir;
  const auto ds = TwoDocs(dir);
  auto stub = std::make_shared<ExtractiveStubClient>(std::map<std::string, std::string>{{"Lisbon", "city"}});
  CountingChatClient client(stub);
  {
    auto store = SideInfoStore::Open(dir / "si.jsonl");
    const auto stats = BuildSideInfo(ds, client, FastConfig(), store);
    EXPECT_EQ(stats.generated, 6u);
    EXPECT_EQ(store.size(), 6u);
    EXPECT_EQ(client.calls(), 12u);
    EXPECT_EQ(store.Find("Doc A", 2)->hypernym, "city");
    EXPECT_EQ(store.Find("Doc A", 0)->hypernym, "per entity");
    EXPECT_EQ(store.Find("Doc A", 1)->description, "Ana Silva works at Orbit Labs . Orbit Labs is based in Lisbon .");
  }
  auto reopened = SideInfoStore::Open(dir / "si.jsonl");
  EXPECT_EQ(reopened.size(), 6u);
  const auto stats = BuildSideInfo(ds, client, FastConfig(), reopened);
  EXPECT_EQ(stats.generated, 0u);
  EXPECT_EQ(stats.cached, 6u);
  EXPECT_EQ(client.calls(), 12u);
}

TEST(BuildSideInfoTest, FailureKeepsCompletedRecordsAndResumes) {
  TempDir dir;
  const auto ds = TwoDocs(dir);
  ExtractiveStubClient stub;
  int calls = 0;
  // Two calls per entity; the 7th call is the fourth entity's description.
  FunctionChatClient failing([&](const ChatRequest& r) -> std::string {
    if (++calls == 7) throw ServiceError(400, "rejected", "test");
    return stub.Complete(r);
  });
  {
    auto store = SideInfoStore::Open(dir / "si.jsonl");
    EXPECT_THROW(BuildSideInfo(ds, failing, FastConfig(), store), ServiceError);
  }
  EXPECT_EQ(testing::CountLines(dir / "si.jsonl"), 3u);
  auto store = SideInfoStore::Open(dir / "si.jsonl");
  EXPECT_EQ(store.size(), 3u);
  const auto stats = BuildSideInfo(ds, stub, FastConfig(), store);
  EXPECT_EQ(stats.cached, 3u);
  EXPECT_EQ(stats.generated, 3u);
  EXPECT_EQ(SideInfoStore::Load(dir / "si.jsonl").size(), 6u);
}

TEST(BuildSideInfoTest, ParallelMatchesSequential) {
  TempDir dir;
  const auto ds = TwoDocs(dir);
  ExtractiveStubClient stub;
  SideInfoStore a, b;
  auto cfg = FastConfig();
  BuildSideInfo(ds, stub, cfg, a);
  cfg.parallelism = 4;
  BuildSideInfo(ds, stub, cfg, b);
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [key, rec] : a.records()) {
    const auto* other = b.Find(key.first, key.second);
    ASSERT_NE(other, nullptr);
    EXPECT_EQ(rec.description, other->description);
    EXPECT_EQ(rec.hypernym, other->hypernym);
  }
}

TEST(BuildSideInfoTest, InvalidConfig) {
  SideInfoStore store;
  ExtractiveStubClient stub;
  auto cfg = FastConfig();
  cfg.parallelism = 0;
  try {
    BuildSideInfo({}, stub, cfg, store);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(SideInfoStoreTest, JsonlRoundTrip) {
  SideInfoStore store;
  store.Insert(Record("d1", 0, "Ana", "PER", "Ana is a \"quoted\" name.\nSecond line", "person"));
  store.Insert(Record("d1", 1, "Zürich", "LOC", "Zürich is a city.", "city"));
  const auto back = SideInfoStore::FromJsonl(store.ToJsonl());
  EXPECT_EQ(back.records(), store.records());
}

TEST(SideInfoStoreTest, LastLineWinsAndTornTailIgnored) {
  TempDir dir;
  const std::string a = Record("d", 0, "A", "T", "first", "h1").ToJson().dump();
  const std::string b = Record("d", 0, "A", "T", "second", "h2").ToJson().dump();
  const std::string c = Record("d", 1, "B", "T", "other", "h3").ToJson().dump();
  WriteText(dir / "s.jsonl", a + "\n" + b + "\n" + c.substr(0, c.size() / 2));
  const auto store = SideInfoStore::Load(dir / "s.jsonl");
  EXPECT_EQ(store.size(), 1u);
  EXPECT_EQ(store.Find("d", 0)->description, "second");

  WriteText(dir / "bad.jsonl", "{oops\n" + a + "\n");
  try {
    SideInfoStore::Load(dir / "bad.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(SideInfoStoreTest, InsertAfterTornTailStaysReadable) {
  TempDir dir;
  const std::string a = Record("d", 0, "A", "T", "first", "h1").ToJson().dump();
  WriteText(dir / "s.jsonl", a + "\n{\"doc_id\": \"d\", \"enti");
  {
    auto store = SideInfoStore::Open(dir / "s.jsonl");
    store.Insert(Record("d", 1, "B", "T", "second", "h2"));
  }
  EXPECT_EQ(SideInfoStore::Load(dir / "s.jsonl").size(), 2u);
}

TEST(PromptTest, DefaultsMatchPromptFiles) {
  const auto dir = testing::SourceDir() / "prompts";
  EXPECT_EQ(DefaultDescriptionPromptText(), ReadFile(dir / "description.txt"));
  EXPECT_EQ(DefaultHypernymPromptText(), ReadFile(dir / "hypernym.txt"));
  const auto from_dir = PromptSet::FromDirectory(dir);
  const auto defaults = PromptSet::Defaults();
  EXPECT_EQ(from_dir.version(), defaults.version());
  EXPECT_EQ(defaults.version(), "description-v1+hypernym-v1");
  EXPECT_EQ(from_dir.hypernym.user, defaults.hypernym.user);
}

TEST(PromptTest, ParseSections) {
  const auto t = PromptTemplate::Parse("# version: v9\n[system]\nsys\n[user]\nhello {name}\nbye\n", "mem");
  EXPECT_EQ(t.version, "v9");
  EXPECT_EQ(t.system, "sys");
  EXPECT_EQ(t.user, "hello {name}\nbye");
  EXPECT_THROW(PromptTemplate::Parse("[user]\nno version\n", "mem"), Error);
}

TEST(PromptTest, RenderIsSinglePass) {
  EXPECT_EQ(RenderTemplate("{a} and {b} and {c}", {{"a", "{b}"}, {"b", "B"}}), "{b} and B and {c}");
  EXPECT_EQ(RenderTemplate("{{a}}", {{"a", "x"}}), "{x}");
}

TEST(StubClientTest, FallsBackToTypeEntity) {
  ExtractiveStubClient stub(std::map<std::string, std::string>{{"Orbit Labs", "research company"}});
  ChatRequest r;
  r.messages.push_back({"user", "Entity: Orbit Labs\nEntity type: ORG\nDescription: something"});
  EXPECT_EQ(stub.Complete(r), "research company");
  r.messages[0].content = "Entity: Nobody\nEntity type: PER\nDescription: something";
  EXPECT_EQ(stub.Complete(r), "per entity");
  OfflineChatClient offline;
  try {
    offline.Complete(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOfflineCacheMiss);
  }
}

}  // namespace
}  // namespace zsre::sideinfo
