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
#include <thread>

#include "common/error.h"
#include "common/http.h"
#include "embedding/encoder.h"
#include "httplib.h"
#include "sideinfo/chat_client.h"
#include "sideinfo/generator.h"

namespace zsre {
namespace {

using nlohmann::json;

// A loopback server running on its own thread for the lifetime of the test.
class LocalServer {
 public:
  LocalServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(HttpChatClientTest, SendsBearerKeyAndParsesChoice) {
  std::string auth;
  json request;
  auto handler = [&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    request = json::parse(req.body);
    res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"banking institution"}}]})",
                    "application/json");
  };
  LocalServer srv;
  srv.server().Post("/v1/chat/completions", handler);
  sideinfo::HttpChatClient client(srv.url(), "sk-test", std::chrono::seconds(5));
  sideinfo::ChatRequest r;
  r.model = "gpt-4o-mini";
  r.messages = {{"system", "s"}, {"user", "u"}};
  EXPECT_EQ(client.Complete(r), "banking institution");
  EXPECT_EQ(auth, "Bearer sk-test");
  EXPECT_EQ(request["model"], "gpt-4o-mini");
  EXPECT_EQ(request["messages"][1]["content"], "u");
  EXPECT_EQ(request["temperature"], 0.0);
}

TEST(HttpChatClientTest, RetriesThrottlingThenSucceeds) {
  std::atomic<int> calls{0};
  LocalServer srv;
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (++calls < 3) {
      res.status = 429;
      res.set_content("slow down", "text/plain");
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"city"}}]})", "application/json");
  });
  sideinfo::HttpChatClient client(srv.url(), "", std::chrono::seconds(5));
  sideinfo::GenerationConfig cfg;
  cfg.retry_backoff = std::chrono::milliseconds(1);
  EXPECT_EQ(sideinfo::CompleteWithRetry(client, {}, cfg), "city");
  EXPECT_EQ(calls.load(), 3);
}

TEST(HttpChatClientTest, ClientErrorIsNotRetried) {
  std::atomic<int> calls{0};
  LocalServer srv;
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 401;
    res.set_content("bad key", "text/plain");
  });
  sideinfo::HttpChatClient client(srv.url(), "wrong", std::chrono::seconds(5));
  sideinfo::GenerationConfig cfg;
  cfg.retry_backoff = std::chrono::milliseconds(1);
  try {
    sideinfo::CompleteWithRetry(client, {}, cfg);
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.status(), 401);
    EXPECT_EQ(e.body(), "bad key");
  }
  EXPECT_EQ(calls.load(), 1);
}

TEST(HttpChatClientTest, MalformedBodyIsServiceError) {
  LocalServer srv;
  srv.server().Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"choices":[]})", "application/json");
  });
  sideinfo::HttpChatClient client(srv.url(), "", std::chrono::seconds(5));
  EXPECT_THROW(client.Complete({}), ServiceError);
}

TEST(HttpTest, UnreachableIsStatusZero) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  const auto resp = http::PostJson("http://127.0.0.1:" + std::to_string(port), "/x", "{}", {},
                                   std::chrono::milliseconds(500));
  EXPECT_EQ(resp.status, 0);
}

TEST(HttpEncoderTest, PostsTextsAndReadsVectors) {
  json request;
  LocalServer srv;
  srv.server().Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    request = json::parse(req.body);
    json vectors = json::array();
    for (const auto& t : request["texts"]) vectors.push_back({static_cast<double>(t.get<std::string>().size()), 1.0});
    res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
  });
  embedding::HttpEncoder enc(srv.url(), "bert-base-uncased", embedding::Pooling::kMeanTokens, std::chrono::seconds(5));
  const auto out = enc.Encode({"ab", "abcd"});
  EXPECT_EQ(out, (std::vector<std::vector<double>>{{2, 1}, {4, 1}}));
  EXPECT_EQ(request["model"], "bert-base-uncased");
  EXPECT_EQ(request["pooling"], "mean_tokens");
}

TEST(HttpEncoderTest, ServerErrorPropagates) {
  LocalServer srv;
  srv.server().Post("/embed", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  embedding::HttpEncoder enc(srv.url(), "m", embedding::Pooling::kClsToken, std::chrono::seconds(5));
  try {
    enc.Encode({"x"});
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.status(), 500);
  }
}

}  // namespace
}  // namespace zsre
