// Copyright 2026 The PF-TS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <thread>

#include <gtest/gtest.h>

#include "pfts/session.h"
#include "json.hpp"
// Keep after Eigen.
#include "httplib.h"

namespace pfts {
namespace {

using nlohmann::json;

class SessionApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = std::filesystem::temp_directory_path() /
            ("pfts_api_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    std::filesystem::remove_all(root_);
    service_ = std::make_unique<SessionService>(SessionStore(root_.string()));
    api_ = std::make_unique<SessionApi>(*service_);
  }
  void TearDown() override { std::filesystem::remove_all(root_); }

  json Call(const std::string& method, const std::string& path,
            const json& body, int expected_status) {
    const ApiResponse r =
        api_->Handle(method, path, body.is_null() ? "" : body.dump());
    EXPECT_EQ(r.status, expected_status) << method << " " << path << " "
                                         << r.body;
    return json::parse(r.body);
  }

  std::filesystem::path root_;
  std::unique_ptr<SessionService> service_;
  std::unique_ptr<SessionApi> api_;
};

TEST_F(SessionApiTest, FullLoop) {
  const json created = Call("POST", "/sessions",
                            {{"candidates", {"red", "green", "blue"}},
                             {"config", {{"seed", 4}}},
                             {"id", "colors"}},
                            201);
  EXPECT_EQ(created["id"], "colors");
  EXPECT_EQ(created["status"], "ready");
  EXPECT_EQ(created["round"], 0);
  EXPECT_EQ(created["seed"], 4);
  EXPECT_TRUE(created["one_hot"]);
  EXPECT_EQ(created["candidates"][2]["label"], "blue");
  EXPECT_TRUE(created["pending"].is_null());

  const json pair = Call("GET", "/sessions/colors/pair", nullptr, 200);
  EXPECT_EQ(pair["session_id"], "colors");
  EXPECT_EQ(pair["round"], 1);
  EXPECT_EQ(pair["status"], "awaiting_feedback");
  EXPECT_GT(pair["exploration_scale"].get<double>(), 0.0);
  EXPECT_EQ(Call("GET", "/sessions/colors/pair", nullptr, 200), pair);

  const size_t winner = pair["second"]["index"];
  const json after = Call("POST", "/sessions/colors/feedback",
                          {{"winner", winner}, {"pair_id", pair["pair_id"]}},
                          200);
  EXPECT_EQ(after["round"], 1);
  EXPECT_FALSE(after["replayed"]);
  EXPECT_EQ(after["history"][0]["winner"], winner);
  EXPECT_EQ(after["history"][0]["pair_id"], pair["pair_id"]);
  const json replay = Call("POST", "/sessions/colors/feedback",
                           {{"winner", winner}, {"pair_id", pair["pair_id"]}},
                           200);
  EXPECT_TRUE(replay["replayed"]);
  EXPECT_EQ(replay["round"], 1);

  const json report = Call("GET", "/sessions/colors/report", nullptr, 200);
  EXPECT_EQ(report["anchor"]["index"], 0);
  ASSERT_EQ(report["report"].size(), 3u);
  EXPECT_EQ(report["report"][0]["mean"], 0.0);
  EXPECT_TRUE(report["best"].contains("label"));

  const json fetched = Call("GET", "/sessions/colors", nullptr, 200);
  EXPECT_EQ(fetched["history"], after["history"]);
  EXPECT_EQ(fetched["round"], 1);

  const json closed = Call("DELETE", "/sessions/colors", nullptr, 200);
  EXPECT_EQ(closed["status"], "closed");
  const json conflict = Call("GET", "/sessions/colors/pair", nullptr, 409);
  EXPECT_EQ(conflict["code"], "Conflict");
}

TEST_F(SessionApiTest, FeatureCandidates) {
  const json created = Call(
      "POST", "/sessions",
      {{"candidates",
        {{{"label", "a"}, {"features", {0.1, 0.2}}},
         {{"label", "b"}, {"features", {0.4, 0.9}}}}},
       {"config",
        {{"kernel", {{"family", "se"}, {"lengthscale", 0.5}}},
         {"lambda", 0.1},
         {"exploration", {{"schedule", "constant"}, {"value", 0.5}}}}}},
      201);
  EXPECT_FALSE(created["one_hot"]);
  const std::string id = created["id"];
  const SessionState s = service_->Get(id);
  EXPECT_EQ(s.config.kernel.family, KernelFamily::kSquaredExponential);
  EXPECT_EQ(s.config.lambda, 0.1);
  const json pair = Call("GET", "/sessions/" + id + "/pair", nullptr, 200);
  EXPECT_EQ(pair["exploration_scale"], 0.5);
}

TEST_F(SessionApiTest, ErrorMapping) {
  EXPECT_EQ(Call("POST", "/sessions", {{"candidates", {"only"}}}, 400)["code"],
            "BadRequest");
  Call("POST", "/sessions", {{"nothing", 1}}, 400);
  EXPECT_EQ(api_->Handle("POST", "/sessions", "{oops").status, 400);
  EXPECT_EQ(api_->Handle("POST", "/sessions", "[1]").status, 400);
  Call("POST", "/sessions",
       {{"candidates", {"a", "b"}}, {"config", {{"kernel", {{"family", "x"}}}}}},
       400);
  Call("POST", "/sessions",
       {{"candidates", {"a", "b"}},
        {"config", {{"exploration", {{"schedule", "x"}}}}}},
       400);
  EXPECT_EQ(Call("GET", "/sessions/missing", nullptr, 404)["code"],
            "NotFound");
  Call("GET", "/elsewhere", nullptr, 404);
  Call("GET", "/sessions", nullptr, 405);
  Call("PUT", "/sessions/x", nullptr, 405);

  Call("POST", "/sessions", {{"candidates", {"a", "b", "c"}}, {"id", "s"}},
       201);
  Call("POST", "/sessions", {{"candidates", {"a", "b"}}, {"id", "s"}}, 409);
  Call("POST", "/sessions/s/feedback", {{"winner", 0}}, 409);
  const json pair = Call("GET", "/sessions/s/pair", nullptr, 200);
  Call("POST", "/sessions/s/feedback", {{"winner", -1}}, 400);
  Call("POST", "/sessions/s/feedback", {{"winner", "first"}}, 400);
  Call("POST", "/sessions/s/feedback", {{"winner", 99}}, 400);
  Call("POST", "/sessions/s/feedback",
       {{"winner", pair["first"]["index"]}, {"pair_id", "stale"}}, 409);

  std::filesystem::create_directories(root_);
  std::ofstream(root_ / "rotten.json") << "{}";
  EXPECT_EQ(Call("GET", "/sessions/rotten", nullptr, 500)["code"],
            "CorruptStore");
}

TEST(SessionHttpServerTest, ServesOverTcp) {
  const auto root = std::filesystem::temp_directory_path() / "pfts_http_tcp";
  std::filesystem::remove_all(root);
  SessionService service{SessionStore(root.string())};
  SessionHttpServer server(service);
  const int port = server.Bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.Serve(); });

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  auto created = client.Post(
      "/sessions", R"({"candidates": ["a", "b", "c"], "id": "tcp"})",
      "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  EXPECT_EQ(created->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(created->get_header_value("Content-Type"), "application/json");

  auto pair = client.Get("/sessions/tcp/pair");
  ASSERT_TRUE(pair);
  EXPECT_EQ(pair->status, 200);
  const json p = json::parse(pair->body);
  const json feedback = {{"winner", p["first"]["index"]},
                         {"pair_id", p["pair_id"]}};
  auto fed = client.Post("/sessions/tcp/feedback", feedback.dump(),
                         "application/json");
  ASSERT_TRUE(fed);
  EXPECT_EQ(json::parse(fed->body)["round"], 1);

  auto options = client.Options("/sessions");
  ASSERT_TRUE(options);
  EXPECT_EQ(options->status, 204);

  auto missing = client.Get("/sessions/none");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  auto closed = client.Delete("/sessions/tcp");
  ASSERT_TRUE(closed);
  EXPECT_EQ(json::parse(closed->body)["status"], "closed");

  server.Stop();
  thread.join();
  std::filesystem::remove_all(root);
}

}  // namespace
}  // namespace pfts
