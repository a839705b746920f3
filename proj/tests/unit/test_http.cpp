// Copyright 2026 The sophgrade Authors
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
#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "sophgrade/grading_http.hpp"
#include "synthetic.hpp"

using namespace sophgrade;
using nlohmann::json;

namespace {

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testkit::temp_dir("http");
    std::filesystem::create_directories(dir_ / "images");
    const auto data = testkit::make_synthetic(default_catalog(), {.emails = 30, .seed = 2});
    auto corpus = std::make_shared<CorpusIndex>(ingest_manifest(data.manifest, 2024));
    std::ofstream(dir_ / "images" / "E00001.png", std::ios::binary) << "\x89PNG-bytes";
    ServiceConfig c;
    c.data_dir = dir_ / "store";
    service_ = std::make_unique<GradingService>(
        std::make_shared<ConstructCatalog>(default_catalog()), corpus,
        std::map<std::string, std::vector<std::string>>{}, c);
    frontend_ = std::make_unique<HttpFrontend>(*service_, dir_ / "images");
    port_ = frontend_->bind_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { frontend_->serve(); });
    frontend_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    frontend_->stop();
    thread_.join();
    std::filesystem::remove_all(dir_);
  }

  json post(const std::string& path, const json& body, int expect) {
    auto res = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << res->body;
    return json::parse(res->body);
  }
  json get(const std::string& path, int expect) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << res->body;
    return json::parse(res->body);
  }
  json grades(int v) const {
    json g;
    for (std::size_t i = 0; i < default_catalog().graded_count(); ++i) {
      g[default_catalog().graded(i).id] = v;
    }
    return g;
  }

  std::filesystem::path dir_;
  std::unique_ptr<GradingService> service_;
  std::unique_ptr<HttpFrontend> frontend_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace

TEST_F(HttpTest, CatalogEndpoint) {
  const auto doc = get("/catalog", 200);
  EXPECT_EQ(doc["graded"].size(), 15u);
  EXPECT_EQ(doc["graded"][0]["max"], 7);
  EXPECT_EQ(doc["graded"][14]["max"], 5);
  EXPECT_EQ(doc["ptac_legend"].size(), 6u);
  EXPECT_EQ(doc["constructs"].size(), 23u);
}

TEST_F(HttpTest, SessionLifecycle) {
  const auto s = post("/sessions", {{"grader_id", "alice"}, {"batch_id", "all"}, {"size", 3}, {"seed", 4}}, 201);
  const std::string id = s["session_id"];
  EXPECT_EQ(s["size"], 3);
  EXPECT_EQ(s["status"], "Open");
  EXPECT_FALSE(s.contains("email_ids"));

  for (int i = 0; i < 3; ++i) {
    const auto next = get("/sessions/" + id + "/next", 200);
    const std::string email = next["email_id"];
    EXPECT_EQ(next["image_url"], "/emails/" + email + "/image");
    const auto ack = post("/sessions/" + id + "/grades", {{"email_id", email}, {"grades", grades(1)}}, 200);
    EXPECT_EQ(ack["cursor"], i + 1);
  }
  const auto done = get("/sessions/" + id, 200);
  EXPECT_EQ(done["status"], "Completed");
  EXPECT_DOUBLE_EQ(done["progress"].get<double>(), 1.0);
  EXPECT_TRUE(get("/sessions/" + id + "/next", 200)["email_id"].is_null());
}

TEST_F(HttpTest, ResumeIsIdempotent) {
  const auto s = post("/sessions", {{"grader_id", "bob"}, {"size", 10}}, 201);
  const std::string id = s["session_id"];
  const auto a = client_->Get("/sessions/" + id);
  const auto b = client_->Get("/sessions/" + id);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->body, b->body);
}

TEST_F(HttpTest, DistinctGradersDistinctOrders) {
  const auto a = post("/sessions", {{"grader_id", "g1"}, {"size", 30}, {"seed", 1}}, 201);
  const auto b = post("/sessions", {{"grader_id", "g2"}, {"size", 30}, {"seed", 1}}, 201);
  std::vector<std::string> first, second;
  for (auto* out : {&first, &second}) {
    const std::string id = (out == &first ? a : b)["session_id"];
    for (int i = 0; i < 5; ++i) {
      const std::string email = get("/sessions/" + id + "/next", 200)["email_id"];
      out->push_back(email);
      post("/sessions/" + id + "/grades", {{"email_id", email}, {"grades", grades(0)}}, 200);
    }
  }
  EXPECT_NE(first, second);
}

TEST_F(HttpTest, ValidationErrors) {
  const auto s = post("/sessions", {{"grader_id", "carol"}, {"size", 2}}, 201);
  const std::string id = s["session_id"];
  const std::string email = get("/sessions/" + id + "/next", 200)["email_id"];

  auto partial = grades(1);
  partial.erase("fit_and_form");
  auto err = post("/sessions/" + id + "/grades", {{"email_id", email}, {"grades", partial}}, 422);
  EXPECT_EQ(err["error"]["code"], "incomplete_submission");
  EXPECT_EQ(err["error"]["details"], json::array({"fit_and_form"}));

  auto high = grades(1);
  high["urgency"] = 9;
  err = post("/sessions/" + id + "/grades", {{"email_id", email}, {"grades", high}}, 422);
  EXPECT_EQ(err["error"]["code"], "out_of_scale");

  err = post("/sessions/" + id + "/grades", {{"email_id", "E00099"}, {"grades", grades(1)}}, 409);
  EXPECT_EQ(err["error"]["code"], "wrong_email");

  auto text = grades(1);
  text["urgency"] = "three";
  err = post("/sessions/" + id + "/grades", {{"email_id", email}, {"grades", text}}, 400);
  EXPECT_EQ(err["error"]["code"], "schema_violation");

  post("/sessions/" + id + "/grades", {{"email_id", email}, {"grades", grades(1)}}, 200);
  err = post("/sessions/" + id + "/grades", {{"email_id", email}, {"grades", grades(1)}}, 409);
  EXPECT_EQ(err["error"]["code"], "duplicate");

  err = get("/sessions/nope", 404);
  EXPECT_EQ(err["error"]["code"], "not_found");
  err = post("/sessions", {{"grader_id", "x"}}, 400);
  EXPECT_EQ(err["error"]["code"], "schema_violation");
  err = post("/sessions", {{"grader_id", "x"}, {"size", 31}}, 400);
  EXPECT_EQ(err["error"]["code"], "invalid_argument");

  auto raw = client_->Post("/sessions", "{oops", "application/json");
  ASSERT_TRUE(raw);
  EXPECT_EQ(raw->status, 400);
  EXPECT_EQ(json::parse(raw->body)["error"]["code"], "parse_error");
}

TEST_F(HttpTest, EmailImages) {
  auto res = client_->Get("/emails/E00001/image");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "\x89PNG-bytes");
  EXPECT_EQ(res->get_header_value("Content-Type"), "image/png");
  get("/emails/E00002/image", 404);
  get("/emails/NOPE/image", 404);
  get("/no/such/route", 404);
}

TEST(HttpStatus, Mapping) {
  EXPECT_EQ(http_status_for(ErrorCode::kExpired), 410);
  EXPECT_EQ(http_status_for(ErrorCode::kNotFound), 404);
  EXPECT_EQ(http_status_for(ErrorCode::kIncomplete), 422);
  EXPECT_EQ(http_status_for(ErrorCode::kWrongEmail), 409);
}
