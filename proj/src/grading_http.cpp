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

#include "sophgrade/grading_http.hpp"

#include <cctype>
#include <ctime>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "sophgrade/error.hpp"

namespace sophgrade {

using nlohmann::json;

namespace {

std::string iso_utc(TimePoint t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// The email list itself is never exposed; clients only see the cursor email.
json session_json(const GradingSession& s) {
  return {{"session_id", s.session_id},
          {"grader_id", s.grader_id},
          {"batch_id", s.batch_id},
          {"size", s.email_ids.size()},
          {"cursor", s.cursor},
          {"progress", s.progress()},
          {"status", session_status_name(s.status)},
          {"opened_at", iso_utc(s.opened_at)},
          {"deadline", iso_utc(s.deadline)},
          {"seed", s.seed}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message,
                const std::vector<std::string>& details = {}) {
  send_json(res, http_status_for(code),
            {{"error",
              {{"code", error_code_name(code)}, {"message", message}, {"details", details}}}});
}

const char* content_type_for(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".gif") return "image/gif";
  if (ext == ".webp") return "image/webp";
  return "application/octet-stream";
}

json parse_body(const httplib::Request& req) {
  try {
    json body = json::parse(req.body);
    if (!body.is_object()) throw Error(ErrorCode::kParse, "request body must be an object");
    return body;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kSchema:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kDuplicate:
    case ErrorCode::kWrongEmail:
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kExpired:
      return 410;
    case ErrorCode::kUnknownReference:
    case ErrorCode::kOutOfScale:
    case ErrorCode::kIncomplete:
    case ErrorCode::kInsufficientData:
    case ErrorCode::kDegenerate:
      return 422;
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

struct HttpFrontend::Impl {
  GradingService& service;
  std::filesystem::path image_root;
  httplib::Server server;

  Impl(GradingService& s, std::filesystem::path root)
      : service(s), image_root(std::move(root)) {
    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          try {
            std::rethrow_exception(ep);
          } catch (const Error& e) {
            send_error(res, e.code(), e.what(), e.details());
          } catch (const json::exception& e) {
            send_error(res, ErrorCode::kSchema, e.what());
          } catch (const std::exception& e) {
            send_error(res, ErrorCode::kIo, e.what());
          }
        });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        send_error(res, ErrorCode::kNotFound, "no route for " + req.method + " " + req.path);
      }
    });
    routes();
  }

  void routes() {
    server.Get("/catalog", [this](const httplib::Request&, httplib::Response& res) {
      json doc = json::parse(serialize_catalog(service.catalog()));
      json graded = json::array();
      for (std::size_t i = 0; i < service.catalog().graded_count(); ++i) {
        const Construct& c = service.catalog().graded(i);
        const auto& scale = service.catalog().scale(c.family);
        graded.push_back({{"id", c.id},
                          {"name", c.name},
                          {"family", family_name(c.family)},
                          {"min", scale.min},
                          {"max", scale.max}});
      }
      doc["graded"] = graded;
      doc["ptac_legend"] = ptac_rating_legend();
      send_json(res, 200, doc);
    });

    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      if (!body.contains("grader_id") || !body["grader_id"].is_string()) {
        throw Error(ErrorCode::kSchema, "grader_id (string) is required");
      }
      const std::string batch = body.value("batch_id", std::string("all"));
      std::optional<std::uint64_t> seed;
      if (body.contains("seed") && !body["seed"].is_null()) {
        seed = body["seed"].get<std::uint64_t>();
      }
      std::size_t size = 0;
      if (body.contains("size")) {
        if (!body["size"].is_number_unsigned()) {
          throw Error(ErrorCode::kSchema, "size must be a positive integer");
        }
        size = body["size"].get<std::size_t>();
      } else {
        throw Error(ErrorCode::kSchema, "size is required");
      }
      const auto s = service.create_session(body["grader_id"].get<std::string>(), batch,
                                            size, seed);
      send_json(res, 201, session_json(s));
    });

    server.Get("/sessions/:id", [this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, session_json(service.resume(req.path_params.at("id"))));
    });

    server.Get("/sessions/:id/next",
               [this](const httplib::Request& req, httplib::Response& res) {
                 const auto s = service.resume(req.path_params.at("id"));
                 json body = {{"session_id", s.session_id},
                              {"cursor", s.cursor},
                              {"size", s.email_ids.size()},
                              {"progress", s.progress()},
                              {"status", session_status_name(s.status)}};
                 if (s.status == SessionStatus::kOpen) {
                   const auto& id = s.email_ids[s.cursor];
                   body["email_id"] = id;
                   body["image_url"] = "/emails/" + id + "/image";
                 } else {
                   body["email_id"] = nullptr;
                   body["image_url"] = nullptr;
                 }
                 send_json(res, 200, body);
               });

    server.Post("/sessions/:id/grades",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const json body = parse_body(req);
                  Submission sub;
                  if (!body.contains("email_id") || !body["email_id"].is_string()) {
                    throw Error(ErrorCode::kSchema, "email_id (string) is required");
                  }
                  if (!body.contains("grades") || !body["grades"].is_object()) {
                    throw Error(ErrorCode::kSchema, "grades (object) is required");
                  }
                  sub.email_id = body["email_id"].get<std::string>();
                  std::vector<std::string> bad;
                  for (const auto& [k, v] : body["grades"].items()) {
                    if (!v.is_number_integer()) {
                      bad.push_back(k);
                      continue;
                    }
                    sub.grades[k] = v.get<int>();
                  }
                  if (!bad.empty()) {
                    throw Error(ErrorCode::kSchema, "grades must be integers", bad);
                  }
                  const auto ack = service.submit(req.path_params.at("id"), sub);
                  send_json(res, 200,
                            {{"session_id", ack.session_id},
                             {"email_id", ack.email_id},
                             {"cursor", ack.cursor},
                             {"size", ack.total},
                             {"progress", ack.total ? static_cast<double>(ack.cursor) /
                                                          static_cast<double>(ack.total)
                                                    : 1.0},
                             {"status", session_status_name(ack.status)}});
                });

    server.Get("/emails/:id/image",
               [this](const httplib::Request& req, httplib::Response& res) {
                 const auto& id = req.path_params.at("id");
                 const EmailRecord* rec = service.corpus().find(id);
                 if (!rec) throw Error(ErrorCode::kNotFound, "unknown email '" + id + "'");
                 const std::filesystem::path ref(rec->screenshot_ref);
                 bool escapes = ref.empty() || ref.is_absolute();
                 for (const auto& part : ref) escapes = escapes || part == "..";
                 const auto path = image_root / ref;
                 std::ifstream in(path, std::ios::binary);
                 if (escapes || !in) {
                   throw Error(ErrorCode::kNotFound, "no screenshot for email '" + id + "'");
                 }
                 std::ostringstream bytes;
                 bytes << in.rdbuf();
                 res.status = 200;
                 res.set_content(bytes.str(), content_type_for(path));
               });
  }
};

HttpFrontend::HttpFrontend(GradingService& service, std::filesystem::path image_root)
    : impl_(std::make_unique<Impl>(service, std::move(image_root))) {}

HttpFrontend::~HttpFrontend() = default;

bool HttpFrontend::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int HttpFrontend::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool HttpFrontend::serve() { return impl_->server.listen_after_bind(); }

void HttpFrontend::stop() { impl_->server.stop(); }

void HttpFrontend::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace sophgrade
