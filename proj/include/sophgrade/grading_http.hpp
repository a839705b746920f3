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

#ifndef SOPHGRADE_GRADING_HTTP_HPP_
#define SOPHGRADE_GRADING_HTTP_HPP_

#include <filesystem>
#include <memory>
#include <string>

#include "sophgrade/error.hpp"
#include "sophgrade/grading_service.hpp"

namespace sophgrade {

// HTTP/JSON front end over a GradingService. Errors are returned as
// {"error": {"code", "message", "details"}}.
class HttpFrontend {
 public:
  // Screenshots are served from image_root / screenshot_ref.
  HttpFrontend(GradingService& service, std::filesystem::path image_root);
  ~HttpFrontend();

  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Blocks until stop(). Returns false if the socket cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it (or -1), then serve() blocks.
  int bind_any_port(const std::string& host);
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

int http_status_for(ErrorCode code);

}  // namespace sophgrade

#endif  // SOPHGRADE_GRADING_HTTP_HPP_
