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

#ifndef SOPHGRADE_GRADING_SERVICE_HPP_
#define SOPHGRADE_GRADING_SERVICE_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "sophgrade/corpus.hpp"
#include "sophgrade/taxonomy.hpp"

namespace sophgrade {

using TimePoint = std::chrono::system_clock::time_point;
using ClockFn = std::function<TimePoint()>;

enum class SessionStatus { kOpen, kCompleted, kExpired };
std::string_view session_status_name(SessionStatus status);

struct GradingSession {
  std::string session_id;
  std::string grader_id;
  std::string batch_id;
  std::vector<std::string> email_ids;  // grader's shuffled order
  std::size_t cursor = 0;
  TimePoint opened_at;
  TimePoint deadline;
  SessionStatus status = SessionStatus::kOpen;
  std::uint64_t seed = 0;

  double progress() const {
    return email_ids.empty() ? 1.0
                             : static_cast<double>(cursor) /
                                   static_cast<double>(email_ids.size());
  }
  friend bool operator==(const GradingSession&, const GradingSession&) = default;
};

struct Submission {
  std::string email_id;
  std::map<std::string, int> grades;  // construct_id -> grade
};

struct SubmissionAck {
  std::string session_id;
  std::string email_id;
  std::size_t cursor = 0;
  std::size_t total = 0;
  SessionStatus status = SessionStatus::kOpen;
};

// Deterministic permutation keyed by (grader_id, seed). Stable across
// platforms: no std distribution is involved.
std::vector<std::string> shuffled_order(std::vector<std::string> emails,
                                        std::string_view grader_id,
                                        std::uint64_t seed);

struct ServiceConfig {
  std::filesystem::path data_dir;  // grades.csv and sessions.json live here
  std::chrono::seconds session_lifetime{24 * 60 * 60};
  bool enforce_deadline = true;
  std::uint64_t default_seed = 0;
  ClockFn clock;  // defaults to system_clock::now
};

// Session store backing the grading API. Submissions are fsync'ed to the
// grade log before they are acknowledged; the session snapshot is derived
// state and is reconciled against the log on startup.
class GradingService {
 public:
  // `batches` maps batch ids to email ids. A batch named "all" holding the
  // whole corpus is added unless the caller supplies one.
  GradingService(std::shared_ptr<const ConstructCatalog> catalog,
                 std::shared_ptr<const CorpusIndex> corpus,
                 std::map<std::string, std::vector<std::string>> batches,
                 ServiceConfig config);
  ~GradingService();

  GradingService(const GradingService&) = delete;
  GradingService& operator=(const GradingService&) = delete;

  // Takes the next `size` emails of the batch that this grader has not
  // been assigned yet, in batch order, and shuffles them.
  GradingSession create_session(const std::string& grader_id,
                                const std::string& batch_id, std::size_t size,
                                std::optional<std::uint64_t> seed = std::nullopt);

  GradingSession resume(const std::string& session_id) const;

  // Cursor email, or nullopt once the session is complete.
  std::optional<std::string> next_email(const std::string& session_id) const;

  SubmissionAck submit(const std::string& session_id, const Submission& submission);

  const ConstructCatalog& catalog() const { return *catalog_; }
  const CorpusIndex& corpus() const { return *corpus_; }
  std::filesystem::path grade_log_path() const;
  std::filesystem::path snapshot_path() const;

 private:
  struct Entry;

  TimePoint now() const;
  std::shared_ptr<Entry> lookup(const std::string& session_id) const;
  SessionStatus effective_status(const GradingSession& s) const;
  void recover();
  void append_log(const std::string& block);
  void write_snapshot();

  std::shared_ptr<const ConstructCatalog> catalog_;
  std::shared_ptr<const CorpusIndex> corpus_;
  std::map<std::string, std::vector<std::string>> batches_;
  ServiceConfig config_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;

  std::mutex log_mutex_;
  int log_fd_ = -1;
  std::mutex snapshot_mutex_;
};

}  // namespace sophgrade

#endif  // SOPHGRADE_GRADING_SERVICE_HPP_
