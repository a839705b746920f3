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

#include "sophgrade/grading_service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sophgrade/csv.hpp"
#include "sophgrade/error.hpp"
#include "sophgrade/grades.hpp"

namespace sophgrade {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// splitmix64 finaliser, decorrelates grader hash from the seed.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform draw in [0, bound) by rejection.
template <class Engine>
std::uint64_t bounded(Engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::int64_t to_seconds(TimePoint t) {
  return std::chrono::duration_cast<std::chrono::seconds>(t.time_since_epoch()).count();
}

TimePoint from_seconds(std::int64_t s) { return TimePoint{std::chrono::seconds{s}}; }

std::string iso_utc(TimePoint t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

[[noreturn]] void io_fail(const std::filesystem::path& path, const char* what) {
  throw Error(ErrorCode::kIo, path.string() + ": " + what + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view data, const std::filesystem::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_fail(path, "write");
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void fsync_dir(const std::filesystem::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view session_status_name(SessionStatus status) {
  switch (status) {
    case SessionStatus::kOpen: return "Open";
    case SessionStatus::kCompleted: return "Completed";
    case SessionStatus::kExpired: return "Expired";
  }
  return "Open";
}

std::vector<std::string> shuffled_order(std::vector<std::string> emails,
                                        std::string_view grader_id,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(mix(fnv1a(grader_id) ^ mix(seed)));
  for (std::size_t i = emails.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(emails[i - 1], emails[j]);
  }
  return emails;
}

struct GradingService::Entry {
  std::mutex mutex;
  GradingSession session;  // identity and order are immutable after insert
};

GradingService::GradingService(std::shared_ptr<const ConstructCatalog> catalog,
                               std::shared_ptr<const CorpusIndex> corpus,
                               std::map<std::string, std::vector<std::string>> batches,
                               ServiceConfig config)
    : catalog_(std::move(catalog)),
      corpus_(std::move(corpus)),
      batches_(std::move(batches)),
      config_(std::move(config)) {
  if (!catalog_ || !corpus_) {
    throw Error(ErrorCode::kInvalidArgument, "catalog and corpus are required");
  }
  if (!config_.clock) config_.clock = [] { return std::chrono::system_clock::now(); };
  if (!batches_.count("all")) {
    auto& all = batches_["all"];
    for (const auto& [id, rec] : corpus_->emails()) all.push_back(id);
  }
  for (const auto& [batch, ids] : batches_) {
    std::set<std::string_view> seen;
    for (const auto& id : ids) {
      if (!corpus_->find(id)) {
        throw Error(ErrorCode::kUnknownReference,
                    "batch '" + batch + "' names unknown email '" + id + "'");
      }
      if (!seen.insert(id).second) {
        throw Error(ErrorCode::kDuplicate,
                    "batch '" + batch + "' lists email '" + id + "' twice");
      }
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(config_.data_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, config_.data_dir.string() + ": " + ec.message());
  }
  recover();
}

GradingService::~GradingService() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

std::filesystem::path GradingService::grade_log_path() const {
  return config_.data_dir / "grades.csv";
}

std::filesystem::path GradingService::snapshot_path() const {
  return config_.data_dir / "sessions.json";
}

TimePoint GradingService::now() const { return config_.clock(); }

SessionStatus GradingService::effective_status(const GradingSession& s) const {
  if (s.cursor >= s.email_ids.size()) return SessionStatus::kCompleted;
  if (config_.enforce_deadline && now() > s.deadline) return SessionStatus::kExpired;
  return SessionStatus::kOpen;
}

// Rebuilds state from disk. The grade log is authoritative: a submission
// block cut short by a crash is dropped, and session cursors are moved to
// match whatever the log says was acknowledged.
void GradingService::recover() {
  const auto log_path = grade_log_path();
  const std::size_t per_email = catalog_->graded_count();
  std::set<std::pair<std::string, std::string>> complete;  // (grader, email)

  if (std::filesystem::exists(log_path)) {
    std::string text = read_file(log_path);
    bool rewrite = false;
    if (!text.empty() && text.back() != '\n') {
      text.erase(text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1);
      rewrite = true;
    }
    std::vector<std::string> lines;
    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    if (!text.empty()) {
      const auto rows = csv::parse(text);
      if (rows.empty()) throw Error(ErrorCode::kSchema, log_path.string() + ": empty log");
      const csv::Header header(rows.front());
      const auto c_email = header.require("email_id");
      const auto c_grader = header.require("grader_id");
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        if (f.size() <= std::max(c_email, c_grader)) continue;
        ++counts[{f[c_grader], f[c_email]}];
      }
      for (const auto& [key, n] : counts) {
        if (n == per_email) complete.insert(key);
        else rewrite = true;
      }
      if (rewrite) {
        std::string kept = csv::join(rows.front().fields) + "\n";
        for (std::size_t i = 1; i < rows.size(); ++i) {
          const auto& f = rows[i].fields;
          if (f.size() <= std::max(c_email, c_grader)) continue;
          if (complete.count({f[c_grader], f[c_email]})) kept += csv::join(f) + "\n";
        }
        text = std::move(kept);
      }
    }
    if (rewrite) {
      const auto tmp = log_path.string() + ".tmp";
      const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
      if (fd < 0) io_fail(tmp, "open");
      write_all(fd, text, tmp);
      if (::fsync(fd) != 0) io_fail(tmp, "fsync");
      ::close(fd);
      std::filesystem::rename(tmp, log_path);
      fsync_dir(config_.data_dir);
    }
  }

  log_fd_ = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (log_fd_ < 0) io_fail(log_path, "open");
  if (::lseek(log_fd_, 0, SEEK_END) == 0) {
    write_all(log_fd_, std::string(kGradeFileHeader) + "\n", log_path);
    if (::fsync(log_fd_) != 0) io_fail(log_path, "fsync");
  }

  const auto snap = snapshot_path();
  if (!std::filesystem::exists(snap)) return;
  try {
    const json doc = json::parse(read_file(snap));
    next_id_ = doc.at("next_id").get<std::uint64_t>();
    for (const auto& j : doc.at("sessions")) {
      auto entry = std::make_shared<Entry>();
      GradingSession& s = entry->session;
      s.session_id = j.at("session_id").get<std::string>();
      s.grader_id = j.at("grader_id").get<std::string>();
      s.batch_id = j.at("batch_id").get<std::string>();
      s.email_ids = j.at("email_ids").get<std::vector<std::string>>();
      s.opened_at = from_seconds(j.at("opened_at").get<std::int64_t>());
      s.deadline = from_seconds(j.at("deadline").get<std::int64_t>());
      s.seed = j.at("seed").get<std::uint64_t>();
      s.cursor = 0;
      while (s.cursor < s.email_ids.size() &&
             complete.count({s.grader_id, s.email_ids[s.cursor]})) {
        ++s.cursor;
      }
      s.status = effective_status(s);
      sessions_[s.session_id] = std::move(entry);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, snap.string() + ": " + e.what());
  }
}

void GradingService::append_log(const std::string& block) {
  std::lock_guard lock(log_mutex_);
  write_all(log_fd_, block, grade_log_path());
  if (::fsync(log_fd_) != 0) io_fail(grade_log_path(), "fsync");
}

void GradingService::write_snapshot() {
  std::lock_guard snap_lock(snapshot_mutex_);
  json sessions = json::array();
  std::uint64_t next_id;
  {
    std::shared_lock lock(sessions_mutex_);
    next_id = next_id_;
    for (const auto& [id, entry] : sessions_) {
      std::lock_guard entry_lock(entry->mutex);
      const GradingSession& s = entry->session;
      sessions.push_back({{"session_id", s.session_id},
                          {"grader_id", s.grader_id},
                          {"batch_id", s.batch_id},
                          {"email_ids", s.email_ids},
                          {"cursor", s.cursor},
                          {"opened_at", to_seconds(s.opened_at)},
                          {"deadline", to_seconds(s.deadline)},
                          {"seed", s.seed}});
    }
  }
  const json doc = {{"next_id", next_id}, {"sessions", sessions}};
  const auto path = snapshot_path();
  const auto tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) io_fail(tmp, "open");
  write_all(fd, doc.dump(2) + "\n", tmp);
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_fail(tmp, "fsync");
  }
  ::close(fd);
  std::filesystem::rename(tmp, path);
  fsync_dir(config_.data_dir);
}

std::shared_ptr<GradingService::Entry> GradingService::lookup(
    const std::string& session_id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown session '" + session_id + "'");
  }
  return it->second;
}

GradingSession GradingService::create_session(const std::string& grader_id,
                                              const std::string& batch_id,
                                              std::size_t size,
                                              std::optional<std::uint64_t> seed) {
  if (grader_id.empty() || grader_id.find_first_of(",\"\r\n") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "grader_id must be a plain non-empty token");
  }
  const auto batch = batches_.find(batch_id);
  if (batch == batches_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown batch '" + batch_id + "'");
  }
  if (batch->second.empty()) throw Error(ErrorCode::kInvalidArgument, "batch is empty");
  if (size == 0 || size > batch->second.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "session size must be in [1, " + std::to_string(batch->second.size()) + "]");
  }

  GradingSession s;
  {
    std::unique_lock lock(sessions_mutex_);
    std::set<std::string_view> assigned;
    for (const auto& [id, entry] : sessions_) {
      const GradingSession& other = entry->session;
      if (other.grader_id != grader_id || other.batch_id != batch_id) continue;
      assigned.insert(other.email_ids.begin(), other.email_ids.end());
    }
    std::vector<std::string> picked;
    for (const auto& id : batch->second) {
      if (picked.size() == size) break;
      if (!assigned.count(id)) picked.push_back(id);
    }
    if (picked.size() < size) {
      throw Error(ErrorCode::kInsufficientData,
                  "only " + std::to_string(picked.size()) + " emails of batch '" + batch_id +
                      "' remain unassigned for grader '" + grader_id + "'");
    }

    char id[32];
    std::snprintf(id, sizeof id, "s%06llu", static_cast<unsigned long long>(next_id_++));
    s.session_id = id;
    s.grader_id = grader_id;
    s.batch_id = batch_id;
    s.seed = seed.value_or(config_.default_seed);
    s.email_ids = shuffled_order(std::move(picked), grader_id, s.seed);
    s.opened_at = std::chrono::time_point_cast<std::chrono::seconds>(now());
    s.deadline = s.opened_at + config_.session_lifetime;
    s.status = SessionStatus::kOpen;
    auto entry = std::make_shared<Entry>();
    entry->session = s;
    sessions_[s.session_id] = std::move(entry);
  }
  write_snapshot();
  return s;
}

GradingSession GradingService::resume(const std::string& session_id) const {
  const auto entry = lookup(session_id);
  std::lock_guard lock(entry->mutex);
  GradingSession s = entry->session;
  s.status = effective_status(s);
  return s;
}

std::optional<std::string> GradingService::next_email(const std::string& session_id) const {
  const GradingSession s = resume(session_id);
  if (s.cursor >= s.email_ids.size()) return std::nullopt;
  return s.email_ids[s.cursor];
}

SubmissionAck GradingService::submit(const std::string& session_id,
                                     const Submission& submission) {
  const auto entry = lookup(session_id);
  SubmissionAck ack;
  {
    std::lock_guard lock(entry->mutex);
    GradingSession& s = entry->session;
    switch (effective_status(s)) {
      case SessionStatus::kCompleted:
        throw Error(ErrorCode::kConflict, "session '" + session_id + "' is complete");
      case SessionStatus::kExpired:
        throw Error(ErrorCode::kExpired, "session '" + session_id + "' passed its deadline");
      case SessionStatus::kOpen:
        break;
    }
    for (std::size_t i = 0; i < s.cursor; ++i) {
      if (s.email_ids[i] == submission.email_id) {
        throw Error(ErrorCode::kDuplicate,
                    "email '" + submission.email_id + "' was already graded in this session");
      }
    }
    if (submission.email_id != s.email_ids[s.cursor]) {
      throw Error(ErrorCode::kWrongEmail, "expected email '" + s.email_ids[s.cursor] +
                                              "', got '" + submission.email_id + "'");
    }

    std::vector<std::string> unknown;
    for (const auto& [construct, grade] : submission.grades) {
      const auto idx = catalog_->graded_index(construct);
      if (!idx) unknown.push_back(construct);
    }
    if (!unknown.empty()) {
      throw Error(ErrorCode::kUnknownReference, "not a graded construct", unknown);
    }
    std::vector<std::string> missing;
    std::vector<std::string> out_of_scale;
    for (std::size_t i = 0; i < catalog_->graded_count(); ++i) {
      const Construct& c = catalog_->graded(i);
      const auto it = submission.grades.find(c.id);
      if (it == submission.grades.end()) {
        missing.push_back(c.id);
      } else if (!catalog_->scale(c.family).contains(it->second)) {
        out_of_scale.push_back(c.id);
      }
    }
    if (!missing.empty()) {
      std::string msg = "missing grades for:";
      for (const auto& m : missing) msg += " " + m;
      throw Error(ErrorCode::kIncomplete, msg, missing);
    }
    if (!out_of_scale.empty()) {
      std::string msg = "grade outside scale for:";
      for (const auto& m : out_of_scale) {
        const auto& c = *catalog_->find(m);
        const auto scale = catalog_->scale(c.family);
        msg += " " + m + " (" + std::to_string(submission.grades.at(m)) + " not in [" +
               std::to_string(scale.min) + ", " + std::to_string(scale.max) + "])";
      }
      throw Error(ErrorCode::kOutOfScale, msg, out_of_scale);
    }

    const std::string stamp = iso_utc(now());
    std::string block;
    for (std::size_t i = 0; i < catalog_->graded_count(); ++i) {
      const Construct& c = catalog_->graded(i);
      block += csv::join({submission.email_id, c.id, s.grader_id,
                          std::to_string(submission.grades.at(c.id)), stamp}) +
               "\n";
    }
    // Durable before the cursor moves and before the caller sees an ack.
    append_log(block);
    ++s.cursor;
    s.status = effective_status(s);
    ack = {s.session_id, submission.email_id, s.cursor, s.email_ids.size(), s.status};
  }
  write_snapshot();
  return ack;
}

}  // namespace sophgrade
