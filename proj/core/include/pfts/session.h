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

#ifndef PFTS_SESSION_H_
#define PFTS_SESSION_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pfts/kernels.h"
#include "pfts/policies.h"
#include "pfts/types.h"

namespace pfts {

enum class SessionStatus { kReady, kAwaitingFeedback, kClosed };

std::string SessionStatusName(SessionStatus status);
SessionStatus ParseSessionStatus(const std::string& name);

struct SessionCandidate {
  std::string label;
  Point features;

  bool operator==(const SessionCandidate&) const = default;
};

struct SessionConfig {
  BaseKernel kernel;
  double lambda = 0.05;
  double norm_bound = 1.0;
  ExplorationSchedule exploration;
  uint64_t seed = 0;
};

// The pair proposed in round t = |history| + 1. pair_id is the token a
// feedback submission must echo.
struct PendingPair {
  std::string pair_id;
  size_t first = 0;
  size_t second = 0;
  double scale = 0.0;

  bool operator==(const PendingPair&) const = default;
};

struct FeedbackRecord {
  std::string pair_id;
  size_t first = 0;
  size_t second = 0;
  int label = 0;  // 1 iff first won

  bool operator==(const FeedbackRecord&) const = default;
};

struct SessionState {
  std::string id;
  SessionConfig config;
  std::vector<SessionCandidate> candidates;
  bool one_hot = false;
  std::vector<FeedbackRecord> history;
  std::optional<PendingPair> pending;
  SessionStatus status = SessionStatus::kReady;
  int64_t created_ms = 0;
  int64_t updated_ms = 0;

  // t = |history|
  int round() const { return static_cast<int>(history.size()); }
};

bool operator==(const SessionConfig& a, const SessionConfig& b);
bool operator==(const SessionState& a, const SessionState& b);

// Versioned JSON document for one session (schema_version 1).
std::string SessionToJson(const SessionState& state);
// Throws kCorruptStore naming `record_id` for malformed documents or an
// unknown schema version.
SessionState SessionFromJson(const std::string& text,
                             const std::string& record_id);

// Ids are 1-64 characters from [A-Za-z0-9_-].
bool IsValidSessionId(const std::string& id);

// One JSON file per session, <root>/<id>.json, replaced atomically.
class SessionStore {
 public:
  explicit SessionStore(std::string root);

  const std::string& root() const { return root_; }
  void Save(const SessionState& state) const;
  std::optional<SessionState> Load(const std::string& id) const;
  std::vector<std::string> List() const;

 private:
  std::string PathFor(const std::string& id) const;
  std::string root_;
};

struct CandidateInput {
  std::string label;
  std::optional<Eigen::VectorXd> features;
};

struct SessionReport {
  int round = 0;
  SessionStatus status = SessionStatus::kReady;
  // Anchored at candidate 0: mean_j = h_t(x_j, x_0), sd_j = sigma_t(x_j, x_0).
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
  size_t best = 0;
};

struct FeedbackResult {
  SessionState state;
  // True when the pair_id had already been applied; nothing was appended.
  bool replayed = false;
};

// Preference-elicitation sessions over a SessionStore. Operations on one
// session are serialized; different sessions do not block each other. Every
// mutation is persisted before it returns.
class SessionService {
 public:
  explicit SessionService(SessionStore store);

  // Throws kBadRequest for fewer than 2 candidates, ragged or mixed
  // features. Candidates without features get one-hot vectors.
  SessionState Create(const std::vector<CandidateInput>& candidates,
                      const SessionConfig& config,
                      std::optional<std::string> id = std::nullopt);
  SessionState Get(const std::string& id);
  // Proposes the next pair, or returns the pending one unchanged.
  SessionState NextPair(const std::string& id);
  // winner must be pending.first or pending.second. A pair_id matching the
  // last applied record is acknowledged without appending again.
  FeedbackResult SubmitFeedback(const std::string& id, size_t winner,
                                std::optional<std::string> pair_id);
  SessionReport Report(const std::string& id);
  SessionState Close(const std::string& id);

 private:
  struct Entry {
    std::mutex mutex;
    std::optional<SessionState> state;
  };
  std::shared_ptr<Entry> Lookup(const std::string& id);
  void Commit(Entry& entry, SessionState next);

  SessionStore store_;
  std::mutex table_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> table_;
};

// Transport-independent JSON API. Routes:
//   POST /sessions, GET /sessions/{id}, GET /sessions/{id}/pair,
//   POST /sessions/{id}/feedback, GET /sessions/{id}/report,
//   DELETE /sessions/{id}
// Errors are {"code": ..., "message": ...}.
struct ApiResponse {
  int status = 200;
  std::string body;
};

class SessionApi {
 public:
  explicit SessionApi(SessionService& service) : service_(&service) {}
  ApiResponse Handle(const std::string& method, const std::string& path,
                     const std::string& body);

 private:
  SessionService* service_;
};

// HTTP/1.1 front end for SessionApi.
class SessionHttpServer {
 public:
  explicit SessionHttpServer(SessionService& service);
  ~SessionHttpServer();

  // Binds host:port (port 0 picks a free one) and returns the bound port,
  // or -1 on failure.
  int Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool Serve();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pfts

#endif  // PFTS_SESSION_H_
