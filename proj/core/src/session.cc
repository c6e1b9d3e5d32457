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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "pfts/error.h"
#include "pfts/pref_inference.h"
#include "pfts/session.h"

namespace pfts {
namespace {

int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string Hex(uint64_t value, int digits) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(value));
  return std::string(buffer + 16 - digits);
}

std::string NewSessionId() {
  std::random_device device;
  const uint64_t high = device();
  const uint64_t low = device();
  return Hex(MixSeed((high << 32) ^ low ^ static_cast<uint64_t>(NowMillis())),
             16);
}

std::string PairToken(const SessionState& state, int round) {
  return "t" + std::to_string(round) + "-" +
         Hex(MixSeed(state.config.seed ^ MixSeed(round)), 8);
}

CandidateSet Candidates(const SessionState& state) {
  std::vector<Point> points;
  points.reserve(state.candidates.size());
  for (const SessionCandidate& c : state.candidates) {
    points.push_back(c.features);
  }
  return CandidateSet(std::move(points));
}

PrefPosterior Fit(const SessionState& state) {
  PreferenceHistory history;
  for (const FeedbackRecord& r : state.history) {
    history.Append(state.candidates[r.first].features,
                   state.candidates[r.second].features, r.label);
  }
  return FitPreferencePosterior(history, DuelingKernel{state.config.kernel},
                                state.config.lambda, state.config.norm_bound);
}

[[noreturn]] void BadRequest(const std::string& message) {
  throw Error(ErrorCode::kBadRequest, message);
}

}  // namespace

std::string SessionStatusName(SessionStatus status) {
  switch (status) {
    case SessionStatus::kReady: return "ready";
    case SessionStatus::kAwaitingFeedback: return "awaiting_feedback";
    case SessionStatus::kClosed: return "closed";
  }
  return "ready";
}

SessionStatus ParseSessionStatus(const std::string& name) {
  if (name == "ready") return SessionStatus::kReady;
  if (name == "awaiting_feedback") return SessionStatus::kAwaitingFeedback;
  if (name == "closed") return SessionStatus::kClosed;
  throw std::invalid_argument("unknown session status '" + name + "'");
}

bool operator==(const SessionConfig& a, const SessionConfig& b) {
  return a.kernel.family == b.kernel.family &&
         a.kernel.lengthscale == b.kernel.lengthscale &&
         a.kernel.nu == b.kernel.nu &&
         a.kernel.signal_variance == b.kernel.signal_variance &&
         a.lambda == b.lambda && a.norm_bound == b.norm_bound &&
         a.exploration.kind == b.exploration.kind &&
         a.exploration.delta == b.exploration.delta &&
         a.exploration.constant == b.exploration.constant && a.seed == b.seed;
}

bool operator==(const SessionState& a, const SessionState& b) {
  return a.id == b.id && a.config == b.config &&
         a.candidates == b.candidates && a.one_hot == b.one_hot &&
         a.history == b.history && a.pending == b.pending &&
         a.status == b.status && a.created_ms == b.created_ms &&
         a.updated_ms == b.updated_ms;
}

SessionService::SessionService(SessionStore store) : store_(std::move(store)) {}

std::shared_ptr<SessionService::Entry> SessionService::Lookup(
    const std::string& id) {
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard<std::mutex> lock(table_mutex_);
    auto& slot = table_[id];
    if (!slot) slot = std::make_shared<Entry>();
    entry = slot;
  }
  return entry;
}

void SessionService::Commit(Entry& entry, SessionState next) {
  next.updated_ms = std::max(NowMillis(), next.updated_ms);
  store_.Save(next);
  entry.state = std::move(next);
}

SessionState SessionService::Create(
    const std::vector<CandidateInput>& candidates, const SessionConfig& config,
    std::optional<std::string> id) {
  if (candidates.size() < 2) {
    BadRequest("a session needs at least 2 candidates, got " +
               std::to_string(candidates.size()));
  }
  size_t with_features = 0;
  for (const CandidateInput& c : candidates) with_features += c.features.has_value();
  if (with_features != 0 && with_features != candidates.size()) {
    BadRequest("either every candidate has features or none does");
  }
  try {
    config.kernel.Validate();
  } catch (const Error& e) {
    BadRequest(e.what());
  }
  if (!(config.lambda > 0.0)) BadRequest("lambda must be > 0");
  if (!(config.norm_bound >= 0.0)) BadRequest("norm_bound must be >= 0");
  if (!(config.exploration.delta > 0.0 && config.exploration.delta < 1.0)) {
    BadRequest("exploration.delta must lie in (0, 1)");
  }

  SessionState state;
  state.config = config;
  state.one_hot = with_features == 0;
  const Eigen::Index n = static_cast<Eigen::Index>(candidates.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const CandidateInput& c = candidates[i];
    SessionCandidate out;
    out.label = c.label;
    if (state.one_hot) {
      out.features = Point::Unit(n, i);
    } else {
      out.features = *c.features;
      if (out.features.size() == 0) BadRequest("features must be nonempty");
      if (out.features.size() != candidates[0].features->size()) {
        BadRequest("candidate " + std::to_string(i) + " has " +
                   std::to_string(out.features.size()) +
                   " features, expected " +
                   std::to_string(candidates[0].features->size()));
      }
      if (!out.features.allFinite()) {
        BadRequest("candidate " + std::to_string(i) +
                   " has non-finite features");
      }
    }
    state.candidates.push_back(std::move(out));
  }

  if (id) {
    if (!IsValidSessionId(*id)) {
      BadRequest("session id must be 1-64 characters of [A-Za-z0-9_-]");
    }
    if (store_.Load(*id)) {
      throw Error(ErrorCode::kConflict, "session '" + *id + "' exists");
    }
    state.id = *id;
  } else {
    do {
      state.id = NewSessionId();
    } while (store_.Load(state.id));
  }
  state.created_ms = NowMillis();
  state.updated_ms = state.created_ms;

  auto entry = Lookup(state.id);
  std::lock_guard<std::mutex> lock(entry->mutex);
  Commit(*entry, state);
  return *entry->state;
}

namespace {

const SessionState& Loaded(const std::optional<SessionState>& state,
                           const std::string& id) {
  if (!state) throw Error(ErrorCode::kNotFound, "no session '" + id + "'");
  return *state;
}

}  // namespace

#define PFTS_LOCKED_SESSION(entry, id)                    \
  auto entry = Lookup(id);                                \
  std::lock_guard<std::mutex> entry##_lock(entry->mutex); \
  if (!entry->state) entry->state = store_.Load(id);      \
  const SessionState& current = Loaded(entry->state, id)

SessionState SessionService::Get(const std::string& id) {
  PFTS_LOCKED_SESSION(entry, id);
  return current;
}

SessionState SessionService::NextPair(const std::string& id) {
  PFTS_LOCKED_SESSION(entry, id);
  if (current.status == SessionStatus::kClosed) {
    throw Error(ErrorCode::kConflict, "session '" + id + "' is closed");
  }
  if (current.pending) return current;

  const int round = current.round() + 1;
  const PrefPosterior posterior = Fit(current);
  const double scale =
      ExplorationScale(current.config.exploration, round, &posterior);
  Rng rng = Rng(current.config.seed).Split(static_cast<uint64_t>(round));
  const PairDecision decision =
      PftsSelect(posterior, Candidates(current), scale, rng);

  SessionState next = current;
  next.pending = PendingPair{PairToken(current, round), decision.first,
                             decision.second, scale};
  next.status = SessionStatus::kAwaitingFeedback;
  Commit(*entry, std::move(next));
  return *entry->state;
}

FeedbackResult SessionService::SubmitFeedback(
    const std::string& id, size_t winner, std::optional<std::string> pair_id) {
  PFTS_LOCKED_SESSION(entry, id);
  if (pair_id && !current.history.empty() &&
      current.history.back().pair_id == *pair_id) {
    const FeedbackRecord& last = current.history.back();
    const size_t applied_winner = last.label == 1 ? last.first : last.second;
    if (winner != applied_winner) {
      throw Error(ErrorCode::kConflict,
                  "pair '" + *pair_id + "' was already decided differently");
    }
    return {current, true};
  }
  if (current.status == SessionStatus::kClosed) {
    throw Error(ErrorCode::kConflict, "session '" + id + "' is closed");
  }
  if (!current.pending) {
    throw Error(ErrorCode::kConflict,
                "session '" + id + "' has no pending pair");
  }
  const PendingPair& pending = *current.pending;
  if (pair_id && *pair_id != pending.pair_id) {
    throw Error(ErrorCode::kConflict, "pair '" + *pair_id +
                                          "' is not the pending pair '" +
                                          pending.pair_id + "'");
  }
  if (winner != pending.first && winner != pending.second) {
    BadRequest("winner " + std::to_string(winner) +
               " is not in the pending pair (" +
               std::to_string(pending.first) + ", " +
               std::to_string(pending.second) + ")");
  }
  SessionState next = current;
  next.history.push_back({pending.pair_id, pending.first, pending.second,
                          winner == pending.first ? 1 : 0});
  next.pending.reset();
  next.status = SessionStatus::kReady;
  Commit(*entry, std::move(next));
  return {*entry->state, false};
}

SessionReport SessionService::Report(const std::string& id) {
  SessionState state = Get(id);
  const PrefPosterior posterior = Fit(state);
  const CandidateSet candidates = Candidates(state);
  const AnchoredMoments moments =
      posterior.Anchored(candidates.points(), candidates[0]);
  SessionReport report;
  report.round = state.round();
  report.status = state.status;
  report.mean = moments.mean;
  report.sd = moments.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  report.best = static_cast<size_t>(ArgmaxLowest(report.mean));
  return report;
}

SessionState SessionService::Close(const std::string& id) {
  PFTS_LOCKED_SESSION(entry, id);
  if (current.status == SessionStatus::kClosed) return current;
  SessionState next = current;
  next.status = SessionStatus::kClosed;
  next.pending.reset();
  Commit(*entry, std::move(next));
  return *entry->state;
}

#undef PFTS_LOCKED_SESSION

}  // namespace pfts
