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

#include "pfts/session.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "pfts/environments.h"
#include "pfts/pref_inference.h"
#include "test_util.h"

namespace pfts {
namespace {

using ::pfts::testing::ExpectErrorCode;

class SessionTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = std::filesystem::temp_directory_path() /
            ("pfts_session_" +
             std::string(::testing::UnitTest::GetInstance()
                             ->current_test_info()
                             ->name()));
    std::filesystem::remove_all(root_);
  }
  void TearDown() override { std::filesystem::remove_all(root_); }

  SessionService NewService() { return SessionService(SessionStore(root_)); }

  static std::vector<CandidateInput> Labels(int n) {
    std::vector<CandidateInput> out;
    for (int i = 0; i < n; ++i) out.push_back({"c" + std::to_string(i), {}});
    return out;
  }

  std::filesystem::path root_;
};

TEST_F(SessionTest, CreateValidatesCandidates) {
  SessionService service = NewService();
  const SessionState s = service.Create(Labels(2), {});
  EXPECT_EQ(s.candidates.size(), 2u);
  EXPECT_EQ(s.status, SessionStatus::kReady);
  EXPECT_EQ(s.round(), 0);
  EXPECT_FALSE(s.pending.has_value());
  EXPECT_FALSE(s.id.empty());

  ExpectErrorCode([&] { service.Create(Labels(1), {}); },
                  ErrorCode::kBadRequest);
  std::vector<CandidateInput> mixed = Labels(2);
  mixed[0].features = Eigen::Vector2d(0.1, 0.2);
  ExpectErrorCode([&] { service.Create(mixed, {}); }, ErrorCode::kBadRequest);
  std::vector<CandidateInput> ragged = {{"a", Eigen::Vector2d(0, 1)},
                                        {"b", Eigen::Vector3d(0, 1, 2)}};
  ExpectErrorCode([&] { service.Create(ragged, {}); }, ErrorCode::kBadRequest);
  std::vector<CandidateInput> bad = {{"a", Eigen::Vector2d(0, 1)},
                                     {"b", Eigen::Vector2d(0, NAN)}};
  ExpectErrorCode([&] { service.Create(bad, {}); }, ErrorCode::kBadRequest);
  SessionConfig config;
  config.lambda = -1.0;
  ExpectErrorCode([&] { service.Create(Labels(3), config); },
                  ErrorCode::kBadRequest);
  config = {};
  config.kernel.lengthscale = 0.0;
  ExpectErrorCode([&] { service.Create(Labels(3), config); },
                  ErrorCode::kBadRequest);
}

TEST_F(SessionTest, FeaturelessCandidatesAreOneHot) {
  SessionService service = NewService();
  const SessionState s = service.Create(Labels(4), {});
  EXPECT_TRUE(s.one_hot);
  for (size_t i = 0; i < 4; ++i) {
    ASSERT_EQ(s.candidates[i].features.size(), 4);
    EXPECT_EQ(s.candidates[i].features, Eigen::VectorXd::Unit(4, i));
  }
}

TEST_F(SessionTest, ExplicitIdsAndConflicts) {
  SessionService service = NewService();
  EXPECT_EQ(service.Create(Labels(2), {}, "study-1").id, "study-1");
  ExpectErrorCode([&] { service.Create(Labels(2), {}, "study-1"); },
                  ErrorCode::kConflict);
  ExpectErrorCode([&] { service.Create(Labels(2), {}, "../etc"); },
                  ErrorCode::kBadRequest);
  ExpectErrorCode([&] { service.Get("nope"); }, ErrorCode::kNotFound);
  ExpectErrorCode([&] { service.Get("../../x"); }, ErrorCode::kNotFound);
}

TEST_F(SessionTest, NextPairIsIdempotentUntilFeedback) {
  SessionService service = NewService();
  const std::string id = service.Create(Labels(5), {}).id;
  const SessionState a = service.NextPair(id);
  ASSERT_TRUE(a.pending.has_value());
  EXPECT_EQ(a.status, SessionStatus::kAwaitingFeedback);
  EXPECT_LT(a.pending->first, 5u);
  EXPECT_LT(a.pending->second, 5u);
  const SessionState b = service.NextPair(id);
  EXPECT_EQ(a.pending, b.pending);

  std::set<std::string> ids = {a.pending->pair_id};
  for (int round = 0; round < 10; ++round) {
    const SessionState s = service.NextPair(id);
    service.SubmitFeedback(id, s.pending->first, s.pending->pair_id);
    const SessionState next = service.NextPair(id);
    EXPECT_LT(next.pending->first, 5u);
    EXPECT_LT(next.pending->second, 5u);
    EXPECT_TRUE(ids.insert(next.pending->pair_id).second);
  }
}

TEST_F(SessionTest, FeedbackAppendsLabels) {
  SessionService service = NewService();
  const std::string id = service.Create(Labels(3), {}).id;
  const PendingPair p = *service.NextPair(id).pending;
  const FeedbackResult r = service.SubmitFeedback(id, p.first, p.pair_id);
  EXPECT_FALSE(r.replayed);
  ASSERT_EQ(r.state.history.size(), 1u);
  EXPECT_EQ(r.state.history[0].label, 1);
  EXPECT_EQ(r.state.history[0].first, p.first);
  EXPECT_EQ(r.state.history[0].pair_id, p.pair_id);
  EXPECT_EQ(r.state.status, SessionStatus::kReady);
  EXPECT_FALSE(r.state.pending.has_value());

  const PendingPair q = *service.NextPair(id).pending;
  if (q.first != q.second) {
    EXPECT_EQ(service.SubmitFeedback(id, q.second, std::nullopt)
                  .state.history[1]
                  .label,
              0);
  }
}

TEST_F(SessionTest, FeedbackErrors) {
  SessionService service = NewService();
  const std::string id = service.Create(Labels(6), {}).id;
  ExpectErrorCode([&] { service.SubmitFeedback(id, 0, std::nullopt); },
                  ErrorCode::kConflict);
  const PendingPair p = *service.NextPair(id).pending;
  size_t unrelated = 0;
  while (unrelated == p.first || unrelated == p.second) ++unrelated;
  ExpectErrorCode([&] { service.SubmitFeedback(id, unrelated, p.pair_id); },
                  ErrorCode::kBadRequest);
  ExpectErrorCode([&] { service.SubmitFeedback(id, p.first, "t1-bogus"); },
                  ErrorCode::kConflict);
  service.SubmitFeedback(id, p.first, p.pair_id);
  // Replay of the applied token with a different winner.
  if (p.first != p.second) {
    ExpectErrorCode([&] { service.SubmitFeedback(id, p.second, p.pair_id); },
                    ErrorCode::kConflict);
  }
  const FeedbackResult again = service.SubmitFeedback(id, p.first, p.pair_id);
  EXPECT_TRUE(again.replayed);
  EXPECT_EQ(again.state.history.size(), 1u);
}

TEST_F(SessionTest, CloseStopsTheLoop) {
  SessionService service = NewService();
  const std::string id = service.Create(Labels(3), {}).id;
  service.NextPair(id);
  const SessionState closed = service.Close(id);
  EXPECT_EQ(closed.status, SessionStatus::kClosed);
  EXPECT_FALSE(closed.pending.has_value());
  ExpectErrorCode([&] { service.NextPair(id); }, ErrorCode::kConflict);
  ExpectErrorCode([&] { service.SubmitFeedback(id, 0, std::nullopt); },
                  ErrorCode::kConflict);
  EXPECT_EQ(service.Report(id).status, SessionStatus::kClosed);
}

TEST_F(SessionTest, ReportAtRoundZero) {
  SessionService service = NewService();
  const std::string id = service.Create(Labels(4), {}).id;
  const SessionReport r = service.Report(id);
  EXPECT_EQ(r.round, 0);
  EXPECT_EQ(r.mean, Eigen::VectorXd::Zero(4));
  EXPECT_EQ(r.best, 0u);
  EXPECT_EQ(r.sd[0], 0.0);
  EXPECT_GT(r.sd[1], 0.0);
}

TEST_F(SessionTest, OneSidedHistoryRanksWinnerAbove) {
  SessionService service = NewService();
  SessionState s = service.Create(Labels(3), {}, "duel");
  for (int i = 0; i < 10; ++i) s.history.push_back({"", 1, 2, 1});
  SessionStore(root_).Save(s);

  // A fresh service reads the edited record.
  SessionService reloaded = NewService();
  const SessionReport r = reloaded.Report("duel");
  EXPECT_GT(r.mean[1], r.mean[2]);
  EXPECT_EQ(r.best, 1u);

  // Oracle: the same fit done directly.
  PreferenceHistory h;
  for (int i = 0; i < 10; ++i) {
    h.Append(s.candidates[1].features, s.candidates[2].features, 1);
  }
  const PrefPosterior post = FitPreferencePosterior(
      h, DuelingKernel{s.config.kernel}, s.config.lambda, s.config.norm_bound);
  for (size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(r.mean[j],
                post.Mean({s.candidates[j].features, s.candidates[0].features}),
                1e-12);
  }
  EXPECT_EQ(reloaded.Report("duel").mean, r.mean);
}

TEST_F(SessionTest, StoreRoundTripsState) {
  SessionService service = NewService();
  std::vector<CandidateInput> inputs = {{"a", Eigen::Vector2d(0.1, 0.2)},
                                        {"b", Eigen::Vector2d(0.3, 0.9)},
                                        {"c", Eigen::Vector2d(0.7, 0.4)}};
  SessionConfig config;
  config.seed = 99;
  config.exploration.kind = ExplorationKind::kTheory;
  config.exploration.delta = 0.2;
  const std::string id = service.Create(inputs, config).id;
  const PendingPair p = *service.NextPair(id).pending;
  service.SubmitFeedback(id, p.second, p.pair_id);
  const SessionState live = service.NextPair(id);

  const SessionStore store(root_);
  const std::optional<SessionState> loaded = store.Load(id);
  ASSERT_TRUE(loaded.has_value());
  EXPECT_TRUE(*loaded == live);
  EXPECT_EQ(SessionFromJson(SessionToJson(live), id), live);
  EXPECT_FALSE(store.Load("missing").has_value());
  EXPECT_EQ(store.List(), std::vector<std::string>{id});
}

TEST_F(SessionTest, CorruptRecords) {
  SessionService service = NewService();
  const SessionState s = service.Create(Labels(2), {}, "ok");
  std::string text = SessionToJson(s);
  const std::string needle = "\"schema_version\": 1";
  ASSERT_NE(text.find(needle), std::string::npos);
  text.replace(text.find(needle), needle.size(), "\"schema_version\": 7");
  ExpectErrorCode([&] { SessionFromJson(text, "ok"); },
                  ErrorCode::kCorruptStore);
  const std::string msg = ExpectErrorCode(
      [&] { SessionFromJson("{", "broken"); }, ErrorCode::kCorruptStore);
  EXPECT_NE(msg.find("broken"), std::string::npos);

  std::ofstream(root_ / "bad.json") << "not json";
  ExpectErrorCode([&] { SessionStore(root_).Load("bad"); },
                  ErrorCode::kCorruptStore);
  SessionService fresh = NewService();
  ExpectErrorCode([&] { fresh.Get("bad"); }, ErrorCode::kCorruptStore);
}

TEST_F(SessionTest, RestartBetweenPersistAndAckIsAtMostOnce) {
  std::string id;
  PendingPair p;
  {
    SessionService before = NewService();
    id = before.Create(Labels(4), {}).id;
    p = *before.NextPair(id).pending;
    before.SubmitFeedback(id, p.first, p.pair_id);
    // The process dies here; the client never saw the acknowledgement.
  }
  SessionService after = NewService();
  const FeedbackResult retry = after.SubmitFeedback(id, p.first, p.pair_id);
  EXPECT_TRUE(retry.replayed);
  EXPECT_EQ(retry.state.history.size(), 1u);
  EXPECT_EQ(after.Get(id).history.size(), 1u);
}

TEST_F(SessionTest, RestartBeforePersistKeepsPendingPair) {
  std::string id;
  PendingPair p;
  {
    SessionService before = NewService();
    id = before.Create(Labels(4), {}).id;
    p = *before.NextPair(id).pending;
  }
  SessionService after = NewService();
  EXPECT_EQ(*after.NextPair(id).pending, p);
  EXPECT_FALSE(after.SubmitFeedback(id, p.second, p.pair_id).replayed);
  EXPECT_EQ(after.Get(id).history.size(), 1u);
}

TEST_F(SessionTest, ReplayIsDeterministic) {
  auto play = [&](const std::string& id) {
    SessionService service = NewService();
    SessionConfig config;
    config.seed = 5;
    service.Create(Labels(6), config, id);
    std::vector<std::pair<size_t, size_t>> pairs;
    for (int t = 0; t < 8; ++t) {
      const PendingPair p = *service.NextPair(id).pending;
      pairs.emplace_back(p.first, p.second);
      service.SubmitFeedback(id, std::min(p.first, p.second), p.pair_id);
    }
    return pairs;
  };
  EXPECT_EQ(play("one"), play("two"));
}

TEST_F(SessionTest, ConcurrentSessionsAreIsolated) {
  SessionService service = NewService();
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(service.Create(Labels(5), {}).id);
  std::vector<std::thread> threads;
  for (const std::string& id : ids) {
    // Two clients race on each session.
    for (int client = 0; client < 2; ++client) {
      threads.emplace_back([&service, id] {
        for (int t = 0; t < 6; ++t) {
          const SessionState s = service.NextPair(id);
          try {
            service.SubmitFeedback(id, s.pending->first, s.pending->pair_id);
          } catch (const Error& e) {
            ASSERT_EQ(e.code(), ErrorCode::kConflict) << e.what();
          }
        }
      });
    }
  }
  for (auto& t : threads) t.join();
  for (const std::string& id : ids) {
    const SessionState s = service.Get(id);
    EXPECT_GE(s.history.size(), 6u);
    EXPECT_LE(s.history.size(), 12u);
    std::set<std::string> tokens;
    for (const FeedbackRecord& r : s.history) {
      EXPECT_TRUE(tokens.insert(r.pair_id).second);
    }
    EXPECT_EQ(*SessionStore(root_).Load(id), s);
  }
}

TEST_F(SessionTest, ReportFindsHiddenArgmax) {
  const Eigen::VectorXd hidden =
      (Eigen::VectorXd(5) << 0.0, 2.0, 6.0, 1.0, 4.0).finished();
  const Utility utility =
      Utility::Tabular(CandidateSet::Grid(1, 5, 0.0, 1.0), hidden);
  int correct = 0;
  SessionService service = NewService();
  for (uint64_t rep = 0; rep < 30; ++rep) {
    SessionConfig config;
    config.seed = rep;
    const std::string id = service.Create(Labels(5), config).id;
    BtlOracle oracle(utility, Rng(1000 + rep));
    for (int t = 0; t < 30; ++t) {
      const PendingPair p = *service.NextPair(id).pending;
      const size_t winner =
          oracle.Query(p.first, p.second) == 1 ? p.first : p.second;
      service.SubmitFeedback(id, winner, p.pair_id);
    }
    if (service.Report(id).best == 2) ++correct;
  }
  EXPECT_GE(correct, 24);
}

}  // namespace
}  // namespace pfts
