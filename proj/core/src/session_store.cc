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
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pfts/error.h"
#include "pfts/session.h"

namespace pfts {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;

json PointJson(const Point& p) {
  json out = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(p[i]);
  return out;
}

Point PointFrom(const json& j) {
  std::vector<double> values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

std::string ScheduleName(ExplorationKind kind) {
  switch (kind) {
    case ExplorationKind::kPractical: return "practical";
    case ExplorationKind::kTheory: return "theory";
    case ExplorationKind::kConstant: return "constant";
  }
  return "practical";
}

ExplorationKind ParseSchedule(const std::string& name) {
  if (name == "practical") return ExplorationKind::kPractical;
  if (name == "theory") return ExplorationKind::kTheory;
  if (name == "constant") return ExplorationKind::kConstant;
  throw std::invalid_argument("unknown schedule '" + name + "'");
}


}  // namespace

std::string SessionToJson(const SessionState& state) {
  const SessionConfig& c = state.config;
  json candidates = json::array();
  for (const SessionCandidate& cand : state.candidates) {
    candidates.push_back(
        {{"label", cand.label}, {"features", PointJson(cand.features)}});
  }
  json history = json::array();
  for (const FeedbackRecord& r : state.history) {
    history.push_back({{"pair_id", r.pair_id},
                       {"first", r.first},
                       {"second", r.second},
                       {"label", r.label}});
  }
  json doc = {
      {"schema_version", kSchemaVersion},
      {"id", state.id},
      {"status", SessionStatusName(state.status)},
      {"created_ms", state.created_ms},
      {"updated_ms", state.updated_ms},
      {"config",
       {{"kernel",
         {{"family", c.kernel.family == KernelFamily::kMatern
                         ? "matern"
                         : "squared_exponential"},
          {"lengthscale", c.kernel.lengthscale},
          {"nu", c.kernel.nu},
          {"signal_variance", c.kernel.signal_variance}}},
        {"lambda", c.lambda},
        {"norm_bound", c.norm_bound},
        {"exploration",
         {{"schedule", ScheduleName(c.exploration.kind)},
          {"delta", c.exploration.delta},
          {"value", c.exploration.constant}}},
        {"seed", c.seed}}},
      {"one_hot", state.one_hot},
      {"candidates", candidates},
      {"history", history},
      {"pending", nullptr},
  };
  if (state.pending) {
    doc["pending"] = {{"pair_id", state.pending->pair_id},
                      {"first", state.pending->first},
                      {"second", state.pending->second},
                      {"scale", state.pending->scale}};
  }
  return doc.dump(2);
}

SessionState SessionFromJson(const std::string& text,
                             const std::string& record_id) {
  auto corrupt = [&](const std::string& what) {
    return Error(ErrorCode::kCorruptStore,
                 "session record '" + record_id + "': " + what);
  };
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw corrupt(e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version")) {
    throw corrupt("missing schema_version");
  }
  if (!doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != kSchemaVersion) {
    throw corrupt("unsupported schema_version " +
                  doc["schema_version"].dump());
  }
  try {
    SessionState state;
    state.id = doc.at("id").get<std::string>();
    state.status = ParseSessionStatus(doc.at("status").get<std::string>());
    state.created_ms = doc.at("created_ms").get<int64_t>();
    state.updated_ms = doc.at("updated_ms").get<int64_t>();
    const json& c = doc.at("config");
    const json& k = c.at("kernel");
    const std::string family = k.at("family").get<std::string>();
    if (family == "matern") {
      state.config.kernel.family = KernelFamily::kMatern;
    } else if (family == "squared_exponential") {
      state.config.kernel.family = KernelFamily::kSquaredExponential;
    } else {
      throw std::invalid_argument("unknown kernel family '" + family + "'");
    }
    state.config.kernel.lengthscale = k.at("lengthscale").get<double>();
    state.config.kernel.nu = k.at("nu").get<double>();
    state.config.kernel.signal_variance = k.at("signal_variance").get<double>();
    state.config.lambda = c.at("lambda").get<double>();
    state.config.norm_bound = c.at("norm_bound").get<double>();
    const json& e = c.at("exploration");
    state.config.exploration.kind =
        ParseSchedule(e.at("schedule").get<std::string>());
    state.config.exploration.delta = e.at("delta").get<double>();
    state.config.exploration.constant = e.at("value").get<double>();
    state.config.seed = c.at("seed").get<uint64_t>();
    state.one_hot = doc.at("one_hot").get<bool>();
    for (const json& cand : doc.at("candidates")) {
      state.candidates.push_back(
          {cand.at("label").get<std::string>(), PointFrom(cand.at("features"))});
    }
    for (const json& r : doc.at("history")) {
      state.history.push_back({r.at("pair_id").get<std::string>(),
                               r.at("first").get<size_t>(),
                               r.at("second").get<size_t>(),
                               r.at("label").get<int>()});
    }
    const json& pending = doc.at("pending");
    if (!pending.is_null()) {
      state.pending = PendingPair{pending.at("pair_id").get<std::string>(),
                                  pending.at("first").get<size_t>(),
                                  pending.at("second").get<size_t>(),
                                  pending.at("scale").get<double>()};
    }
    const size_t n = state.candidates.size();
    if (n < 2) throw std::invalid_argument("fewer than 2 candidates");
    for (const FeedbackRecord& r : state.history) {
      if (r.first >= n || r.second >= n || (r.label != 0 && r.label != 1)) {
        throw std::invalid_argument("history record out of range");
      }
    }
    if (state.pending.has_value() !=
        (state.status == SessionStatus::kAwaitingFeedback)) {
      throw std::invalid_argument("pending pair does not match status");
    }
    if (state.pending &&
        (state.pending->first >= n || state.pending->second >= n)) {
      throw std::invalid_argument("pending pair out of range");
    }
    return state;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw corrupt(e.what());
  }
}

bool IsValidSessionId(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      return false;
    }
  }
  return true;
}

SessionStore::SessionStore(std::string root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec || !fs::is_directory(root_)) {
    throw Error(ErrorCode::kIo, "cannot create session store at " + root_);
  }
}

std::string SessionStore::PathFor(const std::string& id) const {
  if (!IsValidSessionId(id)) {
    throw Error(ErrorCode::kNotFound, "no session '" + id + "'");
  }
  return (fs::path(root_) / (id + ".json")).string();
}

void SessionStore::Save(const SessionState& state) const {
  const std::string path = PathFor(state.id);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << SessionToJson(state) << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "failed replacing " + path);
}

std::optional<SessionState> SessionStore::Load(const std::string& id) const {
  const std::string path = PathFor(id);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  SessionState state = SessionFromJson(buffer.str(), id);
  if (state.id != id) {
    throw Error(ErrorCode::kCorruptStore,
                "session record '" + id + "': id field is '" + state.id + "'");
  }
  return state;
}

std::vector<std::string> SessionStore::List() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (entry.path().extension() == ".json") {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace pfts
