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

#include <random>
#include <regex>

#include "pfts/error.h"
#include "pfts/session.h"
#include "json.hpp"
// Keep after Eigen.
#include "httplib.h"

namespace pfts {
namespace {

using nlohmann::json;

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kCorruptStore:
    case ErrorCode::kIo:
    case ErrorCode::kNotPsd:
    case ErrorCode::kNoConvergence: return 500;
    default: return 400;
  }
}

ApiResponse Ok(const json& body, int status = 200) {
  return {status, body.dump()};
}

json CandidateJson(const SessionState& state, size_t index) {
  return {{"index", index}, {"label", state.candidates[index].label}};
}

json StateJson(const SessionState& state) {
  json history = json::array();
  for (const FeedbackRecord& r : state.history) {
    history.push_back({{"pair_id", r.pair_id},
                       {"first", r.first},
                       {"second", r.second},
                       {"winner", r.label == 1 ? r.first : r.second},
                       {"y", r.label}});
  }
  json candidates = json::array();
  for (size_t i = 0; i < state.candidates.size(); ++i) {
    candidates.push_back(CandidateJson(state, i));
  }
  json out = {{"id", state.id},
              {"status", SessionStatusName(state.status)},
              {"round", state.round()},
              {"seed", state.config.seed},
              {"one_hot", state.one_hot},
              {"candidates", candidates},
              {"history", history},
              {"pending", nullptr},
              {"created_ms", state.created_ms},
              {"updated_ms", state.updated_ms}};
  if (state.pending) {
    out["pending"] = {{"pair_id", state.pending->pair_id},
                      {"first", CandidateJson(state, state.pending->first)},
                      {"second", CandidateJson(state, state.pending->second)}};
  }
  return out;
}

json ParseBody(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    json parsed = json::parse(body);
    if (!parsed.is_object()) {
      throw Error(ErrorCode::kBadRequest, "request body must be an object");
    }
    return parsed;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kBadRequest,
                std::string("malformed JSON body: ") + e.what());
  }
}

SessionConfig ParseSessionConfig(const json& c) {
  SessionConfig config;
  std::random_device device;
  config.seed = (static_cast<uint64_t>(device()) << 32) ^ device();
  if (c.is_null()) return config;
  if (!c.is_object()) {
    throw Error(ErrorCode::kBadRequest, "config must be an object");
  }
  if (auto k = c.find("kernel"); k != c.end()) {
    const std::string family = k->value("family", "matern");
    if (family == "matern") {
      config.kernel.family = KernelFamily::kMatern;
    } else if (family == "squared_exponential" || family == "se") {
      config.kernel.family = KernelFamily::kSquaredExponential;
    } else {
      throw Error(ErrorCode::kBadRequest,
                  "unknown kernel family '" + family + "'");
    }
    config.kernel.lengthscale =
        k->value("lengthscale", config.kernel.lengthscale);
    config.kernel.nu = k->value("nu", config.kernel.nu);
    config.kernel.signal_variance =
        k->value("signal_variance", config.kernel.signal_variance);
  }
  config.lambda = c.value("lambda", config.lambda);
  config.norm_bound = c.value("norm_bound", config.norm_bound);
  config.seed = c.value("seed", config.seed);
  if (auto e = c.find("exploration"); e != c.end()) {
    const std::string schedule = e->value("schedule", "practical");
    if (schedule == "practical") {
      config.exploration.kind = ExplorationKind::kPractical;
    } else if (schedule == "theory") {
      config.exploration.kind = ExplorationKind::kTheory;
    } else if (schedule == "constant") {
      config.exploration.kind = ExplorationKind::kConstant;
    } else {
      throw Error(ErrorCode::kBadRequest,
                  "unknown schedule '" + schedule + "'");
    }
    config.exploration.delta = e->value("delta", config.exploration.delta);
    config.exploration.constant =
        e->value("value", config.exploration.constant);
  }
  return config;
}

std::vector<CandidateInput> ParseCandidates(const json& body) {
  auto it = body.find("candidates");
  if (it == body.end() || !it->is_array()) {
    throw Error(ErrorCode::kBadRequest, "'candidates' must be an array");
  }
  std::vector<CandidateInput> out;
  for (const json& item : *it) {
    CandidateInput c;
    if (item.is_string()) {
      c.label = item.get<std::string>();
    } else if (item.is_object()) {
      c.label = item.value("label", std::to_string(out.size()));
      if (auto f = item.find("features"); f != item.end() && !f->is_null()) {
        const auto values = f->get<std::vector<double>>();
        c.features = Eigen::Map<const Eigen::VectorXd>(
            values.data(), static_cast<Eigen::Index>(values.size()));
      }
    } else {
      throw Error(ErrorCode::kBadRequest,
                  "candidates must be strings or objects");
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

ApiResponse SessionApi::Handle(const std::string& method,
                               const std::string& path,
                               const std::string& body) {
  static const std::regex kCollection("^/sessions/?$");
  static const std::regex kItem("^/sessions/([A-Za-z0-9_-]+)(/[a-z]+)?/?$");
  try {
    std::smatch match;
    if (std::regex_match(path, kCollection)) {
      if (method != "POST") {
        return {405, ErrorJson(ErrorCode::kBadRequest,
                               method + " not allowed on /sessions")};
      }
      const json request = ParseBody(body);
      const SessionConfig config =
          ParseSessionConfig(request.value("config", json()));
      std::optional<std::string> id;
      if (request.contains("id")) id = request["id"].get<std::string>();
      return Ok(StateJson(service_->Create(ParseCandidates(request), config,
                                           id)),
                201);
    }
    if (!std::regex_match(path, match, kItem)) {
      return {404, ErrorJson(ErrorCode::kNotFound, "no route " + path)};
    }
    const std::string id = match[1];
    const std::string leaf = match[2];
    if (leaf.empty() && method == "GET") {
      return Ok(StateJson(service_->Get(id)));
    }
    if (leaf.empty() && method == "DELETE") {
      return Ok(StateJson(service_->Close(id)));
    }
    if (leaf == "/pair" && method == "GET") {
      const SessionState state = service_->NextPair(id);
      return Ok({{"session_id", state.id},
                 {"round", state.round() + 1},
                 {"pair_id", state.pending->pair_id},
                 {"first", CandidateJson(state, state.pending->first)},
                 {"second", CandidateJson(state, state.pending->second)},
                 {"exploration_scale", state.pending->scale},
                 {"status", SessionStatusName(state.status)}});
    }
    if (leaf == "/feedback" && method == "POST") {
      const json request = ParseBody(body);
      auto winner = request.find("winner");
      if (winner == request.end() || !winner->is_number_integer() ||
          winner->get<int64_t>() < 0) {
        throw Error(ErrorCode::kBadRequest,
                    "'winner' must be a candidate index");
      }
      std::optional<std::string> pair_id;
      if (auto p = request.find("pair_id"); p != request.end()) {
        pair_id = p->get<std::string>();
      }
      const FeedbackResult result =
          service_->SubmitFeedback(id, winner->get<size_t>(), pair_id);
      json out = StateJson(result.state);
      out["replayed"] = result.replayed;
      return Ok(out);
    }
    if (leaf == "/report" && method == "GET") {
      const SessionState state = service_->Get(id);
      const SessionReport report = service_->Report(id);
      json candidates = json::array();
      for (size_t i = 0; i < state.candidates.size(); ++i) {
        json c = CandidateJson(state, i);
        c["mean"] = report.mean[static_cast<Eigen::Index>(i)];
        c["sd"] = report.sd[static_cast<Eigen::Index>(i)];
        candidates.push_back(c);
      }
      json out = StateJson(state);
      out["anchor"] = CandidateJson(state, 0);
      out["report"] = candidates;
      out["best"] = CandidateJson(state, report.best);
      return Ok(out);
    }
    return {405, ErrorJson(ErrorCode::kBadRequest,
                           method + " not allowed on " + path)};
  } catch (const Error& e) {
    return {HttpStatus(e.code()), ErrorJson(e.code(), e.what())};
  } catch (const json::exception& e) {
    return {400, ErrorJson(ErrorCode::kBadRequest, e.what())};
  }
}

struct SessionHttpServer::Impl {
  explicit Impl(SessionService& service) : api(service) {}
  SessionApi api;
  httplib::Server server;
};

SessionHttpServer::SessionHttpServer(SessionService& service)
    : impl_(std::make_unique<Impl>(service)) {
  httplib::Server& server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods",
                               "GET, POST, DELETE, OPTIONS"}});
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse out = impl_->api.Handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Delete(".*", handler);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
}

SessionHttpServer::~SessionHttpServer() { Stop(); }

int SessionHttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool SessionHttpServer::Serve() { return impl_->server.listen_after_bind(); }

void SessionHttpServer::Stop() { impl_->server.stop(); }

}  // namespace pfts
