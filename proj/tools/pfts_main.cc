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

// pfts: run benchmark configurations and serve preference sessions.
//
//   pfts run   --config cfg.json [--policy pfts] [--seed 7] [--out trace.csv]
//   pfts suite --config cfg.json --out results/
//   pfts cost  --config cfg.json --xi 1,3,5,7 --out cost.csv
//   pfts serve --port 8080 --store-path sessions/

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>

#include "pfts/bench.h"
#include "pfts/emit.h"
#include "pfts/error.h"
#include "pfts/run_config.h"
#include "pfts/session.h"
#include "CLI11.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> seed_count;
  std::optional<int> horizon;
  std::optional<int> threads;
  std::string out;
};

void AddCommon(CLI::App* app, CommonFlags* flags) {
  app->add_option("--config", flags->config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--seed", flags->seed, "run a single master seed");
  app->add_option("--seeds", flags->seed_count,
                  "use seeds 1..N (ignored with --seed)");
  app->add_option("--horizon", flags->horizon, "override T");
  app->add_option("--threads", flags->threads, "worker threads (0 = all)");
  app->add_option("--out", flags->out, "output path");
}

pfts::RunConfig LoadWithOverrides(const CommonFlags& flags) {
  pfts::RunConfig config = pfts::LoadRunConfig(flags.config_path);
  if (flags.seed) {
    config.seeds = {*flags.seed};
  } else if (flags.seed_count) {
    config.seeds.clear();
    for (int i = 1; i <= *flags.seed_count; ++i) config.seeds.push_back(i);
  }
  if (flags.horizon) config.horizon = *flags.horizon;
  if (flags.threads) config.threads = *flags.threads;
  if (!flags.out.empty()) config.output = flags.out;
  pfts::ValidateRunConfig(config);
  return config;
}

void Emit(const std::string& path,
          const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
  } else {
    pfts::WriteFile(path, body);
  }
}

int ReportFailures(const pfts::SuiteResult& result) {
  for (const pfts::RegretTrace& trace : result.traces) {
    if (trace.error) {
      std::cerr << pfts::ErrorJson(pfts::ErrorCode::kNoConvergence,
                                   trace.policy + " seed " +
                                       std::to_string(trace.seed) + ": " +
                                       *trace.error)
                << '\n';
    }
  }
  return result.failed_episodes == 0 ? 0 : 3;
}

pfts::SessionHttpServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server) g_server->Stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thompson sampling from pairwise preferences"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string policy_name;
  bool timing = false;
  CLI::App* run = app.add_subcommand("run", "one policy, trace CSV");
  AddCommon(run, &run_flags);
  run->add_option("--policy", policy_name,
                  "policy to run (default: first configured)");
  run->add_flag("--timing", timing, "append a wall_ms column");

  CommonFlags suite_flags;
  bool suite_timing = false;
  CLI::App* suite =
      app.add_subcommand("suite", "all policies x seeds: trace.csv, summary.json");
  AddCommon(suite, &suite_flags);
  suite->add_flag("--timing", suite_timing, "append a wall_ms column");

  CommonFlags cost_flags;
  std::vector<double> xis = {1, 3, 5, 7};
  int step = 25;
  CLI::App* cost = app.add_subcommand("cost", "cost-adjusted table CSV");
  AddCommon(cost, &cost_flags);
  cost->add_option("--xi", xis, "cost ratios")->delimiter(',');
  cost->add_option("--step", step, "budget ladder step");

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store_path = "sessions";
  CLI::App* serve = app.add_subcommand("serve", "HTTP session service");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port (0 picks a free one)");
  serve->add_option("--store-path", store_path, "session directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << pfts::ErrorJson(pfts::ErrorCode::kConfig, e.what()) << '\n';
    return 2;
  }

  try {
    if (*run) {
      pfts::RunConfig config = LoadWithOverrides(run_flags);
      if (!policy_name.empty()) {
        config.policies = {pfts::FindPolicy(config, policy_name)};
      } else {
        config.policies.resize(1);
      }
      const pfts::SuiteResult result = pfts::RunSuite(config);
      Emit(config.output, [&](std::ostream& out) {
        pfts::WriteTraceCsv(out, result.traces, timing);
      });
      return ReportFailures(result);
    }
    if (*suite) {
      const pfts::RunConfig config = LoadWithOverrides(suite_flags);
      if (config.output.empty()) {
        throw pfts::Error(pfts::ErrorCode::kConfig,
                          "suite needs an output directory (--out)");
      }
      const pfts::SuiteResult result = pfts::RunSuite(config);
      std::filesystem::create_directories(config.output);
      const std::filesystem::path dir(config.output);
      pfts::WriteFile((dir / "trace.csv").string(), [&](std::ostream& out) {
        pfts::WriteTraceCsv(out, result.traces, suite_timing);
      });
      pfts::WriteFile((dir / "summary.json").string(), [&](std::ostream& out) {
        pfts::WriteSummaryJson(out, result, config);
      });
      return ReportFailures(result);
    }
    if (*cost) {
      pfts::RunConfig config = LoadWithOverrides(cost_flags);
      config.policies = {pfts::FindPolicy(config, "pfts"),
                         pfts::FindPolicy(config, "gpts")};
      const pfts::SuiteResult result = pfts::RunSuite(config);
      const int code = ReportFailures(result);
      if (!result.stats.count("pfts") || !result.stats.count("gpts")) {
        throw pfts::Error(pfts::ErrorCode::kEmptyData,
                          "every episode of a policy failed");
      }
      const auto cells =
          pfts::CostAdjusted(result.stats.at("pfts"), result.stats.at("gpts"),
                             xis, step, config.horizon);
      Emit(config.output, [&](std::ostream& out) {
        pfts::WriteCostCsv(out, cells);
      });
      return code;
    }
    if (*serve) {
      pfts::SessionService service{pfts::SessionStore(store_path)};
      pfts::SessionHttpServer server(service);
      const int bound = server.Bind(host, port);
      if (bound < 0) {
        throw pfts::Error(pfts::ErrorCode::kIo,
                          "cannot bind " + host + ":" + std::to_string(port));
      }
      g_server = &server;
      std::signal(SIGINT, HandleSignal);
      std::signal(SIGTERM, HandleSignal);
      std::cerr << "listening on http://" << host << ':' << bound << '\n';
      server.Serve();
      g_server = nullptr;
      return 0;
    }
  } catch (const pfts::Error& e) {
    std::cerr << pfts::ErrorJson(e.code(), e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << pfts::ErrorJson(pfts::ErrorCode::kIo, e.what()) << '\n';
    return 1;
  }
  return 0;
}
