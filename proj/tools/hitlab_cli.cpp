// Copyright 2026 The hitlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// hitlab-cli: run config-described experiments and write CSV/JSON artifacts.
//
// Exit codes: 0 all checks passed, 1 some check failed, 2 invalid config,
// 3 pipeline error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hitlab/config.hpp"
#include "hitlab/experiment.hpp"

namespace {

struct RunArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> overrides;
};

void add_run_flags(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--seed", args.seed, "Master seed (overrides the config)");
  cmd->add_option("--out", args.out, "Output directory");
  cmd->add_option("--override", args.overrides, "key=value, may repeat")->take_all();
}

hitlab::ExperimentConfig resolve(const RunArgs& args, const std::optional<std::string>& kind) {
  std::vector<std::string> overrides;
  if (kind) overrides.push_back("experiment=" + *kind);
  overrides.insert(overrides.end(), args.overrides.begin(), args.overrides.end());
  if (args.seed) overrides.push_back("seed=" + std::to_string(*args.seed));
  if (!args.out.empty()) overrides.push_back("out=" + args.out);
  if (args.config_path.empty()) return hitlab::parse_config("", overrides);
  return hitlab::load_config(args.config_path, overrides);
}

int execute(const RunArgs& args, const std::optional<std::string>& kind) {
  const hitlab::ExperimentConfig config = resolve(args, kind);
  const auto dir = hitlab::default_output_dir(config);
  const hitlab::RunReport report = hitlab::run(config, dir);
  fmt::print("{} -> {} ({:.1f} s)\n", hitlab::to_string(config.experiment()), dir.string(),
             report.wall_seconds);
  for (const auto& [name, value] : report.metrics) fmt::print("  {} = {}\n", name, value);
  for (const auto& c : report.checks) {
    fmt::print("  [{}] {} = {} {} {}\n", c.passed ? "PASS" : "FAIL", c.name, c.value, c.relation,
               c.tolerance);
  }
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hitlab: extremes and hitting times for chaotic maps"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment a config describes");
  run_cmd->add_option("config", run_args.config_path, "Config file")->required();
  add_run_flags(run_cmd, run_args);

  std::string validate_path;
  std::vector<std::string> validate_overrides;
  auto* validate_cmd = app.add_subcommand("validate", "Check a config and print its resolved form");
  validate_cmd->add_option("config", validate_path, "Config file")->required();
  validate_cmd->add_option("--override", validate_overrides, "key=value, may repeat")->take_all();

  auto* keys_cmd = app.add_subcommand("keys", "List the config keys");

  std::vector<std::pair<std::string, CLI::App*>> kinds;
  RunArgs kind_args;
  for (const auto kind : hitlab::all_experiment_kinds()) {
    const std::string name(hitlab::to_string(kind));
    auto* cmd = app.add_subcommand(name, "Run " + name + " (config optional)");
    cmd->add_option("config", kind_args.config_path, "Config file");
    add_run_flags(cmd, kind_args);
    kinds.emplace_back(name, cmd);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) {
      const auto config = hitlab::load_config(validate_path, validate_overrides);
      fmt::print("{}", hitlab::emit_config(config));
      return 0;
    }
    if (*keys_cmd) {
      for (const auto& k : hitlab::config_keys()) fmt::print("{}\n", k);
      return 0;
    }
    if (*run_cmd) return execute(run_args, std::nullopt);
    for (const auto& [name, cmd] : kinds) {
      if (*cmd) return execute(kind_args, name);
    }
  } catch (const hitlab::ConfigError& e) {
    for (const auto& v : e.violations()) fmt::print(stderr, "config: {}\n", v);
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 3;
  }
  return 0;
}
