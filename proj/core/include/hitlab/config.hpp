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

#ifndef HITLAB_CONFIG_HPP_
#define HITLAB_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hitlab {

enum class ExperimentKind {
  evl_curve,
  hts,
  rts,
  kac,
  epp_poisson,
  htpp_poisson,
  duality_check,
  dprime,
  d3,
  mixing,
  expansivity,
};

std::string_view to_string(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept;
const std::vector<ExperimentKind>& all_experiment_kinds();

/// Every schema violation found in a config, each prefixed by its location.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

using ConfigValue = std::variant<std::string, double, std::uint64_t, std::vector<double>,
                                 std::vector<std::uint64_t>>;

/// A validated experiment description with defaults resolved.
///
/// Text format: one `key = value` per line, `#` starts a comment, optional
/// `[system]`, `[observable]`, `[target]` and `[run]` section headers. A key
/// may appear at top level or under its own section only. Lists are comma
/// separated; real grids also accept `lo:hi:count`.
class ExperimentConfig {
 public:
  ExperimentKind experiment() const;

  bool has(std::string_view key) const;
  const std::string& text(std::string_view key) const;
  double real(std::string_view key) const;
  std::uint64_t integer(std::string_view key) const;
  const std::vector<double>& reals(std::string_view key) const;
  const std::vector<std::uint64_t>& integers(std::string_view key) const;

  const std::map<std::string, ConfigValue, std::less<>>& values() const noexcept { return values_; }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

 private:
  friend ExperimentConfig parse_config(std::string_view text,
                                       const std::vector<std::string>& overrides);
  std::map<std::string, ConfigValue, std::less<>> values_;
};

/// Parses, applies `key=value` overrides (which replace file values),
/// resolves defaults and validates. Throws ConfigError listing every
/// violation.
ExperimentConfig parse_config(std::string_view text,
                              const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

/// Sectioned text form; parse_config(emit_config(c)) == c. Reals use %.17g.
std::string emit_config(const ExperimentConfig& config);

/// The documented keys, for help output.
std::vector<std::string> config_keys();

}  // namespace hitlab

#endif  // HITLAB_CONFIG_HPP_
