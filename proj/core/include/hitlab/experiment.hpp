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

#ifndef HITLAB_EXPERIMENT_HPP_
#define HITLAB_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hitlab/config.hpp"
#include "hitlab/csv.hpp"
#include "hitlab/map_system.hpp"
#include "hitlab/observable.hpp"

namespace hitlab {

inline constexpr int kReportSchemaVersion = 1;

/// One trial of the per-orbit max/hit duality.
struct DualityTrial {
  std::uint64_t n = 0;
  double y = 0.0;
  double level = 0.0;
  double max = 0.0;
  double radius = 0.0;
  bool start_in_ball = false;
  bool hit_at_least_n = false;  ///< first hitting time >= n
  bool max_at_most_level = false;

  /// {M_n <= u} = {x not in B} and {r_B >= n}, since M_n includes X_0.
  bool agrees() const noexcept { return max_at_most_level == (!start_in_ball && hit_at_least_n); }
  /// The looser form {M_n <= u} = {r_B >= n}, which ignores X_0.
  bool agrees_without_start() const noexcept { return max_at_most_level == hit_at_least_n; }
};

/// `trials` random (x, n, y) with x drawn from a stationary orbit, n uniform
/// in [1, n_max] and y uniform over a window of the level domain.
std::vector<DualityTrial> duality_check(const MapSystem& system, const LevelSequence& seq,
                                        std::uint64_t n_max, std::uint64_t trials,
                                        std::uint64_t seed);

/// A declared tolerance check: passed when `value relation tolerance` holds.
struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  ///< "<=", ">=" or "=="
  double tolerance = 0.0;
  bool passed = false;
};

struct NamedTable {
  std::string name;  ///< file stem
  CsvTable table;
};

struct RunReport {
  ExperimentConfig config;
  double wall_seconds = 0.0;
  std::map<std::string, double> metrics;
  std::vector<Check> checks;
  std::vector<NamedTable> data;   ///< full result tables
  std::vector<NamedTable> plots;  ///< (x, y, reference...) curves
  std::vector<std::string> files; ///< manifest, filled when written

  bool passed() const noexcept;
};

/// Runs the configured pipeline in memory. Errors propagate as
/// std::runtime_error naming the failing stage.
RunReport run_experiment(const ExperimentConfig& config);

/// Writes one CSV per plot curve as plot_<name>.csv and returns the file
/// names.
std::vector<std::string> emit_plot_data(const RunReport& report, const std::filesystem::path& dir);

/// Serialized report (sorted keys, schema_version, config echo, metrics,
/// checks, manifest).
std::string report_json(const RunReport& report);

/// run_experiment, then writes the data tables, plot data and report.json
/// into `dir` (created if needed). The manifest lists every written file,
/// report.json included.
RunReport run(const ExperimentConfig& config, const std::filesystem::path& dir);

/// Output directory: the config's `out` key, else $HITLAB_OUT_DIR, else
/// ./hitlab-out.
std::filesystem::path default_output_dir(const ExperimentConfig& config);

}  // namespace hitlab

#endif  // HITLAB_EXPERIMENT_HPP_
