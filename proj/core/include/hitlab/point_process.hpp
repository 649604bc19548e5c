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

#ifndef HITLAB_POINT_PROCESS_HPP_
#define HITLAB_POINT_PROCESS_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "hitlab/density.hpp"
#include "hitlab/extreme_stats.hpp"
#include "hitlab/observable.hpp"
#include "hitlab/orbit.hpp"

namespace hitlab {

/// Event indices j (orbit times) with rescaled times j / rescale.
struct EventProcess {
  double rescale = 1.0;
  std::vector<std::uint64_t> indices;  ///< strictly increasing
  double horizon = 0.0;

  double time(std::size_t i) const noexcept {
    return static_cast<double>(indices[i]) / rescale;
  }
};

/// A finite union of half-open intervals [a_j, b_j), sorted, non-negative,
/// pairwise disjoint (b_j <= a_{j+1}).
class IntervalRing {
 public:
  IntervalRing() = default;
  explicit IntervalRing(std::vector<std::pair<double, double>> intervals);

  const std::vector<std::pair<double, double>>& intervals() const noexcept { return intervals_; }
  bool empty() const noexcept { return intervals_.empty(); }
  double total_length() const noexcept;
  double supremum() const noexcept { return empty() ? 0.0 : intervals_.back().second; }

 private:
  std::vector<std::pair<double, double>> intervals_;
};

struct ExtractOptions {
  /// Stop after this many events (0 = no limit); the horizon still applies.
  std::size_t max_events = 0;
};

/// Exceedance process: indices j in [0, floor(v t_max)] with X_j > u_n(y),
/// v = 1 / mu(X_0 > u_n). Reads the orbit from current().
EventProcess epp(OrbitGenerator& orbit, const LevelSequence& seq, const DensityModel& model,
                 std::uint64_t n, double y, double horizon, const ExtractOptions& options = {});
EventProcess epp(const MapSystem& system, Point x0, const LevelSequence& seq,
                 const DensityModel& model, std::uint64_t n, double y, double horizon);

/// Hitting-time process: indices j in [0, floor(v t_max)] with
/// dist(x_j, zeta) < delta, v = 1 / mu(B_delta(zeta)).
EventProcess htpp(OrbitGenerator& orbit, const DensityModel& model, Point zeta, double delta,
                  double horizon, const ExtractOptions& options = {});
EventProcess htpp(const MapSystem& system, Point x0, const DensityModel& model, Point zeta,
                  double delta, double horizon);

/// Events with rescaled time in A: indices j in [ceil(v a), ceil(v b) - 1]
/// for each [a, b). Throws std::invalid_argument if A extends past the
/// horizon.
std::uint64_t count_on_ring(const EventProcess& process, const IntervalRing& ring);

struct ProcessOptions {
  std::uint64_t burn_in = kDefaultBurnIn;
  std::size_t max_events = 0;
  unsigned threads = 0;
};

/// m processes from independent stationary starts; run i is seeded with
/// derive_seed(seed, kProcesses, i).
std::vector<EventProcess> sample_epp(const MapSystem& system, const LevelSequence& seq,
                                     const DensityModel& model, std::uint64_t n, double y,
                                     double horizon, std::uint64_t m, std::uint64_t seed,
                                     const ProcessOptions& options = {});
std::vector<EventProcess> sample_htpp(const MapSystem& system, const DensityModel& model,
                                      Point zeta, double delta, double horizon, std::uint64_t m,
                                      std::uint64_t seed, const ProcessOptions& options = {});

struct PoissonCountResult {
  double tv = 0.0;
  double mean_count = 0.0;
  std::vector<double> empirical;  ///< pmf over 0..max+5
  std::vector<double> poisson;    ///< Poisson(t) pmf, tail folded into the last entry
};

/// Total variation between the counts on [0, t) and Poisson(t). Needs m >= 1000.
PoissonCountResult poisson_count_test(const std::vector<EventProcess>& processes, double t);

/// Poisson(mean) pmf over 0..kmax with P(N >= kmax) folded into the last entry.
std::vector<double> poisson_pmf_folded(double mean, std::size_t kmax);

/// Total variation distance between two pmfs on the same support.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

struct InterarrivalResult {
  double ks = 0.0;
  std::size_t gaps = 0;
  double critical_1pct = 0.0;
};

/// KS statistic of the pooled rescaled gaps between consecutive events
/// against 1 - e^-s. `gaps_per_run` keeps only the first gaps of each run
/// (0 = all). Needs at least 1000 pooled gaps.
InterarrivalResult interarrival_test(const std::vector<EventProcess>& processes,
                                     std::size_t gaps_per_run = 0);

struct IncrementResult {
  double factorization_defect = 0.0;  ///< |P(none in any I_i) - prod P(none in I_i)|
  double poisson_defect = 0.0;        ///< |P(none in any I_i) - exp(-sum |I_i|)|
  double p_none_all = 0.0;
  std::vector<double> p_none_each;
};

/// Two or three disjoint intervals; needs m >= 1000.
IncrementResult increment_independence_test(const std::vector<EventProcess>& processes,
                                            const std::vector<std::pair<double, double>>& intervals);

}  // namespace hitlab

#endif  // HITLAB_POINT_PROCESS_HPP_
