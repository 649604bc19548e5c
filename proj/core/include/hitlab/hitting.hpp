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

#ifndef HITLAB_HITTING_HPP_
#define HITLAB_HITTING_HPP_

#include <cstdint>
#include <vector>

#include "hitlab/capped_time.hpp"
#include "hitlab/density.hpp"
#include "hitlab/map_system.hpp"
#include "hitlab/orbit.hpp"

namespace hitlab {

/// min{ j in [1, cap] : dist(f^j x, zeta) < delta }, else Exceeded(cap).
CappedTime first_hitting_time(const MapSystem& system, Point x, Point zeta, double delta,
                              std::uint64_t cap);
/// Same, with x = orbit.current(). Leaves the generator at the hit (or
/// cap steps ahead).
CappedTime first_hitting_time(OrbitGenerator& orbit, Point zeta, double delta, std::uint64_t cap);

/// The first k waiting times w^1..w^k; w^j is the hitting time of the point
/// reached after w^1 + ... + w^(j-1) steps. The list stops early at the first
/// Exceeded entry, which is kept as its last element.
std::vector<CappedTime> waiting_times(const MapSystem& system, Point x, Point zeta, double delta,
                                      std::size_t k, std::uint64_t cap);

/// ceil(50 / mu(U)).
std::uint64_t default_cap(double ball_measure);

enum class Conditioning { stationary, conditioned };

/// Hitting (or return) times to B_delta(center) with their normalization
/// mu(B_delta(center)) taken from the density model. Exceeded entries are
/// counted, never dropped.
struct HitSample {
  Point center{};
  double delta = 0.0;
  double normalization = 0.0;
  std::uint64_t cap = 0;
  Conditioning conditioning = Conditioning::stationary;
  std::vector<std::uint64_t> times;
  std::uint64_t exceeded = 0;

  std::size_t size() const noexcept { return times.size() + exceeded; }
  double exceeded_fraction() const noexcept;
  /// Appends another sample of the same target and conditioning.
  void merge(const HitSample& other);
};

struct HitOptions {
  std::uint64_t burn_in = kDefaultBurnIn;
  unsigned threads = 0;
  /// Return samples: orbit shards scanned for visits, and the total iterate
  /// budget across shards (0 means 200 m / mu(U)).
  std::size_t shards = 16;
  std::uint64_t budget = 0;
};

/// m first hitting times from independent starts sampled from mu.
HitSample hitting_sample(const MapSystem& system, const DensityModel& model, Point zeta,
                         double delta, std::uint64_t m, std::uint64_t cap, std::uint64_t seed,
                         const HitOptions& options = {});

/// m return times from starts in U, found by thinning stationary orbits to
/// their visits to U; the gap between consecutive visits is the return time
/// of the earlier visit. Throws std::runtime_error, reporting the visits
/// found, if the budget runs out first.
HitSample return_sample(const MapSystem& system, const DensityModel& model, Point zeta,
                        double delta, std::uint64_t m, std::uint64_t cap, std::uint64_t seed,
                        const HitOptions& options = {});

struct SurvivalPoint {
  double t = 0.0;
  double survival = 0.0;  ///< fraction with r >= t / mu(U)
  double std_error = 0.0;
  double exceeded_fraction = 0.0;
};

/// Survival estimates at each t. Exceeded entries count as surviving, which
/// is exact while t / mu(U) <= cap + 1.
std::vector<SurvivalPoint> survival_curve(const HitSample& sample, const std::vector<double>& t_grid);

/// Checks cap >= ceil(max t / mu(U)) before any simulation, then samples.
std::vector<SurvivalPoint> hts_ecdf(const MapSystem& system, const DensityModel& model, Point zeta,
                                    double delta, const std::vector<double>& t_grid,
                                    std::uint64_t m, std::uint64_t cap, std::uint64_t seed,
                                    const HitOptions& options = {});
std::vector<SurvivalPoint> rts_ecdf(const MapSystem& system, const DensityModel& model, Point zeta,
                                    double delta, const std::vector<double>& t_grid,
                                    std::uint64_t m, std::uint64_t cap, std::uint64_t seed,
                                    const HitOptions& options = {});

struct KacResult {
  double product = 0.0;    ///< mean return time * mu(U)
  double std_error = 0.0;
  double mean_return = 0.0;
  double exceeded_fraction = 0.0;
  bool flagged = false;    ///< more than 1% of returns Exceeded
};

KacResult kac_check(const HitSample& returns);
KacResult kac_check(const MapSystem& system, const DensityModel& model, Point zeta, double delta,
                    std::uint64_t m, std::uint64_t cap, std::uint64_t seed,
                    const HitOptions& options = {});

struct ExtremalIndexFit {
  double theta = 1.0;      ///< raw slope clamped to (0, 1]
  double raw_slope = 1.0;
  std::size_t points_used = 0;
  bool nonmonotone = false;
};

/// Least-squares slope of -log(survival) against t through the origin, over
/// grid points with survival in (0, 1). Throws std::invalid_argument if fewer
/// than 3 points qualify. `tolerance` is the allowed upward step before the
/// curve is flagged non-monotone.
ExtremalIndexFit extremal_index_fit(const std::vector<SurvivalPoint>& curve,
                                    double tolerance = 0.02);

}  // namespace hitlab

#endif  // HITLAB_HITTING_HPP_
