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

#ifndef HITLAB_MIXING_HPP_
#define HITLAB_MIXING_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hitlab/map_system.hpp"
#include "hitlab/observable.hpp"
#include "hitlab/orbit.hpp"
#include "hitlab/point_process.hpp"

namespace hitlab {

/// Sliding-window joint exceedance counts on orbit shards. Exceedance of the
/// level means dist(x, zeta) < radius. Each shard of length L contributes a
/// window of L - J start positions, so every lag is estimated from the same
/// positions.
class PairExceedanceTable {
 public:
  PairExceedanceTable(double radius, std::size_t max_lag);

  /// Adds one orbit segment of exceedance indicators (length > max_lag).
  void add_segment(std::span<const std::uint8_t> exceed);
  void merge(const PairExceedanceTable& other);

  double radius() const noexcept { return radius_; }
  std::size_t max_lag() const noexcept { return joint_.size() - 1; }
  std::uint64_t window() const noexcept { return window_; }
  std::uint64_t marginal_count() const noexcept { return marginal_; }
  std::uint64_t joint_count(std::size_t lag) const { return joint_.at(lag); }

  /// mu(X_0 > u) and mu(X_0 > u, X_j > u) estimates.
  double marginal() const noexcept;
  double joint(std::size_t lag) const;

 private:
  double radius_;
  std::uint64_t window_ = 0;
  std::uint64_t marginal_ = 0;
  std::vector<std::uint64_t> joint_;  // index 0 unused
};

/// Builds a table from `shards` stationary orbits totalling `budget` iterates.
PairExceedanceTable build_pair_table(const MapSystem& system, Point zeta, double radius,
                                     std::size_t max_lag, std::uint64_t budget,
                                     std::uint64_t seed, std::size_t shards = 16,
                                     std::uint64_t burn_in = kDefaultBurnIn);

/// n * sum_{j=1}^{floor(n/k)} p_j. Throws std::invalid_argument naming the
/// shortfall if the table has fewer lags.
double dprime_sum(const PairExceedanceTable& table, std::uint64_t n, std::uint64_t k);

struct D3Estimate {
  double gamma = 0.0;       ///< signed difference
  double std_error = 0.0;   ///< delta-method Monte-Carlo error
  double p_exceed = 0.0;    ///< mu(X_0 > u)
  double p_clear = 0.0;     ///< mu(M(A) <= u)
  std::uint64_t samples = 0;
};

/// Fills `exceed` (already sized) with the exceedance indicators of sample i.
using ExceedancePath = std::function<void(std::size_t sample, std::vector<std::uint8_t>& exceed)>;

/// mu(X_0 > u, M(A + t) <= u) - mu(X_0 > u) mu(M(A) <= u) from m independent
/// paths. A is a ring of integer indices: j in [a, b) for each interval.
D3Estimate d3_gamma(const ExceedancePath& paths, std::uint64_t t, const IntervalRing& A,
                    std::uint64_t m);
D3Estimate d3_gamma(const MapSystem& system, const LevelSequence& seq, std::uint64_t n, double y,
                    std::uint64_t t, const IntervalRing& A, std::uint64_t m, std::uint64_t seed,
                    std::uint64_t burn_in = kDefaultBurnIn);

struct MixingResult {
  double gamma = 0.0;
  std::size_t best_k = 0;
  std::size_t best_l = 0;
  std::uint64_t skipped = 0;  ///< cylinders with zero empirical mass
};

/// Uniform-mixing coefficient of the partition {U, U^c} for a 0/1 label
/// sequence: for k <= k_cap and l <= l_cap, the largest |mu(A B) - mu(A) mu(B)|
/// with A a k-cylinder at time 0 and B a union of l-cylinders at time n + k
/// (or the reverse roles), from sliding windows. Caps are at most 8.
MixingResult uniform_mixing_gamma(std::span<const std::uint8_t> labels, std::uint64_t n,
                                  std::size_t k_cap, std::size_t l_cap);
MixingResult uniform_mixing_gamma(const MapSystem& system, Point zeta, double delta,
                                  std::uint64_t n, std::size_t k_cap, std::size_t l_cap,
                                  std::uint64_t length, std::uint64_t seed,
                                  std::uint64_t burn_in = kDefaultBurnIn);

/// |E(phi psi o f^t) - E(phi) E(psi)| for each t, from one stationary orbit of
/// `length` start positions.
std::vector<double> correlation_decay(const MapSystem& system,
                                      const std::function<double(Point)>& phi,
                                      const std::function<double(Point)>& psi,
                                      const std::vector<std::uint64_t>& t_grid,
                                      std::uint64_t length, std::uint64_t seed,
                                      std::uint64_t burn_in = kDefaultBurnIn);

}  // namespace hitlab

#endif  // HITLAB_MIXING_HPP_
