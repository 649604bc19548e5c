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

#ifndef HITLAB_EXTREME_STATS_HPP_
#define HITLAB_EXTREME_STATS_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "hitlab/map_system.hpp"
#include "hitlab/observable.hpp"
#include "hitlab/orbit.hpp"

namespace hitlab {

/// Uniform-weight empirical distribution. Values are kept sorted; +infinity
/// is allowed (it sorts last), NaN is rejected.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t infinite_count() const noexcept;
  std::size_t finite_count() const noexcept { return size() - infinite_count(); }

  /// Right-continuous ECDF: fraction of values <= x.
  double cdf(double x) const noexcept;
  /// Left limit: fraction of values < x.
  double cdf_below(double x) const noexcept;

  /// Pooled distribution of both samples.
  EmpiricalDistribution merged(const EmpiricalDistribution& other) const;

 private:
  std::vector<double> values_;
};

/// sup_x |ECDF(x) - cdf(x)| using both one-sided ECDF limits at each sample
/// point.
double ks_statistic(const EmpiricalDistribution& sample, const std::function<double(double)>& cdf);

/// Asymptotic 1% critical value 1.63 / sqrt(n) of the one-sample KS test.
double ks_critical_1pct(std::size_t n);

/// EV1(y) = exp(-e^-y); EV2(y) = exp(-y^-alpha) for y > 0, else 0;
/// EV3(y) = exp(-(-y)^alpha) for y <= 0, else 1. `alpha` is unused for type 1.
double classical_evd(int type, double alpha, double y);

/// Generalized extreme value parameters; shape 0 is Gumbel, positive shape is
/// Frechet-type, negative Weibull-type.
struct GevParams {
  double location = 0.0;
  double scale = 1.0;
  double shape = 0.0;
};

double gev_cdf(const GevParams& params, double x);

enum class InfinitePolicy { exclude, reject };

/// L-moment estimate of the GEV parameters. Needs at least 50 finite values;
/// +infinity entries are dropped or rejected per `policy`. Throws
/// std::invalid_argument on a degenerate (constant) sample.
GevParams gev_fit(const EmpiricalDistribution& sample,
                  InfinitePolicy policy = InfinitePolicy::exclude);

/// M_n = max of evaluate(x_j), j = 0..n-1, along `orbit` from current().
/// Advances the generator by n steps.
double partial_max(OrbitGenerator& orbit, const ObservableSpec& spec, std::uint64_t n);
double partial_max(const MapSystem& system, Point x0, const ObservableSpec& spec, std::uint64_t n);

/// Per-block exceedance tallies at one radius: for each block, c = number of
/// j with dist(x_j, zeta) < radius. The Bonferroni sandwich for the empirical
/// measure reads sum_c >= blocks_hit >= sum_c - ordered_pairs.
struct BonferroniTally {
  double radius = 0.0;
  std::uint64_t blocks = 0;
  std::uint64_t sum_counts = 0;      ///< sum of c
  std::uint64_t blocks_hit = 0;      ///< number of blocks with c > 0
  std::uint64_t ordered_pairs = 0;   ///< sum of c (c - 1)

  void record(std::uint64_t c) noexcept {
    ++blocks;
    sum_counts += c;
    blocks_hit += c > 0 ? 1 : 0;
    ordered_pairs += c > 0 ? c * (c - 1) : 0;
  }
  void merge(const BonferroniTally& other);
  bool holds() const noexcept {
    return sum_counts >= blocks_hit && blocks_hit + ordered_pairs >= sum_counts;
  }
};

struct BlockOptions {
  std::uint64_t burn_in = kDefaultBurnIn;
  /// Cut one long orbit into consecutive blocks instead of independent
  /// seeded starts.
  bool contiguous = false;
  unsigned threads = 0;
};

/// Block data for maxima of any observable centred at `center`: the minimum
/// distance to the center over each block of length n. Since every g is
/// decreasing, the block maximum is g(min distance).
struct BlockSample {
  std::uint64_t block_length = 0;
  std::vector<double> min_distances;
  std::vector<BonferroniTally> tallies;
  std::uint64_t restarts = 0;

  std::vector<double> maxima(const ObservableSpec& spec) const;
  /// Fraction of blocks with M_n <= u.
  double fraction_at_most(const ObservableSpec& spec, double u) const;
};

/// m blocks of length n; block i uses seed derive_seed(seed, kBlocks, i).
/// A tally is kept for each radius in `tally_radii`.
BlockSample sample_blocks(const MapSystem& system, Point center, std::uint64_t n, std::uint64_t m,
                          std::uint64_t seed, const std::vector<double>& tally_radii = {},
                          const BlockOptions& options = {});

struct EvlPoint {
  double y = 0.0;
  double level = 0.0;
  double empirical = 0.0;
  double analytic = 0.0;  ///< exp(-tau(y))
  double std_error = 0.0;
};

std::vector<EvlPoint> evl_curve(const BlockSample& blocks, const LevelSequence& seq,
                                const std::vector<double>& y_grid);
std::vector<EvlPoint> evl_curve(const MapSystem& system, const LevelSequence& seq, std::uint64_t n,
                                std::uint64_t m, const std::vector<double>& y_grid,
                                std::uint64_t seed, const BlockOptions& options = {});

}  // namespace hitlab

#endif  // HITLAB_EXTREME_STATS_HPP_
