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

#include "hitlab/extreme_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "hitlab/parallel.hpp"
#include "hitlab/random.hpp"

namespace hitlab {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("empirical distribution needs a sample");
  for (const double v : values_) {
    if (std::isnan(v)) throw std::invalid_argument("empirical distribution: NaN in sample");
  }
  std::sort(values_.begin(), values_.end());
}

std::size_t EmpiricalDistribution::infinite_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return std::isinf(v); }));
}

double EmpiricalDistribution::cdf(double x) const noexcept {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::cdf_below(double x) const noexcept {
  const auto it = std::lower_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

EmpiricalDistribution EmpiricalDistribution::merged(const EmpiricalDistribution& other) const {
  std::vector<double> all;
  all.reserve(values_.size() + other.values_.size());
  std::merge(values_.begin(), values_.end(), other.values_.begin(), other.values_.end(),
             std::back_inserter(all));
  return EmpiricalDistribution(std::move(all));
}

double ks_statistic(const EmpiricalDistribution& sample,
                    const std::function<double(double)>& cdf) {
  const auto& x = sample.values();
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

double classical_evd(int type, double alpha, double y) {
  switch (type) {
    case 1:
      return std::exp(-std::exp(-y));
    case 2:
      if (!(alpha > 0.0)) throw std::invalid_argument("EV2 needs alpha > 0");
      return y > 0.0 ? std::exp(-std::pow(y, -alpha)) : 0.0;
    case 3:
      if (!(alpha > 0.0)) throw std::invalid_argument("EV3 needs alpha > 0");
      return y <= 0.0 ? std::exp(-std::pow(-y, alpha)) : 1.0;
    default:
      throw std::invalid_argument(fmt::format("extreme value type must be 1, 2 or 3, got {}", type));
  }
}

double gev_cdf(const GevParams& p, double x) {
  const double z = (x - p.location) / p.scale;
  if (p.shape == 0.0) return std::exp(-std::exp(-z));
  const double t = 1.0 + p.shape * z;
  if (t <= 0.0) return p.shape > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::pow(t, -1.0 / p.shape));
}

namespace {

// L-skewness of a GEV with Hosking's parameter k (= -shape).
double gev_t3(double k) {
  if (k == 0.0) return 2.0 * std::log(3.0) / std::log(2.0) - 3.0;
  return 2.0 * std::expm1(-k * std::log(3.0)) / std::expm1(-k * std::log(2.0)) - 3.0;
}

}  // namespace

GevParams gev_fit(const EmpiricalDistribution& sample, InfinitePolicy policy) {
  const auto& all = sample.values();
  const std::size_t infinite = sample.infinite_count();
  if (infinite > 0 && policy == InfinitePolicy::reject) {
    throw std::invalid_argument(fmt::format("gev_fit: {} infinite values in sample", infinite));
  }
  const std::size_t n = all.size() - infinite;  // finite values come first
  if (n < 50) throw std::invalid_argument(fmt::format("gev_fit needs >= 50 finite values, got {}", n));

  const double nn = static_cast<double>(n);
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double j = static_cast<double>(i);
    b0 += all[i];
    b1 += all[i] * j / (nn - 1.0);
    b2 += all[i] * j * (j - 1.0) / ((nn - 1.0) * (nn - 2.0));
  }
  b0 /= nn;
  b1 /= nn;
  b2 /= nn;
  const double l1 = b0;
  const double l2 = 2.0 * b1 - b0;
  const double l3 = 6.0 * b2 - 6.0 * b1 + b0;
  if (!(l2 > 0.0)) throw std::invalid_argument("gev_fit: degenerate sample (zero spread)");
  const double t3 = l3 / l2;

  const double c = 2.0 / (3.0 + t3) - std::log(2.0) / std::log(3.0);
  double k = 7.8590 * c + 2.9554 * c * c;
  for (int iter = 0; iter < 50; ++iter) {
    const double h = 1e-6;
    const double f = gev_t3(k) - t3;
    const double df = (gev_t3(k + h) - gev_t3(k - h)) / (2.0 * h);
    if (!(std::fabs(df) > 0.0)) break;
    const double step = f / df;
    k -= step;
    if (std::fabs(step) < 1e-13) break;
  }
  if (!std::isfinite(k) || k <= -1.0) {
    throw std::runtime_error(fmt::format("gev_fit: L-skewness {} outside the GEV range", t3));
  }

  GevParams p;
  if (std::fabs(k) < 1e-9) {
    p.shape = 0.0;
    p.scale = l2 / std::numbers::ln2;
    p.location = l1 - std::numbers::egamma * p.scale;
    return p;
  }
  const double g = std::tgamma(1.0 + k);
  p.shape = -k;
  p.scale = l2 * k / (-std::expm1(-k * std::numbers::ln2) * g);
  p.location = l1 - p.scale * (1.0 - g) / k;
  return p;
}

double partial_max(OrbitGenerator& orbit, const ObservableSpec& spec, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("partial_max: n must be positive");
  double m = -std::numeric_limits<double>::infinity();
  for (std::uint64_t j = 0; j < n; ++j) {
    m = std::max(m, spec.evaluate(orbit.current()));
    orbit.next();
  }
  return m;
}

double partial_max(const MapSystem& system, Point x0, const ObservableSpec& spec,
                   std::uint64_t n) {
  system.space().require(x0);
  OrbitGenerator orbit = OrbitGenerator::from_point(system, x0);
  return partial_max(orbit, spec, n);
}

void BonferroniTally::merge(const BonferroniTally& other) {
  if (radius != other.radius) throw std::invalid_argument("cannot merge tallies of different radii");
  blocks += other.blocks;
  sum_counts += other.sum_counts;
  blocks_hit += other.blocks_hit;
  ordered_pairs += other.ordered_pairs;
}

std::vector<double> BlockSample::maxima(const ObservableSpec& spec) const {
  std::vector<double> out;
  out.reserve(min_distances.size());
  for (const double d : min_distances) out.push_back(spec.g(d));
  return out;
}

double BlockSample::fraction_at_most(const ObservableSpec& spec, double u) const {
  if (min_distances.empty()) return 0.0;
  std::size_t below = 0;
  for (const double d : min_distances) below += spec.g(d) <= u ? 1 : 0;
  return static_cast<double>(below) / static_cast<double>(min_distances.size());
}

namespace {

// Scans one block: returns the min distance and adds exceedance counts.
double scan_block(OrbitGenerator& orbit, Point center, std::uint64_t n,
                  const std::vector<double>& radii, double max_radius,
                  std::vector<std::uint64_t>& counts) {
  const PhaseSpace& space = orbit.space();
  double best = std::numeric_limits<double>::infinity();
  std::fill(counts.begin(), counts.end(), 0);
  for (std::uint64_t j = 0; j < n; ++j) {
    const double d = space.distance(orbit.current(), center);
    best = std::min(best, d);
    if (d < max_radius) {
      for (std::size_t k = 0; k < radii.size(); ++k) counts[k] += d < radii[k] ? 1 : 0;
    }
    orbit.next();
  }
  return best;
}

}  // namespace

BlockSample sample_blocks(const MapSystem& system, Point center, std::uint64_t n, std::uint64_t m,
                          std::uint64_t seed, const std::vector<double>& tally_radii,
                          const BlockOptions& options) {
  system.space().require(center);
  if (n == 0 || m == 0) throw std::invalid_argument("sample_blocks: n and m must be positive");
  const double max_radius =
      tally_radii.empty() ? 0.0 : *std::max_element(tally_radii.begin(), tally_radii.end());
  const std::size_t r = tally_radii.size();

  BlockSample out;
  out.block_length = n;
  out.min_distances.resize(m);
  std::vector<std::uint64_t> counts(m * r, 0);
  std::vector<std::uint64_t> restarts(m, 0);

  if (options.contiguous) {
    OrbitGenerator orbit = OrbitGenerator::sampled(
        system, derive_seed(seed, streams::kBlocks, 0), options.burn_in);
    std::vector<std::uint64_t> local(r);
    for (std::uint64_t i = 0; i < m; ++i) {
      out.min_distances[i] = scan_block(orbit, center, n, tally_radii, max_radius, local);
      std::copy(local.begin(), local.end(), counts.begin() + static_cast<std::ptrdiff_t>(i * r));
    }
    restarts[0] = orbit.restarts();
  } else {
    parallel_for(m, [&](std::size_t i) {
      OrbitGenerator orbit = OrbitGenerator::sampled(
          system, derive_seed(seed, streams::kBlocks, i), options.burn_in);
      std::vector<std::uint64_t> local(r);
      out.min_distances[i] = scan_block(orbit, center, n, tally_radii, max_radius, local);
      std::copy(local.begin(), local.end(), counts.begin() + static_cast<std::ptrdiff_t>(i * r));
      restarts[i] = orbit.restarts();
    }, options.threads);
  }

  out.tallies.resize(r);
  for (std::size_t k = 0; k < r; ++k) {
    out.tallies[k].radius = tally_radii[k];
    for (std::uint64_t i = 0; i < m; ++i) out.tallies[k].record(counts[i * r + k]);
  }
  for (const auto v : restarts) out.restarts += v;
  return out;
}

std::vector<EvlPoint> evl_curve(const BlockSample& blocks, const LevelSequence& seq,
                                const std::vector<double>& y_grid) {
  const ObservableSpec& spec = seq.spec();
  std::vector<double> maxima = blocks.maxima(spec);
  std::sort(maxima.begin(), maxima.end());
  const double m = static_cast<double>(maxima.size());
  std::vector<EvlPoint> curve;
  curve.reserve(y_grid.size());
  for (const double y : y_grid) {
    EvlPoint p;
    p.y = y;
    p.level = seq.level(blocks.block_length, y);
    const auto below = std::upper_bound(maxima.begin(), maxima.end(), p.level) - maxima.begin();
    p.empirical = static_cast<double>(below) / m;
    p.analytic = std::exp(-spec.tau(y));
    p.std_error = std::sqrt(p.empirical * (1.0 - p.empirical) / m);
    curve.push_back(p);
  }
  return curve;
}

std::vector<EvlPoint> evl_curve(const MapSystem& system, const LevelSequence& seq, std::uint64_t n,
                                std::uint64_t m, const std::vector<double>& y_grid,
                                std::uint64_t seed, const BlockOptions& options) {
  const BlockSample blocks = sample_blocks(system, seq.spec().center(), n, m, seed, {}, options);
  return evl_curve(blocks, seq, y_grid);
}

}  // namespace hitlab
