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

#include "hitlab/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "hitlab/parallel.hpp"
#include "hitlab/random.hpp"

namespace hitlab {

CappedTime first_hitting_time(const MapSystem& system, Point x, Point zeta, double delta,
                              std::uint64_t cap) {
  system.space().require(x);
  system.space().require(zeta);
  OrbitGenerator orbit = OrbitGenerator::from_point(system, x);
  return first_hitting_time(orbit, zeta, delta, cap);
}

CappedTime first_hitting_time(OrbitGenerator& orbit, Point zeta, double delta, std::uint64_t cap) {
  if (cap == 0) throw std::invalid_argument("first_hitting_time: cap must be positive");
  const PhaseSpace& space = orbit.space();
  for (std::uint64_t j = 1; j <= cap; ++j) {
    if (space.distance(orbit.next(), zeta) < delta) return CappedTime::hit(j);
  }
  return CappedTime::exceeded(cap);
}

std::vector<CappedTime> waiting_times(const MapSystem& system, Point x, Point zeta, double delta,
                                      std::size_t k, std::uint64_t cap) {
  if (k == 0) throw std::invalid_argument("waiting_times: k must be positive");
  system.space().require(x);
  system.space().require(zeta);
  OrbitGenerator orbit = OrbitGenerator::from_point(system, x);
  std::vector<CappedTime> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    out.push_back(first_hitting_time(orbit, zeta, delta, cap));
    if (out.back().is_exceeded()) break;
  }
  return out;
}

std::uint64_t default_cap(double ball_measure) {
  if (!(ball_measure > 0.0)) throw std::invalid_argument("default_cap: measure must be positive");
  return static_cast<std::uint64_t>(std::ceil(50.0 / ball_measure));
}

double HitSample::exceeded_fraction() const noexcept {
  return size() == 0 ? 0.0 : static_cast<double>(exceeded) / static_cast<double>(size());
}

void HitSample::merge(const HitSample& other) {
  if (!(center == other.center) || delta != other.delta || conditioning != other.conditioning ||
      normalization != other.normalization) {
    throw std::invalid_argument("cannot merge hit samples of different targets");
  }
  times.insert(times.end(), other.times.begin(), other.times.end());
  exceeded += other.exceeded;
  cap = std::min(cap, other.cap);
}

namespace {

HitSample empty_sample(const DensityModel& model, Point zeta, double delta, std::uint64_t cap,
                       Conditioning conditioning) {
  if (!(delta > 0.0)) throw std::domain_error("ball radius must be positive");
  if (cap == 0) throw std::invalid_argument("cap must be positive");
  HitSample s;
  s.center = zeta;
  s.delta = delta;
  s.normalization = model.ball_measure(zeta, delta);
  s.cap = cap;
  s.conditioning = conditioning;
  if (!(s.normalization > 0.0)) {
    throw std::invalid_argument("target ball has zero measure under the density model");
  }
  return s;
}

void require_cap(const HitSample& s, const std::vector<double>& t_grid) {
  double t_max = 0.0;
  for (const double t : t_grid) {
    if (!(t >= 0.0)) throw std::invalid_argument("t grid must be non-negative");
    t_max = std::max(t_max, t);
  }
  const double need = std::ceil(t_max / s.normalization);
  if (static_cast<double>(s.cap) < need) {
    throw std::invalid_argument(
        fmt::format("cap {} is below max(t) / mu(U) = {}", s.cap, need));
  }
}

}  // namespace

HitSample hitting_sample(const MapSystem& system, const DensityModel& model, Point zeta,
                         double delta, std::uint64_t m, std::uint64_t cap, std::uint64_t seed,
                         const HitOptions& options) {
  HitSample s = empty_sample(model, zeta, delta, cap, Conditioning::stationary);
  std::vector<CappedTime> times(m, CappedTime::exceeded(cap));
  parallel_for(m, [&](std::size_t i) {
    OrbitGenerator orbit = OrbitGenerator::sampled(
        system, derive_seed(seed, streams::kHitting, i), options.burn_in);
    times[i] = first_hitting_time(orbit, zeta, delta, cap);
  }, options.threads);
  for (const auto& t : times) {
    if (t.is_exceeded()) {
      ++s.exceeded;
    } else {
      s.times.push_back(t.value());
    }
  }
  return s;
}

HitSample return_sample(const MapSystem& system, const DensityModel& model, Point zeta,
                        double delta, std::uint64_t m, std::uint64_t cap, std::uint64_t seed,
                        const HitOptions& options) {
  HitSample s = empty_sample(model, zeta, delta, cap, Conditioning::conditioned);
  const std::size_t shards = std::max<std::size_t>(1, std::min<std::uint64_t>(options.shards, m));
  const std::uint64_t budget =
      options.budget > 0 ? options.budget
                         : static_cast<std::uint64_t>(200.0 * static_cast<double>(m) /
                                                      s.normalization);
  struct Shard {
    std::vector<std::uint64_t> times;
    std::uint64_t exceeded = 0;
    std::uint64_t visits = 0;
  };
  std::vector<Shard> out(shards);
  parallel_for(shards, [&](std::size_t k) {
    const std::uint64_t quota = m / shards + (k < m % shards ? 1 : 0);
    const std::uint64_t steps = budget / shards;
    OrbitGenerator orbit = OrbitGenerator::sampled(
        system, derive_seed(seed, streams::kReturns, k), options.burn_in);
    const PhaseSpace& space = orbit.space();
    Shard& sh = out[k];
    bool inside = space.distance(orbit.current(), zeta) < delta;
    std::uint64_t last = 0;
    for (std::uint64_t j = 1; j <= steps && sh.times.size() + sh.exceeded < quota; ++j) {
      if (space.distance(orbit.next(), zeta) < delta) {
        if (inside) {
          const std::uint64_t gap = j - last;
          if (gap > cap) {
            ++sh.exceeded;
          } else {
            sh.times.push_back(gap);
          }
        }
        inside = true;
        last = j;
        ++sh.visits;
      }
    }
  }, options.threads);
  std::uint64_t found = 0;
  for (const auto& sh : out) found += sh.times.size() + sh.exceeded;
  if (found < m) {
    throw std::runtime_error(fmt::format(
        "return_sample: only {} of {} returns found within a budget of {} iterates", found, m,
        budget));
  }
  for (const auto& sh : out) {
    s.times.insert(s.times.end(), sh.times.begin(), sh.times.end());
    s.exceeded += sh.exceeded;
  }
  return s;
}

std::vector<SurvivalPoint> survival_curve(const HitSample& sample,
                                          const std::vector<double>& t_grid) {
  if (sample.size() == 0) throw std::invalid_argument("survival_curve: empty sample");
  std::vector<std::uint64_t> sorted = sample.times;
  std::sort(sorted.begin(), sorted.end());
  const double total = static_cast<double>(sample.size());
  std::vector<SurvivalPoint> curve;
  curve.reserve(t_grid.size());
  for (const double t : t_grid) {
    const double threshold = t / sample.normalization;
    // Number of finite times strictly below the threshold.
    const auto below = std::partition_point(sorted.begin(), sorted.end(), [&](std::uint64_t r) {
                         return static_cast<double>(r) < threshold;
                       }) - sorted.begin();
    SurvivalPoint p;
    p.t = t;
    p.survival = (total - static_cast<double>(below)) / total;
    p.std_error = std::sqrt(p.survival * (1.0 - p.survival) / total);
    p.exceeded_fraction = sample.exceeded_fraction();
    curve.push_back(p);
  }
  return curve;
}

std::vector<SurvivalPoint> hts_ecdf(const MapSystem& system, const DensityModel& model, Point zeta,
                                    double delta, const std::vector<double>& t_grid,
                                    std::uint64_t m, std::uint64_t cap, std::uint64_t seed,
                                    const HitOptions& options) {
  require_cap(empty_sample(model, zeta, delta, cap, Conditioning::stationary), t_grid);
  return survival_curve(hitting_sample(system, model, zeta, delta, m, cap, seed, options), t_grid);
}

std::vector<SurvivalPoint> rts_ecdf(const MapSystem& system, const DensityModel& model, Point zeta,
                                    double delta, const std::vector<double>& t_grid,
                                    std::uint64_t m, std::uint64_t cap, std::uint64_t seed,
                                    const HitOptions& options) {
  require_cap(empty_sample(model, zeta, delta, cap, Conditioning::conditioned), t_grid);
  return survival_curve(return_sample(system, model, zeta, delta, m, cap, seed, options), t_grid);
}

KacResult kac_check(const HitSample& returns) {
  KacResult r;
  const std::size_t n = returns.times.size();
  r.exceeded_fraction = returns.exceeded_fraction();
  r.flagged = r.exceeded_fraction > 0.01;
  if (n == 0) {
    r.flagged = true;
    return r;
  }
  double mean = 0.0;
  for (const auto t : returns.times) mean += static_cast<double>(t);
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const auto t : returns.times) {
    const double d = static_cast<double>(t) - mean;
    var += d * d;
  }
  var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
  r.mean_return = mean;
  r.product = mean * returns.normalization;
  r.std_error = std::sqrt(var / static_cast<double>(n)) * returns.normalization;
  return r;
}

KacResult kac_check(const MapSystem& system, const DensityModel& model, Point zeta, double delta,
                    std::uint64_t m, std::uint64_t cap, std::uint64_t seed,
                    const HitOptions& options) {
  if (m < 100) throw std::invalid_argument("kac_check needs m >= 100");
  return kac_check(return_sample(system, model, zeta, delta, m, cap, seed, options));
}

ExtremalIndexFit extremal_index_fit(const std::vector<SurvivalPoint>& curve, double tolerance) {
  ExtremalIndexFit fit;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& p = curve[i];
    if (i > 0 && p.t > curve[i - 1].t && p.survival > curve[i - 1].survival + tolerance) {
      fit.nonmonotone = true;
    }
    if (p.t > 0.0 && p.survival > 0.0 && p.survival < 1.0) {
      num += p.t * -std::log(p.survival);
      den += p.t * p.t;
      ++fit.points_used;
    }
  }
  if (fit.points_used < 3) {
    throw std::invalid_argument(fmt::format(
        "extremal_index_fit needs 3 points with survival in (0,1), got {}", fit.points_used));
  }
  fit.raw_slope = num / den;
  fit.theta = std::clamp(fit.raw_slope, std::numeric_limits<double>::min(), 1.0);
  return fit;
}

}  // namespace hitlab
