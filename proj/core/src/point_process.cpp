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

#include "hitlab/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "hitlab/parallel.hpp"
#include "hitlab/random.hpp"

namespace hitlab {

IntervalRing::IntervalRing(std::vector<std::pair<double, double>> intervals)
    : intervals_(std::move(intervals)) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto [a, b] = intervals_[i];
    if (!(a >= 0.0) || !(a < b) || !std::isfinite(b)) {
      throw std::invalid_argument(fmt::format("ring interval [{}, {}) is not a valid interval", a, b));
    }
    if (i > 0 && a < intervals_[i - 1].second) {
      throw std::invalid_argument("ring intervals must be sorted and disjoint");
    }
  }
}

double IntervalRing::total_length() const noexcept {
  double s = 0.0;
  for (const auto& [a, b] : intervals_) s += b - a;
  return s;
}

namespace {

void check_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("process horizon must be positive and finite");
  }
}

std::uint64_t last_index(double rescale, double horizon) {
  return static_cast<std::uint64_t>(std::floor(rescale * horizon));
}

}  // namespace

EventProcess epp(OrbitGenerator& orbit, const LevelSequence& seq, const DensityModel& model,
                 std::uint64_t n, double y, double horizon, const ExtractOptions& options) {
  check_horizon(horizon);
  const ObservableSpec& spec = seq.spec();
  const double u = seq.level(n, y);
  const double radius = spec.exceedance_radius(u);
  if (!std::isfinite(radius) || radius <= 0.0) {
    throw std::invalid_argument(fmt::format("level {} gives a degenerate exceedance set", u));
  }
  EventProcess p;
  p.rescale = 1.0 / model.ball_measure(spec.center(), radius);
  p.horizon = horizon;
  const std::uint64_t jmax = last_index(p.rescale, horizon);
  const PhaseSpace& space = orbit.space();
  const Point center = spec.center();
  // g is nonincreasing and g(radius) <= u, so points at distance >= 2 radius
  // cannot exceed; the rest are decided by the observable itself.
  const double screen = 2.0 * radius;
  for (std::uint64_t j = 0; j <= jmax; ++j) {
    const Point& x = orbit.current();
    if (space.distance(x, center) < screen && spec.evaluate(x) > u) {
      p.indices.push_back(j);
      if (options.max_events != 0 && p.indices.size() >= options.max_events) break;
    }
    orbit.next();
  }
  return p;
}

EventProcess epp(const MapSystem& system, Point x0, const LevelSequence& seq,
                 const DensityModel& model, std::uint64_t n, double y, double horizon) {
  system.space().require(x0);
  OrbitGenerator orbit = OrbitGenerator::from_point(system, x0);
  return epp(orbit, seq, model, n, y, horizon);
}

EventProcess htpp(OrbitGenerator& orbit, const DensityModel& model, Point zeta, double delta,
                  double horizon, const ExtractOptions& options) {
  check_horizon(horizon);
  EventProcess p;
  p.rescale = 1.0 / model.ball_measure(zeta, delta);
  p.horizon = horizon;
  const std::uint64_t jmax = last_index(p.rescale, horizon);
  const PhaseSpace& space = orbit.space();
  for (std::uint64_t j = 0; j <= jmax; ++j) {
    if (space.distance(orbit.current(), zeta) < delta) {
      p.indices.push_back(j);
      if (options.max_events != 0 && p.indices.size() >= options.max_events) break;
    }
    orbit.next();
  }
  return p;
}

EventProcess htpp(const MapSystem& system, Point x0, const DensityModel& model, Point zeta,
                  double delta, double horizon) {
  system.space().require(x0);
  system.space().require(zeta);
  OrbitGenerator orbit = OrbitGenerator::from_point(system, x0);
  return htpp(orbit, model, zeta, delta, horizon);
}

std::uint64_t count_on_ring(const EventProcess& process, const IntervalRing& ring) {
  if (ring.supremum() > process.horizon) {
    throw std::invalid_argument(fmt::format("ring extends to {} past the horizon {}",
                                            ring.supremum(), process.horizon));
  }
  const auto& idx = process.indices;
  std::uint64_t total = 0;
  for (const auto& [a, b] : ring.intervals()) {
    const double first = std::ceil(process.rescale * a);
    const double end = std::ceil(process.rescale * b);
    const auto lo = std::lower_bound(idx.begin(), idx.end(), first,
                                     [](std::uint64_t j, double v) { return static_cast<double>(j) < v; });
    const auto hi = std::lower_bound(lo, idx.end(), end,
                                     [](std::uint64_t j, double v) { return static_cast<double>(j) < v; });
    total += static_cast<std::uint64_t>(hi - lo);
  }
  return total;
}

std::vector<EventProcess> sample_epp(const MapSystem& system, const LevelSequence& seq,
                                     const DensityModel& model, std::uint64_t n, double y,
                                     double horizon, std::uint64_t m, std::uint64_t seed,
                                     const ProcessOptions& options) {
  std::vector<EventProcess> out(m);
  parallel_for(m, [&](std::size_t i) {
    OrbitGenerator orbit = OrbitGenerator::sampled(
        system, derive_seed(seed, streams::kProcesses, i), options.burn_in);
    out[i] = epp(orbit, seq, model, n, y, horizon, ExtractOptions{options.max_events});
  }, options.threads);
  return out;
}

std::vector<EventProcess> sample_htpp(const MapSystem& system, const DensityModel& model,
                                      Point zeta, double delta, double horizon, std::uint64_t m,
                                      std::uint64_t seed, const ProcessOptions& options) {
  std::vector<EventProcess> out(m);
  parallel_for(m, [&](std::size_t i) {
    OrbitGenerator orbit = OrbitGenerator::sampled(
        system, derive_seed(seed, streams::kProcesses, i), options.burn_in);
    out[i] = htpp(orbit, model, zeta, delta, horizon, ExtractOptions{options.max_events});
  }, options.threads);
  return out;
}

std::vector<double> poisson_pmf_folded(double mean, std::size_t kmax) {
  std::vector<double> pmf(kmax + 1);
  double term = std::exp(-mean);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < kmax; ++k) {
    pmf[k] = term;
    cumulative += term;
    term *= mean / static_cast<double>(k + 1);
  }
  pmf[kmax] = std::max(0.0, 1.0 - cumulative);
  return pmf;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: support mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
  return 0.5 * s;
}

namespace {

void require_runs(std::size_t m, const char* what) {
  if (m < 1000) throw std::invalid_argument(fmt::format("{} needs >= 1000 runs, got {}", what, m));
}

}  // namespace

PoissonCountResult poisson_count_test(const std::vector<EventProcess>& processes, double t) {
  require_runs(processes.size(), "poisson_count_test");
  if (!(t > 0.0)) throw std::invalid_argument("poisson_count_test: t must be positive");
  const IntervalRing window({{0.0, t}});
  std::vector<std::uint64_t> counts;
  counts.reserve(processes.size());
  for (const auto& p : processes) counts.push_back(count_on_ring(p, window));
  const std::uint64_t max_count = *std::max_element(counts.begin(), counts.end());
  const std::size_t kmax = static_cast<std::size_t>(max_count) + 5;

  PoissonCountResult r;
  r.empirical.assign(kmax + 1, 0.0);
  const double m = static_cast<double>(counts.size());
  double sum = 0.0;
  for (const auto c : counts) {
    r.empirical[c] += 1.0 / m;
    sum += static_cast<double>(c);
  }
  r.mean_count = sum / m;
  r.poisson = poisson_pmf_folded(t, kmax);
  r.tv = total_variation(r.empirical, r.poisson);
  return r;
}

InterarrivalResult interarrival_test(const std::vector<EventProcess>& processes,
                                     std::size_t gaps_per_run) {
  std::vector<double> gaps;
  for (const auto& p : processes) {
    std::size_t taken = 0;
    for (std::size_t i = 1; i < p.indices.size(); ++i) {
      if (gaps_per_run != 0 && taken == gaps_per_run) break;
      gaps.push_back(static_cast<double>(p.indices[i] - p.indices[i - 1]) / p.rescale);
      ++taken;
    }
  }
  if (gaps.size() < 1000) {
    throw std::invalid_argument(
        fmt::format("interarrival_test needs >= 1000 pooled gaps, got {}", gaps.size()));
  }
  InterarrivalResult r;
  r.gaps = gaps.size();
  r.ks = ks_statistic(EmpiricalDistribution(std::move(gaps)),
                      [](double s) { return s > 0.0 ? -std::expm1(-s) : 0.0; });
  r.critical_1pct = ks_critical_1pct(r.gaps);
  return r;
}

IncrementResult increment_independence_test(
    const std::vector<EventProcess>& processes,
    const std::vector<std::pair<double, double>>& intervals) {
  require_runs(processes.size(), "increment_independence_test");
  if (intervals.size() < 2 || intervals.size() > 3) {
    throw std::invalid_argument("increment_independence_test takes 2 or 3 intervals");
  }
  auto sorted = intervals;
  std::sort(sorted.begin(), sorted.end());
  const IntervalRing all(sorted);  // validates disjointness

  const std::size_t p = intervals.size();
  std::vector<std::uint64_t> none_each(p, 0);
  std::uint64_t none_all = 0;
  for (const auto& proc : processes) {
    bool empty_all = true;
    for (std::size_t i = 0; i < p; ++i) {
      const bool empty = count_on_ring(proc, IntervalRing({intervals[i]})) == 0;
      none_each[i] += empty ? 1 : 0;
      empty_all = empty_all && empty;
    }
    none_all += empty_all ? 1 : 0;
  }
  const double m = static_cast<double>(processes.size());
  IncrementResult r;
  r.p_none_all = static_cast<double>(none_all) / m;
  double product = 1.0;
  for (const auto c : none_each) {
    r.p_none_each.push_back(static_cast<double>(c) / m);
    product *= r.p_none_each.back();
  }
  r.factorization_defect = std::fabs(r.p_none_all - product);
  r.poisson_defect = std::fabs(r.p_none_all - std::exp(-all.total_length()));
  return r;
}

}  // namespace hitlab
