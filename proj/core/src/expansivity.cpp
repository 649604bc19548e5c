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

#include "hitlab/expansivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hitlab/parallel.hpp"
#include "hitlab/random.hpp"

namespace hitlab {

double log_inverse_derivative_average(const MapSystem& system, Point x, std::uint64_t n) {
  system.space().require(x);
  OrbitGenerator orbit = OrbitGenerator::from_point(system, x);
  return log_inverse_derivative_average(orbit, n);
}

double log_inverse_derivative_average(OrbitGenerator& orbit, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("log_inverse_derivative_average: n must be positive");
  const MapSystem& system = orbit.system();
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    sum += system.log_expansion(orbit.current());
    orbit.next();
  }
  return sum / static_cast<double>(n);
}

CappedTime expansion_time(const MapSystem& system, Point x, double lambda, std::uint64_t cap) {
  system.space().require(x);
  OrbitGenerator orbit = OrbitGenerator::from_point(system, x);
  return expansion_time(orbit, lambda, cap);
}

CappedTime expansion_time(OrbitGenerator& orbit, double lambda, std::uint64_t cap) {
  if (!(lambda > 0.0)) throw std::invalid_argument("expansion_time: lambda must be positive");
  if (cap == 0) throw std::invalid_argument("expansion_time: cap must be positive");
  const MapSystem& system = orbit.system();
  std::vector<double> partial(cap);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < cap; ++i) {
    sum += system.log_expansion(orbit.current());
    partial[i] = sum;
    orbit.next();
  }
  const double half = lambda / 2.0;
  std::uint64_t n = cap;
  while (n >= 1 && partial[n - 1] >= half * static_cast<double>(n)) --n;
  if (n == cap) return CappedTime::exceeded(cap);
  return CappedTime::hit(n + 1);
}

double ExpansivitySurvey::fraction_at_least(double threshold) const {
  if (averages.empty()) return 0.0;
  const auto hits = std::count_if(averages.begin(), averages.end(),
                                  [&](double a) { return a >= threshold; });
  return static_cast<double>(hits) / static_cast<double>(averages.size());
}

double ExpansivitySurvey::fraction_finite() const {
  if (expansion_times.empty()) return 0.0;
  const auto hits = std::count_if(expansion_times.begin(), expansion_times.end(),
                                  [](const CappedTime& t) { return !t.is_exceeded(); });
  return static_cast<double>(hits) / static_cast<double>(expansion_times.size());
}

ExpansivitySurvey expansivity_survey(const MapSystem& system, std::uint64_t starts,
                                     std::uint64_t length, double lambda, std::uint64_t seed,
                                     std::uint64_t burn_in) {
  if (starts == 0 || length == 0) {
    throw std::invalid_argument("expansivity_survey: starts and length must be positive");
  }
  ExpansivitySurvey survey;
  survey.averages.resize(starts);
  survey.expansion_times.assign(starts, CappedTime::exceeded(length));
  std::vector<std::uint64_t> restarts(starts, 0);
  parallel_for(starts, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(seed, streams::kExpansivity, i);
    OrbitGenerator orbit = OrbitGenerator::sampled(system, s, burn_in);
    // Both diagnostics read the same orbit segment.
    OrbitGenerator replay = orbit;
    survey.averages[i] = log_inverse_derivative_average(orbit, length);
    survey.expansion_times[i] = expansion_time(replay, lambda, length);
    restarts[i] = orbit.restarts();
  });
  for (const auto r : restarts) survey.restarts += r;
  return survey;
}

}  // namespace hitlab
