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

#ifndef HITLAB_EXPANSIVITY_HPP_
#define HITLAB_EXPANSIVITY_HPP_

#include <cstdint>
#include <vector>

#include "hitlab/capped_time.hpp"
#include "hitlab/map_system.hpp"
#include "hitlab/orbit.hpp"

namespace hitlab {

/// (1/n) sum_{i<n} log ||Df(f^i x)^{-1}||^{-1} along the orbit of x.
/// Returns -infinity if the orbit meets a critical point.
double log_inverse_derivative_average(const MapSystem& system, Point x, std::uint64_t n);

/// Same average over the next n points of `orbit`, starting with current().
/// Advances the generator by n steps.
double log_inverse_derivative_average(OrbitGenerator& orbit, std::uint64_t n);

/// Smallest N <= cap such that the Birkhoff average of the log expansion is
/// >= lambda / 2 for every n in [N, cap]; Exceeded(cap) if there is none.
CappedTime expansion_time(const MapSystem& system, Point x, double lambda, std::uint64_t cap);
CappedTime expansion_time(OrbitGenerator& orbit, double lambda, std::uint64_t cap);

struct ExpansivitySurvey {
  std::vector<double> averages;          ///< per start, at the full length
  std::vector<CappedTime> expansion_times;
  std::uint64_t restarts = 0;            ///< float fixed-point restarts, summed

  /// Fraction of starts whose average is >= threshold.
  double fraction_at_least(double threshold) const;
  /// Fraction of starts with a finite expansion time.
  double fraction_finite() const;
};

/// Runs `starts` independent sampled orbits of the given length and records
/// both diagnostics for each one.
ExpansivitySurvey expansivity_survey(const MapSystem& system, std::uint64_t starts,
                                     std::uint64_t length, double lambda, std::uint64_t seed,
                                     std::uint64_t burn_in = kDefaultBurnIn);

}  // namespace hitlab

#endif  // HITLAB_EXPANSIVITY_HPP_
