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

#ifndef HITLAB_MAP_SYSTEM_HPP_
#define HITLAB_MAP_SYSTEM_HPP_

#include <cmath>
#include <cstdint>
#include <string>

#include "hitlab/phase_space.hpp"

namespace hitlab {

enum class MapFamily { doubling, quadratic, torus_doubling, perturbed_expanding, intermittent };

/// Parameters of the perturbed doubling map f(x) = 2x + epsilon * s(x) mod 1,
/// where s is a smooth bump supported on V = (v_center - v_radius,
/// v_center + v_radius), normalised so that max |s'| = 1.
struct PerturbationParams {
  double epsilon = 0.3;
  double v_center = 0.5;
  double v_radius = 0.2;
  /// delta in the "not too contracting on V" bound ||Df^{-1}|| < 1 + delta.
  double declared_delta = 0.5;

  friend bool operator==(const PerturbationParams&, const PerturbationParams&) = default;
};

/// Grid-evaluated class conditions of a PerturbedExpanding instance.
struct PerturbationValidation {
  std::size_t grid_points = 0;
  double min_derivative = 0.0;
  double max_derivative = 0.0;
  double max_inverse_norm_on_v = 0.0;
};

/// An example map: family, parameters and phase space. Immutable after
/// construction and cheap to copy.
class MapSystem {
 public:
  static MapSystem doubling();
  /// x -> 1 - a x^2 on [-1, 1], 0 < a <= 2.
  static MapSystem quadratic(double a);
  static MapSystem torus_doubling();
  /// Validates the class conditions on a 10^5-point grid; throws
  /// std::invalid_argument naming the violated bound.
  static MapSystem perturbed_expanding(const PerturbationParams& params);
  /// x -> x (1 + x^gamma) mod 1 on [0, 1], 0 < gamma < 1.
  static MapSystem intermittent(double gamma);

  MapFamily family() const noexcept { return family_; }
  const PhaseSpace& space() const noexcept { return space_; }
  /// a for quadratic, gamma for intermittent, epsilon for perturbed-expanding.
  double parameter() const noexcept { return param_; }
  const PerturbationParams& perturbation() const noexcept { return perturbation_; }
  const PerturbationValidation& validation() const noexcept { return validation_; }
  std::string name() const;

  /// Bit-stream (shift) iteration is exact only for the doubling families.
  bool supports_bit_stream() const noexcept {
    return family_ == MapFamily::doubling || family_ == MapFamily::torus_doubling;
  }

  /// One application of f in double precision. No domain check.
  Point apply(Point p) const noexcept {
    switch (family_) {
      case MapFamily::doubling:
        return {wrap_double(p.x), 0.0};
      case MapFamily::quadratic:
        return {1.0 - param_ * p.x * p.x, 0.0};
      case MapFamily::torus_doubling:
        return {wrap_double(p.x), wrap_double(p.y)};
      case MapFamily::perturbed_expanding: {
        double v = 2.0 * p.x + param_ * bump(p.x);
        v -= std::floor(v);
        return {v, 0.0};
      }
      case MapFamily::intermittent: {
        double v = p.x + std::pow(p.x, 1.0 + param_);
        if (v >= 1.0) v -= 1.0;
        return {v, 0.0};
      }
    }
    return p;
  }

  /// f'(x) for the one-dimensional families; the right-hand derivative at a
  /// mod-1 seam. Torus-doubling reports the common coordinate factor 2.
  double derivative(Point p) const noexcept;

  /// log ||Df(p)^{-1}||^{-1}; -infinity at a critical point.
  double log_expansion(Point p) const noexcept;

  /// The bump s(x) and its derivative (perturbed-expanding only).
  double bump(double x) const noexcept;
  double bump_derivative(double x) const noexcept;

  friend bool operator==(const MapSystem& a, const MapSystem& b) {
    return a.family_ == b.family_ && a.param_ == b.param_ && a.perturbation_ == b.perturbation_;
  }

 private:
  MapSystem(MapFamily family, PhaseSpace space, double param)
      : family_(family), space_(space), param_(param) {}

  static double wrap_double(double x) noexcept {
    const double v = 2.0 * x;
    return v >= 1.0 ? v - 1.0 : v;
  }

  MapFamily family_;
  PhaseSpace space_;
  double param_;
  PerturbationParams perturbation_{};
  PerturbationValidation validation_{};
  double bump_scale_ = 1.0;
};

/// f^n(x); throws std::domain_error if x is outside the phase space.
Point iterate(const MapSystem& system, Point x, std::uint64_t n);

}  // namespace hitlab

#endif  // HITLAB_MAP_SYSTEM_HPP_
