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

#include "hitlab/map_system.hpp"

#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace hitlab {

namespace {

constexpr std::size_t kValidationGrid = 100000;

// C-infinity bump exp(-1/(1-u^2)) on (-1, 1) and its derivative.
double raw_bump(double u) {
  const double w = 1.0 - u * u;
  return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
}

double raw_bump_derivative(double u) {
  const double w = 1.0 - u * u;
  if (w <= 0.0) return 0.0;
  return std::exp(-1.0 / w) * (-2.0 * u / (w * w));
}

// max_u |raw_bump_derivative(u)|; unimodal on (0, 1).
double raw_bump_derivative_max() {
  static const double value = [] {
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (std::fabs(raw_bump_derivative(m1)) < std::fabs(raw_bump_derivative(m2))) {
        lo = m1;
      } else {
        hi = m2;
      }
    }
    return std::fabs(raw_bump_derivative(0.5 * (lo + hi)));
  }();
  return value;
}

}  // namespace

MapSystem MapSystem::doubling() { return MapSystem(MapFamily::doubling, PhaseSpace::circle(), 0.0); }

MapSystem MapSystem::quadratic(double a) {
  if (!(a > 0.0 && a <= 2.0)) {
    throw std::invalid_argument(fmt::format("quadratic parameter a={} must lie in (0, 2]", a));
  }
  return MapSystem(MapFamily::quadratic, PhaseSpace::interval(-1.0, 1.0), a);
}

MapSystem MapSystem::torus_doubling() {
  return MapSystem(MapFamily::torus_doubling, PhaseSpace::torus2(), 0.0);
}

MapSystem MapSystem::intermittent(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument(fmt::format("intermittent gamma={} must lie in (0, 1)", gamma));
  }
  return MapSystem(MapFamily::intermittent, PhaseSpace::interval(0.0, 1.0), gamma);
}

MapSystem MapSystem::perturbed_expanding(const PerturbationParams& p) {
  if (!(p.epsilon >= 0.0) || !std::isfinite(p.epsilon)) {
    throw std::invalid_argument("perturbation epsilon must be finite and non-negative");
  }
  if (!(p.v_center >= 0.0 && p.v_center < 1.0)) {
    throw std::invalid_argument("perturbation region centre must lie in [0, 1)");
  }
  // f_0 = doubling must be one-to-one on V, so |V| < 1/2.
  if (!(p.v_radius > 0.0 && p.v_radius < 0.25)) {
    throw std::invalid_argument("perturbation region radius must lie in (0, 1/4)");
  }
  if (!(p.declared_delta > 0.0)) {
    throw std::invalid_argument("declared delta must be positive");
  }

  MapSystem sys(MapFamily::perturbed_expanding, PhaseSpace::circle(), p.epsilon);
  sys.perturbation_ = p;
  sys.bump_scale_ = p.v_radius / raw_bump_derivative_max();

  PerturbationValidation v;
  v.grid_points = kValidationGrid;
  v.min_derivative = std::numeric_limits<double>::infinity();
  v.max_derivative = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kValidationGrid; ++i) {
    const Point x{static_cast<double>(i) / kValidationGrid, 0.0};
    const double d = sys.derivative(x);
    v.min_derivative = std::min(v.min_derivative, d);
    v.max_derivative = std::max(v.max_derivative, d);
    if (sys.bump(x.x) > 0.0 || sys.space().distance(x, {p.v_center, 0.0}) < p.v_radius) {
      v.max_inverse_norm_on_v = std::max(v.max_inverse_norm_on_v, 1.0 / d);
    }
  }
  if (!(v.min_derivative > 0.0)) {
    throw std::invalid_argument(
        fmt::format("perturbed map is not a local diffeomorphism: min f' = {}", v.min_derivative));
  }
  if (!(v.min_derivative > 1.0)) {
    throw std::invalid_argument(
        fmt::format("perturbed map is not volume expanding: min |det Df| = {}", v.min_derivative));
  }
  if (!(v.max_inverse_norm_on_v < 1.0 + p.declared_delta)) {
    throw std::invalid_argument(fmt::format(
        "perturbed map too contracting on V: max ||Df^-1|| = {} >= 1 + {}",
        v.max_inverse_norm_on_v, p.declared_delta));
  }
  sys.validation_ = v;
  return sys;
}

std::string MapSystem::name() const {
  switch (family_) {
    case MapFamily::doubling:
      return "doubling";
    case MapFamily::quadratic:
      return fmt::format("quadratic(a={})", param_);
    case MapFamily::torus_doubling:
      return "torus-doubling";
    case MapFamily::perturbed_expanding:
      return fmt::format("perturbed-expanding(epsilon={}, v_center={}, v_radius={})", param_,
                         perturbation_.v_center, perturbation_.v_radius);
    case MapFamily::intermittent:
      return fmt::format("intermittent(gamma={})", param_);
  }
  return "?";
}

double MapSystem::bump(double x) const noexcept {
  if (family_ != MapFamily::perturbed_expanding) return 0.0;
  double delta = x - perturbation_.v_center;
  delta -= std::round(delta);
  return bump_scale_ * raw_bump(delta / perturbation_.v_radius);
}

double MapSystem::bump_derivative(double x) const noexcept {
  if (family_ != MapFamily::perturbed_expanding) return 0.0;
  double delta = x - perturbation_.v_center;
  delta -= std::round(delta);
  return bump_scale_ / perturbation_.v_radius * raw_bump_derivative(delta / perturbation_.v_radius);
}

double MapSystem::derivative(Point p) const noexcept {
  switch (family_) {
    case MapFamily::doubling:
    case MapFamily::torus_doubling:
      return 2.0;
    case MapFamily::quadratic:
      return -2.0 * param_ * p.x;
    case MapFamily::perturbed_expanding:
      return 2.0 + param_ * bump_derivative(p.x);
    case MapFamily::intermittent:
      return 1.0 + (1.0 + param_) * std::pow(p.x, param_);
  }
  return 0.0;
}

double MapSystem::log_expansion(Point p) const noexcept {
  // In one dimension ||Df^{-1}||^{-1} = |f'|; torus-doubling has Df = 2 I.
  return std::log(std::fabs(derivative(p)));
}

Point iterate(const MapSystem& system, Point x, std::uint64_t n) {
  system.space().require(x);
  for (std::uint64_t i = 0; i < n; ++i) x = system.apply(x);
  return x;
}

}  // namespace hitlab
