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

#include "hitlab/observable.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "hitlab/density.hpp"

namespace hitlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ObservableSpec::ObservableSpec(ObservableKind kind, const PhaseSpace& space, Point center,
                               double alpha, double D)
    : kind_(kind), space_(space), center_(center), alpha_(alpha), inv_alpha_(1.0 / alpha), D_(D) {
  space.require(center);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument(fmt::format("alpha must be positive and finite, got {}", alpha));
  }
  if (!std::isfinite(D)) throw std::invalid_argument("D must be finite");
}

ObservableSpec ObservableSpec::g1(const PhaseSpace& space, Point center) {
  return ObservableSpec(ObservableKind::g1, space, center, 1.0, 0.0);
}

ObservableSpec ObservableSpec::g2(const PhaseSpace& space, Point center, double alpha) {
  return ObservableSpec(ObservableKind::g2, space, center, alpha, 0.0);
}

ObservableSpec ObservableSpec::g3(const PhaseSpace& space, Point center, double alpha, double D) {
  return ObservableSpec(ObservableKind::g3, space, center, alpha, D);
}

std::string ObservableSpec::name() const {
  switch (kind_) {
    case ObservableKind::g1:
      return "g1";
    case ObservableKind::g2:
      return fmt::format("g2(alpha={})", alpha_);
    case ObservableKind::g3:
      return fmt::format("g3(alpha={},D={})", alpha_, D_);
  }
  return "?";
}

namespace {

// pow with the rounded reciprocal exponent lands about log(u) ulps away, and
// pow's rounding is not monotone, so search a window of neighbouring doubles
// for the one whose image is closest to u.
double polish_inverse(const ObservableSpec& spec, double r, double u) {
  if (!(r > 0.0) || std::isinf(r)) return r;
  const auto err = [&](double s) { return std::fabs(spec.g(s) - u); };
  double best = r;
  double best_err = err(r);
  for (const double toward : {0.0, kInf}) {
    double s = r;
    for (int i = 0; i < 32 && best_err > 0.0; ++i) {
      s = std::nextafter(s, toward);
      if (!(s > 0.0) || std::isinf(s)) break;
      if (const double e = err(s); e < best_err) best = s, best_err = e;
    }
  }
  return best;
}

}  // namespace

double ObservableSpec::g_inverse(double u) const {
  switch (kind_) {
    case ObservableKind::g1:
      return std::exp(-u);
    case ObservableKind::g2:
      if (!(u > 0.0)) throw std::domain_error(fmt::format("g2 inverse needs u > 0, got {}", u));
      return polish_inverse(*this, std::pow(u, -alpha_), u);
    case ObservableKind::g3:
      if (!(u <= D_)) {
        throw std::domain_error(fmt::format("g3 inverse needs u <= D = {}, got {}", D_, u));
      }
      return polish_inverse(*this, std::pow(D_ - u, alpha_), u);
  }
  return 0.0;
}

double ObservableSpec::evaluate_checked(Point x) const {
  space_.require(x);
  return evaluate(x);
}

double ObservableSpec::exceedance_radius(double u) const {
  if (std::isnan(u)) throw std::domain_error("level is NaN");
  if (kind_ == ObservableKind::g2 && u <= 0.0) return kInf;
  if (kind_ == ObservableKind::g3 && u >= D_) return 0.0;
  double r = g_inverse(u);
  if (std::isinf(r)) return r;
  // Snap to the exact threshold of the floating-point g, which is
  // nonincreasing: afterwards g(r) <= u < g(previous double).
  while (r > 0.0 && g(r) > u) r = std::nextafter(r, kInf);
  while (r > 0.0) {
    const double below = std::nextafter(r, 0.0);
    if (g(below) > u) break;
    r = below;
  }
  return r;
}

std::pair<double, double> ObservableSpec::y_domain() const noexcept {
  switch (kind_) {
    case ObservableKind::g1:
      return {-kInf, kInf};
    case ObservableKind::g2:
      return {0.0, kInf};
    case ObservableKind::g3:
      return {-kInf, 0.0};
  }
  return {0.0, 0.0};
}

void ObservableSpec::require_y(double y) const {
  const auto [lo, hi] = y_domain();
  const bool ok = kind_ == ObservableKind::g1 ? std::isfinite(y) : (y > lo && y < hi);
  if (!ok) {
    throw std::domain_error(
        fmt::format("y = {} outside the valid range ({}, {}) for {}", y, lo, hi, name()));
  }
}

double ObservableSpec::tau(double y) const {
  require_y(y);
  const double d = space_.dimension();
  switch (kind_) {
    case ObservableKind::g1:
      return std::exp(-y);
    case ObservableKind::g2:
      return std::pow(y, -alpha_ * d);
    case ObservableKind::g3:
      return std::pow(-y, alpha_ * d);
  }
  return 0.0;
}

LevelSequence::LevelSequence(ObservableSpec spec, double rho, double kappa)
    : spec_(spec), rho_(rho), kappa_(kappa) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument(
        fmt::format("density at the center must be finite and positive, got {}", rho));
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument(fmt::format("kappa must be finite and positive, got {}", kappa));
  }
}

LevelSequence LevelSequence::from_model(ObservableSpec spec, const DensityModel& model) {
  const DensityValue rho = model.density_at(spec.center());
  if (rho.low_confidence) {
    throw std::invalid_argument("density estimate at the center rests on an empty bin");
  }
  const double kappa = spec.space().kappa_at(spec.center());
  return LevelSequence(spec, rho.value, kappa);
}

double LevelSequence::level(std::uint64_t n, double y) const {
  if (n == 0) throw std::invalid_argument("level: n must be positive");
  spec_.require_y(y);
  const double d = dimension();
  const double scale = kappa_ * rho_ * static_cast<double>(n);
  switch (spec_.kind()) {
    case ObservableKind::g1:
      // -log((kappa rho n)^(-1/d)) + y/d
      return std::log(scale) / d + y / d;
    case ObservableKind::g2:
      return spec_.g(std::pow(scale, -1.0 / d)) * y;
    case ObservableKind::g3: {
      const double D = spec_.D();
      return D - (D - spec_.g(std::pow(scale, -1.0 / d))) * (-y);
    }
  }
  return 0.0;
}

double LevelSequence::radius_for_level(std::uint64_t n, double y) const {
  return spec_.exceedance_radius(level(n, y));
}

double LevelSequence::asymptotic_radius(std::uint64_t n, double y) const {
  if (n == 0) throw std::invalid_argument("asymptotic_radius: n must be positive");
  return std::pow(spec_.tau(y) / (kappa_ * rho_ * static_cast<double>(n)), 1.0 / dimension());
}

std::uint64_t LevelSequence::block_length_for_radius(double delta, double t) const {
  if (!(delta > 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("block_length_for_radius: delta and t must be positive");
  }
  const double ell = std::floor(t / (kappa_ * rho_ * std::pow(delta, dimension())));
  if (!(ell >= 1.0)) {
    throw std::invalid_argument(
        fmt::format("radius {} too large for t = {}: block length would be {}", delta, t, ell));
  }
  return static_cast<std::uint64_t>(ell);
}

}  // namespace hitlab
