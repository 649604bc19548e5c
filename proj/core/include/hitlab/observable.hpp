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

#ifndef HITLAB_OBSERVABLE_HPP_
#define HITLAB_OBSERVABLE_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "hitlab/phase_space.hpp"

namespace hitlab {

class DensityModel;

enum class ObservableKind { g1, g2, g3 };

/// phi(x) = g(dist(x, zeta)) with
///   g1(s) = -log s,
///   g2(s) = s^(-1/alpha),
///   g3(s) = D - s^(1/alpha).
/// g(0) is +infinity for g1 and g2, which compares above every real level.
class ObservableSpec {
 public:
  static ObservableSpec g1(const PhaseSpace& space, Point center);
  static ObservableSpec g2(const PhaseSpace& space, Point center, double alpha);
  static ObservableSpec g3(const PhaseSpace& space, Point center, double alpha, double D);

  ObservableKind kind() const noexcept { return kind_; }
  const PhaseSpace& space() const noexcept { return space_; }
  Point center() const noexcept { return center_; }
  double alpha() const noexcept { return alpha_; }
  double D() const noexcept { return D_; }
  std::string name() const;

  double g(double s) const noexcept {
    switch (kind_) {
      case ObservableKind::g1:
        return -std::log(s);
      case ObservableKind::g2:
        return std::pow(s, -inv_alpha_);
      case ObservableKind::g3:
        return D_ - std::pow(s, inv_alpha_);
    }
    return 0.0;
  }

  /// Analytic inverse of g. Throws std::domain_error outside the range of g
  /// (u <= 0 for g2, u > D for g3).
  double g_inverse(double u) const;

  /// g(dist(x, zeta)) without a domain check.
  double evaluate(Point x) const noexcept { return g(space_.distance(x, center_)); }
  /// Checked version: throws std::domain_error if x is outside the space.
  double evaluate_checked(Point x) const;

  /// The largest radius r with {x : evaluate(x) > u} = {x : dist(x, zeta) < r}
  /// for the floating-point g above. Equals g_inverse(u) up to a few ulps;
  /// +infinity when every point exceeds u, 0 when none can.
  double exceedance_radius(double u) const;

  /// Valid y range (lo, hi) of the level and tau functions; bounds are open
  /// except for infinities.
  std::pair<double, double> y_domain() const noexcept;
  void require_y(double y) const;

  /// tau(y): e^-y, y^(-alpha d) or (-y)^(alpha d).
  double tau(double y) const;

  friend bool operator==(const ObservableSpec&, const ObservableSpec&) = default;

 private:
  ObservableSpec(ObservableKind kind, const PhaseSpace& space, Point center, double alpha,
                 double D);

  ObservableKind kind_;
  PhaseSpace space_;
  Point center_;
  double alpha_;
  double inv_alpha_;
  double D_;
};

/// The level sequence u_n(y) built from r_n = (kappa rho n)^(-1/d):
///   g1: u_n = g(r_n) + y/d
///   g2: u_n = g(r_n) * y
///   g3: u_n = D - (D - g(r_n)) * (-y)
/// so that n mu(X_0 > u_n(y)) -> tau(y).
class LevelSequence {
 public:
  /// Throws std::invalid_argument unless rho and kappa are finite and > 0.
  LevelSequence(ObservableSpec spec, double rho, double kappa);
  /// rho = density_at(zeta), kappa = space.kappa_at(zeta).
  static LevelSequence from_model(ObservableSpec spec, const DensityModel& model);

  const ObservableSpec& spec() const noexcept { return spec_; }
  double rho() const noexcept { return rho_; }
  double kappa() const noexcept { return kappa_; }
  int dimension() const noexcept { return spec_.space().dimension(); }

  double level(std::uint64_t n, double y) const;
  /// Exceedance radius of level(n, y), exact for the floating-point g.
  double radius_for_level(std::uint64_t n, double y) const;
  /// (tau(y) / (kappa rho n))^(1/d).
  double asymptotic_radius(std::uint64_t n, double y) const;
  /// floor(t / (kappa rho delta^d)); throws std::invalid_argument if < 1.
  std::uint64_t block_length_for_radius(double delta, double t) const;

 private:
  ObservableSpec spec_;
  double rho_;
  double kappa_;
};

}  // namespace hitlab

#endif  // HITLAB_OBSERVABLE_HPP_
