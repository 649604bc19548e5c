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

#ifndef HITLAB_PHASE_SPACE_HPP_
#define HITLAB_PHASE_SPACE_HPP_

#include <algorithm>
#include <cmath>
#include <string>

namespace hitlab {

/// A point of a phase space of dimension <= 2. One-dimensional spaces use
/// only `x`.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

enum class SpaceKind { circle, interval, torus2 };

/// Circle R/Z, a compact interval [lo, hi], or the flat 2-torus R^2/Z^2.
class PhaseSpace {
 public:
  static PhaseSpace circle() { return PhaseSpace(SpaceKind::circle, 0.0, 1.0); }
  static PhaseSpace interval(double lo, double hi);
  static PhaseSpace torus2() { return PhaseSpace(SpaceKind::torus2, 0.0, 1.0); }

  SpaceKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return kind_ == SpaceKind::torus2 ? 2 : 1; }
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }
  double volume() const noexcept { return kind_ == SpaceKind::interval ? hi_ - lo_ : 1.0; }

  /// kappa with |B_delta(center)| ~ kappa * delta^d for small delta: 2 on the
  /// circle and at interior points of an interval, 1 at an interval endpoint,
  /// pi on the torus.
  double kappa() const noexcept;
  double kappa_at(Point center) const noexcept;

  bool contains(Point p) const noexcept;
  /// Throws std::domain_error naming the space when `p` is outside it.
  void require(Point p) const;

  /// Metric without domain checks; for hot loops.
  double distance(Point a, Point b) const noexcept {
    switch (kind_) {
      case SpaceKind::circle: {
        const double d = std::fabs(a.x - b.x);
        return std::min(d, 1.0 - d);
      }
      case SpaceKind::interval:
        return std::fabs(a.x - b.x);
      case SpaceKind::torus2: {
        double dx = std::fabs(a.x - b.x);
        double dy = std::fabs(a.y - b.y);
        dx = std::min(dx, 1.0 - dx);
        dy = std::min(dy, 1.0 - dy);
        return std::sqrt(dx * dx + dy * dy);
      }
    }
    return 0.0;
  }

  /// Lebesgue measure of the open ball B_radius(center), intersected with the
  /// space. Exact for every radius.
  double lebesgue_ball(Point center, double radius) const;

  std::string describe() const;

  friend bool operator==(const PhaseSpace&, const PhaseSpace&) = default;

 private:
  PhaseSpace(SpaceKind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}

  SpaceKind kind_;
  double lo_;
  double hi_;
};

/// Checked metric: throws std::domain_error if either point is outside.
double dist(const PhaseSpace& space, Point a, Point b);

/// Area of the disk of radius r centred in the unit square [-1/2, 1/2]^2,
/// clipped to the square. This is the torus ball volume for any r >= 0.
double clipped_disk_area(double r);

/// Exact area of the disk {(u, v) : (u - cx)^2 + (v - cy)^2 < r^2} inside the
/// rectangle [x0, x1] x [y0, y1].
double disk_rectangle_overlap(double cx, double cy, double r, double x0, double x1,
                              double y0, double y1);

}  // namespace hitlab

#endif  // HITLAB_PHASE_SPACE_HPP_
