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

#include "hitlab/phase_space.hpp"

#include <array>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace hitlab {

PhaseSpace PhaseSpace::interval(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument(fmt::format("interval [{}, {}] is empty or unbounded", lo, hi));
  }
  return PhaseSpace(SpaceKind::interval, lo, hi);
}

double PhaseSpace::kappa() const noexcept {
  return kind_ == SpaceKind::torus2 ? std::numbers::pi : 2.0;
}

double PhaseSpace::kappa_at(Point center) const noexcept {
  if (kind_ == SpaceKind::interval && (center.x == lo_ || center.x == hi_)) return 1.0;
  return kappa();
}

bool PhaseSpace::contains(Point p) const noexcept {
  switch (kind_) {
    case SpaceKind::circle:
      return p.x >= 0.0 && p.x < 1.0;
    case SpaceKind::interval:
      return p.x >= lo_ && p.x <= hi_;
    case SpaceKind::torus2:
      return p.x >= 0.0 && p.x < 1.0 && p.y >= 0.0 && p.y < 1.0;
  }
  return false;
}

void PhaseSpace::require(Point p) const {
  if (!contains(p)) {
    if (dimension() == 2) {
      throw std::domain_error(fmt::format("point ({}, {}) is outside {}", p.x, p.y, describe()));
    }
    throw std::domain_error(fmt::format("point {} is outside {}", p.x, describe()));
  }
}

double PhaseSpace::lebesgue_ball(Point center, double radius) const {
  if (!(radius > 0.0)) throw std::domain_error("ball radius must be positive");
  switch (kind_) {
    case SpaceKind::circle:
      return std::min(2.0 * radius, 1.0);
    case SpaceKind::interval:
      return std::max(0.0, std::min(hi_, center.x + radius) - std::max(lo_, center.x - radius));
    case SpaceKind::torus2:
      return clipped_disk_area(radius);
  }
  return 0.0;
}

std::string PhaseSpace::describe() const {
  switch (kind_) {
    case SpaceKind::circle:
      return "circle [0,1)";
    case SpaceKind::interval:
      return fmt::format("interval [{}, {}]", lo_, hi_);
    case SpaceKind::torus2:
      return "torus [0,1)^2";
  }
  return "?";
}

double dist(const PhaseSpace& space, Point a, Point b) {
  space.require(a);
  space.require(b);
  return space.distance(a, b);
}

double clipped_disk_area(double r) {
  if (r <= 0.0) return 0.0;
  if (r <= 0.5) return std::numbers::pi * r * r;
  if (r * r >= 0.5) return 1.0;
  const double segment = r * r * std::acos(0.5 / r) - 0.5 * std::sqrt(r * r - 0.25);
  return std::numbers::pi * r * r - 4.0 * segment;
}

namespace {

// Antiderivative of sqrt(r^2 - u^2).
double half_disk_primitive(double u, double r) {
  const double s = std::clamp(u / r, -1.0, 1.0);
  return 0.5 * (u * std::sqrt(std::max(0.0, r * r - u * u)) + r * r * std::asin(s));
}

}  // namespace

double disk_rectangle_overlap(double cx, double cy, double r, double x0, double x1,
                              double y0, double y1) {
  if (r <= 0.0 || x1 <= x0 || y1 <= y0) return 0.0;
  x0 -= cx;
  x1 -= cx;
  y0 -= cy;
  y1 -= cy;
  const double a = std::max(x0, -r);
  const double b = std::min(x1, r);
  if (a >= b) return 0.0;

  std::array<double, 8> cuts{};
  std::size_t ncuts = 0;
  cuts[ncuts++] = a;
  cuts[ncuts++] = b;
  for (const double yy : {y0, y1}) {
    if (std::fabs(yy) < r) {
      const double u = std::sqrt(r * r - yy * yy);
      for (const double c : {-u, u}) {
        if (c > a && c < b) cuts[ncuts++] = c;
      }
    }
  }
  std::sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(ncuts));

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < ncuts; ++i) {
    const double p = cuts[i];
    const double q = cuts[i + 1];
    if (q <= p) continue;
    const double mid = 0.5 * (p + q);
    const double h = std::sqrt(std::max(0.0, r * r - mid * mid));
    const bool top_is_arc = h < y1;
    const bool bottom_is_arc = -h > y0;
    const double top = top_is_arc ? h : y1;
    const double bottom = bottom_is_arc ? -h : y0;
    if (top <= bottom) continue;
    const double arc = half_disk_primitive(q, r) - half_disk_primitive(p, r);
    double piece = 0.0;
    piece += top_is_arc ? arc : y1 * (q - p);
    piece -= bottom_is_arc ? -arc : y0 * (q - p);
    area += piece;
  }
  return std::max(0.0, area);
}

}  // namespace hitlab
