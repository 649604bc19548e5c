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

#ifndef HITLAB_DENSITY_HPP_
#define HITLAB_DENSITY_HPP_

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "hitlab/map_system.hpp"
#include "hitlab/phase_space.hpp"

namespace hitlab {

/// A density value; `value` is +infinity where a closed form diverges.
struct DensityValue {
  double value = 0.0;
  /// Set when an empirical estimate rests on an empty bin.
  bool low_confidence = false;

  bool is_infinite() const noexcept { return std::isinf(value); }
};

/// Uniform-bin occupation counts over a phase space: `bins_per_axis` bins on
/// a one-dimensional space, bins_per_axis^2 cells on the torus.
class Histogram {
 public:
  Histogram(const PhaseSpace& space, std::size_t bins_per_axis);

  /// 2^14 bins in dimension 1, 2^10 per axis in dimension 2.
  static std::size_t default_bins(const PhaseSpace& space) noexcept;

  void add(Point p) noexcept { ++counts_[bin_index(p)]; ++total_; }
  void add_count(std::size_t bin, std::uint64_t count);

  /// Elementwise sum. Throws std::invalid_argument on a shape mismatch.
  void merge(const Histogram& other);

  std::size_t bin_index(Point p) const noexcept {
    const auto axis = [&](double v) {
      const double scaled = (v - lower_) * inv_width_;
      if (!(scaled > 0.0)) return std::size_t{0};
      const auto i = static_cast<std::size_t>(scaled);
      return i < bins_ ? i : bins_ - 1;
    };
    if (space_.dimension() == 1) return axis(p.x);
    return axis(p.y) * bins_ + axis(p.x);
  }

  const PhaseSpace& space() const noexcept { return space_; }
  std::size_t bins_per_axis() const noexcept { return bins_; }
  std::size_t bin_count() const noexcept { return counts_.size(); }
  double bin_width() const noexcept { return width_; }
  double bin_volume() const noexcept;
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t count(std::size_t bin) const { return counts_.at(bin); }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  PhaseSpace space_;
  std::size_t bins_;
  double lower_;
  double width_;
  double inv_width_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Provenance written alongside a persisted histogram.
struct HistogramProvenance {
  std::string family;
  std::uint64_t seed = 0;
  std::uint64_t orbit_length = 0;

  friend bool operator==(const HistogramProvenance&, const HistogramProvenance&) = default;
};

/// CSV persistence. Layout:
///
///   # family=<name>,kind=<circle|interval|torus2>,lo=<x>,hi=<x>,bins=<per axis>,
///     seed=<n>,orbit_length=<n>     (one line)
///   bin,count
///   <flat bin index>,<count>        (nonzero bins only, ascending)
void write_histogram_csv(std::ostream& out, const Histogram& hist,
                         const HistogramProvenance& provenance);
Histogram read_histogram_csv(std::istream& in, HistogramProvenance* provenance = nullptr);

/// Fills a histogram from `shards` independent sampled orbits of
/// iterates / shards points each (the remainder goes to the first shards).
/// The result does not depend on the thread count.
Histogram sample_histogram(const MapSystem& system, std::uint64_t iterates,
                           std::size_t bins_per_axis, std::uint64_t seed,
                           std::size_t shards = 64);

/// The invariant density of a map: closed form where one is known, otherwise
/// an empirical histogram. Immutable; copies share the histogram.
class DensityModel {
 public:
  enum class Kind { closed_form, empirical };

  /// Doubling, TorusDoubling and Quadratic(2). Throws std::invalid_argument
  /// for maps without a known closed form.
  static DensityModel closed_form(const MapSystem& system);
  static bool has_closed_form(const MapSystem& system) noexcept;
  static DensityModel empirical(Histogram histogram);

  Kind kind() const noexcept { return kind_; }
  const PhaseSpace& space() const noexcept { return space_; }
  const Histogram* histogram() const noexcept { return empirical_ ? &empirical_->hist : nullptr; }

  DensityValue density_at(Point zeta) const;

  /// mu(B_delta(zeta)). Closed forms integrate exactly; the empirical model
  /// weights boundary bins by their overlap volume with the ball.
  double ball_measure(Point zeta, double delta) const;

  /// mu(B_delta(zeta)) / (kappa delta^d) for each delta of a strictly
  /// decreasing positive grid.
  std::vector<double> lebesgue_ratio_curve(Point zeta, const std::vector<double>& deltas) const;

 private:
  struct Empirical {
    Histogram hist;
    std::vector<double> prefix;  // dimension 1 only: prefix[i] = sum of counts below bin i
  };

  DensityModel(Kind kind, PhaseSpace space) : kind_(kind), space_(space) {}

  double empirical_interval_mass(double a, double b) const;
  double empirical_disk_mass(Point zeta, double delta) const;

  Kind kind_;
  PhaseSpace space_;
  MapFamily family_ = MapFamily::doubling;
  std::shared_ptr<const Empirical> empirical_;
};

}  // namespace hitlab

#endif  // HITLAB_DENSITY_HPP_
