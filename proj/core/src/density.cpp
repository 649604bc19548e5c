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

#include "hitlab/density.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "hitlab/orbit.hpp"
#include "hitlab/parallel.hpp"
#include "hitlab/random.hpp"

namespace hitlab {

Histogram::Histogram(const PhaseSpace& space, std::size_t bins_per_axis)
    : space_(space), bins_(bins_per_axis), lower_(space.lower()) {
  if (bins_per_axis == 0) throw std::invalid_argument("histogram needs at least one bin");
  width_ = (space.upper() - space.lower()) / static_cast<double>(bins_);
  inv_width_ = static_cast<double>(bins_) / (space.upper() - space.lower());
  const std::size_t cells = space.dimension() == 2 ? bins_ * bins_ : bins_;
  counts_.assign(cells, 0);
}

std::size_t Histogram::default_bins(const PhaseSpace& space) noexcept {
  return space.dimension() == 2 ? std::size_t{1} << 10 : std::size_t{1} << 14;
}

double Histogram::bin_volume() const noexcept {
  return space_.dimension() == 2 ? width_ * width_ : width_;
}

void Histogram::add_count(std::size_t bin, std::uint64_t count) {
  if (bin >= counts_.size()) {
    throw std::out_of_range(fmt::format("bin {} out of range [0, {})", bin, counts_.size()));
  }
  counts_[bin] += count;
  total_ += count;
}

void Histogram::merge(const Histogram& other) {
  if (!(space_ == other.space_) || bins_ != other.bins_) {
    throw std::invalid_argument("cannot merge histograms of different shape");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

namespace {

const char* kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::circle:
      return "circle";
    case SpaceKind::interval:
      return "interval";
    case SpaceKind::torus2:
      return "torus2";
  }
  return "?";
}

}  // namespace

void write_histogram_csv(std::ostream& out, const Histogram& hist,
                         const HistogramProvenance& provenance) {
  const PhaseSpace& s = hist.space();
  out << fmt::format("# family={},kind={},lo={},hi={},bins={},seed={},orbit_length={}\n",
                     provenance.family, kind_name(s.kind()), s.lower(), s.upper(),
                     hist.bins_per_axis(), provenance.seed, provenance.orbit_length);
  out << "bin,count\n";
  const auto& counts = hist.counts();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) out << fmt::format("{},{}\n", i, counts[i]);
  }
}

Histogram read_histogram_csv(std::istream& in, HistogramProvenance* provenance) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw std::runtime_error("histogram csv: missing '# ' header line");
  }
  std::map<std::string, std::string> fields;
  std::stringstream header(line.substr(2));
  std::string item;
  while (std::getline(header, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("histogram csv: bad header field " + item);
    fields[item.substr(0, eq)] = item.substr(eq + 1);
  }
  const auto field = [&](const char* key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) throw std::runtime_error(std::string("histogram csv: missing ") + key);
    return it->second;
  };
  const std::string& kind = field("kind");
  PhaseSpace space = PhaseSpace::circle();
  if (kind == "interval") {
    space = PhaseSpace::interval(std::stod(field("lo")), std::stod(field("hi")));
  } else if (kind == "torus2") {
    space = PhaseSpace::torus2();
  } else if (kind != "circle") {
    throw std::runtime_error("histogram csv: unknown kind " + kind);
  }
  Histogram hist(space, std::stoull(field("bins")));
  if (provenance) {
    provenance->family = field("family");
    provenance->seed = std::stoull(field("seed"));
    provenance->orbit_length = std::stoull(field("orbit_length"));
  }
  if (!std::getline(in, line) || line != "bin,count") {
    throw std::runtime_error("histogram csv: missing 'bin,count' column header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("histogram csv: bad row " + line);
    hist.add_count(std::stoull(line.substr(0, comma)), std::stoull(line.substr(comma + 1)));
  }
  return hist;
}

Histogram sample_histogram(const MapSystem& system, std::uint64_t iterates,
                           std::size_t bins_per_axis, std::uint64_t seed, std::size_t shards) {
  if (shards == 0) throw std::invalid_argument("sample_histogram: shards must be positive");
  const std::size_t slots = std::min<std::size_t>(default_thread_count(), shards);
  std::vector<Histogram> partial(slots, Histogram(system.space(), bins_per_axis));
  // Integer counts make the merged result independent of how shards are
  // distributed over slots.
  parallel_for(slots, [&](std::size_t slot) {
    for (std::size_t shard = slot; shard < shards; shard += slots) {
      std::uint64_t length = iterates / shards + (shard < iterates % shards ? 1 : 0);
      OrbitGenerator orbit =
          OrbitGenerator::sampled(system, derive_seed(seed, streams::kHistogram, shard));
      Histogram& h = partial[slot];
      for (; length > 0; --length) {
        h.add(orbit.current());
        orbit.next();
      }
    }
  }, static_cast<unsigned>(slots));
  for (std::size_t i = 1; i < slots; ++i) partial[0].merge(partial[i]);
  return std::move(partial[0]);
}

bool DensityModel::has_closed_form(const MapSystem& system) noexcept {
  switch (system.family()) {
    case MapFamily::doubling:
    case MapFamily::torus_doubling:
      return true;
    case MapFamily::quadratic:
      return system.parameter() == 2.0;
    default:
      return false;
  }
}

DensityModel DensityModel::closed_form(const MapSystem& system) {
  if (!has_closed_form(system)) {
    throw std::invalid_argument("no closed-form invariant density for " + system.name());
  }
  DensityModel model(Kind::closed_form, system.space());
  model.family_ = system.family();
  return model;
}

DensityModel DensityModel::empirical(Histogram histogram) {
  if (histogram.total() == 0) throw std::invalid_argument("empirical density needs samples");
  DensityModel model(Kind::empirical, histogram.space());
  auto data = std::make_shared<Empirical>(Empirical{std::move(histogram), {}});
  if (data->hist.space().dimension() == 1) {
    const auto& counts = data->hist.counts();
    data->prefix.resize(counts.size() + 1, 0.0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      data->prefix[i + 1] = data->prefix[i] + static_cast<double>(counts[i]);
    }
  }
  model.empirical_ = std::move(data);
  return model;
}

DensityValue DensityModel::density_at(Point zeta) const {
  space_.require(zeta);
  if (kind_ == Kind::closed_form) {
    if (family_ == MapFamily::quadratic) {
      const double s = 1.0 - zeta.x * zeta.x;
      if (s <= 0.0) return {std::numeric_limits<double>::infinity(), false};
      return {1.0 / (std::numbers::pi * std::sqrt(s)), false};
    }
    return {1.0, false};
  }
  const Histogram& h = empirical_->hist;
  const std::uint64_t c = h.counts()[h.bin_index(zeta)];
  const double value =
      static_cast<double>(c) / (static_cast<double>(h.total()) * h.bin_volume());
  return {value, c == 0};
}

double DensityModel::empirical_interval_mass(double a, double b) const {
  const Histogram& h = empirical_->hist;
  const auto& counts = h.counts();
  const auto& prefix = empirical_->prefix;
  const double lo = space_.lower();
  const double hi = space_.upper();
  const auto cumulative = [&](double x) {
    x = std::clamp(x, lo, hi);
    const double s = (x - lo) / h.bin_width();
    auto i = static_cast<std::size_t>(s);
    if (i >= counts.size()) return prefix.back();
    return prefix[i] + (s - static_cast<double>(i)) * static_cast<double>(counts[i]);
  };
  return (cumulative(b) - cumulative(a)) / static_cast<double>(h.total());
}

double DensityModel::empirical_disk_mass(Point zeta, double delta) const {
  const Histogram& h = empirical_->hist;
  const auto n = static_cast<long long>(h.bins_per_axis());
  const double w = h.bin_width();
  const double r = std::min(delta, 0.5 * std::numbers::sqrt2);
  // The torus ball is the disk clipped to the unit square centred at zeta.
  const double sx0 = zeta.x - 0.5, sx1 = zeta.x + 0.5;
  const double sy0 = zeta.y - 0.5, sy1 = zeta.y + 0.5;
  const auto first = [&](double v) { return static_cast<long long>(std::floor(v / w)); };
  const long long ix0 = first(std::max(zeta.x - r, sx0));
  const long long ix1 = first(std::min(zeta.x + r, sx1));
  const long long iy0 = first(std::max(zeta.y - r, sy0));
  const long long iy1 = first(std::min(zeta.y + r, sy1));
  const double cell = w * w;
  double mass = 0.0;
  for (long long iy = iy0; iy <= iy1; ++iy) {
    const double y0 = std::max(static_cast<double>(iy) * w, sy0);
    const double y1 = std::min(static_cast<double>(iy + 1) * w, sy1);
    const auto row = static_cast<std::size_t>(((iy % n) + n) % n);
    for (long long ix = ix0; ix <= ix1; ++ix) {
      const double x0 = std::max(static_cast<double>(ix) * w, sx0);
      const double x1 = std::min(static_cast<double>(ix + 1) * w, sx1);
      const auto col = static_cast<std::size_t>(((ix % n) + n) % n);
      const std::uint64_t c = h.counts()[row * h.bins_per_axis() + col];
      if (c == 0) continue;
      const double overlap = disk_rectangle_overlap(zeta.x, zeta.y, r, x0, x1, y0, y1);
      mass += static_cast<double>(c) * (overlap / cell);
    }
  }
  return mass / static_cast<double>(h.total());
}

double DensityModel::ball_measure(Point zeta, double delta) const {
  if (!(delta > 0.0)) throw std::domain_error("ball_measure: delta must be positive");
  space_.require(zeta);
  if (kind_ == Kind::closed_form) {
    if (family_ == MapFamily::quadratic) {
      const double hi = std::min(zeta.x + delta, 1.0);
      const double lo = std::max(zeta.x - delta, -1.0);
      return (std::asin(hi) - std::asin(lo)) / std::numbers::pi;
    }
    return space_.lebesgue_ball(zeta, delta);
  }
  switch (space_.kind()) {
    case SpaceKind::interval:
      return empirical_interval_mass(zeta.x - delta, zeta.x + delta);
    case SpaceKind::circle: {
      if (delta >= 0.5) return 1.0;
      const double a = zeta.x - delta;
      const double b = zeta.x + delta;
      if (a < 0.0) return empirical_interval_mass(a + 1.0, 1.0) + empirical_interval_mass(0.0, b);
      if (b > 1.0) return empirical_interval_mass(a, 1.0) + empirical_interval_mass(0.0, b - 1.0);
      return empirical_interval_mass(a, b);
    }
    case SpaceKind::torus2:
      return empirical_disk_mass(zeta, delta);
  }
  return 0.0;
}

std::vector<double> DensityModel::lebesgue_ratio_curve(Point zeta,
                                                       const std::vector<double>& deltas) const {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1]))) {
      throw std::invalid_argument("lebesgue_ratio_curve: grid must be positive and decreasing");
    }
  }
  const double kappa = space_.kappa_at(zeta);
  const int d = space_.dimension();
  std::vector<double> ratios;
  ratios.reserve(deltas.size());
  for (const double delta : deltas) {
    ratios.push_back(ball_measure(zeta, delta) / (kappa * std::pow(delta, d)));
  }
  return ratios;
}

}  // namespace hitlab
