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

#include "hitlab/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "hitlab/parallel.hpp"
#include "hitlab/random.hpp"

namespace hitlab {

PairExceedanceTable::PairExceedanceTable(double radius, std::size_t max_lag)
    : radius_(radius), joint_(max_lag + 1, 0) {
  if (max_lag == 0) throw std::invalid_argument("pair table needs at least one lag");
}

void PairExceedanceTable::add_segment(std::span<const std::uint8_t> exceed) {
  const std::size_t J = max_lag();
  if (exceed.size() <= J) {
    throw std::invalid_argument(
        fmt::format("segment of length {} is too short for {} lags", exceed.size(), J));
  }
  const std::size_t window = exceed.size() - J;
  std::vector<std::size_t> recent;  // exceedance positions within the last J steps
  for (std::size_t i = 0; i < exceed.size(); ++i) {
    if (!exceed[i]) continue;
    std::erase_if(recent, [&](std::size_t p) { return i - p > J; });
    for (const std::size_t p : recent) {
      if (p < window) ++joint_[i - p];
    }
    if (i < window) ++marginal_;
    recent.push_back(i);
  }
  window_ += window;
}

void PairExceedanceTable::merge(const PairExceedanceTable& other) {
  if (radius_ != other.radius_ || joint_.size() != other.joint_.size()) {
    throw std::invalid_argument("cannot merge pair tables of different level or lags");
  }
  window_ += other.window_;
  marginal_ += other.marginal_;
  for (std::size_t j = 0; j < joint_.size(); ++j) joint_[j] += other.joint_[j];
}

double PairExceedanceTable::marginal() const noexcept {
  return window_ == 0 ? 0.0 : static_cast<double>(marginal_) / static_cast<double>(window_);
}

double PairExceedanceTable::joint(std::size_t lag) const {
  if (lag == 0 || lag >= joint_.size()) {
    throw std::out_of_range(fmt::format("lag {} outside [1, {}]", lag, max_lag()));
  }
  return window_ == 0 ? 0.0 : static_cast<double>(joint_[lag]) / static_cast<double>(window_);
}

PairExceedanceTable build_pair_table(const MapSystem& system, Point zeta, double radius,
                                     std::size_t max_lag, std::uint64_t budget,
                                     std::uint64_t seed, std::size_t shards,
                                     std::uint64_t burn_in) {
  system.space().require(zeta);
  if (shards == 0) throw std::invalid_argument("build_pair_table: shards must be positive");
  std::vector<PairExceedanceTable> parts(shards, PairExceedanceTable(radius, max_lag));
  parallel_for(shards, [&](std::size_t k) {
    const std::uint64_t length = budget / shards + (k < budget % shards ? 1 : 0);
    OrbitGenerator orbit =
        OrbitGenerator::sampled(system, derive_seed(seed, streams::kPairTable, k), burn_in);
    const PhaseSpace& space = orbit.space();
    std::vector<std::uint8_t> exceed(length);
    for (std::uint64_t i = 0; i < length; ++i) {
      exceed[i] = space.distance(orbit.current(), zeta) < radius ? 1 : 0;
      orbit.next();
    }
    parts[k].add_segment(exceed);
  });
  for (std::size_t k = 1; k < shards; ++k) parts[0].merge(parts[k]);
  return std::move(parts[0]);
}

double dprime_sum(const PairExceedanceTable& table, std::uint64_t n, std::uint64_t k) {
  if (n == 0 || k == 0) throw std::invalid_argument("dprime_sum: n and k must be positive");
  const std::uint64_t lags = n / k;
  if (lags > table.max_lag()) {
    throw std::invalid_argument(fmt::format(
        "dprime_sum needs lags up to {} but the table stops at {} (short by {})", lags,
        table.max_lag(), lags - table.max_lag()));
  }
  double sum = 0.0;
  for (std::uint64_t j = 1; j <= lags; ++j) sum += table.joint(j);
  return static_cast<double>(n) * sum;
}

namespace {

std::uint64_t ring_end(const IntervalRing& A) {
  return static_cast<std::uint64_t>(std::ceil(A.supremum()));
}

// True when no index of A (shifted by t) is an exceedance.
bool clear_on(const std::vector<std::uint8_t>& exceed, const IntervalRing& A, std::uint64_t t) {
  for (const auto& [a, b] : A.intervals()) {
    const auto lo = static_cast<std::uint64_t>(std::ceil(a)) + t;
    const auto hi = static_cast<std::uint64_t>(std::ceil(b)) + t;
    for (std::uint64_t j = lo; j < hi; ++j) {
      if (exceed[j]) return false;
    }
  }
  return true;
}

}  // namespace

D3Estimate d3_gamma(const ExceedancePath& paths, std::uint64_t t, const IntervalRing& A,
                    std::uint64_t m) {
  if (m < 2) throw std::invalid_argument("d3_gamma needs at least 2 samples");
  const std::uint64_t length = std::max<std::uint64_t>(1, ring_end(A) + t);
  std::vector<std::uint8_t> a(m), b(m), c(m);
  std::vector<std::uint8_t> exceed(length);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(exceed.begin(), exceed.end(), 0);
    paths(i, exceed);
    a[i] = exceed[0];
    b[i] = clear_on(exceed, A, t) ? 1 : 0;
    c[i] = clear_on(exceed, A, 0) ? 1 : 0;
  }
  const double mm = static_cast<double>(m);
  double sa = 0.0, sab = 0.0, sc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sa += a[i];
    sab += a[i] * b[i];
    sc += c[i];
  }
  D3Estimate est;
  est.samples = m;
  est.p_exceed = sa / mm;
  est.p_clear = sc / mm;
  est.gamma = sab / mm - est.p_exceed * est.p_clear;
  // Influence function of mean(ab) - mean(a) mean(c).
  double mean_phi = 0.0;
  std::vector<double> phi(m);
  for (std::size_t i = 0; i < m; ++i) {
    phi[i] = a[i] * b[i] - est.p_clear * a[i] - est.p_exceed * c[i];
    mean_phi += phi[i];
  }
  mean_phi /= mm;
  double var = 0.0;
  for (const double v : phi) var += (v - mean_phi) * (v - mean_phi);
  est.std_error = std::sqrt(var / (mm - 1.0) / mm);
  return est;
}

D3Estimate d3_gamma(const MapSystem& system, const LevelSequence& seq, std::uint64_t n, double y,
                    std::uint64_t t, const IntervalRing& A, std::uint64_t m, std::uint64_t seed,
                    std::uint64_t burn_in) {
  const ObservableSpec& spec = seq.spec();
  const double u = seq.level(n, y);
  // Each sample's path depends only on its own seed, so paths can be
  // generated up front in parallel.
  const std::uint64_t length = std::max<std::uint64_t>(1, ring_end(A) + t);
  std::vector<std::uint8_t> all(m * length);
  parallel_for(m, [&](std::size_t i) {
    OrbitGenerator orbit =
        OrbitGenerator::sampled(system, derive_seed(seed, streams::kD3, i), burn_in);
    std::uint8_t* row = all.data() + i * length;
    for (std::uint64_t j = 0; j < length; ++j) {
      row[j] = spec.evaluate(orbit.current()) > u ? 1 : 0;
      orbit.next();
    }
  });
  return d3_gamma(
      [&](std::size_t i, std::vector<std::uint8_t>& exceed) {
        std::copy_n(all.begin() + static_cast<std::ptrdiff_t>(i * length), length, exceed.begin());
      },
      t, A, m);
}

MixingResult uniform_mixing_gamma(std::span<const std::uint8_t> labels, std::uint64_t n,
                                  std::size_t k_cap, std::size_t l_cap) {
  if (k_cap == 0 || l_cap == 0 || k_cap > 8 || l_cap > 8) {
    throw std::invalid_argument("uniform_mixing_gamma: caps must be in [1, 8]");
  }
  MixingResult result;
  std::vector<double> joint;
  std::vector<double> pa, pb;
  for (std::size_t k = 1; k <= k_cap; ++k) {
    for (std::size_t l = 1; l <= l_cap; ++l) {
      const std::uint64_t span_len = n + k + l;
      if (labels.size() < span_len + 1) {
        throw std::invalid_argument(fmt::format(
            "label sequence of length {} too short for n={}, k={}, l={}", labels.size(), n, k, l));
      }
      const std::size_t na = std::size_t{1} << k;
      const std::size_t nb = std::size_t{1} << l;
      joint.assign(na * nb, 0.0);
      pa.assign(na, 0.0);
      pb.assign(nb, 0.0);
      const std::uint64_t windows = labels.size() - span_len + 1;
      for (std::uint64_t i = 0; i < windows; ++i) {
        std::size_t wa = 0, wb = 0;
        for (std::size_t q = 0; q < k; ++q) wa = (wa << 1) | labels[i + q];
        for (std::size_t q = 0; q < l; ++q) wb = (wb << 1) | labels[i + n + k + q];
        joint[wa * nb + wb] += 1.0;
      }
      const double w = static_cast<double>(windows);
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
          joint[a * nb + b] /= w;
          pa[a] += joint[a * nb + b];
          pb[b] += joint[a * nb + b];
        }
      }
      for (const double v : pa) result.skipped += v == 0.0 ? 1 : 0;
      for (const double v : pb) result.skipped += v == 0.0 ? 1 : 0;
      // For one atom on either side, the best union on the other side takes
      // all positive (or all negative) deviations.
      const auto consider = [&](double pos, double neg) {
        const double g = std::max(pos, -neg);
        if (g > result.gamma) {
          result.gamma = g;
          result.best_k = k;
          result.best_l = l;
        }
      };
      for (std::size_t a = 0; a < na; ++a) {
        if (pa[a] == 0.0) continue;
        double pos = 0.0, neg = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
          const double dev = joint[a * nb + b] - pa[a] * pb[b];
          (dev > 0.0 ? pos : neg) += dev;
        }
        consider(pos, neg);
      }
      for (std::size_t b = 0; b < nb; ++b) {
        if (pb[b] == 0.0) continue;
        double pos = 0.0, neg = 0.0;
        for (std::size_t a = 0; a < na; ++a) {
          const double dev = joint[a * nb + b] - pa[a] * pb[b];
          (dev > 0.0 ? pos : neg) += dev;
        }
        consider(pos, neg);
      }
    }
  }
  return result;
}

MixingResult uniform_mixing_gamma(const MapSystem& system, Point zeta, double delta,
                                  std::uint64_t n, std::size_t k_cap, std::size_t l_cap,
                                  std::uint64_t length, std::uint64_t seed,
                                  std::uint64_t burn_in) {
  system.space().require(zeta);
  OrbitGenerator orbit =
      OrbitGenerator::sampled(system, derive_seed(seed, streams::kMixing, 0), burn_in);
  std::vector<std::uint8_t> labels(length);
  for (auto& s : labels) {
    s = orbit.space().distance(orbit.current(), zeta) < delta ? 1 : 0;
    orbit.next();
  }
  return uniform_mixing_gamma(labels, n, k_cap, l_cap);
}

std::vector<double> correlation_decay(const MapSystem& system,
                                      const std::function<double(Point)>& phi,
                                      const std::function<double(Point)>& psi,
                                      const std::vector<std::uint64_t>& t_grid,
                                      std::uint64_t length, std::uint64_t seed,
                                      std::uint64_t burn_in) {
  if (length == 0) throw std::invalid_argument("correlation_decay: length must be positive");
  const std::uint64_t t_max = t_grid.empty() ? 0 : *std::max_element(t_grid.begin(), t_grid.end());
  OrbitGenerator orbit =
      OrbitGenerator::sampled(system, derive_seed(seed, streams::kCorrelation, 0), burn_in);
  std::vector<double> f(length), g(length + t_max);
  for (std::uint64_t i = 0; i < length + t_max; ++i) {
    if (i < length) f[i] = phi(orbit.current());
    g[i] = psi(orbit.current());
    orbit.next();
  }
  double mean_f = 0.0;
  for (const double v : f) mean_f += v;
  mean_f /= static_cast<double>(length);
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (const std::uint64_t t : t_grid) {
    double cross = 0.0, mean_g = 0.0;
    for (std::uint64_t i = 0; i < length; ++i) {
      cross += f[i] * g[i + t];
      mean_g += g[i + t];
    }
    cross /= static_cast<double>(length);
    mean_g /= static_cast<double>(length);
    out.push_back(std::fabs(cross - mean_f * mean_g));
  }
  return out;
}

}  // namespace hitlab
