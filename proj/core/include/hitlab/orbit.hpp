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

#ifndef HITLAB_ORBIT_HPP_
#define HITLAB_ORBIT_HPP_

#include <array>
#include <cstdint>

#include "hitlab/map_system.hpp"
#include "hitlab/random.hpp"

namespace hitlab {

enum class IterationMode { float_iteration, bit_stream };

/// Bit-stream for the doubling families, float iteration otherwise.
IterationMode default_mode(const MapSystem& system) noexcept;

enum class StartDistribution {
  /// Lebesgue-uniform start followed by burn-in iterates.
  lebesgue_burn_in,
  /// Direct draw from the closed-form invariant density (doubling families
  /// and quadratic a=2 only).
  inverse_cdf,
};

inline constexpr std::uint64_t kDefaultBurnIn = 1000;

/// An exact coordinate num/den with num < den, used for exact dyadic orbits.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};

namespace detail {

// Binary expansion of a coordinate: `window` holds bits b_{t+1}..b_{t+64} of
// the current point, `buffer` the next `buffered` bits.
struct BitSource {
  enum class Kind : std::uint8_t { random, zeros, rational };

  std::uint64_t window = 0;
  std::uint64_t buffer = 0;
  unsigned buffered = 64;
  Kind kind = Kind::zeros;
  std::uint64_t remainder = 0;
  std::uint64_t denominator = 1;

  std::uint64_t draw_word(Engine& engine) noexcept {
    switch (kind) {
      case Kind::random:
        return engine();
      case Kind::zeros:
        return 0;
      case Kind::rational: {
        std::uint64_t word = 0;
        for (int i = 0; i < 64; ++i) {
          // 2r >= den, written so that 2r never overflows.
          const bool bit = remainder >= denominator - remainder;
          remainder = bit ? remainder - (denominator - remainder) : remainder << 1;
          word = (word << 1) | static_cast<std::uint64_t>(bit);
        }
        return word;
      }
    }
    return 0;
  }

  void shift(Engine& engine) noexcept {
    window = (window << 1) | (buffer >> 63);
    buffer <<= 1;
    if (--buffered == 0) {
      buffer = draw_word(engine);
      buffered = 64;
    }
  }

  /// The point truncated to its leading 53 bits.
  double value() const noexcept { return static_cast<double>(window >> 11) * 0x1.0p-53; }
};

}  // namespace detail

/// A cursor over one orbit x_0, x_1, ... of a MapSystem.
///
/// In bit-stream mode the doubling map is realised as the shift on a binary
/// expansion: sampled starts use an i.i.d. fair-bit sequence (an exact
/// stationary realisation), explicit starts use the exact expansion of the
/// given point. Float mode applies the map in double precision; sampled float
/// orbits that land on an exact floating-point fixed point are restarted from
/// a fresh Lebesgue draw and the event is counted in restarts().
///
/// Equal construction arguments produce bit-identical orbits. Single owner;
/// make one generator per task for parallel work.
class OrbitGenerator {
 public:
  static OrbitGenerator sampled(const MapSystem& system, std::uint64_t seed,
                                std::uint64_t burn_in = kDefaultBurnIn);
  static OrbitGenerator sampled(const MapSystem& system, std::uint64_t seed, IterationMode mode,
                                std::uint64_t burn_in,
                                StartDistribution start = StartDistribution::lebesgue_burn_in);

  static OrbitGenerator from_point(const MapSystem& system, Point x0);
  static OrbitGenerator from_point(const MapSystem& system, Point x0, IterationMode mode);

  /// Exact rational start for the bit-stream families; `y` is ignored on the
  /// circle.
  static OrbitGenerator from_rational(const MapSystem& system, Rational x, Rational y = {});

  const Point& current() const noexcept { return point_; }

  const Point& next() noexcept {
    ++time_;
    if (mode_ == IterationMode::bit_stream) {
      bits_[0].shift(engine_);
      point_.x = bits_[0].value();
      if (two_dimensional_) {
        bits_[1].shift(engine_);
        point_.y = bits_[1].value();
      }
    } else {
      const Point image = system_.apply(point_);
      if (guard_ && image == point_) {
        point_ = lebesgue_draw();
        ++restarts_;
      } else {
        point_ = image;
      }
    }
    return point_;
  }

  void advance(std::uint64_t steps) noexcept {
    for (std::uint64_t i = 0; i < steps; ++i) next();
  }

  /// Steps taken since the recorded orbit began (burn-in excluded).
  std::uint64_t time() const noexcept { return time_; }
  std::uint64_t restarts() const noexcept { return restarts_; }
  const MapSystem& system() const noexcept { return system_; }
  const PhaseSpace& space() const noexcept { return system_.space(); }
  IterationMode mode() const noexcept { return mode_; }

 private:
  OrbitGenerator(const MapSystem& system, IterationMode mode, std::uint64_t seed);

  Point lebesgue_draw() noexcept;
  void sync_point() noexcept;

  MapSystem system_;
  IterationMode mode_;
  bool two_dimensional_;
  bool guard_ = false;
  Point point_{};
  std::uint64_t time_ = 0;
  std::uint64_t restarts_ = 0;
  std::array<detail::BitSource, 2> bits_{};
  Engine engine_;
};

}  // namespace hitlab

#endif  // HITLAB_ORBIT_HPP_
