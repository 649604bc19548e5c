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

#include "hitlab/orbit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hitlab {

IterationMode default_mode(const MapSystem& system) noexcept {
  return system.supports_bit_stream() ? IterationMode::bit_stream
                                      : IterationMode::float_iteration;
}

OrbitGenerator::OrbitGenerator(const MapSystem& system, IterationMode mode, std::uint64_t seed)
    : system_(system),
      mode_(mode),
      two_dimensional_(system.space().dimension() == 2),
      engine_(seed) {
  if (mode == IterationMode::bit_stream && !system.supports_bit_stream()) {
    throw std::invalid_argument("bit-stream mode requires a doubling-family map, got " +
                                system.name());
  }
}

OrbitGenerator OrbitGenerator::sampled(const MapSystem& system, std::uint64_t seed,
                                       std::uint64_t burn_in) {
  return sampled(system, seed, default_mode(system), burn_in);
}

OrbitGenerator OrbitGenerator::sampled(const MapSystem& system, std::uint64_t seed,
                                       IterationMode mode, std::uint64_t burn_in,
                                       StartDistribution start) {
  OrbitGenerator gen(system, mode, seed);
  if (mode == IterationMode::bit_stream) {
    for (auto& source : gen.bits_) {
      source.kind = detail::BitSource::Kind::random;
      source.window = gen.engine_();
      source.buffer = gen.engine_();
      source.buffered = 64;
    }
    gen.sync_point();
  } else {
    gen.guard_ = true;
    if (start == StartDistribution::inverse_cdf) {
      switch (system.family()) {
        case MapFamily::doubling:
        case MapFamily::torus_doubling:
          gen.point_ = gen.lebesgue_draw();
          break;
        case MapFamily::quadratic:
          if (system.parameter() != 2.0) {
            throw std::invalid_argument("inverse-cdf start needs a closed-form density");
          }
          gen.point_ = {std::sin(std::numbers::pi * (uniform01(gen.engine_) - 0.5)), 0.0};
          break;
        default:
          throw std::invalid_argument("inverse-cdf start needs a closed-form density");
      }
    } else {
      gen.point_ = gen.lebesgue_draw();
    }
  }
  gen.advance(burn_in);
  gen.time_ = 0;
  return gen;
}

OrbitGenerator OrbitGenerator::from_point(const MapSystem& system, Point x0) {
  return from_point(system, x0, default_mode(system));
}

OrbitGenerator OrbitGenerator::from_point(const MapSystem& system, Point x0, IterationMode mode) {
  system.space().require(x0);
  OrbitGenerator gen(system, mode, 0);
  if (mode == IterationMode::bit_stream) {
    const std::array<double, 2> coords{x0.x, x0.y};
    for (std::size_t i = 0; i < 2; ++i) {
      gen.bits_[i].kind = detail::BitSource::Kind::zeros;
      gen.bits_[i].window = static_cast<std::uint64_t>(coords[i] * 0x1.0p64);
      gen.bits_[i].buffer = 0;
    }
    gen.sync_point();
  } else {
    gen.point_ = x0;
  }
  return gen;
}

OrbitGenerator OrbitGenerator::from_rational(const MapSystem& system, Rational x, Rational y) {
  OrbitGenerator gen(system, IterationMode::bit_stream, 0);
  const std::array<Rational, 2> coords{x, y};
  for (std::size_t i = 0; i < 2; ++i) {
    const Rational r = coords[i];
    if (r.den == 0 || r.num >= r.den) {
      throw std::domain_error("rational start must satisfy 0 <= num < den");
    }
    auto& source = gen.bits_[i];
    source.kind = detail::BitSource::Kind::rational;
    source.remainder = r.num;
    source.denominator = r.den;
    source.window = source.draw_word(gen.engine_);
    source.buffer = source.draw_word(gen.engine_);
    source.buffered = 64;
  }
  gen.sync_point();
  return gen;
}

Point OrbitGenerator::lebesgue_draw() noexcept {
  const PhaseSpace& s = system_.space();
  if (s.kind() == SpaceKind::torus2) {
    const double a = uniform01(engine_);
    return {a, uniform01(engine_)};
  }
  return {s.lower() + (s.upper() - s.lower()) * uniform01(engine_), 0.0};
}

void OrbitGenerator::sync_point() noexcept {
  point_.x = bits_[0].value();
  point_.y = two_dimensional_ ? bits_[1].value() : 0.0;
}

}  // namespace hitlab
