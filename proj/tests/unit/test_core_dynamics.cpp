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

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "hitlab/expansivity.hpp"
#include "hitlab/map_system.hpp"
#include "hitlab/orbit.hpp"
#include "hitlab/phase_space.hpp"

using namespace hitlab;

TEST_SUITE("core-dynamics") {

TEST_CASE("phase space constants") {
  CHECK(PhaseSpace::circle().dimension() == 1);
  CHECK(PhaseSpace::circle().kappa() == 2.0);
  CHECK(PhaseSpace::interval(-1, 1).kappa() == 2.0);
  CHECK(PhaseSpace::torus2().dimension() == 2);
  CHECK(PhaseSpace::torus2().kappa() == doctest::Approx(M_PI));
  CHECK_THROWS_AS(PhaseSpace::interval(1, -1), std::invalid_argument);
}

TEST_CASE("iterate examples") {
  const auto d = MapSystem::doubling();
  CHECK(iterate(d, {0.3}, 1).x == doctest::Approx(0.6));
  CHECK(iterate(MapSystem::quadratic(2.0), {0.0}, 2).x == -1.0);
  CHECK(iterate(d, {7.0 / 16}, 3).x == 0.5);
  CHECK(iterate(d, {0.3}, 0).x == 0.3);
}

TEST_CASE("iterate rejects points outside the space") {
  CHECK_THROWS_AS(iterate(MapSystem::doubling(), {1.5}, 1), std::domain_error);
  CHECK_THROWS_AS(iterate(MapSystem::quadratic(2.0), {-1.01}, 1), std::domain_error);
  CHECK_THROWS_AS(iterate(MapSystem::torus_doubling(), {0.5, -0.1}, 1), std::domain_error);
}

TEST_CASE("family parameter validation") {
  CHECK_THROWS_AS(MapSystem::quadratic(0.0), std::invalid_argument);
  CHECK_THROWS_AS(MapSystem::quadratic(2.5), std::invalid_argument);
  CHECK_NOTHROW(MapSystem::quadratic(2.0));
  CHECK_THROWS_AS(MapSystem::intermittent(1.0), std::invalid_argument);
  CHECK_THROWS_AS(MapSystem::intermittent(0.0), std::invalid_argument);
  PerturbationParams folded;
  folded.epsilon = 5.0;
  CHECK_THROWS_AS(MapSystem::perturbed_expanding(folded), std::invalid_argument);
}

TEST_CASE("perturbed expanding validation on a dense grid") {
  const auto pe = MapSystem::perturbed_expanding(PerturbationParams{});
  const auto& v = pe.validation();
  CHECK(v.grid_points == 100000);
  CHECK(v.min_derivative > 0.0);
  CHECK(v.min_derivative >= 1.0 - pe.perturbation().declared_delta);
  CHECK(v.max_inverse_norm_on_v < 1.0 + pe.perturbation().declared_delta);
  // Outside V the map is the doubling map.
  const double x = 0.05;
  CHECK(pe.apply({x}).x == doctest::Approx(2 * x));
  CHECK(pe.derivative({x}) == doctest::Approx(2.0));
}

TEST_CASE("dist examples") {
  CHECK(dist(PhaseSpace::circle(), {0.1}, {0.9}) == doctest::Approx(0.2));
  CHECK(dist(PhaseSpace::interval(-1, 1), {-0.5}, {0.5}) == 1.0);
  CHECK(dist(PhaseSpace::torus2(), {0, 0}, {0.5, 0.5}) == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(dist(PhaseSpace::circle(), {0.1}, {1.2}), std::domain_error);
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& space : {PhaseSpace::circle(), PhaseSpace::interval(-1, 1), PhaseSpace::torus2()}) {
    const auto draw = [&] {
      if (space.kind() == SpaceKind::interval) return Point{2 * u(rng) - 1};
      if (space.kind() == SpaceKind::torus2) return Point{u(rng), u(rng)};
      return Point{u(rng)};
    };
    for (int i = 0; i < 10000; ++i) {
      const Point a = draw(), b = draw(), c = draw();
      CHECK(space.distance(a, a) == 0.0);
      CHECK(space.distance(a, b) == space.distance(b, a));
      CHECK(space.distance(a, c) <= space.distance(a, b) + space.distance(b, c) + 1e-15);
    }
  }
}

TEST_CASE("orbit determinism") {
  for (const auto& sys : {MapSystem::doubling(), MapSystem::torus_doubling(),
                          MapSystem::quadratic(2.0), MapSystem::intermittent(0.6)}) {
    auto a = OrbitGenerator::sampled(sys, 42);
    auto b = OrbitGenerator::sampled(sys, 42);
    auto c = OrbitGenerator::sampled(sys, 43);
    bool differs = false;
    for (int i = 0; i < 5000; ++i) {
      REQUIRE(a.next() == b.next());
      differs = differs || !(a.current() == c.next());
    }
    CHECK(differs);
  }
}

TEST_CASE("bit-stream mode is limited to dyadic families") {
  CHECK_THROWS_AS(OrbitGenerator::sampled(MapSystem::quadratic(2.0), 1, IterationMode::bit_stream, 0),
                  std::invalid_argument);
  CHECK(default_mode(MapSystem::doubling()) == IterationMode::bit_stream);
  CHECK(default_mode(MapSystem::quadratic(2.0)) == IterationMode::float_iteration);
}

TEST_CASE("bit-stream doubling never collapses") {
  auto orbit = OrbitGenerator::sampled(MapSystem::doubling(), 3);
  int zeros = 0;
  for (int i = 0; i < 100000; ++i) zeros += orbit.next().x == 0.0 ? 1 : 0;
  CHECK(zeros == 0);
  // Float iteration of 2x mod 1 dies within 60 steps without the restart guard.
  Point x{0.123456789};
  int steps = 0;
  while (x.x != 0.0 && steps < 100) x = MapSystem::doubling().apply(x), ++steps;
  CHECK(steps <= 60);
}

TEST_CASE("bit-stream agrees with float iteration while bits last") {
  auto orbit = OrbitGenerator::sampled(MapSystem::doubling(), 11);
  Point x = orbit.current();
  // x0 carries 53 significant bits; float doubling is exact until they are
  // shifted out.
  for (int i = 0; i < 40; ++i) {
    x = MapSystem::doubling().apply(x);
    const Point y = orbit.next();
    CHECK(std::fabs(x.x - y.x) <= std::ldexp(1.0, i + 1 - 53));
  }
}

TEST_CASE("bit-stream semigroup law is exact") {
  const auto sys = MapSystem::doubling();
  auto a = OrbitGenerator::sampled(sys, 5, IterationMode::bit_stream, 0);
  auto b = a;
  a.advance(37);
  a.advance(100);
  b.advance(137);
  CHECK(a.current() == b.current());
  CHECK(a.time() == 137);
}

TEST_CASE("rational starts are exact") {
  const auto sys = MapSystem::doubling();
  auto orbit = OrbitGenerator::from_rational(sys, {7, 16});
  CHECK(orbit.current().x == 7.0 / 16);
  CHECK(orbit.next().x == 7.0 / 8);
  CHECK(orbit.next().x == 3.0 / 4);
  CHECK(orbit.next().x == 1.0 / 2);
  auto third = OrbitGenerator::from_rational(sys, {1, 3});
  for (int i = 0; i < 1000; ++i) {
    const double v = third.next().x;
    CHECK((std::fabs(v - 2.0 / 3) < 1e-15 || std::fabs(v - 1.0 / 3) < 1e-15));
  }
  CHECK_THROWS_AS(OrbitGenerator::from_rational(sys, {3, 2}), std::domain_error);
}

TEST_CASE("log inverse derivative average examples") {
  CHECK(log_inverse_derivative_average(MapSystem::doubling(), {0.3}, 100) ==
        doctest::Approx(std::log(2.0)));
  CHECK(log_inverse_derivative_average(MapSystem::torus_doubling(), {0.3, 0.8}, 50) ==
        doctest::Approx(std::log(2.0)));
  // Quadratic(2) maps 0 to its critical value chain 0 -> 1 -> -1.
  CHECK(std::isinf(log_inverse_derivative_average(MapSystem::quadratic(2.0), {0.0}, 5)));
  CHECK(log_inverse_derivative_average(MapSystem::quadratic(2.0), {0.0}, 5) < 0);
}

TEST_CASE("expansion time examples") {
  const auto d = MapSystem::doubling();
  const auto e = expansion_time(d, {0.3}, std::log(2.0), 1000);
  REQUIRE_FALSE(e.is_exceeded());
  CHECK(e.value() == 1);
  CHECK(expansion_time(d, {0.3}, 3.0, 1000).is_exceeded());
  CHECK(expansion_time(d, {0.3}, 3.0, 1000).cap() == 1000);
}

TEST_CASE("expansion time matches a brute-force scan") {
  const auto pe = MapSystem::perturbed_expanding(PerturbationParams{});
  const double lambda = 1.2;  // threshold 0.6 sits inside the spread of short averages
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x0{std::uniform_real_distribution<double>(0, 1)(rng)};
    const std::uint64_t cap = 300;
    std::vector<double> avg(cap + 1);
    Point x = x0;
    double sum = 0;
    for (std::uint64_t n = 1; n <= cap; ++n) {
      sum += pe.log_expansion(x);
      avg[n] = sum / static_cast<double>(n);
      x = pe.apply(x);
    }
    std::uint64_t expected = 0;
    for (std::uint64_t N = 1; N <= cap && expected == 0; ++N) {
      bool ok = true;
      for (std::uint64_t n = N; n <= cap; ++n) ok = ok && avg[n] >= lambda / 2;
      if (ok) expected = N;
    }
    const auto got = expansion_time(pe, x0, lambda, cap);
    if (expected == 0) {
      CHECK(got.is_exceeded());
    } else {
      REQUIRE_FALSE(got.is_exceeded());
      CHECK(got.value() == expected);
    }
  }
}

TEST_CASE("perturbed expanding survey at reduced size") {
  const auto pe = MapSystem::perturbed_expanding(PerturbationParams{});
  const auto s = expansivity_survey(pe, 100, 2000, 0.1, 9);
  CHECK(s.averages.size() == 100);
  CHECK(s.fraction_at_least(0.05) >= 0.99);
  CHECK(s.fraction_finite() >= 0.99);
}

}  // TEST_SUITE
