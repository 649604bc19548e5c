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
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hitlab/density.hpp"
#include "hitlab/map_system.hpp"
#include "hitlab/orbit.hpp"
#include "oracles/quadrature.hpp"

using namespace hitlab;

namespace {

const Histogram& quadratic_histogram() {
  static const Histogram h = sample_histogram(MapSystem::quadratic(2.0), 20'000'000, 1 << 12, 1);
  return h;
}

}  // namespace

TEST_SUITE("invariant-measure") {

TEST_CASE("closed-form density values") {
  const auto d = DensityModel::closed_form(MapSystem::doubling());
  CHECK(d.density_at({0.123}).value == 1.0);
  const auto q = DensityModel::closed_form(MapSystem::quadratic(2.0));
  CHECK(q.density_at({0.0}).value == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(q.density_at({1.0}).is_infinite());
  CHECK(q.density_at({-1.0}).is_infinite());
  CHECK_THROWS_AS(DensityModel::closed_form(MapSystem::quadratic(1.8)), std::invalid_argument);
  CHECK_THROWS_AS(q.density_at({1.5}), std::domain_error);
}

TEST_CASE("quadratic density at 0 against an orbit histogram") {
  const auto emp = DensityModel::empirical(quadratic_histogram());
  CHECK(emp.density_at({0.0}).value == doctest::Approx(1.0 / std::numbers::pi).epsilon(0.03));
  // Density in the outermost bin grows as bins refine.
  const auto coarse = DensityModel::empirical(sample_histogram(MapSystem::quadratic(2.0),
                                                               2'000'000, 1 << 6, 2));
  const auto fine = DensityModel::empirical(sample_histogram(MapSystem::quadratic(2.0),
                                                             2'000'000, 1 << 10, 2));
  CHECK(fine.density_at({0.99999}).value > 3.0 * coarse.density_at({0.99999}).value);
}

TEST_CASE("ball measure examples") {
  const auto d = DensityModel::closed_form(MapSystem::doubling());
  CHECK(d.ball_measure({0.37}, 0.005) == doctest::Approx(0.01));
  const auto q = DensityModel::closed_form(MapSystem::quadratic(2.0));
  CHECK(q.ball_measure({0.0}, 0.1) == doctest::Approx(oracle::arcsine_mass(-0.1, 0.1)).epsilon(1e-10));
  CHECK(q.ball_measure({0.0}, 0.1) == doctest::Approx(0.06376).epsilon(1e-4));
  CHECK(q.ball_measure({0.9}, 0.3) == doctest::Approx(oracle::arcsine_mass(0.6, 1.0)).epsilon(1e-10));
  const auto t = DensityModel::closed_form(MapSystem::torus_doubling());
  CHECK(t.ball_measure({0.2, 0.7}, 0.01) == doctest::Approx(M_PI * 1e-4));
  CHECK_THROWS_AS(d.ball_measure({0.5}, 0.0), std::domain_error);
  CHECK_THROWS_AS(d.ball_measure({0.5}, -1.0), std::domain_error);
}

TEST_CASE("empirical ball measure matches quadrature of the histogram density") {
  const auto emp = DensityModel::empirical(quadratic_histogram());
  CHECK(emp.ball_measure({0.0}, 0.1) == doctest::Approx(oracle::arcsine_mass(-0.1, 0.1)).epsilon(0.01));
  // The estimator integrates the step density exactly, partial bins included.
  const auto& h = quadratic_histogram();
  const auto step = [&](double x) {
    return static_cast<double>(h.count(h.bin_index({x}))) /
           (static_cast<double>(h.total()) * h.bin_width());
  };
  const double a = -0.123456, b = 0.2345678;
  CHECK(emp.ball_measure({(a + b) / 2}, (b - a) / 2) ==
        doctest::Approx(oracle::integrate(step, a, b, 200000)).epsilon(1e-5));
}

TEST_CASE("ball measure normalization and monotonicity") {
  const auto emp = DensityModel::empirical(quadratic_histogram());
  CHECK(emp.ball_measure({0.0}, 1.0) == doctest::Approx(1.0));
  CHECK(emp.ball_measure({0.3}, 5.0) == doctest::Approx(1.0));
  double prev = 0.0;
  for (double delta = 0.001; delta < 1.5; delta *= 1.3) {
    const double m = emp.ball_measure({0.3}, delta);
    CHECK(m >= prev);
    prev = m;
  }
  const auto circ = DensityModel::empirical(sample_histogram(MapSystem::doubling(), 100000, 256, 1));
  CHECK(circ.ball_measure({0.1}, 0.5) == doctest::Approx(1.0));
  const auto torus = DensityModel::empirical(sample_histogram(MapSystem::torus_doubling(), 200000, 32, 1));
  CHECK(torus.ball_measure({0.4, 0.6}, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("histogram ball additivity") {
  const auto emp = DensityModel::empirical(quadratic_histogram());
  // Balls [-0.3,-0.1) and [-0.1, 0.25) tile [-0.3, 0.25).
  const double left = emp.ball_measure({-0.2}, 0.1);
  const double right = emp.ball_measure({0.075}, 0.175);
  CHECK(left + right == doctest::Approx(emp.ball_measure({-0.025}, 0.275)).epsilon(1e-12));
  const auto circ = DensityModel::empirical(sample_histogram(MapSystem::doubling(), 200000, 512, 3));
  CHECK(circ.ball_measure({0.95}, 0.1) + circ.ball_measure({0.2}, 0.15) ==
        doctest::Approx(circ.ball_measure({0.1}, 0.25)).epsilon(1e-12));
}

TEST_CASE("torus empirical ball measure") {
  const auto torus = DensityModel::empirical(sample_histogram(MapSystem::torus_doubling(), 2'000'000, 64, 5));
  CHECK(torus.ball_measure({0.2, 0.7}, 0.1) == doctest::Approx(M_PI * 0.01).epsilon(0.03));
  // Wrapping across the corner.
  CHECK(torus.ball_measure({0.01, 0.99}, 0.1) == doctest::Approx(M_PI * 0.01).epsilon(0.03));
}

TEST_CASE("f-invariance of the histogram within multinomial bands") {
  const auto sys = MapSystem::quadratic(2.0);
  const std::size_t bins = 64;
  Histogram before(sys.space(), bins), after(sys.space(), bins);
  auto orbit = OrbitGenerator::sampled(sys, 17);
  for (int i = 0; i < 1'000'000; ++i) {
    const Point x = orbit.next();
    before.add(x);
    after.add(sys.apply(x));
  }
  const double n = static_cast<double>(before.total());
  int outside = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double p = static_cast<double>(before.count(b)) / n;
    const double q = static_cast<double>(after.count(b)) / n;
    // Successive points are dependent, so the band is widened by 2.
    const double sigma = std::sqrt(p * (1 - p) / n);
    outside += std::fabs(p - q) > 6 * sigma ? 1 : 0;
  }
  CHECK(outside == 0);
}

TEST_CASE("histogram merge and sampling do not depend on threads") {
  const auto sys = MapSystem::quadratic(2.0);
  setenv("HITLAB_THREADS", "1", 1);
  const auto one = sample_histogram(sys, 100000, 128, 9, 8);
  setenv("HITLAB_THREADS", "4", 1);
  const auto four = sample_histogram(sys, 100000, 128, 9, 8);
  unsetenv("HITLAB_THREADS");
  CHECK(one == four);
  CHECK(one.total() == 100000);
  Histogram a(sys.space(), 4), b(sys.space(), 4);
  a.add({-0.9});
  b.add({0.9});
  Histogram ab = a, ba = b;
  ab.merge(b);
  ba.merge(a);
  CHECK(ab == ba);
  CHECK_THROWS_AS(a.merge(Histogram(sys.space(), 8)), std::invalid_argument);
}

TEST_CASE("histogram csv round trip") {
  const auto h = sample_histogram(MapSystem::torus_doubling(), 10000, 16, 4);
  std::stringstream ss;
  write_histogram_csv(ss, h, {"torus-doubling", 4, 10000});
  HistogramProvenance p;
  const auto back = read_histogram_csv(ss, &p);
  CHECK(back == h);
  CHECK(p == HistogramProvenance{"torus-doubling", 4, 10000});
  std::stringstream bad("bin,count\n0,1\n");
  CHECK_THROWS(read_histogram_csv(bad));
}

TEST_CASE("empirical zero-count bin is low confidence") {
  Histogram h(PhaseSpace::circle(), 4);
  h.add({0.1});
  const auto m = DensityModel::empirical(h);
  const auto v = m.density_at({0.9});
  CHECK(v.value == 0.0);
  CHECK(v.low_confidence);
  CHECK_FALSE(m.density_at({0.1}).low_confidence);
}

TEST_CASE("lebesgue ratio curve") {
  const auto d = DensityModel::closed_form(MapSystem::doubling());
  for (const double r : d.lebesgue_ratio_curve({0.3}, {0.2, 0.01, 0.0001})) CHECK(r == doctest::Approx(1.0));
  const auto q = DensityModel::closed_form(MapSystem::quadratic(2.0));
  const auto at0 = q.lebesgue_ratio_curve({0.0}, {0.1, 0.01, 0.001});
  for (std::size_t i = 0; i < at0.size(); ++i) {
    const double delta = std::vector<double>{0.1, 0.01, 0.001}[i];
    CHECK(at0[i] == doctest::Approx(oracle::arcsine_mass(-delta, delta) / (2 * delta)).epsilon(1e-9));
  }
  CHECK(at0[0] == doctest::Approx(0.31884).epsilon(1e-4));
  CHECK(at0[2] == doctest::Approx(0.31831).epsilon(1e-4));
  const auto at1 = q.lebesgue_ratio_curve({1.0}, {0.1, 0.01, 0.001, 0.0001});
  for (std::size_t i = 1; i < at1.size(); ++i) CHECK(at1[i] > 2.5 * at1[i - 1]);
  CHECK_THROWS_AS(q.lebesgue_ratio_curve({0.0}, {0.01, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(q.lebesgue_ratio_curve({0.0}, {0.1, -0.1}), std::invalid_argument);
}

}  // TEST_SUITE
