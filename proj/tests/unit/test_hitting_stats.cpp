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

#include "hitlab/density.hpp"
#include "hitlab/extreme_stats.hpp"
#include "hitlab/hitting.hpp"
#include "hitlab/map_system.hpp"
#include "hitlab/observable.hpp"
#include "hitlab/orbit.hpp"
#include "oracles/dyadic_chain.hpp"

using namespace hitlab;

namespace {

const MapSystem kDoubling = MapSystem::doubling();
const DensityModel kLebesgue = DensityModel::closed_form(kDoubling);

std::vector<double> t_grid(double step, double hi) {
  std::vector<double> ts;
  for (int i = 0; i * step <= hi + 1e-12; ++i) ts.push_back(i * step);
  return ts;
}

}  // namespace

TEST_SUITE("hitting-stats") {

TEST_CASE("first hitting time examples") {
  const auto h = first_hitting_time(kDoubling, {7.0 / 16}, {0.5}, 0.1, 10);
  REQUIRE_FALSE(h.is_exceeded());
  CHECK(h.value() == 3);
  auto third = OrbitGenerator::from_rational(kDoubling, {1, 3});
  const auto never = first_hitting_time(third, {0.0}, 0.1, 1'000'000);
  CHECK(never.is_exceeded());
  CHECK(never.cap() == 1'000'000);
  // dist(f x, zeta) < delta gives 1.
  CHECK(first_hitting_time(kDoubling, {0.2}, {0.41}, 0.05, 5).value() == 1);
  // The start itself never counts.
  CHECK(first_hitting_time(kDoubling, {0.41}, {0.41}, 0.001, 3).is_exceeded());
}

TEST_CASE("waiting times") {
  const auto w = waiting_times(kDoubling, {7.0 / 16}, {0.5}, 0.1, 1, 10);
  CHECK(w.size() == 1);
  CHECK(w[0] == first_hitting_time(kDoubling, {7.0 / 16}, {0.5}, 0.1, 10));
  // 1/3 has period 2 and lies in its own ball.
  const auto p = waiting_times(kDoubling, {1.0 / 3}, {1.0 / 3}, 0.01, 6, 100);
  REQUIRE(p.size() == 6);
  for (const auto& t : p) CHECK(t.value() == 2);
  // Exceeded stops the list.
  const auto e = waiting_times(kDoubling, {1.0 / 3}, {0.9}, 0.01, 4, 50);
  REQUIRE(e.size() == 1);
  CHECK(e[0].is_exceeded());
}

TEST_CASE("shift identity for hitting times") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    auto orbit = OrbitGenerator::sampled(kDoubling, rng());
    auto probe = orbit;
    const auto r = first_hitting_time(probe, {0.37}, 0.01, 100000);
    if (r.is_exceeded() || r.value() < 2) continue;
    const std::uint64_t k = 1 + rng() % (r.value() - 1);
    auto shifted = orbit;
    shifted.advance(k);
    const auto rest = first_hitting_time(shifted, {0.37}, 0.01, 100000);
    REQUIRE_FALSE(rest.is_exceeded());
    CHECK(r.value() == k + rest.value());
  }
}

TEST_CASE("default cap") {
  CHECK(default_cap(0.01) == 5000);
  CHECK(default_cap(1.0) == 50);
  CHECK_THROWS_AS(default_cap(0.0), std::invalid_argument);
}

TEST_CASE("hts and rts at t = 0 are exactly 1") {
  const auto h = hts_ecdf(kDoubling, kLebesgue, {0.37}, 0.005, {0.0, 1.0}, 500, 5000, 3);
  CHECK(h[0].survival == 1.0);
  const auto r = rts_ecdf(kDoubling, kLebesgue, {0.37}, 0.005, {0.0, 1.0}, 500, 5000, 3);
  CHECK(r[0].survival == 1.0);
}

TEST_CASE("cap too small is rejected before sampling") {
  CHECK_THROWS_AS(hts_ecdf(kDoubling, kLebesgue, {0.37}, 0.005, {0.0, 5.0}, 500, 100, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(rts_ecdf(kDoubling, kLebesgue, {0.37}, 0.005, {0.0, 5.0}, 500, 100, 3),
                  std::invalid_argument);
}

TEST_CASE("return sample budget error names the visits found") {
  HitOptions opt;
  opt.budget = 1000;
  try {
    return_sample(kDoubling, kLebesgue, {0.37}, 0.0005, 500, 100000, 4, opt);
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("found") != std::string::npos);
  }
}

TEST_CASE("hts at a generic center is exponential") {
  const auto curve = hts_ecdf(kDoubling, kLebesgue, {0.37}, 0.0005, {1.0}, 10000, 50000, 5);
  CHECK(std::fabs(curve[0].survival - std::exp(-1.0)) <= 0.02);
  const auto r = rts_ecdf(kDoubling, kLebesgue, {0.37}, 0.0005, t_grid(0.5, 5.0), 10000, 50000, 5);
  for (const auto& p : r) CHECK(std::fabs(p.survival - std::exp(-p.t)) <= 0.03);
}

TEST_CASE("hts survival is nonincreasing") {
  const auto curve = hts_ecdf(kDoubling, kLebesgue, {0.61}, 0.002, t_grid(0.1, 4.0), 3000, 20000, 6);
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].survival <= curve[i - 1].survival);
}

TEST_CASE("hts at the fixed point matches the dyadic chain") {
  const double delta = std::ldexp(1.0, -14);
  const double mu = kLebesgue.ball_measure({0.0}, delta);
  CHECK(mu == std::ldexp(1.0, -13));
  const auto ts = t_grid(0.25, 4.0);
  const auto curve = hts_ecdf(kDoubling, kLebesgue, {0.0}, delta, ts, 10000, default_cap(mu), 7);
  std::vector<SurvivalPoint> exact;
  for (const double t : ts) {
    const auto N = static_cast<std::uint64_t>(std::ceil(t / mu));
    exact.push_back({t, oracle::hitting_survival(14, N), 0, 0});
  }
  CHECK(exact[4].survival == doctest::Approx(std::exp(-0.5)).epsilon(0.01));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(std::fabs(curve[i].survival - exact[i].survival) <= 0.03);
  }
  const auto fit = extremal_index_fit(curve);
  CHECK(fit.theta == doctest::Approx(0.5).epsilon(0.2));
  CHECK(extremal_index_fit(exact).theta == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("kac examples") {
  const auto d = kac_check(kDoubling, kLebesgue, {0.37}, 0.005, 10000, 5000, 8);
  CHECK(std::fabs(d.product - 1.0) <= 0.05);
  CHECK_FALSE(d.flagged);
  const auto torus = MapSystem::torus_doubling();
  const auto t = kac_check(torus, DensityModel::closed_form(torus), {0.3, 0.6}, 0.02, 10000,
                           default_cap(M_PI * 4e-4), 8);
  CHECK(std::fabs(t.product - 1.0) <= 0.05);
  // U is the whole circle: every return takes one step.
  const auto whole = kac_check(kDoubling, kLebesgue, {0.5}, 0.75, 200, 10, 8);
  CHECK(whole.mean_return == 1.0);
  CHECK(whole.product == 1.0);
  CHECK_THROWS_AS(kac_check(kDoubling, kLebesgue, {0.37}, 0.005, 99, 5000, 8), std::invalid_argument);
}

TEST_CASE("kac error shrinks with m") {
  const auto small = kac_check(kDoubling, kLebesgue, {0.37}, 0.005, 1000, 5000, 9);
  const auto large = kac_check(kDoubling, kLebesgue, {0.37}, 0.005, 16000, 5000, 9);
  CHECK(large.std_error < small.std_error / 3);
  CHECK(std::fabs(large.product - 1.0) <= 4 * large.std_error);
}

TEST_CASE("kac flags heavy truncation") {
  const auto r = kac_check(kDoubling, kLebesgue, {0.37}, 0.005, 1000, 20, 10);
  CHECK(r.flagged);
  CHECK(r.exceeded_fraction > 0.01);
}

TEST_CASE("extremal index fit examples") {
  std::vector<SurvivalPoint> one, half, bumpy;
  for (const double t : t_grid(0.5, 5.0)) {
    one.push_back({t, std::exp(-t), 0, 0});
    half.push_back({t, std::exp(-0.5 * t), 0, 0});
    bumpy.push_back({t, std::exp(-t) + (t == 2.0 ? 0.2 : 0.0), 0, 0});
  }
  CHECK(extremal_index_fit(one).theta == doctest::Approx(1.0));
  CHECK(extremal_index_fit(half).theta == doctest::Approx(0.5));
  CHECK_FALSE(extremal_index_fit(one).nonmonotone);
  CHECK(extremal_index_fit(bumpy).nonmonotone);
  CHECK_THROWS_AS(extremal_index_fit({{0, 1, 0, 0}, {1, 0.5, 0, 0}}), std::invalid_argument);
}

TEST_CASE("l_n correspondence between hitting and maxima") {
  const auto seq = LevelSequence::from_model(ObservableSpec::g1(kDoubling.space(), {0.37}), kLebesgue);
  const double delta = 0.001;
  const double t = 1.0;
  const std::uint64_t ell = seq.block_length_for_radius(delta, t);
  CHECK(ell == 500);
  const std::uint64_t m = 10000;
  const auto hts = hts_ecdf(kDoubling, kLebesgue, {0.37}, delta, {t}, m, default_cap(0.002), 11);
  const double y = -std::log(t);
  const auto evl = evl_curve(kDoubling, seq, ell, m, {y}, 12);
  const double s1 = hts[0].std_error, s2 = evl[0].std_error;
  CHECK(std::fabs(hts[0].survival - evl[0].empirical) <= 4 * std::sqrt(s1 * s1 + s2 * s2));
}

TEST_CASE("hit samples merge") {
  auto a = hitting_sample(kDoubling, kLebesgue, {0.37}, 0.01, 100, 5000, 1);
  const auto b = hitting_sample(kDoubling, kLebesgue, {0.37}, 0.01, 50, 5000, 2);
  a.merge(b);
  CHECK(a.size() == 150);
  const auto other = hitting_sample(kDoubling, kLebesgue, {0.5}, 0.01, 50, 5000, 2);
  CHECK_THROWS_AS(a.merge(other), std::invalid_argument);
}

}  // TEST_SUITE
