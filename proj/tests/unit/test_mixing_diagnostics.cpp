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
#include "hitlab/map_system.hpp"
#include "hitlab/mixing.hpp"
#include "hitlab/observable.hpp"
#include "hitlab/point_process.hpp"
#include "oracles/dyadic_chain.hpp"

using namespace hitlab;

namespace {

const MapSystem kDoubling = MapSystem::doubling();
const DensityModel kLebesgue = DensityModel::closed_form(kDoubling);

PairExceedanceTable bernoulli_table(double p, std::size_t lags, std::size_t segments,
                                    std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution b(p);
  PairExceedanceTable table(0.0, lags);
  std::vector<std::uint8_t> seg(length);
  for (std::size_t s = 0; s < segments; ++s) {
    for (auto& v : seg) v = b(rng) ? 1 : 0;
    table.add_segment(seg);
  }
  return table;
}

}  // namespace

TEST_SUITE("mixing-diagnostics") {

TEST_CASE("pair table probabilities") {
  const auto t = bernoulli_table(0.1, 20, 10, 10000, 1);
  CHECK(t.window() == 10 * (10000 - 20));
  CHECK(t.marginal() == doctest::Approx(0.1).epsilon(0.05));
  for (std::size_t j = 1; j <= 20; ++j) {
    CHECK(t.joint(j) >= 0.0);
    CHECK(t.joint(j) <= t.marginal());
    CHECK(t.joint(j) == doctest::Approx(0.01).epsilon(0.2));
  }
  CHECK_THROWS_AS(t.joint(21), std::out_of_range);
  PairExceedanceTable short_table(0.0, 5);
  std::vector<std::uint8_t> tiny(5);
  CHECK_THROWS_AS(short_table.add_segment(tiny), std::invalid_argument);
}

TEST_CASE("pair table merge equals one pass") {
  auto a = bernoulli_table(0.2, 8, 3, 1000, 2);
  const auto b = bernoulli_table(0.2, 8, 2, 1000, 3);
  auto ab = a;
  ab.merge(b);
  auto ba = b;
  ba.merge(a);
  CHECK(ab.window() == ba.window());
  CHECK(ab.marginal_count() == a.marginal_count() + b.marginal_count());
  for (std::size_t j = 1; j <= 8; ++j) CHECK(ab.joint_count(j) == ba.joint_count(j));
  CHECK_THROWS_AS(a.merge(PairExceedanceTable(0.0, 9)), std::invalid_argument);
}

TEST_CASE("dprime sum for independent exceedances is tau^2/k") {
  const std::uint64_t n = 1000;
  const double tau = 1.0;
  const auto t = bernoulli_table(tau / n, 200, 100, 200000, 4);
  for (const std::uint64_t k : {5, 10, 20}) {
    CHECK(dprime_sum(t, n, k) == doctest::Approx(tau * tau / k).epsilon(0.25));
  }
}

TEST_CASE("dprime sum is nonincreasing in k") {
  const auto t = bernoulli_table(0.01, 100, 5, 100000, 5);
  double prev = INFINITY;
  for (std::uint64_t k = 1; k <= 50; ++k) {
    const double v = dprime_sum(t, 100, k);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("dprime sum names the lag shortfall") {
  const auto t = bernoulli_table(0.01, 10, 1, 1000, 6);
  try {
    dprime_sum(t, 1000, 5);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("200") != std::string::npos);
    CHECK(what.find("10") != std::string::npos);
  }
}

TEST_CASE("dprime sum on the doubling map") {
  const auto seq = LevelSequence::from_model(ObservableSpec::g1(kDoubling.space(), {0.37}), kLebesgue);
  const std::uint64_t n = 10000;
  const double r = seq.radius_for_level(n, 0.0);
  const auto generic = build_pair_table(kDoubling, {0.37}, r, n / 5, 20'000'000, 7);
  for (const std::uint64_t k : {5, 10, 20}) CHECK(dprime_sum(generic, n, k) <= 3.0 / k);
  // Fixed point with a dyadic radius, where the chain gives the exact value.
  const std::uint64_t n0 = 8192;
  const double r0 = std::ldexp(1.0, -14);
  const auto fixed = build_pair_table(kDoubling, {0.0}, r0, n0 / 5, 20'000'000, 8);
  CHECK(oracle::pair_probability(14, 1) == doctest::Approx(kLebesgue.ball_measure({0.0}, r0) / 2));
  for (const std::uint64_t k : {5, 10, 20}) {
    const double exact = oracle::dprime_sum(14, n0, k);
    CHECK(dprime_sum(fixed, n0, k) >= 1.0 / 3);
    CHECK(dprime_sum(fixed, n0, k) == doctest::Approx(exact).epsilon(0.1));
  }
}

TEST_CASE("d3 gamma with an empty ring is exactly 0") {
  const auto seq = LevelSequence::from_model(ObservableSpec::g1(kDoubling.space(), {0.37}), kLebesgue);
  const auto e = d3_gamma(kDoubling, seq, 100, 0.0, 5, IntervalRing(), 20000, 9);
  CHECK(e.gamma == 0.0);
  CHECK(e.p_clear == 1.0);
}

TEST_CASE("d3 gamma of an independent process is 0 within noise") {
  const double p = 0.05;
  const ExceedancePath iid = [&](std::size_t i, std::vector<std::uint8_t>& exceed) {
    std::mt19937_64 rng(1000 + i);
    std::bernoulli_distribution b(p);
    for (auto& v : exceed) v = b(rng) ? 1 : 0;
  };
  for (const std::uint64_t t : {1, 5, 20}) {
    const auto e = d3_gamma(iid, t, IntervalRing({{0, 10}}), 50000);
    CHECK(std::fabs(e.gamma) <= 3 * e.std_error);
    CHECK(e.p_exceed == doctest::Approx(p).epsilon(0.1));
    CHECK(e.p_clear == doctest::Approx(std::pow(1 - p, 10)).epsilon(0.05));
  }
}

TEST_CASE("d3 gamma on the doubling map decays in t") {
  const auto seq = LevelSequence::from_model(ObservableSpec::g1(kDoubling.space(), {0.37}), kLebesgue);
  const IntervalRing A({{0, 100}});
  std::vector<D3Estimate> est;
  for (const std::uint64_t t : {1, 10, 100}) est.push_back(d3_gamma(kDoubling, seq, 100, 0.0, t, A, 400000, 10));
  for (std::size_t i = 1; i < est.size(); ++i) {
    CHECK(std::fabs(est[i].gamma) <= std::fabs(est[i - 1].gamma) + 2 * est[i].std_error);
  }
  // The same estimate at 10x the samples agrees within the combined error.
  const auto big = d3_gamma(kDoubling, seq, 100, 0.0, 1, A, 4000000, 11);
  CHECK(std::fabs(big.gamma - est[0].gamma) <= 3 * std::hypot(big.std_error, est[0].std_error));
}

TEST_CASE("uniform mixing gamma on synthetic labels") {
  std::mt19937_64 rng(12);
  std::bernoulli_distribution b(0.3);
  std::vector<std::uint8_t> iid(2'000'000);
  for (auto& v : iid) v = b(rng) ? 1 : 0;
  const auto r = uniform_mixing_gamma(iid, 3, 2, 2);
  CHECK(r.gamma <= 0.005);
  std::vector<std::uint8_t> periodic(100000);
  for (std::size_t i = 0; i < periodic.size(); ++i) periodic[i] = i % 2;
  for (const std::uint64_t n : {3, 4}) {
    const auto p = uniform_mixing_gamma(periodic, n, 1, 1);
    CHECK(p.gamma >= 0.2);
    CHECK(p.skipped == 0);
  }
  CHECK_THROWS_AS(uniform_mixing_gamma(iid, 3, 9, 1), std::invalid_argument);
  // A label sequence without ones leaves empty cylinders.
  std::vector<std::uint8_t> zeros(1000, 0);
  CHECK(uniform_mixing_gamma(zeros, 1, 2, 2).skipped > 0);
}

TEST_CASE("uniform mixing gamma on the doubling map vanishes for large n") {
  const auto r = uniform_mixing_gamma(kDoubling, {0.37}, 0.05, 40, 3, 3, 2'000'000, 13);
  // The pure binomial noise floor of the maximum over all cylinder pairs.
  CHECK(r.gamma <= 0.003);
}

TEST_CASE("correlation decay") {
  const auto one = [](Point) { return 1.0; };
  const auto x = [](Point p) { return p.x; };
  const auto mid = [](Point p) { return std::fabs(p.x - 0.5); };
  const std::vector<std::uint64_t> ts = {0, 1, 2, 3, 4, 5};
  for (const double c : correlation_decay(kDoubling, x, one, ts, 100000, 14)) CHECK(c <= 1e-15);
  // Fourier oracle: cov(x, f^t x) = 2^-t / 12 for the doubling map.
  const auto cx = correlation_decay(kDoubling, x, x, ts, 4'000'000, 15);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(cx[i] == doctest::Approx(std::ldexp(1.0, -static_cast<int>(ts[i])) / 12).epsilon(0.05));
  }
  // |x - 1/2| has only odd harmonics and f^t x only multiples of 2^t, so the
  // covariance is 0 from t = 1 on.
  const auto cm = correlation_decay(kDoubling, mid, mid, ts, 4'000'000, 16);
  CHECK(cm[0] == doctest::Approx(1.0 / 48).epsilon(0.02));
  for (std::size_t i = 1; i < ts.size(); ++i) CHECK(cm[i] <= 5e-4);
}

}  // TEST_SUITE
