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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hitlab/config.hpp"
#include "hitlab/csv.hpp"
#include "hitlab/experiment.hpp"

using namespace hitlab;
namespace fs = std::filesystem;

namespace {

const char* kMinimalKac = R"(
[system]
system = doubling
[target]
zeta = 0.37
delta = 0.005
[run]
experiment = kac
m = 10000
seed = 1
)";

bool mentions(const ConfigError& e, const std::string& needle) {
  return std::any_of(e.violations().begin(), e.violations().end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

ConfigError parse_error(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError({});
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hitlab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("experiment-cli") {

TEST_CASE("minimal kac config parses") {
  const auto c = parse_config(kMinimalKac);
  CHECK(c.experiment() == ExperimentKind::kac);
  CHECK(c.real("delta") == 0.005);
  CHECK(c.integer("m") == 10000);
  CHECK(c.reals("zeta") == std::vector<double>{0.37});
  CHECK(c.text("density") == "closed-form");
}

TEST_CASE("violations are named with their location") {
  const auto e = parse_error(kMinimalKac, {"delta=-1"});
  CHECK(mentions(e, "delta must be positive"));
  std::string text = kMinimalKac;
  text.replace(text.find("delta = 0.005"), 13, "delta = -1");
  const auto f = parse_error(text);
  CHECK(mentions(f, "line 6"));
  CHECK(mentions(f, "delta must be positive"));
}

TEST_CASE("D is g3-only") {
  const auto e = parse_error(R"(
[observable]
observable = g2
alpha = 2
D = 1
[target]
zeta = 0.3
[run]
experiment = evl-curve
)");
  CHECK(mentions(e, "D is g3-only"));
}

TEST_CASE("every violation is reported, not just the first") {
  const auto e = parse_error(R"(
[system]
system = doubling
colour = blue
[target]
zeta = 1.5
delta = 0
[run]
experiment = kac
m = 50
m = 60
)");
  CHECK(mentions(e, "unknown key 'colour'"));
  CHECK(mentions(e, "zeta is outside"));
  CHECK(mentions(e, "delta must be positive"));
  CHECK(mentions(e, "duplicate key 'm'"));
  CHECK(e.violations().size() >= 4);
}

TEST_CASE("missing and misplaced keys") {
  CHECK(mentions(parse_error("[run]\nm = 5\n"), "missing required key 'experiment'"));
  CHECK(mentions(parse_error("[run]\nexperiment = hts\n[target]\nzeta = 0.3\n"),
                 "missing required key 'delta'"));
  CHECK(mentions(parse_error("[run]\nexperiment = kac\nzeta = 0.3\n"), "belongs in [target]"));
  CHECK(mentions(parse_error("[bogus]\n"), "unknown section"));
  CHECK(mentions(parse_error("[run]\nexperiment = warp\n"), "unknown experiment"));
}

TEST_CASE("emit and parse round trip") {
  for (const auto* text : {kMinimalKac,
                           "[observable]\nobservable = g3\nalpha = 2\nD = 0.5\n[target]\nzeta = 0.1\n"
                           "[run]\nexperiment = evl-curve\ny_grid = -4:-0.5:8\n",
                           "[system]\nsystem = torus-doubling\n[target]\nzeta = 0.2, 0.7\n"
                           "delta = 0.02\n[run]\nexperiment = htpp-poisson\nseed = 99\n",
                           "[system]\nsystem = quadratic\na = 2\ndensity = histogram\n"
                           "hist_iterates = 1e6\n[target]\nzeta = 0\n[run]\nexperiment = dprime\n"}) {
    const auto c = parse_config(text);
    CHECK(parse_config(emit_config(c)) == c);
  }
}

TEST_CASE("integers accept exact scientific notation only") {
  CHECK(parse_config(kMinimalKac, {"m=1e4"}).integer("m") == 10000);
  CHECK(mentions(parse_error(kMinimalKac, {"m=1.5"}), "not a non-negative integer"));
}

TEST_CASE("csv format") {
  CsvTable t({"t", "survival"});
  t.add(0.5, 1.0);
  t.add(1.0, 0.1);
  CHECK(t.str() == "t,survival\n0.5,1\n1,0.1\n");
  CHECK_THROWS_AS(CsvTable({"Upper"}), std::invalid_argument);
  CHECK_THROWS_AS(t.add(1.0), std::invalid_argument);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(std::uint64_t{18446744073709551615ull}) == "18446744073709551615");
}

TEST_CASE("duality check has no mismatches") {
  auto c = parse_config("[target]\nzeta = 0.37\n[run]\nexperiment = duality-check\nm = 2000\n");
  const auto r = run_experiment(c);
  CHECK(r.metrics.at("mismatches") == 0.0);
  CHECK(r.passed());
  auto g3 = parse_config(
      "[observable]\nobservable = g3\nalpha = 2\n[target]\nzeta = 0.9\n"
      "[run]\nexperiment = duality-check\nm = 2000\nn = 500\n");
  CHECK(run_experiment(g3).metrics.at("mismatches") == 0.0);
}

TEST_CASE("kac on the minimal config is within tolerance") {
  const auto r = run_experiment(parse_config(kMinimalKac));
  CHECK(r.passed());
  CHECK(std::fabs(r.metrics.at("product") - 1.0) <= 0.05);
}

TEST_CASE("runs write a complete manifest and reproduce byte for byte") {
  const auto c = parse_config(
      "[target]\nzeta = 0.37\n[run]\nexperiment = evl-curve\nn = 1000\nm = 2000\nseed = 5\n");
  const auto a = scratch("a"), b = scratch("b");
  setenv("HITLAB_THREADS", "1", 1);
  const auto ra = run(c, a);
  setenv("HITLAB_THREADS", "3", 1);
  const auto rb = run(c, b);
  unsetenv("HITLAB_THREADS");
  std::vector<std::string> on_disk;
  for (const auto& entry : fs::directory_iterator(a)) on_disk.push_back(entry.path().filename().string());
  std::sort(on_disk.begin(), on_disk.end());
  auto manifest = ra.files;
  std::sort(manifest.begin(), manifest.end());
  CHECK(on_disk == manifest);
  for (const auto& f : ra.files) {
    if (f == "report.json") continue;
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const auto ja = nlohmann::json::parse(slurp(a / "report.json"));
  const auto jb = nlohmann::json::parse(slurp(b / "report.json"));
  CHECK(ja["metrics"] == jb["metrics"]);
  CHECK(ja["schema_version"] == kReportSchemaVersion);
  CHECK(parse_config(ja["config_text"].get<std::string>()) == c);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("plot data schemas") {
  const auto cols = [](const RunReport& r, const std::string& name) {
    for (const auto& p : r.plots) {
      if (p.name == name) return p.table.columns();
    }
    return std::vector<std::string>{};
  };
  const auto evl = run_experiment(parse_config(
      "[target]\nzeta = 0.37\n[run]\nexperiment = evl-curve\nn = 100\nm = 200\n"));
  CHECK(cols(evl, "evl_curve") == std::vector<std::string>{"y", "u_n", "empirical", "analytic"});
  const auto hts = run_experiment(parse_config(
      "[target]\nzeta = 0.37\ndelta = 0.01\n[run]\nexperiment = hts\nm = 200\n"));
  CHECK(cols(hts, "hts") == std::vector<std::string>{"t", "survival", "exp_minus_t"});
  const auto dp = run_experiment(parse_config(
      "[target]\nzeta = 0.37\n[run]\nexperiment = dprime\nn = 100\nbudget = 1e6\n"));
  CHECK(cols(dp, "dprime") == std::vector<std::string>{"k", "sum", "iid_baseline"});
  const auto dir = scratch("plots");
  const auto files = emit_plot_data(hts, dir);
  REQUIRE(files.size() == 1);
  CHECK(slurp(dir / files[0]).rfind("t,survival,exp_minus_t\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("pipeline errors name the failing stage") {
  // A return budget far too small for the requested sample.
  const auto c = parse_config(
      "[target]\nzeta = 0.37\ndelta = 0.0001\n[run]\nexperiment = rts\nm = 1000\nbudget = 1000\n");
  try {
    run_experiment(c);
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).rfind("rts failed", 0) == 0);
  }
}

TEST_CASE("default output directory") {
  const auto c = parse_config(kMinimalKac);
  setenv("HITLAB_OUT_DIR", "/tmp/somewhere", 1);
  CHECK(default_output_dir(c) == fs::path("/tmp/somewhere"));
  unsetenv("HITLAB_OUT_DIR");
  CHECK(default_output_dir(c) == fs::path("hitlab-out"));
  CHECK(default_output_dir(parse_config(kMinimalKac, {"out=/tmp/x"})) == fs::path("/tmp/x"));
}

}  // TEST_SUITE
