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

#include "hitlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "hitlab/density.hpp"
#include "hitlab/expansivity.hpp"
#include "hitlab/extreme_stats.hpp"
#include "hitlab/hitting.hpp"
#include "hitlab/mixing.hpp"
#include "hitlab/parallel.hpp"
#include "hitlab/point_process.hpp"
#include "hitlab/random.hpp"

namespace hitlab {

bool RunReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<DualityTrial> duality_check(const MapSystem& system, const LevelSequence& seq,
                                        std::uint64_t n_max, std::uint64_t trials,
                                        std::uint64_t seed) {
  if (n_max == 0) throw std::invalid_argument("duality_check: n_max must be positive");
  const ObservableSpec& spec = seq.spec();
  double y_lo = -3.0, y_hi = 5.0;
  if (spec.kind() == ObservableKind::g2) y_lo = 0.2, y_hi = 5.0;
  if (spec.kind() == ObservableKind::g3) y_lo = -5.0, y_hi = -0.2;
  const PhaseSpace& space = system.space();
  std::vector<DualityTrial> out(trials);
  parallel_for(trials, [&](std::size_t i) {
    Engine engine(derive_seed(seed, streams::kDuality, i));
    DualityTrial& t = out[i];
    t.n = 1 + engine() % n_max;
    t.y = y_lo + (y_hi - y_lo) * uniform01(engine);
    t.level = seq.level(t.n, t.y);
    t.radius = seq.radius_for_level(t.n, t.y);
    OrbitGenerator orbit = OrbitGenerator::sampled(system, engine());
    OrbitGenerator replay = orbit;
    t.start_in_ball = space.distance(orbit.current(), spec.center()) < t.radius;
    t.max = partial_max(orbit, spec, t.n);
    t.max_at_most_level = t.max <= t.level;
    t.hit_at_least_n = first_hitting_time(replay, spec.center(), t.radius, t.n).at_least(t.n);
  });
  return out;
}

namespace {

struct Context {
  const ExperimentConfig& config;
  MapSystem system;
  std::optional<DensityModel> model;
  std::uint64_t seed;
  std::uint64_t burn_in;
  RunReport& report;

  Point zeta() const {
    const auto& z = config.reals("zeta");
    return {z[0], z.size() > 1 ? z[1] : 0.0};
  }

  ObservableSpec spec() const {
    const std::string& type = config.text("observable");
    if (type == "g1") return ObservableSpec::g1(system.space(), zeta());
    if (type == "g2") return ObservableSpec::g2(system.space(), zeta(), config.real("alpha"));
    return ObservableSpec::g3(system.space(), zeta(), config.real("alpha"), config.real("D"));
  }

  LevelSequence levels() const { return LevelSequence::from_model(spec(), *model); }

  void check(std::string name, double value, std::string relation, double tolerance) {
    bool ok = false;
    if (relation == "<=") ok = value <= tolerance;
    if (relation == ">=") ok = value >= tolerance;
    if (relation == "==") ok = value == tolerance;
    report.checks.push_back({std::move(name), value, std::move(relation), tolerance, ok});
  }
};

MapSystem make_system(const ExperimentConfig& c) {
  const std::string& name = c.text("system");
  if (name == "doubling") return MapSystem::doubling();
  if (name == "torus-doubling") return MapSystem::torus_doubling();
  if (name == "quadratic") return MapSystem::quadratic(c.real("a"));
  if (name == "intermittent") return MapSystem::intermittent(c.real("gamma"));
  PerturbationParams p;
  p.epsilon = c.real("epsilon");
  p.v_center = c.real("v_center");
  p.v_radius = c.real("v_radius");
  p.declared_delta = c.real("declared_delta");
  return MapSystem::perturbed_expanding(p);
}

void run_evl(Context& ctx) {
  const LevelSequence seq = ctx.levels();
  const std::uint64_t n = ctx.config.integer("n");
  const auto& ys = ctx.config.reals("y_grid");
  std::vector<double> radii;
  for (const double y : ys) radii.push_back(seq.radius_for_level(n, y));
  const BlockSample blocks = sample_blocks(ctx.system, seq.spec().center(), n,
                                           ctx.config.integer("m"), ctx.seed, radii,
                                           BlockOptions{ctx.burn_in});
  const auto curve = evl_curve(blocks, seq, ys);

  CsvTable data({"y", "u_n", "empirical", "analytic", "stderr"});
  CsvTable plot({"y", "u_n", "empirical", "analytic"});
  double dev = 0.0;
  for (const auto& p : curve) {
    data.add(p.y, p.level, p.empirical, p.analytic, p.std_error);
    plot.add(p.y, p.level, p.empirical, p.analytic);
    dev = std::max(dev, std::fabs(p.empirical - p.analytic));
  }
  ctx.report.data.push_back({"evl_curve", std::move(data)});
  ctx.report.plots.push_back({"evl_curve", std::move(plot)});

  const EmpiricalDistribution maxima(blocks.maxima(seq.spec()));
  const GevParams gev = gev_fit(maxima, InfinitePolicy::exclude);
  const ObservableSpec& spec = seq.spec();
  const double d = spec.space().dimension();
  const double expected = spec.kind() == ObservableKind::g1   ? 0.0
                          : spec.kind() == ObservableKind::g2 ? 1.0 / (spec.alpha() * d)
                                                              : -1.0 / (spec.alpha() * d);
  std::uint64_t violations = 0;
  for (const auto& t : blocks.tallies) violations += t.holds() ? 0 : 1;
  auto& m = ctx.report.metrics;
  m["max_abs_deviation"] = dev;
  m["gev_location"] = gev.location;
  m["gev_scale"] = gev.scale;
  m["gev_shape"] = gev.shape;
  m["expected_shape"] = expected;
  m["infinite_maxima"] = static_cast<double>(maxima.infinite_count());
  m["float_restarts"] = static_cast<double>(blocks.restarts);
  m["bonferroni_violations"] = static_cast<double>(violations);
  ctx.check("max_abs_deviation", dev, "<=", ctx.config.real("tolerance"));
  ctx.check("bonferroni_violations", static_cast<double>(violations), "==", 0.0);
}

void run_survival(Context& ctx, bool returns) {
  const Point zeta = ctx.zeta();
  const double delta = ctx.config.real("delta");
  const double mu = ctx.model->ball_measure(zeta, delta);
  const std::uint64_t cap = ctx.config.has("cap") ? ctx.config.integer("cap") : default_cap(mu);
  const auto& ts = ctx.config.reals("t_grid");
  HitOptions options;
  options.burn_in = ctx.burn_in;
  if (ctx.config.has("budget")) options.budget = ctx.config.integer("budget");
  const std::uint64_t m = ctx.config.integer("m");
  const auto curve =
      returns ? rts_ecdf(ctx.system, *ctx.model, zeta, delta, ts, m, cap, ctx.seed, options)
              : hts_ecdf(ctx.system, *ctx.model, zeta, delta, ts, m, cap, ctx.seed, options);
  CsvTable data({"t", "survival", "stderr", "exceeded_fraction"});
  CsvTable plot({"t", "survival", "exp_minus_t"});
  double sup = 0.0;
  for (const auto& p : curve) {
    data.add(p.t, p.survival, p.std_error, p.exceeded_fraction);
    plot.add(p.t, p.survival, std::exp(-p.t));
    sup = std::max(sup, std::fabs(p.survival - std::exp(-p.t)));
  }
  const std::string name = returns ? "rts" : "hts";
  ctx.report.data.push_back({name, std::move(data)});
  ctx.report.plots.push_back({name, std::move(plot)});
  auto& met = ctx.report.metrics;
  met["ball_measure"] = mu;
  met["cap"] = static_cast<double>(cap);
  met["sup_error"] = sup;
  met["exceeded_fraction"] = curve.empty() ? 0.0 : curve.front().exceeded_fraction;
  try {
    const ExtremalIndexFit fit = extremal_index_fit(curve);
    met["theta"] = fit.theta;
    met["theta_raw"] = fit.raw_slope;
    met["theta_nonmonotone"] = fit.nonmonotone ? 1.0 : 0.0;
  } catch (const std::invalid_argument&) {
    // Too few interior points for a slope; the curve itself is still reported.
  }
  ctx.check("sup_error", sup, "<=", ctx.config.real("tolerance"));
}

void run_kac(Context& ctx) {
  const Point zeta = ctx.zeta();
  const double delta = ctx.config.real("delta");
  const double mu = ctx.model->ball_measure(zeta, delta);
  const std::uint64_t cap = ctx.config.has("cap") ? ctx.config.integer("cap") : default_cap(mu);
  HitOptions options;
  options.burn_in = ctx.burn_in;
  if (ctx.config.has("budget")) options.budget = ctx.config.integer("budget");
  const KacResult r =
      kac_check(ctx.system, *ctx.model, zeta, delta, ctx.config.integer("m"), cap, ctx.seed, options);
  CsvTable data({"ball_measure", "mean_return", "product", "stderr", "exceeded_fraction"});
  data.add(mu, r.mean_return, r.product, r.std_error, r.exceeded_fraction);
  ctx.report.data.push_back({"kac", std::move(data)});
  auto& met = ctx.report.metrics;
  met["ball_measure"] = mu;
  met["product"] = r.product;
  met["stderr"] = r.std_error;
  met["exceeded_fraction"] = r.exceeded_fraction;
  ctx.check("abs_product_minus_one", std::fabs(r.product - 1.0), "<=",
            ctx.config.real("tolerance"));
  ctx.check("exceeded_fraction", r.exceeded_fraction, "<=", 0.01);
}

void run_poisson(Context& ctx, bool exceedances) {
  const std::uint64_t m = ctx.config.integer("m");
  const double horizon = ctx.config.real("horizon");
  ProcessOptions options;
  options.burn_in = ctx.burn_in;
  // Gap sample: the first three gaps of each run, read without a horizon
  // cut so long gaps are not censored.
  ProcessOptions gap_options = options;
  gap_options.max_events = 4;
  constexpr double kGapHorizon = 100.0;
  std::vector<EventProcess> runs, gap_runs;
  if (exceedances) {
    const LevelSequence seq = ctx.levels();
    const std::uint64_t n = ctx.config.integer("n");
    const double y = ctx.config.real("y");
    runs = sample_epp(ctx.system, seq, *ctx.model, n, y, horizon, m, ctx.seed, options);
    gap_runs = sample_epp(ctx.system, seq, *ctx.model, n, y, kGapHorizon, m, ctx.seed, gap_options);
  } else {
    const Point zeta = ctx.zeta();
    const double delta = ctx.config.real("delta");
    runs = sample_htpp(ctx.system, *ctx.model, zeta, delta, horizon, m, ctx.seed, options);
    gap_runs = sample_htpp(ctx.system, *ctx.model, zeta, delta, kGapHorizon, m, ctx.seed, gap_options);
  }
  const PoissonCountResult counts = poisson_count_test(runs, 2.0);
  const InterarrivalResult gaps = interarrival_test(gap_runs, 3);
  const IncrementResult inc = increment_independence_test(runs, {{0.0, 1.0}, {2.0, 3.0}});

  CsvTable pmf({"k", "empirical", "poisson"});
  for (std::size_t k = 0; k < counts.empirical.size(); ++k) {
    pmf.add(k, counts.empirical[k], counts.poisson[k]);
  }
  CsvTable events({"run_id", "index", "rescaled_time"});
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (std::size_t i = 0; i < runs[r].indices.size(); ++i) {
      events.add(r, runs[r].indices[i], runs[r].time(i));
    }
  }
  const std::string name = exceedances ? "epp" : "htpp";
  ctx.report.plots.push_back({name + "_counts", pmf});
  ctx.report.data.push_back({name + "_counts", std::move(pmf)});
  ctx.report.data.push_back({name + "_events", std::move(events)});

  auto& met = ctx.report.metrics;
  met["rescale"] = runs.front().rescale;
  met["count_tv"] = counts.tv;
  met["mean_count"] = counts.mean_count;
  met["interarrival_ks"] = gaps.ks;
  met["interarrival_gaps"] = static_cast<double>(gaps.gaps);
  met["interarrival_critical_1pct"] = gaps.critical_1pct;
  met["increment_factorization_defect"] = inc.factorization_defect;
  met["increment_poisson_defect"] = inc.poisson_defect;
  const double tol = ctx.config.real("tolerance");
  ctx.check("count_tv", counts.tv, "<=", tol);
  ctx.check("interarrival_ks", gaps.ks, "<=", gaps.critical_1pct);
  ctx.check("increment_factorization_defect", inc.factorization_defect, "<=", tol);
  ctx.check("increment_poisson_defect", inc.poisson_defect, "<=", tol);
}

void run_duality(Context& ctx) {
  const LevelSequence seq = ctx.levels();
  const auto trials = duality_check(ctx.system, seq, ctx.config.integer("n"),
                                    ctx.config.integer("m"), ctx.seed);
  CsvTable data({"trial", "n", "y", "u_n", "max", "radius", "start_in_ball", "hit_at_least_n",
                 "max_at_most_level"});
  std::uint64_t mismatches = 0, loose = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& t = trials[i];
    data.add(i, t.n, t.y, t.level, t.max, t.radius, int{t.start_in_ball}, int{t.hit_at_least_n},
             int{t.max_at_most_level});
    mismatches += t.agrees() ? 0 : 1;
    loose += t.agrees_without_start() ? 0 : 1;
  }
  ctx.report.data.push_back({"duality", std::move(data)});
  ctx.report.metrics["mismatches"] = static_cast<double>(mismatches);
  ctx.report.metrics["mismatches_ignoring_start"] = static_cast<double>(loose);
  ctx.report.metrics["trials"] = static_cast<double>(trials.size());
  ctx.check("mismatches", static_cast<double>(mismatches), "==", 0.0);
}

void run_dprime(Context& ctx) {
  const LevelSequence seq = ctx.levels();
  const std::uint64_t n = ctx.config.integer("n");
  const double radius = seq.radius_for_level(n, ctx.config.real("y"));
  const auto& ks = ctx.config.integers("k_values");
  const std::uint64_t lags = n / *std::min_element(ks.begin(), ks.end());
  const PairExceedanceTable table =
      build_pair_table(ctx.system, seq.spec().center(), radius, std::max<std::uint64_t>(lags, 1),
                       ctx.config.integer("budget"), ctx.seed, 16, ctx.burn_in);
  CsvTable data({"k", "sum", "iid_baseline"});
  const double p0 = table.marginal();
  for (const auto k : ks) {
    const double baseline = static_cast<double>(n) * static_cast<double>(n / k) * p0 * p0;
    const double sum = dprime_sum(table, n, k);
    data.add(k, sum, baseline);
    ctx.report.metrics[fmt::format("dprime_k{}", k)] = sum;
  }
  ctx.report.metrics["marginal"] = p0;
  ctx.report.metrics["n_times_marginal"] = static_cast<double>(n) * p0;
  ctx.report.metrics["window"] = static_cast<double>(table.window());
  ctx.report.plots.push_back({"dprime", data});
  ctx.report.data.push_back({"dprime", std::move(data)});
}

void run_d3(Context& ctx) {
  const LevelSequence seq = ctx.levels();
  const std::uint64_t n = ctx.config.integer("n");
  const double y = ctx.config.real("y");
  const std::uint64_t m = ctx.config.integer("m");
  const IntervalRing A({{0.0, static_cast<double>(ctx.config.integer("block"))}});
  CsvTable data({"t", "gamma", "stderr", "p_exceed", "p_clear"});
  for (const auto t : ctx.config.integers("lags")) {
    const D3Estimate e = d3_gamma(ctx.system, seq, n, y, t, A, m, ctx.seed, ctx.burn_in);
    data.add(t, e.gamma, e.std_error, e.p_exceed, e.p_clear);
  }
  const D3Estimate empty = d3_gamma(ctx.system, seq, n, y, 0, IntervalRing(), m, ctx.seed, ctx.burn_in);
  ctx.report.metrics["empty_ring_gamma"] = empty.gamma;
  ctx.check("empty_ring_gamma", empty.gamma, "==", 0.0);
  ctx.report.plots.push_back({"d3", data});
  ctx.report.data.push_back({"d3", std::move(data)});
}

void run_mixing(Context& ctx) {
  const Point zeta = ctx.zeta();
  const double delta = ctx.config.real("delta");
  const std::uint64_t length = ctx.config.integer("length");
  const MixingResult r = uniform_mixing_gamma(
      ctx.system, zeta, delta, ctx.config.integer("n"), ctx.config.integer("kcap"),
      ctx.config.integer("lcap"), length, ctx.seed, ctx.burn_in);
  CsvTable data({"n", "gamma", "best_k", "best_l", "skipped"});
  data.add(ctx.config.integer("n"), r.gamma, r.best_k, r.best_l, r.skipped);
  ctx.report.data.push_back({"mixing", std::move(data)});

  std::vector<std::uint64_t> ts;
  for (std::uint64_t t = 0; t <= 10; ++t) ts.push_back(t);
  const auto coord = [](Point p) { return p.x; };
  const auto corr = correlation_decay(ctx.system, coord, coord, ts, length, ctx.seed, ctx.burn_in);
  CsvTable decay({"t", "correlation"});
  for (std::size_t i = 0; i < ts.size(); ++i) decay.add(ts[i], corr[i]);
  ctx.report.plots.push_back({"correlation", decay});
  ctx.report.data.push_back({"correlation", std::move(decay)});
  ctx.report.metrics["gamma"] = r.gamma;
  ctx.report.metrics["skipped"] = static_cast<double>(r.skipped);
}

void run_expansivity(Context& ctx) {
  const double lambda = ctx.config.real("lambda");
  const ExpansivitySurvey s =
      expansivity_survey(ctx.system, ctx.config.integer("starts"), ctx.config.integer("length"),
                         lambda, ctx.seed, ctx.burn_in);
  CsvTable data({"start", "average", "expansion_time"});
  for (std::size_t i = 0; i < s.averages.size(); ++i) {
    const auto& e = s.expansion_times[i];
    data.add(i, s.averages[i], e.is_exceeded() ? std::string("exceeded") : format_number(e.value()));
  }
  ctx.report.data.push_back({"expansivity", std::move(data)});
  const double tol = ctx.config.real("tolerance");
  const double frac_avg = s.fraction_at_least(lambda / 2.0);
  const double frac_finite = s.fraction_finite();
  ctx.report.metrics["fraction_average_at_least_half_lambda"] = frac_avg;
  ctx.report.metrics["fraction_finite_expansion_time"] = frac_finite;
  ctx.report.metrics["float_restarts"] = static_cast<double>(s.restarts);
  ctx.check("fraction_average_at_least_half_lambda", frac_avg, ">=", 1.0 - tol);
  ctx.check("fraction_finite_expansion_time", frac_finite, ">=", 1.0 - tol);
}

nlohmann::json config_json(const ExperimentConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : config.values()) {
    std::visit([&](const auto& v) { j[key] = v; }, value);
  }
  return j;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config;
  const std::string stage(to_string(config.experiment()));
  try {
    Context ctx{config, make_system(config), std::nullopt, config.integer("seed"),
                config.integer("burn_in"), report};
    if (config.text("density") == "closed-form") {
      ctx.model = DensityModel::closed_form(ctx.system);
    } else {
      ctx.model = DensityModel::empirical(
          sample_histogram(ctx.system, config.integer("hist_iterates"),
                           config.integer("hist_bins"), ctx.seed));
    }
    switch (config.experiment()) {
      case ExperimentKind::evl_curve:
        run_evl(ctx);
        break;
      case ExperimentKind::hts:
        run_survival(ctx, false);
        break;
      case ExperimentKind::rts:
        run_survival(ctx, true);
        break;
      case ExperimentKind::kac:
        run_kac(ctx);
        break;
      case ExperimentKind::epp_poisson:
        run_poisson(ctx, true);
        break;
      case ExperimentKind::htpp_poisson:
        run_poisson(ctx, false);
        break;
      case ExperimentKind::duality_check:
        run_duality(ctx);
        break;
      case ExperimentKind::dprime:
        run_dprime(ctx);
        break;
      case ExperimentKind::d3:
        run_d3(ctx);
        break;
      case ExperimentKind::mixing:
        run_mixing(ctx);
        break;
      case ExperimentKind::expansivity:
        run_expansivity(ctx);
        break;
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("{} failed: {}", stage, e.what()));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<std::string> emit_plot_data(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const auto& p : report.plots) {
    const std::string file = "plot_" + p.name + ".csv";
    p.table.write(dir / file);
    files.push_back(file);
  }
  return files;
}

std::string report_json(const RunReport& report) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = std::string(to_string(report.config.experiment()));
  j["config"] = config_json(report.config);
  j["config_text"] = emit_config(report.config);
  j["wall_seconds"] = report.wall_seconds;
  j["metrics"] = nlohmann::json::object();
  for (const auto& [k, v] : report.metrics) j["metrics"][k] = v;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"value", c.value},
                           {"relation", c.relation},
                           {"tolerance", c.tolerance},
                           {"passed", c.passed}});
  }
  j["passed"] = report.passed();
  j["files"] = report.files;
  return j.dump(2) + "\n";
}

RunReport run(const ExperimentConfig& config, const std::filesystem::path& dir) {
  RunReport report = run_experiment(config);
  std::filesystem::create_directories(dir);
  for (const auto& d : report.data) {
    const std::string file = d.name + ".csv";
    d.table.write(dir / file);
    report.files.push_back(file);
  }
  for (auto& f : emit_plot_data(report, dir)) report.files.push_back(std::move(f));
  report.files.push_back("report.json");
  std::ofstream out(dir / "report.json", std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + (dir / "report.json").string());
  out << report_json(report);
  return report;
}

std::filesystem::path default_output_dir(const ExperimentConfig& config) {
  if (config.has("out")) return config.text("out");
  if (const char* env = std::getenv("HITLAB_OUT_DIR"); env && *env) return env;
  return "hitlab-out";
}

}  // namespace hitlab
