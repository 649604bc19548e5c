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

#include "hitlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "hitlab/density.hpp"
#include "hitlab/map_system.hpp"

namespace hitlab {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::evl_curve, "evl-curve"},
    {ExperimentKind::hts, "hts"},
    {ExperimentKind::rts, "rts"},
    {ExperimentKind::kac, "kac"},
    {ExperimentKind::epp_poisson, "epp-poisson"},
    {ExperimentKind::htpp_poisson, "htpp-poisson"},
    {ExperimentKind::duality_check, "duality-check"},
    {ExperimentKind::dprime, "dprime"},
    {ExperimentKind::d3, "d3"},
    {ExperimentKind::mixing, "mixing"},
    {ExperimentKind::expansivity, "expansivity"},
};

enum class Type { text, real, integer, reals, integers };

struct KeySpec {
  std::string_view name;
  std::string_view section;
  Type type;
};

constexpr KeySpec kKeys[] = {
    {"system", "system", Type::text},
    {"a", "system", Type::real},
    {"gamma", "system", Type::real},
    {"epsilon", "system", Type::real},
    {"v_center", "system", Type::real},
    {"v_radius", "system", Type::real},
    {"declared_delta", "system", Type::real},
    {"density", "system", Type::text},
    {"hist_iterates", "system", Type::integer},
    {"hist_bins", "system", Type::integer},
    {"observable", "observable", Type::text},
    {"alpha", "observable", Type::real},
    {"D", "observable", Type::real},
    {"y", "observable", Type::real},
    {"zeta", "target", Type::reals},
    {"delta", "target", Type::real},
    {"experiment", "run", Type::text},
    {"n", "run", Type::integer},
    {"m", "run", Type::integer},
    {"seed", "run", Type::integer},
    {"burn_in", "run", Type::integer},
    {"cap", "run", Type::integer},
    {"y_grid", "run", Type::reals},
    {"t_grid", "run", Type::reals},
    {"k_values", "run", Type::integers},
    {"horizon", "run", Type::real},
    {"budget", "run", Type::integer},
    {"lags", "run", Type::integers},
    {"block", "run", Type::integer},
    {"kcap", "run", Type::integer},
    {"lcap", "run", Type::integer},
    {"lambda", "run", Type::real},
    {"starts", "run", Type::integer},
    {"length", "run", Type::integer},
    {"tolerance", "run", Type::real},
    {"out", "run", Type::text},
};

constexpr std::string_view kSections[] = {"system", "observable", "target", "run"};

const KeySpec* find_key(std::string_view name) {
  for (const auto& k : kKeys) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_integer(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  // Accept exact integers in scientific notation such as 1e4.
  const auto d = parse_real(s);
  if (d && *d >= 0.0 && *d <= 9007199254740992.0 && std::floor(*d) == *d) {
    return static_cast<std::uint64_t>(*d);
  }
  return std::nullopt;
}

std::optional<ConfigValue> parse_value(Type type, std::string_view raw, std::string& error) {
  switch (type) {
    case Type::text:
      if (raw.empty()) {
        error = "value is empty";
        return std::nullopt;
      }
      return ConfigValue(std::string(raw));
    case Type::real:
      if (auto v = parse_real(raw)) return ConfigValue(*v);
      error = fmt::format("'{}' is not a finite real number", raw);
      return std::nullopt;
    case Type::integer:
      if (auto v = parse_integer(raw)) return ConfigValue(*v);
      error = fmt::format("'{}' is not a non-negative integer", raw);
      return std::nullopt;
    case Type::reals: {
      const auto range = split(raw, ':');
      if (range.size() == 3) {
        const auto lo = parse_real(range[0]);
        const auto hi = parse_real(range[1]);
        const auto count = parse_integer(range[2]);
        if (!lo || !hi || !count || *count < 2) {
          error = fmt::format("'{}' is not a lo:hi:count range with count >= 2", raw);
          return std::nullopt;
        }
        std::vector<double> grid(*count);
        for (std::uint64_t i = 0; i < *count; ++i) {
          grid[i] = *lo + (*hi - *lo) * static_cast<double>(i) / static_cast<double>(*count - 1);
        }
        grid.back() = *hi;
        return ConfigValue(std::move(grid));
      }
      std::vector<double> list;
      for (const auto part : split(raw, ',')) {
        const auto v = parse_real(part);
        if (!v) {
          error = fmt::format("'{}' is not a list of real numbers", raw);
          return std::nullopt;
        }
        list.push_back(*v);
      }
      return ConfigValue(std::move(list));
    }
    case Type::integers: {
      std::vector<std::uint64_t> list;
      for (const auto part : split(raw, ',')) {
        const auto v = parse_integer(part);
        if (!v) {
          error = fmt::format("'{}' is not a list of non-negative integers", raw);
          return std::nullopt;
        }
        list.push_back(*v);
      }
      return ConfigValue(std::move(list));
    }
  }
  return std::nullopt;
}

struct Entry {
  ConfigValue value;
  std::string location;
};

// Keys each experiment reads, beyond the system/density/seed keys shared by
// all of them.
std::set<std::string_view> experiment_keys(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::evl_curve:
      return {"observable", "alpha", "D", "zeta", "n", "m", "y_grid", "tolerance"};
    case ExperimentKind::hts:
      return {"zeta", "delta", "m", "t_grid", "cap", "tolerance"};
    case ExperimentKind::rts:
      return {"zeta", "delta", "m", "t_grid", "cap", "budget", "tolerance"};
    case ExperimentKind::kac:
      return {"zeta", "delta", "m", "cap", "budget", "tolerance"};
    case ExperimentKind::epp_poisson:
      return {"observable", "alpha", "D", "y", "zeta", "n", "m", "horizon", "tolerance"};
    case ExperimentKind::htpp_poisson:
      return {"zeta", "delta", "m", "horizon", "tolerance"};
    case ExperimentKind::duality_check:
      return {"observable", "alpha", "D", "zeta", "n", "m"};
    case ExperimentKind::dprime:
      return {"observable", "alpha", "D", "y", "zeta", "n", "k_values", "budget"};
    case ExperimentKind::d3:
      return {"observable", "alpha", "D", "y", "zeta", "n", "m", "lags", "block"};
    case ExperimentKind::mixing:
      return {"zeta", "delta", "n", "kcap", "lcap", "length"};
    case ExperimentKind::expansivity:
      return {"starts", "length", "lambda", "tolerance"};
  }
  return {};
}

constexpr std::string_view kSharedKeys[] = {
    "system", "a", "gamma", "epsilon", "v_center", "v_radius", "declared_delta",
    "density", "hist_iterates", "hist_bins", "experiment", "seed", "burn_in", "out"};

class Resolver {
 public:
  std::map<std::string, Entry, std::less<>> entries;
  std::vector<std::string> violations;

  bool has(std::string_view key) const { return entries.find(key) != entries.end(); }
  const std::string& where(std::string_view key) const { return entries.find(key)->second.location; }
  template <typename T>
  const T& get(std::string_view key) const {
    return std::get<T>(entries.find(key)->second.value);
  }
  template <typename T>
  void set_default(std::string_view key, T value) {
    if (!has(key)) entries.emplace(std::string(key), Entry{ConfigValue(std::move(value)), "default"});
  }
  void fail(std::string_view key, const std::string& message) {
    violations.push_back(fmt::format("{}: {}", has(key) ? where(key) : "config", message));
  }
  void require(std::string_view key, std::string_view experiment) {
    if (!has(key)) {
      violations.push_back(
          fmt::format("config: missing required key '{}' for experiment '{}'", key, experiment));
    }
  }
  void positive_real(std::string_view key) {
    if (has(key) && !(get<double>(key) > 0.0)) {
      fail(key, fmt::format("{} must be positive (got {})", key, get<double>(key)));
    }
  }
  void positive_integer(std::string_view key) {
    if (has(key) && get<std::uint64_t>(key) == 0) fail(key, fmt::format("{} must be positive", key));
  }
};

std::optional<MapSystem> build_system(Resolver& r) {
  const std::string& name = r.get<std::string>("system");
  const auto only = [&](std::initializer_list<std::string_view> keys, std::string_view owner) {
    for (const auto key : keys) {
      if (r.has(key) && name != owner) r.fail(key, fmt::format("{} is {}-only", key, owner));
    }
  };
  only({"a"}, "quadratic");
  only({"gamma"}, "intermittent");
  only({"epsilon", "v_center", "v_radius", "declared_delta"}, "perturbed-expanding");
  try {
    if (name == "doubling") return MapSystem::doubling();
    if (name == "torus-doubling") return MapSystem::torus_doubling();
    if (name == "quadratic") {
      r.set_default("a", 2.0);
      return MapSystem::quadratic(r.get<double>("a"));
    }
    if (name == "intermittent") {
      if (!r.has("gamma")) {
        r.fail("system", "intermittent needs gamma");
        return std::nullopt;
      }
      return MapSystem::intermittent(r.get<double>("gamma"));
    }
    if (name == "perturbed-expanding") {
      PerturbationParams p;
      r.set_default("epsilon", p.epsilon);
      r.set_default("v_center", p.v_center);
      r.set_default("v_radius", p.v_radius);
      r.set_default("declared_delta", p.declared_delta);
      p.epsilon = r.get<double>("epsilon");
      p.v_center = r.get<double>("v_center");
      p.v_radius = r.get<double>("v_radius");
      p.declared_delta = r.get<double>("declared_delta");
      return MapSystem::perturbed_expanding(p);
    }
    r.fail("system", fmt::format("unknown system '{}' (expected doubling, quadratic, "
                                 "torus-doubling, perturbed-expanding or intermittent)", name));
  } catch (const std::exception& e) {
    r.fail("system", e.what());
  }
  return std::nullopt;
}

void resolve_observable(Resolver& r, bool uses_y) {
  r.set_default("observable", std::string("g1"));
  const std::string& type = r.get<std::string>("observable");
  if (type != "g1" && type != "g2" && type != "g3") {
    r.fail("observable", fmt::format("unknown observable '{}' (expected g1, g2 or g3)", type));
    return;
  }
  if (type == "g1" && r.has("alpha")) r.fail("alpha", "alpha is g2/g3-only");
  if (type != "g3" && r.has("D")) r.fail("D", "D is g3-only");
  if (type != "g1") {
    if (!r.has("alpha")) {
      r.fail("observable", fmt::format("{} needs alpha", type));
    } else {
      r.positive_real("alpha");
    }
  }
  if (type == "g3") r.set_default("D", 0.0);
  if (uses_y) r.set_default("y", type == "g1" ? 0.0 : type == "g2" ? 1.0 : -1.0);
  const auto in_domain = [&](double y) {
    if (type == "g2") return y > 0.0;
    if (type == "g3") return y < 0.0;
    return true;
  };
  if (r.has("y") && !in_domain(r.get<double>("y"))) {
    r.fail("y", fmt::format("y must be {} for {}", type == "g2" ? "positive" : "negative", type));
  }
  if (r.has("y_grid")) {
    for (const double y : r.get<std::vector<double>>("y_grid")) {
      if (!in_domain(y)) {
        r.fail("y_grid", fmt::format("y_grid value {} is outside the domain of {}", y, type));
        break;
      }
    }
  }
}

void resolve(Resolver& r) {
  if (!r.has("experiment")) {
    r.violations.push_back("config: missing required key 'experiment'");
    return;
  }
  const auto kind = parse_experiment_kind(r.get<std::string>("experiment"));
  if (!kind) {
    r.fail("experiment", fmt::format("unknown experiment '{}'", r.get<std::string>("experiment")));
    return;
  }
  const std::string_view kname = to_string(*kind);

  const auto used = experiment_keys(*kind);
  for (const auto& [key, entry] : r.entries) {
    const bool shared = std::find(std::begin(kSharedKeys), std::end(kSharedKeys), key) !=
                        std::end(kSharedKeys);
    if (!shared && !used.contains(key)) {
      r.fail(key, fmt::format("key '{}' is not used by experiment '{}'", key, kname));
    }
  }

  r.set_default("system", std::string("doubling"));
  r.set_default("seed", std::uint64_t{1});
  r.set_default("burn_in", std::uint64_t{1000});
  const auto system = build_system(r);

  for (const auto key : {"delta", "horizon", "lambda", "tolerance", "v_radius", "declared_delta"}) {
    r.positive_real(key);
  }
  for (const auto key : {"n", "m", "cap", "budget", "block", "kcap", "lcap", "starts", "length",
                         "hist_iterates", "hist_bins"}) {
    r.positive_integer(key);
  }

  if (system) {
    const bool closed = DensityModel::has_closed_form(*system);
    r.set_default("density", std::string(closed ? "closed-form" : "histogram"));
    const std::string& density = r.get<std::string>("density");
    if (density == "closed-form" && !closed) {
      r.fail("density", fmt::format("no closed-form density for {}", system->name()));
    } else if (density != "closed-form" && density != "histogram") {
      r.fail("density", "density must be closed-form or histogram");
    }
    if (density == "histogram") {
      r.set_default("hist_iterates", std::uint64_t{10'000'000});
      r.set_default("hist_bins", static_cast<std::uint64_t>(Histogram::default_bins(system->space())));
    } else {
      for (const auto key : {"hist_iterates", "hist_bins"}) {
        if (r.has(key)) r.fail(key, fmt::format("{} needs density = histogram", key));
      }
    }
    if (used.contains("zeta")) {
      r.require("zeta", kname);
      if (r.has("zeta")) {
        const auto& z = r.get<std::vector<double>>("zeta");
        const auto dim = static_cast<std::size_t>(system->space().dimension());
        if (z.size() != dim) {
          r.fail("zeta", fmt::format("zeta needs {} coordinate(s) for {}", dim, system->name()));
        } else if (!system->space().contains({z[0], dim == 2 ? z[1] : 0.0})) {
          r.fail("zeta", fmt::format("zeta is outside {}", system->space().describe()));
        }
      }
    }
  }

  const bool needs_observable = used.contains("observable");
  if (needs_observable) resolve_observable(r, used.contains("y"));

  const auto grid = [&](std::string_view key) {
    if (!r.has(key)) return;
    const auto& g = r.get<std::vector<double>>(key);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] < 0.0 || (i > 0 && g[i] < g[i - 1])) {
        r.fail(key, fmt::format("{} must be non-negative and nondecreasing", key));
        return;
      }
    }
  };

  switch (*kind) {
    case ExperimentKind::evl_curve: {
      r.set_default("n", std::uint64_t{10'000});
      r.set_default("m", std::uint64_t{10'000});
      r.set_default("tolerance", 0.03);
      if (needs_observable && r.has("observable") && !r.has("y_grid")) {
        const std::string& type = r.get<std::string>("observable");
        const double lo = type == "g1" ? -2.0 : type == "g2" ? 0.2 : -4.2;
        const double hi = type == "g1" ? 4.0 : type == "g2" ? 4.2 : -0.2;
        std::vector<double> ys(21);
        for (int i = 0; i < 21; ++i) ys[i] = lo + (hi - lo) * i / 20.0;
        ys.back() = hi;
        r.set_default("y_grid", ys);
      }
      break;
    }
    case ExperimentKind::hts:
    case ExperimentKind::rts: {
      r.require("delta", kname);
      r.set_default("m", std::uint64_t{10'000});
      r.set_default("tolerance", 0.03);
      std::vector<double> ts(21);
      for (int i = 0; i < 21; ++i) ts[i] = 0.25 * i;
      r.set_default("t_grid", ts);
      grid("t_grid");
      break;
    }
    case ExperimentKind::kac:
      r.require("delta", kname);
      r.set_default("m", std::uint64_t{10'000});
      r.set_default("tolerance", 0.05);
      if (r.has("m") && r.get<std::uint64_t>("m") < 100) r.fail("m", "kac needs m >= 100");
      break;
    case ExperimentKind::epp_poisson:
    case ExperimentKind::htpp_poisson:
      if (*kind == ExperimentKind::htpp_poisson) {
        r.require("delta", kname);
      } else {
        r.set_default("n", std::uint64_t{10'000});
      }
      r.set_default("m", std::uint64_t{10'000});
      r.set_default("horizon", 3.0);
      r.set_default("tolerance", 0.03);
      if (r.has("horizon") && r.get<double>("horizon") < 3.0) {
        r.fail("horizon", "horizon must be at least 3 (count window [0,2), increments up to 3)");
      }
      if (r.has("m") && r.get<std::uint64_t>("m") < 1000) {
        r.fail("m", "Poisson tests need m >= 1000");
      }
      break;
    case ExperimentKind::duality_check:
      r.set_default("n", std::uint64_t{10'000});
      r.set_default("m", std::uint64_t{10'000});
      break;
    case ExperimentKind::dprime:
      r.set_default("n", std::uint64_t{10'000});
      r.set_default("k_values", std::vector<std::uint64_t>{5, 10, 20});
      r.set_default("budget", std::uint64_t{100'000'000});
      if (r.has("k_values")) {
        for (const auto k : r.get<std::vector<std::uint64_t>>("k_values")) {
          if (k == 0) r.fail("k_values", "k_values must be positive");
        }
      }
      break;
    case ExperimentKind::d3:
      r.set_default("n", std::uint64_t{10'000});
      r.set_default("m", std::uint64_t{100'000});
      r.set_default("lags", std::vector<std::uint64_t>{1, 10, 100});
      r.set_default("block", std::uint64_t{100});
      if (r.has("m") && r.get<std::uint64_t>("m") < 2) r.fail("m", "d3 needs m >= 2");
      break;
    case ExperimentKind::mixing:
      r.require("delta", kname);
      r.set_default("n", std::uint64_t{10});
      r.set_default("kcap", std::uint64_t{4});
      r.set_default("lcap", std::uint64_t{4});
      r.set_default("length", std::uint64_t{1'000'000});
      for (const auto key : {"kcap", "lcap"}) {
        if (r.has(key) && r.get<std::uint64_t>(key) > 8) r.fail(key, fmt::format("{} must be <= 8", key));
      }
      break;
    case ExperimentKind::expansivity:
      r.set_default("starts", std::uint64_t{1000});
      r.set_default("length", std::uint64_t{10'000});
      r.set_default("lambda", 0.1);
      r.set_default("tolerance", 0.01);
      break;
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

const std::vector<ExperimentKind>& all_experiment_kinds() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> v;
    for (const auto& [k, name] : kKindNames) v.push_back(k);
    return v;
  }();
  return kinds;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string s = "invalid config:";
  for (const auto& p : parts) s += "\n  " + p;
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

ExperimentKind ExperimentConfig::experiment() const {
  return *parse_experiment_kind(text("experiment"));
}

bool ExperimentConfig::has(std::string_view key) const { return values_.find(key) != values_.end(); }

namespace {

template <typename T>
const T& lookup(const std::map<std::string, ConfigValue, std::less<>>& values, std::string_view key) {
  const auto it = values.find(key);
  if (it == values.end()) throw std::out_of_range(fmt::format("config key '{}' is not set", key));
  if (const T* v = std::get_if<T>(&it->second)) return *v;
  throw std::logic_error(fmt::format("config key '{}' has a different type", key));
}

}  // namespace

const std::string& ExperimentConfig::text(std::string_view key) const {
  return lookup<std::string>(values_, key);
}
double ExperimentConfig::real(std::string_view key) const { return lookup<double>(values_, key); }
std::uint64_t ExperimentConfig::integer(std::string_view key) const {
  return lookup<std::uint64_t>(values_, key);
}
const std::vector<double>& ExperimentConfig::reals(std::string_view key) const {
  return lookup<std::vector<double>>(values_, key);
}
const std::vector<std::uint64_t>& ExperimentConfig::integers(std::string_view key) const {
  return lookup<std::vector<std::uint64_t>>(values_, key);
}

ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  Resolver r;
  std::string section;
  std::size_t line_no = 0;

  const auto assign = [&](std::string_view key, std::string_view raw, const std::string& location,
                          bool replace) {
    const KeySpec* spec = find_key(key);
    if (!spec) {
      r.violations.push_back(fmt::format("{}: unknown key '{}'", location, key));
      return;
    }
    if (!replace && !section.empty() && section != spec->section) {
      r.violations.push_back(fmt::format("{}: key '{}' belongs in [{}], not [{}]", location, key,
                                         spec->section, section));
      return;
    }
    if (!replace && r.has(key)) {
      r.violations.push_back(fmt::format("{}: duplicate key '{}' (first set at {})", location, key,
                                         r.where(key)));
      return;
    }
    std::string error;
    auto value = parse_value(spec->type, raw, error);
    if (!value) {
      r.violations.push_back(fmt::format("{}: {}: {}", location, key, error));
      return;
    }
    r.entries.insert_or_assign(std::string(key), Entry{std::move(*value), location});
  };

  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string location = fmt::format("line {}", line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        r.violations.push_back(fmt::format("{}: malformed section header", location));
        continue;
      }
      const auto name = trim(line.substr(1, line.size() - 2));
      if (std::find(std::begin(kSections), std::end(kSections), name) == std::end(kSections)) {
        r.violations.push_back(fmt::format("{}: unknown section [{}]", location, name));
      }
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      r.violations.push_back(fmt::format("{}: expected key = value", location));
      continue;
    }
    assign(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), location, false);
  }

  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const std::string location = fmt::format("override '{}'", o);
    if (eq == std::string::npos) {
      r.violations.push_back(fmt::format("{}: expected key=value", location));
      continue;
    }
    std::string_view ov(o);
    assign(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)), location, true);
  }

  resolve(r);
  if (!r.violations.empty()) throw ConfigError(std::move(r.violations));

  ExperimentConfig config;
  for (auto& [key, entry] : r.entries) config.values_.emplace(key, std::move(entry.value));
  return config;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides);
}

namespace {

std::string emit_value(const ConfigValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, double>) {
          return fmt::format("{:.17g}", x);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          return fmt::format("{}", x);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::string s;
          for (std::size_t i = 0; i < x.size(); ++i) s += fmt::format("{}{:.17g}", i ? ", " : "", x[i]);
          return s;
        } else {
          std::string s;
          for (std::size_t i = 0; i < x.size(); ++i) s += fmt::format("{}{}", i ? ", " : "", x[i]);
          return s;
        }
      },
      v);
}

}  // namespace

std::string emit_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto section : kSections) {
    bool header = false;
    for (const auto& key : kKeys) {
      if (key.section != section) continue;
      const auto it = config.values().find(key.name);
      if (it == config.values().end()) continue;
      if (!header) {
        out += fmt::format("{}[{}]\n", out.empty() ? "" : "\n", section);
        header = true;
      }
      out += fmt::format("{} = {}\n", key.name, emit_value(it->second));
    }
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& k : kKeys) keys.push_back(fmt::format("[{}] {}", k.section, k.name));
  return keys;
}

}  // namespace hitlab
