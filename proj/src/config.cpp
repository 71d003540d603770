// Copyright 2026 The solartwin Authors. All Rights Reserved.
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

#include "solartwin/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "solartwin/csv.hpp"
#include "solartwin/error.hpp"

namespace solartwin {
namespace {

using Setter = std::function<void(const std::string&)>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

class Parser {
 public:
  Parser(std::filesystem::path base, std::string source) : base_(std::move(base)), source_(std::move(source)) {}

  void set_key(const std::string& key) { key_ = key; }

  [[noreturn]] void fail(const std::string& value, std::string_view expected) const {
    throw ConfigError(fmt::format("{}: {} = '{}': expected {}", source_, key_, value, expected));
  }

  double number(const std::string& v) const {
    if (auto x = csv::parse_number(trim(v))) return *x;
    fail(v, "a number");
  }

  std::int64_t integer(const std::string& v) const {
    if (auto x = csv::parse_integer(trim(v))) return *x;
    fail(v, "an integer");
  }

  std::uint64_t u64(const std::string& v) const {
    const std::string t = trim(v);
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc{} || p != t.data() + t.size() || t.empty()) fail(v, "an unsigned 64-bit integer");
    return out;
  }

  bool boolean(const std::string& v) const {
    const std::string t = trim(v);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    fail(v, "true or false");
  }

  std::filesystem::path path(const std::string& v) const {
    std::filesystem::path p(trim(v));
    return p.is_relative() && !base_.empty() ? base_ / p : p;
  }

  // "a:1,b:2" -> [(a, 1), (b, 2)]
  std::vector<std::pair<std::string, double>> pairs(const std::string& v) const {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& item : csv::split(v, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) fail(v, "a list of name:weight pairs");
      out.emplace_back(trim(item.substr(0, colon)), number(item.substr(colon + 1)));
    }
    if (out.empty()) fail(v, "a non-empty list");
    return out;
  }

  std::vector<double> numbers(const std::string& v) const {
    std::vector<double> out;
    for (const auto& item : csv::split(v, ',')) out.push_back(number(item));
    return out;
  }

  Azimuth azimuth(const std::string& name, const std::string& v) const {
    if (auto a = parse_azimuth(name)) return *a;
    fail(v, "compass sectors N, NE, E, SE, S, SW, W, NW");
  }

 private:
  std::filesystem::path base_;
  std::string source_;
  std::string key_;
};

std::map<std::string, Setter> setters(RunConfig& c, Parser& p) {
  std::map<std::string, Setter> s;
  auto orientation = [&p](std::vector<OrientationWeight>& table) {
    return [&p, &table](const std::string& v) {
      table.clear();
      // "tilt/sector:weight" entries, e.g. 25/S:0.1
      for (const auto& [name, weight] : p.pairs(v)) {
        const auto slash = name.find('/');
        if (slash == std::string::npos) p.fail(v, "tilt/sector:weight entries");
        table.push_back({p.number(name.substr(0, slash)), p.azimuth(name.substr(slash + 1), v), weight});
      }
    };
  };
  auto planes = [&p](std::vector<std::pair<int, double>>& table) {
    return [&p, &table](const std::string& v) {
      table.clear();
      for (const auto& [name, weight] : p.pairs(v)) table.emplace_back(static_cast<int>(p.integer(name)), weight);
    };
  };
  auto area = [&p](ExponentialAreaModel& m) {
    return [&p, &m](const std::string& v) {
      const auto xs = p.numbers(v);
      if (xs.size() != 2) p.fail(v, "rate,location");
      m = {xs[0], xs[1]};
    };
  };
  auto gbt = [&s, &p](const std::string& prefix, GbtParams& g) {
    s[prefix + "rounds"] = [&p, &g](const std::string& v) { g.rounds = static_cast<int>(p.integer(v)); };
    s[prefix + "max_depth"] = [&p, &g](const std::string& v) { g.max_depth = static_cast<int>(p.integer(v)); };
    s[prefix + "learning_rate"] = [&p, &g](const std::string& v) { g.learning_rate = p.number(v); };
    s[prefix + "lambda"] = [&p, &g](const std::string& v) { g.lambda = p.number(v); };
    s[prefix + "min_child_weight"] = [&p, &g](const std::string& v) { g.min_child_weight = p.number(v); };
  };

  s["run.seed"] = [&](const std::string& v) { c.seed = p.u64(v); };
  s["run.workers"] = [&](const std::string& v) { c.workers = static_cast<int>(p.integer(v)); };
  s["run.data_dir"] = [&](const std::string& v) { c.data_dir = p.path(v); };
  s["run.out_dir"] = [&](const std::string& v) { c.out_dir = p.path(v); };

  s["paths.survey"] = [&](const std::string& v) { c.survey = p.path(v); };
  s["paths.population"] = [&](const std::string& v) { c.population = p.path(v); };
  s["paths.truth"] = [&](const std::string& v) { c.truth = p.path(v); };
  s["paths.targets"] = [&](const std::string& v) { c.targets = p.path(v); };
  s["paths.irradiance_dir"] = [&](const std::string& v) { c.irradiance_dir = p.path(v); };
  s["paths.network"] = [&](const std::string& v) { c.network = p.path(v); };
  s["paths.reference_dir"] = [&](const std::string& v) { c.reference_dir = p.path(v); };

  s["toygen.households"] = [&](const std::string& v) { c.toy.n_households = p.integer(v); };
  s["toygen.tracts"] = [&](const std::string& v) { c.toy.n_tracts = p.integer(v); };
  s["toygen.adopter_fraction"] = [&](const std::string& v) { c.toy.adopter_fraction = p.number(v); };
  s["toygen.lmi_fraction"] = [&](const std::string& v) { c.toy.lmi_fraction = p.number(v); };
  s["toygen.rural_fraction"] = [&](const std::string& v) { c.toy.rural_fraction = p.number(v); };
  s["toygen.days"] = [&](const std::string& v) { c.toy.days = p.integer(v); };
  s["toygen.start_date"] = [&](const std::string& v) { c.toy.start_date = parse_date(trim(v)); };
  s["toygen.signal_shift"] = [&](const std::string& v) { c.toy.signal_shift = p.number(v); };
  s["toygen.peak_ghi"] = [&](const std::string& v) { c.toy.peak_ghi = p.number(v); };
  s["toygen.cloud_min"] = [&](const std::string& v) { c.toy.cloud_min = p.number(v); };
  s["toygen.lat_min"] = [&](const std::string& v) { c.toy.latitude_band.first = p.number(v); };
  s["toygen.lat_max"] = [&](const std::string& v) { c.toy.latitude_band.second = p.number(v); };
  s["toygen.state"] = [&](const std::string& v) { c.toy.state = trim(v); };
  s["toygen.state_fips"] = [&](const std::string& v) { c.toy.state_fips = trim(v); };
  s["toygen.edge_prob"] = [&](const std::string& v) { c.network_edge_prob = p.number(v); };
  s["toygen.groups"] = [&](const std::string& v) { c.network_groups = static_cast<std::size_t>(p.integer(v)); };

  s["preprocess.oversample"] = [&](const std::string& v) {
    const std::string t = trim(v);
    if (t == "smoten") {
      c.oversample = true;
      c.oversample_method = OversampleMethod::Smoten;
    } else if (t == "random") {
      c.oversample = true;
      c.oversample_method = OversampleMethod::Random;
    } else if (t == "none") {
      c.oversample = false;
    } else {
      p.fail(v, "smoten, random or none");
    }
  };
  s["preprocess.k"] = [&](const std::string& v) { c.smoten_k = static_cast<int>(p.integer(v)); };

  gbt("classify.deep_", c.ensemble.deep);
  gbt("classify.shallow_", c.ensemble.shallow);

  s["sqft.subclasses"] = [&](const std::string& v) { c.sqft.subclasses = static_cast<int>(p.integer(v)); };
  s["sqft.subclass_draws"] = [&](const std::string& v) { c.sqft.subclass_draws = static_cast<int>(p.integer(v)); };
  s["sqft.uniform_draws"] = [&](const std::string& v) { c.sqft.uniform_draws = static_cast<int>(p.integer(v)); };
  s["sqft.uniform_fallback"] = [&](const std::string& v) { c.sqft.uniform_fallback = p.boolean(v); };
  s["sqft.bounds"] = [&](const std::string& v) {
    const auto xs = p.numbers(v);
    if (xs.size() != c.sqft.classes.bounds.size()) p.fail(v, "nine ascending class bounds");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0 && !(xs[i] > xs[i - 1])) p.fail(v, "nine ascending class bounds");
      c.sqft.classes.bounds[i] = xs[i];
    }
  };

  s["calibrate.budget"] = [&](const std::string& v) { c.calibration.budget = static_cast<int>(p.integer(v)); };
  s["calibrate.init"] = [&](const std::string& v) { c.calibration.init = static_cast<int>(p.integer(v)); };
  s["calibrate.tolerance"] = [&](const std::string& v) { c.calibration.tolerance_fraction = p.number(v); };
  gbt("calibrate.", c.calibration.gbt);

  s["generate.period"] = [&](const std::string& v) { c.period = Period::parse(trim(v)); };

  s["pv.samples"] = [&](const std::string& v) { c.pv.samples = static_cast<int>(p.integer(v)); };
  s["pv.area_candidates"] = [&](const std::string& v) { c.pv.area_candidates = static_cast<int>(p.integer(v)); };
  s["pv.roof_factor"] = [&](const std::string& v) { c.pv.roof_factor = p.number(v); };
  s["pv.small_roof_limit_m2"] = [&](const std::string& v) { c.pv.small_roof_limit_m2 = p.number(v); };
  s["pv.panel_area_m2"] = [&](const std::string& v) { c.pv.panel_area_m2 = p.number(v); };
  s["pv.yield_min"] = [&](const std::string& v) { c.pv.yield_min = p.number(v); };
  s["pv.yield_max"] = [&](const std::string& v) { c.pv.yield_max = p.number(v); };
  s["pv.ratio_min"] = [&](const std::string& v) { c.pv.ratio_min = p.number(v); };
  s["pv.ratio_max"] = [&](const std::string& v) { c.pv.ratio_max = p.number(v); };
  s["pv.planes_small"] = planes(c.pv.planes_small);
  s["pv.planes_medium"] = planes(c.pv.planes_medium);
  s["pv.area_small_single"] = area(c.pv.small_single);
  s["pv.area_small_multi"] = area(c.pv.small_multi);
  s["pv.area_medium_single"] = area(c.pv.medium_single);
  s["pv.area_medium_multi"] = area(c.pv.medium_multi);
  s["pv.orientations_small"] = orientation(c.pv.orientations_small);
  s["pv.orientations_medium"] = orientation(c.pv.orientations_medium);
  s["pv.degradation"] = [&](const std::string& v) {
    for (const auto& [name, factor] : p.pairs(v)) c.pv.degradation.factor[static_cast<std::size_t>(p.azimuth(name, v))] = factor;
  };

  s["diffusion.cases"] = [&](const std::string& v) {
    c.cases.clear();
    const std::string t = trim(v);
    if (t == "all") {
      c.cases.assign(kAllPolicyCases.begin(), kAllPolicyCases.end());
      return;
    }
    for (const auto& item : csv::split(t, ',')) c.cases.push_back(parse_case(trim(item)));
  };
  s["diffusion.steps"] = [&](const std::string& v) { c.diffusion.time_steps = static_cast<int>(p.integer(v)); };
  s["diffusion.iterations"] = [&](const std::string& v) { c.diffusion.iterations = static_cast<int>(p.integer(v)); };
  s["diffusion.w1"] = [&](const std::string& v) { c.diffusion.weights.personal = p.number(v); };
  s["diffusion.w2"] = [&](const std::string& v) { c.diffusion.weights.community = p.number(v); };
  s["diffusion.w3"] = [&](const std::string& v) { c.diffusion.weights.neighbor = p.number(v); };
  s["diffusion.non_lmi_probability"] = [&](const std::string& v) { c.diffusion.non_lmi_probability = p.number(v); };
  s["diffusion.cost_per_watt"] = [&](const std::string& v) { c.diffusion.rebate.cost_per_watt = p.number(v); };
  s["diffusion.credit_rate"] = [&](const std::string& v) { c.diffusion.rebate.credit_rate = p.number(v); };
  s["diffusion.lmi_extra_credit"] = [&](const std::string& v) { c.diffusion.rebate.lmi_extra_credit = p.number(v); };
  s["diffusion.capacity_factor"] = [&](const std::string& v) { c.diffusion.rebate.capacity_factor = p.number(v); };
  s["diffusion.bins"] = [&](const std::string& v) { c.diffusion.rebate.bins = static_cast<int>(p.integer(v)); };

  s["validate.histogram_bins"] = [&](const std::string& v) { c.histogram_bins = static_cast<int>(p.integer(v)); };
  s["validate.kde_grid"] = [&](const std::string& v) { c.kde_grid = static_cast<int>(p.integer(v)); };
  return s;
}

}  // namespace

void RunConfig::finalize() {
  auto fill = [](std::filesystem::path& p, const std::filesystem::path& dir, const char* name) {
    if (p.empty()) p = dir / name;
  };
  fill(survey, data_dir, "survey.csv");
  fill(population, data_dir, "population.csv");
  fill(truth, data_dir, "population_truth.csv");
  fill(targets, data_dir, "targets.csv");
  fill(irradiance_dir, data_dir, "irradiance");
  fill(network, data_dir, "network.edges");
  fill(reference_dir, out_dir, "reference");

  if (workers < 1) throw ConfigError("run.workers must be >= 1");
  toy.seed = seed;
  toy.validate();
  if (!(network_edge_prob >= 0.0 && network_edge_prob <= 1.0)) throw ConfigError("toygen.edge_prob must be in [0, 1]");
  if (network_groups < 1) throw ConfigError("toygen.groups must be >= 1");
  if (smoten_k < 1) throw ConfigError("preprocess.k must be >= 1");
  ensemble.deep.validate();
  ensemble.shallow.validate();
  if (sqft.subclasses < 1 || sqft.subclass_draws < 1 || sqft.uniform_draws < 1)
    throw ConfigError("sqft: subclasses and draw counts must be >= 1");
  calibration.seed = seed;
  calibration.validate();
  pv.validate();
  diffusion.seed = seed;
  diffusion.validate();
  if (cases.empty()) throw ConfigError("diffusion.cases is empty");
  if (histogram_bins < 1) throw ConfigError("validate.histogram_bins must be >= 1");
  if (kde_grid < 2) throw ConfigError("validate.kde_grid must be >= 2");
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir, std::string_view source) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("{} line {}: {}", source, e.line(), e.message()));
  }
  RunConfig cfg;
  cfg.data_dir = base_dir / cfg.data_dir;
  cfg.out_dir = base_dir / cfg.out_dir;
  Parser parser(base_dir, std::string(source));
  const auto table = setters(cfg, parser);
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty())
      throw ConfigError(fmt::format("{}: key '{}' outside any section", source, section));
    for (const auto& [key, value] : keys) {
      const std::string name = section + "." + key;
      const auto it = table.find(name);
      if (it == table.end()) throw ConfigError(fmt::format("{}: unknown key {}", source, name));
      parser.set_key(name);
      it->second(value.data());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(fmt::format("cannot open config {}", path.string()));
  return parse_config(in, path.parent_path(), path.string());
}

}  // namespace solartwin
