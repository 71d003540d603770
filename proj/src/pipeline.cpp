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

#include "solartwin/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "solartwin/csv.hpp"
#include "solartwin/dataset.hpp"
#include "solartwin/error.hpp"
#include "solartwin/metrics.hpp"
#include "solartwin/rng.hpp"

namespace solartwin {
namespace {

// Stream keys for seeds derived from the run seed.
enum : std::uint64_t {
  kSurveyStream = 1,
  kTruthStream,
  kNetworkStream,
  kReferenceStream,
  kOversampleStream,
  kSqftStream,
  kProfileStream,
  kDiffusionStream,
};

// FNV-1a, stable across standard libraries.
std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
  return h;
}

std::filesystem::path out_path(const RunConfig& cfg, std::string_view name) { return cfg.out_dir / name; }

void require_file(const std::filesystem::path& p, std::string_view produced_by) {
  if (!std::filesystem::exists(p))
    throw IngestError(fmt::format("missing input {} (run '{}' first)", p.string(), produced_by));
}

HouseholdTable load_required(const std::filesystem::path& p, std::string_view produced_by) {
  require_file(p, produced_by);
  return load_households(p);
}

ToyConfig toy_config(const RunConfig& cfg, std::uint64_t stream) {
  ToyConfig toy = cfg.toy;
  toy.seed = stream == 0 ? cfg.seed : derive_seed(cfg.seed, stream);
  return toy;
}

LabeledDataset sqft_training_set(const RunConfig& cfg, const HouseholdTable& survey) {
  DatasetOptions opts;
  opts.label = LabelColumn::SqftClass;
  LabeledDataset data = make_dataset(survey, opts);
  if (data.rows() == 0) throw IngestError(fmt::format("{}: no households carry sqft_class", cfg.survey.string()));
  return data;
}

LabeledDataset balanced(const RunConfig& cfg, const LabeledDataset& data) {
  return smoten_oversample(data, cfg.smoten_k, derive_seed(cfg.seed, kOversampleStream), cfg.oversample_method);
}

std::map<std::string, IrradianceSeries> load_irradiance_required(const RunConfig& cfg) {
  require_file(cfg.irradiance_dir, "toygen irradiance");
  return load_irradiance_dir(cfg.irradiance_dir);
}

std::map<std::int64_t, std::string> state_by_id(const HouseholdTable& table) {
  std::map<std::int64_t, std::string> out;
  for (const auto& h : table) out.emplace(h.id, h.state);
  return out;
}

struct ProfileData {
  std::vector<DailyRow> daily;
  std::vector<HourlyObservation> hourly;
};

ProfileData load_profile_dir(const std::filesystem::path& dir, const Period& period) {
  const auto daily_file = dir / fmt::format("daily_{}.csv", period.label());
  require_file(daily_file, "generate");
  ProfileData data;
  data.daily = load_daily(daily_file);
  for (Date d : period.dates()) {
    const auto file = dir / fmt::format("profiles_{}.csv", format_date(d));
    require_file(file, "generate");
    for (const auto& r : load_hourly(file)) {
      const std::chrono::year_month_day ymd{r.date};
      data.hourly.push_back({static_cast<int>(static_cast<unsigned>(ymd.month())), r.hour, r.mean_kwh});
    }
  }
  return data;
}

}  // namespace

void cmd_toygen(const RunConfig& cfg, std::string_view what) {
  const bool all = what == "all";
  if (!all && what != "population" && what != "irradiance" && what != "network")
    throw ConfigError(fmt::format("toygen: unknown target '{}' (population, irradiance, network or all)", what));

  if (all || what == "population") {
    const HouseholdTable survey = gen_population(toy_config(cfg, kSurveyStream));
    const HouseholdTable truth = gen_population(toy_config(cfg, kTruthStream));
    HouseholdTable population = truth;
    std::map<std::string, std::int64_t> adopters;
    for (auto& h : population) {
      adopters[h.state] += h.solar.value_or(false) ? 1 : 0;
      h.sqft_class.reset();
      h.sqft_value.reset();
      h.solar.reset();
    }
    std::vector<AdopterTarget> targets;
    for (const auto& [state, count] : adopters) targets.push_back({state, count});
    save_households(cfg.survey, survey);
    save_households(cfg.truth, truth);
    save_households(cfg.population, population);
    save_targets(cfg.targets, targets);
    spdlog::info("toygen: {} survey and {} population households", survey.size(), population.size());
  }
  if (all || what == "irradiance") {
    const ToyConfig toy = toy_config(cfg, 0);
    std::filesystem::create_directories(cfg.irradiance_dir);
    for (std::int64_t t = 0; t < toy.n_tracts; ++t) {
      const auto series = gen_irradiance(toy, t);
      save_irradiance(cfg.irradiance_dir / fmt::format("irradiance_{}.csv", series.tract), series);
    }
    spdlog::info("toygen: irradiance for {} tracts", toy.n_tracts);
  }
  if (all || what == "network") {
    const Graph g = gen_network(static_cast<std::size_t>(cfg.toy.n_households), cfg.network_edge_prob,
                                cfg.network_groups, derive_seed(cfg.seed, kNetworkStream));
    save_network(cfg.network, g);
    spdlog::info("toygen: network with {} edges", g.edges.size());
  }
}

void cmd_preprocess(const RunConfig& cfg, std::string_view what) {
  if (what != "smoten" && what != "corr")
    throw ConfigError(fmt::format("preprocess: unknown action '{}' (smoten or corr)", what));
  const HouseholdTable survey = load_required(cfg.survey, "toygen population");
  const LabeledDataset data = sqft_training_set(cfg, survey);
  const LabeledDataset up = balanced(cfg, data);
  if (what == "smoten") {
    save_dataset(out_path(cfg, artifacts::kBalancedSqft), up);
    spdlog::info("preprocess: {} rows oversampled to {}", data.rows(), up.rows());
    return;
  }
  const Eigen::MatrixXd before = correlation_matrix(data, true);
  const Eigen::MatrixXd after = correlation_matrix(up, true);
  auto names = data.feature_names;
  names.push_back("sqft_class");
  save_matrix(out_path(cfg, artifacts::kCramersOriginal), before, names);
  save_matrix(out_path(cfg, artifacts::kCramersBalanced), after, names);
  spdlog::info("preprocess: max |delta Cramer's V| = {:.4f}", (before - after).cwiseAbs().maxCoeff());
}

void cmd_classify_sqft(const RunConfig& cfg) {
  const HouseholdTable survey = load_required(cfg.survey, "toygen population");
  HouseholdTable population = load_required(cfg.population, "toygen population");
  LabeledDataset data = sqft_training_set(cfg, survey);
  if (cfg.oversample) data = balanced(cfg, data);
  const VotingEnsemble ensemble = train_sqft_ensemble(data, cfg.ensemble);

  DatasetOptions opts;
  const CodeMatrix x = feature_matrix(population, opts);
  const Eigen::VectorXi cls = ensemble.predict(x);
  for (std::size_t i = 0; i < population.size(); ++i) population[i].sqft_class = cls(static_cast<Eigen::Index>(i));
  save_households(out_path(cfg, artifacts::kPopulationSqftClass), population);
  spdlog::info("classify-sqft: labeled {} households", population.size());
}

void cmd_estimate_sqft(const RunConfig& cfg) {
  const HouseholdTable survey = load_required(cfg.survey, "toygen population");
  const HouseholdTable population =
      load_required(out_path(cfg, artifacts::kPopulationSqftClass), "classify-sqft");
  const auto weights = fit_subclass_weights(survey, cfg.sqft);
  const HouseholdTable out =
      estimate_population_sqft(population, weights, cfg.sqft, derive_seed(cfg.seed, kSqftStream));
  save_households(out_path(cfg, artifacts::kPopulationSqft), out);
  spdlog::info("estimate-sqft: estimated {} households", out.size());
}

void cmd_calibrate(const RunConfig& cfg) {
  const HouseholdTable survey = load_required(cfg.survey, "toygen population");
  HouseholdTable population = load_required(out_path(cfg, artifacts::kPopulationSqft), "estimate-sqft");
  require_file(cfg.targets, "toygen population");
  const auto targets = load_targets(cfg.targets);

  DatasetOptions opts;
  opts.label = LabelColumn::Solar;
  opts.include_sqft_class = true;
  const LabeledDataset train = make_dataset(survey, opts);
  if (train.rows() == 0) throw IngestError(fmt::format("{}: no households carry a solar label", cfg.survey.string()));

  std::set<std::string> states;
  for (const auto& h : population) states.insert(h.state);
  std::map<std::string, std::int64_t> target_of;
  for (const auto& t : targets) target_of[t.state] = t.count;
  for (const auto& s : states)
    if (!target_of.contains(s)) throw IngestError(fmt::format("{}: no target for state {}", cfg.targets.string(), s));

  const bool single = states.size() == 1;
  for (const auto& state : states) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < population.size(); ++i)
      if (population[i].state == state) rows.push_back(i);
    HouseholdTable subset;
    for (std::size_t i : rows) subset.push_back(population[i]);
    const CodeMatrix apply = feature_matrix(subset, opts);

    CalibrationOptions options = cfg.calibration;
    options.seed = single ? cfg.seed : derive_seed(cfg.seed, stable_hash(state));
    const std::int64_t target = target_of.at(state);
    if (target > apply.rows())
      throw DomainError(fmt::format("calibrate: target {} exceeds the {} households of state {}", target,
                                    apply.rows(), state));
    AdoptionCounter counter(train, apply, options.gbt);
    const CalibrationResult result =
        calibrate([&counter](double b, double t) { return counter(b, t); }, target, options);

    const std::string suffix = single ? "" : "_" + state;
    auto with_suffix = [&](std::string_view name) {
      std::string s(name);
      const auto dot = s.rfind('.');
      return out_path(cfg, s.substr(0, dot) + suffix + s.substr(dot));
    };
    save_trace(with_suffix(artifacts::kTrace), result);
    {
      auto out = csv::open_output(with_suffix(artifacts::kModel));
      write_model(out, counter.model(result.beta_star));
    }
    const Eigen::VectorXd& p = counter.probabilities(result.beta_star);
    for (std::size_t k = 0; k < rows.size(); ++k)
      population[rows[k]].solar = apply_threshold(p(static_cast<Eigen::Index>(k)), result.tau_star) == 1;
    spdlog::info("calibrate[{}]: beta={} tau={} discrepancy={} after {} rounds{}", state, result.beta_star,
                 result.tau_star, result.discrepancy, result.rounds_used, result.converged ? "" : " (not converged)");
  }
  save_households(out_path(cfg, artifacts::kPopulationSolar), population);
}

void cmd_generate(const RunConfig& cfg, bool reference) {
  const HouseholdTable population = reference ? load_required(cfg.truth, "toygen population")
                                              : load_required(out_path(cfg, artifacts::kPopulationSolar), "calibrate");
  const auto irradiance = load_irradiance_required(cfg);
  const std::uint64_t seed = reference ? derive_seed(cfg.seed, kReferenceStream) : derive_seed(cfg.seed, kProfileStream);
  const ProfileSet set = generate_profiles(population, irradiance, cfg.period, cfg.workers, seed, cfg.pv);
  const auto dir = reference ? cfg.reference_dir : out_path(cfg, artifacts::kProfilesDir);
  write_profiles(dir, set, cfg.period);
  spdlog::info("generate: {} household-days written to {}", set.profiles.size(), dir.string());
}

void cmd_validate(const RunConfig& cfg) {
  const HouseholdTable synth_pop = load_required(out_path(cfg, artifacts::kPopulationSolar), "calibrate");
  const HouseholdTable ref_pop = load_required(cfg.truth, "toygen population");
  require_file(cfg.targets, "toygen population");
  const auto targets = load_targets(cfg.targets);
  const ProfileData synth = load_profile_dir(out_path(cfg, artifacts::kProfilesDir), cfg.period);
  const ProfileData ref = load_profile_dir(cfg.reference_dir, cfg.period);

  struct Row {
    std::string metric, scope;
    std::optional<double> value;
  };
  std::vector<Row> rows;

  const auto synth_state = state_by_id(synth_pop);
  const auto ref_state = state_by_id(ref_pop);
  std::set<std::string> states;
  for (const auto& t : targets) states.insert(t.state);
  for (const auto& state : states) {
    std::vector<double> a, a_std, b;
    for (const auto& r : synth.daily)
      if (synth_state.at(r.household) == state) {
        a.push_back(r.mean_kwh);
        a_std.push_back(r.std_kwh);
      }
    for (const auto& r : ref.daily)
      if (ref_state.at(r.household) == state) b.push_back(r.mean_kwh);
    if (!a.empty() && !b.empty()) {
      rows.push_back({"jsd_histogram", state, jsd_histogram(a, b, cfg.histogram_bins)});
      if (a.size() >= 2 && b.size() >= 2) {
        const bool per_point = std::all_of(a_std.begin(), a_std.end(), [](double s) { return s > 0.0; });
        rows.push_back({"jsd_kde", state,
                        jsd_kde(a, b, per_point ? std::optional<std::span<const double>>(a_std) : std::nullopt,
                                cfg.kde_grid)});
      }
    }
  }
  for (const auto& [month, r] : pearson_monthly(synth.hourly, ref.hourly))
    rows.push_back({"pearson", fmt::format("month-{:02}", month), r});
  for (const auto& t : targets) {
    std::int64_t n = 0;
    for (const auto& h : synth_pop) n += (h.state == t.state && h.solar.value_or(false)) ? 1 : 0;
    rows.push_back({"adopters_real", t.state, static_cast<double>(t.count)});
    rows.push_back({"adopters_synthetic", t.state, static_cast<double>(n)});
    rows.push_back({"relative_pct_diff", t.state,
                    relative_pct_diff(static_cast<double>(t.count), static_cast<double>(n))});
  }

  auto out = csv::open_output(out_path(cfg, artifacts::kMetrics));
  out << "metric,scope,value\n";
  for (const auto& r : rows)
    out << r.metric << ',' << r.scope << ',' << (r.value ? csv::format_number(*r.value) : std::string()) << '\n';
  spdlog::info("validate: {} metrics written", rows.size());
}

void cmd_simulate(const RunConfig& cfg, std::optional<PolicyCase> only) {
  const HouseholdTable population = load_required(out_path(cfg, artifacts::kPopulationSolar), "calibrate");
  require_file(cfg.network, "toygen network");
  const Graph graph = load_network(cfg.network);
  const auto irradiance = load_irradiance_required(cfg);
  const auto dates = cfg.period.dates();
  const auto potential = potential_daily_generation(population, irradiance, dates, cfg.workers,
                                                    derive_seed(cfg.seed, kProfileStream), cfg.pv);
  const auto nodes = make_diffusion_nodes(population, potential, derive_seed(cfg.seed, kDiffusionStream));

  std::vector<PolicyCase> cases = only ? std::vector<PolicyCase>{*only} : cfg.cases;
  std::vector<TimelineRow> timeline;
  for (PolicyCase c : cases) {
    DiffusionConfig dc = cfg.diffusion;
    dc.policy = c;
    dc.seed = derive_seed(cfg.seed, kDiffusionStream);
    const auto runs = simulate(nodes, graph, dc);
    const auto rows = mean_timeline(c, runs);
    timeline.insert(timeline.end(), rows.begin(), rows.end());
    spdlog::info("simulate[{}]: {} -> {} adopters", case_name(c), rows.front().total, rows.back().total);
  }
  save_timeline(out_path(cfg, artifacts::kTimeline), timeline);
}

void cmd_pipeline(const RunConfig& cfg) {
  cmd_toygen(cfg, "all");
  cmd_preprocess(cfg, "smoten");
  cmd_preprocess(cfg, "corr");
  cmd_classify_sqft(cfg);
  cmd_estimate_sqft(cfg);
  cmd_calibrate(cfg);
  cmd_generate(cfg, false);
  cmd_generate(cfg, true);
  cmd_validate(cfg);
  cmd_simulate(cfg);
}

}  // namespace solartwin
