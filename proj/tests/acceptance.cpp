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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "solartwin/boosting.hpp"
#include "solartwin/calibrate.hpp"
#include "solartwin/dataset.hpp"
#include "solartwin/diffusion.hpp"
#include "solartwin/gp.hpp"
#include "solartwin/metrics.hpp"
#include "solartwin/preprocess.hpp"
#include "solartwin/pv_engine.hpp"
#include "solartwin/rng.hpp"
#include "solartwin/solar_geometry.hpp"
#include "solartwin/sqft.hpp"
#include "solartwin/toygen.hpp"

namespace fs = std::filesystem;
using namespace solartwin;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<Outcome()> run;
};

// Weighted log loss in long double, written independently of the library.
long double loss_ld(int y, long double z, long double beta) {
  const long double p = 1.0L / (1.0L + std::exp(-z));
  return -(y * std::log(p) + beta * (1 - y) * std::log(1.0L - p));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Outcome loss_correctness() {
  Outcome o;
  const long double h = 1e-3L;
  int points = 0;
  double worst_grad = 0.0, worst_hess = 0.0;
  for (int y : {0, 1})
    for (int k = 1; k <= 10; ++k)
      for (double beta : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        const double p = k / 11.0;
        const long double z = std::log(static_cast<long double>(p) / (1.0L - p));
        long double f[5];
        for (int s = -2; s <= 2; ++s) f[s + 2] = loss_ld(y, z + s * h, beta);
        // Five-point stencils, truncation error O(h^4).
        const long double g = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
        const long double hh = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h);
        const auto gh = loss_grad_hess(y, p, beta);
        const double eg = std::abs(gh.grad - static_cast<double>(g)) / std::max(std::abs(static_cast<double>(g)), 1e-12);
        const double eh = gh.hess == 0.0 && std::abs(static_cast<double>(hh)) < 1e-12
                              ? 0.0
                              : std::abs(gh.hess - static_cast<double>(hh)) / std::abs(static_cast<double>(hh));
        worst_grad = std::max(worst_grad, eg);
        worst_hess = std::max(worst_hess, eh);
        ++points;
      }
  o.require(points == 100, "grid size");
  o.require(worst_grad <= 1e-6, fmt::format("grad rel err {:.3g}", worst_grad));
  o.require(worst_hess <= 1e-6, fmt::format("hess rel err {:.3g}", worst_hess));

  ToyConfig cfg;
  cfg.n_households = 2000;
  DatasetOptions opts;
  opts.include_sqft_class = true;
  const auto d = make_dataset(gen_population(cfg), opts);
  const auto weighted = train_gbt(d.x, d.y, d.domains, GbtParams{}, WeightedLogisticLoss{1.0});
  const auto plain = train_gbt(d.x, d.y, d.domains, GbtParams{}, LogisticLoss{});
  o.require(weighted == plain, "beta=1 trees differ from logistic boosting");
  o.detail = fmt::format("100 grid points, max rel err grad {:.2g} hess {:.2g}; beta=1 trees identical{}", worst_grad,
                         worst_hess, o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome calibration_convergence() {
  Outcome o;
  int converged = 0;
  bool monotone = true;
  std::vector<std::string> runs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ToyConfig train_cfg;
    train_cfg.n_households = 2000;
    train_cfg.adopter_fraction = 0.1;
    train_cfg.seed = derive_seed(seed, 1);
    ToyConfig apply_cfg = train_cfg;
    apply_cfg.seed = derive_seed(seed, 2);
    DatasetOptions opts;
    opts.include_sqft_class = true;
    const auto train = make_dataset(gen_population(train_cfg), opts);
    const auto apply_table = gen_population(apply_cfg);
    std::int64_t target = 0;
    for (const auto& h : apply_table) target += h.solar.value_or(false) ? 1 : 0;
    CalibrationOptions options;
    options.seed = seed;
    const auto r = calibrate(train, feature_matrix(apply_table, opts), target, options);
    double incumbent = std::numeric_limits<double>::infinity(), prev = incumbent;
    for (const auto& s : r.trace) {
      incumbent = std::min(incumbent, s.diff);
      if (incumbent > prev) monotone = false;
      prev = incumbent;
    }
    if (target != 200) o.require(false, fmt::format("seed {} planted {} adopters", seed, target));
    if (r.discrepancy <= 0.15 * 200 && r.rounds_used <= 2000) ++converged;
    runs.push_back(fmt::format("{}:{}r/d{}", seed, r.rounds_used, r.discrepancy));
  }
  o.require(converged >= 9, fmt::format("only {}/10 seeds converged", converged));
  o.require(monotone, "incumbent trace increased");
  std::string joined;
  for (const auto& s : runs) joined += (joined.empty() ? "" : " ") + s;
  o.detail = fmt::format("{}/10 seeds within 30 [{}]{}", converged, joined, o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome ei_and_gp() {
  Outcome o;
  const double ei = expected_improvement(3.0, 1.0, 3.0);
  o.require(std::abs(ei - 0.398942) <= 1e-6, fmt::format("EI(f_min, 1) = {}", ei));
  o.require(expected_improvement(3.0, 0.0, 3.0) == 0.0, "EI(sigma=0, mu=f_min) != 0");
  o.require(expected_improvement(4.5, 0.0, 3.0) == 0.0, "EI(sigma=0, mu>f_min) != 0");

  std::mt19937_64 e(11);
  std::uniform_real_distribution<double> ub(0.0, 2.0), ut(0.05, 0.95), uv(0.0, 300.0);
  GpMatrix<double> x(25, 2);
  GpVector<double> y(25);
  for (int i = 0; i < 25; ++i) {
    x(i, 0) = ub(e);
    x(i, 1) = ut(e);
    y(i) = uv(e);
  }
  RbfKernel<double> k;
  k.signal_variance = 1.0;
  k.length_scales = Eigen::Vector2d(0.5, 0.225);
  k.noise_variance = 0.0;
  const auto gp = gp_fit(x, y, k);
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) worst = std::max(worst, std::abs(gp_predict(gp, x.row(i)).mean - y(i)));
  GpMatrix<double> one(1, 2);
  one << 1.0, 0.5;
  GpVector<double> v1(1);
  v1 << 42.0;
  const auto p1 = gp_predict(gp_fit(one, v1, k), one.row(0));
  o.require(std::abs(p1.mean - 42.0) <= 1e-9 && p1.sigma <= 1e-9, "single-point GP does not interpolate");
  o.require(worst <= 1e-9, fmt::format("interpolation error {:.3g}", worst));
  o.detail = fmt::format("EI(mu=f_min, sigma=1) = {:.7f}; 25-point noiseless GP max error {:.2g} (jitter {:.1g}){}", ei,
                         worst, gp.jitter, o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome sqft_estimator() {
  Outcome o;
  SubclassWeights w;
  w.range_low = 1000;
  w.range_high = 2000;
  w.intervals = {{1000, 1500}, {1500, 2000}};
  w.weights = {2.0 / 3.0, 1.0 / 3.0};
  const double est = estimate_sqft(w, 100000, 1, std::uint64_t{2024});
  o.require(std::abs(est - 1416.7) <= 5.0, fmt::format("estimate {}", est));

  std::mt19937_64 e(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int outside = 0;
  for (int i = 0; i < 10000; ++i) {
    const double low = 200 + 7800 * u(e);
    const double high = low + 1 + 4000 * u(e);
    std::vector<double> survey(1 + static_cast<std::size_t>(u(e) * 30));
    for (auto& s : survey) s = low + (high - low) * u(e);
    const int k = 1 + static_cast<int>(u(e) * 8);
    const auto sw = subclass_weights(survey, {low, high}, k);
    const int m = 1 + static_cast<int>(u(e) * 20), l = 1 + static_cast<int>(u(e) * 20);
    const double v = estimate_sqft(sw, m, l, e());
    if (!(v >= low && v <= high)) ++outside;
  }
  o.require(outside == 0, fmt::format("{} estimates outside their class", outside));
  o.detail = fmt::format("M*L = 1e5 estimate {:.2f} (expected 1416.67); {} of 10000 random configurations out of range{}",
                         est, outside, o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome solar_geometry() {
  Outcome o;
  const double ht = tilted_radiation(500, 38, 0, 30, 1.0);
  o.require(std::abs(ht - 628.3) <= 0.1, fmt::format("HT = {}", ht));
  std::mt19937_64 e(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double ghi = 1100 * u(e), lat = 20 + 30 * u(e), d = -23.45 + 46.9 * u(e), deg = 0.5 + 0.5 * u(e);
    if (tilted_radiation(ghi, lat, d, 0.0, deg) != ghi * deg) {
      o.require(false, "theta=0 identity not exact");
      break;
    }
  }
  const double d172 = declination(172), d355 = declination(355);
  o.require(std::abs(d172 - 23.45) <= 0.05, fmt::format("delta(172) = {}", d172));
  o.require(std::abs(d355 + 23.45) <= 0.05, fmt::format("delta(355) = {}", d355));
  o.detail = fmt::format("HT = {:.2f} W/m2, delta(172) = {:.3f}, delta(355) = {:.3f}{}", ht, d172, d355,
                         o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file()) out[fs::relative(entry.path(), root).generic_string()] = slurp(entry.path());
  return out;
}

fs::path scratch(const std::string& tag) {
  const auto p = fs::temp_directory_path() / fmt::format("solartwin_accept_{}_{}", tag, std::random_device{}());
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Outcome profile_engine() {
  Outcome o;
  ToyConfig cfg;
  cfg.n_households = 500;
  cfg.days = 7;
  cfg.start_date = Date{std::chrono::year{2020} / 6 / 22};
  auto pop = gen_population(cfg);
  for (auto& h : pop) h.solar = true;
  std::map<std::string, IrradianceSeries> irr;
  for (std::int64_t t = 0; t < cfg.n_tracts; ++t) {
    auto s = gen_irradiance(cfg, t);
    irr.emplace(s.tract, std::move(s));
  }
  const auto period = Period::parse("week:2020-W26");
  const auto dir = scratch("pv");
  std::vector<std::map<std::string, std::string>> outputs;
  double seconds_8 = 0.0;
  ProfileSet base;
  for (int workers : {1, 2, 8}) {
    const auto t0 = std::chrono::steady_clock::now();
    auto set = generate_profiles(pop, irr, period, workers, 77);
    if (workers == 8) seconds_8 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_profiles(dir / std::to_string(workers), set, period);
    outputs.push_back(tree_bytes(dir / std::to_string(workers)));
    if (workers == 1) base = std::move(set);
  }
  fs::remove_all(dir);
  o.require(outputs[0] == outputs[1] && outputs[0] == outputs[2], "worker counts produce different bytes");

  std::map<std::int64_t, std::string> tract_of;
  for (const auto& h : pop) tract_of[h.id] = h.tract;
  std::size_t night_nonzero = 0;
  double worst_sum = 0.0, worst_var = 0.0;
  for (std::size_t k = 0; k < base.profiles.size(); ++k) {
    const auto& p = base.profiles[k];
    const auto ghi = irr.at(tract_of.at(p.household)).hours_on(p.date);
    double s = 0.0, v = 0.0;
    for (std::size_t w = 0; w < 24; ++w) {
      s += p.hourly_mean[w];
      v += p.hourly_std[w] * p.hourly_std[w];
      if (ghi[w] == 0.0 && (p.hourly_mean[w] != 0.0 || p.hourly_std[w] != 0.0)) ++night_nonzero;
    }
    worst_sum = std::max(worst_sum, s > 0 ? rel(p.daily_mean, s) : std::abs(p.daily_mean));
    worst_var = std::max(worst_var, v > 0 ? rel(p.daily_std * p.daily_std, v) : std::abs(p.daily_std));
  }
  o.require(worst_sum <= 1e-9, fmt::format("daily mean identity error {:.3g}", worst_sum));
  o.require(worst_var <= 1e-9, fmt::format("daily variance identity error {:.3g}", worst_var));
  o.require(night_nonzero == 0, fmt::format("{} night hours nonzero", night_nonzero));

  auto doubled = irr;
  for (auto& [tract, s] : doubled)
    for (auto& g : s.ghi) g *= 2;
  const auto twice = generate_profiles(pop, doubled, period, 8, 77);
  double worst_scale = 0.0;
  for (std::size_t k = 0; k < base.profiles.size(); ++k)
    for (std::size_t w = 0; w < 24; ++w) {
      const double a = base.profiles[k].hourly_mean[w], b = twice.profiles[k].hourly_mean[w];
      worst_scale = std::max(worst_scale, a > 0 ? rel(b, 2 * a) : std::abs(b));
    }
  o.require(worst_scale <= 1e-12, fmt::format("GHI doubling error {:.3g}", worst_scale));
  o.require(seconds_8 < 120.0, fmt::format("8 workers took {:.1f} s", seconds_8));
  o.detail = fmt::format("{} household-days; workers 1/2/8 byte-identical; identity errors {:.1g}/{:.1g}; 8 workers {:.2f} s{}",
                         base.profiles.size(), worst_sum, worst_var, seconds_8, o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome metrics() {
  Outcome o;
  const auto p = make_distribution({0.1, 0.2, 0.3, 0.4});
  o.require(jsd(p, p) == 0.0, "jsd(P,P) != 0");
  const double disjoint = jsd(make_distribution({0.5, 0.5, 0, 0}), make_distribution({0, 0, 0.25, 0.75}));
  o.require(std::abs(disjoint - 1.0) <= 1e-12, fmt::format("jsd(disjoint) = {}", disjoint));
  std::mt19937_64 e(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int asym = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> a(12), b(12);
    double sa = 0, sb = 0;
    for (std::size_t j = 0; j < 12; ++j) {
      a[j] = u(e) < 0.2 ? 0.0 : u(e);
      b[j] = u(e) < 0.2 ? 0.0 : u(e);
      sa += a[j];
      sb += b[j];
    }
    if (sa == 0.0) a[0] = sa = 1.0;
    if (sb == 0.0) b[0] = sb = 1.0;
    for (auto& x : a) x /= sa;
    for (auto& x : b) x /= sb;
    const auto pa = make_distribution(a), pb = make_distribution(b);
    if (jsd(pa, pb) != jsd(pb, pa)) ++asym;
  }
  o.require(asym == 0, fmt::format("{} asymmetric pairs", asym));
  o.require(scott_factor(32) == 0.5, "scott_factor(32) != 0.5");

  std::vector<HourlyObservation> a, b;
  for (int m : {1, 4, 7, 10})
    for (int h = 0; h < 24; ++h) {
      const double v = u(e) * 10 + (h > 6 && h < 19 ? 5.0 : 0.0);
      a.push_back({m, h, v});
      b.push_back({m, h, 3.7 * v + 12.0});
    }
  bool affine = true;
  for (const auto& [m, r] : pearson_monthly(a, b)) affine = affine && r && std::abs(*r - 1.0) <= 1e-12;
  o.require(affine, "pearson not affine invariant");
  const double wv = *relative_pct_diff(62, 338);
  o.require(std::abs(wv - 445.2) <= 0.1, fmt::format("relative_pct_diff(62, 338) = {}", wv));
  o.detail = fmt::format("jsd(P,P)=0, jsd(disjoint)={}, 100 symmetric pairs, scott(32)={}, pct diff {:.2f}%{}",
                         disjoint, scott_factor(32), wv, o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome diffusion() {
  Outcome o;
  o.require(case_probabilities(PolicyCase::C2b).lmi == 0.5 && case_probabilities(PolicyCase::C2b).non_lmi == 0.1,
            "case 2b probabilities");
  o.require(case_probabilities(PolicyCase::C1a).lmi == 0.1 && case_probabilities(PolicyCase::C1b).lmi == 0.2 &&
                case_probabilities(PolicyCase::C2a).lmi == 0.2,
            "case 1a/1b/2a probabilities");
  o.require(kCase3LmiSequence == std::array<double, 10>{0.3, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5},
            "case 3 sequence");
  const UtilityWeights w;
  o.require(w.personal == 0.4 && w.community == 0.3 && w.neighbor == 0.3, "utility weights");

  ToyConfig cfg;
  cfg.n_households = 5000;
  cfg.days = 7;
  cfg.start_date = Date{std::chrono::year{2020} / 6 / 22};
  const auto pop = gen_population(cfg);
  std::map<std::string, IrradianceSeries> irr;
  for (std::int64_t t = 0; t < cfg.n_tracts; ++t) {
    auto s = gen_irradiance(cfg, t);
    irr.emplace(s.tract, std::move(s));
  }
  const auto dates = Period::parse("week:2020-W26").dates();
  const auto kwh = potential_daily_generation(pop, irr, dates, 4, 8);
  const auto nodes = make_diffusion_nodes(pop, kwh, 8);
  const Graph graph = gen_network(nodes.size(), 0.05, 20, 9);

  std::map<PolicyCase, double> total, lmi;
  int non_monotone = 0;
  for (auto c : kAllPolicyCases) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      DiffusionConfig dc;
      dc.policy = c;
      dc.seed = seed;
      const auto runs = simulate(nodes, graph, dc);
      for (const auto& run : runs) {
        for (std::size_t s = 1; s < run.states.size(); ++s)
          for (std::size_t i = 0; i < nodes.size(); ++i)
            if (run.states[s - 1].adopted[i] && !run.states[s].adopted[i]) ++non_monotone;
        const auto& last = run.counts.back();
        total[c] += static_cast<double>(last.total) / 20.0;
        lmi[c] += static_cast<double>(last.lmi_rural + last.lmi_urban) / 20.0;
      }
    }
  }
  o.require(non_monotone == 0, fmt::format("{} reversions", non_monotone));
  o.require(total[PolicyCase::C1b] >= total[PolicyCase::C1a], "mean final 1b < 1a");
  o.require(lmi[PolicyCase::C2b] >= lmi[PolicyCase::C2a], "mean final LMI 2b < 2a");
  o.detail = fmt::format("140 runs monotone; mean final 1a {:.1f} 1b {:.1f}; LMI 2a {:.1f} 2b {:.1f}{}",
                         total[PolicyCase::C1a], total[PolicyCase::C1b], lmi[PolicyCase::C2a], lmi[PolicyCase::C2b],
                         o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome smoten() {
  Outcome o;
  ToyConfig cfg;
  DatasetOptions opts;
  opts.label = LabelColumn::SqftClass;
  const auto d = make_dataset(gen_population(cfg), opts);
  const auto up = smoten_oversample(d, 5, 17);
  const auto counts = up.class_counts();
  const bool equal = std::all_of(counts.begin(), counts.end(), [&](auto c) { return c == counts.front(); });
  o.require(equal, "class counts differ after oversampling");
  const double delta = (correlation_matrix(d, true) - correlation_matrix(up, true)).cwiseAbs().maxCoeff();
  o.require(delta <= 0.15, fmt::format("Cramer's V max delta {:.4f}", delta));
  o.detail = fmt::format("{} rows -> {} rows, {} per class; Cramer's V max |delta| {:.4f}{}", d.rows(), up.rows(),
                         counts.front(), delta, o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

int run_command(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome end_to_end() {
  Outcome o;
  std::vector<std::map<std::string, std::string>> trees;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto dir = scratch(fmt::format("e2e{}", attempt));
    std::ofstream(dir / "run.ini") << "[run]\nseed = 42\n";
    const int status = run_command(fmt::format("\"{}\" --config \"{}\" pipeline > \"{}\" 2>&1", SOLARTWIN_CLI,
                                               (dir / "run.ini").string(), (dir / "log.txt").string()));
    o.require(status == 0, fmt::format("pipeline exit {}: {}", status, slurp(dir / "log.txt")));
    trees.push_back(tree_bytes(dir / "out"));
    auto data = tree_bytes(dir / "data");
    for (auto& [k, v] : data) trees.back()["data/" + k] = std::move(v);
    fs::remove_all(dir);
  }
  o.require(trees[0].count("adoption_timeline.csv") && trees[0].count("metrics.csv"), "timeline or metrics missing");
  bool has_profiles = false;
  for (const auto& [name, bytes] : trees[0]) has_profiles = has_profiles || name.rfind("profiles/", 0) == 0;
  o.require(has_profiles, "no profile files");
  std::vector<std::string> differing;
  for (const auto& [name, bytes] : trees[0]) {
    const auto it = trees[1].find(name);
    if (it == trees[1].end() || it->second != bytes) differing.push_back(name);
  }
  o.require(trees[0].size() == trees[1].size() && differing.empty(),
            fmt::format("{} files differ between runs", differing.size()));
  o.detail = fmt::format("two runs, {} artifacts byte-identical{}", trees[0].size(), o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "loss correctness", 5, loss_correctness},
      {2, "calibration convergence", 600, calibration_convergence},
      {3, "EI analytic values and GP interpolation", 5, ei_and_gp},
      {4, "square-footage estimator", 30, sqft_estimator},
      {5, "solar geometry", 5, solar_geometry},
      {6, "profile engine determinism and identities", 120, profile_engine},
      {7, "metrics", 5, metrics},
      {8, "diffusion", 300, diffusion},
      {9, "SMOTEN balance and association", 30, smoten},
      {10, "end-to-end pipeline", 900, end_to_end},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = fmt::format("exception: {}", e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (seconds > c.limit_seconds) {
      o.pass = false;
      o.detail += fmt::format("; runtime {:.1f} s exceeds {:.0f} s", seconds, c.limit_seconds);
    }
    failures += o.pass ? 0 : 1;
    std::cout << fmt::format("{} criterion {:>2} {}: {} ({:.2f} s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail,
                             seconds)
              << std::flush;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures),
                           criteria.size());
  return failures == 0 ? 0 : 1;
}
