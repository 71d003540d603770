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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "solartwin/config.hpp"
#include "solartwin/error.hpp"
#include "solartwin/pipeline.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("solartwin");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SOLARTWIN_LOG")) {
    const std::string level(env);
    if (level == "error")
      spdlog::set_level(spdlog::level::err);
    else if (level == "info")
      spdlog::set_level(spdlog::level::info);
    else if (level == "debug")
      spdlog::set_level(spdlog::level::debug);
    else
      spdlog::warn("ignoring SOLARTWIN_LOG={} (expected error, info or debug)", level);
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"solartwin: synthetic rooftop-solar households, energy profiles and adoption scenarios"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string period;
  std::string case_text;
  app.add_option("--config", config_path, "Run configuration file (INI)")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Global random seed (overrides [run] seed)");
  app.add_option("--workers", workers, "Worker threads for profile generation")->check(CLI::PositiveNumber);
  app.add_option("--period", period, "Generation period: date:YYYY-MM-DD, week:YYYY-Www, month:YYYY-MM or year:YYYY");
  app.add_option("--case", case_text, "Diffusion policy case: 1a, 1b, 2a, 2b, 3, 4 or 5 (default: all)")
      ->check(CLI::IsMember({"1a", "1b", "2a", "2b", "3", "4", "5"}));

  std::string toygen_what = "all";
  auto* toygen = app.add_subcommand("toygen", "Write a synthetic survey, population, irradiance and network");
  toygen->add_option("what", toygen_what, "population, irradiance, network or all")
      ->check(CLI::IsMember({"population", "irradiance", "network", "all"}));

  std::string preprocess_what;
  auto* preprocess = app.add_subcommand("preprocess", "Balance the square-footage training set or compare associations");
  preprocess->add_option("action", preprocess_what, "smoten or corr")
      ->required()
      ->check(CLI::IsMember({"smoten", "corr"}));

  auto* classify = app.add_subcommand("classify-sqft", "Predict square-footage classes for the population");
  auto* estimate = app.add_subcommand("estimate-sqft", "Estimate square footage within each predicted class");
  auto* calibrate = app.add_subcommand("calibrate", "Calibrate the adoption classifier against target counts");
  bool reference = false;
  auto* generate = app.add_subcommand("generate", "Generate hourly PV energy profiles for adopters");
  generate->add_flag("--reference", reference, "Profile the ground-truth population into the reference directory");
  auto* validate = app.add_subcommand("validate", "Compare synthetic and reference profiles");
  auto* simulate = app.add_subcommand("simulate", "Run the adoption diffusion scenarios");
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage in order");

  CLI11_PARSE(app, argc, argv);

  try {
    solartwin::RunConfig cfg = config_path.empty() ? solartwin::RunConfig{} : solartwin::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (workers) cfg.workers = *workers;
    if (!period.empty()) cfg.period = solartwin::Period::parse(period);
    std::optional<solartwin::PolicyCase> only;
    if (!case_text.empty()) only = solartwin::parse_case(case_text);
    cfg.finalize();

    if (*toygen) solartwin::cmd_toygen(cfg, toygen_what);
    if (*preprocess) solartwin::cmd_preprocess(cfg, preprocess_what);
    if (*classify) solartwin::cmd_classify_sqft(cfg);
    if (*estimate) solartwin::cmd_estimate_sqft(cfg);
    if (*calibrate) solartwin::cmd_calibrate(cfg);
    if (*generate) solartwin::cmd_generate(cfg, reference);
    if (*validate) solartwin::cmd_validate(cfg);
    if (*simulate) solartwin::cmd_simulate(cfg, only);
    if (*pipeline) {
      if (only) cfg.cases = {*only};
      solartwin::cmd_pipeline(cfg);
    }
  } catch (const solartwin::Error& e) {
    std::cerr << fmt::format("error: {}: {}\n", e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::cerr << fmt::format("error: internal: {}\n", e.what());
    return 2;
  }
  return 0;
}
