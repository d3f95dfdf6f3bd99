// Copyright 2026 The noisespec Authors
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

// Command-line front end. Talks to the library only through the C interface.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "noisespec/noisespec.h"

namespace {

// Exit codes: 1 usage, 2 invalid config, 3 failure while running.
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int report(nspec_status status) {
  std::cerr << "noisespec: error in " << nspec_status_module(status) << " ("
            << nspec_status_name(status) << "): " << nspec_last_error() << "\n";
  return status == NSPEC_CONFIG || status == NSPEC_IO ? kExitConfig : kExitRuntime;
}

bool is_preset(const std::string& name) {
  const char* text = nullptr;
  return nspec_preset_text(name.c_str(), &text) == NSPEC_OK;
}

// Gnuplot commands for the files a run produced; plots only what exists.
std::string gnuplot_script(const nspec_result* result) {
  std::string s = "set datafile separator ','\nset key autotitle columnhead\nset grid\n";
  for (std::size_t i = 0; i < nspec_result_file_count(result); ++i) {
    const char* name = nullptr;
    nspec_result_file(result, i, &name, nullptr, nullptr);
    const std::string f = name;
    const std::string src = "'" + f + "'";
    if (f == "fidelity.csv") {
      s += "set term pngcairo size 900,600\nset output 'fidelity.png'\n"
           "set xlabel 'duration'\nset ylabel 'fidelity'\n"
           "plot " + src + " using 5:7:8 with yerrorbars\n";
    } else if (f == "estimates.csv") {
      s += "set output 'estimates.png'\nset xlabel 'omega'\nset ylabel 'S'\n"
           "plot " + src + " using 7:8 with lines title 'truth', " + src +
           " using 7:9 with points title 'estimate'\n";
    } else if (f == "tracking.csv") {
      s += "set output 'tracking.png'\nset xlabel 't'\nset ylabel 's2'\n"
           "plot " + src + " using 3:7 with lines title 'true', " + src +
           " using 3:5 with points title 'estimate'\n";
    } else if (f == "ocf_best.csv") {
      s += "set output 'ocf.png'\nset xlabel 'duration'\nset ylabel 'fidelity'\n"
           "plot " + src + " using 2:3 with points title 'best'\n";
    }
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise spectroscopy experiment runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nspec_version()));

  auto* list = app.add_subcommand("list", "List the built-in scenarios");

  std::string preset;
  auto* exp = app.add_subcommand("export-config", "Print the YAML of a built-in scenario");
  exp->add_option("preset", preset, "Scenario name")->required();

  std::string target;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> repetitions;
  std::string out_dir;
  bool plot = false;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run a config file or a built-in scenario");
  run->add_option("config", target, "Config file, or the name of a built-in scenario")
      ->required();
  run->add_option("--seed", seed, "Master seed (overrides the config)");
  run->add_option("--workers", workers, "Worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--repetitions", repetitions, "Noise repetitions per configuration")
      ->check(CLI::PositiveNumber);
  run->add_option("--out-dir", out_dir, "Output directory (default: out/<scenario>)");
  run->add_flag("--gnuplot", plot, "Also write plot.gp");
  run->add_flag("-q,--quiet", quiet, "Do not print the summary");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (std::size_t i = 0; i < nspec_preset_count(); ++i) {
      const char* name = nullptr;
      const char* description = nullptr;
      nspec_preset_info(i, &name, &description);
      std::printf("%-26s %s\n", name, description);
    }
    return 0;
  }

  if (exp->parsed()) {
    const char* text = nullptr;
    if (const auto st = nspec_preset_text(preset.c_str(), &text); st != NSPEC_OK) return report(st);
    std::fputs(text, stdout);
    return 0;
  }

  nspec_config* config = nullptr;
  nspec_status st = NSPEC_OK;
  // An existing file wins over a preset of the same name.
  if (std::filesystem::exists(target) || !is_preset(target)) {
    st = nspec_config_load(target.c_str(), &config);
  } else {
    st = nspec_config_from_preset(target.c_str(), &config);
  }
  if (st != NSPEC_OK) return report(st);
  if (seed) nspec_config_set_seed(config, *seed);
  if (repetitions) nspec_config_set_repetitions(config, *repetitions);
  if (workers) nspec_config_set_workers(config, *workers);

  if (out_dir.empty()) {
    const char* name = nullptr;
    nspec_config_scenario(config, &name);
    out_dir = (std::filesystem::path("out") / name).string();
  }

  nspec_result* result = nullptr;
  st = nspec_run(config, &result);
  nspec_config_free(config);
  if (st != NSPEC_OK) return report(st);
  st = nspec_result_write(result, out_dir.c_str());
  if (st != NSPEC_OK) {
    nspec_result_free(result);
    return report(st);
  }
  if (plot) {
    std::ofstream gp(std::filesystem::path(out_dir) / "plot.gp", std::ios::binary);
    gp << gnuplot_script(result);
  }
  if (!quiet) {
    const char* summary = nullptr;
    nspec_result_summary(result, &summary);
    std::fputs(summary, stdout);
  }
  std::fprintf(stderr, "wrote %zu files to %s\n", nspec_result_file_count(result) + 1,
               out_dir.c_str());
  nspec_result_free(result);
  return 0;
}
