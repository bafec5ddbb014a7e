// Copyright 2026 The rfom2 Authors
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

// Batch driver: `rfom_cli run <config>` and `rfom_cli sweep <config> --nquad 8,16,...`.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rfom/experiment.hpp"

namespace {

void apply_overrides(rfom::ExperimentConfig& cfg, const std::vector<std::string>& sets) {
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw rfom::Error(rfom::ErrorKind::ConfigError, "--set expects key=value: " + s);
    rfom::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
}

int finish(const rfom::RunReport& report, const rfom::ExperimentConfig& cfg) {
  if (cfg.output.empty()) std::cout << rfom::to_csv(report);
  return report.has_failures() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recycled Krylov approximation of f(A)b: experiment driver"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string output;

  auto* run = app.add_subcommand("run", "Run a problem sequence and write a CSV report");
  run->add_option("config", config_path, "Configuration file (key = value)")->required()->check(CLI::ExistingFile);
  run->add_option("--set", sets, "Override a configuration key, key=value (repeatable)");
  run->add_option("-o,--output", output, "CSV output path (default: config's output, else stdout)");

  std::vector<long long> nquad;
  auto* sweep = app.add_subcommand("sweep", "Vary n_quad on the first problem of the sequence");
  sweep->add_option("config", config_path, "Configuration file (key = value)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--nquad", nquad, "Comma-separated quadrature sizes")->required()->delimiter(',');
  sweep->add_option("--set", sets, "Override a configuration key, key=value (repeatable)");
  sweep->add_option("-o,--output", output, "CSV output path (default: config's output, else stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    rfom::ExperimentConfig cfg = rfom::load_config(config_path);
    apply_overrides(cfg, sets);
    if (!output.empty()) cfg.output = output;
    if (run->parsed()) return finish(rfom::run_experiment(cfg), cfg);
    std::vector<rfom::Index> list(nquad.begin(), nquad.end());
    return finish(rfom::sweep_quadrature(cfg, list), cfg);
  } catch (const rfom::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
