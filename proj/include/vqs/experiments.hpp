// experiments.hpp — named experiment runs with summaries and manifests
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vqs/config.hpp"
#include "vqs/system.hpp"

namespace vqs {

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;  // pass when value <= limit unless noted
  bool pass = false;
};

enum ExitCode { kPass = 0, kToleranceFail = 1, kInvariantBreach = 2, kConfigError = 3 };

struct ExperimentResult {
  std::string name;
  std::filesystem::path dir;
  std::vector<Check> checks;
  std::vector<std::string> files;
  int exit_code = kPass;
  std::string message;
  bool pass() const { return exit_code == kPass; }
};

// writes <root>/<experiment>/{*.csv, summary.json, manifest.json}
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& root);
// every preset, concurrently, each in its own subdirectory
std::vector<ExperimentResult> run_all(const std::filesystem::path& root);
int combined_exit_code(const std::vector<ExperimentResult>& rs);

// RK4 step keeping |lambda dt| <= 1 for the unitary part
double stability_dt(const SystemSpec& spec, double hbar);

// decay rate of the upper envelope of y(t) from parabolic-refined maxima
double envelope_decay_rate(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace vqs
