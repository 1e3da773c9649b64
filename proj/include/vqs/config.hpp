// config.hpp — flat key = value experiment configuration
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vqs/units.hpp"

namespace vqs {

enum class Experiment {
  KernelsDump,
  FreeParticle,
  HarmonicDamping,
  ClassicalRunaway,
  VemCancel,
  CoherenceLength,
  FalseDecoherence,
  CollisionalContrast,
};

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& s);
const std::vector<Experiment>& all_experiments();

// Error carrying the offending key and line (0 when not from a file).
struct ConfigKeyError : ConfigError {
  ConfigKeyError(const std::string& key, int line, const std::string& what);
  std::string key;
  int line = 0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::KernelsDump;

  // physics
  UnitSystem units = UnitSystem::Natural;
  double alpha = codata::alpha;  // natural units only
  double omega_max = 1.0;
  std::vector<double> omega_max_list;  // sweeps; empty means {omega_max}
  double omega0 = 0.02;
  double mass = 1.0;  // bare mass; SI default is the electron mass
  // overrides of the context constants
  std::optional<double> hbar, c, eps0, e_charge;

  // numerics
  std::string basis = "oscillator";  // oscillator | grid
  int dim = 0;                       // 0: doubling rule
  int grid_points = 128;
  double grid_min = -10.0, grid_max = 10.0;
  double dt = 0.0;                   // 0: stability rule
  double t_end = 0.0;                // 0: experiment default
  double warmup_dt = 0.0;
  int warmup_steps = 0;
  bool markov = false;
  bool decoherence_only = false;
  int record_every = 0;              // 0: experiment default
  double x0 = 0.0, p0 = 0.0, sigma = 1.0;
  double a0 = 1.0;
  int points = 200;

  // switching
  std::string ramp_kind = "raised_cosine";  // raised_cosine | linear | constant
  std::vector<double> ramp_durations{100.0, 300.0, 1000.0};
  double ramp_total_factor = 3.0;  // T = factor * ramp
  double f_start = 0.0, f_end = 0.0;
  double lambda = 1e-3, delta_x = 1.0;

  std::string output_dir = "vqs_out";
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// canonical text; parse_config(to_text(c)) == c
std::string to_text(const ExperimentConfig& c);
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

// presets with the acceptance tolerances built in
ExperimentConfig preset(Experiment e);

PhysicalContext make_context(const ExperimentConfig& c);

}  // namespace vqs
