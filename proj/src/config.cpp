// config.cpp — parser, canonical writer and presets for experiment configs
#include "vqs/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace vqs {

namespace {

const std::vector<std::pair<Experiment, std::string>>& names() {
  static const std::vector<std::pair<Experiment, std::string>> n{
      {Experiment::KernelsDump, "kernels-dump"},
      {Experiment::FreeParticle, "free-particle"},
      {Experiment::HarmonicDamping, "harmonic-damping"},
      {Experiment::ClassicalRunaway, "classical-runaway"},
      {Experiment::VemCancel, "vem-cancel"},
      {Experiment::CoherenceLength, "coherence-length"},
      {Experiment::FalseDecoherence, "false-decoherence"},
      {Experiment::CollisionalContrast, "collisional-contrast"},
  };
  return n;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

struct Raw {
  std::string value;
  int line;
};

struct Reader {
  std::string key;
  const Raw& raw;

  [[noreturn]] void fail(const std::string& why) const { throw ConfigKeyError(key, raw.line, why); }

  std::string str() const {
    const std::string& v = raw.value;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    return v;
  }
  double num(const std::string& text) const {
    double out = 0.0;
    const std::string t = trim(text);
    const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size() || t.empty())
      fail("expected a number, got '" + t + "'");
    return out;
  }
  double num() const { return num(str()); }
  int integer() const {
    const double v = num();
    if (v != std::floor(v) || std::abs(v) > 1e9) fail("expected an integer");
    return static_cast<int>(v);
  }
  bool boolean() const {
    const std::string v = str();
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail("expected true or false");
  }
  std::vector<double> list() const {
    std::vector<double> out;
    std::stringstream ss(str());
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(num(item));
    if (out.empty()) fail("expected a comma separated list");
    return out;
  }
};

using Setter = std::function<void(ExperimentConfig&, const Reader&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> s{
      {"experiment", [](auto& c, auto& r) {
         try {
           c.experiment = parse_experiment(r.str());
         } catch (const ConfigError&) {
           r.fail("unknown experiment '" + r.str() + "'");
         }
       }},
      {"units", [](auto& c, auto& r) {
         const auto v = r.str();
         if (v == "natural") c.units = UnitSystem::Natural;
         else if (v == "si") c.units = UnitSystem::SI;
         else r.fail("must be natural or si");
       }},
      {"alpha", [](auto& c, auto& r) { c.alpha = r.num(); }},
      {"omega_max", [](auto& c, auto& r) { c.omega_max = r.num(); }},
      {"omega_max_list", [](auto& c, auto& r) { c.omega_max_list = r.list(); }},
      {"omega0", [](auto& c, auto& r) { c.omega0 = r.num(); }},
      {"mass", [](auto& c, auto& r) { c.mass = r.num(); }},
      {"constants.hbar", [](auto& c, auto& r) { c.hbar = r.num(); }},
      {"constants.c", [](auto& c, auto& r) { c.c = r.num(); }},
      {"constants.eps0", [](auto& c, auto& r) { c.eps0 = r.num(); }},
      {"constants.e", [](auto& c, auto& r) { c.e_charge = r.num(); }},
      {"basis", [](auto& c, auto& r) { c.basis = r.str(); }},
      {"dim", [](auto& c, auto& r) { c.dim = r.integer(); }},
      {"grid.points", [](auto& c, auto& r) { c.grid_points = r.integer(); }},
      {"grid.min", [](auto& c, auto& r) { c.grid_min = r.num(); }},
      {"grid.max", [](auto& c, auto& r) { c.grid_max = r.num(); }},
      {"dt", [](auto& c, auto& r) { c.dt = r.num(); }},
      {"t_end", [](auto& c, auto& r) { c.t_end = r.num(); }},
      {"warmup.dt", [](auto& c, auto& r) { c.warmup_dt = r.num(); }},
      {"warmup.steps", [](auto& c, auto& r) { c.warmup_steps = r.integer(); }},
      {"markov", [](auto& c, auto& r) { c.markov = r.boolean(); }},
      {"decoherence_only", [](auto& c, auto& r) { c.decoherence_only = r.boolean(); }},
      {"record_every", [](auto& c, auto& r) { c.record_every = r.integer(); }},
      {"x0", [](auto& c, auto& r) { c.x0 = r.num(); }},
      {"p0", [](auto& c, auto& r) { c.p0 = r.num(); }},
      {"sigma", [](auto& c, auto& r) { c.sigma = r.num(); }},
      {"a0", [](auto& c, auto& r) { c.a0 = r.num(); }},
      {"points", [](auto& c, auto& r) { c.points = r.integer(); }},
      {"ramp.kind", [](auto& c, auto& r) { c.ramp_kind = r.str(); }},
      {"ramp.durations", [](auto& c, auto& r) { c.ramp_durations = r.list(); }},
      {"ramp.total_factor", [](auto& c, auto& r) { c.ramp_total_factor = r.num(); }},
      {"ramp.f_start", [](auto& c, auto& r) { c.f_start = r.num(); }},
      {"ramp.f_end", [](auto& c, auto& r) { c.f_end = r.num(); }},
      {"collisional.lambda", [](auto& c, auto& r) { c.lambda = r.num(); }},
      {"collisional.delta_x", [](auto& c, auto& r) { c.delta_x = r.num(); }},
      {"output_dir", [](auto& c, auto& r) { c.output_dir = r.str(); }},
  };
  return s;
}

void validate(const ExperimentConfig& c, const std::map<std::string, int>& lines) {
  auto line = [&](const std::string& k) {
    const auto it = lines.find(k);
    return it == lines.end() ? 0 : it->second;
  };
  auto require = [&](bool ok, const std::string& k, const std::string& why) {
    if (!ok) throw ConfigKeyError(k, line(k), why);
  };
  require(c.omega_max > 0.0, "omega_max", "must be positive");
  for (double w : c.omega_max_list) require(w > 0.0, "omega_max_list", "entries must be positive");
  require(c.alpha > 0.0 && c.alpha < 1.0, "alpha", "must lie in (0, 1)");
  require(c.units == UnitSystem::Natural || !lines.count("alpha"), "alpha",
          "alpha is derived from the constants in SI units");
  for (const char* k : {"constants.hbar", "constants.c", "constants.eps0", "constants.e"})
    require(c.units == UnitSystem::SI || !lines.count(k), k, "constant overrides need units = si");
  for (auto [v, k] : {std::pair{c.hbar, "constants.hbar"}, {c.c, "constants.c"},
                      {c.eps0, "constants.eps0"}, {c.e_charge, "constants.e"}})
    require(!v || *v > 0.0, k, "must be positive");
  require(c.omega0 > 0.0, "omega0", "must be positive");
  require(c.mass > 0.0, "mass", "must be positive");
  require(c.basis == "oscillator" || c.basis == "grid", "basis", "must be oscillator or grid");
  require(c.dim == 0 || c.dim >= 4, "dim", "must be 0 (doubling rule) or at least 4");
  require(c.dim <= 256, "dim", "must not exceed 256");
  require(c.grid_points >= 16, "grid.points", "must be at least 16");
  require(c.grid_max > c.grid_min, "grid.max", "must exceed grid.min");
  require(c.dt >= 0.0, "dt", "must be non-negative (0 selects the stability rule)");
  require(c.t_end >= 0.0, "t_end", "must be non-negative");
  require(c.warmup_dt >= 0.0, "warmup.dt", "must be non-negative");
  require(c.warmup_steps >= 0, "warmup.steps", "must be non-negative");
  require(c.record_every >= 0, "record_every", "must be non-negative");
  require(c.sigma > 0.0, "sigma", "must be positive");
  require(c.points >= 2, "points", "must be at least 2");
  require(c.ramp_kind == "raised_cosine" || c.ramp_kind == "linear" || c.ramp_kind == "constant",
          "ramp.kind", "must be raised_cosine, linear or constant");
  for (double d : c.ramp_durations) require(d > 0.0, "ramp.durations", "entries must be positive");
  require(c.ramp_total_factor >= 2.0, "ramp.total_factor", "must be at least 2");
  require(c.f_start >= 0.0 && c.f_start <= 1.0, "ramp.f_start", "must lie in [0, 1]");
  require(c.f_end >= 0.0 && c.f_end <= 1.0, "ramp.f_end", "must lie in [0, 1]");
  require(c.lambda >= 0.0, "collisional.lambda", "must be non-negative");
  require(!c.output_dir.empty(), "output_dir", "must not be empty");
  const bool needs_natural = c.experiment == Experiment::FreeParticle ||
                             c.experiment == Experiment::HarmonicDamping;
  require(!needs_natural || c.units == UnitSystem::Natural, "units",
          "propagator experiments run in natural units");
}

}  // namespace

ConfigKeyError::ConfigKeyError(const std::string& k, int l, const std::string& what)
    : ConfigError((l > 0 ? "line " + std::to_string(l) + ": " : std::string()) + "'" + k + "': " +
                  what),
      key(k),
      line(l) {}

std::string experiment_name(Experiment e) {
  for (const auto& [x, n] : names())
    if (x == e) return n;
  return "unknown";
}

Experiment parse_experiment(const std::string& s) {
  for (const auto& [x, n] : names())
    if (n == s) return x;
  throw ConfigError("unknown experiment '" + s + "'");
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> v = [] {
    std::vector<Experiment> out;
    for (const auto& [x, n] : names()) out.push_back(x);
    return out;
  }();
  return v;
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, Raw> raw;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    // strip a comment outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigKeyError(line, ln, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!setters().count(key)) throw ConfigKeyError(key, ln, "unknown key");
    if (raw.count(key)) throw ConfigKeyError(key, ln, "duplicate key");
    if (value.empty()) throw ConfigKeyError(key, ln, "missing value");
    raw.emplace(key, Raw{value, ln});
  }
  if (!raw.count("experiment")) throw ConfigKeyError("experiment", 0, "required key is missing");

  ExperimentConfig c;
  std::map<std::string, int> lines;
  for (const auto& [key, r] : raw) {
    setters().at(key)(c, Reader{key, r});
    lines[key] = r.line;
  }
  if (c.units == UnitSystem::SI && !raw.count("mass")) c.mass = codata::m_electron;
  if (c.units == UnitSystem::SI && !raw.count("omega_max")) c.omega_max = 1e20;
  validate(c, lines);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "experiment = \"" << experiment_name(c.experiment) << "\"\n";
  o << "units = \"" << (c.units == UnitSystem::SI ? "si" : "natural") << "\"\n";
  if (c.units == UnitSystem::Natural) o << "alpha = " << fmt(c.alpha) << "\n";
  o << "omega_max = " << fmt(c.omega_max) << "\n";
  if (!c.omega_max_list.empty()) o << "omega_max_list = \"" << fmt_list(c.omega_max_list) << "\"\n";
  o << "omega0 = " << fmt(c.omega0) << "\n";
  o << "mass = " << fmt(c.mass) << "\n";
  if (c.hbar) o << "constants.hbar = " << fmt(*c.hbar) << "\n";
  if (c.c) o << "constants.c = " << fmt(*c.c) << "\n";
  if (c.eps0) o << "constants.eps0 = " << fmt(*c.eps0) << "\n";
  if (c.e_charge) o << "constants.e = " << fmt(*c.e_charge) << "\n";
  o << "basis = \"" << c.basis << "\"\n";
  o << "dim = " << c.dim << "\n";
  o << "grid.points = " << c.grid_points << "\n";
  o << "grid.min = " << fmt(c.grid_min) << "\n";
  o << "grid.max = " << fmt(c.grid_max) << "\n";
  o << "dt = " << fmt(c.dt) << "\n";
  o << "t_end = " << fmt(c.t_end) << "\n";
  o << "warmup.dt = " << fmt(c.warmup_dt) << "\n";
  o << "warmup.steps = " << c.warmup_steps << "\n";
  o << "markov = " << (c.markov ? "true" : "false") << "\n";
  o << "decoherence_only = " << (c.decoherence_only ? "true" : "false") << "\n";
  o << "record_every = " << c.record_every << "\n";
  o << "x0 = " << fmt(c.x0) << "\n";
  o << "p0 = " << fmt(c.p0) << "\n";
  o << "sigma = " << fmt(c.sigma) << "\n";
  o << "a0 = " << fmt(c.a0) << "\n";
  o << "points = " << c.points << "\n";
  o << "ramp.kind = \"" << c.ramp_kind << "\"\n";
  o << "ramp.durations = \"" << fmt_list(c.ramp_durations) << "\"\n";
  o << "ramp.total_factor = " << fmt(c.ramp_total_factor) << "\n";
  o << "ramp.f_start = " << fmt(c.f_start) << "\n";
  o << "ramp.f_end = " << fmt(c.f_end) << "\n";
  o << "collisional.lambda = " << fmt(c.lambda) << "\n";
  o << "collisional.delta_x = " << fmt(c.delta_x) << "\n";
  o << "output_dir = \"" << c.output_dir << "\"\n";
  return o.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return to_text(a) == to_text(b);
}

ExperimentConfig preset(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::KernelsDump:
      c.points = 200;
      break;
    case Experiment::FreeParticle:
      // cutoff units; mass is the natural-unit mass, so m c^2/(hbar omega_max) = 100 .. 10^4
      c.omega_max_list = {1.0, 0.1, 0.01};
      c.mass = 100.0;
      c.basis = "grid";
      c.grid_points = 135;
      c.grid_min = -95.0;
      c.grid_max = 105.0;
      c.sigma = 12.0;
      c.p0 = 0.05;
      c.t_end = 1e4;
      c.dt = 5.0;
      c.markov = true;
      c.record_every = 20;
      break;
    case Experiment::HarmonicDamping:
      c.omega0 = 0.02;
      c.mass = 20.0;
      c.x0 = 2.0;
      c.dim = 0;
      c.dt = 0.5;
      c.warmup_dt = 0.01;
      c.warmup_steps = 1000;
      c.record_every = 1;
      break;
    case Experiment::ClassicalRunaway:
      c.omega_max_list = {0.1, 1.0, 10.0};
      c.a0 = 1.0;
      break;
    case Experiment::VemCancel:
      c.omega_max_list = {1.0, 2.0, 4.0};
      c.t_end = 100.0;
      break;
    case Experiment::CoherenceLength:
      c.points = 200;
      break;
    case Experiment::FalseDecoherence:
      c.omega_max_list = {1.0, 2.0, 4.0};
      c.ramp_durations = {100.0, 300.0, 1000.0};
      break;
    case Experiment::CollisionalContrast:
      c.ramp_durations = {1000.0};
      c.lambda = 1e-3;
      c.delta_x = 2.0;
      break;
  }
  return c;
}

PhysicalContext make_context(const ExperimentConfig& c) {
  PhysicalContext ctx;
  if (c.units == UnitSystem::Natural) {
    ctx = PhysicalContext::natural(c.alpha, c.mass);
  } else {
    ctx = PhysicalContext::si_electron();
    ctx.mass_bare = c.mass;
    if (c.hbar) ctx.hbar = *c.hbar;
    if (c.c) ctx.c = *c.c;
    if (c.eps0) ctx.eps0 = *c.eps0;
    if (c.e_charge) ctx.e_charge = *c.e_charge;
  }
  ctx.validate();
  return ctx;
}

}  // namespace vqs
