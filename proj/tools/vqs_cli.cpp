// vqs — command line front end
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vqs/config.hpp"
#include "vqs/decoherence.hpp"
#include "vqs/eom.hpp"
#include "vqs/experiments.hpp"
#include "vqs/output.hpp"
#include "vqs/propagator.hpp"
#include "vqs/quadrature.hpp"

using namespace vqs;

namespace {

// Shared options: an optional config file plus key=value overrides, all
// funnelled through parse_config so the CLI validates like `run`.
struct Common {
  std::string config_file;
  std::vector<std::string> sets;
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_file, "config file (key = value)");
    app->add_option("-s,--set", sets, "override, e.g. -s omega_max=2")->allow_extra_args(false);
    app->add_option("-o,--out", out, "output file (default stdout)");
  }

  ExperimentConfig build(Experiment e) const {
    std::string text;
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      if (!f) throw ConfigError("cannot read config file '" + config_file + "'");
      std::stringstream ss;
      ss << f.rdbuf();
      text = ss.str();
      // the verb decides the experiment
      std::istringstream in(text);
      std::string line, kept;
      while (std::getline(in, line))
        if (line.find("experiment") != 0) kept += line + "\n";
      text = kept;
    }
    text = "experiment = \"" + experiment_name(e) + "\"\n" + text;
    for (const auto& s : sets) text += s + "\n";
    return parse_config(text);
  }

  void emit(const std::string& content) const {
    if (out.empty()) std::cout << content;
    else write_file_atomic(out, content);
  }
};

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, n == 1 ? 0.0 : double(i) / (n - 1));
  return v;
}

void write_summary(const std::string& path, const nlohmann::ordered_json& j) {
  if (!path.empty()) write_file_atomic(path, j.dump(2) + "\n");
}

int print_results(const std::vector<ExperimentResult>& rs) {
  for (const auto& r : rs) {
    std::cout << r.name << ": " << (r.pass() ? "PASS" : "FAIL") << " (exit " << r.exit_code
              << ") -> " << r.dir.string() << "\n";
    for (const auto& ch : r.checks)
      std::cout << "  " << (ch.pass ? "ok   " : "FAIL ") << ch.name << " = " << format_double(ch.value)
                << " (limit " << format_double(ch.limit) << ")\n";
    if (!r.message.empty()) std::cerr << r.name << ": " << r.message << "\n";
  }
  return combined_exit_code(rs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vacuum-coupled quantum systems"};
  app.require_subcommand(1);

  // kernels dump
  Common kc;
  double tmin = 0.1, tmax = 1e3;
  int kpoints = 200;
  auto* kernels = app.add_subcommand("kernels", "kernel tables");
  auto* dump = kernels->add_subcommand("dump", "tau,noise,dissipation,n1,n2 in cutoff units");
  kernels->require_subcommand(1);
  kc.attach(dump);
  dump->add_option("--tmin", tmin, "smallest tau / epsilon");
  dump->add_option("--tmax", tmax, "largest tau / epsilon");
  dump->add_option("--points", kpoints, "log-spaced samples");

  // evolve
  Common ec;
  std::string potential = "harmonic", state = "coherent";
  bool markov = false, dec_only = false;
  double separation = 4.0;
  auto* evolve = app.add_subcommand("evolve", "propagate the master equation");
  ec.attach(evolve);
  evolve->add_option("--potential", potential, "free | harmonic")
      ->check(CLI::IsMember({"free", "harmonic"}));
  evolve->add_option("--state", state, "coherent | gaussian | cat")
      ->check(CLI::IsMember({"coherent", "gaussian", "cat"}));
  evolve->add_option("--separation", separation, "cat separation");
  evolve->add_flag("--markov", markov, "freeze coefficients at their plateau");
  evolve->add_flag("--decoherence-only", dec_only, "keep only the noise term");

  // eom
  Common oc;
  std::string summary_path;
  auto* eom = app.add_subcommand("eom", "equations of motion");
  eom->require_subcommand(1);
  auto* classical = eom->add_subcommand("classical", "Abraham-Lorentz, CSV t,x,v,a");
  auto* quantum = eom->add_subcommand("quantum", "order-reduced EOM, CSV t,x_mean,p_mean");
  for (auto* s : {classical, quantum}) {
    oc.attach(s);
    s->add_option("--summary", summary_path, "JSON runaway diagnostics");
  }
  quantum->add_option("--potential", potential, "free | harmonic")
      ->check(CLI::IsMember({"free", "harmonic"}));

  // decoherence
  Common dc;
  double dx = 1.0;
  auto* dec = app.add_subcommand("decoherence", "coherence length and switching");
  dec->require_subcommand(1);
  auto* length = dec->add_subcommand("length", "CSV t,n2,coherence_length");
  auto* factor = dec->add_subcommand("factor", "CSV t,factor");
  auto* sw = dec->add_subcommand("switch", "switched noise moment sweep");
  for (auto* s : {length, factor, sw}) dc.attach(s);
  for (auto* s : {length, factor}) {
    s->add_option("--tmin", tmin, "smallest t / epsilon");
    s->add_option("--tmax", tmax, "largest t / epsilon");
    s->add_option("--points", kpoints, "log-spaced samples");
  }
  factor->add_option("--dx", dx, "superposition separation");

  // preset
  std::string preset_name;
  auto* pre = app.add_subcommand("preset", "print the canonical config of a preset");
  pre->add_option("name", preset_name, "experiment name")->required();

  // run
  std::string run_config, out_dir;
  bool all = false;
  auto* run = app.add_subcommand("run", "run a named experiment");
  run->add_option("config", run_config, "config file");
  run->add_flag("--all", all, "every preset, concurrently");
  run->add_option("--output-dir", out_dir, "output root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (dump->parsed()) {
      const auto cfg = kc.build(Experiment::KernelsDump);
      const auto ctx = make_context(cfg);
      const auto sc = to_natural(ctx, CutoffConfig::from_omega_max(cfg.omega_max, ctx));
      const KernelFamily k(sc.ctx, sc.cut);
      if (!(tmin > 0.0 && tmax > tmin && kpoints >= 2)) throw ConfigError("bad --tmin/--tmax/--points");
      CsvTable t({"tau", "noise", "dissipation", "n1", "n2"});
      for (double tau : logspace(tmin, tmax, kpoints))
        t.add_row({tau, k.noise(tau), k.dissipation(tau), k.n1(tau), k.n2(tau)});
      kc.emit(t.str());
      return kPass;
    }

    if (evolve->parsed()) {
      auto cfg = ec.build(Experiment::HarmonicDamping);
      if (cfg.units != UnitSystem::Natural) throw ConfigError("evolve runs in natural units");
      const auto ctx = make_context(cfg);
      const auto cut = CutoffConfig::from_omega_max(cfg.omega_max, ctx);
      const KernelFamily k(ctx, cut);
      Basis basis = cfg.basis == "grid" ? Basis{GridBasis{cfg.grid_points, cfg.grid_min, cfg.grid_max}}
                                        : Basis{OscillatorBasis{cfg.dim > 0 ? cfg.dim : 32, cfg.omega0}};
      const auto spec = potential == "free" ? SystemSpec::free(ctx.mass_bare, basis)
                                            : SystemSpec::harmonic(cfg.omega0, ctx.mass_bare, basis);
      const auto rho0 = state == "coherent" ? coherent_state(spec, cfg.x0, cfg.p0, ctx.hbar)
                        : state == "gaussian"
                            ? gaussian_wavepacket(spec, cfg.x0, cfg.p0, cfg.sigma, ctx.hbar)
                            : cat_state(spec, separation, cfg.sigma, ctx.hbar);
      PropagationOptions o;
      o.dt = cfg.dt > 0.0 ? cfg.dt : stability_dt(spec, ctx.hbar);
      o.warmup_dt = cfg.warmup_dt;
      o.warmup_steps = cfg.warmup_steps;
      const double t_end = cfg.t_end > 0.0 ? cfg.t_end : 100.0 * o.dt;
      const double rest = t_end - o.warmup_dt * cfg.warmup_steps;
      if (!(rest > 0.0)) throw ConfigError("t_end is shorter than the warm-up");
      o.n_steps = static_cast<std::size_t>(std::llround(rest / o.dt));
      o.markov = markov || cfg.markov;
      o.decoherence_only = dec_only || cfg.decoherence_only;
      o.record_every = std::max(1, cfg.record_every);
      o.trace_tol = 1e-9;
      o.herm_tol = 1e-9;
      const auto tr = propagate(rho0, spec, k, o);
      CsvTable t({"t", "x_mean", "p_mean", "x_var", "p_var", "purity", "trace_err", "herm_err",
                  "min_eig"});
      for (std::size_t i = 0; i < tr.size(); ++i)
        t.add_row({tr.t[i], tr.x_mean[i], tr.p_mean[i], tr.x_var[i], tr.p_var[i], tr.purity[i],
                   tr.trace_err[i], tr.herm_err[i], tr.min_eig[i]});
      ec.emit(t.str());
      return kPass;
    }

    if (classical->parsed()) {
      const auto cfg = oc.build(Experiment::ClassicalRunaway);
      const auto ctx = make_context(cfg);
      const auto cut = CutoffConfig::from_omega_max(cfg.omega_max, ctx);
      const double t0 = runaway_time(ctx, cut);
      const double dt = cfg.dt > 0.0 ? cfg.dt : t0 / 20.0;
      const double t_end = cfg.t_end > 0.0 ? cfg.t_end : 20.0 * t0;
      auto zero = [](double, double) { return 0.0; };
      const auto r = integrate_classical_al(zero, {cfg.x0, cfg.p0 / ctx.mass_bare, cfg.a0}, t_end,
                                            dt, ctx, cut);
      CsvTable t({"t", "x", "v", "a"});
      for (std::size_t i = 0; i < r.t.size(); ++i) t.add_row({r.t[i], r.x[i], r.v[i], r.a[i]});
      oc.emit(t.str());
      nlohmann::ordered_json j;
      j["runaway"] = r.runaway;
      j["growth_rate"] = r.growth_rate ? nlohmann::ordered_json(*r.growth_rate) : nullptr;
      j["expected_rate"] = 1.0 / t0;
      j["runaway_time"] = t0;
      write_summary(summary_path, j);
      return kPass;
    }

    if (quantum->parsed()) {
      const auto cfg = oc.build(Experiment::HarmonicDamping);
      const auto ctx = make_context(cfg);
      const auto cut = CutoffConfig::from_omega_max(cfg.omega_max, ctx);
      const Basis basis = OscillatorBasis{std::max(cfg.dim, 4), cfg.omega0};
      const auto spec = potential == "free" ? SystemSpec::free(ctx.mass_bare, basis)
                                            : SystemSpec::harmonic(cfg.omega0, ctx.mass_bare, basis);
      const double dt = cfg.dt > 0.0 ? cfg.dt : 0.01 / cfg.omega0;
      const double t_end = cfg.t_end > 0.0 ? cfg.t_end : 10.0 * 2.0 * M_PI / cfg.omega0;
      const auto r = integrate_quantum_eom(spec, cfg.x0, cfg.p0, t_end, dt, ctx, cut,
                                           std::nullopt, std::max(1, cfg.record_every));
      CsvTable t({"t", "x_mean", "p_mean"});
      for (std::size_t i = 0; i < r.t.size(); ++i) t.add_row({r.t[i], r.x[i], r.p[i]});
      oc.emit(t.str());
      nlohmann::ordered_json j;
      j["runaway"] = r.runaway;
      j["growth_rate"] = r.growth_rate ? nlohmann::ordered_json(*r.growth_rate) : nullptr;
      write_summary(summary_path, j);
      return kPass;
    }

    if (length->parsed() || factor->parsed()) {
      const auto cfg = dc.build(Experiment::CoherenceLength);
      const auto ctx = make_context(cfg);
      const auto cut = CutoffConfig::from_omega_max(cfg.omega_max, ctx);
      const KernelFamily k(ctx, cut);
      if (!(tmin > 0.0 && tmax > tmin && kpoints >= 2)) throw ConfigError("bad --tmin/--tmax/--points");
      CsvTable t(length->parsed() ? std::vector<std::string>{"t", "n2", "coherence_length"}
                                  : std::vector<std::string>{"t", "factor"});
      for (double s : logspace(tmin * cut.epsilon, tmax * cut.epsilon, kpoints)) {
        if (length->parsed()) t.add_row({s, k.n2(s), coherence_length(s, k)});
        else t.add_row({s, decoherence_factor(dx, s, k)});
      }
      dc.emit(t.str());
      return kPass;
    }

    if (sw->parsed()) {
      const auto cfg = dc.build(Experiment::FalseDecoherence);
      const auto ctx = make_context(cfg);
      const auto ws = cfg.omega_max_list.empty() ? std::vector<double>{cfg.omega_max} : cfg.omega_max_list;
      CsvTable t({"ramp_duration", "epsilon", "n2_switched", "n2_unswitched", "ratio", "analytic_limit"});
      for (double w : ws) {
        const auto cut = CutoffConfig::from_omega_max(w, ctx);
        const KernelFamily k(ctx, cut);
        for (double r : cfg.ramp_durations) {
          const double ramp = r * cut.epsilon, T = cfg.ramp_total_factor * ramp;
          const auto p = cfg.ramp_kind == "linear" ? SwitchingProfile::linear_ramp(ramp, T, cfg.f_start, cfg.f_end)
                         : cfg.ramp_kind == "constant" ? SwitchingProfile::constant(T)
                         : SwitchingProfile::raised_cosine(ramp, T, cfg.f_start, cfg.f_end);
          const auto rep = decoherence_report(p, k);
          t.add_row({ramp, cut.epsilon, rep.n2_switched, rep.n2_unswitched, rep.restoration_ratio,
                     rep.analytic_limit});
        }
      }
      dc.emit(t.str());
      return kPass;
    }

    if (pre->parsed()) {
      std::cout << to_text(preset(parse_experiment(preset_name)));
      return kPass;
    }

    if (run->parsed()) {
      if (all == !run_config.empty()) throw ConfigError("give either a config file or --all");
      if (all) return print_results(run_all(output_root(out_dir.empty() ? "vqs_out" : out_dir)));
      const auto cfg = load_config(run_config);
      const auto root = out_dir.empty() ? output_root(cfg.output_dir) : output_root(out_dir);
      return print_results({run_experiment(cfg, root)});
    }
  } catch (const InvariantError& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return kInvariantBreach;
  } catch (const QuadratureError& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return kInvariantBreach;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::logic_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kToleranceFail;
  }
  return kPass;
}
