// experiments.cpp — the named runs behind `vqs run`
#include "vqs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <json.hpp>
#include <numbers>
#include <stdexcept>

#include "vqs/decoherence.hpp"
#include "vqs/eom.hpp"
#include "vqs/kernels.hpp"
#include "vqs/output.hpp"
#include "vqs/propagator.hpp"
#include "vqs/quadrature.hpp"

namespace vqs {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

#ifndef VQS_VERSION
#define VQS_VERSION "dev"
#endif

double stability_dt(const SystemSpec& spec, double hbar) {
  double span = 0.0;
  if (const auto* ob = std::get_if<OscillatorBasis>(&spec.basis)) {
    span = ob->frequency * ob->dim;
  } else {
    const auto& g = std::get<GridBasis>(spec.basis);
    const double dx = g.spacing();
    span = 2.0 * hbar / (spec.mass * dx * dx);
    if (spec.kind == PotentialKind::Harmonic) {
      const double xm = std::max(std::abs(g.x_min), std::abs(g.x_max));
      span += 0.5 * spec.mass * spec.omega0 * spec.omega0 * xm * xm / hbar;
    }
  }
  if (!(span > 0.0)) throw ConfigError("cannot derive a stable time step");
  return 1.0 / span;
}

double envelope_decay_rate(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> tp, lp;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > 0.0) {
      const double a = y[i - 1], b = y[i], c = y[i + 1];
      const double den = a - 2.0 * b + c;
      const double d = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
      tp.push_back(t[i] + d * (t[i + 1] - t[i]));
      lp.push_back(std::log(b - 0.25 * (a - c) * d));
    }
  }
  if (tp.size() < 3) throw std::invalid_argument("too few maxima for an envelope fit");
  return -fit_line(tp, lp).slope;
}

namespace {

struct Run {
  ExperimentResult res;
  OutputSet out;
  json extra = json::object();
  json constants = json::array();

  Run(const ExperimentConfig& c, const fs::path& root)
      : out(root / experiment_name(c.experiment)) {
    res.name = experiment_name(c.experiment);
    res.dir = out.dir();
  }

  void check(const std::string& name, double value, double limit) {
    res.checks.push_back({name, value, limit, value <= limit});
  }
  void csv(const std::string& name, const CsvTable& t) {
    out.add(name, t.str());
    res.files.push_back(name);
  }
  void note_constants(const PhysicalContext& ctx, const CutoffConfig& cut) {
    const KernelFamily k(ctx, cut);
    json j;
    j["hbar"] = ctx.hbar;
    j["c"] = ctx.c;
    j["eps0"] = ctx.eps0;
    j["e_charge"] = ctx.e_charge;
    j["alpha"] = fine_structure(ctx);
    j["mass_bare"] = ctx.mass_bare;
    j["omega_max"] = cut.omega_max;
    j["epsilon"] = cut.epsilon;
    j["k_max"] = cut.k_max;
    j["mass_shift"] = mass_shift(ctx, cut.omega_max);
    j["mass_renormalized"] = renormalized_mass(ctx, cut);
    j["runaway_time"] = runaway_time(ctx, cut);
    j["n2_plateau"] = k.n2_plateau();
    j["vem_coefficient"] = k.vem_coefficient();
    constants.push_back(j);
  }
};

std::vector<double> cutoffs(const ExperimentConfig& c) {
  return c.omega_max_list.empty() ? std::vector<double>{c.omega_max} : c.omega_max_list;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  return v;
}

SwitchingProfile make_profile(const ExperimentConfig& c, double ramp) {
  const double T = c.ramp_total_factor * ramp;
  if (c.ramp_kind == "raised_cosine") return SwitchingProfile::raised_cosine(ramp, T, c.f_start, c.f_end);
  if (c.ramp_kind == "linear") return SwitchingProfile::linear_ramp(ramp, T, c.f_start, c.f_end);
  if (c.ramp_kind == "constant") return SwitchingProfile::constant(T);
  throw ConfigKeyError("ramp.kind", 0, "unknown profile '" + c.ramp_kind + "'");
}

CsvTable trajectory_table(const Trajectory& tr, bool with_energy) {
  std::vector<std::string> h{"t", "x_mean", "p_mean", "x_var", "p_var",
                             "purity", "trace_err", "herm_err", "min_eig"};
  if (with_energy) h.push_back("energy");
  CsvTable tab(h);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    std::vector<double> r{tr.t[i], tr.x_mean[i], tr.p_mean[i], tr.x_var[i], tr.p_var[i],
                          tr.purity[i], tr.trace_err[i], tr.herm_err[i], tr.min_eig[i]};
    if (with_energy) r.push_back(tr.energy[i]);
    tab.add_row(r);
  }
  return tab;
}

PropagationOptions prop_options(const ExperimentConfig& c, const SystemSpec& spec, double hbar,
                                double t_end) {
  PropagationOptions o;
  o.dt = c.dt > 0.0 ? c.dt : stability_dt(spec, hbar);
  o.warmup_dt = c.warmup_dt;
  o.warmup_steps = static_cast<std::size_t>(std::max(0, c.warmup_steps));
  const double rest = t_end - o.warmup_dt * static_cast<double>(o.warmup_steps);
  if (!(rest > 0.0)) throw ConfigKeyError("t_end", 0, "shorter than the warm-up segment");
  o.n_steps = static_cast<std::size_t>(std::llround(rest / o.dt));
  o.markov = c.markov;
  o.decoherence_only = c.decoherence_only;
  o.record_every = static_cast<std::size_t>(std::max(1, c.record_every));
  o.trace_tol = 1e-9;
  o.herm_tol = 1e-9;
  return o;
}

Basis make_basis(const ExperimentConfig& c, double omega, int dim) {
  if (c.basis == "grid") return GridBasis{c.grid_points, c.grid_min, c.grid_max};
  return OscillatorBasis{dim, omega};
}

void structural(Run& r, const Trajectory& tr, const std::string& tag) {
  r.check(tag + "trace_drift", tr.max_trace_err, 1e-9);
  r.check(tag + "hermiticity_residual", tr.max_herm_err, 1e-9);
  r.extra[tag + "min_eigenvalue"] = tr.min_eig_seen;
}

// --- experiments ---------------------------------------------------------

void kernels_dump(const ExperimentConfig& c, Run& r) {
  const auto ctx = make_context(c);
  const auto cut = CutoffConfig::from_omega_max(c.omega_max, ctx);
  r.note_constants(ctx, cut);
  const auto sc = to_natural(ctx, cut);
  const KernelFamily k(sc.ctx, sc.cut);
  CsvTable tab({"tau", "noise", "dissipation", "n1", "n2"});
  double dmax = 0.0, dev = 0.0;
  for (double tau : logspace(0.1, 1e3, c.points)) {
    const double d = k.dissipation(tau);
    tab.add_row({tau, k.noise(tau), d, k.n1(tau), k.n2(tau)});
    dmax = std::max(dmax, std::abs(d));
    dev = std::max(dev, std::abs(d - k.dissipation_via_delta(tau)));
  }
  r.csv("kernels.csv", tab);
  r.check("dissipation_routes_agree", dev / dmax, 1e-10);
}

void free_particle(const ExperimentConfig& c, Run& r) {
  const double t_end = c.t_end > 0.0 ? c.t_end : 100.0;
  CsvTable sum({"omega_max", "mass_tilde", "eom_drift", "propagator_drift", "max_trace_err",
                "max_herm_err", "min_eig"});
  int i = 0;
  for (double w : cutoffs(c)) {
    // cutoff units: hbar = c = 1, omega_max -> 1, mass in units of hbar omega_max/c^2
    const double mt = c.mass / w;
    const auto ctx = PhysicalContext::natural(c.alpha, mt);
    const auto cut = CutoffConfig::from_omega_max(1.0, ctx);
    r.note_constants(ctx, cut);
    const KernelFamily k(ctx, cut);
    const auto spec = SystemSpec::free(mt, make_basis(c, c.omega0, c.dim > 0 ? c.dim : 32));
    // momentum scale for the relative drift; falls back to the packet width when p0 = 0
    const double pscale = std::max(std::abs(c.p0), ctx.hbar / (2.0 * c.sigma));
    const auto opt = prop_options(c, spec, ctx.hbar, t_end);

    const auto eom = integrate_quantum_eom(spec, c.x0, c.p0, t_end, opt.dt, ctx, cut);
    double eom_drift = 0.0;
    for (double p : eom.p) eom_drift = std::max(eom_drift, std::abs(p - eom.p.front()));
    eom_drift /= pscale;

    const auto rho0 = gaussian_wavepacket(spec, c.x0, c.p0, c.sigma, ctx.hbar);
    const auto tr = propagate(rho0, spec, k, opt);
    double drift = 0.0;
    for (double p : tr.p_mean) drift = std::max(drift, std::abs(p - tr.p_mean.front()));
    drift /= pscale;

    const std::string tag = "cutoff_" + std::to_string(i) + "_";
    r.csv("trajectory_" + std::to_string(i) + ".csv", trajectory_table(tr, false));
    r.check(tag + "eom_momentum_drift", eom_drift, 1e-8);
    r.check(tag + "propagator_momentum_drift", drift, 1e-8);
    structural(r, tr, tag);
    sum.add_row({w, mt, eom_drift, drift, tr.max_trace_err, tr.max_herm_err, tr.min_eig_seen});
    ++i;
  }
  r.csv("summary.csv", sum);
}

void harmonic_damping(const ExperimentConfig& c, Run& r) {
  const auto ctx = make_context(c);
  const auto cut = CutoffConfig::from_omega_max(c.omega_max, ctx);
  r.note_constants(ctx, cut);
  const KernelFamily k(ctx, cut);
  const double period = 2.0 * std::numbers::pi / c.omega0;
  const double t_end = c.t_end > 0.0 ? c.t_end : 20.0 * period;

  auto run_dim = [&](int d) {
    const auto spec = SystemSpec::harmonic(c.omega0, ctx.mass_bare, make_basis(c, c.omega0, d));
    const auto rho0 = coherent_state(spec, c.x0, c.p0, ctx.hbar);
    return propagate(rho0, spec, k, prop_options(c, spec, ctx.hbar, t_end));
  };
  auto linf = [](const Trajectory& a, const Trajectory& b) {
    double m = 0.0, s = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      m = std::max(m, std::abs(a.x_mean[i] - b.x_mean[i]));
      s = std::max(s, std::abs(b.x_mean[i]));
    }
    return m / s;
  };

  Trajectory tr;
  CsvTable conv({"dim", "linf_vs_previous"});
  int dim = c.dim;
  if (c.basis == "grid" || c.dim > 0) {
    tr = run_dim(c.dim);
  } else {
    // doubling rule
    const double conv_tol = 1e-6;
    Trajectory prev = run_dim(16);
    conv.add_row({16.0, std::nan("")});
    dim = 16;
    double diff = 0.0;
    for (int d = 32; d <= 64; d *= 2) {
      tr = run_dim(d);
      diff = linf(tr, prev);
      conv.add_row({static_cast<double>(d), diff});
      dim = d;
      if (diff <= conv_tol) break;
      prev = tr;
    }
    r.check("dimension_converged", diff, conv_tol);
    r.csv("convergence.csv", conv);
  }
  r.extra["dim"] = dim;
  r.csv("trajectory.csv", trajectory_table(tr, true));
  structural(r, tr, "");

  const double m_R = renormalized_mass(ctx, cut);
  const double gamma = 2.0 * fine_structure(ctx) * ctx.hbar * c.omega0 * c.omega0 /
                       (3.0 * m_R * ctx.c * ctx.c);
  const double rate = envelope_decay_rate(tr.t, tr.x_mean);
  r.extra["energy_decay_rate_fit"] = 2.0 * rate;
  r.extra["energy_decay_rate_expected"] = gamma;
  r.check("decay_rate_rel_err", std::abs(2.0 * rate / gamma - 1.0), 5e-2);

  // standalone quantum EOM, compared over the first 10 periods
  const auto spec = SystemSpec::harmonic(c.omega0, ctx.mass_bare, make_basis(c, c.omega0, dim));
  const double h = std::min(0.05, 0.1 / c.omega0) * (c.dt > 0.0 ? std::min(1.0, c.dt) : 1.0);
  const double t10 = 10.0 * period;
  const auto eom = integrate_quantum_eom(spec, c.x0, c.p0, t10, h, ctx, cut);
  CsvTable et({"t", "x_mean", "p_mean"});
  for (std::size_t i = 0; i < eom.t.size(); ++i) et.add_row({eom.t[i], eom.x[i], eom.p[i]});
  r.csv("eom.csv", et);
  double dev = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < tr.size() && tr.t[i] <= t10; ++i) {
    const double u = tr.t[i] / h;
    const std::size_t j = std::min(static_cast<std::size_t>(u), eom.t.size() - 2);
    const double f = u - static_cast<double>(j);
    const double xe = (1.0 - f) * eom.x[j] + f * eom.x[j + 1];
    dev = std::max(dev, std::abs(tr.x_mean[i] - xe));
    scale = std::max(scale, std::abs(tr.x_mean[i]));
  }
  r.check("eom_vs_propagator_linf", dev / scale, 2e-2);
}

void classical_runaway(const ExperimentConfig& c, Run& r) {
  CsvTable sum({"omega_max", "runaway_time", "fitted_rate", "expected_rate", "rel_err"});
  int i = 0;
  for (double w : cutoffs(c)) {
    const auto ctx = make_context(c);
    const auto cut = CutoffConfig::from_omega_max(w, ctx);
    r.note_constants(ctx, cut);
    const double t0 = runaway_time(ctx, cut);
    const double dt = c.dt > 0.0 ? c.dt : t0 / 20.0;
    const double t_end = c.t_end > 0.0 ? c.t_end : 20.0 * t0;
    auto zero = [](double, double) { return 0.0; };
    const auto run = integrate_classical_al(zero, {c.x0, c.p0 / ctx.mass_bare, c.a0}, t_end, dt,
                                            ctx, cut);
    CsvTable tab({"t", "x", "v", "a"});
    for (std::size_t j = 0; j < run.t.size(); ++j)
      tab.add_row({run.t[j], run.x[j], run.v[j], run.a[j]});
    r.csv("runaway_" + std::to_string(i) + ".csv", tab);
    const double m_R = renormalized_mass(ctx, cut);
    const double expect = 3.0 * m_R * ctx.c * ctx.c / (2.0 * fine_structure(ctx) * ctx.hbar);
    const double fitted = run.growth_rate.value_or(0.0);
    const double err = std::abs(fitted / expect - 1.0);
    sum.add_row({w, t0, fitted, expect, err});
    r.check("cutoff_" + std::to_string(i) + "_rate_rel_err", err, 1e-2);
    ++i;
  }
  r.csv("summary.csv", sum);
}

void vem_cancel(const ExperimentConfig& c, Run& r) {
  CsvTable tab({"omega_max", "epsilon", "t", "residual_analytic", "residual_bruteforce"});
  const auto ctx = make_context(c);
  auto ws = cutoffs(c);
  std::sort(ws.begin(), ws.end());  // epsilon refinement
  const double t_ref = c.t_end > 0.0 ? c.t_end : 100.0;
  const auto cut0 = CutoffConfig::from_omega_max(ws.front(), ctx);
  const double t = t_ref * cut0.epsilon;  // fixed physical time
  double prev = INFINITY, worst = 0.0, increase = 0.0;
  for (double w : ws) {
    const auto cut = CutoffConfig::from_omega_max(w, ctx);
    r.note_constants(ctx, cut);
    const double an = vem_cancellation_residual(ctx, cut);
    const double bf = vem_cancellation_residual_bruteforce(ctx, cut, t);
    tab.add_row({w, cut.epsilon, t, an, bf});
    worst = std::max(worst, an);
    increase = std::max(increase, bf - prev);
    if (w == ws.front()) r.check("bruteforce_residual", bf, 1e-3);
    prev = bf;
  }
  r.csv("vem.csv", tab);
  r.check("analytic_residual", worst, 1e-14);
  r.check("bruteforce_nonincreasing", increase, 0.0);
}

void coherence(const ExperimentConfig& c, Run& r) {
  const auto ctx = make_context(c);
  const auto cut = CutoffConfig::from_omega_max(c.omega_max, ctx);
  r.note_constants(ctx, cut);
  const KernelFamily k(ctx, cut);
  const double eps = cut.epsilon;
  CsvTable tab({"t", "n2", "coherence_length"});
  for (double t : logspace(0.5 * eps, (c.t_end > 0.0 ? c.t_end : 1e6) * eps, c.points))
    tab.add_row({t, k.n2(t), coherence_length(t, k)});
  r.csv("coherence.csv", tab);
  const double plateau = coherence_length(1e8 * eps, k) * cut.k_max;
  const double a = fine_structure(ctx);
  r.extra["plateau_lx_kmax"] = plateau;
  r.check("plateau_vs_closed_form", std::abs(plateau - std::sqrt(3.0 * std::numbers::pi / (2.0 * a))),
          1e-2);
  if (std::abs(a / codata::alpha - 1.0) < 1e-9) r.check("plateau_vs_25.41", std::abs(plateau - 25.41), 1e-2);
}

void false_decoherence(const ExperimentConfig& c, Run& r) {
  const auto ctx = make_context(c);
  auto ws = cutoffs(c);
  std::sort(ws.begin(), ws.end());
  auto ramps = c.ramp_durations;
  std::sort(ramps.begin(), ramps.end());
  const auto ref_cut = CutoffConfig::from_omega_max(ws.front(), ctx);
  CsvTable tab({"ramp_duration", "epsilon", "n2_switched", "n2_unswitched", "ratio", "analytic_limit"});
  double nonmono = 0.0, conv_bad = 0.0, worst_long = 0.0, prev_long = INFINITY;
  for (double w : ws) {
    const auto cut = CutoffConfig::from_omega_max(w, ctx);
    r.note_constants(ctx, cut);
    const KernelFamily k(ctx, cut);
    double prev = INFINITY;
    for (double ramp_eps : ramps) {
      // ramp durations in units of the coarsest epsilon, so physical times agree across cutoffs
      const auto p = make_profile(c, ramp_eps * ref_cut.epsilon);
      const auto rep = decoherence_report(p, k);
      const double ratio = std::abs(rep.restoration_ratio);
      tab.add_row({p.ramp(), cut.epsilon, rep.n2_switched, rep.n2_unswitched, rep.restoration_ratio,
                   rep.analytic_limit});
      if (c.f_start == 0.0 && c.f_end == 0.0) {
        nonmono = std::max(nonmono, ratio - prev);
        if (ramp_eps == ramps.back()) {
          conv_bad = std::max(conv_bad, ratio - prev_long);
          prev_long = ratio;
          if (w == ws.front()) worst_long = ratio;
        }
      }
      prev = ratio;
    }
  }
  r.csv("switch.csv", tab);
  if (c.f_start == 0.0 && c.f_end == 0.0) {
    r.check("ratio_nonincreasing_in_ramp", nonmono, 0.0);
    r.check("ratio_at_longest_ramp", worst_long, 1e-2);
    r.check("ratio_nonincreasing_under_refinement", conv_bad, 0.0);
  }

  // endpoint formula at the longest ramp and coarsest cutoff
  const KernelFamily k(ctx, ref_cut);
  const double ramp = ramps.back() * ref_cut.epsilon;
  const double plateau = k.n2_plateau();
  CsvTable ends({"f_start", "f_end", "n2_switched", "analytic_limit", "err_over_plateau"});
  double worst = 0.0;
  for (double a : {0.0, 1.0})
    for (double b : {0.0, 1.0}) {
      const double T = c.ramp_total_factor * ramp;
      const auto p = c.ramp_kind == "linear" ? SwitchingProfile::linear_ramp(ramp, T, a, b)
                                             : SwitchingProfile::raised_cosine(ramp, T, a, b);
      const double s = switched_n2(p, k);
      const double lim = false_dec_limit(p, k);
      const double e = std::abs(s - lim) / plateau;
      ends.add_row({a, b, s, lim, e});
      worst = std::max(worst, e);
    }
  r.csv("endpoints.csv", ends);
  r.check("endpoint_formula", worst, 1e-2);
}

void collisional(const ExperimentConfig& c, Run& r) {
  const auto ctx = make_context(c);
  const auto cut = CutoffConfig::from_omega_max(c.omega_max, ctx);
  r.note_constants(ctx, cut);
  const KernelFamily k(ctx, cut);
  const double ramp = c.ramp_durations.front() * cut.epsilon;
  const auto p = make_profile(c, ramp);
  const double T = p.total();
  CsvTable tab({"t", "f", "collisional_exponent"});
  for (int i = 0; i < c.points; ++i) {
    const double t = T * i / (c.points - 1);
    tab.add_row({t, p.value(t), collisional_exponent(c.lambda, c.delta_x, p, t)});
  }
  r.csv("contrast.csv", tab);
  const double col = collisional_exponent(c.lambda, c.delta_x, p, T);
  const double expect = c.lambda * c.delta_x * c.delta_x * p.integral(T);
  const auto rep = decoherence_report(p, k);
  const double dx2 = c.delta_x * c.delta_x / ctx.hbar;
  r.extra["collisional_exponent"] = col;
  r.extra["vacuum_exponent_switched"] = dx2 * rep.n2_switched;
  r.extra["vacuum_exponent_unswitched"] = dx2 * rep.n2_unswitched;
  r.check("collisional_matches_integral", std::abs(col / expect - 1.0), 1e-12);
  r.check("collisional_positive", col > 0.0 ? 0.0 : 1.0, 0.0);
  r.check("vacuum_ratio", std::abs(rep.restoration_ratio), 1e-2);
}

std::string summary_json(const Run& r) {
  json j;
  j["experiment"] = r.res.name;
  j["status"] = r.res.exit_code == kPass ? "pass"
                : r.res.exit_code == kInvariantBreach ? "invariant-breach"
                : r.res.exit_code == kConfigError ? "config-error"
                                                  : "fail";
  if (!r.res.message.empty()) j["message"] = r.res.message;
  json checks = json::array();
  for (const auto& ch : r.res.checks)
    checks.push_back({{"name", ch.name}, {"value", ch.value}, {"limit", ch.limit}, {"pass", ch.pass}});
  j["checks"] = checks;
  j["results"] = r.extra;
  return j.dump(2) + "\n";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const fs::path& root) {
  Run r(cfg, root);
  try {
    switch (cfg.experiment) {
      case Experiment::KernelsDump: kernels_dump(cfg, r); break;
      case Experiment::FreeParticle: free_particle(cfg, r); break;
      case Experiment::HarmonicDamping: harmonic_damping(cfg, r); break;
      case Experiment::ClassicalRunaway: classical_runaway(cfg, r); break;
      case Experiment::VemCancel: vem_cancel(cfg, r); break;
      case Experiment::CoherenceLength: coherence(cfg, r); break;
      case Experiment::FalseDecoherence: false_decoherence(cfg, r); break;
      case Experiment::CollisionalContrast: collisional(cfg, r); break;
    }
    const bool ok = std::all_of(r.res.checks.begin(), r.res.checks.end(),
                                [](const Check& ch) { return ch.pass; });
    r.res.exit_code = ok ? kPass : kToleranceFail;
  } catch (const InvariantError& e) {
    r.res.exit_code = kInvariantBreach;
    r.res.message = e.what();
  } catch (const QuadratureError& e) {
    r.res.exit_code = kInvariantBreach;
    r.res.message = e.what();
  } catch (const ConfigError& e) {
    r.res.exit_code = kConfigError;
    r.res.message = e.what();
  } catch (const std::logic_error& e) {  // domain_error, invalid_argument
    r.res.exit_code = kConfigError;
    r.res.message = e.what();
  }
  r.out.add("summary.json", summary_json(r));
  r.res.files.push_back("summary.json");
  r.out.finalize("manifest.json", [&](const std::map<std::string, std::string>& sums) {
    json m;
    m["experiment"] = r.res.name;
    m["version"] = VQS_VERSION;
    m["config"] = to_text(cfg);
    m["constants"] = r.constants;
    json files = json::object();
    for (const auto& [n, s] : sums) files[n] = {{"sha256", s}};
    m["files"] = files;
    return m.dump(2) + "\n";
  });
  return r.res;
}

std::vector<ExperimentResult> run_all(const fs::path& root) {
  std::vector<std::future<ExperimentResult>> jobs;
  for (Experiment e : all_experiments())
    jobs.push_back(std::async(std::launch::async, [e, root] { return run_experiment(preset(e), root); }));
  std::vector<ExperimentResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

int combined_exit_code(const std::vector<ExperimentResult>& rs) {
  int code = kPass;
  for (const auto& r : rs) {
    if (r.exit_code == kConfigError) return kConfigError;
    if (r.exit_code == kInvariantBreach) code = kInvariantBreach;
    else if (r.exit_code == kToleranceFail && code == kPass) code = kToleranceFail;
  }
  return code;
}

}  // namespace vqs
