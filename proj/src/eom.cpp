// eom.cpp — AL integration, order-reduced quantum EOM, runaway detection
#include "vqs/eom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vqs/quadrature.hpp"

namespace vqs {

EomResult integrate_classical_al(const ForceFn& F, const ClassicalState& s0, double t_end,
                                 double dt, const PhysicalContext& ctx, const CutoffConfig& cut,
                                 std::size_t record_every) {
  const double t0 = runaway_time(ctx, cut);
  if (!(dt > 0.0) || dt > t0 / 20.0 * (1.0 + 1e-12))
    throw ConfigError("classical AL integration needs 0 < dt <= t0/20");
  const double m_R = renormalized_mass(ctx, cut);
  auto run = integrate_al_system<double>(F, s0, t_end, dt, m_R, t0, record_every);
  EomResult r;
  r.t = std::move(run.t);
  r.x = std::move(run.x);
  r.v = std::move(run.v);
  r.a = std::move(run.a);
  r.p.reserve(r.v.size());
  for (double v : r.v) r.p.push_back(ctx.mass_bare * v);
  r.runaway = run.runaway;
  if (r.t.size() >= 100) r.growth_rate = detect_runaway(r);
  if (r.growth_rate) r.runaway = true;
  return r;
}

EomResult integrate_quantum_eom(const SystemSpec& spec, double x0, double p0, double t_end,
                                double dt, const PhysicalContext& ctx, const CutoffConfig& cut,
                                std::optional<double> injected_a0, std::size_t record_every) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  const double m = spec.mass;
  const double m_R = m + mass_shift(ctx, cut.omega_max);
  const double r = 2.0 * fine_structure(ctx) * ctx.hbar / (3.0 * ctx.c * ctx.c);
  const bool unforced = spec.kind == PotentialKind::Free;

  // dF/dx and dF/dt at (x, t)
  auto dforce = [&](double x, double t) -> std::pair<double, double> {
    switch (spec.kind) {
      case PotentialKind::Free: return {0.0, 0.0};
      case PotentialKind::Harmonic: return {-m * spec.omega0 * spec.omega0, 0.0};
      case PotentialKind::Custom: {
        const double hx = 1e-4 * std::max(1.0, std::abs(x));
        const double fx = (spec.force(x + hx, t) - spec.force(x - hx, t)) / (2.0 * hx);
        double ft = 0.0;
        if (spec.custom.time_dependent) {
          const double ht = 1e-4 * std::max(1.0, std::abs(t));
          ft = (spec.force(x, t + ht) - spec.force(x, t - ht)) / (2.0 * ht);
        }
        return {fx, ft};
      }
    }
    return {0.0, 0.0};
  };
  // returns (dx/dt, dp/dt)
  auto deriv = [&](double x, double p, double t) -> std::pair<double, double> {
    const double v = p / m;
    if (unforced) return {v, 0.0};
    const auto [fx, ft] = dforce(x, t);
    return {v, (m / m_R) * (spec.force(x, t) + (r / m_R) * (fx * v + ft))};
  };

  EomResult res;
  double x = x0, p = p0;
  auto push = [&](double t, std::optional<double> a_override) {
    res.t.push_back(t);
    res.x.push_back(x);
    res.p.push_back(p);
    res.v.push_back(p / m);
    res.a.push_back(a_override ? *a_override : deriv(x, p, t).second / m);
  };
  push(0.0, injected_a0);
  const std::size_t n = static_cast<std::size_t>(t_end / dt + 0.5);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i * dt;
    const auto k1 = deriv(x, p, t);
    const auto k2 = deriv(x + 0.5 * dt * k1.first, p + 0.5 * dt * k1.second, t + 0.5 * dt);
    const auto k3 = deriv(x + 0.5 * dt * k2.first, p + 0.5 * dt * k2.second, t + 0.5 * dt);
    const auto k4 = deriv(x + dt * k3.first, p + dt * k3.second, t + dt);
    x += dt / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
    p += dt / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
    if ((i + 1) % record_every == 0 || i + 1 == n) push((i + 1) * dt, std::nullopt);
  }
  if (res.t.size() >= 100) res.growth_rate = detect_runaway(res);
  res.runaway = res.growth_rate.has_value();
  return res;
}

double vem_cancellation_residual(const PhysicalContext& ctx, const CutoffConfig& cut) {
  using std::numbers::pi;
  const KernelFamily k(ctx, cut);
  const double w = cut.omega_max;
  const double direct = 2.0 * ctx.e_charge * ctx.e_charge * w * w * w /
                        (3.0 * pi * pi * ctx.eps0 * ctx.c * ctx.c * ctx.c);
  const double f0_term = k.dissipation_weighted_integral({1.0, 0.0, 0.0});
  return std::abs(direct - f0_term) / f0_term;
}

double vem_cancellation_residual_bruteforce(const PhysicalContext& ctx, const CutoffConfig& cut,
                                            double t) {
  const KernelFamily k(ctx, cut);
  const double integral = k.dissipation_weighted_integral_bruteforce([](double) { return 1.0; }, t);
  const double two_k = 2.0 * k.vem_coefficient();
  return std::abs(integral - two_k) / two_k;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw std::invalid_argument("fit_line needs >= 3 matched points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    ss += e * e;
  }
  f.slope_stderr = std::sqrt(ss / (n - 2) / sxx);
  return f;
}

std::optional<double> detect_runaway(const EomResult& r) {
  if (r.t.size() < 100) throw std::invalid_argument("detect_runaway needs at least 100 samples");
  std::vector<double> tt, la;
  for (std::size_t i = r.t.size() / 2; i < r.t.size(); ++i) {
    const double a = std::abs(r.a[i]);
    if (a > 0.0 && std::isfinite(a)) {
      tt.push_back(r.t[i]);
      la.push_back(std::log(a));
    }
  }
  if (tt.size() < 3) return std::nullopt;
  const LinearFit f = fit_line(tt, la);
  const bool visible = f.slope * (tt.back() - tt.front()) > 1e-3;
  if (f.slope > 0.0 && f.slope > 10.0 * f.slope_stderr && visible) return f.slope;
  return std::nullopt;
}

}  // namespace vqs
