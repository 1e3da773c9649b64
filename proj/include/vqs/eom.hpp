// eom.hpp — classical Abraham-Lorentz and quantum expectation-value equations of motion
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "vqs/kernels.hpp"
#include "vqs/system.hpp"

namespace vqs {

template <class Real>
struct BasicClassicalState {
  Real x{0}, v{0}, a{0};
};
using ClassicalState = BasicClassicalState<double>;

template <class Real>
struct BasicClassicalRun {
  std::vector<Real> t, x, v, a;
  bool runaway = false;  // overflow truncated the run
};

// m_R x'' = F(x, t) + m_R t0 x''' as the first-order system (x, v, a),
// a' = (a - F/m_R)/t0, advanced by RK4.
template <class Real, class Force>
BasicClassicalRun<Real> integrate_al_system(Force&& F, BasicClassicalState<Real> s, Real t_end,
                                            Real dt, Real m_R, Real t0,
                                            std::size_t record_every = 1) {
  using std::abs;
  BasicClassicalRun<Real> run;
  const std::size_t n = static_cast<std::size_t>(t_end / dt + Real(0.5));
  auto deriv = [&](const BasicClassicalState<Real>& y, Real t) {
    return BasicClassicalState<Real>{y.v, y.a, (y.a - F(y.x, t) / m_R) / t0};
  };
  auto axpy = [](const BasicClassicalState<Real>& y, Real h, const BasicClassicalState<Real>& k) {
    return BasicClassicalState<Real>{y.x + h * k.x, y.v + h * k.v, y.a + h * k.a};
  };
  auto push = [&](Real t) {
    run.t.push_back(t);
    run.x.push_back(s.x);
    run.v.push_back(s.v);
    run.a.push_back(s.a);
  };
  const Real limit = Real(1e150);
  push(Real(0));
  for (std::size_t i = 0; i < n; ++i) {
    const Real t = Real(i) * dt;
    const auto k1 = deriv(s, t);
    const auto k2 = deriv(axpy(s, dt / 2, k1), t + dt / 2);
    const auto k3 = deriv(axpy(s, dt / 2, k2), t + dt / 2);
    const auto k4 = deriv(axpy(s, dt, k3), t + dt);
    s.x += dt / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
    s.v += dt / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
    s.a += dt / 6 * (k1.a + 2 * k2.a + 2 * k3.a + k4.a);
    const bool bad = !(abs(s.a) < limit) || !(abs(s.v) < limit) || !(abs(s.x) < limit);
    if (bad) {
      run.runaway = true;
      break;
    }
    if ((i + 1) % record_every == 0 || i + 1 == n) push(Real(i + 1) * dt);
  }
  return run;
}

using ForceFn = std::function<double(double x, double t)>;

struct EomResult {
  std::vector<double> t, x, v, a, p;
  bool runaway = false;               // overflow or detected growth
  std::optional<double> growth_rate;  // from detect_runaway
};

EomResult integrate_classical_al(const ForceFn& F, const ClassicalState& s0, double t_end,
                                 double dt, const PhysicalContext& ctx, const CutoffConfig& cut,
                                 std::size_t record_every = 1);

// Order-reduced quantum EOM for <x>, <p>. An initial acceleration a0 can be
// supplied; it only enters the record at t = 0.
EomResult integrate_quantum_eom(const SystemSpec& spec, double x0, double p0, double t_end,
                                double dt, const PhysicalContext& ctx, const CutoffConfig& cut,
                                std::optional<double> injected_a0 = std::nullopt,
                                std::size_t record_every = 1);

double vem_cancellation_residual(const PhysicalContext& ctx, const CutoffConfig& cut);
// |int_0^t D - 2k| / 2k with the integral by quadrature
double vem_cancellation_residual_bruteforce(const PhysicalContext& ctx, const CutoffConfig& cut,
                                            double t);

// Log-linear least squares on the last half of |a(t)|.
std::optional<double> detect_runaway(const EomResult& r);

struct LinearFit {
  double slope = 0.0, intercept = 0.0, slope_stderr = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace vqs
