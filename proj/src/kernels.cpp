// kernels.cpp — closed forms of N, D, N1, N2, delta_eps and the dissipation identity
#include "vqs/kernels.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vqs/quadrature.hpp"

namespace vqs {

using std::numbers::pi;

KernelFamily::KernelFamily(const PhysicalContext& ctx, const CutoffConfig& cut)
    : ctx_(ctx), cut_(cut) {
  ctx_.validate();
  cut_.validate(ctx_);
  alpha_ = fine_structure(ctx_);
  const double c3 = ctx_.c * ctx_.c * ctx_.c;
  const double e2 = ctx_.e_charge * ctx_.e_charge;
  const double w = cut_.omega_max;
  pn_ = e2 / (pi * pi * ctx_.eps0 * c3);
  pn1_ = 4.0 * alpha_ * ctx_.hbar / (3.0 * pi * ctx_.c * ctx_.c);
  pd3_ = e2 / (3.0 * pi * ctx_.eps0 * c3);
  kvem_ = e2 * w * w * w / (3.0 * pi * pi * ctx_.eps0 * c3);
  n2inf_ = 2.0 * alpha_ * ctx_.hbar * w * w / (3.0 * pi * ctx_.c * ctx_.c);
  dm_ = pn1_ * w;
  rr_ = 2.0 * alpha_ * ctx_.hbar / (3.0 * ctx_.c * ctx_.c);
}

double KernelFamily::smoothed_delta(double tau) const {
  const double e = cut_.epsilon;
  return e / (pi * (tau * tau + e * e));
}

double KernelFamily::smoothed_delta_d1(double tau) const {
  const double e = cut_.epsilon;
  const double s = tau * tau + e * e;
  return -2.0 * e * tau / (pi * s * s);
}

double KernelFamily::smoothed_delta_d2(double tau) const {
  const double e = cut_.epsilon;
  const double s = tau * tau + e * e;
  return e * (6.0 * tau * tau - 2.0 * e * e) / (pi * s * s * s);
}

double KernelFamily::smoothed_delta_d3(double tau) const {
  const double e = cut_.epsilon;
  const double s = tau * tau + e * e;
  return 24.0 * e * tau * (e * e - tau * tau) / (pi * s * s * s * s);
}

std::complex<double> KernelFamily::vacuum_correlator(double tau) const {
  const std::complex<double> z(tau, -cut_.epsilon);
  const std::complex<double> z2 = z * z;
  return ctx_.hbar / (pi * pi * ctx_.eps0 * ctx_.c * ctx_.c * ctx_.c) / (z2 * z2);
}

double KernelFamily::noise(double tau) const {
  const double e2 = cut_.epsilon * cut_.epsilon;
  const double t2 = tau * tau;
  const double s = t2 + e2;
  const double s2 = s * s;
  return pn_ * (e2 * e2 - 6.0 * e2 * t2 + t2 * t2) / (s2 * s2);
}

double KernelFamily::dissipation(double tau) const {
  if (tau <= 0.0) return 0.0;
  const double e = cut_.epsilon;
  const double s = tau * tau + e * e;
  const double s2 = s * s;
  return 8.0 * pn_ * e * tau * (e * e - tau * tau) / (s2 * s2);
}

double KernelFamily::dissipation_via_delta(double tau) const {
  if (tau <= 0.0) return 0.0;
  return pd3_ * smoothed_delta_d3(tau);
}

double KernelFamily::n1(double tau) const {
  if (tau < 0.0) throw std::domain_error("n1 requires tau >= 0");
  const double e2 = cut_.epsilon * cut_.epsilon;
  const double s = tau * tau + e2;
  return -pn1_ * tau * (tau * tau - 3.0 * e2) / (s * s * s);
}

double KernelFamily::n2(double t) const {
  if (t < 0.0) throw std::domain_error("n2 requires t >= 0");
  const double e2 = cut_.epsilon * cut_.epsilon;
  const double t2 = t * t;
  const double s = t2 + e2;
  return n2inf_ * t2 * (t2 + 3.0 * e2) / (s * s);
}

double KernelFamily::n2_minus_plateau(double t) const {
  const double e2 = cut_.epsilon * cut_.epsilon;
  const double s = t * t + e2;
  return n2inf_ * e2 * (t * t - e2) / (s * s);
}

double KernelFamily::dissipation_weighted_integral(const DerivativeStencil& s) const {
  return -rr_ * s.f3 - dm_ * s.f2 + 2.0 * kvem_ * s.f0;
}

double KernelFamily::dissipation_weighted_integral_bruteforce(
    const std::function<double(double)>& f, double t) const {
  if (t < 20.0 * cut_.epsilon)
    throw std::domain_error("brute-force dissipation integral needs t >= 20 eps");
  quad::Options opt;
  opt.rel_tol = 1e-14;
  return quad::peaked([&](double tau) { return dissipation(tau) * f(tau); }, 0.0, t,
                      cut_.epsilon, opt)
      .value;
}

namespace {

// e^{-x} Ei(x) and e^{x} E1(x) for x > 0
double em_ei(double x) { return std::exp(-x) * boost::math::expint(x); }
double ep_e1(double x) { return std::exp(x) * boost::math::expint(1, x); }

}  // namespace

double KernelFamily::delta_cos_transform(double w) const {
  return 0.5 * std::exp(-std::abs(w) * cut_.epsilon);
}

double KernelFamily::delta_sin_transform(double w) const {
  if (w == 0.0) return 0.0;
  const double x = std::abs(w) * cut_.epsilon;
  const double v = (em_ei(x) + ep_e1(x)) / (2.0 * pi);
  return w < 0.0 ? -v : v;
}

double KernelFamily::noise_cos_transform(double w) const {
  const double a = std::abs(w);
  return pn_ * pi * a * a * a * std::exp(-a * cut_.epsilon) / 12.0;
}

double KernelFamily::noise_sin_transform(double w) const {
  if (w == 0.0) return 0.0;
  const double a = std::abs(w);
  const double e = cut_.epsilon;
  const double x = a * e;
  // int_0^inf tau cos(a tau)/(tau^2+eps^2)
  const double cpart = -0.5 * (em_ei(x) - ep_e1(x));
  const double v = -(pn_ / 6.0) * (a / (e * e) + a * a * a * cpart);
  return w < 0.0 ? -v : v;
}

double KernelFamily::dissipation_cos_transform(double w) const {
  return pd3_ * (-smoothed_delta_d2(0.0) + w * w * smoothed_delta(0.0) -
                 w * w * w * delta_sin_transform(w));
}

double KernelFamily::dissipation_sin_transform(double w) const {
  return pd3_ * w * w * w * delta_cos_transform(w);
}

}  // namespace vqs
