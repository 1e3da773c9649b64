// coefficients.cpp — memory integrals: closed forms, panel quadrature, eigenbasis tables
#include "vqs/coefficients.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vqs/quadrature.hpp"

namespace vqs {

namespace {

MeqCoefficients free_closed_form(const SystemSpec& spec, double t, const KernelFamily& k) {
  const double m = spec.mass;
  const double kd = k.prefactor_delta3();
  MeqCoefficients c;
  c.cN_x = k.n1(t);
  // -(1/m) int_0^t tau N = -(1/m)(t N1 - N2)
  c.cN_p = -(t * k.n1(t) - k.n2(t)) / m;
  c.cD_x = kd * (k.smoothed_delta_d2(t) - k.smoothed_delta_d2(0.0));
  c.cD_p = -(kd / m) * (t * k.smoothed_delta_d2(t) - k.smoothed_delta_d1(t));
  return c;
}

void add_harmonic(MeqCoefficients& c, const SystemSpec& spec, const KernelFamily& k, double a,
                  double b) {
  const double w = spec.omega0;
  const double mw = spec.mass * w;
  panel_nodes(a, b, k.epsilon(), w, [&](double tau, double wt) {
    const double n = k.noise(tau) * wt;
    const double d = k.dissipation(tau) * wt;
    const double cx = std::cos(w * tau);
    const double cp = -std::sin(w * tau) / mw;
    c.cN_x += n * cx;
    c.cN_p += n * cp;
    c.cD_x += d * cx;
    c.cD_p += d * cp;
  });
}

}  // namespace

void panel_nodes(double a, double b, double eps, double w_max,
                 const std::function<void(double, double)>& visit) {
  const auto& x = quad::gl_nodes();
  const auto& w = quad::gl_weights();
  while (a < b) {
    double h = 0.25 * std::max(a, eps);
    if (w_max > 0.0) h = std::min(h, 0.5 / w_max);
    const double top = (b - a <= h) ? b : a + h;
    const double mid = 0.5 * (a + top);
    const double half = 0.5 * (top - a);
    for (std::size_t i = 0; i < x.size(); ++i) visit(mid + half * x[i], half * w[i]);
    a = top;
  }
}

MeqCoefficients meq_coefficients(const SystemSpec& spec, double t, const KernelFamily& k) {
  if (t < 0.0) throw std::domain_error("meq_coefficients requires t >= 0");
  switch (spec.kind) {
    case PotentialKind::Free: return free_closed_form(spec, t, k);
    case PotentialKind::Harmonic: {
      MeqCoefficients c;
      add_harmonic(c, spec, k, 0.0, t);
      return c;
    }
    case PotentialKind::Custom: break;
  }
  throw std::invalid_argument("custom potentials have operator-valued memory terms");
}

MeqCoefficients markov_coefficients(const SystemSpec& spec, const KernelFamily& k) {
  MeqCoefficients c;
  switch (spec.kind) {
    case PotentialKind::Free:
      c.cN_p = k.n2_plateau() / spec.mass;
      c.cD_x = 2.0 * k.vem_coefficient();
      return c;
    case PotentialKind::Harmonic: {
      const double w = spec.omega0;
      const double mw = spec.mass * w;
      c.cN_x = k.noise_cos_transform(w);
      c.cN_p = -k.noise_sin_transform(w) / mw;
      c.cD_x = k.dissipation_cos_transform(w);
      c.cD_p = -k.dissipation_sin_transform(w) / mw;
      return c;
    }
    case PotentialKind::Custom: break;
  }
  throw std::invalid_argument("custom potentials have operator-valued memory terms");
}

MeqCoefficients stencil_coefficients(const SystemSpec& spec, const KernelFamily& k) {
  MeqCoefficients c = markov_coefficients(spec, k);
  if (spec.kind == PotentialKind::Harmonic) {
    const double w2 = spec.omega0 * spec.omega0;
    c.cD_x = k.dissipation_weighted_integral({1.0, -w2, 0.0});
    c.cD_p = k.dissipation_weighted_integral({0.0, 0.0, w2 / spec.mass});
  } else {
    c.cD_x = k.dissipation_weighted_integral({1.0, 0.0, 0.0});
    c.cD_p = k.dissipation_weighted_integral({0.0, 0.0, 0.0});
  }
  return c;
}

MemoryKernel::MemoryKernel(const SystemSpec& spec, const Operators& ops, const KernelFamily& k,
                           bool markov)
    : spec_(&spec), k_(&k), markov_(markov) {
  linear_ = spec.kind != PotentialKind::Custom;
  if (linear_) {
    if (markov_) c_ = markov_coefficients(spec, k);
    return;
  }
  if (spec.custom.time_dependent)
    throw ConfigError("the propagator supports time-independent custom potentials only");
  hbar_ = k.ctx().hbar;
  Eigen::SelfAdjointEigenSolver<Mat> es{Mat(ops.H0)};
  V_ = es.eigenvectors();
  E_ = es.eigenvalues();
  xe_ = V_.adjoint() * Mat(ops.X) * V_;
  w_span_ = (E_.maxCoeff() - E_.minCoeff()) / hbar_;
  const int n = ops.dim();
  fn_ = Mat::Zero(n, n);
  fd_ = Mat::Zero(n, n);
  if (markov_) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double w = (E_(a) - E_(b)) / hbar_;
        fn_(a, b) = cplx(k.noise_cos_transform(w), -k.noise_sin_transform(w));
        fd_(a, b) = cplx(k.dissipation_cos_transform(w), -k.dissipation_sin_transform(w));
      }
  }
  rebuild_dense();
}

void MemoryKernel::rebuild_dense() {
  kn_ = V_ * xe_.cwiseProduct(fn_) * V_.adjoint();
  kd_ = V_ * xe_.cwiseProduct(fd_) * V_.adjoint();
}

void MemoryKernel::advance(double t) {
  if (t < t_) throw std::invalid_argument("memory kernel times must be non-decreasing");
  if (t == t_ || markov_) {
    t_ = t;
    return;
  }
  if (linear_) {
    if (spec_->kind == PotentialKind::Free)
      c_ = free_closed_form(*spec_, t, *k_);
    else
      add_harmonic(c_, *spec_, *k_, t_, t);
    t_ = t;
    return;
  }
  const int n = static_cast<int>(E_.size());
  Eigen::VectorXcd u(n);
  panel_nodes(t_, t, k_->epsilon(), w_span_, [&](double tau, double wt) {
    for (int a = 0; a < n; ++a) u(a) = std::exp(cplx(0.0, -E_(a) * tau / hbar_));
    const Mat uu = u * u.adjoint();
    fn_ += (k_->noise(tau) * wt) * uu;
    fd_ += (k_->dissipation(tau) * wt) * uu;
  });
  t_ = t;
  rebuild_dense();
}

}  // namespace vqs
