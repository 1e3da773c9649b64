// kernels.hpp — regularized vacuum kernels and their moments
#pragma once

#include <complex>
#include <functional>

#include "vqs/units.hpp"

namespace vqs {

struct DerivativeStencil {
  double f0 = 0.0;  // f(0)
  double f2 = 0.0;  // f''(0)
  double f3 = 0.0;  // f'''(0)
};

class KernelFamily {
 public:
  KernelFamily(const PhysicalContext& ctx, const CutoffConfig& cut);

  const PhysicalContext& ctx() const { return ctx_; }
  const CutoffConfig& cut() const { return cut_; }
  double epsilon() const { return cut_.epsilon; }

  double prefactor_noise() const { return pn_; }       // e^2/(pi^2 eps0 c^3)
  double prefactor_n1() const { return pn1_; }         // 4 alpha hbar/(3 pi c^2)
  double prefactor_delta3() const { return pd3_; }     // e^2/(3 pi eps0 c^3)
  double vem_coefficient() const { return kvem_; }     // V_EM = k x^2
  double n2_plateau() const { return n2inf_; }         // 2 alpha hbar omega_max^2/(3 pi c^2)
  double mass_shift() const { return dm_; }            // 4 alpha hbar omega_max/(3 pi c^2)
  double radiation_coefficient() const { return rr_; } // 2 alpha hbar/(3 c^2)

  double smoothed_delta(double tau) const;
  double smoothed_delta_d1(double tau) const;
  double smoothed_delta_d2(double tau) const;
  double smoothed_delta_d3(double tau) const;

  std::complex<double> vacuum_correlator(double tau) const;
  double noise(double tau) const;
  double dissipation(double tau) const;
  double dissipation_via_delta(double tau) const;

  double n1(double tau) const;
  double n2(double t) const;
  double n2_minus_plateau(double t) const;  // N2 - N2(inf), without cancellation

  double dissipation_weighted_integral(const DerivativeStencil& s) const;
  double dissipation_weighted_integral_bruteforce(const std::function<double(double)>& f,
                                                  double t) const;

  // One-sided Fourier transforms over [0, inf), closed forms for the
  // Lorentzian cutoff; used for stationary coefficients.
  double delta_cos_transform(double w) const;
  double delta_sin_transform(double w) const;
  double noise_cos_transform(double w) const;
  double noise_sin_transform(double w) const;
  double dissipation_cos_transform(double w) const;
  double dissipation_sin_transform(double w) const;

 private:
  PhysicalContext ctx_;
  CutoffConfig cut_;
  double alpha_;
  double pn_, pn1_, pd3_, kvem_, n2inf_, dm_, rr_;
};

}  // namespace vqs
