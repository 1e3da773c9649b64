// coefficients.hpp — memory integrals of the master equation as time-local coefficients
#pragma once

#include <functional>

#include "vqs/kernels.hpp"
#include "vqs/system.hpp"

namespace vqs {

struct MeqCoefficients {
  double cN_x = 0.0;
  double cN_p = 0.0;
  double cD_x = 0.0;
  double cD_p = 0.0;
};

// Exact integrals over [0, t]: closed forms for the free particle, panel
// quadrature for the oscillator.
MeqCoefficients meq_coefficients(const SystemSpec& spec, double t, const KernelFamily& k);

// t -> infinity limits (exact for the Lorentzian cutoff).
MeqCoefficients markov_coefficients(const SystemSpec& spec, const KernelFamily& k);

// Plateau read off the three-term dissipation identity; cN from the exact limits.
MeqCoefficients stencil_coefficients(const SystemSpec& spec, const KernelFamily& k);

// Calls visit(tau, weight) on Gauss-Legendre panels covering [a, b]. Panel
// widths follow the eps-scale structure near the origin and keep at most
// half a radian of phase at frequency w_max.
void panel_nodes(double a, double b, double eps, double w_max,
                 const std::function<void(double, double)>& visit);

// Memory operators K_N(t) = int_0^t N x_H(-tau), K_D(t) = int_0^t D x_H(-tau).
// Free and harmonic systems keep the linear form c_x X + c_p P; custom
// potentials carry dense matrices built from the eigenbasis of H0.
class MemoryKernel {
 public:
  MemoryKernel(const SystemSpec& spec, const Operators& ops, const KernelFamily& k, bool markov);

  // times must be non-decreasing across calls
  void advance(double t);

  bool linear() const { return linear_; }
  double time() const { return t_; }
  const MeqCoefficients& coefficients() const { return c_; }
  const Mat& KN() const { return kn_; }
  const Mat& KD() const { return kd_; }

 private:
  void rebuild_dense();

  const SystemSpec* spec_;
  const KernelFamily* k_;
  bool markov_;
  bool linear_;
  double t_ = 0.0;
  MeqCoefficients c_;

  // dense route
  Mat V_, xe_, fn_, fd_, kn_, kd_;
  Eigen::VectorXd E_;
  double hbar_ = 1.0;
  double w_span_ = 0.0;
};

}  // namespace vqs
