// propagator.hpp — second-order master equation for the reduced density matrix
#pragma once

#include <cstddef>
#include <vector>

#include "vqs/coefficients.hpp"
#include "vqs/system.hpp"

namespace vqs {

// -(i/hbar)[H, rho] - (1/hbar)[X, cN_x[X,rho] + cN_p[P,rho]]
//   + (i/2hbar)[X, cD_x{X,rho} + cD_p{P,rho}]
Mat meq_rhs(const Mat& rho, const Operators& ops, const MeqCoefficients& c, double hbar);
Mat meq_rhs(const DensityMatrix& rho, const Operators& ops, const MeqCoefficients& c,
            double hbar);
// same with operator-valued memory terms K_N, K_D
Mat meq_rhs_dense(const Mat& rho, const Operators& ops, const Mat& KN, const Mat& KD,
                  double hbar);
// noise-only truncation: -(N1(t)/hbar)[X,[X,rho]]
Mat decoherence_rhs(const Mat& rho, const Operators& ops, double n1, double hbar);

struct PropagationOptions {
  double dt = 0.1;
  std::size_t n_steps = 100;
  double warmup_dt = 0.0;         // optional finer steps at the start
  std::size_t warmup_steps = 0;
  bool markov = false;            // freeze coefficients at their plateau
  bool decoherence_only = false;
  std::size_t record_every = 1;
  bool record_min_eig = true;
  double trace_tol = 1e-10;       // per-step trace drift
  double herm_tol = 1e-10;
};

struct Trajectory {
  std::vector<double> t, x_mean, p_mean, x_var, p_var, purity, trace_err, herm_err, min_eig,
      energy;
  DensityMatrix final_state;
  double max_trace_err = 0.0;
  double max_herm_err = 0.0;
  double max_step_drift = 0.0;
  double min_eig_seen = 1.0;
  std::size_t size() const { return t.size(); }
};

Trajectory propagate(const DensityMatrix& rho0, const SystemSpec& spec, const KernelFamily& k,
                     const PropagationOptions& opt);

// Largest |<x>_dt - <x>_{dt/2}| over common record times, relative to max |<x>|.
double step_halving_deviation(const DensityMatrix& rho0, const SystemSpec& spec,
                              const KernelFamily& k, PropagationOptions opt);

}  // namespace vqs
