// decoherence.hpp — coherence length, switched noise moments, collisional contrast
#pragma once

#include <functional>
#include <vector>

#include "vqs/kernels.hpp"
#include "vqs/system.hpp"

namespace vqs {

enum class ProfileKind { Constant, LinearRamp, RaisedCosineRamp, Custom };

// Coupling envelope f(t) on [0, T]: ramp from f_start up to 1, plateau at 1,
// ramp down to f_end. Linear ramps keep their slope jumps as kinks.
class SwitchingProfile {
 public:
  struct Kink {
    double t;
    double jump;  // f'(t+) - f'(t-)
  };

  static SwitchingProfile constant(double T, double level = 1.0);
  static SwitchingProfile linear_ramp(double ramp, double T, double f_start, double f_end);
  static SwitchingProfile raised_cosine(double ramp, double T, double f_start, double f_end);
  // second derivative is mandatory; breakpoints mark jumps of f''
  static SwitchingProfile custom(double T, std::function<double(double)> f,
                                 std::function<double(double)> df,
                                 std::function<double(double)> d2f,
                                 std::vector<double> breakpoints = {});

  ProfileKind kind() const { return kind_; }
  double total() const { return T_; }
  double ramp() const { return ramp_; }
  double f_start() const { return value(0.0); }
  double f_end() const { return value(T_); }

  double value(double t) const;
  double d1(double t) const;  // right derivative at kinks
  double d2(double t) const;  // regular part
  const std::vector<Kink>& kinks() const { return kinks_; }
  std::vector<double> breakpoints() const;
  double integral(double t) const;  // int_0^t f

  SwitchingProfile mirrored() const;  // f(T - t)

 private:
  ProfileKind kind_ = ProfileKind::Constant;
  double T_ = 0.0, ramp_ = 0.0, f0_ = 1.0, fT_ = 1.0, level_ = 1.0;
  std::function<double(double)> f_, df_, d2f_;
  std::vector<double> custom_breaks_;
  std::vector<Kink> kinks_;
  bool mirror_ = false;
};

struct DecoherenceReport {
  double n2_unswitched = 0.0;
  double n2_switched = 0.0;
  double restoration_ratio = 0.0;
  double coherence_length_final = 0.0;
  double analytic_limit = 0.0;
};

double coherence_length(double t, const KernelFamily& k);
double decoherence_factor(double dx, double t, const KernelFamily& k);
double switched_n2(const SwitchingProfile& f, const KernelFamily& k);
double false_dec_limit(const SwitchingProfile& f, const KernelFamily& k);
double collisional_exponent(double lambda, double dx, const SwitchingProfile& f, double t);
DecoherenceReport decoherence_report(const SwitchingProfile& f, const KernelFamily& k);
DensityMatrix apply_decoherence(const DensityMatrix& rho, double t, const KernelFamily& k);

}  // namespace vqs
