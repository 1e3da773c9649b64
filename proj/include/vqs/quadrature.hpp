// quadrature.hpp — adaptive rules for kernel-weighted integrals
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace vqs {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace quad {

using Integrand = std::function<double(double)>;

inline constexpr double kRelTolFloor = 1e-12;

struct Options {
  double rel_tol = 1e-13;  // raised to kRelTolFloor for finite panels
  unsigned max_depth = 20;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;  // integral of |f|, the scale the error is judged against
};

// Gauss-Kronrod (15/31) adaptive on a finite interval.
Result adaptive(const Integrand& f, double a, double b, const Options& opt = {});

// Splits [a,b] at the given interior points and sums the pieces.
Result piecewise(const Integrand& f, std::vector<double> points, const Options& opt = {});

// [a,b] with 0 <= a, for integrands with structure on the scale eps near the
// origin: tau = eps tan(u) on [a, min(b, 20 eps)], octave panels beyond.
Result peaked(const Integrand& f, double a, double b, double eps, const Options& opt = {});

// [a, inf) for integrands decaying at least like 1/tau^2.
Result to_infinity(const Integrand& f, double a, const Options& opt = {});

// Gauss-Legendre nodes/weights on [-1, 1], 20 points.
const std::vector<double>& gl_nodes();
const std::vector<double>& gl_weights();

}  // namespace quad
}  // namespace vqs
