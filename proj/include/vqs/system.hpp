// system.hpp — external potential, truncated bases, operators and states
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>

#include "vqs/kernels.hpp"
#include "vqs/units.hpp"

namespace vqs {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Mat = Eigen::MatrixXcd;

struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PotentialKind { Free, Harmonic, Custom };

// V0(x, t); force and its time derivative are taken by central differences
// unless supplied.
struct CustomPotential {
  std::function<double(double, double)> value;
  std::function<double(double, double)> force;     // optional, -dV/dx
  bool time_dependent = false;
};

struct OscillatorBasis {
  int dim = 32;
  double frequency = 1.0;  // Omega
};

struct GridBasis {
  int n_points = 128;
  double x_min = -1.0;
  double x_max = 1.0;
  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  double point(int i) const { return x_min + i * spacing(); }
};

using Basis = std::variant<OscillatorBasis, GridBasis>;

struct SystemSpec {
  PotentialKind kind = PotentialKind::Free;
  double omega0 = 0.0;
  CustomPotential custom;
  double mass = 1.0;
  Basis basis = OscillatorBasis{};
  bool include_vem = true;

  static SystemSpec free(double mass, Basis basis);
  static SystemSpec harmonic(double omega0, double mass, Basis basis);
  static SystemSpec custom_potential(CustomPotential v, double mass, Basis basis);

  void validate() const;
  int dim() const;
  bool is_grid() const { return std::holds_alternative<GridBasis>(basis); }
  double potential(double x, double t) const;
  double force(double x, double t) const;
};

struct Operators {
  SpMat X, P, X2, P2;
  SpMat H0;     // P^2/2m + V0, the zeroth-order Hamiltonian of the Heisenberg coefficients
  SpMat H;      // H0 + V_EM
  double vem = 0.0;
  Basis basis;
  int dim() const { return static_cast<int>(X.rows()); }
};

Operators build_operators(const SystemSpec& spec, const KernelFamily& kernels, double t = 0.0);

struct DensityMatrix {
  Mat rho;
  Basis basis;

  int dim() const { return static_cast<int>(rho.rows()); }
  double trace_error() const;          // |Tr rho - 1|
  double hermiticity_residual() const; // max |rho - rho^dagger|
  double min_eigenvalue() const;
  double purity() const;
  void validate(double herm_tol = 1e-12, double trace_tol = 1e-10) const;
};

bool same_basis(const Basis& a, const Basis& b);

DensityMatrix pure_state(const Eigen::VectorXcd& psi, const Basis& basis);
DensityMatrix coherent_state(const SystemSpec& spec, double x0, double p0, double hbar);
DensityMatrix gaussian_wavepacket(const SystemSpec& spec, double x0, double p0, double sigma,
                                  double hbar);
DensityMatrix cat_state(const SystemSpec& spec, double separation, double sigma, double hbar);

// Tr(rho A) for sparse A
cplx expectation(const Mat& rho, const SpMat& A);

struct Observables {
  double x_mean, p_mean, x_var, p_var, purity, trace_err, herm_err, energy;
};
Observables observables(const DensityMatrix& rho, const Operators& ops);

struct HeisenbergCoeffs {
  double c_x = 1.0;
  double c_p = 0.0;
};

// x_H(-tau) = c_x X + c_p P under H0 (V_EM excluded); free and harmonic only.
HeisenbergCoeffs heisenberg_x_coeffs(const SystemSpec& spec, double tau);
// Numerical x_H(-tau) for any time-independent H0.
Mat heisenberg_x_operator(const Operators& ops, double tau, double hbar);
// d^n/dtau^n x_H(-tau) at tau = 0, i.e. (-i/hbar)^n ad_{H0}^n X
Mat heisenberg_x_derivative(const Operators& ops, int order, double hbar);

}  // namespace vqs
