// system.cpp — operator construction, initial states, observables, Heisenberg coefficients
#include "vqs/system.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace vqs {

namespace {

using Trip = Eigen::Triplet<cplx>;

SpMat from_triplets(int n, const std::vector<Trip>& t) {
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SpMat dense_to_sparse(const Mat& d) {
  std::vector<Trip> t;
  const double scale = d.cwiseAbs().maxCoeff();
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      if (std::abs(d(i, j)) > 1e-300 && std::abs(d(i, j)) > 1e-17 * scale)
        t.emplace_back(i, j, d(i, j));
  return from_triplets(static_cast<int>(d.rows()), t);
}

// f(X) for Hermitian X via its eigen-decomposition
Mat function_of(const SpMat& X, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Mat> es{Mat(X)};
  Eigen::VectorXcd d(es.eigenvalues().size());
  for (int i = 0; i < d.size(); ++i) d(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

SystemSpec SystemSpec::free(double mass, Basis basis) {
  SystemSpec s;
  s.kind = PotentialKind::Free;
  s.mass = mass;
  s.basis = basis;
  return s;
}

SystemSpec SystemSpec::harmonic(double omega0, double mass, Basis basis) {
  SystemSpec s;
  s.kind = PotentialKind::Harmonic;
  s.omega0 = omega0;
  s.mass = mass;
  s.basis = basis;
  return s;
}

SystemSpec SystemSpec::custom_potential(CustomPotential v, double mass, Basis basis) {
  SystemSpec s;
  s.kind = PotentialKind::Custom;
  s.custom = std::move(v);
  s.mass = mass;
  s.basis = basis;
  return s;
}

void SystemSpec::validate() const {
  if (!(mass > 0.0)) throw ConfigError("mass must be positive");
  if (kind == PotentialKind::Harmonic && !(omega0 > 0.0))
    throw ConfigError("harmonic potential needs omega0 > 0");
  if (kind == PotentialKind::Custom && !custom.value)
    throw ConfigError("custom potential needs a value function");
  if (const auto* ob = std::get_if<OscillatorBasis>(&basis)) {
    if (ob->dim < 16) throw ConfigError("oscillator basis dimension must be >= 16");
    if (!(ob->frequency > 0.0)) throw ConfigError("oscillator basis frequency must be positive");
  } else {
    const auto& g = std::get<GridBasis>(basis);
    if (g.n_points < 16) throw ConfigError("grid needs at least 16 points");
    if (!(g.x_max > g.x_min)) throw ConfigError("grid needs x_max > x_min");
  }
}

int SystemSpec::dim() const {
  if (const auto* ob = std::get_if<OscillatorBasis>(&basis)) return ob->dim;
  return std::get<GridBasis>(basis).n_points;
}

double SystemSpec::potential(double x, double t) const {
  switch (kind) {
    case PotentialKind::Free: return 0.0;
    case PotentialKind::Harmonic: return 0.5 * mass * omega0 * omega0 * x * x;
    case PotentialKind::Custom: return custom.value(x, t);
  }
  return 0.0;
}

double SystemSpec::force(double x, double t) const {
  switch (kind) {
    case PotentialKind::Free: return 0.0;
    case PotentialKind::Harmonic: return -mass * omega0 * omega0 * x;
    case PotentialKind::Custom: {
      if (custom.force) return custom.force(x, t);
      const double h = 1e-5 * std::max(1.0, std::abs(x));
      return -(custom.value(x + h, t) - custom.value(x - h, t)) / (2.0 * h);
    }
  }
  return 0.0;
}

Operators build_operators(const SystemSpec& spec, const KernelFamily& kernels, double t) {
  spec.validate();
  const double hbar = kernels.ctx().hbar;
  const double m = spec.mass;
  const int n = spec.dim();
  Operators ops;
  ops.basis = spec.basis;
  ops.vem = spec.include_vem ? kernels.vem_coefficient() : 0.0;

  std::vector<Trip> tx, tp, tx2, tp2;
  if (const auto* ob = std::get_if<OscillatorBasis>(&spec.basis)) {
    const double W = ob->frequency;
    const double lx = std::sqrt(hbar / (2.0 * m * W));
    const double lp = std::sqrt(hbar * m * W / 2.0);
    const cplx I(0.0, 1.0);
    for (int k = 0; k + 1 < n; ++k) {
      const double s = std::sqrt(k + 1.0);  // <k|a|k+1>
      tx.emplace_back(k, k + 1, lx * s);
      tx.emplace_back(k + 1, k, lx * s);
      tp.emplace_back(k, k + 1, -I * lp * s);
      tp.emplace_back(k + 1, k, I * lp * s);
    }
    // exact ladder elements of x^2 and p^2 (not products of truncated matrices)
    for (int k = 0; k < n; ++k) {
      tx2.emplace_back(k, k, lx * lx * (2.0 * k + 1.0));
      tp2.emplace_back(k, k, lp * lp * (2.0 * k + 1.0));
      if (k + 2 < n) {
        const double s = std::sqrt((k + 1.0) * (k + 2.0));
        tx2.emplace_back(k, k + 2, lx * lx * s);
        tx2.emplace_back(k + 2, k, lx * lx * s);
        tp2.emplace_back(k, k + 2, -lp * lp * s);
        tp2.emplace_back(k + 2, k, -lp * lp * s);
      }
    }
  } else {
    const auto& g = std::get<GridBasis>(spec.basis);
    const double dx = g.spacing();
    const cplx hop(0.0, -hbar / (2.0 * dx));
    const double lap = hbar * hbar / (dx * dx);
    for (int i = 0; i < n; ++i) {
      const double x = g.point(i);
      tx.emplace_back(i, i, x);
      tx2.emplace_back(i, i, x * x);
      tp2.emplace_back(i, i, 2.0 * lap);
      if (i + 1 < n) {
        tp.emplace_back(i, i + 1, hop);
        tp.emplace_back(i + 1, i, -hop);
        tp2.emplace_back(i, i + 1, -lap);
        tp2.emplace_back(i + 1, i, -lap);
      }
    }
  }
  ops.X = from_triplets(n, tx);
  ops.P = from_triplets(n, tp);
  ops.X2 = from_triplets(n, tx2);
  ops.P2 = from_triplets(n, tp2);

  SpMat V(n, n);
  switch (spec.kind) {
    case PotentialKind::Free: break;
    case PotentialKind::Harmonic: V = (0.5 * m * spec.omega0 * spec.omega0) * ops.X2; break;
    case PotentialKind::Custom:
      if (spec.is_grid()) {
        std::vector<Trip> tv;
        const auto& g = std::get<GridBasis>(spec.basis);
        for (int i = 0; i < n; ++i) tv.emplace_back(i, i, spec.custom.value(g.point(i), t));
        V = from_triplets(n, tv);
      } else {
        V = dense_to_sparse(function_of(ops.X, [&](double x) { return spec.custom.value(x, t); }));
      }
      break;
  }
  ops.H0 = ((1.0 / (2.0 * m)) * ops.P2 + V).pruned();
  // V_EM built from the truncated product X*X so it cancels [X,{X,rho}] exactly
  const SpMat XX = (ops.X * ops.X).pruned();
  ops.H = (ops.H0 + ops.vem * XX).pruned();
  return ops;
}

bool same_basis(const Basis& a, const Basis& b) {
  if (a.index() != b.index()) return false;
  if (const auto* oa = std::get_if<OscillatorBasis>(&a)) {
    const auto& ob = std::get<OscillatorBasis>(b);
    return oa->dim == ob.dim && oa->frequency == ob.frequency;
  }
  const auto& ga = std::get<GridBasis>(a);
  const auto& gb = std::get<GridBasis>(b);
  return ga.n_points == gb.n_points && ga.x_min == gb.x_min && ga.x_max == gb.x_max;
}

double DensityMatrix::trace_error() const { return std::abs(rho.trace() - cplx(1.0, 0.0)); }

double DensityMatrix::hermiticity_residual() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Mat h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const { return (rho.cwiseAbs2()).sum(); }

void DensityMatrix::validate(double herm_tol, double trace_tol) const {
  std::ostringstream os;
  if (hermiticity_residual() > herm_tol) os << "density matrix not Hermitian (residual "
                                            << hermiticity_residual() << ")";
  else if (trace_error() > trace_tol) os << "density matrix trace off by " << trace_error();
  else if (rho.diagonal().real().minCoeff() < -1e-10)
    os << "negative population " << rho.diagonal().real().minCoeff();
  else return;
  throw InvariantError(os.str());
}

DensityMatrix pure_state(const Eigen::VectorXcd& psi, const Basis& basis) {
  const Eigen::VectorXcd v = psi / psi.norm();
  return DensityMatrix{v * v.adjoint(), basis};
}

DensityMatrix coherent_state(const SystemSpec& spec, double x0, double p0, double hbar) {
  const auto* ob = std::get_if<OscillatorBasis>(&spec.basis);
  if (!ob) throw ConfigError("coherent state needs an oscillator basis");
  const double W = ob->frequency;
  const double m = spec.mass;
  const cplx a(std::sqrt(m * W / (2.0 * hbar)) * x0, p0 / std::sqrt(2.0 * m * W * hbar));
  Eigen::VectorXcd psi(ob->dim);
  psi(0) = std::exp(-0.5 * std::norm(a));
  for (int k = 1; k < ob->dim; ++k) psi(k) = psi(k - 1) * a / std::sqrt(double(k));
  // weight missing from the truncated expansion, plus the tail at the top level
  if (1.0 - psi.squaredNorm() > 1e-12 || std::norm(psi(ob->dim - 1)) > 1e-12)
    throw ConfigError("coherent state is not contained in the truncated basis");
  return pure_state(psi, spec.basis);
}

namespace {

Eigen::VectorXcd sampled_gaussian(const GridBasis& g, double x0, double p0, double sigma,
                                  double hbar) {
  Eigen::VectorXcd psi(g.n_points);
  for (int i = 0; i < g.n_points; ++i) {
    const double x = g.point(i);
    const double u = (x - x0) / sigma;
    psi(i) = std::exp(cplx(-0.25 * u * u, p0 * x / hbar));
  }
  return psi;
}

const GridBasis& grid_for_wavepacket(const SystemSpec& spec, double sigma) {
  const auto* g = std::get_if<GridBasis>(&spec.basis);
  if (!g) throw ConfigError("wavepacket states need a position grid");
  if (!(sigma > 0.0)) throw ConfigError("wavepacket width must be positive");
  if (g->spacing() > sigma / 8.0)
    throw ConfigError("grid must resolve the wavepacket with at least 8 points per sigma");
  return *g;
}

void check_contained(const Eigen::VectorXcd& psi) {
  const double n2 = psi.squaredNorm();
  const double edge = std::max(std::norm(psi(0)), std::norm(psi(psi.size() - 1)));
  if (edge > 1e-12 * n2) throw ConfigError("wavepacket is not contained in the grid");
}

}  // namespace

DensityMatrix gaussian_wavepacket(const SystemSpec& spec, double x0, double p0, double sigma,
                                  double hbar) {
  const auto& g = grid_for_wavepacket(spec, sigma);
  const Eigen::VectorXcd psi = sampled_gaussian(g, x0, p0, sigma, hbar);
  check_contained(psi);
  return pure_state(psi, spec.basis);
}

DensityMatrix cat_state(const SystemSpec& spec, double separation, double sigma, double hbar) {
  const auto& g = grid_for_wavepacket(spec, sigma);
  const Eigen::VectorXcd psi = sampled_gaussian(g, 0.5 * separation, 0.0, sigma, hbar) +
                               sampled_gaussian(g, -0.5 * separation, 0.0, sigma, hbar);
  check_contained(psi);
  return pure_state(psi, spec.basis);
}

cplx expectation(const Mat& rho, const SpMat& A) {
  cplx s = 0.0;
  for (int i = 0; i < A.outerSize(); ++i)
    for (SpMat::InnerIterator it(A, i); it; ++it) s += it.value() * rho(it.col(), it.row());
  return s;
}

Observables observables(const DensityMatrix& d, const Operators& ops) {
  if (d.dim() != ops.dim()) throw std::invalid_argument("state and operators differ in size");
  Observables o{};
  const double tr = d.rho.trace().real();
  o.x_mean = expectation(d.rho, ops.X).real() / tr;
  o.p_mean = expectation(d.rho, ops.P).real() / tr;
  o.x_var = expectation(d.rho, ops.X2).real() / tr - o.x_mean * o.x_mean;
  o.p_var = expectation(d.rho, ops.P2).real() / tr - o.p_mean * o.p_mean;
  o.purity = d.purity();
  o.trace_err = d.trace_error();
  o.herm_err = d.hermiticity_residual();
  o.energy = expectation(d.rho, ops.H0).real() / tr;
  return o;
}

HeisenbergCoeffs heisenberg_x_coeffs(const SystemSpec& spec, double tau) {
  switch (spec.kind) {
    case PotentialKind::Free: return {1.0, -tau / spec.mass};
    case PotentialKind::Harmonic: {
      const double w = spec.omega0;
      return {std::cos(w * tau), -std::sin(w * tau) / (spec.mass * w)};
    }
    case PotentialKind::Custom: break;
  }
  throw std::invalid_argument("closed-form Heisenberg coefficients exist only for free/harmonic");
}

Mat heisenberg_x_operator(const Operators& ops, double tau, double hbar) {
  Eigen::SelfAdjointEigenSolver<Mat> es{Mat(ops.H0)};
  const Mat& V = es.eigenvectors();
  const Eigen::VectorXd& E = es.eigenvalues();
  Mat xe = V.adjoint() * Mat(ops.X) * V;
  for (int k = 0; k < xe.rows(); ++k)
    for (int l = 0; l < xe.cols(); ++l)
      xe(k, l) *= std::exp(cplx(0.0, -(E(k) - E(l)) * tau / hbar));
  return V * xe * V.adjoint();
}

Mat heisenberg_x_derivative(const Operators& ops, int order, double hbar) {
  const Mat H(ops.H0);
  Mat A(ops.X);
  const cplx f(0.0, -1.0 / hbar);
  for (int k = 0; k < order; ++k) A = f * (H * A - A * H);
  return A;
}

}  // namespace vqs
