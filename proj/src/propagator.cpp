// propagator.cpp — RK4 over the master equation with coefficients refreshed at each stage
#include "vqs/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vqs {

namespace {

const cplx I(0.0, 1.0);

// Every term is of the form Z + Z^dagger, so the update stays Hermitian to the bit.
Mat assemble(const Mat& rho, const Operators& ops, const Mat& A, double hbar, bool with_h) {
  const Mat M = A - A.adjoint();
  Mat Z = (-1.0 / hbar) * (ops.X * M);
  if (with_h) Z.noalias() += (-I / hbar) * (ops.H * rho);
  return Z + Z.adjoint();
}

}  // namespace

Mat meq_rhs(const Mat& rho, const Operators& ops, const MeqCoefficients& c, double hbar) {
  if (rho.rows() != ops.dim() || rho.cols() != ops.dim())
    throw std::invalid_argument("density matrix and operators differ in size");
  const cplx ax(c.cN_x, -0.5 * c.cD_x);
  const cplx ap(c.cN_p, -0.5 * c.cD_p);
  Mat A = ax * (ops.X * rho);
  A.noalias() += ap * (ops.P * rho);
  return assemble(rho, ops, A, hbar, true);
}

Mat meq_rhs(const DensityMatrix& rho, const Operators& ops, const MeqCoefficients& c,
            double hbar) {
  if (!same_basis(rho.basis, ops.basis))
    throw std::invalid_argument("density matrix basis does not match the operators");
  return meq_rhs(rho.rho, ops, c, hbar);
}

Mat meq_rhs_dense(const Mat& rho, const Operators& ops, const Mat& KN, const Mat& KD,
                  double hbar) {
  const Mat A = (KN - 0.5 * I * KD) * rho;
  return assemble(rho, ops, A, hbar, true);
}

Mat decoherence_rhs(const Mat& rho, const Operators& ops, double n1, double hbar) {
  const Mat A = n1 * (ops.X * rho);
  return assemble(rho, ops, A, hbar, false);
}

namespace {

struct Stage {
  MeqCoefficients c;
  Mat KN, KD;
  double n1 = 0.0;
};

class Rhs {
 public:
  Rhs(const SystemSpec& spec, const Operators& ops, const KernelFamily& k, bool markov,
      bool dec_only)
      : ops_(ops), k_(k), mem_(spec, ops, k, markov), dec_only_(dec_only) {}

  Stage at(double t) {
    Stage s;
    if (dec_only_) {
      s.n1 = k_.n1(t);
      return s;
    }
    mem_.advance(t);
    if (mem_.linear()) {
      s.c = mem_.coefficients();
    } else {
      s.KN = mem_.KN();
      s.KD = mem_.KD();
    }
    return s;
  }

  Mat operator()(const Mat& rho, const Stage& s) const {
    const double hbar = k_.ctx().hbar;
    if (dec_only_) return decoherence_rhs(rho, ops_, s.n1, hbar);
    if (mem_.linear()) return meq_rhs(rho, ops_, s.c, hbar);
    return meq_rhs_dense(rho, ops_, s.KN, s.KD, hbar);
  }

 private:
  const Operators& ops_;
  const KernelFamily& k_;
  MemoryKernel mem_;
  bool dec_only_;
};

void record(Trajectory& tr, double t, const DensityMatrix& d, const Operators& ops,
            bool min_eig) {
  const Observables o = observables(d, ops);
  tr.t.push_back(t);
  tr.x_mean.push_back(o.x_mean);
  tr.p_mean.push_back(o.p_mean);
  tr.x_var.push_back(o.x_var);
  tr.p_var.push_back(o.p_var);
  tr.purity.push_back(o.purity);
  tr.trace_err.push_back(o.trace_err);
  tr.herm_err.push_back(o.herm_err);
  tr.energy.push_back(o.energy);
  const double me = min_eig ? d.min_eigenvalue() : std::nan("");
  tr.min_eig.push_back(me);
  if (min_eig) tr.min_eig_seen = std::min(tr.min_eig_seen, me);
  tr.max_trace_err = std::max(tr.max_trace_err, o.trace_err);
  tr.max_herm_err = std::max(tr.max_herm_err, o.herm_err);
}

}  // namespace

Trajectory propagate(const DensityMatrix& rho0, const SystemSpec& spec, const KernelFamily& k,
                     const PropagationOptions& opt) {
  spec.validate();
  if (!(opt.dt > 0.0)) throw ConfigError("dt must be positive");
  if (opt.warmup_steps > 0 && !(opt.warmup_dt > 0.0))
    throw ConfigError("warmup_dt must be positive");
  if (opt.record_every == 0) throw ConfigError("record_every must be >= 1");
  if (!same_basis(rho0.basis, spec.basis))
    throw std::invalid_argument("initial state basis does not match the system");
  rho0.validate();

  const Operators ops = build_operators(spec, k);
  Rhs rhs(spec, ops, k, opt.markov, opt.decoherence_only);

  Trajectory tr;
  DensityMatrix d = rho0;
  double t = 0.0;
  record(tr, t, d, ops, opt.record_min_eig);

  Stage s0 = rhs.at(0.0);
  const std::size_t total = opt.warmup_steps + opt.n_steps;
  for (std::size_t n = 0; n < total; ++n) {
    const double h = n < opt.warmup_steps ? opt.warmup_dt : opt.dt;
    const Stage sm = rhs.at(t + 0.5 * h);
    const Stage s1 = rhs.at(t + h);
    const Mat& r = d.rho;
    const Mat k1 = rhs(r, s0);
    const Mat k2 = rhs(r + (0.5 * h) * k1, sm);
    const Mat k3 = rhs(r + (0.5 * h) * k2, sm);
    const Mat k4 = rhs(r + h * k3, s1);
    const cplx tr_before = r.trace();
    d.rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = (n < opt.warmup_steps) ? (n + 1) * opt.warmup_dt
                               : opt.warmup_steps * opt.warmup_dt +
                                     (n + 1 - opt.warmup_steps) * opt.dt;
    s0 = s1;

    const double drift = std::abs(d.rho.trace() - tr_before);
    tr.max_step_drift = std::max(tr.max_step_drift, drift);
    const double herm = d.hermiticity_residual();
    if (!(drift <= opt.trace_tol) || !(herm <= opt.herm_tol)) {
      std::ostringstream os;
      os << "invariant breach at step " << n + 1 << " (t = " << t << "): trace drift " << drift
         << ", hermiticity residual " << herm;
      throw InvariantError(os.str());
    }
    if ((n + 1) % opt.record_every == 0 || n + 1 == total)
      record(tr, t, d, ops, opt.record_min_eig);
  }
  tr.final_state = d;
  return tr;
}

double step_halving_deviation(const DensityMatrix& rho0, const SystemSpec& spec,
                              const KernelFamily& k, PropagationOptions opt) {
  opt.record_min_eig = false;
  const Trajectory coarse = propagate(rho0, spec, k, opt);
  opt.dt *= 0.5;
  opt.n_steps *= 2;
  opt.warmup_dt *= 0.5;
  opt.warmup_steps *= 2;
  opt.record_every *= 2;
  const Trajectory fine = propagate(rho0, spec, k, opt);
  const std::size_t n = std::min(coarse.size(), fine.size());
  double dev = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dev = std::max(dev, std::abs(coarse.x_mean[i] - fine.x_mean[i]));
    scale = std::max(scale, std::abs(fine.x_mean[i]));
  }
  return scale > 0.0 ? dev / scale : dev;
}

}  // namespace vqs
