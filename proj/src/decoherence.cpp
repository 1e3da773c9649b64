// decoherence.cpp — switching profiles and the integration-by-parts reduction of N2~
#include "vqs/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "vqs/quadrature.hpp"

namespace vqs {

using std::numbers::pi;

namespace {

// ramp shapes on s in [0,1]: g, g', g'', and G = int_0^s g
struct Shape {
  double g, d1, d2, G;
};

Shape shape(ProfileKind kind, double s) {
  if (kind == ProfileKind::LinearRamp) return {s, 1.0, 0.0, 0.5 * s * s};
  return {0.5 * (1.0 - std::cos(pi * s)), 0.5 * pi * std::sin(pi * s),
          0.5 * pi * pi * std::cos(pi * s), 0.5 * s - std::sin(pi * s) / (2.0 * pi)};
}

void check_level(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

SwitchingProfile SwitchingProfile::constant(double T, double level) {
  if (!(T > 0.0)) throw ConfigError("profile duration must be positive");
  check_level(level, "constant level");
  SwitchingProfile p;
  p.kind_ = ProfileKind::Constant;
  p.T_ = T;
  p.level_ = level;
  p.f0_ = p.fT_ = level;
  return p;
}

static void check_ramp(double ramp, double T, double f0, double fT) {
  if (!(T > 0.0)) throw ConfigError("profile duration must be positive");
  if (!(ramp > 0.0)) throw ConfigError("ramp duration must be positive");
  if (2.0 * ramp > T) throw ConfigError("total duration must cover both ramps");
  check_level(f0, "f_start");
  check_level(fT, "f_end");
}

SwitchingProfile SwitchingProfile::linear_ramp(double ramp, double T, double f_start,
                                               double f_end) {
  check_ramp(ramp, T, f_start, f_end);
  SwitchingProfile p;
  p.kind_ = ProfileKind::LinearRamp;
  p.T_ = T;
  p.ramp_ = ramp;
  p.f0_ = f_start;
  p.fT_ = f_end;
  if (f_start != 1.0) p.kinks_.push_back({ramp, -(1.0 - f_start) / ramp});
  if (f_end != 1.0) p.kinks_.push_back({T - ramp, (f_end - 1.0) / ramp});
  return p;
}

SwitchingProfile SwitchingProfile::raised_cosine(double ramp, double T, double f_start,
                                                 double f_end) {
  check_ramp(ramp, T, f_start, f_end);
  SwitchingProfile p;
  p.kind_ = ProfileKind::RaisedCosineRamp;
  p.T_ = T;
  p.ramp_ = ramp;
  p.f0_ = f_start;
  p.fT_ = f_end;
  return p;
}

SwitchingProfile SwitchingProfile::custom(double T, std::function<double(double)> f,
                                          std::function<double(double)> df,
                                          std::function<double(double)> d2f,
                                          std::vector<double> breakpoints) {
  if (!(T > 0.0)) throw ConfigError("profile duration must be positive");
  if (!f || !df || !d2f)
    throw ConfigError("custom switching profile must supply f, f' and f''");
  SwitchingProfile p;
  p.kind_ = ProfileKind::Custom;
  p.T_ = T;
  p.f_ = std::move(f);
  p.df_ = std::move(df);
  p.d2f_ = std::move(d2f);
  p.custom_breaks_ = std::move(breakpoints);
  p.f0_ = p.f_(0.0);
  p.fT_ = p.f_(T);
  return p;
}

double SwitchingProfile::value(double t) const {
  switch (kind_) {
    case ProfileKind::Constant: return level_;
    case ProfileKind::Custom: return f_(t);
    default: break;
  }
  if (f0_ != 1.0 && t < ramp_) return f0_ + (1.0 - f0_) * shape(kind_, t / ramp_).g;
  if (fT_ != 1.0 && t >= T_ - ramp_)
    return 1.0 + (fT_ - 1.0) * shape(kind_, (t - (T_ - ramp_)) / ramp_).g;
  return 1.0;
}

double SwitchingProfile::d1(double t) const {
  switch (kind_) {
    case ProfileKind::Constant: return 0.0;
    case ProfileKind::Custom: return df_(t);
    default: break;
  }
  if (f0_ != 1.0 && t < ramp_) return (1.0 - f0_) * shape(kind_, t / ramp_).d1 / ramp_;
  if (fT_ != 1.0 && t >= T_ - ramp_)
    return (fT_ - 1.0) * shape(kind_, (t - (T_ - ramp_)) / ramp_).d1 / ramp_;
  return 0.0;
}

double SwitchingProfile::d2(double t) const {
  switch (kind_) {
    case ProfileKind::Constant: return 0.0;
    case ProfileKind::Custom: return d2f_(t);
    default: break;
  }
  const double r2 = ramp_ * ramp_;
  if (f0_ != 1.0 && t < ramp_) return (1.0 - f0_) * shape(kind_, t / ramp_).d2 / r2;
  if (fT_ != 1.0 && t >= T_ - ramp_)
    return (fT_ - 1.0) * shape(kind_, (t - (T_ - ramp_)) / ramp_).d2 / r2;
  return 0.0;
}

std::vector<double> SwitchingProfile::breakpoints() const {
  std::vector<double> b{0.0, T_};
  if (kind_ == ProfileKind::LinearRamp || kind_ == ProfileKind::RaisedCosineRamp) {
    if (f0_ != 1.0) b.push_back(ramp_);
    if (fT_ != 1.0) b.push_back(T_ - ramp_);
  }
  for (double x : custom_breaks_)
    if (x > 0.0 && x < T_) b.push_back(x);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double SwitchingProfile::integral(double t) const {
  t = std::clamp(t, 0.0, T_);
  switch (kind_) {
    case ProfileKind::Constant: return level_ * t;
    case ProfileKind::Custom: {
      std::vector<double> pts{0.0};
      for (double b : breakpoints())
        if (b > 0.0 && b < t) pts.push_back(b);
      pts.push_back(t);
      return quad::piecewise(f_, pts).value;
    }
    default: break;
  }
  double sum = 0.0;
  double start = 0.0;
  if (f0_ != 1.0) {
    const double s = std::min(t, ramp_) / ramp_;
    sum += ramp_ * (f0_ * s + (1.0 - f0_) * shape(kind_, s).G);
    start = ramp_;
  }
  const double end_ramp = (fT_ != 1.0) ? T_ - ramp_ : T_;
  if (t > start) sum += std::min(t, end_ramp) - start;
  if (fT_ != 1.0 && t > end_ramp) {
    const double s = (t - end_ramp) / ramp_;
    sum += ramp_ * (s + (fT_ - 1.0) * shape(kind_, s).G);
  }
  return sum;
}

SwitchingProfile SwitchingProfile::mirrored() const {
  if (kind_ == ProfileKind::Constant) return *this;
  if (kind_ == ProfileKind::LinearRamp) return linear_ramp(ramp_, T_, fT_, f0_);
  if (kind_ == ProfileKind::RaisedCosineRamp) return raised_cosine(ramp_, T_, fT_, f0_);
  const double T = T_;
  auto f = f_;
  auto df = df_;
  auto d2f = d2f_;
  std::vector<double> br;
  for (double b : custom_breaks_) br.push_back(T - b);
  return custom(
      T, [f, T](double t) { return f(T - t); }, [df, T](double t) { return -df(T - t); },
      [d2f, T](double t) { return d2f(T - t); }, br);
}

double coherence_length(double t, const KernelFamily& k) {
  if (!(t > 0.0)) throw std::domain_error("coherence_length requires t > 0");
  return std::sqrt(k.ctx().hbar / k.n2(t));
}

double decoherence_factor(double dx, double t, const KernelFamily& k) {
  if (t < 0.0) throw std::domain_error("decoherence_factor requires t >= 0");
  return std::exp(-dx * dx * k.n2(t) / k.ctx().hbar);
}

double switched_n2(const SwitchingProfile& f, const KernelFamily& k) {
  const double T = f.total();
  const double eps = k.epsilon();
  if (T < 100.0 * eps) throw std::domain_error("switched_n2 needs T >= 100 eps");
  const double N2inf = k.n2_plateau();
  const double f0 = f.value(0.0);
  const double df0 = f.d1(0.0);
  const std::vector<double> bps = f.breakpoints();
  const bool smooth_part = f.kind() == ProfileKind::RaisedCosineRamp ||
                           f.kind() == ProfileKind::Custom;
  auto R = [&](double tau) { return k.n2_minus_plateau(tau); };
  // nested rules: the outer tolerance must sit above the inner noise
  const quad::Options in_opt{1e-10, 18}, out_opt{1e-9, 18};

  // int_0^{t1} R(tau) f''(t1 - tau) dtau, split where f'' jumps
  auto inner = [&](double t1) {
    if (!smooth_part || t1 <= 0.0) return 0.0;
    std::vector<double> cuts{0.0, t1};
    for (double b : bps)
      if (t1 - b > 0.0 && t1 - b < t1) cuts.push_back(t1 - b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      // evaluate f'' strictly inside each piece
      auto g = [&](double tau) {
        const double m = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t1);
        const double u = std::clamp(t1 - tau, t1 - hi + m, t1 - lo - m);
        return R(tau) * f.d2(u);
      };
      s += quad::peaked(g, lo, hi, eps, in_opt).value;
    }
    return s;
  };

  auto outer = [&](double t1) {
    double v = f0 * k.n1(t1) + df0 * R(t1) + inner(t1);
    for (const auto& kink : f.kinks())
      if (t1 > kink.t) v += kink.jump * R(t1 - kink.t);
    return f.value(t1) * v;
  };

  std::vector<double> cuts = bps;
  for (const auto& kink : f.kinks()) cuts.push_back(kink.t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.5 * N2inf * (f.value(T) * f.value(T) - f0 * f0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    total += quad::peaked([&](double u) { return outer(a + u); }, 0.0, b - a, eps, out_opt).value;
  }
  return total;
}

double false_dec_limit(const SwitchingProfile& f, const KernelFamily& k) {
  const double a = f.value(0.0), b = f.value(f.total());
  return 0.5 * k.n2_plateau() * (a * a + b * b);
}

double collisional_exponent(double lambda, double dx, const SwitchingProfile& f, double t) {
  if (t > f.total() * (1.0 + 1e-12)) throw std::domain_error("collisional_exponent needs t <= T");
  return lambda * dx * dx * f.integral(t);
}

DecoherenceReport decoherence_report(const SwitchingProfile& f, const KernelFamily& k) {
  DecoherenceReport r;
  r.n2_unswitched = k.n2(f.total());
  r.n2_switched = switched_n2(f, k);
  r.restoration_ratio = r.n2_switched / r.n2_unswitched;
  r.coherence_length_final = r.n2_switched > 0.0
                                 ? std::sqrt(k.ctx().hbar / r.n2_switched)
                                 : std::numeric_limits<double>::infinity();
  r.analytic_limit = false_dec_limit(f, k);
  return r;
}

DensityMatrix apply_decoherence(const DensityMatrix& rho, double t, const KernelFamily& k) {
  const auto* g = std::get_if<GridBasis>(&rho.basis);
  if (!g) throw std::invalid_argument("apply_decoherence needs a position-grid state");
  if (rho.dim() != g->n_points) throw std::invalid_argument("state size does not match grid");
  const double c = k.n2(t) / k.ctx().hbar;
  DensityMatrix out = rho;
  for (int i = 0; i < rho.dim(); ++i)
    for (int j = 0; j < rho.dim(); ++j) {
      if (i == j) continue;
      const double d = g->point(i) - g->point(j);
      out.rho(i, j) *= std::exp(-d * d * c);
    }
  return out;
}

}  // namespace vqs
