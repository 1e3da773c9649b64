// quadrature.cpp — thin wrappers over Boost.Math rules with stall detection
#include "vqs/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

namespace vqs::quad {

namespace {

void check(const Result& r, double a, double b, const Options& opt) {
  const double allowed = std::max(100.0 * opt.rel_tol * r.l1, 1e-300);
  if (!std::isfinite(r.value) || r.error > allowed) {
    std::ostringstream os;
    os << "quadrature refinement stalled on [" << a << ", " << b << "]: estimate " << r.value
       << ", error " << r.error << ", L1 " << r.l1;
    throw QuadratureError(os.str());
  }
}

}  // namespace

Result adaptive(const Integrand& f, double a, double b, const Options& opt) {
  Result r;
  if (a == b) return r;
  // tolerance floored at kRelTolFloor
  Options o = opt;
  o.rel_tol = std::max(opt.rel_tol, kRelTolFloor);
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, o.max_depth, o.rel_tol, &r.error, &r.l1);
  check(r, a, b, o);
  return r;
}

Result piecewise(const Integrand& f, std::vector<double> points, const Options& opt) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  Result total;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Result r = adaptive(f, points[i], points[i + 1], opt);
    total.value += r.value;
    total.error += r.error;
    total.l1 += r.l1;
  }
  return total;
}

Result peaked(const Integrand& f, double a, double b, double eps, const Options& opt) {
  Result total;
  if (b <= a) return total;
  const double inner = 20.0 * eps;
  if (a < inner) {
    const double top = std::min(b, inner);
    auto g = [&](double u) {
      const double t = std::tan(u);
      return f(eps * t) * eps * (1.0 + t * t);
    };
    total = adaptive(g, std::atan(a / eps), std::atan(top / eps), opt);
    a = top;
  }
  // outer panels: tolerance relative to the L1 accumulated so far
  while (a < b) {
    const double top = std::min(b, 2.0 * a);
    Options o = opt;
    if (total.l1 > 0.0) {
      double est = 0.0, l1 = 0.0;
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, top, 0, 0.0, &est, &l1);
      if (l1 > 0.0) o.rel_tol = std::clamp(opt.rel_tol * total.l1 / l1, opt.rel_tol, 1e-3);
    }
    const Result r = adaptive(f, a, top, o);
    total.value += r.value;
    total.error += r.error;
    total.l1 += r.l1;
    a = top;
  }
  return total;
}

Result to_infinity(const Integrand& f, double a, const Options& opt) {
  Result r;
  boost::math::quadrature::exp_sinh<double> rule(opt.max_depth);
  auto g = [&](double s) { return f(a + s); };
  r.value = rule.integrate(g, opt.rel_tol, &r.error, &r.l1);
  check(r, a, INFINITY, opt);
  return r;
}

const std::vector<double>& gl_nodes() {
  static const std::vector<double> nodes = [] {
    using rule = boost::math::quadrature::gauss<double, 20>;
    std::vector<double> out;
    for (double x : rule::abscissa()) {
      if (x != 0.0) out.push_back(-x);
      out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
  }();
  return nodes;
}

const std::vector<double>& gl_weights() {
  static const std::vector<double> weights = [] {
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != 0.0) pairs.emplace_back(-x[i], w[i]);
      pairs.emplace_back(x[i], w[i]);
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<double> out;
    for (auto& p : pairs) out.push_back(p.second);
    return out;
  }();
  return weights;
}

}  // namespace vqs::quad
