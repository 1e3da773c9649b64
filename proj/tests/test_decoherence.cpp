#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/oracles.hpp"
#include "vqs/decoherence.hpp"

using namespace vqs;
using std::numbers::pi;

namespace {

struct Ctx {
  PhysicalContext ctx;
  CutoffConfig cut;
  KernelFamily k;
  explicit Ctx(double wmax = 1.0, double alpha = codata::alpha)
      : ctx(PhysicalContext::natural(alpha)),
        cut(CutoffConfig::from_omega_max(wmax, ctx)),
        k(ctx, cut) {}
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("coherence length plateau") {
  Ctx c;
  const double want = std::sqrt(3.0 * pi / (2.0 * codata::alpha));
  CHECK(std::abs(want - 25.41) < 0.01);
  CHECK(coherence_length(1e6, c.k) * c.cut.k_max == doctest::Approx(want).epsilon(1e-11));
  // t = eps gives the plateau exactly
  CHECK(coherence_length(1.0, c.k) == doctest::Approx(want).epsilon(1e-14));

  // SI: k_max = 1/lambda_db preset, same dimensionless plateau
  const auto si = PhysicalContext::si_electron();
  const auto cut = CutoffConfig::from_omega_max(3e18, si);
  const KernelFamily ks(si, cut);
  CHECK(coherence_length(1e6 * cut.epsilon, ks) * cut.k_max == doctest::Approx(want).epsilon(1e-9));

  // small t: l_x ~ eps sqrt(hbar/(3 N2inf)) / t
  const double lim = std::sqrt(1.0 / (3.0 * c.k.n2_plateau()));
  CHECK(coherence_length(1e-4, c.k) * 1e-4 == doctest::Approx(lim).epsilon(1e-7));
  CHECK_THROWS_AS(coherence_length(0.0, c.k), std::domain_error);
  CHECK_THROWS_AS(coherence_length(-1.0, c.k), std::domain_error);
}

TEST_CASE("decoherence factor") {
  Ctx c;
  CHECK(decoherence_factor(0.0, 5.0, c.k) == 1.0);
  CHECK(decoherence_factor(3.0, 0.0, c.k) == 1.0);
  for (double t : {0.3, 1.0, 7.0, 500.0})
    CHECK(std::abs(decoherence_factor(coherence_length(t, c.k), t, c.k) - std::exp(-1.0)) < 1e-12);
  CHECK_THROWS_AS(decoherence_factor(1.0, -1.0, c.k), std::domain_error);

  // nonincreasing up to the N2 peak at sqrt(3) eps, then relaxes back
  const double dx = 30.0, tp = std::sqrt(3.0);
  double prev = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = tp * i / 1000.0;
    const double f = decoherence_factor(dx, t, c.k);
    CHECK(f <= prev);
    prev = f;
  }
  const double floor = std::exp(-dx * dx * 9.0 / 8.0 * c.k.n2_plateau());
  CHECK(prev == doctest::Approx(floor).epsilon(1e-12));
  for (int i = 1; i <= 1000; ++i) {
    const double t = tp + 200.0 * i / 1000.0;
    const double f = decoherence_factor(dx, t, c.k);
    CHECK(f >= prev);
    CHECK(f <= std::exp(-dx * dx * c.k.n2_plateau()) * (1.0 + 1e-14));
    prev = f;
  }
}

TEST_CASE("switching profiles") {
  const double T = 400.0, r = 100.0;
  for (auto p : {SwitchingProfile::linear_ramp(r, T, 0.0, 0.0),
                 SwitchingProfile::raised_cosine(r, T, 0.0, 0.0),
                 SwitchingProfile::raised_cosine(r, T, 0.3, 1.0),
                 SwitchingProfile::raised_cosine(r, T, 1.0, 0.5),
                 SwitchingProfile::constant(T, 0.7)}) {
    const bool smooth = p.kind() != ProfileKind::LinearRamp;
    for (int i = 0; i <= 80; ++i) {
      const double t = T * i / 80.0;
      CHECK(p.value(t) >= 0.0);
      CHECK(p.value(t) <= 1.0);
      CHECK(p.mirrored().value(T - t) == doctest::Approx(p.value(t)).epsilon(1e-14));
      double ref = 0.0, a = 0.0;
      for (double b : {r, T - r, T}) {
        const double e = std::min(b, t);
        if (e > a) ref += oracle::gk([&](double s) { return p.value(s); }, a, e, 1e-13);
        a = std::max(a, e);
      }
      CHECK(p.integral(t) == doctest::Approx(ref).epsilon(1e-11));
    }
    // derivatives away from the breakpoints
    for (double t : {13.0, 57.0, 150.0, 333.0, 371.0}) {
      const double h = 1e-3;
      CHECK(std::abs((p.value(t + h) - p.value(t - h)) / (2 * h) - p.d1(t)) < 1e-7);
      if (smooth) CHECK(std::abs((p.d1(t + h) - p.d1(t - h)) / (2 * h) - p.d2(t)) < 1e-7);
    }
    CHECK(p.mirrored().integral(T) == doctest::Approx(p.integral(T)).epsilon(1e-13));
  }
  const auto lin = SwitchingProfile::linear_ramp(r, T, 0.0, 0.0);
  REQUIRE(lin.kinks().size() == 2);
  CHECK(lin.kinks()[0].jump == doctest::Approx(-1.0 / r));
  CHECK(lin.kinks()[1].jump == doctest::Approx(-1.0 / r));

  CHECK_THROWS_AS(SwitchingProfile::raised_cosine(300.0, T, 0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(SwitchingProfile::raised_cosine(r, T, -0.1, 0.0), ConfigError);
  CHECK_THROWS_AS(SwitchingProfile::constant(T, 1.5), ConfigError);
  CHECK_THROWS_AS(SwitchingProfile::custom(T, [](double) { return 1.0; }, [](double) { return 0.0; }, nullptr),
                  ConfigError);
}

TEST_CASE("switched N2 reduces to N2 for constant coupling") {
  Ctx c;
  for (double T : {100.0, 250.0, 1e4}) {
    const auto p = SwitchingProfile::constant(T);
    CHECK(rel(switched_n2(p, c.k), c.k.n2(T)) < 1e-10);
  }
  CHECK_THROWS_AS(switched_n2(SwitchingProfile::constant(50.0), c.k), std::domain_error);
}

TEST_CASE("switched N2 reduction against the direct double integral") {
  Ctx c;
  const double T = 200.0;
  std::vector<SwitchingProfile> ps{
      SwitchingProfile::raised_cosine(60.0, T, 0.0, 0.0),
      SwitchingProfile::raised_cosine(40.0, T, 0.0, 1.0),
      SwitchingProfile::raised_cosine(80.0, T, 0.4, 0.2),
      SwitchingProfile::linear_ramp(50.0, T, 0.0, 0.0),
      SwitchingProfile::linear_ramp(30.0, T, 1.0, 0.3),
      SwitchingProfile::custom(
          T, [&](double t) { return std::sin(pi * t / T) * std::sin(pi * t / T); },
          [&](double t) { return pi / T * std::sin(2 * pi * t / T); },
          [&](double t) { return 2 * pi * pi / (T * T) * std::cos(2 * pi * t / T); })};
  for (const auto& p : ps) {
    const double red = switched_n2(p, c.k);
    const double dir = oracle::switched_n2_direct(p, c.k);
    MESSAGE("reduction " << red << " direct " << dir);
    CHECK(std::abs(red - dir) < 1e-6 * c.k.n2_plateau());
  }
}

TEST_CASE("false decoherence: restoration and endpoint formula") {
  Ctx c;
  const double ramp = 1e3;
  // both ends off: ratio below 1e-2 and shrinking as eps -> 0 at fixed ramp
  double prev = 1.0;
  for (double w : {1.0, 2.0, 4.0}) {
    Ctx cw(w);
    const auto p = SwitchingProfile::raised_cosine(ramp, 3.0 * ramp, 0.0, 0.0);
    const double ratio = switched_n2(p, cw.k) / cw.k.n2(p.total());
    MESSAGE("omega_max " << w << " ratio " << ratio);
    CHECK(std::abs(ratio) <= 1e-2);
    CHECK(std::abs(ratio) < prev);
    prev = std::abs(ratio);
  }
  // longer ramps restore more
  const auto short_ramp = SwitchingProfile::raised_cosine(1e2, 3e3, 0.0, 0.0);
  const auto long_ramp = SwitchingProfile::raised_cosine(1e3, 3e3, 0.0, 0.0);
  CHECK(std::abs(switched_n2(long_ramp, c.k)) < std::abs(switched_n2(short_ramp, c.k)));

  const double N2 = c.k.n2_plateau();
  for (double a : {0.0, 1.0})
    for (double b : {0.0, 1.0}) {
      const auto p = SwitchingProfile::raised_cosine(ramp, 3.0 * ramp, a, b);
      const double lim = false_dec_limit(p, c.k);
      CHECK(lim == doctest::Approx(0.5 * N2 * (a * a + b * b)));
      const double got = switched_n2(p, c.k);
      MESSAGE("f(0)=" << a << " f(T)=" << b << " switched " << got << " limit " << lim);
      CHECK(std::abs(got - lim) <= 1e-2 * (lim > 0.0 ? lim : N2));
    }

  const auto rep = decoherence_report(SwitchingProfile::raised_cosine(ramp, 3 * ramp, 0.0, 0.0), c.k);
  CHECK(rep.n2_switched >= -1e-12);
  CHECK(rep.n2_unswitched == doctest::Approx(c.k.n2(3 * ramp)));
  CHECK(rep.restoration_ratio == doctest::Approx(rep.n2_switched / rep.n2_unswitched));
  CHECK(rep.analytic_limit == 0.0);
  CHECK(rep.coherence_length_final > 10.0 * coherence_length(3 * ramp, c.k));
}

TEST_CASE("collisional exponent") {
  const double L = 0.3, dx = 2.0, T = 1000.0;
  const auto one = SwitchingProfile::constant(T);
  for (double t : {0.0, 10.0, 500.0, T}) CHECK(collisional_exponent(L, dx, one, t) == doctest::Approx(L * dx * dx * t));
  CHECK(collisional_exponent(0.0, dx, one, T) == 0.0);

  // ramps of 0.2 T leave int f = 0.8 T
  const auto p = SwitchingProfile::raised_cosine(0.2 * T, T, 0.0, 0.0);
  CHECK(p.value(T) == 0.0);
  CHECK(collisional_exponent(L, dx, p, T) == doctest::Approx(0.8 * L * dx * dx * T).epsilon(1e-13));
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double e = collisional_exponent(L, dx, p, T * i / 200.0);
    CHECK(e >= prev);
    prev = e;
  }
  const auto q = SwitchingProfile::raised_cosine(0.1 * T, T, 0.5, 0.0);
  CHECK(collisional_exponent(L, dx, q.mirrored(), T) == doctest::Approx(collisional_exponent(L, dx, q, T)));
  CHECK_THROWS_AS(collisional_exponent(L, dx, p, 1.1 * T), std::domain_error);
}

TEST_CASE("apply_decoherence on a cat state") {
  Ctx c;
  const GridBasis g{241, -8.0, 8.0};
  const auto spec = SystemSpec::free(1.0, g);
  const double d = 5.0;
  const auto rho = cat_state(spec, d, 0.6, 1.0);
  for (double t : {0.0, 0.5, 3.0, 100.0}) {
    const auto out = apply_decoherence(rho, t, c.k);
    for (int i = 0; i < rho.dim(); ++i) {
      CHECK(out.rho(i, i) == rho.rho(i, i));
      for (int j = 0; j < rho.dim(); ++j) CHECK(std::abs(out.rho(i, j)) <= std::abs(rho.rho(i, j)));
    }
    CHECK(out.hermiticity_residual() == 0.0);
    CHECK(out.trace_error() == rho.trace_error());
    // peaks at x = +-d/2 sit on grid points
    const int a = static_cast<int>(std::lround((-0.5 * d - g.x_min) / g.spacing()));
    const int b = static_cast<int>(std::lround((0.5 * d - g.x_min) / g.spacing()));
    const double want = std::exp(-d * d * c.k.n2(t));
    CHECK(std::abs(std::abs(out.rho(a, b)) / std::abs(rho.rho(a, b)) - want) < 1e-10);
    if (t == 0.0) CHECK((out.rho - rho.rho).cwiseAbs().maxCoeff() == 0.0);
  }
  const auto osc = SystemSpec::harmonic(1.0, 1.0, OscillatorBasis{8, 1.0});
  CHECK_THROWS_AS(apply_decoherence(coherent_state(osc, 0.0, 0.0, 1.0), 1.0, c.k),
                  std::invalid_argument);
}
