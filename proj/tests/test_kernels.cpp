#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "vqs/kernels.hpp"

using namespace vqs;
using std::numbers::pi;

namespace {

struct Natural {
  PhysicalContext ctx = PhysicalContext::natural();
  CutoffConfig cut = CutoffConfig::from_omega_max(1.0, ctx);
  KernelFamily k{ctx, cut};
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("prefactors agree across constructions") {
  for (auto ctx : {PhysicalContext::natural(), PhysicalContext::si_electron()}) {
    const auto cut = CutoffConfig::from_omega_max(
        ctx.unit_system == UnitSystem::SI ? 1e20 : 1.0, ctx);
    const KernelFamily k(ctx, cut);
    const double alpha = fine_structure(ctx);
    CHECK(k.prefactor_noise() > 0.0);
    CHECK(k.prefactor_n1() > 0.0);
    CHECK(rel(k.prefactor_noise(), 4.0 * alpha * ctx.hbar / (pi * ctx.c * ctx.c)) < 1e-14);
    CHECK(rel(k.prefactor_n1(), k.prefactor_noise() / 3.0) < 1e-14);
    CHECK(rel(k.n2_plateau(), k.prefactor_n1() * cut.omega_max * cut.omega_max / 2.0) < 1e-14);
  }
}

TEST_CASE("smoothed delta") {
  Natural n;
  const double eps = n.cut.epsilon;
  CHECK(n.k.smoothed_delta(0.0) == doctest::Approx(1.0 / (pi * eps)).epsilon(1e-15));
  CHECK(n.k.smoothed_delta_d2(0.0) ==
        doctest::Approx(-2.0 * std::pow(n.cut.omega_max, 3) / pi).epsilon(1e-15));
  CHECK(n.k.smoothed_delta(0.37) == n.k.smoothed_delta(-0.37));
  CHECK(n.k.smoothed_delta(12.0) > 0.0);
  const double total = 2.0 * oracle::half_line([&](double t) { return n.k.smoothed_delta(t); });
  CHECK(std::abs(total - 1.0) < 1e-10);

  // derivatives against central differences
  const double h = 1e-4;
  for (double t : {0.3, 1.7, 5.0}) {
    CHECK(rel((n.k.smoothed_delta(t + h) - n.k.smoothed_delta(t - h)) / (2 * h),
              n.k.smoothed_delta_d1(t)) < 1e-7);
    CHECK(rel((n.k.smoothed_delta_d1(t + h) - n.k.smoothed_delta_d1(t - h)) / (2 * h),
              n.k.smoothed_delta_d2(t)) < 1e-7);
    CHECK(rel((n.k.smoothed_delta_d2(t + h) - n.k.smoothed_delta_d2(t - h)) / (2 * h),
              n.k.smoothed_delta_d3(t)) < 1e-6);
  }
}

TEST_CASE("vacuum correlator") {
  Natural n;
  const double eps = n.cut.epsilon;
  const double scale = 1.0 / (pi * pi);  // hbar/(pi^2 eps0 c^3) in natural units
  const auto c0 = n.k.vacuum_correlator(0.0);
  CHECK(c0.real() == doctest::Approx(scale / std::pow(eps, 4)).epsilon(1e-15));
  CHECK(c0.imag() == 0.0);
  const auto c1 = n.k.vacuum_correlator(eps);
  CHECK(c1.real() == doctest::Approx(-scale / (4.0 * std::pow(eps, 4))).epsilon(1e-15));
  CHECK(std::abs(c1.imag()) < 1e-16 * std::abs(c1.real()));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng);
    const auto a = n.k.vacuum_correlator(-t);
    const auto b = std::conj(n.k.vacuum_correlator(t));
    CHECK(std::abs(a - b) <= 1e-15 * std::abs(b));
  }

  for (double t : {-20.0, -0.5, 0.0, 0.2, 1.0, 3.0, 40.0, 700.0}) {
    const auto oracle = oracle::mode_sum_correlator(t, n.ctx, n.cut);
    const auto closed = n.k.vacuum_correlator(t);
    CHECK(std::abs(oracle - closed) / std::abs(closed) < 1e-8);
  }
}

TEST_CASE("mode-sum oracle frozen values") {
  // 40-digit evaluation of the k integral
  Natural n;
  const double e2 = n.ctx.e_charge * n.ctx.e_charge;
  const struct {
    double tau, noise, diss;
  } ref[] = {{0.3, 0.0030811163427671897434, 0.014375471251022308053},
             {3.0, 0.000026015578016701004804, -0.00017839253497166403294},
             {30.0, 1.1343755369269033310e-8, -3.0419160036757183088e-9}};
  for (const auto& r : ref) {
    const auto c = oracle::mode_sum_correlator(r.tau, n.ctx, n.cut);
    CHECK(rel(e2 * c.real(), r.noise) < 1e-9);
    CHECK(rel(-2.0 * e2 * c.imag(), r.diss) < 1e-9);
    CHECK(rel(n.k.noise(r.tau), r.noise) < 1e-13);
    CHECK(rel(n.k.dissipation(r.tau), r.diss) < 1e-13);
  }
}

TEST_CASE("noise kernel") {
  Natural n;
  const double eps = n.cut.epsilon;
  CHECK(n.k.noise(0.0) == doctest::Approx(n.k.prefactor_noise() / std::pow(eps, 4)));
  CHECK(std::abs(n.k.noise((std::sqrt(2.0) - 1.0) * eps)) < 1e-15 * n.k.noise(0.0));
  CHECK(std::abs(n.k.noise((std::sqrt(2.0) + 1.0) * eps)) < 1e-15 * n.k.noise(0.0));
  const double e2 = n.ctx.e_charge * n.ctx.e_charge;
  CHECK(rel(n.k.noise(10.0 * eps), e2 / n.ctx.hbar * n.k.vacuum_correlator(10.0 * eps).real()) <
        1e-12);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 200.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng);
    REQUIRE(n.k.noise(t) == n.k.noise(-t));
  }
}

TEST_CASE("dissipation kernel") {
  Natural n;
  const double eps = n.cut.epsilon;
  CHECK(n.k.dissipation(0.0) == 0.0);
  CHECK(n.k.dissipation(-1.0) == 0.0);
  CHECK(n.k.dissipation(2.0 * eps) < 0.0);
  CHECK(n.k.dissipation(0.5 * eps) > 0.0);
  const double e2 = n.ctx.e_charge * n.ctx.e_charge;
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double t = eps / 10.0 * std::pow(1000.0, i / 400.0);
    worst = std::max(worst, rel(n.k.dissipation_via_delta(t), n.k.dissipation(t)));
    const double from_c = -2.0 * e2 / n.ctx.hbar * n.k.vacuum_correlator(t).imag();
    CHECK(rel(from_c, n.k.dissipation(t)) < 1e-10);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("N1 and N2 closed forms") {
  Natural n;
  const double eps = n.cut.epsilon;
  CHECK(n.k.n1(0.0) == 0.0);
  CHECK(std::abs(n.k.n1(std::sqrt(3.0) * eps)) < 1e-16);
  CHECK(rel(n.k.n1(5.0 * eps), oracle::n1_by_quadrature(5.0 * eps, n.k)) < 1e-9);
  CHECK(n.k.n2(0.0) == 0.0);
  CHECK(rel(n.k.n2(4.0 * eps), oracle::n2_by_quadrature(4.0 * eps, n.k)) < 1e-9);
  CHECK(rel(n.k.n2(1e6 * eps), n.k.n2_plateau()) < 1e-11);
  CHECK_THROWS_AS(n.k.n1(-1.0), std::domain_error);
  CHECK_THROWS_AS(n.k.n2(-1.0), std::domain_error);

  // int_0^inf N = 0, the premise of the tail form of the N1 oracle
  const double total = oracle::gk([&](double t) { return n.k.noise(t); }, 0.0, 10.0) +
                       oracle::half_line([&](double u) { return n.k.noise(10.0 + u); });
  CHECK(std::abs(total) < 1e-12 * n.k.noise(0.0));

  // N2 overshoots the plateau, peaks where N1 vanishes, then relaxes back
  const double peak = n.k.n2(std::sqrt(3.0) * eps);
  CHECK(rel(peak, 9.0 / 8.0 * n.k.n2_plateau()) < 1e-14);
  for (int i = 1; i <= 2000; ++i) {
    const double t = 0.01 * i;
    const double v = n.k.n2(t);
    REQUIRE(v <= peak * (1.0 + 1e-15));
    if (t > eps) REQUIRE(v > n.k.n2_plateau());
    CHECK(std::abs(n.k.n2_minus_plateau(t) - (v - n.k.n2_plateau())) < 1e-15);
  }
}

TEST_CASE("antiderivative chain by central differences") {
  Natural n;
  const double eps = n.cut.epsilon;
  const double h = eps * 1e-4;
  const double z1 = (std::sqrt(2.0) - 1.0) * eps, z2 = (std::sqrt(2.0) + 1.0) * eps;
  const double z3 = std::sqrt(3.0) * eps;
  for (int i = 1; i <= 300; ++i) {
    const double t = 0.05 * eps * i;
    if (std::abs(t - z1) > 0.05 * eps && std::abs(t - z2) > 0.05 * eps) {
      const double d = (n.k.n1(t + h) - n.k.n1(t - h)) / (2.0 * h);
      CHECK(rel(d, n.k.noise(t)) < 1e-5);
    }
    if (std::abs(t - z3) > 0.05 * eps) {
      const double d = (n.k.n2(t + h) - n.k.n2(t - h)) / (2.0 * h);
      CHECK(rel(d, n.k.n1(t)) < 1e-5);
    }
  }
}

TEST_CASE("dissipation identity values") {
  Natural n;
  const auto& ctx = n.ctx;
  const double w = n.cut.omega_max;
  const double alpha = fine_structure(ctx);
  const double e2 = ctx.e_charge * ctx.e_charge;
  const double f0term = 2.0 * e2 * w * w * w / (3.0 * pi * pi);
  CHECK(rel(n.k.dissipation_weighted_integral({1, 0, 0}), f0term) < 1e-15);
  const double w0 = 0.02, m = 0.5;
  CHECK(rel(n.k.dissipation_weighted_integral({1, -w0 * w0, 0}),
            4.0 * alpha * w / (3.0 * pi) * w0 * w0 + f0term) < 1e-15);
  CHECK(rel(n.k.dissipation_weighted_integral({0, 0, -w0 * w0 / m}),
            2.0 * alpha / 3.0 * w0 * w0 / m) < 1e-15);
  CHECK(rel(n.k.dissipation_weighted_integral({0, 0, 6}), -2.0 * alpha / 3.0 * 6.0) < 1e-15);
}

TEST_CASE("dissipation identity against brute-force quadrature") {
  Natural n;
  const double eps = n.cut.epsilon;
  const double t = 100.0 * eps;
  const double one = n.k.dissipation_weighted_integral_bruteforce([](double) { return 1.0; }, t);
  CHECK(rel(one, n.k.dissipation_weighted_integral({1, 0, 0})) < 1e-4);

  const double w0 = 1e-3 / eps;
  const double c = n.k.dissipation_weighted_integral_bruteforce(
      [&](double s) { return std::cos(w0 * s); }, t);
  CHECK(rel(c, n.k.dissipation_weighted_integral({1, -w0 * w0, 0})) < 1e-3);
  CHECK(rel(c, 0.0061941885230592184512) < 1e-12);  // 40-digit reference

  const double sq = n.k.dissipation_weighted_integral_bruteforce([](double s) { return s * s; }, t);
  CHECK(rel(sq, -0.0061904696598808018036) < 1e-12);

  CHECK_THROWS_AS(n.k.dissipation_weighted_integral_bruteforce([](double) { return 1.0; }, 5.0),
                  std::domain_error);
}

TEST_CASE("identity error shrinks under eps refinement at fixed physical time") {
  const auto ctx = PhysicalContext::natural();
  const double w0 = 1e-2, t = 100.0;
  double prev = 1e300;
  for (double eps : {1.0, 0.5, 0.25}) {
    const auto cut = CutoffConfig::from_omega_max(1.0 / eps, ctx);
    const KernelFamily k(ctx, cut);
    const double brute =
        k.dissipation_weighted_integral_bruteforce([&](double s) { return std::cos(w0 * s); }, t);
    const double err = std::abs(brute - k.dissipation_weighted_integral({1, -w0 * w0, 0}));
    MESSAGE("eps=" << eps << " err=" << err);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("one-sided transforms match quadrature") {
  Natural n;
  const double T = 2000.0;
  for (double w : {0.02, 0.3, 2.0}) {
    auto osc = [&](const std::function<double(double)>& g, bool sine) {
      auto h = [&](double x) { return g(x) * (sine ? std::sin(w * x) : std::cos(w * x)); };
      double s = 0.0, a = 0.0;
      for (double b : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        s += oracle::gk(h, a, b, 1e-12);
        a = b;
      }
      const double L = std::min(2.0 * pi / w, 16.0);
      while (a < T) {
        const double b = std::min(a + L, T);
        s += oracle::gk(h, a, b, 1e-12);
        a = b;
      }
      return s;
    };
    auto N = [&](double x) { return n.k.noise(x); };
    auto D = [&](double x) { return n.k.dissipation(x); };
    auto d = [&](double x) { return n.k.smoothed_delta(x); };
    CHECK(std::abs(osc(N, false) - n.k.noise_cos_transform(w)) < 1e-12);
    CHECK(std::abs(osc(N, true) - n.k.noise_sin_transform(w)) < 1e-12);
    CHECK(std::abs(osc(D, false) - n.k.dissipation_cos_transform(w)) < 1e-12);
    CHECK(std::abs(osc(D, true) - n.k.dissipation_sin_transform(w)) < 1e-12);
    // tail of int sin(w tau)/(pi tau^2) beyond T is bounded by 1/(pi w T^2)
    CHECK(std::abs(osc(d, true) - n.k.delta_sin_transform(w)) < 2.0 / (pi * w * T * T));
    CHECK(n.k.delta_sin_transform(-w) == -n.k.delta_sin_transform(w));
    CHECK(n.k.noise_sin_transform(-w) == -n.k.noise_sin_transform(w));
  }
}

TEST_CASE("V_EM from the transverse delta matches the dissipation f(0) term") {
  Natural n;
  const double vem = oracle::vem_from_transverse_delta(n.ctx, n.cut);
  CHECK(rel(vem, n.k.vem_coefficient()) < 1e-12);
  CHECK(rel(2.0 * vem, n.k.dissipation_weighted_integral({1, 0, 0})) < 1e-12);
}
