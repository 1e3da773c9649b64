// units.cpp — constants and scalings
#include "vqs/units.hpp"

#include <cmath>
#include <numbers>

namespace vqs {

using std::numbers::pi;

PhysicalContext PhysicalContext::si_electron() {
  PhysicalContext ctx;
  ctx.hbar = codata::hbar;
  ctx.c = codata::c;
  ctx.eps0 = codata::eps0;
  ctx.e_charge = codata::e_charge;
  ctx.mass_bare = codata::m_electron;
  ctx.unit_system = UnitSystem::SI;
  return ctx;
}

PhysicalContext PhysicalContext::natural(double alpha, double mass) {
  PhysicalContext ctx;
  ctx.e_charge = std::sqrt(4.0 * pi * alpha);
  ctx.mass_bare = mass;
  ctx.unit_system = UnitSystem::Natural;
  return ctx;
}

void PhysicalContext::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string(name) + " must be strictly positive and finite");
  };
  positive(hbar, "hbar");
  positive(c, "c");
  positive(eps0, "eps0");
  positive(e_charge, "e_charge");
  positive(mass_bare, "mass");
  if (unit_system == UnitSystem::Natural && (hbar != 1.0 || c != 1.0 || eps0 != 1.0))
    throw ConfigError("natural units require hbar = c = eps0 = 1");
}

CutoffConfig CutoffConfig::from_omega_max(double omega_max, const PhysicalContext& ctx) {
  if (!(omega_max > 0.0) || !std::isfinite(omega_max))
    throw ConfigError("omega_max must be strictly positive");
  CutoffConfig cut;
  cut.omega_max = omega_max;
  cut.epsilon = 1.0 / omega_max;
  cut.k_max = omega_max / ctx.c;
  return cut;
}

void CutoffConfig::validate(const PhysicalContext& ctx) const {
  if (!(omega_max > 0.0)) throw ConfigError("omega_max must be strictly positive");
  if (std::abs(epsilon * omega_max - 1.0) > 4e-16)
    throw ConfigError("epsilon must equal 1/omega_max");
  if (std::abs(k_max * ctx.c - omega_max) > 4e-16 * omega_max)
    throw ConfigError("k_max must equal omega_max/c");
}

double fine_structure(const PhysicalContext& ctx) {
  return ctx.e_charge * ctx.e_charge / (4.0 * pi * ctx.eps0 * ctx.hbar * ctx.c);
}

double mass_shift(const PhysicalContext& ctx, double omega_max) {
  return 4.0 * fine_structure(ctx) * ctx.hbar * omega_max / (3.0 * pi * ctx.c * ctx.c);
}

double renormalized_mass(const PhysicalContext& ctx, double omega_max) {
  return ctx.mass_bare + mass_shift(ctx, omega_max);
}

double renormalized_mass(const PhysicalContext& ctx, const CutoffConfig& cut) {
  return renormalized_mass(ctx, cut.omega_max);
}

double runaway_time(const PhysicalContext& ctx, const CutoffConfig& cut) {
  return 2.0 * fine_structure(ctx) * ctx.hbar /
         (3.0 * renormalized_mass(ctx, cut) * ctx.c * ctx.c);
}

Dimension parse_dimension(std::string_view tag) {
  if (tag == "dimensionless" || tag == "1") return Dimension::Dimensionless;
  if (tag == "time") return Dimension::Time;
  if (tag == "frequency") return Dimension::Frequency;
  if (tag == "length") return Dimension::Length;
  if (tag == "wavenumber") return Dimension::Wavenumber;
  if (tag == "energy") return Dimension::Energy;
  if (tag == "mass") return Dimension::Mass;
  if (tag == "momentum") return Dimension::Momentum;
  if (tag == "velocity") return Dimension::Velocity;
  if (tag == "action") return Dimension::Action;
  throw ConfigError("unknown dimension tag '" + std::string(tag) + "'");
}

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::Dimensionless: return "dimensionless";
    case Dimension::Time: return "time";
    case Dimension::Frequency: return "frequency";
    case Dimension::Length: return "length";
    case Dimension::Wavenumber: return "wavenumber";
    case Dimension::Energy: return "energy";
    case Dimension::Mass: return "mass";
    case Dimension::Momentum: return "momentum";
    case Dimension::Velocity: return "velocity";
    case Dimension::Action: return "action";
  }
  return "dimensionless";
}

double scale_of(Dimension d, const PhysicalContext& ctx, const CutoffConfig& cut) {
  const double energy = ctx.hbar * cut.omega_max;
  switch (d) {
    case Dimension::Dimensionless: return 1.0;
    case Dimension::Time: return cut.omega_max;
    case Dimension::Frequency: return 1.0 / cut.omega_max;
    case Dimension::Length: return cut.k_max;
    case Dimension::Wavenumber: return 1.0 / cut.k_max;
    case Dimension::Energy: return 1.0 / energy;
    case Dimension::Mass: return ctx.c * ctx.c / energy;
    case Dimension::Momentum: return 1.0 / (ctx.hbar * cut.k_max);
    case Dimension::Velocity: return 1.0 / ctx.c;
    case Dimension::Action: return 1.0 / ctx.hbar;
  }
  return 1.0;
}

double nondimensionalize(double value, Dimension d, const PhysicalContext& ctx,
                         const CutoffConfig& cut) {
  return value * scale_of(d, ctx, cut);
}

double dimensionalize(double value, Dimension d, const PhysicalContext& ctx,
                      const CutoffConfig& cut) {
  return value / scale_of(d, ctx, cut);
}

ScaledSystem to_natural(const PhysicalContext& ctx, const CutoffConfig& cut) {
  ScaledSystem out;
  out.ctx = PhysicalContext::natural(fine_structure(ctx),
                                     nondimensionalize(ctx.mass_bare, Dimension::Mass, ctx, cut));
  out.cut = CutoffConfig::from_omega_max(1.0, out.ctx);
  return out;
}

}  // namespace vqs
