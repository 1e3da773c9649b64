// units.hpp — physical constants, unit systems and nondimensionalization
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vqs {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CODATA 2018
namespace codata {
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double c = 299792458.0;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double e_charge = 1.602176634e-19;
inline constexpr double m_electron = 9.1093837015e-31;
inline constexpr double alpha = 7.2973525693e-3;
}  // namespace codata

enum class UnitSystem { SI, Natural };

struct PhysicalContext {
  double hbar = 1.0;
  double c = 1.0;
  double eps0 = 1.0;
  double e_charge = 0.0;
  double mass_bare = 1.0;
  UnitSystem unit_system = UnitSystem::Natural;

  static PhysicalContext si_electron();
  // hbar = c = eps0 = 1, e^2 = 4 pi alpha
  static PhysicalContext natural(double alpha = codata::alpha, double mass = 1.0);

  void validate() const;
};

struct CutoffConfig {
  double omega_max = 1.0;
  double epsilon = 1.0;
  double k_max = 1.0;

  static CutoffConfig from_omega_max(double omega_max, const PhysicalContext& ctx);
  void validate(const PhysicalContext& ctx) const;
};

double fine_structure(const PhysicalContext& ctx);
double mass_shift(const PhysicalContext& ctx, double omega_max);
double renormalized_mass(const PhysicalContext& ctx, double omega_max);
double renormalized_mass(const PhysicalContext& ctx, const CutoffConfig& cut);
double runaway_time(const PhysicalContext& ctx, const CutoffConfig& cut);

enum class Dimension {
  Dimensionless,
  Time,
  Frequency,
  Length,
  Wavenumber,
  Energy,
  Mass,
  Momentum,
  Velocity,
  Action,
};

Dimension parse_dimension(std::string_view tag);
std::string_view dimension_name(Dimension d);

// multiply a physical value by this to get its dimensionless counterpart
double scale_of(Dimension d, const PhysicalContext& ctx, const CutoffConfig& cut);
double nondimensionalize(double value, Dimension d, const PhysicalContext& ctx,
                         const CutoffConfig& cut);
double dimensionalize(double value, Dimension d, const PhysicalContext& ctx,
                      const CutoffConfig& cut);

// Same physical electron, expressed with hbar = c = eps0 = 1 and omega_max = 1.
struct ScaledSystem {
  PhysicalContext ctx;
  CutoffConfig cut;
};
ScaledSystem to_natural(const PhysicalContext& ctx, const CutoffConfig& cut);

}  // namespace vqs
