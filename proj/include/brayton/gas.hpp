#pragma once

#include <array>
#include <string>

namespace brayton {

// Universal gas constant [J/(mol K)]
inline constexpr double kGasConstant = 8.31446261815324;
inline constexpr double kMolarMassHe = 4.002602e-3;   // kg/mol
inline constexpr double kMolarMassXe = 131.293e-3;    // kg/mol

// Validity envelope for the equation-of-state closures.
inline constexpr double kEnvelopeTMin = 250.0;     // K
inline constexpr double kEnvelopeTMax = 1500.0;    // K
inline constexpr double kEnvelopePMax = 20.0e6;    // Pa

// Transport correlations are validated over this band; use outside it is
// permitted but counts as extrapolation.
inline constexpr double kTransportTMin = 400.0;    // K
inline constexpr double kTransportTMax = 1200.0;   // K

struct GasComposition {
  double xenon_fraction = 0.0;  // mole fraction in [0,1]

  static GasComposition from_xenon_fraction(double x);
  static GasComposition from_molar_mass(double molar_mass_g_per_mol);

  double molar_mass() const;             // kg/mol
  double specific_gas_constant() const;  // J/(kg K)
};

struct GasState {
  double temperature = 0.0;  // K
  double pressure = 0.0;     // Pa
};

struct GasProperties {
  double density = 0.0;          // kg/m^3
  double cp = 0.0;               // J/(kg K)
  double viscosity = 0.0;        // Pa s
  double conductivity = 0.0;     // W/(m K)
  double prandtl = 0.0;
  double compressibility = 0.0;  // Z
  double gamma = 0.0;            // cp/(cp - R_o)
};

// Non-ideal He-Xe property closures. Coefficients (virial fits,
// Lennard-Jones parameters, correction constants) come from a plain-text
// data file so they can be swapped without a rebuild; see data/README.md
// for the adopted formulation.
class GasModel {
 public:
  static GasModel from_file(const std::string& path);

  double compressibility(const GasComposition& comp, const GasState& s) const;
  double density(const GasComposition& comp, const GasState& s) const;
  double heat_capacity_cp(const GasComposition& comp, const GasState& s) const;
  double viscosity(const GasComposition& comp, const GasState& s) const;
  double thermal_conductivity(const GasComposition& comp,
                              const GasState& s) const;
  GasProperties properties(const GasComposition& comp, const GasState& s) const;

  static bool transport_extrapolated(double temperature);

  // Second virial coefficient of the mixture [m^3/mol].
  double virial_b(const GasComposition& comp, double temperature) const;
  // d^2 B / dT^2 of the mixture [m^3/(mol K^2)].
  double virial_b_second_deriv(const GasComposition& comp,
                               double temperature) const;

 private:
  GasModel() = default;

  // B(T) = a0 + a1 t + a2 t^2 + a3/t, t = T/1000, in cm^3/mol.
  std::array<double, 4> b_hehe_{};
  std::array<double, 4> b_xexe_{};
  std::array<double, 4> b_hexe_{};
  double sigma_he_ = 0.0, eps_he_ = 0.0;  // Angstrom, K
  double sigma_xe_ = 0.0, eps_xe_ = 0.0;
  double k3_ = 0.0;  // third-order conductivity correction amplitude
};

}  // namespace brayton
