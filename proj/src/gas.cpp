#include "brayton/gas.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace brayton {

namespace {

double eval_b_fit(const std::array<double, 4>& a, double T) {
  const double t = T / 1000.0;
  return a[0] + a[1] * t + a[2] * t * t + a[3] / t;  // cm^3/mol
}

double eval_b_fit_d2(const std::array<double, 4>& a, double T) {
  // d2/dT2 of a2*(T/1000)^2 and a3*1000/T, in cm^3/(mol K^2)
  return 2.0 * a[2] * 1e-6 + 2.0 * a[3] * 1000.0 / (T * T * T);
}

// Neufeld et al. fits of the reduced collision integrals.
double omega22(double tstar) {
  return 1.16145 * std::pow(tstar, -0.14874) +
         0.52487 * std::exp(-0.77320 * tstar) +
         2.16178 * std::exp(-2.43787 * tstar);
}

double omega11(double tstar) {
  return 1.06036 * std::pow(tstar, -0.15610) +
         0.19300 * std::exp(-0.47635 * tstar) +
         1.03587 * std::exp(-1.52996 * tstar) +
         1.76474 * std::exp(-3.89411 * tstar);
}

// Single-species Chapman-Enskog viscosity [Pa s]; M in g/mol, sigma in
// Angstrom.
double visc_single(double M, double sigma, double eps, double T) {
  return 2.6693e-6 * std::sqrt(M * T) / (sigma * sigma * omega22(T / eps));
}

void check_envelope(const GasState& s) {
  if (!(s.temperature > 0.0) || !(s.pressure > 0.0))
    throw std::domain_error("gas state requires T > 0 and p > 0");
  if (s.temperature < kEnvelopeTMin || s.temperature > kEnvelopeTMax) {
    std::ostringstream os;
    os << "temperature " << s.temperature << " K outside envelope ["
       << kEnvelopeTMin << ", " << kEnvelopeTMax << "] K";
    throw std::domain_error(os.str());
  }
  // No lower pressure bound: the virial truncation is exact in the p -> 0
  // limit, and the ideal-gas recovery checks probe it directly.
  if (s.pressure > kEnvelopePMax) {
    std::ostringstream os;
    os << "pressure " << s.pressure << " Pa above envelope cap "
       << kEnvelopePMax << " Pa (20 MPa)";
    throw std::domain_error(os.str());
  }
}

}  // namespace

GasComposition GasComposition::from_xenon_fraction(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("xenon mole fraction must lie in [0,1]");
  return GasComposition{x};
}

GasComposition GasComposition::from_molar_mass(double molar_mass_g_per_mol) {
  const double m = molar_mass_g_per_mol * 1e-3;
  if (!(m >= kMolarMassHe && m <= kMolarMassXe))
    throw std::invalid_argument(
        "molar mass must lie between pure He and pure Xe");
  return GasComposition{(m - kMolarMassHe) / (kMolarMassXe - kMolarMassHe)};
}

double GasComposition::molar_mass() const {
  return (1.0 - xenon_fraction) * kMolarMassHe + xenon_fraction * kMolarMassXe;
}

double GasComposition::specific_gas_constant() const {
  return kGasConstant / molar_mass();
}

GasModel GasModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gas coefficient file: " + path);

  GasModel m;
  bool have_hehe = false, have_xexe = false, have_hexe = false;
  bool have_lj_he = false, have_lj_xe = false, have_k3 = false;

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string kind;
    is >> kind;
    if (kind == "virial") {
      std::string pair;
      std::array<double, 4> a{};
      is >> pair >> a[0] >> a[1] >> a[2] >> a[3];
      if (!is) throw std::runtime_error("malformed virial record: " + line);
      if (pair == "He-He") { m.b_hehe_ = a; have_hehe = true; }
      else if (pair == "Xe-Xe") { m.b_xexe_ = a; have_xexe = true; }
      else if (pair == "He-Xe") { m.b_hexe_ = a; have_hexe = true; }
      else throw std::runtime_error("unknown virial pair: " + pair);
    } else if (kind == "lj") {
      std::string sp;
      double sigma, eps;
      is >> sp >> sigma >> eps;
      if (!is) throw std::runtime_error("malformed lj record: " + line);
      if (sp == "He") { m.sigma_he_ = sigma; m.eps_he_ = eps; have_lj_he = true; }
      else if (sp == "Xe") { m.sigma_xe_ = sigma; m.eps_xe_ = eps; have_lj_xe = true; }
      else throw std::runtime_error("unknown lj species: " + sp);
    } else if (kind == "conductivity_third_order") {
      is >> m.k3_;
      if (!is) throw std::runtime_error("malformed correction record: " + line);
      have_k3 = true;
    } else {
      throw std::runtime_error("unknown record in gas coefficient file: " +
                               kind);
    }
  }
  if (!(have_hehe && have_xexe && have_hexe && have_lj_he && have_lj_xe &&
        have_k3))
    throw std::runtime_error("incomplete gas coefficient file: " + path);
  return m;
}

bool GasModel::transport_extrapolated(double temperature) {
  return temperature < kTransportTMin || temperature > kTransportTMax;
}

double GasModel::virial_b(const GasComposition& comp, double T) const {
  const double x = comp.xenon_fraction;
  const double b = (1.0 - x) * (1.0 - x) * eval_b_fit(b_hehe_, T) +
                   2.0 * x * (1.0 - x) * eval_b_fit(b_hexe_, T) +
                   x * x * eval_b_fit(b_xexe_, T);
  return b * 1e-6;  // cm^3/mol -> m^3/mol
}

double GasModel::virial_b_second_deriv(const GasComposition& comp,
                                       double T) const {
  const double x = comp.xenon_fraction;
  const double b2 = (1.0 - x) * (1.0 - x) * eval_b_fit_d2(b_hehe_, T) +
                    2.0 * x * (1.0 - x) * eval_b_fit_d2(b_hexe_, T) +
                    x * x * eval_b_fit_d2(b_xexe_, T);
  return b2 * 1e-6;
}

double GasModel::compressibility(const GasComposition& comp,
                                 const GasState& s) const {
  check_envelope(s);
  // Pressure-explicit truncation: Z = 1 + B(T) p / (R T).
  return 1.0 +
         virial_b(comp, s.temperature) * s.pressure /
             (kGasConstant * s.temperature);
}

double GasModel::density(const GasComposition& comp, const GasState& s) const {
  const double z = compressibility(comp, s);
  return s.pressure * comp.molar_mass() /
         (z * kGasConstant * s.temperature);
}

double GasModel::heat_capacity_cp(const GasComposition& comp,
                                  const GasState& s) const {
  check_envelope(s);
  // cp(p) = cp_ideal - p T d2B/dT2 per mole (pressure-form virial).
  const double cp_molar =
      2.5 * kGasConstant -
      s.pressure * s.temperature * virial_b_second_deriv(comp, s.temperature);
  return cp_molar / comp.molar_mass();
}

double GasModel::viscosity(const GasComposition& comp,
                           const GasState& s) const {
  if (!(s.temperature > 0.0))
    throw std::domain_error("viscosity requires T > 0");
  const double T = s.temperature;
  const double x2 = comp.xenon_fraction;
  const double x1 = 1.0 - x2;
  const double m1 = kMolarMassHe * 1e3;  // g/mol for the correlation
  const double m2 = kMolarMassXe * 1e3;

  const double mu1 = visc_single(m1, sigma_he_, eps_he_, T);
  if (x2 == 0.0) return mu1;
  const double mu2 = visc_single(m2, sigma_xe_, eps_xe_, T);
  if (x1 == 0.0) return mu2;

  // Hirschfelder first-order binary mixture rule.
  const double s12 = 0.5 * (sigma_he_ + sigma_xe_);
  const double e12 = std::sqrt(eps_he_ * eps_xe_);
  const double m12 = 2.0 * m1 * m2 / (m1 + m2);
  const double mu12 =
      2.6693e-6 * std::sqrt(m12 * T) / (s12 * s12 * omega22(T / e12));
  const double astar = omega22(T / e12) / omega11(T / e12);
  const double q = (m1 + m2) * (m1 + m2) / (4.0 * m1 * m2);

  const double X = x1 * x1 / mu1 + 2.0 * x1 * x2 / mu12 + x2 * x2 / mu2;
  const double Y =
      0.6 * astar *
      (x1 * x1 / mu1 * (m1 / m2) +
       2.0 * x1 * x2 / mu12 * q * mu12 * mu12 / (mu1 * mu2) +
       x2 * x2 / mu2 * (m2 / m1));
  const double Z =
      0.6 * astar *
      (x1 * x1 * (m1 / m2) +
       2.0 * x1 * x2 * (q * (mu12 / mu1 + mu12 / mu2) - 1.0) +
       x2 * x2 * (m2 / m1));
  return (1.0 + Z) / (X + Y);
}

double GasModel::thermal_conductivity(const GasComposition& comp,
                                      const GasState& s) const {
  if (!(s.temperature > 0.0))
    throw std::domain_error("conductivity requires T > 0");
  const double T = s.temperature;
  const double x2 = comp.xenon_fraction;
  const double x1 = 1.0 - x2;
  const double m1 = kMolarMassHe * 1e3;
  const double m2 = kMolarMassXe * 1e3;

  const double mu1 = visc_single(m1, sigma_he_, eps_he_, T);
  const double lam1 = 3.75 * kGasConstant / kMolarMassHe * mu1;
  if (x2 == 0.0) return lam1;
  const double mu2 = visc_single(m2, sigma_xe_, eps_xe_, T);
  const double lam2 = 3.75 * kGasConstant / kMolarMassXe * mu2;
  if (x1 == 0.0) return lam2;

  // Mason-Saxena first-order mixture rule for monatomic gases.
  auto phi = [](double mi, double mj, double mui, double muj) {
    const double r = 1.0 + std::sqrt(mui / muj) * std::pow(mj / mi, 0.25);
    return r * r / std::sqrt(8.0 * (1.0 + mi / mj));
  };
  const double d1 = x1 + x2 * phi(m1, m2, mu1, mu2);
  const double d2 = x2 + x1 * phi(m2, m1, mu2, mu1);
  const double lam_first = x1 * lam1 / d1 + x2 * lam2 / d2;

  // Multiplicative third-order correction; vanishes in the pure limits.
  const double mass_term = (m2 - m1) / (m2 + m1);
  const double f3 = 1.0 + k3_ * 4.0 * x1 * x2 * mass_term * mass_term;
  return lam_first * f3;
}

GasProperties GasModel::properties(const GasComposition& comp,
                                   const GasState& s) const {
  GasProperties p;
  p.compressibility = compressibility(comp, s);
  p.density = s.pressure * comp.molar_mass() /
              (p.compressibility * kGasConstant * s.temperature);
  p.cp = heat_capacity_cp(comp, s);
  p.viscosity = viscosity(comp, s);
  p.conductivity = thermal_conductivity(comp, s);
  p.prandtl = p.cp * p.viscosity / p.conductivity;
  p.gamma = p.cp / (p.cp - comp.specific_gas_constant());
  return p;
}

}  // namespace brayton
