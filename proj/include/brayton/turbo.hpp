#pragma once

#include <string>
#include <vector>

namespace brayton {

enum class MachineKind { compressor, turbine };

struct MachineRatios {
  double pressure_ratio = 0.0;
  double temperature_ratio = 0.0;
  bool surge = false;  // compressor query left of the surge line
};

// Gridded machine characteristic: pressure/temperature ratio on a
// rectangular (N', m') grid, bilinear interpolation in between. Immutable
// after load.
class TurboMap {
 public:
  static TurboMap from_file(const std::string& path);

  MachineKind kind() const { return kind_; }
  double r_tip() const { return r_tip_; }

  // Bilinear lookup. Queries within `extrapolation_margin` (fraction of the
  // grid span) outside the hull are clamped to the edge; farther out the
  // call returns false (out-of-map).
  bool ratios(double m_corr, double n_corr, MachineRatios& out) const;

  double extrapolation_margin = 0.05;

  double n_min() const { return n_grid_.front(); }
  double n_max() const { return n_grid_.back(); }
  double m_min() const { return m_grid_.front(); }
  double m_max() const { return m_grid_.back(); }
  double surge_flow(double n_corr) const;  // 0 for turbines

 private:
  MachineKind kind_ = MachineKind::compressor;
  double r_tip_ = 0.0;
  std::vector<double> n_grid_;  // strictly increasing
  std::vector<double> m_grid_;
  // row-major [n][m]
  std::vector<double> pr_;
  std::vector<double> tr_;
  std::vector<double> surge_n_;
  std::vector<double> surge_m_;
};

// Corrected mass flow and speed: m' = mdot sqrt(T R) / ((2 r_tip)^2 p),
// N' = N_rpm 2 r_tip / sqrt(gamma R T). N is in rpm by convention; the
// shipped maps are generated with the same convention.
struct CorrectedQuantities {
  double m_corr = 0.0;
  double n_corr = 0.0;
};

CorrectedQuantities corrected_quantities(double mdot, double t_in,
                                         double p_in, double n_rpm,
                                         double r_tip, double gas_r,
                                         double gamma);

// Turbine and compressor shaft powers from station enthalpies.
struct ComponentPowers {
  double turbine = 0.0;     // W, positive when extracting
  double compressor = 0.0;  // W, positive when absorbing
};

ComponentPowers component_powers(double mdot, double cp_t_in, double t_t_in,
                                 double cp_t_out, double t_t_out,
                                 double cp_c_in, double t_c_in,
                                 double cp_c_out, double t_c_out);

struct ShaftState {
  double omega = 0.0;    // rad/s
  double inertia = 0.0;  // kg m^2
};

// Free-shaft speed dynamics: domega/dt = (P_T - P_C - P_alt) / (I omega),
// with a small-omega floor to avoid the 1/omega singularity.
double shaft_rhs(double p_turbine, double p_compressor, double p_alt,
                 const ShaftState& shaft);

}  // namespace brayton
