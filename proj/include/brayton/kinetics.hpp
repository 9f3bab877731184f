#pragma once

#include <array>

namespace brayton {

inline constexpr int kDelayedGroups = 6;

// 1 pcm = 1e-5 in absolute reactivity units.
inline constexpr double kPcm = 1e-5;

struct KineticsParams {
  std::array<double, kDelayedGroups> beta{};    // delayed fractions
  std::array<double, kDelayedGroups> lambda{};  // decay constants [1/s]
  double generation_time = 0.0;                 // Lambda [s]

  double beta_total() const;
  void validate() const;
};

// Cubic reactivity feedback: rho(T) = sum_k c[k] * (T - T_ref)^k with
// c[0] = 0 so the polynomial vanishes at the reference temperature.
struct FeedbackPolys {
  std::array<double, 4> fuel{};   // absolute reactivity per K^k
  std::array<double, 4> block{};
  double fuel_ref_temperature = 0.0;   // K
  double block_ref_temperature = 0.0;  // K
  double band_min = 290.0;  // clamp band [K]
  double band_max = 1300.0;

  double fuel_reactivity(double t_fuel_avg) const;
  double block_reactivity(double t_block_avg) const;
  void validate() const;  // checks drho/dT < 0 over the band
};

struct KineticsState {
  double fission_power = 0.0;                      // W
  std::array<double, kDelayedGroups> precursors{};  // W-equivalent
};

struct KineticsDeriv {
  double d_power = 0.0;
  std::array<double, kDelayedGroups> d_precursors{};
};

// Equilibrium precursor concentrations for rho = 0 at power P0.
KineticsState equilibrium_init(const KineticsParams& params, double p0);

// rho_total = rho_in + rho_fuel(T_fuel_avg) + rho_block(T_block_avg).
// Temperatures outside the polynomial band are clamped to the band edge.
double total_reactivity(double rho_in, double t_fuel_avg, double t_block_avg,
                        const FeedbackPolys& polys);

KineticsDeriv kinetics_rhs(const KineticsState& state, double rho,
                           const KineticsParams& params);

}  // namespace brayton
