#pragma once

#include <Eigen/Dense>
#include <optional>

#include "brayton/channel.hpp"
#include "brayton/core.hpp"

namespace brayton {

inline constexpr double kStefanBoltzmann = 5.670374419e-8;  // W/(m^2 K^4)

// Counterflow recuperator: two gas channels coupled through a conducting
// wall with one lumped radial node per axial cell. Hot cell i faces cold
// cell n-1-i.
struct RecuperatorConfig {
  ChannelGeometry hot;
  ChannelGeometry cold;
  double wall_thickness = 0.0;  // m
  MaterialProps wall;

  void validate() const;
  int cells() const { return hot.axial_cells; }
  // wall heat capacity per axial cell [J/K] at temperature t
  double wall_cell_capacity(double t) const;
};

// Quasi-steady-flow recuperator derivatives: per-cell hot gas, cold gas and
// wall temperatures. q_* are optional per-call totals [W] absorbed by each
// gas stream. parallel_flow flips the cold-side orientation (verification
// only). Returns false on invalid states.
bool recuperator_rhs(const RecuperatorConfig& config, const GasModel& gas,
                     const GasComposition& comp, double w_hot,
                     double t_hot_in, double p_hot, double w_cold,
                     double t_cold_in, double p_cold,
                     const Eigen::VectorXd& t_hot,
                     const Eigen::VectorXd& t_cold,
                     const Eigen::VectorXd& t_wall, Eigen::VectorXd& d_hot,
                     Eigen::VectorXd& d_cold, Eigen::VectorXd& d_wall,
                     double* q_hot_total = nullptr,
                     double* q_cold_total = nullptr,
                     bool parallel_flow = false);

// Space radiator cooler: gas channel whose outer wall radiates to the sink.
struct CoolerConfig {
  ChannelGeometry geom;
  double emissivity = 0.0;       // (0, 1]
  double pipe_wall_area = 0.0;   // S_ts [m^2]
  double radiating_area = 0.0;   // S_rs [m^2]

  void validate() const;
};

// Solves the massless radiating-wall balance
//   h_out (T_out - T_gas) = -(S_rs / S_ts) eps sigma (T_out^4 - T_space^4)
// for the wall temperature T_out by safeguarded Newton iteration. Returns
// nullopt when the iteration fails to converge.
std::optional<double> cooler_wall_balance(const CoolerConfig& config,
                                          double h_out, double t_gas,
                                          double t_space);

// Total radiated power over the full radiating area.
double radiated_power(const CoolerConfig& config, double t_out,
                      double t_space);

}  // namespace brayton
