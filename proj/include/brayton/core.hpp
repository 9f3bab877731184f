#pragma once

#include <Eigen/Dense>
#include <vector>

namespace brayton {

// Clamped linear interpolation table for temperature-dependent material
// properties.
struct MaterialTable {
  std::vector<double> temperature;  // K, strictly increasing
  std::vector<double> value;

  static MaterialTable constant(double v);
  double at(double t) const;
  void validate() const;
};

struct MaterialProps {
  MaterialTable density;        // kg/m^3
  MaterialTable heat_capacity;  // J/(kg K)
  MaterialTable conductivity;   // W/(m K)
};

// Radial rings of identical hexagonal unit cells: fuel pin, gap, clad,
// annular coolant channel, surrounding block web.
struct CoreLayout {
  int ring_count = 0;
  std::vector<int> channels_per_ring;
  double fuel_radius = 0.0;            // m
  double gap_outer_radius = 0.0;       // m
  double clad_outer_radius = 0.0;      // m
  double coolant_channel_radius = 0.0; // m
  double block_pitch = 0.0;            // m, flat-to-flat of the hex cell
  double active_height = 0.0;          // m
  int axial_cells = 0;
  int radial_fuel_nodes = 0;
  Eigen::VectorXd axial_shape;   // size axial_cells, volume-average 1
  Eigen::VectorXd radial_shape;  // size ring_count, channel-weighted avg 1
  double gap_conductivity = 0.0;   // W/(m K)
  double clad_conductivity = 0.0;  // W/(m K)
  // total block-to-block conductance between adjacent rings, per axial
  // cell [W/K]
  double inter_ring_conductance = 0.0;
  MaterialProps fuel;
  MaterialProps block;

  void validate() const;
  int total_channels() const;
  double dz() const { return active_height / axial_cells; }
  // per-pin annular fuel node volume for radial node k, one axial cell
  double fuel_node_volume(int k) const;
  double fuel_node_inner_radius(int k) const;
  double fuel_node_outer_radius(int k) const;
  double fuel_pin_volume_per_cell() const;
  // block web volume of one unit cell over one axial cell
  double block_volume_per_cell() const;
  // gap + clad series cylindrical-shell resistance per unit cell per axial
  // cell [K/W]
  double gap_clad_resistance() const;
};

// Solid temperatures: fuel[ring](radial node, axial cell), block(ring,
// axial cell).
struct SolidField {
  std::vector<Eigen::MatrixXd> fuel;  // ring_count x (nr x nz)
  Eigen::MatrixXd block;              // ring_count x nz

  static SolidField uniform(const CoreLayout& layout, double t);
};

struct SolidDeriv {
  std::vector<Eigen::MatrixXd> fuel;
  Eigen::MatrixXd block;
};

// Convective boundary seen by the solids: coolant bulk temperature and heat
// transfer coefficients on the clad (inner) and block (outer) channel
// walls, per ring and axial cell. Zero h means adiabatic.
struct CoolantCoupling {
  Eigen::MatrixXd t_gas;      // ring x nz [K]
  Eigen::MatrixXd htc_clad;   // ring x nz [W/(m^2 K)]
  Eigen::MatrixXd htc_block;  // ring x nz

  static CoolantCoupling adiabatic(const CoreLayout& layout);
};

// Per-unit-cell wall quantities produced alongside the conduction RHS.
struct CoreWallReport {
  Eigen::MatrixXd clad_surface_temp;   // ring x nz [K]
  Eigen::MatrixXd block_surface_temp;  // ring x nz [K]
  Eigen::MatrixXd heat_to_coolant;     // ring x nz [W], all channels of ring
};

// Finite-volume conduction: radial+axial in the fuel pin, lumped block with
// ring-to-ring conduction. q_f is the volumetric source per fuel node
// [W/m^3]. Walls are massless: the clad surface temperature solves the
// series resistance/convection balance each call.
SolidDeriv fuel_conduction_rhs(const CoreLayout& layout,
                               const SolidField& field,
                               const std::vector<Eigen::MatrixXd>& q_f,
                               const CoolantCoupling& coolant,
                               CoreWallReport* report = nullptr);

// Distribute P_fiss over fuel nodes proportionally to the shape factors;
// the volume integral over all channels reproduces P_fiss exactly.
std::vector<Eigen::MatrixXd> distribute_power(double p_fiss,
                                              const CoreLayout& layout);

// Volume-weighted average fuel and block temperatures.
std::pair<double, double> core_average_temps(const SolidField& field,
                                             const CoreLayout& layout);

}  // namespace brayton
