#pragma once

#include <Eigen/Dense>
#include <optional>

#include "brayton/gas.hpp"

namespace brayton {

// Annular (r_in > 0) or circular (r_in = 0) flow passage discretized into
// axial_cells finite volumes. Scalars live at cell centers, mass flows at
// the axial_cells + 1 faces.
struct ChannelGeometry {
  double r_in = 0.0;          // m
  double r_out = 0.0;         // m
  double length = 0.0;        // m
  int axial_cells = 10;
  double wall_roughness = 0.0;  // m
  double inclination = 0.0;     // rad, angle between axis and gravity
  double gravity = 0.0;         // m/s^2, 0 for deep space

  double flow_area() const;          // A_p = pi (r_out^2 - r_in^2)
  double wetted_perimeter() const;   // L = 2 pi (r_in + r_out)
  double hydraulic_diameter() const; // D_p = 4 A_p / L
  double dz() const { return length / axial_cells; }
  double cell_volume() const { return flow_area() * dz(); }
  void validate() const;
};

// Laminar/turbulent transition band for both correlations.
inline constexpr double kReLaminar = 2300.0;
inline constexpr double kReTurbulent = 4000.0;
inline constexpr double kNusseltLaminar = 4.36;

// Darcy friction factor: 64/Re below kReLaminar, Haaland above
// kReTurbulent, linear blend between.
double friction_factor(double re, double rel_roughness);

// Nusselt number with a wall-to-gas temperature-ratio correction
// theta_wall = T_wall / T_gas applied to the turbulent branch.
double nusselt(double re, double pr, double theta_wall);

// Volumetric heat source [W/m^3] delivered to the gas from a wall of
// radius `radius` at T_wall.
double wall_heat_flux(double h, double radius, double t_wall, double t_gas,
                      double a_p);

// Convective coefficient h = Nu k / D for a cell with the given bulk
// properties and face-averaged mass flow.
double heat_transfer_coefficient(const ChannelGeometry& geom,
                                 const GasProperties& props, double mdot,
                                 double theta_wall);

// Friction pressure drop across the full channel length at uniform flow,
// evaluated from single-point bulk properties (quasi-steady helper).
double darcy_pressure_drop(const ChannelGeometry& geom,
                           const GasProperties& props, double mdot);

struct ChannelState {
  Eigen::VectorXd rho;          // axial_cells
  Eigen::VectorXd temperature;  // axial_cells
  Eigen::VectorXd mdot;         // axial_cells + 1 faces

  static ChannelState uniform(const ChannelGeometry& geom, double rho0,
                              double t0);
};

struct ChannelDeriv {
  Eigen::VectorXd d_rho;
  Eigen::VectorXd d_temperature;
  Eigen::VectorXd d_mdot;
};

struct WallCoupling {
  Eigen::VectorXd t_inner;  // K, per cell; used when inner_active
  Eigen::VectorXd t_outer;
  bool inner_active = false;
  bool outer_active = false;
};

// Boundary specification. Leave everything unset for a sealed channel.
// inlet_mdot imposes the face-0 flow; outlet_pressure provides the pressure
// anchor through a ghost cell at the last face.
struct ChannelBoundary {
  std::optional<double> inlet_mdot;         // kg/s
  std::optional<double> inlet_temperature;  // K, for inflow advection
  std::optional<double> outlet_pressure;    // Pa
};

// Finite-volume semi-discretization of the transient mass/momentum/energy
// equations with first-order upwind advection. Returns false (without
// touching `out`) when the state is invalid, so a stiff integrator can
// retreat.
bool channel_rhs(const ChannelGeometry& geom, const GasModel& gas,
                 const GasComposition& comp, const ChannelState& state,
                 const WallCoupling& walls, const ChannelBoundary& bc,
                 ChannelDeriv& out);

// Quasi-steady thermal update used by the plant model: uniform mass flow W
// through the channel, per-cell gas temperature as the dynamic state,
// pressure prescribed. Writes dT/dt per cell and the wall heat [W] absorbed
// by the gas in each cell. extra_heat, when given, adds a per-cell source
// [W] computed externally (e.g. from a massless-wall balance) that is not
// included in wall_heat. Returns false on invalid inputs.
bool thermal_channel_rhs(const ChannelGeometry& geom, const GasModel& gas,
                         const GasComposition& comp, double mdot,
                         double t_inlet, double pressure,
                         const Eigen::VectorXd& t_gas,
                         const WallCoupling& walls, Eigen::VectorXd& d_t_gas,
                         Eigen::VectorXd& wall_heat,
                         const Eigen::VectorXd* extra_heat = nullptr);

}  // namespace brayton
