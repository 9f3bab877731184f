#include "brayton/hx.hpp"

#include <cmath>
#include <stdexcept>

namespace brayton {

void RecuperatorConfig::validate() const {
  hot.validate();
  cold.validate();
  if (hot.axial_cells != cold.axial_cells)
    throw std::invalid_argument(
        "recuperator channels must share the axial cell count");
  if (!(wall_thickness > 0.0))
    throw std::invalid_argument("recuperator wall thickness must be > 0");
  wall.density.validate();
  wall.heat_capacity.validate();
  wall.conductivity.validate();
}

double RecuperatorConfig::wall_cell_capacity(double t) const {
  // wall volume follows the hot-side exchange surface
  const double area = 2.0 * M_PI * hot.r_out * hot.dz();
  return wall.density.at(t) * wall.heat_capacity.at(t) * area *
         wall_thickness;
}

bool recuperator_rhs(const RecuperatorConfig& config, const GasModel& gas,
                     const GasComposition& comp, double w_hot,
                     double t_hot_in, double p_hot, double w_cold,
                     double t_cold_in, double p_cold,
                     const Eigen::VectorXd& t_hot,
                     const Eigen::VectorXd& t_cold,
                     const Eigen::VectorXd& t_wall, Eigen::VectorXd& d_hot,
                     Eigen::VectorXd& d_cold, Eigen::VectorXd& d_wall,
                     double* q_hot_total, double* q_cold_total,
                     bool parallel_flow) {
  const int n = config.cells();
  if (t_wall.minCoeff() <= 0.0) return false;

  // hot channel sees the wall in its own cell order
  WallCoupling hot_walls;
  hot_walls.t_outer = t_wall;
  hot_walls.outer_active = true;
  Eigen::VectorXd q_hot(n);
  if (!thermal_channel_rhs(config.hot, gas, comp, w_hot, t_hot_in, p_hot,
                           t_hot, hot_walls, d_hot, q_hot))
    return false;

  // cold channel faces the wall reversed (counterflow) unless verifying the
  // parallel arrangement
  WallCoupling cold_walls;
  cold_walls.t_outer.resize(n);
  for (int i = 0; i < n; ++i)
    cold_walls.t_outer[i] = parallel_flow ? t_wall[i] : t_wall[n - 1 - i];
  cold_walls.outer_active = true;
  Eigen::VectorXd q_cold(n);
  if (!thermal_channel_rhs(config.cold, gas, comp, w_cold, t_cold_in, p_cold,
                           t_cold, cold_walls, d_cold, q_cold))
    return false;

  d_wall.resize(n);
  for (int i = 0; i < n; ++i) {
    // wall cell i exchanges with hot cell i and the facing cold cell
    const int j = parallel_flow ? i : n - 1 - i;
    const double cap = config.wall_cell_capacity(t_wall[i]);
    d_wall[i] = (-q_hot[i] - q_cold[j]) / cap;
  }
  if (q_hot_total) *q_hot_total = q_hot.sum();
  if (q_cold_total) *q_cold_total = q_cold.sum();
  return true;
}

void CoolerConfig::validate() const {
  geom.validate();
  if (!(emissivity > 0.0 && emissivity <= 1.0))
    throw std::invalid_argument("cooler emissivity must lie in (0, 1]");
  if (!(pipe_wall_area > 0.0 && radiating_area > 0.0))
    throw std::invalid_argument("cooler areas must be positive");
}

std::optional<double> cooler_wall_balance(const CoolerConfig& config,
                                          double h_out, double t_gas,
                                          double t_space) {
  if (!(t_gas > 0.0 && t_space > 0.0) || h_out < 0.0) return std::nullopt;
  if (t_gas == t_space) return t_gas;

  const double k =
      config.radiating_area / config.pipe_wall_area * config.emissivity *
      kStefanBoltzmann;
  // f(T) = h (T - T_gas) + k (T^4 - T_space^4); strictly increasing, with a
  // sign change on [min, max] of the two temperatures
  auto f = [&](double t) {
    return h_out * (t - t_gas) +
           k * (t * t * t * t - t_space * t_space * t_space * t_space);
  };
  auto df = [&](double t) { return h_out + 4.0 * k * t * t * t; };

  double lo = std::min(t_gas, t_space);
  double hi = std::max(t_gas, t_space);
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double val = f(t);
    if (std::abs(val) <
        1e-12 * (h_out * hi + k * hi * hi * hi * hi + 1e-300))
      return t;
    if (val > 0.0)
      hi = t;
    else
      lo = t;
    double step = val / df(t);
    double next = t - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisect
    if (std::abs(next - t) < 1e-14 * hi) return next;
    t = next;
  }
  return std::nullopt;
}

double radiated_power(const CoolerConfig& config, double t_out,
                      double t_space) {
  if (!(t_out > 0.0 && t_space > 0.0))
    throw std::invalid_argument("radiated_power: temperatures must be > 0");
  return config.emissivity * kStefanBoltzmann * config.radiating_area *
         (t_out * t_out * t_out * t_out -
          t_space * t_space * t_space * t_space);
}

}  // namespace brayton
