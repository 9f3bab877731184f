#include "brayton/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace brayton {

double ChannelGeometry::flow_area() const {
  return M_PI * (r_out * r_out - r_in * r_in);
}

double ChannelGeometry::wetted_perimeter() const {
  return 2.0 * M_PI * (r_in + r_out);
}

double ChannelGeometry::hydraulic_diameter() const {
  return 4.0 * flow_area() / wetted_perimeter();
}

void ChannelGeometry::validate() const {
  if (!(r_in >= 0.0 && r_out > r_in))
    throw std::invalid_argument("channel radii must satisfy 0 <= r_in < r_out");
  if (!(length > 0.0)) throw std::invalid_argument("channel length must be > 0");
  if (axial_cells < 2)
    throw std::invalid_argument("channel needs at least 2 axial cells");
  if (wall_roughness < 0.0)
    throw std::invalid_argument("wall roughness must be >= 0");
}

double friction_factor(double re, double rel_roughness) {
  if (!(re > 0.0)) throw std::invalid_argument("Reynolds number must be > 0");
  auto laminar = [](double r) { return 64.0 / r; };
  auto haaland = [rel_roughness](double r) {
    const double arg = std::pow(rel_roughness / 3.7, 1.11) + 6.9 / r;
    const double l = 1.8 * std::log10(arg);
    return 1.0 / (l * l);
  };
  if (re <= kReLaminar) return laminar(re);
  if (re >= kReTurbulent) return haaland(re);
  const double w = (re - kReLaminar) / (kReTurbulent - kReLaminar);
  return (1.0 - w) * laminar(kReLaminar) + w * haaland(kReTurbulent);
}

double nusselt(double re, double pr, double theta_wall) {
  if (!(pr > 0.0) || !(theta_wall > 0.0))
    throw std::invalid_argument("nusselt: Pr and theta_wall must be > 0");
  auto turbulent = [pr, theta_wall](double r) {
    const double xi = std::pow(1.82 * std::log10(r) - 1.64, -2.0);
    const double base = (xi / 8.0) * (r - 1000.0) * pr /
                        (1.0 + 12.7 * std::sqrt(xi / 8.0) *
                                   (std::pow(pr, 2.0 / 3.0) - 1.0));
    const double corr =
        std::pow(theta_wall, -0.505 * std::log10(theta_wall) - 0.165);
    return base * corr;
  };
  if (re <= kReLaminar) return kNusseltLaminar;
  if (re >= kReTurbulent) return turbulent(re);
  const double w = (re - kReLaminar) / (kReTurbulent - kReLaminar);
  return (1.0 - w) * kNusseltLaminar + w * turbulent(kReTurbulent);
}

double wall_heat_flux(double h, double radius, double t_wall, double t_gas,
                      double a_p) {
  if (h < 0.0) throw std::invalid_argument("heat transfer coefficient < 0");
  return h * 2.0 * M_PI * radius * (t_wall - t_gas) / a_p;
}

double heat_transfer_coefficient(const ChannelGeometry& geom,
                                 const GasProperties& props, double mdot,
                                 double theta_wall) {
  const double d = geom.hydraulic_diameter();
  const double re =
      std::max(std::abs(mdot) * d / (geom.flow_area() * props.viscosity), 1.0);
  const double nu = nusselt(re, props.prandtl, theta_wall);
  return nu * props.conductivity / d;
}

double darcy_pressure_drop(const ChannelGeometry& geom,
                           const GasProperties& props, double mdot) {
  if (mdot == 0.0) return 0.0;
  const double a = geom.flow_area();
  const double d = geom.hydraulic_diameter();
  const double re = std::abs(mdot) * d / (a * props.viscosity);
  const double f = friction_factor(re, geom.wall_roughness / d);
  const double u = mdot / (props.density * a);
  return f * geom.length / d * 0.5 * props.density * u * std::abs(u);
}

ChannelState ChannelState::uniform(const ChannelGeometry& geom, double rho0,
                                   double t0) {
  ChannelState s;
  s.rho = Eigen::VectorXd::Constant(geom.axial_cells, rho0);
  s.temperature = Eigen::VectorXd::Constant(geom.axial_cells, t0);
  s.mdot = Eigen::VectorXd::Zero(geom.axial_cells + 1);
  return s;
}

namespace {

// Pressure from (rho, T): with Z = 1 + B p / (R T), p = n R T / (1 - n B)
// for molar density n.
bool pressure_from_density(const GasModel& gas, const GasComposition& comp,
                           double rho, double t, double& p) {
  const double n = rho / comp.molar_mass();
  const double b = gas.virial_b(comp, t);
  const double denom = 1.0 - n * b;
  if (!(denom > 0.1)) return false;  // far outside the dilute-gas closure
  p = n * kGasConstant * t / denom;
  return p > 0.0 && p <= kEnvelopePMax;
}

bool state_valid(double rho, double t) {
  return std::isfinite(rho) && std::isfinite(t) && rho > 0.0 &&
         t >= kEnvelopeTMin && t <= kEnvelopeTMax;
}

}  // namespace

bool channel_rhs(const ChannelGeometry& geom, const GasModel& gas,
                 const GasComposition& comp, const ChannelState& state,
                 const WallCoupling& walls, const ChannelBoundary& bc,
                 ChannelDeriv& out) {
  const int n = geom.axial_cells;
  const double a = geom.flow_area();
  const double dz = geom.dz();
  const double d = geom.hydraulic_diameter();
  const double rs = comp.specific_gas_constant();

  Eigen::VectorXd p(n), cv(n), cv_eff(n), h(n), mu(n);
  for (int i = 0; i < n; ++i) {
    if (!state_valid(state.rho[i], state.temperature[i])) return false;
    if (!pressure_from_density(gas, comp, state.rho[i], state.temperature[i],
                               p[i]))
      return false;
    GasState gs{state.temperature[i], p[i]};
    const auto props = gas.properties(comp, gs);
    cv[i] = props.cp - rs;
    h[i] = cv[i] * state.temperature[i] + p[i] / state.rho[i];
    mu[i] = props.viscosity;
    // du/dT for u(T) = cv(T, p) T, so the energy update conserves
    // integral(rho u) exactly despite the weak cv(T) dependence
    const double dt_u = 0.5;
    const double u_hi =
        (gas.heat_capacity_cp(comp, {state.temperature[i] + dt_u, p[i]}) - rs) *
        (state.temperature[i] + dt_u);
    const double u_lo =
        (gas.heat_capacity_cp(comp, {state.temperature[i] - dt_u, p[i]}) - rs) *
        (state.temperature[i] - dt_u);
    cv_eff[i] = (u_hi - u_lo) / (2.0 * dt_u);
  }

  // face flows; boundary faces may be imposed
  Eigen::VectorXd mf = state.mdot;
  if (bc.inlet_mdot) mf[0] = *bc.inlet_mdot;
  if (!bc.inlet_mdot && !bc.outlet_pressure) {
    mf[0] = 0.0;  // sealed
    mf[n] = 0.0;
  }

  out.d_rho.resize(n);
  out.d_temperature.resize(n);
  out.d_mdot = Eigen::VectorXd::Zero(n + 1);

  // upwind enthalpy and temperature at faces
  auto face_h = [&](int j) {
    if (mf[j] >= 0.0) {
      if (j == 0) {
        const double t_in = bc.inlet_temperature.value_or(state.temperature[0]);
        return cv[0] * t_in + p[0] / state.rho[0];
      }
      return h[j - 1];
    }
    return j == n ? h[n - 1] : h[j];
  };

  for (int i = 0; i < n; ++i) {
    const double dm = (mf[i] - mf[i + 1]) / (a * dz);
    out.d_rho[i] = dm;
    const double de =
        (mf[i] * face_h(i) - mf[i + 1] * face_h(i + 1)) / (a * dz);
    double q = 0.0;
    GasState gs{state.temperature[i], p[i]};
    const auto props = gas.properties(comp, gs);
    const double mcell = 0.5 * (mf[i] + mf[i + 1]);
    if (walls.inner_active) {
      const double theta = walls.t_inner[i] / state.temperature[i];
      const double hc = heat_transfer_coefficient(geom, props, mcell, theta);
      q += wall_heat_flux(hc, geom.r_in, walls.t_inner[i],
                          state.temperature[i], a);
    }
    if (walls.outer_active) {
      const double theta = walls.t_outer[i] / state.temperature[i];
      const double hc = heat_transfer_coefficient(geom, props, mcell, theta);
      q += wall_heat_flux(hc, geom.r_out, walls.t_outer[i],
                          state.temperature[i], a);
    }
    // d(rho u)/dt = de + q with u = cv(T, p) T
    const double u_int = cv[i] * state.temperature[i];
    out.d_temperature[i] =
        (de + q - u_int * dm) / (state.rho[i] * cv_eff[i]);
  }

  // momentum on interior faces (and the outlet face when pressure-anchored)
  auto mom_flux = [&](int i) {  // rho u^2 at cell i
    const double mc = 0.5 * (mf[i] + mf[i + 1]);
    return mc * mc / (state.rho[i] * a * a);
  };
  const int j_end = bc.outlet_pressure ? n : n - 1;
  for (int j = 1; j <= j_end; ++j) {
    const double p_up = p[j - 1];
    const double p_dn = j == n ? *bc.outlet_pressure : p[j];
    const double flux_up = mom_flux(j - 1);
    const double flux_dn = j == n ? mom_flux(n - 1) : mom_flux(j);
    const double rho_f = j == n ? state.rho[n - 1]
                                : 0.5 * (state.rho[j - 1] + state.rho[j]);
    const double mu_f = j == n ? mu[n - 1] : 0.5 * (mu[j - 1] + mu[j]);
    double fric = 0.0;
    if (mf[j] != 0.0) {
      const double re = std::abs(mf[j]) * d / (a * mu_f);
      const double f = friction_factor(re, geom.wall_roughness / d);
      const double u = mf[j] / (rho_f * a);
      fric = f / (2.0 * d) * rho_f * u * std::abs(u);
    }
    out.d_mdot[j] =
        a * ((p_up - p_dn + flux_up - flux_dn) / dz - fric -
             rho_f * geom.gravity * std::cos(geom.inclination));
  }
  return true;
}

bool thermal_channel_rhs(const ChannelGeometry& geom, const GasModel& gas,
                         const GasComposition& comp, double mdot,
                         double t_inlet, double pressure,
                         const Eigen::VectorXd& t_gas,
                         const WallCoupling& walls, Eigen::VectorXd& d_t_gas,
                         Eigen::VectorXd& wall_heat,
                         const Eigen::VectorXd* extra_heat) {
  const int n = geom.axial_cells;
  if (mdot < 0.0 || !std::isfinite(mdot)) return false;
  if (!(pressure > 0.0 && pressure <= kEnvelopePMax)) return false;
  if (!(t_inlet >= kEnvelopeTMin && t_inlet <= kEnvelopeTMax)) return false;
  const double a = geom.flow_area();
  const double vol = geom.cell_volume();

  d_t_gas.resize(n);
  wall_heat.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!(t_gas[i] >= kEnvelopeTMin && t_gas[i] <= kEnvelopeTMax)) return false;
    GasState gs{t_gas[i], pressure};
    const auto props = gas.properties(comp, gs);
    double q = 0.0;  // W/m^3
    if (walls.inner_active) {
      const double theta = walls.t_inner[i] / t_gas[i];
      const double hc = heat_transfer_coefficient(geom, props, mdot, theta);
      q += wall_heat_flux(hc, geom.r_in, walls.t_inner[i], t_gas[i], a);
    }
    if (walls.outer_active) {
      const double theta = walls.t_outer[i] / t_gas[i];
      const double hc = heat_transfer_coefficient(geom, props, mdot, theta);
      q += wall_heat_flux(hc, geom.r_out, walls.t_outer[i], t_gas[i], a);
    }
    wall_heat[i] = q * vol;
    const double q_ext = extra_heat ? (*extra_heat)[i] : 0.0;
    const double t_up = i == 0 ? t_inlet : t_gas[i - 1];
    d_t_gas[i] =
        (mdot * props.cp * (t_up - t_gas[i]) + wall_heat[i] + q_ext) /
        (props.density * vol * props.cp);
  }
  return true;
}

}  // namespace brayton
