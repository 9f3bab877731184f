#include "brayton/plant.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace brayton {


namespace {

double clamp_envelope_t(double t) {
  return std::clamp(t, kEnvelopeTMin, kEnvelopeTMax);
}

// Per-segment hydraulic summary for the quasi-steady loop flow solve: bulk
// viscosity is pressure-independent, density scales linearly with the local
// pressure around the reference state.
struct Segment {
  const ChannelGeometry* geom = nullptr;
  int count = 1;
  double mu = 0.0;
  double rho_ref = 0.0;
  double p_ref = 0.0;
};

double segment_drop(const Segment& s, double w_total, double p) {
  if (!(w_total > 0.0)) return 0.0;
  const double m = w_total / s.count;
  const double a = s.geom->flow_area();
  const double d = s.geom->hydraulic_diameter();
  const double re = std::max(m * d / (a * s.mu), 1e-3);
  const double f = friction_factor(re, s.geom->wall_roughness / d);
  const double rho = s.rho_ref * p / s.p_ref;
  const double u = m / (rho * a);
  return f * s.geom->length / d * 0.5 * rho * u * u;
}

double rpm_to_rad(double rpm) { return rpm * 2.0 * M_PI / 60.0; }
double rad_to_rpm(double w) { return w * 60.0 / (2.0 * M_PI); }

}  // namespace

void PlantConfig::validate() const {
  kinetics.validate();
  feedback.validate();
  core.validate();
  recuperator.validate();
  cooler.validate();
  if (recuperator_channels < 1 || cooler_tubes < 1)
    throw std::invalid_argument("parallel channel counts must be >= 1");
  if (!(rated_rpm > 0.0) || !(shaft_inertia > 0.0))
    throw std::invalid_argument("shaft parameters must be positive");
  if (!(min_speed_fraction > 0.0 && min_speed_fraction < 1.0))
    throw std::invalid_argument("min_speed_fraction must lie in (0, 1)");
  if (!(max_flow > 0.0))
    throw std::invalid_argument("max_flow must be positive");
  if (!(initial_pressure > 0.0 && initial_pressure <= kEnvelopePMax))
    throw std::invalid_argument("initial pressure outside envelope");
  if (!(initial_temperature >= kEnvelopeTMin &&
        initial_temperature <= kEnvelopeTMax))
    throw std::invalid_argument("initial temperature outside envelope");
  if (initial_power < 0.0)
    throw std::invalid_argument("initial power must be >= 0");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_step > 0.0) ||
      !(sample_dt > 0.0))
    throw std::invalid_argument("integrator settings must be positive");
}

struct PlantModel::LoopFlow {
  bool flowing = false;
  bool surge = false;
  double w = 0.0;
  double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0, p5 = 0.0, p6 = 0.0;
  double tr_c = 1.0, tr_t = 1.0;
};

PlantModel::PlantModel(const PlantConfig& cfg)
    : cfg_(cfg),
      gas_(GasModel::from_file(cfg.gas_file)),
      comp_(GasComposition::from_molar_mass(cfg.molar_mass_g_mol)),
      comp_map_(TurboMap::from_file(cfg.compressor_map_file)),
      turb_map_(TurboMap::from_file(cfg.turbine_map_file)) {
  cfg_.validate();
  if (comp_map_.kind() != MachineKind::compressor)
    throw std::invalid_argument("compressor map file has the wrong kind");
  if (turb_map_.kind() != MachineKind::turbine)
    throw std::invalid_argument("turbine map file has the wrong kind");

  core_gas_geom_.r_in = cfg_.core.clad_outer_radius;
  core_gas_geom_.r_out = cfg_.core.coolant_channel_radius;
  core_gas_geom_.length = cfg_.core.active_height;
  core_gas_geom_.axial_cells = cfg_.core.axial_cells;
  core_gas_geom_.validate();

  const int rings = cfg_.core.ring_count;
  const int nr = cfg_.core.radial_fuel_nodes;
  const int nz = cfg_.core.axial_cells;
  const int nrec = cfg_.recuperator.cells();
  const int ncool = cfg_.cooler.geom.axial_cells;

  off_fuel_ = 1 + kDelayedGroups;
  off_block_ = off_fuel_ + rings * nr * nz;
  off_core_gas_ = off_block_ + rings * nz;
  off_rec_hot_ = off_core_gas_ + rings * nz;
  off_rec_cold_ = off_rec_hot_ + nrec;
  off_rec_wall_ = off_rec_cold_ + nrec;
  off_cooler_ = off_rec_wall_ + nrec;
  off_shaft_ = off_cooler_ + ncool;
  n_states_ = off_shaft_ + (cfg_.free_shaft ? 1 : 0);

  if (cfg_.inventory > 0.0) {
    inventory_ = cfg_.inventory;
  } else {
    // cold isothermal calibration: uniform initial pressure everywhere
    const double rho = gas_.density(
        comp_, {cfg_.initial_temperature, cfg_.initial_pressure});
    double vol = 0.0;
    vol += core_gas_geom_.cell_volume() * nz * cfg_.core.total_channels();
    vol += cfg_.recuperator.hot.cell_volume() * nrec *
           cfg_.recuperator_channels;
    vol += cfg_.recuperator.cold.cell_volume() * nrec *
           cfg_.recuperator_channels;
    vol += cfg_.cooler.geom.cell_volume() * ncool * cfg_.cooler_tubes;
    inventory_ = rho * vol;
  }
}

int PlantModel::state_size() const { return n_states_; }

Eigen::VectorXd PlantModel::initial_state() const {
  Eigen::VectorXd y = Eigen::VectorXd::Constant(n_states_,
                                                cfg_.initial_temperature);
  const auto kin = equilibrium_init(cfg_.kinetics, cfg_.initial_power);
  y[0] = kin.fission_power;
  for (int i = 0; i < kDelayedGroups; ++i) y[1 + i] = kin.precursors[i];
  if (cfg_.free_shaft) y[off_shaft_] = 5.0;  // rad/s, above the 1/omega floor
  return y;
}

Eigen::VectorXd PlantModel::rated_guess() const {
  Eigen::VectorXd y = initial_state();
  const int rings = cfg_.core.ring_count;
  const int nr = cfg_.core.radial_fuel_nodes;
  const int nz = cfg_.core.axial_cells;
  const int nrec = cfg_.recuperator.cells();
  const int ncool = cfg_.cooler.geom.axial_cells;

  const double p0 = 416e3;
  const auto kin = equilibrium_init(cfg_.kinetics, p0);
  y[0] = kin.fission_power;
  for (int i = 0; i < kDelayedGroups; ++i) y[1 + i] = kin.precursors[i];

  auto ramp = [](double a, double b, int i, int n) {
    return a + (b - a) * (i + 0.5) / n;
  };
  for (int r = 0; r < rings; ++r)
    for (int z = 0; z < nz; ++z) {
      const double tg = ramp(790.0, 1080.0, z, nz);
      y[off_core_gas_ + r * nz + z] = tg;
      y[off_block_ + r * nz + z] = tg + 15.0;
      for (int k = 0; k < nr; ++k)
        y[off_fuel_ + (r * nr + k) * nz + z] = tg + 150.0;
    }
  for (int i = 0; i < nrec; ++i) {
    y[off_rec_hot_ + i] = ramp(875.0, 530.0, i, nrec);
    y[off_rec_cold_ + i] = ramp(442.0, 790.0, i, nrec);
  }
  for (int i = 0; i < nrec; ++i)
    y[off_rec_wall_ + i] =
        0.5 * (y[off_rec_hot_ + i] + y[off_rec_cold_ + nrec - 1 - i]);
  for (int i = 0; i < ncool; ++i)
    y[off_cooler_ + i] = ramp(526.0, 319.0, i, ncool);
  if (cfg_.free_shaft) y[off_shaft_] = rpm_to_rad(cfg_.rated_rpm);
  return y;
}

bool PlantModel::solve_loop(double n_rpm, const Eigen::VectorXd& y,
                            LoopFlow& flow) const {
  const int rings = cfg_.core.ring_count;
  const int nz = cfg_.core.axial_cells;
  const int nrec = cfg_.recuperator.cells();
  const int ncool = cfg_.cooler.geom.axial_cells;

  const double t1 = y[off_cooler_ + ncool - 1];
  double t4 = 0.0, t_core_mean = 0.0;
  for (int r = 0; r < rings; ++r) {
    const double wgt = double(cfg_.core.channels_per_ring[r]) /
                       cfg_.core.total_channels();
    t4 += wgt * y[off_core_gas_ + r * nz + nz - 1];
    for (int z = 0; z < nz; ++z)
      t_core_mean += wgt * y[off_core_gas_ + r * nz + z] / nz;
  }
  const double t_rc_mean =
      y.segment(off_rec_cold_, nrec).mean();
  const double t_rh_mean = y.segment(off_rec_hot_, nrec).mean();
  const double t_cool_mean = y.segment(off_cooler_, ncool).mean();

  // loop gas mass for segment pressures expressed as ratios to p1
  auto loop_mass = [&](double p1, double f_core, double f_rc, double f_rh,
                       double f_cool) {
    double m = 0.0;
    const double v_core =
        core_gas_geom_.cell_volume();
    for (int r = 0; r < rings; ++r)
      for (int z = 0; z < nz; ++z)
        m += gas_.density(comp_, {clamp_envelope_t(y[off_core_gas_ + r * nz + z]),
                                  f_core * p1}) *
             v_core * cfg_.core.channels_per_ring[r];
    const double v_rh = cfg_.recuperator.hot.cell_volume();
    const double v_rc = cfg_.recuperator.cold.cell_volume();
    for (int i = 0; i < nrec; ++i) {
      m += gas_.density(comp_, {clamp_envelope_t(y[off_rec_hot_ + i]),
                                f_rh * p1}) *
           v_rh * cfg_.recuperator_channels;
      m += gas_.density(comp_, {clamp_envelope_t(y[off_rec_cold_ + i]),
                                f_rc * p1}) *
           v_rc * cfg_.recuperator_channels;
    }
    const double v_cool = cfg_.cooler.geom.cell_volume();
    for (int i = 0; i < ncool; ++i)
      m += gas_.density(comp_, {clamp_envelope_t(y[off_cooler_ + i]),
                                f_cool * p1}) *
           v_cool * cfg_.cooler_tubes;
    return m;
  };

  auto anchor_pressure = [&](double p_start, double f_core, double f_rc,
                             double f_rh, double f_cool) {
    double p = p_start;
    for (int it = 0; it < 3; ++it) {
      const double m = loop_mass(p, f_core, f_rc, f_rh, f_cool);
      if (!(m > 0.0)) return 0.0;
      p *= inventory_ / m;
      if (!(p > 0.0 && p <= kEnvelopePMax)) return 0.0;
    }
    return p;
  };

  flow = LoopFlow{};
  const double fraction = n_rpm / cfg_.rated_rpm;
  if (fraction < cfg_.min_speed_fraction) {
    const double p = anchor_pressure(cfg_.initial_pressure, 1, 1, 1, 1);
    if (!(p > 0.0)) return false;
    flow.p1 = flow.p2 = flow.p3 = flow.p4 = flow.p5 = flow.p6 = p;
    return true;
  }

  flow.flowing = true;
  const double rs = comp_.specific_gas_constant();
  const double gamma1 =
      gas_.properties(comp_, {clamp_envelope_t(t1), cfg_.initial_pressure})
          .gamma;
  const double gamma4 =
      gas_.properties(comp_, {clamp_envelope_t(t4), cfg_.initial_pressure})
          .gamma;

  double p1 = cfg_.initial_pressure;
  double f_core = 1.0, f_rc = 1.0, f_rh = 1.0, f_cool = 1.0;
  MachineRatios rc, rt;

  for (int outer = 0; outer < 3; ++outer) {
    p1 = anchor_pressure(p1, f_core, f_rc, f_rh, f_cool);
    if (!(p1 > 0.0)) return false;

    // segment hydraulics at current reference pressures
    auto make_seg = [&](const ChannelGeometry& g, int count, double tmean,
                        double p_ref) {
      Segment s;
      s.geom = &g;
      s.count = count;
      const auto pr = gas_.properties(comp_, {clamp_envelope_t(tmean), p_ref});
      s.mu = pr.viscosity;
      s.rho_ref = pr.density;
      s.p_ref = p_ref;
      return s;
    };
    const Segment seg_rc = make_seg(cfg_.recuperator.cold,
                                    cfg_.recuperator_channels, t_rc_mean,
                                    f_rc * p1);
    const Segment seg_core = make_seg(core_gas_geom_,
                                      cfg_.core.total_channels(),
                                      t_core_mean, f_core * p1);
    const Segment seg_rh = make_seg(cfg_.recuperator.hot,
                                    cfg_.recuperator_channels, t_rh_mean,
                                    f_rh * p1);
    const Segment seg_cool = make_seg(cfg_.cooler.geom, cfg_.cooler_tubes,
                                      t_cool_mean, f_cool * p1);

    // residual of the pressure loop closure; out-of-map or degenerate
    // pressures count as "flow too high" (strongly negative)
    auto residual = [&](double w) -> double {
      const auto cc = corrected_quantities(w, clamp_envelope_t(t1), p1,
                                           n_rpm, comp_map_.r_tip(), rs,
                                           gamma1);
      MachineRatios r_c;
      if (!comp_map_.ratios(cc.m_corr, cc.n_corr, r_c)) return -p1;
      const double p2 = p1 * r_c.pressure_ratio;
      const double p3 = p2 - segment_drop(seg_rc, w, p2);
      if (!(p3 > 1e3)) return -p1;
      const double p4 = p3 - segment_drop(seg_core, w, p3);
      if (!(p4 > 1e3)) return -p1;
      const auto ct = corrected_quantities(w, clamp_envelope_t(t4), p4,
                                           n_rpm, turb_map_.r_tip(), rs,
                                           gamma4);
      MachineRatios r_t;
      if (!turb_map_.ratios(ct.m_corr, ct.n_corr, r_t)) return -p1;
      const double p5 = p4 / r_t.pressure_ratio;
      const double p6 = p5 - segment_drop(seg_rh, w, p5);
      if (!(p6 > 1e3)) return -p1;
      const double p1r = p6 - segment_drop(seg_cool, w, p6);
      return p1r - p1;
    };

    // scan upward for a positive residual (loop pressurizes) followed by a
    // negative one; very low flows may sit below the map grid and read as
    // invalid, so they cannot seed the bracket
    double lo = -1.0, hi = -1.0;
    for (double w = 1e-4; w <= cfg_.max_flow; w *= 1.5) {
      const double r = residual(w);
      if (r > 0.0) {
        lo = w;
      } else if (lo >= 0.0) {
        hi = w;
        break;
      }
    }
    if (lo < 0.0 || hi < 0.0) return false;  // loop never closes
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (residual(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    const double w = 0.5 * (lo + hi);

    // final station states at the solved flow
    const auto cc = corrected_quantities(w, clamp_envelope_t(t1), p1, n_rpm,
                                         comp_map_.r_tip(), rs, gamma1);
    if (!comp_map_.ratios(cc.m_corr, cc.n_corr, rc)) return false;
    flow.p1 = p1;
    flow.p2 = p1 * rc.pressure_ratio;
    flow.p3 = flow.p2 - segment_drop(seg_rc, w, flow.p2);
    flow.p4 = flow.p3 - segment_drop(seg_core, w, flow.p3);
    const auto ct = corrected_quantities(w, clamp_envelope_t(t4), flow.p4,
                                         n_rpm, turb_map_.r_tip(), rs,
                                         gamma4);
    if (!turb_map_.ratios(ct.m_corr, ct.n_corr, rt)) return false;
    flow.p5 = flow.p4 / rt.pressure_ratio;
    flow.p6 = flow.p5 - segment_drop(seg_rh, w, flow.p5);
    flow.w = w;
    flow.tr_c = rc.temperature_ratio;
    flow.tr_t = rt.temperature_ratio;
    flow.surge = rc.surge;

    f_core = 0.5 * (flow.p3 + flow.p4) / p1;
    f_rc = 0.5 * (flow.p2 + flow.p3) / p1;
    f_rh = 0.5 * (flow.p5 + flow.p6) / p1;
    f_cool = 0.5 * (flow.p6 + flow.p1) / p1;
  }
  return true;
}

bool PlantModel::rhs(double t, const ControlSchedule& schedule,
                     const Eigen::VectorXd& y, Eigen::VectorXd& dy,
                     PlantSample* sample) const {
  try {
    if (y.size() != n_states_)
      throw std::invalid_argument("plant state size mismatch");
    for (int i = 0; i < n_states_; ++i)
      if (!std::isfinite(y[i])) return false;
    // solid temperatures may run hotter than the gas envelope but must stay
    // physical
    for (int i = off_fuel_; i < off_core_gas_; ++i)
      if (!(y[i] > 200.0 && y[i] < 3500.0)) return false;

    const int rings = cfg_.core.ring_count;
    const int nr = cfg_.core.radial_fuel_nodes;
    const int nz = cfg_.core.axial_cells;
    const int nrec = cfg_.recuperator.cells();
    const int ncool = cfg_.cooler.geom.axial_cells;

    const auto sig = evaluate_at(schedule, std::max(t, 0.0));

    double omega, n_rpm;
    if (cfg_.free_shaft) {
      omega = y[off_shaft_];
      if (!(omega > 0.0)) return false;
      n_rpm = rad_to_rpm(omega);
    } else {
      omega = rpm_to_rad(sig.speed_fraction * cfg_.rated_rpm);
      n_rpm = sig.speed_fraction * cfg_.rated_rpm;
    }

    LoopFlow fl;
    if (!solve_loop(n_rpm, y, fl)) return false;
    if (fl.surge) return false;

    // station temperatures
    const double t1 = y[off_cooler_ + ncool - 1];
    double t4 = 0.0;
    for (int r = 0; r < rings; ++r)
      t4 += double(cfg_.core.channels_per_ring[r]) /
            cfg_.core.total_channels() * y[off_core_gas_ + r * nz + nz - 1];
    const double t3 = y[off_rec_cold_ + nrec - 1];
    const double t6 = y[off_rec_hot_ + nrec - 1];
    const double t2 = fl.flowing ? t1 * fl.tr_c : t1;
    const double t5 = fl.flowing ? t4 / fl.tr_t : t4;  // turbine TR = T_in/T_out

    dy.setZero(n_states_);

    // --- kinetics ---
    KineticsState kin;
    kin.fission_power = std::max(y[0], 0.0);
    for (int i = 0; i < kDelayedGroups; ++i)
      kin.precursors[i] = std::max(y[1 + i], 0.0);

    // --- core solids, two htc passes so the Nusselt wall correction uses
    // the massless-wall surface temperatures it produces ---
    SolidField solids;
    solids.fuel.assign(rings, Eigen::MatrixXd(nr, nz));
    solids.block.resize(rings, nz);
    for (int r = 0; r < rings; ++r) {
      for (int k = 0; k < nr; ++k)
        for (int z = 0; z < nz; ++z)
          solids.fuel[r](k, z) = y[off_fuel_ + (r * nr + k) * nz + z];
      for (int z = 0; z < nz; ++z)
        solids.block(r, z) = y[off_block_ + r * nz + z];
    }
    const auto q_f = distribute_power(kin.fission_power, cfg_.core);
    const double p_core = 0.5 * (fl.p3 + fl.p4);
    const double m_ch = fl.w / cfg_.core.total_channels();

    CoolantCoupling coupling;
    coupling.t_gas.resize(rings, nz);
    coupling.htc_clad.resize(rings, nz);
    coupling.htc_block.resize(rings, nz);
    std::vector<std::vector<GasProperties>> core_props(
        rings, std::vector<GasProperties>(nz));
    for (int r = 0; r < rings; ++r)
      for (int z = 0; z < nz; ++z) {
        const double tg = y[off_core_gas_ + r * nz + z];
        if (!(tg >= kEnvelopeTMin && tg <= kEnvelopeTMax)) return false;
        coupling.t_gas(r, z) = tg;
        core_props[r][z] = gas_.properties(comp_, {tg, p_core});
        const double h = heat_transfer_coefficient(core_gas_geom_,
                                                   core_props[r][z], m_ch,
                                                   1.0);
        coupling.htc_clad(r, z) = h;
        coupling.htc_block(r, z) = h;
      }
    CoreWallReport report;
    fuel_conduction_rhs(cfg_.core, solids, q_f, coupling, &report);
    for (int r = 0; r < rings; ++r)
      for (int z = 0; z < nz; ++z) {
        const double tg = coupling.t_gas(r, z);
        const double th_c =
            std::max(report.clad_surface_temp(r, z), 1.0) / tg;
        const double th_b =
            std::max(report.block_surface_temp(r, z), 1.0) / tg;
        coupling.htc_clad(r, z) = heat_transfer_coefficient(
            core_gas_geom_, core_props[r][z], m_ch, th_c);
        coupling.htc_block(r, z) = heat_transfer_coefficient(
            core_gas_geom_, core_props[r][z], m_ch, th_b);
      }
    const SolidDeriv d_solids =
        fuel_conduction_rhs(cfg_.core, solids, q_f, coupling, &report);
    for (int r = 0; r < rings; ++r) {
      for (int k = 0; k < nr; ++k)
        for (int z = 0; z < nz; ++z)
          dy[off_fuel_ + (r * nr + k) * nz + z] = d_solids.fuel[r](k, z);
      for (int z = 0; z < nz; ++z)
        dy[off_block_ + r * nz + z] = d_solids.block(r, z);
    }

    // --- core coolant: advection plus the exact solid-side wall heat ---
    WallCoupling no_walls;
    const double q_core = report.heat_to_coolant.sum();
    for (int r = 0; r < rings; ++r) {
      Eigen::VectorXd t_row(nz), extra(nz), d_row, wh;
      for (int z = 0; z < nz; ++z) {
        t_row[z] = y[off_core_gas_ + r * nz + z];
        extra[z] =
            report.heat_to_coolant(r, z) / cfg_.core.channels_per_ring[r];
      }
      const double t_in = fl.flowing ? t3 : t_row[0];
      if (!thermal_channel_rhs(core_gas_geom_, gas_, comp_, m_ch, t_in,
                               p_core, t_row, no_walls, d_row, wh, &extra))
        return false;
      for (int z = 0; z < nz; ++z) dy[off_core_gas_ + r * nz + z] = d_row[z];
    }

    // --- recuperator ---
    const double w_rec = fl.w / cfg_.recuperator_channels;
    Eigen::VectorXd d_rh, d_rcold, d_rwall;
    double q_rec_hot = 0.0, q_rec_cold = 0.0;
    {
      const double t_hot_in = fl.flowing ? t5 : y[off_rec_hot_];
      const double t_cold_in = fl.flowing ? t2 : y[off_rec_cold_];
      if (!recuperator_rhs(cfg_.recuperator, gas_, comp_, w_rec, t_hot_in,
                           0.5 * (fl.p5 + fl.p6), w_rec, t_cold_in,
                           0.5 * (fl.p2 + fl.p3),
                           y.segment(off_rec_hot_, nrec),
                           y.segment(off_rec_cold_, nrec),
                           y.segment(off_rec_wall_, nrec), d_rh, d_rcold,
                           d_rwall, &q_rec_hot, &q_rec_cold))
        return false;
      dy.segment(off_rec_hot_, nrec) = d_rh;
      dy.segment(off_rec_cold_, nrec) = d_rcold;
      dy.segment(off_rec_wall_, nrec) = d_rwall;
    }

    // --- cooler: massless radiating wall solved per cell, two passes so h
    // and the wall temperature are mutually consistent ---
    const double w_tube = fl.w / cfg_.cooler_tubes;
    const double p_cool = 0.5 * (fl.p6 + fl.p1);
    const double a_ts_cell = cfg_.cooler.pipe_wall_area / ncool;
    Eigen::VectorXd t_cool(ncool), extra_cool(ncool);
    for (int i = 0; i < ncool; ++i) {
      t_cool[i] = y[off_cooler_ + i];
      if (!(t_cool[i] >= kEnvelopeTMin && t_cool[i] <= kEnvelopeTMax))
        return false;
      const auto props = gas_.properties(comp_, {t_cool[i], p_cool});
      double h = heat_transfer_coefficient(cfg_.cooler.geom, props, w_tube,
                                           1.0);
      auto t_out = cooler_wall_balance(cfg_.cooler, h, t_cool[i],
                                       sig.sink_temperature);
      if (!t_out) return false;
      h = heat_transfer_coefficient(cfg_.cooler.geom, props, w_tube,
                                    std::max(*t_out, 1.0) / t_cool[i]);
      t_out = cooler_wall_balance(cfg_.cooler, h, t_cool[i],
                                  sig.sink_temperature);
      if (!t_out) return false;
      extra_cool[i] = h * a_ts_cell * (*t_out - t_cool[i]);
    }
    {
      Eigen::VectorXd d_cool, wh;
      const double t_in = fl.flowing ? t6 : t_cool[0];
      if (!thermal_channel_rhs(cfg_.cooler.geom, gas_, comp_, w_tube, t_in,
                               p_cool, t_cool, no_walls, d_cool, wh,
                               &extra_cool))
        return false;
      dy.segment(off_cooler_, ncool) = d_cool;
    }
    const double p_radiated = -extra_cool.sum() * cfg_.cooler_tubes;

    // --- kinetics with feedback ---
    const auto [t_fuel_avg, t_block_avg] =
        core_average_temps(solids, cfg_.core);
    const double rho = total_reactivity(sig.reactivity_pcm * kPcm,
                                        t_fuel_avg, t_block_avg,
                                        cfg_.feedback);
    const auto kd = kinetics_rhs(kin, rho, cfg_.kinetics);
    dy[0] = kd.d_power;
    for (int i = 0; i < kDelayedGroups; ++i)
      dy[1 + i] = kd.d_precursors[i];

    // --- shaft / generator ---
    double p_t = 0.0, p_c = 0.0;
    if (fl.flowing) {
      const double cp1 = gas_.heat_capacity_cp(comp_, {t1, fl.p1});
      const double cp2 =
          gas_.heat_capacity_cp(comp_, {clamp_envelope_t(t2), fl.p2});
      const double cp4 = gas_.heat_capacity_cp(comp_, {t4, fl.p4});
      const double cp5 =
          gas_.heat_capacity_cp(comp_, {clamp_envelope_t(t5), fl.p5});
      const auto pw = component_powers(fl.w, cp4, t4, cp5, t5, cp1, t1, cp2,
                                       t2);
      p_t = pw.turbine;
      p_c = pw.compressor;
    }
    double p_alt = 0.0;
    if (cfg_.free_shaft) {
      ShaftState sh{omega, cfg_.shaft_inertia};
      dy[off_shaft_] = shaft_rhs(p_t, p_c, 0.0, sh);
    } else {
      // speed-commanded: the generator/battery takes up the slack,
      // including the scheduled shaft acceleration
      const double dt_fd = 0.5;
      const double w_lo = evaluate_at(schedule, std::max(t - dt_fd, 0.0))
                              .speed_fraction;
      const double w_hi =
          evaluate_at(schedule, std::max(t, 0.0) + dt_fd).speed_fraction;
      const double domega = rpm_to_rad((w_hi - w_lo) * cfg_.rated_rpm) /
                            (2.0 * dt_fd);
      p_alt = p_t - p_c - cfg_.shaft_inertia * omega * domega;
    }

    if (sample) {
      sample->t = t;
      sample->p_fiss = kin.fission_power;
      sample->t_fuel_avg = t_fuel_avg;
      sample->t_block_avg = t_block_avg;
      sample->t_core_in = t3;
      sample->t_core_out = t4;
      sample->p_core_in = fl.p3;
      sample->p_core_out = fl.p4;
      sample->t_turb_in = t4;
      sample->t_turb_out = t5;
      sample->p_turb_in = fl.p4;
      sample->p_turb_out = fl.p5;
      sample->t_comp_in = t1;
      sample->t_comp_out = t2;
      sample->p_comp_in = fl.p1;
      sample->p_comp_out = fl.p2;
      sample->mdot = fl.w;
      sample->omega = omega;
      sample->p_turbine = p_t;
      sample->p_compressor = p_c;
      sample->p_alt = p_alt;
      sample->q_core = q_core;
      sample->p_radiated = p_radiated;
      sample->rho_in_pcm = sig.reactivity_pcm;
      sample->t_space = sig.sink_temperature;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

namespace {

Eigen::VectorXd plant_scale(const PlantConfig& cfg, int n_states,
                            int off_shaft, bool free_shaft) {
  Eigen::VectorXd s = Eigen::VectorXd::Constant(n_states, 500.0);
  const double p_scale = std::max(cfg.initial_power, 1.0);
  s[0] = p_scale;
  for (int i = 0; i < kDelayedGroups; ++i)
    s[1 + i] = cfg.kinetics.beta[size_t(i)] * p_scale /
               (cfg.kinetics.generation_time *
                cfg.kinetics.lambda[size_t(i)]);
  if (free_shaft) s[off_shaft] = rpm_to_rad(cfg.rated_rpm);
  return s;
}

}  // namespace

PlantRunResult PlantModel::integrate(const ControlSchedule& schedule,
                                     double horizon,
                                     const Eigen::VectorXd* y0) const {
  if (!(horizon > 0.0))
    throw std::invalid_argument("integration horizon must be > 0");
  schedule.validate();

  Eigen::VectorXd y = y0 ? *y0 : initial_state();
  OdeOptions opts;
  opts.rel_tol = cfg_.rel_tol;
  opts.abs_tol = cfg_.abs_tol;
  opts.max_step = cfg_.max_step;
  opts.initial_step = 1e-4;
  opts.scale = plant_scale(cfg_, n_states_, off_shaft_, cfg_.free_shaft);
  StiffIntegrator integ(opts);

  PlantRunResult res;
  auto rhs_fn = [&](double tt, const Eigen::VectorXd& yy,
                    Eigen::VectorXd& dd) { return rhs(tt, schedule, yy, dd); };
  Eigen::VectorXd scratch;
  auto observer = [&](double tt, const Eigen::VectorXd& yy) {
    PlantSample s;
    if (rhs(tt, schedule, yy, scratch, &s)) {
      s.t = tt;
      res.series.samples.push_back(s);
    }
  };
  const auto r =
      integ.integrate(rhs_fn, 0.0, horizon, y, cfg_.sample_dt, observer);
  res.ok = r.ok;
  if (!r.ok && r.failure) {
    res.failure_time = r.failure->time;
    res.reason = r.failure->reason;
  }
  return res;
}

SteadyResult PlantModel::steady_state(const ControlSignals& op,
                                      double max_pseudo_time,
                                      const Eigen::VectorXd* guess,
                                      double threshold) const {
  ControlSchedule sched;
  sched.reactivity.add(0.0, op.reactivity_pcm);
  sched.speed.add(0.0, op.speed_fraction);
  sched.sink.add(0.0, op.sink_temperature);
  sched.validate();

  Eigen::VectorXd y = guess ? *guess : initial_state();
  OdeOptions opts;
  opts.rel_tol = cfg_.rel_tol;
  opts.abs_tol = cfg_.abs_tol;
  opts.max_step = cfg_.max_step;
  opts.initial_step = 1e-4;
  opts.scale = plant_scale(cfg_, n_states_, off_shaft_, cfg_.free_shaft);
  StiffIntegrator integ(opts);

  SteadyResult out;
  const double chunk = 500.0;
  double t = 0.0;
  Eigen::VectorXd dy;
  while (t < max_pseudo_time) {
    const double t_next = std::min(t + chunk, max_pseudo_time);
    auto r = integ.integrate(
        [&](double tt, const Eigen::VectorXd& yy, Eigen::VectorXd& dd) {
          return rhs(tt, sched, yy, dd);
        },
        t, t_next, y);
    if (!r.ok) {
      out.message = "integration failed: " +
                    (r.failure ? r.failure->reason : std::string("unknown"));
      return out;
    }
    t = t_next;
    if (!rhs(t, sched, y, dy)) {
      out.message = "state invalid after relaxation chunk";
      return out;
    }
    double worst = 0.0;
    for (int i = 0; i < n_states_; ++i)
      worst = std::max(worst,
                       std::abs(dy[i]) / std::max(std::abs(y[i]),
                                                  opts.scale[i]));
    if (worst < threshold) {
      PlantSample s;
      rhs(t, sched, y, dy, &s);
      s.t = t;
      out.ok = true;
      out.state = y;
      out.sample = s;
      out.message = "converged";
      return out;
    }
  }
  out.message = "no steady state within the pseudo-time budget";
  return out;
}

const std::vector<std::string>& plant_columns() {
  static const std::vector<std::string> cols = {
      "t",          "P_fiss",     "T_fuel_avg", "T_block_avg",
      "T_core_in",  "T_core_out", "p_core_in",  "p_core_out",
      "T_turb_in",  "T_turb_out", "p_turb_in",  "p_turb_out",
      "T_comp_in",  "T_comp_out", "p_comp_in",  "p_comp_out",
      "mdot",       "omega",      "P_turbine",  "P_compressor",
      "P_alt",      "Q_core",     "P_radiated", "rho_in_pcm",
      "T_space"};
  return cols;
}

std::vector<double> sample_row(const PlantSample& s) {
  return {s.t,          s.p_fiss,     s.t_fuel_avg, s.t_block_avg,
          s.t_core_in,  s.t_core_out, s.p_core_in,  s.p_core_out,
          s.t_turb_in,  s.t_turb_out, s.p_turb_in,  s.p_turb_out,
          s.t_comp_in,  s.t_comp_out, s.p_comp_in,  s.p_comp_out,
          s.mdot,       s.omega,      s.p_turbine,  s.p_compressor,
          s.p_alt,      s.q_core,     s.p_radiated, s.rho_in_pcm,
          s.t_space};
}

namespace {

// interpolated upward crossing of `value` through `threshold`
std::optional<double> first_crossing(const TimeSeries& ts,
                                     double (*get)(const PlantSample&),
                                     double threshold) {
  for (size_t i = 0; i < ts.samples.size(); ++i) {
    const double v = get(ts.samples[i]);
    if (v >= threshold) {
      if (i == 0) return ts.samples[0].t;
      const double v0 = get(ts.samples[i - 1]);
      const double t0 = ts.samples[i - 1].t, t1 = ts.samples[i].t;
      if (v == v0) return t1;
      return t0 + (threshold - v0) / (v - v0) * (t1 - t0);
    }
  }
  return std::nullopt;
}

}  // namespace

StartupMetrics startup_metrics(const PlantRunResult& run, double horizon,
                               double penalty_margin, double power_threshold,
                               double outlet_threshold) {
  StartupMetrics m;
  const double penalty = horizon + penalty_margin;
  const auto& ts = run.series;

  if (!run.ok || ts.samples.size() < 2) {
    m.t_power = m.t_outlet = m.t_energy_balance = penalty;
    m.penalized = true;
    return m;
  }

  auto f1 = first_crossing(ts, [](const PlantSample& s) { return s.p_fiss; },
                           power_threshold);
  auto f2 = first_crossing(
      ts, [](const PlantSample& s) { return s.t_core_out; },
      outlet_threshold);
  m.t_power = f1.value_or(penalty);
  m.t_outlet = f2.value_or(penalty);
  m.penalized = !f1 || !f2;

  m.min_p_alt = 0.0;
  m.battery_energy = 0.0;
  for (size_t i = 0; i < ts.samples.size(); ++i) {
    m.min_p_alt = std::min(m.min_p_alt, ts.samples[i].p_alt);
    if (i > 0) {
      const double dt = ts.samples[i].t - ts.samples[i - 1].t;
      const double a = std::min(ts.samples[i - 1].p_alt, 0.0);
      const double b = std::min(ts.samples[i].p_alt, 0.0);
      m.battery_energy += 0.5 * (a + b) * dt;
    }
  }

  // first return to P_alt >= 0 after the battery first discharges
  size_t first_neg = ts.samples.size();
  for (size_t i = 0; i < ts.samples.size(); ++i)
    if (ts.samples[i].p_alt < 0.0) {
      first_neg = i;
      break;
    }
  if (first_neg == ts.samples.size()) {
    m.t_energy_balance = ts.samples.front().t;
  } else {
    m.t_energy_balance = penalty;
    for (size_t i = first_neg + 1; i < ts.samples.size(); ++i)
      if (ts.samples[i].p_alt >= 0.0) {
        const double p0 = ts.samples[i - 1].p_alt, p1 = ts.samples[i].p_alt;
        const double t0 = ts.samples[i - 1].t, t1 = ts.samples[i].t;
        m.t_energy_balance = p1 == p0 ? t1 : t0 - p0 / (p1 - p0) * (t1 - t0);
        break;
      }
  }
  return m;
}

}  // namespace brayton
