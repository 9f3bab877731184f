// Acceptance suite: twelve end-to-end criteria covering gas properties,
// kinetics, channel and heat-exchanger physics, the rated operating point,
// the baseline startup transient, the optimizer, and the command-line tool.
// Prints one PASS/FAIL line per criterion; the exit code is the number of
// failed criteria.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "brayton/channel.hpp"
#include "brayton/control.hpp"
#include "brayton/csv.hpp"
#include "brayton/gas.hpp"
#include "brayton/hx.hpp"
#include "brayton/kinetics.hpp"
#include "brayton/ode.hpp"
#include "brayton/optimize.hpp"
#include "brayton/plant.hpp"

namespace fs = std::filesystem;
using namespace brayton;

namespace {

// ---------------------------------------------------------------------------
// harness

int g_failures = 0;

void run_criterion(int index, const std::string& name,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("criterion %2d %s %s%s%s\n", index, pass ? "PASS" : "FAIL",
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// shared fixtures

const GasModel& gas() {
  static GasModel m = GasModel::from_file(std::string(BRAYTON_DATA_DIR) +
                                          "/gas_coefficients.dat");
  return m;
}

std::string config_path() {
  return std::string(BRAYTON_DATA_DIR) + "/config/default_plant.json";
}

const PlantModel& plant() {
  static PlantConfig cfg = load_plant_config(config_path());
  static PlantModel model(cfg);
  return model;
}

ControlSignals rated_op() {
  const ControlTemplate tmpl = default_template();
  ControlSignals op;
  op.reactivity_pcm = tmpl.total_insertion;
  op.speed_fraction = 1.0;
  op.sink_temperature = tmpl.sink_final;
  return op;
}

const SteadyResult& rated_steady() {
  static SteadyResult r = [] {
    Eigen::VectorXd guess = plant().rated_guess();
    return plant().steady_state(rated_op(), 40000.0, &guess);
  }();
  return r;
}

struct CmdResult {
  int exit_code = -1;
  std::string output;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(BRAYTON_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  CmdResult r;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("brayton_accept_" + name);
  fs::remove_all(dir);
  return dir;
}

double summary_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    double v = 0.0;
    if (word == key && (ls >> v)) return v;
  }
  throw std::runtime_error("missing key " + key);
}

// ---------------------------------------------------------------------------
// criterion 1: transport properties against the shipped reference fixture

bool c1_gas_fixture(std::string& detail) {
  std::ifstream in(std::string(BRAYTON_DATA_DIR) +
                   "/gas_reference_fixture.dat");
  if (!in) throw std::runtime_error("missing gas reference fixture");
  std::string line;
  double worst_mu = 0.0, worst_lam = 0.0;
  std::set<double> masses;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    double m, t, mu_ref, lam_ref;
    is >> m >> t >> mu_ref >> lam_ref;
    const auto c = GasComposition::from_molar_mass(m);
    worst_mu = std::max(
        worst_mu, std::abs(gas().viscosity(c, {t, 2.0e6}) / mu_ref - 1.0));
    worst_lam = std::max(
        worst_lam,
        std::abs(gas().thermal_conductivity(c, {t, 2.0e6}) / lam_ref - 1.0));
    masses.insert(m);
    ++rows;
  }
  detail = "rows " + std::to_string(rows) + ", worst viscosity dev " +
           fmt(100.0 * worst_mu) + "%, worst conductivity dev " +
           fmt(100.0 * worst_lam) + "%";
  return rows >= 27 && masses.size() >= 3 && worst_mu < 0.0051 &&
         worst_lam <= 0.0440;
}

// criterion 2: ideal-gas limits and the compressibility peak location

bool c2_ideal_limits(std::string& detail) {
  bool ok = true;
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto c = GasComposition::from_xenon_fraction(x);
    for (double t : {300.0, 600.0, 1000.0, 1500.0}) {
      ok = ok && std::abs(gas().compressibility(c, {t, 1.0e3}) - 1.0) < 1e-3;
      const double cp_ideal = 2.5 * kGasConstant / c.molar_mass();
      ok = ok &&
           std::abs(gas().heat_capacity_cp(c, {t, 1.0e3}) / cp_ideal - 1.0) <
               5e-3;
    }
  }
  double best_m = 0.0, best_z = -1.0;
  for (double m = 4.1; m <= 131.2; m += 0.05) {
    const auto c = GasComposition::from_molar_mass(m);
    const double z = gas().compressibility(c, {600.0, 2.0e6});
    if (z > best_z) {
      best_z = z;
      best_m = m;
    }
  }
  detail = "Z-peak at " + fmt(best_m) + " g/mol";
  return ok && best_m >= 30.34 && best_m <= 61.07;
}

// criterion 3: point kinetics against closed forms and a fine-step reference

KineticsState kinetics_reference(const KineticsParams& params, KineticsState s,
                                 double rho, double t_end, double dt) {
  auto axpy = [](const KineticsState& st, const KineticsDeriv& d, double a) {
    KineticsState r = st;
    r.fission_power += a * d.d_power;
    for (int i = 0; i < kDelayedGroups; ++i)
      r.precursors[i] += a * d.d_precursors[i];
    return r;
  };
  const long n = long(std::ceil(t_end / dt));
  for (long k = 0; k < n; ++k) {
    const auto k1 = kinetics_rhs(s, rho, params);
    const auto k2 = kinetics_rhs(axpy(s, k1, dt / 2), rho, params);
    const auto k3 = kinetics_rhs(axpy(s, k2, dt / 2), rho, params);
    const auto k4 = kinetics_rhs(axpy(s, k3, dt), rho, params);
    s.fission_power +=
        dt / 6 * (k1.d_power + 2 * k2.d_power + 2 * k3.d_power + k4.d_power);
    for (int i = 0; i < kDelayedGroups; ++i)
      s.precursors[i] += dt / 6 *
                         (k1.d_precursors[i] + 2 * k2.d_precursors[i] +
                          2 * k3.d_precursors[i] + k4.d_precursors[i]);
  }
  return s;
}

bool c3_kinetics(std::string& detail) {
  KineticsParams p;
  p.beta = {0.000215, 0.001424, 0.001274, 0.002568, 0.000748, 0.000271};
  p.lambda = {0.0124, 0.0305, 0.111, 0.301, 1.14, 3.01};
  p.generation_time = 1e-5;
  p.validate();

  // equilibrium drift over 1000 s under the production stiff integrator
  const auto s0 = equilibrium_init(p, 10.0);
  Eigen::VectorXd y(7);
  y[0] = s0.fission_power;
  for (int i = 0; i < 6; ++i) y[i + 1] = s0.precursors[i];
  OdeOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-12;
  opts.scale = y;
  opts.max_step = 10.0;
  StiffIntegrator integ(opts);
  auto rhs = [&](double, const Eigen::VectorXd& v, Eigen::VectorXd& dv) {
    KineticsState st;
    st.fission_power = v[0];
    for (int i = 0; i < 6; ++i) st.precursors[i] = v[i + 1];
    const auto d = kinetics_rhs(st, 0.0, p);
    dv.resize(7);
    dv[0] = d.d_power;
    for (int i = 0; i < 6; ++i) dv[i + 1] = d.d_precursors[i];
    return true;
  };
  const auto res = integ.integrate(rhs, 0.0, 1000.0, y);
  const double drift = std::abs(y[0] / 10.0 - 1.0);
  if (!res.ok || drift >= 1e-8) {
    detail = "equilibrium drift " + fmt(drift);
    return false;
  }

  // prompt-jump plateau for +/-50 and +/-100 pcm against beta/(beta - rho)
  const double beta = p.beta_total();
  double worst = 0.0;
  for (double pcm : {50.0, 100.0, -50.0, -100.0}) {
    const double rho = pcm * kPcm;
    const auto ref = kinetics_reference(p, equilibrium_init(p, 10.0), rho, 0.1,
                                        p.generation_time / 100.0);
    const double expected = beta / (beta - rho) * 10.0;
    worst = std::max(worst, std::abs(ref.fission_power / expected - 1.0));
  }
  detail = "drift " + fmt(drift) + ", worst prompt-jump dev " +
           fmt(100.0 * worst) + "%";
  return worst < 0.01;
}

// criterion 4: channel conservation and friction-factor invariants

bool c4_channel(std::string& detail) {
  // exact laminar value and branch continuity
  if (std::abs(friction_factor(1000.0, 0.0) - 0.064) > 1e-14) {
    detail = "laminar friction factor off";
    return false;
  }
  for (double re : {2300.0, 4000.0}) {
    const double lo = friction_factor(re - 1e-9, 0.0);
    const double hi = friction_factor(re + 1e-9, 0.0);
    if (std::abs(hi / lo - 1.0) > 1e-6) {
      detail = "friction discontinuity at Re=" + fmt(re);
      return false;
    }
  }

  const auto comp = GasComposition::from_molar_mass(40.0);
  ChannelGeometry g;
  g.r_in = 0.0;
  g.r_out = 0.005;
  g.length = 0.5;
  g.axial_cells = 8;

  // sealed heated channel: total mass constant over 1000 s within 10x the
  // integrator tolerance
  const double t0 = 600.0, p0 = 1.5e6;
  const double rho0 = gas().density(comp, {t0, p0});
  auto s0 = ChannelState::uniform(g, rho0, t0);
  WallCoupling walls;
  walls.t_outer = Eigen::VectorXd::Constant(g.axial_cells, 800.0);
  for (int i = 0; i < g.axial_cells / 2; ++i) walls.t_outer[i] = 900.0;
  walls.outer_active = true;
  ChannelBoundary sealed;
  const int n = g.axial_cells;
  Eigen::VectorXd y(3 * n + 1);
  y.segment(0, n) = s0.rho;
  y.segment(n, n) = s0.temperature;
  y.segment(2 * n, n + 1) = s0.mdot;
  auto rhs = [&](double, const Eigen::VectorXd& v, Eigen::VectorXd& dv) {
    ChannelState s;
    s.rho = v.segment(0, n);
    s.temperature = v.segment(n, n);
    s.mdot = v.segment(2 * n, n + 1);
    ChannelDeriv d;
    if (!channel_rhs(g, gas(), comp, s, walls, sealed, d)) return false;
    dv.resize(3 * n + 1);
    dv.segment(0, n) = d.d_rho;
    dv.segment(n, n) = d.d_temperature;
    dv.segment(2 * n, n + 1) = d.d_mdot;
    return true;
  };
  OdeOptions opts;
  opts.rel_tol = 1e-8;
  opts.abs_tol = 1e-10;
  Eigen::VectorXd scale(3 * n + 1);
  scale.segment(0, n).setConstant(rho0);
  scale.segment(n, n).setConstant(t0);
  scale.segment(2 * n, n + 1).setConstant(1e-3);
  opts.scale = scale;
  StiffIntegrator integ(opts);
  const auto res = integ.integrate(rhs, 0.0, 1000.0, y);
  const double mass_drift =
      std::abs(y.segment(0, n).sum() / (rho0 * double(n)) - 1.0);
  if (!res.ok || mass_drift >= 1e-7) {
    detail = "mass drift " + fmt(mass_drift);
    return false;
  }

  // steady energy closure of the heated through-flow channel at 40 cells
  ChannelGeometry g40 = g;
  g40.axial_cells = 40;
  WallCoupling walls40;
  walls40.t_outer = Eigen::VectorXd::Constant(40, 900.0);
  walls40.outer_active = true;
  const double w = 0.02, t_in = 600.0;
  Eigen::VectorXd t = Eigen::VectorXd::Constant(40, t_in);
  auto trhs = [&](double, const Eigen::VectorXd& v, Eigen::VectorXd& dv) {
    Eigen::VectorXd q(40);
    dv.resize(40);
    return thermal_channel_rhs(g40, gas(), comp, w, t_in, p0, v, walls40, dv,
                               q);
  };
  OdeOptions topts;
  topts.rel_tol = 1e-10;
  topts.abs_tol = 1e-12;
  topts.scale = Eigen::VectorXd::Constant(40, t_in);
  StiffIntegrator tinteg(topts);
  const auto tres = tinteg.integrate(trhs, 0.0, 50.0, t);
  Eigen::VectorXd dt(40), q(40);
  thermal_channel_rhs(g40, gas(), comp, w, t_in, p0, t, walls40, dt, q);
  if (!tres.ok || dt.cwiseAbs().maxCoeff() > 1e-8) {
    detail = "thermal channel did not reach steady state";
    return false;
  }
  const double t_out = t[39];
  const double cp_mean =
      gas().heat_capacity_cp(comp, {0.5 * (t_in + t_out), p0});
  const double advected = w * cp_mean * (t_out - t_in);
  const double closure = std::abs(advected / q.sum() - 1.0);
  detail = "mass drift " + fmt(mass_drift) + ", energy closure dev " +
           fmt(100.0 * closure) + "%";
  return closure < 0.005;
}

// criterion 5: recuperator effectiveness against the eps-NTU closed form

bool c5_recuperator(std::string& detail) {
  RecuperatorConfig c;
  c.hot.r_in = 0.0;
  c.hot.r_out = 0.01;
  c.hot.length = 3.3;
  c.hot.axial_cells = 40;
  c.cold = c.hot;
  c.wall_thickness = 1e-3;
  c.wall.density = MaterialTable::constant(8000.0);
  c.wall.heat_capacity = MaterialTable::constant(500.0);
  c.wall.conductivity = MaterialTable::constant(20.0);
  const auto comp = GasComposition::from_molar_mass(40.0);
  const double w = 0.02, p = 1.5e6, th_in = 800.0, tc_in = 450.0;

  const int n = c.cells();
  Eigen::VectorXd y(3 * n);
  y.segment(0, n).setConstant(th_in);
  y.segment(n, n).setConstant(tc_in);
  y.segment(2 * n, n).setConstant(0.5 * (th_in + tc_in));
  auto rhs = [&](double, const Eigen::VectorXd& v, Eigen::VectorXd& dv) {
    Eigen::VectorXd dh(n), dc(n), dw(n);
    if (!recuperator_rhs(c, gas(), comp, w, th_in, p, w, tc_in, p,
                         v.segment(0, n), v.segment(n, n), v.segment(2 * n, n),
                         dh, dc, dw))
      return false;
    dv.resize(3 * n);
    dv << dh, dc, dw;
    return true;
  };
  OdeOptions opts;
  opts.rel_tol = 1e-9;
  opts.abs_tol = 1e-11;
  opts.scale = Eigen::VectorXd::Constant(3 * n, 600.0);
  StiffIntegrator integ(opts);
  const auto res = integ.integrate(rhs, 0.0, 2000.0, y);
  if (!res.ok) {
    detail = "relaxation failed";
    return false;
  }

  const double t_hot_out = y[n - 1];
  const double t_cold_out = y[2 * n - 1];
  const double th_mean = 0.5 * (th_in + t_hot_out);
  const double tc_mean = 0.5 * (tc_in + t_cold_out);
  const double tw_mean = y.segment(2 * n, n).mean();
  const auto props_h = gas().properties(comp, {th_mean, p});
  const auto props_c = gas().properties(comp, {tc_mean, p});
  const double hh =
      heat_transfer_coefficient(c.hot, props_h, w, tw_mean / th_mean);
  const double hc =
      heat_transfer_coefficient(c.cold, props_c, w, tw_mean / tc_mean);
  const double area = 2.0 * M_PI * c.hot.r_out * c.hot.length;
  const double ua = 1.0 / (1.0 / (hh * area) + 1.0 / (hc * area));
  const double ch = w * props_h.cp;
  const double cc = w * props_c.cp;
  const double cmin = std::min(ch, cc), cmax = std::max(ch, cc);
  const double cr = cmin / cmax;
  const double ntu = ua / cmin;
  const double eff_oracle =
      std::abs(1.0 - cr) < 1e-6
          ? ntu / (1.0 + ntu)
          : (1.0 - std::exp(-ntu * (1.0 - cr))) /
                (1.0 - cr * std::exp(-ntu * (1.0 - cr)));
  const double eff_model = ch * (th_in - t_hot_out) / (cmin * (th_in - tc_in));
  const double dev = std::abs(eff_model / eff_oracle - 1.0);
  detail = "effectiveness " + fmt(eff_model) + " vs eps-NTU " +
           fmt(eff_oracle) + " (" + fmt(100.0 * dev) + "%)";
  return dev < 0.05;
}

// criterion 6: cooler wall balance residual and monotonicity

bool c6_cooler(std::string& detail) {
  CoolerConfig c;
  c.geom.r_in = 0.0;
  c.geom.r_out = 0.01;
  c.geom.length = 5.0;
  c.geom.axial_cells = 10;
  c.emissivity = 0.85;
  c.pipe_wall_area = 2.0 * M_PI * 0.01 * 5.0;
  c.radiating_area = 12.0;
  const double k = c.radiating_area / c.pipe_wall_area * c.emissivity *
                   kStefanBoltzmann;

  double worst = 0.0;
  std::vector<std::vector<double>> wall(10, std::vector<double>(10));
  for (int i = 0; i < 10; ++i) {
    const double t_gas = 300.0 + 100.0 * i;
    for (int j = 0; j < 10; ++j) {
      const double t_space = 2.725 + 50.0 * j;
      const double h = 300.0;
      const auto t_wall = cooler_wall_balance(c, h, t_gas, t_space);
      if (!t_wall) {
        detail = "no solution at " + fmt(t_gas) + "/" + fmt(t_space);
        return false;
      }
      wall[size_t(i)][size_t(j)] = *t_wall;
      const double lhs = h * (*t_wall - t_gas);
      const double rhs =
          -k * (std::pow(*t_wall, 4) - std::pow(t_space, 4));
      const double scale =
          std::max({std::abs(lhs), std::abs(rhs), h * t_gas});
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  // wall temperature rises with both gas and sink temperature
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      if (i > 0 && wall[size_t(i)][size_t(j)] <= wall[size_t(i - 1)][size_t(j)]) {
        detail = "not monotone in gas temperature";
        return false;
      }
      if (j > 0 && wall[size_t(i)][size_t(j)] <= wall[size_t(i)][size_t(j - 1)]) {
        detail = "not monotone in sink temperature";
        return false;
      }
    }
  detail = "worst residual " + fmt(worst);
  return worst < 1e-8;
}

// criterion 7: rated steady state against the reference station table

bool c7_rated_steady(std::string& detail) {
  const SteadyResult& r = rated_steady();
  if (!r.ok) {
    detail = "steady state did not converge: " + r.message;
    return false;
  }
  const PlantSample& s = r.sample;
  const auto comp =
      GasComposition::from_molar_mass(plant().config().molar_mass_g_mol);
  const double cp = plant().gas().heat_capacity_cp(
      comp, {0.5 * (s.t_comp_in + s.t_turb_out), s.p_comp_in});
  const double t6 = s.t_comp_in + s.p_radiated / (s.mdot * cp);

  struct Row {
    const char* name;
    double value, reference;
  };
  const Row rows[] = {
      {"T_comp_in", s.t_comp_in, 319.0},
      {"T_comp_out", s.t_comp_out, 470.0},
      {"T_core_in", s.t_core_in, 885.0},
      {"T_turb_in", s.t_turb_in, 1147.0},
      {"T_turb_out", s.t_turb_out, 908.0},
      {"T_cooler_in", t6, 463.0},
      {"p_comp_in", s.p_comp_in / 1e6, 1.50},
      {"p_comp_out", s.p_comp_out / 1e6, 3.00},
      {"p_core_in", s.p_core_in / 1e6, 3.00},
      {"p_turb_in", s.p_turb_in / 1e6, 2.97},
      {"p_turb_out", s.p_turb_out / 1e6, 1.50},
      {"p_cooler_in", s.p_comp_in / 1e6, 1.50},
      {"mass_flow", s.mdot, 3.10},
  };
  bool ok = true;
  std::string worst_name;
  double worst = 0.0;
  std::string offenders;
  for (const Row& row : rows) {
    const double dev = std::abs(row.value / row.reference - 1.0);
    if (dev > worst) {
      worst = dev;
      worst_name = row.name;
    }
    if (dev > 0.15) {
      ok = false;
      offenders += std::string(" ") + row.name + "=" + fmt(row.value) +
                   " (ref " + fmt(row.reference) + ", " + fmt(100.0 * dev) +
                   "%)";
    }
  }
  const double eta = s.p_alt / s.q_core;
  if (eta < 0.20 || eta > 0.30) {
    ok = false;
    offenders += " efficiency=" + fmt(eta);
  }
  detail = "efficiency " + fmt(eta) + ", worst station " + worst_name + " " +
           fmt(100.0 * worst) + "%";
  if (!offenders.empty()) detail += "; out of band:" + offenders;
  return ok;
}

// criterion 8: baseline startup shape

bool c8_startup_shape(std::string& detail) {
  const ControlSchedule schedule =
      decode(baseline_vector(), default_template());
  const PlantRunResult run = plant().integrate(schedule, 12000.0);
  if (!run.ok) {
    detail = "transient failed at t=" + fmt(run.failure_time) + ": " +
             run.reason;
    return false;
  }
  auto window_stats = [&](double t0, double t1, double& mean, double& spread) {
    double lo = 1e300, hi = -1e300, sum = 0.0;
    int count = 0;
    for (const auto& s : run.series.samples) {
      if (s.t < t0 || s.t > t1) continue;
      lo = std::min(lo, s.q_core);
      hi = std::max(hi, s.q_core);
      sum += s.q_core;
      ++count;
    }
    mean = sum / std::max(count, 1);
    spread = (hi - lo) / std::max(mean, 1.0);
  };
  double hold_mean = 0.0, hold_spread = 0.0;
  double full_mean = 0.0, full_spread = 0.0;
  window_stats(6000.0, 7400.0, hold_mean, hold_spread);
  window_stats(10500.0, 12000.0, full_mean, full_spread);

  // plateau -> ramp -> plateau in thermal power
  bool ok = hold_spread < 0.02 && full_spread < 0.005 &&
            full_mean > 2.5 * hold_mean;
  double mid = 0.0;
  for (const auto& s : run.series.samples)
    if (std::abs(s.t - 9000.0) < 30.0) mid = s.q_core;
  ok = ok && mid > hold_mean && mid < full_mean;

  // staged, monotone shaft speed
  double prev_omega = 0.0;
  for (const auto& s : run.series.samples) {
    if (s.omega < prev_omega - 1e-6 * std::max(prev_omega, 1.0)) {
      detail = "shaft speed not monotone at t=" + fmt(s.t);
      return false;
    }
    prev_omega = std::max(prev_omega, s.omega);
  }

  // final power in the band implied by the rated operating point
  const SteadyResult& rated = rated_steady();
  const double final_q = run.series.samples.back().q_core;
  const double final_dev = std::abs(final_q / rated.sample.q_core - 1.0);
  ok = ok && rated.ok && final_dev < 0.15;

  detail = "hold plateau " + fmt(hold_mean / 1e3) + " kW (spread " +
           fmt(100.0 * hold_spread) + "%), full plateau " +
           fmt(full_mean / 1e3) + " kW (spread " + fmt(100.0 * full_spread) +
           "%), final vs rated dev " + fmt(100.0 * final_dev) + "%";
  return ok;
}

// criterion 9: optimizer correctness on oracles and the analytic benchmark

bool dominates(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

std::vector<std::vector<int>> brute_force_fronts(
    const std::vector<std::array<double, 2>>& pts) {
  std::vector<std::vector<int>> fronts;
  std::vector<int> remaining(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) remaining[i] = int(i);
  while (!remaining.empty()) {
    std::vector<int> front, rest;
    for (int i : remaining) {
      bool dominated = false;
      for (int j : remaining)
        if (i != j && dominates(pts[size_t(j)], pts[size_t(i)])) {
          dominated = true;
          break;
        }
      (dominated ? rest : front).push_back(i);
    }
    fronts.push_back(front);
    remaining = std::move(rest);
  }
  return fronts;
}

bool c9_optimizer(std::string& detail) {
  // sorting against the brute-force dominance oracle
  std::mt19937_64 rng(2024);
  auto uniform = [&]() { return double(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + int(rng() % 50);
    std::vector<std::array<double, 2>> pts;
    pts.resize(size_t(n));
    for (auto& p : pts) {
      p[0] = std::floor(uniform() * 20.0);
      p[1] = std::floor(uniform() * 20.0);
    }
    const auto fast = non_dominated_sort(pts);
    const auto slow = brute_force_fronts(pts);
    if (fast.size() != slow.size()) {
      detail = "front count mismatch on trial " + std::to_string(trial);
      return false;
    }
    for (size_t f = 0; f < fast.size(); ++f) {
      std::set<int> a(fast[f].begin(), fast[f].end());
      std::set<int> b(slow[f].begin(), slow[f].end());
      if (a != b) {
        detail = "front membership mismatch on trial " + std::to_string(trial);
        return false;
      }
    }
  }

  // analytic benchmark: f1 = x^2, f2 = (x - 2)^2, Pareto set x in [0, 2]
  Nsga2Problem problem;
  problem.lower = {-5.0};
  problem.upper = {5.0};
  problem.evaluate = [](const std::vector<double>& g) {
    EvalResult r;
    r.f1 = g[0] * g[0];
    r.f2 = (g[0] - 2.0) * (g[0] - 2.0);
    return r;
  };
  Nsga2Options opts;
  opts.population_size = 40;
  opts.generations = 50;
  opts.seed = 42;
  opts.hypervolume_reference = {10.0, 10.0};
  const auto archive = nsga2_run(problem, opts);

  for (size_t i = 1; i < archive.history.size(); ++i)
    if (archive.history[i].hypervolume <
        archive.history[i - 1].hypervolume) {
      detail = "archive hypervolume decreased";
      return false;
    }
  for (const auto& a : archive.members)
    for (const auto& b : archive.members)
      if (&a != &b && dominates({a.f1, a.f2}, {b.f1, b.f2})) {
        detail = "archive contains a dominated member";
        return false;
      }

  std::vector<std::array<double, 2>> front;
  for (int i = 0; i <= 200000; ++i) {
    const double x = 2.0 * double(i) / 200000.0;
    front.push_back({x * x, (x - 2.0) * (x - 2.0)});
  }
  const double truth = hypervolume_2d(front, {10.0, 10.0});
  const double got = archive.history.back().hypervolume;
  const double dev = std::abs(got / truth - 1.0);
  detail = "benchmark hypervolume " + fmt(got) + " vs analytic " + fmt(truth) +
           " (" + fmt(100.0 * dev) + "%)";
  return dev < 0.05;
}

// criterion 10: desk-scale schedule optimization dominates or ties the
// baseline on both objectives

bool c10_desk_optimization(std::string& detail) {
  const ControlTemplate tmpl = default_template();
  const double horizon = 8000.0;
  const ControlVector base = baseline_vector();
  const EvalResult base_obj = evaluate_startup(plant(), base, tmpl, horizon);

  Nsga2Problem problem = make_plant_problem(plant(), tmpl, horizon);
  Nsga2Options opts;
  opts.population_size = 8;
  opts.generations = 4;
  opts.seed = 5;
  opts.initial_genes.push_back(
      std::vector<double>(base.x.begin(), base.x.end()));
  const auto archive = nsga2_run(problem, opts);

  const Individual* best = nullptr;
  for (const auto& m : archive.members)
    if (m.f1 <= base_obj.f1 && m.f2 <= base_obj.f2 &&
        (!best || m.f1 + m.f2 < best->f1 + best->f2))
      best = &m;
  if (!best) {
    detail = "no archive member dominates or ties the baseline (" +
             fmt(base_obj.f1) + ", " + fmt(base_obj.f2) + ")";
    return false;
  }
  detail = "baseline (" + fmt(base_obj.f1) + ", " + fmt(base_obj.f2) +
           ") -> best (" + fmt(best->f1) + ", " + fmt(best->f2) + ")";
  return true;
}

// criterion 11: startup metrics recomputed offline from the emitted CSV

bool c11_metrics_integrity(std::string& detail) {
  const fs::path dir = scratch("metrics");
  const CmdResult r = run_cli("startup --baseline --horizon 2400 --config " +
                              config_path() + " --out " + dir.string());
  if (r.exit_code != 0) {
    detail = "startup subcommand failed";
    return false;
  }
  const std::string summary = slurp(dir / "summary.txt");
  PlantRunResult offline;
  offline.ok = true;
  offline.series = read_timeseries_csv((dir / "timeseries.csv").string());
  const StartupMetrics m = startup_metrics(offline, 2400.0);

  auto matches = [&](const char* key, double value) {
    const double stored = summary_value(summary, key);
    const double scale = std::max({std::abs(stored), std::abs(value), 1.0});
    return std::abs(stored - value) <= 1e-9 * scale;
  };
  const bool ok = matches("battery_energy:", m.battery_energy) &&
                  matches("t_energy_balance:", m.t_energy_balance) &&
                  matches("t_power_400kW:", m.t_power) &&
                  matches("t_outlet_1000K:", m.t_outlet) &&
                  matches("min_net_power:", m.min_p_alt);
  detail = "battery energy " + fmt(m.battery_energy) + " J, balance time " +
           fmt(m.t_energy_balance) + " s";
  if (!ok) detail += "; offline recomputation disagrees with summary";
  return ok;
}

// criterion 12: byte-identical reruns of every subcommand

bool c12_determinism(std::string& detail) {
  const std::string cfg = " --config " + config_path();

  const fs::path s1 = scratch("det_steady1"), s2 = scratch("det_steady2");
  if (run_cli("steady" + cfg + " --out " + s1.string()).exit_code != 0 ||
      run_cli("steady" + cfg + " --out " + s2.string()).exit_code != 0) {
    detail = "steady subcommand failed";
    return false;
  }
  if (slurp(s1 / "steady.csv") != slurp(s2 / "steady.csv")) {
    detail = "steady CSV differs between reruns";
    return false;
  }

  const fs::path u1 = scratch("det_startup1"), u2 = scratch("det_startup2");
  const std::string uargs = "startup --baseline --horizon 600" + cfg;
  if (run_cli(uargs + " --out " + u1.string()).exit_code != 0 ||
      run_cli(uargs + " --out " + u2.string()).exit_code != 0) {
    detail = "startup subcommand failed";
    return false;
  }
  if (slurp(u1 / "timeseries.csv") != slurp(u2 / "timeseries.csv")) {
    detail = "startup CSV differs between reruns";
    return false;
  }

  const fs::path o1 = scratch("det_opt1"), o2 = scratch("det_opt2");
  const std::string oargs =
      "optimize --pop 4 --gens 2 --seed 11 --horizon 50" + cfg;
  if (run_cli(oargs + " --workers 1 --out " + o1.string()).exit_code != 0 ||
      run_cli(oargs + " --workers 3 --out " + o2.string()).exit_code != 0) {
    detail = "optimize subcommand failed";
    return false;
  }
  for (const char* file : {"history.csv", "pareto.csv", "archive.txt"})
    if (slurp(o1 / file) != slurp(o2 / file)) {
      detail = std::string(file) + " differs between worker counts";
      return false;
    }
  detail = "steady, startup and optimize reruns byte-identical";
  return true;
}

}  // namespace

int main() {
  run_criterion(1, "gas transport properties vs reference fixture",
                c1_gas_fixture);
  run_criterion(2, "ideal-gas limits and compressibility peak",
                c2_ideal_limits);
  run_criterion(3, "point-kinetics equilibrium and prompt jump", c3_kinetics);
  run_criterion(4, "channel mass/energy conservation and friction",
                c4_channel);
  run_criterion(5, "recuperator effectiveness vs eps-NTU", c5_recuperator);
  run_criterion(6, "cooler wall balance residual and monotonicity",
                c6_cooler);
  run_criterion(7, "rated steady state vs reference stations",
                c7_rated_steady);
  run_criterion(8, "baseline startup shape", c8_startup_shape);
  run_criterion(9, "optimizer sorting oracle and analytic benchmark",
                c9_optimizer);
  run_criterion(10, "desk-scale schedule optimization vs baseline",
                c10_desk_optimization);
  run_criterion(11, "startup metrics recomputable from CSV",
                c11_metrics_integrity);
  run_criterion(12, "byte-identical deterministic reruns", c12_determinism);

  std::printf("%d of 12 criteria passed\n", 12 - g_failures);
  return g_failures;
}
