#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "brayton/channel.hpp"
#include "brayton/control.hpp"
#include "brayton/core.hpp"
#include "brayton/gas.hpp"
#include "brayton/hx.hpp"
#include "brayton/kinetics.hpp"
#include "brayton/ode.hpp"
#include "brayton/turbo.hpp"

namespace brayton {

// Single-loop closed Brayton plant, stations numbered around the loop:
//   1 compressor inlet   2 compressor outlet / recuperator cold inlet
//   3 core inlet         4 core outlet / turbine inlet
//   5 turbine outlet / recuperator hot inlet
//   6 recuperator hot outlet / cooler inlet
struct PlantConfig {
  // data files
  std::string gas_file;
  std::string compressor_map_file;
  std::string turbine_map_file;

  double molar_mass_g_mol = 40.0;

  KineticsParams kinetics;
  FeedbackPolys feedback;

  CoreLayout core;
  RecuperatorConfig recuperator;
  int recuperator_channels = 1;  // identical parallel channel pairs
  CoolerConfig cooler;           // per-tube areas
  int cooler_tubes = 1;

  double rated_rpm = 45000.0;
  double shaft_inertia = 0.1;        // kg m^2
  double min_speed_fraction = 0.03;  // below this the loop flow is zero
  double max_flow = 12.0;            // kg/s, flow-solve bracket
  bool free_shaft = false;           // verification mode: integrate the shaft

  double inventory = 0.0;        // kg; <= 0 calibrates from initial_pressure
  double initial_pressure = 1.5e6;   // Pa, cold isothermal anchor
  double initial_temperature = 292.0;  // K
  double initial_power = 100.0;        // W

  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double max_step = 1e30;   // s
  double sample_dt = 1.0;   // s

  void validate() const;  // structural checks (no file IO)
};

// JSON configuration loader (src/config.cpp).
PlantConfig load_plant_config(const std::string& path);

// One sampled record; column order matches plant_columns().
struct PlantSample {
  double t = 0.0;
  double p_fiss = 0.0;
  double t_fuel_avg = 0.0, t_block_avg = 0.0;
  double t_core_in = 0.0, t_core_out = 0.0;
  double p_core_in = 0.0, p_core_out = 0.0;
  double t_turb_in = 0.0, t_turb_out = 0.0;
  double p_turb_in = 0.0, p_turb_out = 0.0;
  double t_comp_in = 0.0, t_comp_out = 0.0;
  double p_comp_in = 0.0, p_comp_out = 0.0;
  double mdot = 0.0;
  double omega = 0.0;  // rad/s
  double p_turbine = 0.0, p_compressor = 0.0, p_alt = 0.0;
  double q_core = 0.0;
  double p_radiated = 0.0;
  double rho_in_pcm = 0.0;
  double t_space = 0.0;
};

const std::vector<std::string>& plant_columns();
std::vector<double> sample_row(const PlantSample& s);

struct TimeSeries {
  std::vector<PlantSample> samples;
};

struct PlantRunResult {
  bool ok = true;
  double failure_time = 0.0;
  std::string reason;
  TimeSeries series;
};

struct SteadyResult {
  bool ok = false;
  std::string message;
  Eigen::VectorXd state;
  PlantSample sample;
};

struct StartupMetrics {
  double t_power = 0.0;           // f1: first t with P_fiss >= threshold
  double t_outlet = 0.0;          // f2: first t with core outlet T >= thresh
  double min_p_alt = 0.0;         // W, peak battery draw (most negative)
  double battery_energy = 0.0;    // J, integral of min(P_alt, 0)
  double t_energy_balance = 0.0;  // first t with P_alt >= 0 after first draw
  bool penalized = false;
};

class PlantModel {
 public:
  explicit PlantModel(const PlantConfig& cfg);

  const PlantConfig& config() const { return cfg_; }
  const GasModel& gas() const { return gas_; }
  double inventory() const { return inventory_; }
  int state_size() const;

  // Cold isothermal stagnant loop at the configured initial condition.
  Eigen::VectorXd initial_state() const;
  // Warm profile near the rated operating point (steady-state accelerator).
  Eigen::VectorXd rated_guess() const;

  // Full coupled derivative evaluation. Returns false on invalid states,
  // failed flow closure, compressor surge or property-envelope violations.
  bool rhs(double t, const ControlSchedule& schedule,
           const Eigen::VectorXd& y, Eigen::VectorXd& dy,
           PlantSample* sample = nullptr) const;

  PlantRunResult integrate(const ControlSchedule& schedule, double horizon,
                           const Eigen::VectorXd* y0 = nullptr) const;

  // Pseudo-time relaxation at a constant operating point until all scaled
  // derivatives fall below `threshold` [1/s].
  SteadyResult steady_state(const ControlSignals& op,
                            double max_pseudo_time = 40000.0,
                            const Eigen::VectorXd* guess = nullptr,
                            double threshold = 1e-6) const;

 private:
  struct LoopFlow;
  bool solve_loop(double n_rpm, const Eigen::VectorXd& y,
                  LoopFlow& flow) const;

  PlantConfig cfg_;
  GasModel gas_;
  GasComposition comp_;
  TurboMap comp_map_;
  TurboMap turb_map_;
  ChannelGeometry core_gas_geom_;
  double inventory_ = 0.0;

  // state layout offsets
  int off_fuel_ = 0, off_block_ = 0, off_core_gas_ = 0;
  int off_rec_hot_ = 0, off_rec_cold_ = 0, off_rec_wall_ = 0;
  int off_cooler_ = 0, off_shaft_ = 0, n_states_ = 0;
};

// f1/f2 per the parameterized objectives; failed runs or missing crossings
// map to horizon + penalty_margin.
StartupMetrics startup_metrics(const PlantRunResult& run, double horizon,
                               double penalty_margin = 1e4,
                               double power_threshold = 400e3,
                               double outlet_threshold = 1000.0);

}  // namespace brayton
