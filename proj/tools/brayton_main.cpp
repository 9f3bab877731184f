// Command-line front end: gas property queries, rated steady state,
// startup transients, and NSGA-II schedule optimization campaigns.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "brayton/csv.hpp"
#include "brayton/optimize.hpp"
#include "brayton/plant.hpp"

namespace fs = std::filesystem;
using namespace brayton;

namespace {

constexpr const char* kVersion = "brayton 1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

std::string default_config_path() {
  return std::string(BRAYTON_DATA_DIR) + "/config/default_plant.json";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string timestamp_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string output_dir(const std::string& flag, const std::string& subcmd) {
  if (!flag.empty()) return flag;
  const char* root = std::getenv("BRAYTON_OUT_ROOT");
  return (root ? std::string(root) : std::string(".")) + "/brayton_" + subcmd;
}

// Every run writes its manifest before doing any work; the closing
// timestamp is appended on success.
struct Manifest {
  std::string path;

  static Manifest create(const std::string& dir, const std::string& subcmd,
                         const std::string& config_path,
                         const std::string& flags, std::uint64_t seed) {
    // hash the config before touching the filesystem so a bad config
    // path leaves no partial output directory behind
    const std::uint64_t hash = fnv1a_hash(read_file(config_path));
    fs::create_directories(dir);
    Manifest m{dir + "/manifest.txt"};
    std::ofstream out(m.path);
    if (!out) throw std::runtime_error("cannot write manifest: " + m.path);
    out << "version: " << kVersion << '\n';
    out << "subcommand: " << subcmd << '\n';
    out << "config: " << config_path << '\n';
    out << "config_hash: " << std::hex << hash << std::dec << '\n';
    out << "flags: " << flags << '\n';
    out << "seed: " << seed << '\n';
    out << "output_dir: " << dir << '\n';
    out << "started: " << timestamp_now() << '\n';
    return m;
  }

  void finish() const {
    std::ofstream out(path, std::ios::app);
    out << "finished: " << timestamp_now() << '\n';
  }
};

// Derived cooler-inlet (station 6) conditions: the recuperator hot outlet
// is not a sampled column, so reconstruct it from the loop energy balance
// T6 = T1 + P_rad / (W cp) and take the pressure at the compressor face.
void station6(const PlantModel& model, const PlantSample& s, double& t6,
              double& p6) {
  const auto comp =
      GasComposition::from_molar_mass(model.config().molar_mass_g_mol);
  double cp = model.gas().heat_capacity_cp(
      comp, {0.5 * (s.t_comp_in + s.t_turb_out), s.p_comp_in});
  t6 = s.mdot > 0.0 ? s.t_comp_in + s.p_radiated / (s.mdot * cp) : s.t_comp_in;
  p6 = s.p_comp_in;
}

void write_station_report(std::ostream& out, const PlantModel& model,
                          const PlantSample& s) {
  double t6 = 0.0, p6 = 0.0;
  station6(model, s, t6, p6);
  const double eta = s.q_core > 0.0 ? s.p_alt / s.q_core : 0.0;
  out << "station                                value\n";
  auto row = [&](const char* name, double v, const char* unit) {
    out << name << " " << format_double(v) << " " << unit << '\n';
  };
  row("compressor_inlet_temperature  ", s.t_comp_in, "K");
  row("compressor_outlet_temperature ", s.t_comp_out, "K");
  row("compressor_inlet_pressure     ", s.p_comp_in / 1e6, "MPa");
  row("compressor_outlet_pressure    ", s.p_comp_out / 1e6, "MPa");
  row("core_inlet_temperature        ", s.t_core_in, "K");
  row("core_inlet_pressure           ", s.p_core_in / 1e6, "MPa");
  row("turbine_inlet_temperature     ", s.t_turb_in, "K");
  row("turbine_inlet_pressure        ", s.p_turb_in / 1e6, "MPa");
  row("turbine_outlet_temperature    ", s.t_turb_out, "K");
  row("turbine_outlet_pressure       ", s.p_turb_out / 1e6, "MPa");
  row("cooler_inlet_temperature      ", t6, "K");
  row("cooler_inlet_pressure         ", p6 / 1e6, "MPa");
  row("mass_flow_rate                ", s.mdot, "kg/s");
  row("thermal_power                 ", s.q_core / 1e3, "kW");
  row("electric_power                ", s.p_alt / 1e3, "kW");
  row("cycle_efficiency              ", eta, "-");
}

void write_metrics_summary(const std::string& path, const StartupMetrics& m,
                           const PlantRunResult& run, double horizon) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write summary: " + path);
  out << "ok: " << (run.ok ? 1 : 0) << '\n';
  if (!run.ok) {
    out << "failure_time: " << format_double(run.failure_time) << '\n';
    out << "failure_reason: " << run.reason << '\n';
  }
  out << "horizon: " << format_double(horizon) << '\n';
  out << "t_power_400kW: " << format_double(m.t_power) << '\n';
  out << "t_outlet_1000K: " << format_double(m.t_outlet) << '\n';
  out << "min_net_power: " << format_double(m.min_p_alt) << '\n';
  out << "battery_energy: " << format_double(m.battery_energy) << '\n';
  out << "t_energy_balance: " << format_double(m.t_energy_balance) << '\n';
  out << "penalized: " << (m.penalized ? 1 : 0) << '\n';
}

int cmd_props(const std::string& config_path, double molar_mass, double t,
              double p) {
  const PlantConfig cfg = load_plant_config(config_path);
  const GasModel gas = GasModel::from_file(cfg.gas_file);
  const auto comp = GasComposition::from_molar_mass(molar_mass);
  const GasState state{t, p};
  const GasProperties props = gas.properties(comp, state);
  std::cout << "molar_mass " << format_double(molar_mass) << " g/mol\n"
            << "temperature " << format_double(t) << " K\n"
            << "pressure " << format_double(p) << " Pa\n"
            << "density " << format_double(props.density) << " kg/m^3\n"
            << "cp " << format_double(props.cp) << " J/(kg K)\n"
            << "viscosity " << format_double(props.viscosity) << " Pa s\n"
            << "conductivity " << format_double(props.conductivity)
            << " W/(m K)\n"
            << "prandtl " << format_double(props.prandtl) << "\n"
            << "compressibility " << format_double(props.compressibility)
            << "\n"
            << "gamma " << format_double(props.gamma) << "\n";
  return kExitOk;
}

int cmd_steady(const std::string& config_path, const std::string& out_flag) {
  const std::string dir = output_dir(out_flag, "steady");
  const Manifest manifest =
      Manifest::create(dir, "steady", config_path, "", 0);
  const PlantConfig cfg = load_plant_config(config_path);
  const PlantModel model(cfg);
  const ControlTemplate tmpl = default_template();
  ControlSignals op;
  op.reactivity_pcm = tmpl.total_insertion;
  op.speed_fraction = 1.0;
  op.sink_temperature = tmpl.sink_final;
  Eigen::VectorXd guess = model.rated_guess();
  SteadyResult r = model.steady_state(op, 40000.0, &guess);
  if (!r.ok) r = model.steady_state(op, 40000.0);
  if (!r.ok) {
    std::cerr << "steady state did not converge: " << r.message << '\n';
    return kExitNumerical;
  }
  write_station_report(std::cout, model, r.sample);
  {
    std::ofstream rep(dir + "/stations.txt");
    if (!rep) return kExitIo;
    write_station_report(rep, model, r.sample);
  }
  TimeSeries series;
  series.samples.push_back(r.sample);
  write_timeseries_csv(dir + "/steady.csv", series,
                       {{"config_hash",
                         std::to_string(fnv1a_hash(read_file(config_path)))},
                        {"subcommand", "steady"}});
  manifest.finish();
  return kExitOk;
}

int cmd_startup(const std::string& config_path, const std::string& out_flag,
                double horizon, const std::string& schedule_path,
                bool baseline) {
  const std::string dir = output_dir(out_flag, "startup");
  std::ostringstream flags;
  flags << "horizon=" << horizon
        << (baseline ? " baseline" : " schedule=" + schedule_path);
  const Manifest manifest =
      Manifest::create(dir, "startup", config_path, flags.str(), 0);
  const PlantConfig cfg = load_plant_config(config_path);
  const PlantModel model(cfg);
  const ControlTemplate tmpl = default_template();
  ControlSchedule schedule;
  if (baseline)
    schedule = decode(baseline_vector(), tmpl);
  else
    schedule = ControlSchedule::load(schedule_path);

  if (horizon <= 0.0) {
    write_timeseries_csv(dir + "/timeseries.csv", TimeSeries{},
                         {{"subcommand", "startup"}});
    manifest.finish();
    return kExitOk;
  }

  const PlantRunResult run = model.integrate(schedule, horizon);
  const StartupMetrics metrics = startup_metrics(run, horizon);
  write_timeseries_csv(
      dir + "/timeseries.csv", run.series,
      {{"config_hash", std::to_string(fnv1a_hash(read_file(config_path)))},
       {"horizon", format_double(horizon)},
       {"subcommand", "startup"}});
  write_metrics_summary(dir + "/summary.txt", metrics, run, horizon);
  std::cout << "ok: " << (run.ok ? 1 : 0) << '\n'
            << "t_power_400kW: " << format_double(metrics.t_power) << " s\n"
            << "t_outlet_1000K: " << format_double(metrics.t_outlet) << " s\n"
            << "battery_energy: " << format_double(metrics.battery_energy)
            << " J\n";
  if (!run.ok) {
    std::cerr << "simulation failed at t=" << format_double(run.failure_time)
              << ": " << run.reason << '\n';
    manifest.finish();
    return kExitNumerical;
  }
  manifest.finish();
  return kExitOk;
}

void write_archive_file(const std::string& path, const ParetoArchive& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write archive: " + path);
  out << "generation " << a.generation << '\n';
  out << "seed " << a.seed << '\n';
  out << "members " << a.members.size() << '\n';
  out << "# failed f1 f2 genes...\n";
  for (const auto& m : a.members) {
    out << int(m.failed) << ' ' << format_double(m.f1) << ' '
        << format_double(m.f2);
    for (double g : m.genes) out << ' ' << format_double(g);
    out << '\n';
  }
}

void write_history_csv(const std::string& path, const ParetoArchive& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write history: " + path);
  out << "generation,best_f1,best_f2,hypervolume\n";
  for (const auto& h : a.history)
    out << h.generation << ',' << format_double(h.best_f1) << ','
        << format_double(h.best_f2) << ',' << format_double(h.hypervolume)
        << '\n';
}

// Table-shaped schedule comparison: per control milestone, original time,
// optimized time, shortened time and shortened percentage (recomputed from
// the two time columns).
void write_comparison(const std::string& path, const ControlVector& base,
                      const Individual& best, const EvalResult& base_obj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write comparison: " + path);
  out << "milestone original_s optimized_s shortened_s shortened_pct\n";
  static const struct {
    int gene;
    const char* name;
  } rows[] = {
      {ControlVector::kT1, "speed_start"},
      {ControlVector::kT3, "speed_step"},
      {ControlVector::kT4, "speed_rated"},
      {ControlVector::kT5, "reactivity_ramp_start"},
      {ControlVector::kT6, "reactivity_hold_reached"},
      {ControlVector::kT7, "reactivity_final_ramp"},
      {ControlVector::kT8, "full_insertion"},
      {ControlVector::kT9, "sink_drop_start"},
      {ControlVector::kT10, "sink_cold"},
  };
  auto line = [&](const char* name, double orig, double opt) {
    const double shortened = orig - opt;
    const double pct = orig != 0.0 ? 100.0 * shortened / orig : 0.0;
    out << name << ' ' << format_double(orig) << ' ' << format_double(opt)
        << ' ' << format_double(shortened) << ' ' << format_double(pct)
        << '\n';
  };
  for (const auto& r : rows)
    line(r.name, base[r.gene], best.genes[size_t(r.gene)]);
  line("objective_f1", base_obj.f1, best.f1);
  line("objective_f2", base_obj.f2, best.f2);
}

int cmd_optimize(const std::string& config_path, const std::string& out_flag,
                 int pop, int gens, std::uint64_t seed, int workers,
                 double horizon, bool warm_start) {
  const std::string dir = output_dir(out_flag, "optimize");
  std::ostringstream flags;
  flags << "pop=" << pop << " gens=" << gens << " workers=" << workers
        << " horizon=" << horizon;
  const Manifest manifest =
      Manifest::create(dir, "optimize", config_path, flags.str(), seed);
  const PlantConfig cfg = load_plant_config(config_path);
  const PlantModel model(cfg);
  const ControlTemplate tmpl = default_template();

  Nsga2Problem problem = make_plant_problem(model, tmpl, horizon);
  Nsga2Options options;
  options.population_size = pop;
  options.generations = gens;
  options.seed = seed;
  options.workers = workers;
  options.checkpoint_dir = dir + "/checkpoints";
  if (warm_start) {
    const ControlVector base = baseline_vector();
    options.initial_genes.push_back(
        std::vector<double>(base.x.begin(), base.x.end()));
  }
  options.on_generation = [](const GenerationStat& st) {
    std::cout << "generation " << st.generation << " best_f1 "
              << format_double(st.best_f1) << " best_f2 "
              << format_double(st.best_f2) << " hypervolume "
              << format_double(st.hypervolume) << '\n';
  };
  const ParetoArchive archive = nsga2_run(problem, options);

  write_archive_file(dir + "/archive.txt", archive);
  write_history_csv(dir + "/history.csv", archive);
  {
    std::ofstream out(dir + "/pareto.csv");
    out << "f1,f2,failed\n";
    for (const auto& m : archive.members)
      out << format_double(m.f1) << ',' << format_double(m.f2) << ','
          << int(m.failed) << '\n';
  }

  // compare the lowest-(f1+f2) archive member against the baseline
  const ControlVector base = baseline_vector();
  const EvalResult base_obj = evaluate_startup(model, base, tmpl, horizon);
  const Individual* best = nullptr;
  for (const auto& m : archive.members) {
    if (!best || m.f1 + m.f2 < best->f1 + best->f2 ||
        (m.f1 + m.f2 == best->f1 + best->f2 && m.f1 < best->f1))
      best = &m;
  }
  if (best) write_comparison(dir + "/comparison.txt", base, *best, base_obj);
  manifest.finish();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"He-Xe closed Brayton cycle plant simulator"};
  app.require_subcommand(1);

  std::string config_path = default_config_path();
  std::string out_flag;
  app.add_option("--config", config_path, "plant configuration file");
  app.add_option("--out", out_flag,
                 "output directory (default: $BRAYTON_OUT_ROOT/brayton_<cmd>)");

  auto* props = app.add_subcommand("props", "query gas properties");
  props->fallthrough();
  double molar_mass = 40.0, temperature = 0.0, pressure = 0.0;
  props->add_option("--molar-mass", molar_mass, "mixture molar mass [g/mol]");
  props->add_option("--temperature", temperature, "temperature [K]")
      ->required();
  props->add_option("--pressure", pressure, "pressure [Pa]")->required();

  auto* steady = app.add_subcommand("steady", "rated-point steady state");
  steady->fallthrough();

  auto* startup = app.add_subcommand("startup", "startup transient");
  startup->fallthrough();
  double horizon = 12000.0;
  std::string schedule_path;
  bool baseline = false;
  startup->add_option("--horizon", horizon, "simulation horizon [s]");
  startup->add_option("--schedule", schedule_path, "control schedule file");
  startup->add_flag("--baseline", baseline, "use the baseline schedule");

  auto* optimize = app.add_subcommand("optimize", "NSGA-II schedule search");
  optimize->fallthrough();
  int pop = 16, gens = 8, workers = 1;
  std::uint64_t seed = 1;
  double opt_horizon = 10000.0;
  optimize->add_option("--pop", pop, "population size (even, >= 4)");
  optimize->add_option("--gens", gens, "generations");
  optimize->add_option("--seed", seed, "random seed");
  optimize->add_option("--workers", workers, "evaluation threads");
  optimize->add_option("--horizon", opt_horizon, "simulation horizon [s]");
  bool warm_start = false;
  optimize->add_flag("--baseline", warm_start,
                     "seed the initial population with the baseline schedule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (props->parsed())
      return cmd_props(config_path, molar_mass, temperature, pressure);
    if (steady->parsed()) return cmd_steady(config_path, out_flag);
    if (startup->parsed()) {
      if (!baseline && schedule_path.empty()) {
        std::cerr << "startup requires --baseline or --schedule\n";
        return kExitUsage;
      }
      return cmd_startup(config_path, out_flag, horizon, schedule_path,
                         baseline);
    }
    if (optimize->parsed()) {
      if (pop < 4 || pop % 2 != 0) {
        std::cerr << "--pop must be even and >= 4\n";
        return kExitUsage;
      }
      return cmd_optimize(config_path, out_flag, pop, gens, seed, workers,
                          opt_horizon, warm_start);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
