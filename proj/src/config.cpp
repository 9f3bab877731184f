#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "brayton/plant.hpp"
#include "json.hpp"

namespace brayton {

namespace {

using nlohmann::json;

MaterialTable parse_table(const json& j) {
  MaterialTable t;
  if (j.is_number()) return MaterialTable::constant(j.get<double>());
  t.temperature = j.at("temperature").get<std::vector<double>>();
  t.value = j.at("value").get<std::vector<double>>();
  t.validate();
  return t;
}

MaterialProps parse_material(const json& j) {
  MaterialProps m;
  m.density = parse_table(j.at("density"));
  m.heat_capacity = parse_table(j.at("heat_capacity"));
  m.conductivity = parse_table(j.at("conductivity"));
  return m;
}

ChannelGeometry parse_channel(const json& j) {
  ChannelGeometry g;
  g.r_in = j.value("r_in", 0.0);
  g.r_out = j.at("r_out").get<double>();
  g.length = j.at("length").get<double>();
  g.axial_cells = j.at("axial_cells").get<int>();
  g.wall_roughness = j.value("wall_roughness", 0.0);
  g.inclination = j.value("inclination", 0.0);
  g.gravity = j.value("gravity", 0.0);
  g.validate();
  return g;
}

KineticsParams parse_kinetics(const json& j) {
  KineticsParams k;
  const auto beta = j.at("beta").get<std::vector<double>>();
  const auto lambda = j.at("lambda").get<std::vector<double>>();
  if (beta.size() != kDelayedGroups || lambda.size() != kDelayedGroups)
    throw std::invalid_argument("kinetics needs 6 delayed groups");
  std::copy(beta.begin(), beta.end(), k.beta.begin());
  std::copy(lambda.begin(), lambda.end(), k.lambda.begin());
  k.generation_time = j.at("generation_time").get<double>();
  return k;
}

std::array<double, 4> parse_cubic(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 4)
    throw std::invalid_argument("feedback polynomial needs 4 coefficients");
  std::array<double, 4> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

FeedbackPolys parse_feedback(const json& j) {
  FeedbackPolys f;
  f.fuel = parse_cubic(j.at("fuel"));
  f.block = parse_cubic(j.at("block"));
  f.fuel_ref_temperature = j.at("fuel_ref_temperature").get<double>();
  f.block_ref_temperature = j.at("block_ref_temperature").get<double>();
  f.band_min = j.value("band_min", 290.0);
  f.band_max = j.value("band_max", 1300.0);
  return f;
}

CoreLayout parse_core(const json& j) {
  CoreLayout c;
  c.channels_per_ring = j.at("channels_per_ring").get<std::vector<int>>();
  c.ring_count = int(c.channels_per_ring.size());
  c.fuel_radius = j.at("fuel_radius").get<double>();
  c.gap_outer_radius = j.at("gap_outer_radius").get<double>();
  c.clad_outer_radius = j.at("clad_outer_radius").get<double>();
  c.coolant_channel_radius = j.at("coolant_channel_radius").get<double>();
  c.block_pitch = j.at("block_pitch").get<double>();
  c.active_height = j.at("active_height").get<double>();
  c.axial_cells = j.at("axial_cells").get<int>();
  c.radial_fuel_nodes = j.at("radial_fuel_nodes").get<int>();
  const auto az = j.at("axial_shape").get<std::vector<double>>();
  const auto rz = j.at("radial_shape").get<std::vector<double>>();
  c.axial_shape = Eigen::Map<const Eigen::VectorXd>(az.data(), az.size());
  c.radial_shape = Eigen::Map<const Eigen::VectorXd>(rz.data(), rz.size());
  c.gap_conductivity = j.at("gap_conductivity").get<double>();
  c.clad_conductivity = j.at("clad_conductivity").get<double>();
  c.inter_ring_conductance = j.value("inter_ring_conductance", 0.0);
  c.fuel = parse_material(j.at("fuel"));
  c.block = parse_material(j.at("block"));
  return c;
}

}  // namespace

PlantConfig load_plant_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plant config: " + path);
  json j;
  in >> j;

  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).lexically_normal().string();
  };

  PlantConfig cfg;
  cfg.gas_file = resolve(j.at("gas_file").get<std::string>());
  cfg.compressor_map_file =
      resolve(j.at("compressor_map_file").get<std::string>());
  cfg.turbine_map_file = resolve(j.at("turbine_map_file").get<std::string>());
  cfg.molar_mass_g_mol = j.value("molar_mass_g_mol", 40.0);

  cfg.kinetics = parse_kinetics(j.at("kinetics"));
  cfg.feedback = parse_feedback(j.at("feedback"));
  cfg.core = parse_core(j.at("core"));

  {
    const auto& r = j.at("recuperator");
    cfg.recuperator.hot = parse_channel(r.at("hot"));
    cfg.recuperator.cold = parse_channel(r.at("cold"));
    cfg.recuperator.wall_thickness = r.at("wall_thickness").get<double>();
    cfg.recuperator.wall = parse_material(r.at("wall"));
    cfg.recuperator_channels = r.at("channels").get<int>();
  }
  {
    const auto& c = j.at("cooler");
    cfg.cooler.geom = parse_channel(c.at("geom"));
    cfg.cooler.emissivity = c.at("emissivity").get<double>();
    cfg.cooler.pipe_wall_area = c.at("pipe_wall_area").get<double>();
    cfg.cooler.radiating_area = c.at("radiating_area").get<double>();
    cfg.cooler_tubes = c.at("tubes").get<int>();
  }

  cfg.rated_rpm = j.value("rated_rpm", 45000.0);
  cfg.shaft_inertia = j.value("shaft_inertia", 0.1);
  cfg.min_speed_fraction = j.value("min_speed_fraction", 0.03);
  cfg.max_flow = j.value("max_flow", 12.0);
  cfg.free_shaft = j.value("free_shaft", false);
  cfg.inventory = j.value("inventory", 0.0);
  cfg.initial_pressure = j.value("initial_pressure", 1.5e6);
  cfg.initial_temperature = j.value("initial_temperature", 292.0);
  cfg.initial_power = j.value("initial_power", 100.0);
  cfg.rel_tol = j.value("rel_tol", 1e-6);
  cfg.abs_tol = j.value("abs_tol", 1e-9);
  cfg.max_step = j.value("max_step", 1e30);
  cfg.sample_dt = j.value("sample_dt", 1.0);

  cfg.validate();
  return cfg;
}

}  // namespace brayton
