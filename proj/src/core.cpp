#include "brayton/core.hpp"

#include <cmath>
#include <stdexcept>

namespace brayton {

MaterialTable MaterialTable::constant(double v) {
  return MaterialTable{{1.0}, {v}};
}

double MaterialTable::at(double t) const {
  const size_t n = temperature.size();
  if (t <= temperature.front()) return value.front();
  if (t >= temperature.back()) return value.back();
  size_t i = 1;
  while (temperature[i] < t) ++i;
  const double w =
      (t - temperature[i - 1]) / (temperature[i] - temperature[i - 1]);
  return (1.0 - w) * value[i - 1] + w * value[i];
}

void MaterialTable::validate() const {
  if (temperature.empty() || temperature.size() != value.size())
    throw std::invalid_argument("material table is empty or ragged");
  for (size_t i = 1; i < temperature.size(); ++i)
    if (temperature[i] <= temperature[i - 1])
      throw std::invalid_argument("material table temperatures must increase");
  for (double v : value)
    if (!(v > 0.0))
      throw std::invalid_argument("material properties must be positive");
}

void CoreLayout::validate() const {
  if (ring_count < 2)
    throw std::invalid_argument("core needs at least 2 rings");
  if (static_cast<int>(channels_per_ring.size()) != ring_count)
    throw std::invalid_argument("channels_per_ring size mismatch");
  for (int c : channels_per_ring)
    if (c < 1) throw std::invalid_argument("each ring needs >= 1 channel");
  if (!(fuel_radius > 0.0 && gap_outer_radius > fuel_radius &&
        clad_outer_radius > gap_outer_radius &&
        coolant_channel_radius > clad_outer_radius))
    throw std::invalid_argument(
        "radii must increase fuel -> gap -> clad -> coolant channel");
  const double hex_area = std::sqrt(3.0) / 2.0 * block_pitch * block_pitch;
  if (!(hex_area > M_PI * coolant_channel_radius * coolant_channel_radius))
    throw std::invalid_argument("block pitch leaves no web material");
  if (!(active_height > 0.0) || axial_cells < 1 || radial_fuel_nodes < 2)
    throw std::invalid_argument("bad core discretization");
  if (axial_shape.size() != axial_cells ||
      radial_shape.size() != ring_count)
    throw std::invalid_argument("power shape size mismatch");
  if (axial_shape.minCoeff() <= 0.0 || radial_shape.minCoeff() <= 0.0)
    throw std::invalid_argument("power shape factors must be positive");
  if (std::abs(axial_shape.mean() - 1.0) > 1e-9)
    throw std::invalid_argument("axial shape must average to 1");
  double wsum = 0.0;
  for (int i = 0; i < ring_count; ++i)
    wsum += channels_per_ring[i] * radial_shape[i];
  if (std::abs(wsum / total_channels() - 1.0) > 1e-9)
    throw std::invalid_argument(
        "radial shape must average to 1 weighted by channels");
  if (!(gap_conductivity > 0.0 && clad_conductivity > 0.0))
    throw std::invalid_argument("gap/clad conductivities must be positive");
  if (inter_ring_conductance < 0.0)
    throw std::invalid_argument("inter-ring conductance must be >= 0");
  fuel.density.validate();
  fuel.heat_capacity.validate();
  fuel.conductivity.validate();
  block.density.validate();
  block.heat_capacity.validate();
  block.conductivity.validate();
}

int CoreLayout::total_channels() const {
  int n = 0;
  for (int c : channels_per_ring) n += c;
  return n;
}

double CoreLayout::fuel_node_inner_radius(int k) const {
  return fuel_radius * k / radial_fuel_nodes;
}

double CoreLayout::fuel_node_outer_radius(int k) const {
  return fuel_radius * (k + 1) / radial_fuel_nodes;
}

double CoreLayout::fuel_node_volume(int k) const {
  const double ro = fuel_node_outer_radius(k);
  const double ri = fuel_node_inner_radius(k);
  return M_PI * (ro * ro - ri * ri) * dz();
}

double CoreLayout::fuel_pin_volume_per_cell() const {
  return M_PI * fuel_radius * fuel_radius * dz();
}

double CoreLayout::block_volume_per_cell() const {
  const double hex_area = std::sqrt(3.0) / 2.0 * block_pitch * block_pitch;
  return (hex_area -
          M_PI * coolant_channel_radius * coolant_channel_radius) *
         dz();
}

double CoreLayout::gap_clad_resistance() const {
  const double rg = std::log(gap_outer_radius / fuel_radius) /
                    (2.0 * M_PI * gap_conductivity * dz());
  const double rc = std::log(clad_outer_radius / gap_outer_radius) /
                    (2.0 * M_PI * clad_conductivity * dz());
  return rg + rc;
}

SolidField SolidField::uniform(const CoreLayout& layout, double t) {
  SolidField f;
  f.fuel.assign(layout.ring_count,
                Eigen::MatrixXd::Constant(layout.radial_fuel_nodes,
                                          layout.axial_cells, t));
  f.block =
      Eigen::MatrixXd::Constant(layout.ring_count, layout.axial_cells, t);
  return f;
}

CoolantCoupling CoolantCoupling::adiabatic(const CoreLayout& layout) {
  CoolantCoupling c;
  c.t_gas = Eigen::MatrixXd::Constant(layout.ring_count, layout.axial_cells,
                                      300.0);
  c.htc_clad = Eigen::MatrixXd::Zero(layout.ring_count, layout.axial_cells);
  c.htc_block = Eigen::MatrixXd::Zero(layout.ring_count, layout.axial_cells);
  return c;
}

SolidDeriv fuel_conduction_rhs(const CoreLayout& layout,
                               const SolidField& field,
                               const std::vector<Eigen::MatrixXd>& q_f,
                               const CoolantCoupling& coolant,
                               CoreWallReport* report) {
  const int nr = layout.radial_fuel_nodes;
  const int nz = layout.axial_cells;
  const int rings = layout.ring_count;
  const double dz = layout.dz();

  SolidDeriv d;
  d.fuel.assign(rings, Eigen::MatrixXd::Zero(nr, nz));
  d.block = Eigen::MatrixXd::Zero(rings, nz);
  if (report) {
    report->clad_surface_temp = Eigen::MatrixXd::Zero(rings, nz);
    report->block_surface_temp = field.block;
    report->heat_to_coolant = Eigen::MatrixXd::Zero(rings, nz);
  }

  // node center radii
  Eigen::VectorXd rc(nr);
  for (int k = 0; k < nr; ++k)
    rc[k] = 0.5 * (layout.fuel_node_inner_radius(k) +
                   layout.fuel_node_outer_radius(k));

  const double r_gc = layout.gap_clad_resistance();
  const double a_clad = 2.0 * M_PI * layout.clad_outer_radius * dz;
  const double a_block = 2.0 * M_PI * layout.coolant_channel_radius * dz;
  const double v_block = layout.block_volume_per_cell();
  const double hex_area = std::sqrt(3.0) / 2.0 * layout.block_pitch *
                          layout.block_pitch;
  const double a_block_axial =
      hex_area - M_PI * layout.coolant_channel_radius *
                     layout.coolant_channel_radius;

  for (int r = 0; r < rings; ++r) {
    const auto& tf = field.fuel[r];
    auto& df = d.fuel[r];
    for (int z = 0; z < nz; ++z) {
      // per-node heat accumulation [W]
      for (int k = 0; k < nr; ++k) {
        const double kf = layout.fuel.conductivity.at(tf(k, z));
        double q = q_f[r](k, z) * layout.fuel_node_volume(k);
        // radial neighbors
        if (k + 1 < nr) {
          const double kmid = layout.fuel.conductivity.at(
              0.5 * (tf(k, z) + tf(k + 1, z)));
          const double res =
              std::log(rc[k + 1] / rc[k]) / (2.0 * M_PI * kmid * dz);
          q += (tf(k + 1, z) - tf(k, z)) / res;
        }
        if (k > 0) {
          const double kmid = layout.fuel.conductivity.at(
              0.5 * (tf(k, z) + tf(k - 1, z)));
          const double res =
              std::log(rc[k] / rc[k - 1]) / (2.0 * M_PI * kmid * dz);
          q += (tf(k - 1, z) - tf(k, z)) / res;
        }
        // axial neighbors, adiabatic ends
        const double a_ax = layout.fuel_node_volume(k) / dz;
        if (z + 1 < nz)
          q += layout.fuel.conductivity.at(0.5 * (tf(k, z) + tf(k, z + 1))) *
               a_ax * (tf(k, z + 1) - tf(k, z)) / dz;
        if (z > 0)
          q += layout.fuel.conductivity.at(0.5 * (tf(k, z) + tf(k, z - 1))) *
               a_ax * (tf(k, z - 1) - tf(k, z)) / dz;
        // surface node: couple through half shell + gap/clad + convection
        if (k == nr - 1) {
          const double r_half = std::log(layout.fuel_radius / rc[k]) /
                                (2.0 * M_PI * kf * dz);
          const double h = coolant.htc_clad(r, z);
          double q_out = 0.0;
          double t_surf = tf(k, z);
          if (h > 0.0) {
            const double r_conv = 1.0 / (h * a_clad);
            q_out = (tf(k, z) - coolant.t_gas(r, z)) /
                    (r_half + r_gc + r_conv);
            t_surf = coolant.t_gas(r, z) + q_out * r_conv;
          }
          q -= q_out;
          if (report) {
            report->clad_surface_temp(r, z) = t_surf;
            report->heat_to_coolant(r, z) +=
                q_out * layout.channels_per_ring[r];
          }
        }
        const double cap = layout.fuel.density.at(tf(k, z)) *
                           layout.fuel.heat_capacity.at(tf(k, z)) *
                           layout.fuel_node_volume(k);
        df(k, z) = q / cap;
      }

      // block node
      const double tb = field.block(r, z);
      double qb = 0.0;
      const double hb = coolant.htc_block(r, z);
      if (hb > 0.0) {
        const double q_out = hb * a_block * (tb - coolant.t_gas(r, z));
        qb -= q_out;
        if (report)
          report->heat_to_coolant(r, z) +=
              q_out * layout.channels_per_ring[r];
      }
      // axial block conduction, adiabatic ends
      const double kb = layout.block.conductivity.at(tb);
      if (z + 1 < nz)
        qb += kb * a_block_axial * (field.block(r, z + 1) - tb) / dz;
      if (z > 0)
        qb += kb * a_block_axial * (field.block(r, z - 1) - tb) / dz;
      const double cap_b = layout.block.density.at(tb) *
                           layout.block.heat_capacity.at(tb) * v_block;
      d.block(r, z) += qb / cap_b;
    }
  }

  // ring-to-ring block conduction: total conductance per axial cell between
  // adjacent rings, spread over each ring's unit cells
  for (int r = 0; r + 1 < rings; ++r) {
    for (int z = 0; z < nz; ++z) {
      const double q =
          layout.inter_ring_conductance *
          (field.block(r, z) - field.block(r + 1, z));  // W, ring r -> r+1
      const double cap_r = layout.block.density.at(field.block(r, z)) *
                           layout.block.heat_capacity.at(field.block(r, z)) *
                           layout.block_volume_per_cell() *
                           layout.channels_per_ring[r];
      const double cap_n =
          layout.block.density.at(field.block(r + 1, z)) *
          layout.block.heat_capacity.at(field.block(r + 1, z)) *
          layout.block_volume_per_cell() * layout.channels_per_ring[r + 1];
      d.block(r, z) -= q / cap_r;
      d.block(r + 1, z) += q / cap_n;
    }
  }
  return d;
}

std::vector<Eigen::MatrixXd> distribute_power(double p_fiss,
                                              const CoreLayout& layout) {
  if (p_fiss < 0.0)
    throw std::invalid_argument("fission power must be >= 0");
  const int nr = layout.radial_fuel_nodes;
  const int nz = layout.axial_cells;
  double denom = 0.0;
  for (int r = 0; r < layout.ring_count; ++r)
    for (int z = 0; z < nz; ++z)
      denom += layout.channels_per_ring[r] * layout.radial_shape[r] *
               layout.axial_shape[z] * layout.fuel_pin_volume_per_cell();
  std::vector<Eigen::MatrixXd> q(layout.ring_count,
                                 Eigen::MatrixXd::Zero(nr, nz));
  if (denom == 0.0) return q;
  for (int r = 0; r < layout.ring_count; ++r)
    for (int z = 0; z < nz; ++z) {
      const double qv = p_fiss * layout.radial_shape[r] *
                        layout.axial_shape[z] / denom;
      for (int k = 0; k < nr; ++k) q[r](k, z) = qv;
    }
  return q;
}

std::pair<double, double> core_average_temps(const SolidField& field,
                                             const CoreLayout& layout) {
  double tf_sum = 0.0, tf_vol = 0.0, tb_sum = 0.0, tb_vol = 0.0;
  for (int r = 0; r < layout.ring_count; ++r) {
    const double nch = layout.channels_per_ring[r];
    for (int z = 0; z < layout.axial_cells; ++z) {
      for (int k = 0; k < layout.radial_fuel_nodes; ++k) {
        const double v = layout.fuel_node_volume(k) * nch;
        tf_sum += field.fuel[r](k, z) * v;
        tf_vol += v;
      }
      const double vb = layout.block_volume_per_cell() * nch;
      tb_sum += field.block(r, z) * vb;
      tb_vol += vb;
    }
  }
  return {tf_sum / tf_vol, tb_sum / tb_vol};
}

}  // namespace brayton
