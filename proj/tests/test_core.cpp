#include "doctest.h"

#include <cmath>

#include "brayton/core.hpp"
#include "brayton/ode.hpp"

using namespace brayton;

namespace {

CoreLayout test_layout(int rings = 3, int nz = 4, int nr = 6) {
  CoreLayout l;
  l.ring_count = rings;
  l.channels_per_ring.resize(rings);
  for (int i = 0; i < rings; ++i) l.channels_per_ring[i] = i == 0 ? 1 : 6 * i;
  l.fuel_radius = 0.007;
  l.gap_outer_radius = 0.0071;
  l.clad_outer_radius = 0.0076;
  l.coolant_channel_radius = 0.0096;
  l.block_pitch = 0.032;
  l.active_height = 0.6;
  l.axial_cells = nz;
  l.radial_fuel_nodes = nr;
  l.axial_shape = Eigen::VectorXd::Ones(nz);
  l.radial_shape = Eigen::VectorXd::Ones(rings);
  l.gap_conductivity = 0.3;
  l.clad_conductivity = 40.0;
  l.inter_ring_conductance = 50.0;
  l.fuel.density = MaterialTable::constant(10400.0);
  l.fuel.heat_capacity = MaterialTable::constant(300.0);
  l.fuel.conductivity = MaterialTable::constant(4.0);
  l.block.density = MaterialTable::constant(1850.0);
  l.block.heat_capacity = MaterialTable::constant(2000.0);
  l.block.conductivity = MaterialTable::constant(150.0);
  return l;
}

// pack/unpack a SolidField into a flat vector for the integrator
Eigen::VectorXd pack(const CoreLayout& l, const SolidField& f) {
  const int nr = l.radial_fuel_nodes, nz = l.axial_cells;
  Eigen::VectorXd y(l.ring_count * nr * nz + l.ring_count * nz);
  int idx = 0;
  for (int r = 0; r < l.ring_count; ++r)
    for (int k = 0; k < nr; ++k)
      for (int z = 0; z < nz; ++z) y[idx++] = f.fuel[r](k, z);
  for (int r = 0; r < l.ring_count; ++r)
    for (int z = 0; z < nz; ++z) y[idx++] = f.block(r, z);
  return y;
}

SolidField unpack(const CoreLayout& l, const Eigen::VectorXd& y) {
  const int nr = l.radial_fuel_nodes, nz = l.axial_cells;
  SolidField f = SolidField::uniform(l, 0.0);
  int idx = 0;
  for (int r = 0; r < l.ring_count; ++r)
    for (int k = 0; k < nr; ++k)
      for (int z = 0; z < nz; ++z) f.fuel[r](k, z) = y[idx++];
  for (int r = 0; r < l.ring_count; ++r)
    for (int z = 0; z < nz; ++z) f.block(r, z) = y[idx++];
  return f;
}

SolidField steady_state(const CoreLayout& l, const SolidField& f0,
                        const std::vector<Eigen::MatrixXd>& q,
                        const CoolantCoupling& coolant, double horizon) {
  auto rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    auto d = fuel_conduction_rhs(l, unpack(l, y), q, coolant);
    SolidField dd;
    dd.fuel = d.fuel;
    dd.block = d.block;
    dy = pack(l, dd);
    return dy.allFinite();
  };
  OdeOptions opts;
  opts.rel_tol = 1e-9;
  opts.abs_tol = 1e-11;
  opts.scale = Eigen::VectorXd::Constant(pack(l, f0).size(), 600.0);
  StiffIntegrator integ(opts);
  Eigen::VectorXd y = pack(l, f0);
  auto res = integ.integrate(rhs, 0.0, horizon, y);
  REQUIRE(res.ok);
  return unpack(l, y);
}

}  // namespace

TEST_CASE("material table interpolation") {
  MaterialTable t{{300.0, 500.0, 900.0}, {10.0, 20.0, 60.0}};
  t.validate();
  CHECK(t.at(100.0) == 10.0);   // clamped low
  CHECK(t.at(1200.0) == 60.0);  // clamped high
  CHECK(t.at(400.0) == doctest::Approx(15.0));
  CHECK(t.at(700.0) == doctest::Approx(40.0));
  MaterialTable bad{{300.0, 300.0}, {1.0, 2.0}};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("layout validation") {
  auto l = test_layout();
  l.validate();
  auto bad = l;
  bad.gap_outer_radius = 0.006;  // below fuel radius
  CHECK_THROWS(bad.validate());
  bad = l;
  bad.radial_shape[0] = 2.0;  // weighted average no longer 1
  CHECK_THROWS(bad.validate());
  bad = l;
  bad.ring_count = 1;
  bad.channels_per_ring = {1};
  bad.radial_shape = Eigen::VectorXd::Ones(1);
  CHECK_THROWS(bad.validate());
}

TEST_CASE("uniform field with no source has zero derivatives") {
  auto l = test_layout();
  auto f = SolidField::uniform(l, 700.0);
  auto q = distribute_power(0.0, l);
  auto coolant = CoolantCoupling::adiabatic(l);
  auto d = fuel_conduction_rhs(l, f, q, coolant);
  for (int r = 0; r < l.ring_count; ++r)
    CHECK(d.fuel[r].cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK(d.block.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("steady 1-D cylinder matches the analytic Q r^2 / 4k profile") {
  auto l = test_layout(2, 1, 25);
  l.axial_shape = Eigen::VectorXd::Ones(1);
  // make the outer boundary effectively isothermal at the gas temperature
  l.gap_conductivity = 1e9;
  l.clad_conductivity = 1e9;
  const double t_gas = 600.0;
  const double qv = 2.0e8;  // W/m^3
  const double p_total =
      qv * l.fuel_pin_volume_per_cell() * l.total_channels();
  auto q = distribute_power(p_total, l);
  CHECK(q[0](0, 0) == doctest::Approx(qv).epsilon(1e-12));

  CoolantCoupling coolant = CoolantCoupling::adiabatic(l);
  coolant.t_gas.setConstant(t_gas);
  coolant.htc_clad.setConstant(1e9);

  auto f = steady_state(l, SolidField::uniform(l, t_gas), q, coolant, 2000.0);
  const double k = 4.0;
  const double dt_analytic = qv * l.fuel_radius * l.fuel_radius / (4.0 * k);
  const double dt_model = f.fuel[0](0, 0) - t_gas;
  CHECK(std::abs(dt_model / dt_analytic - 1.0) < 0.02);
}

TEST_CASE("adiabatic core: integrated heat capacity rises at exactly Q") {
  auto l = test_layout();
  auto f = SolidField::uniform(l, 700.0);
  const double p = 5000.0;
  auto q = distribute_power(p, l);
  auto coolant = CoolantCoupling::adiabatic(l);
  auto d = fuel_conduction_rhs(l, f, q, coolant);
  double edot = 0.0;
  for (int r = 0; r < l.ring_count; ++r)
    for (int z = 0; z < l.axial_cells; ++z) {
      for (int k = 0; k < l.radial_fuel_nodes; ++k)
        edot += 10400.0 * 300.0 * l.fuel_node_volume(k) * d.fuel[r](k, z) *
                l.channels_per_ring[r];
      edot += 1850.0 * 2000.0 * l.block_volume_per_cell() * d.block(r, z) *
              l.channels_per_ring[r];
    }
  CHECK(edot == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("energy balance with coolant extraction") {
  auto l = test_layout();
  auto f = SolidField::uniform(l, 700.0);
  // perturb so conduction terms are active
  f.fuel[1](2, 1) = 750.0;
  f.block(0, 2) = 680.0;
  const double p = 5000.0;
  auto q = distribute_power(p, l);
  CoolantCoupling coolant = CoolantCoupling::adiabatic(l);
  coolant.t_gas.setConstant(600.0);
  coolant.htc_clad.setConstant(800.0);
  coolant.htc_block.setConstant(400.0);
  CoreWallReport report;
  auto d = fuel_conduction_rhs(l, f, q, coolant, &report);
  double edot = 0.0;
  for (int r = 0; r < l.ring_count; ++r)
    for (int z = 0; z < l.axial_cells; ++z) {
      for (int k = 0; k < l.radial_fuel_nodes; ++k)
        edot += 10400.0 * 300.0 * l.fuel_node_volume(k) * d.fuel[r](k, z) *
                l.channels_per_ring[r];
      edot += 1850.0 * 2000.0 * l.block_volume_per_cell() * d.block(r, z) *
              l.channels_per_ring[r];
    }
  const double extracted = report.heat_to_coolant.sum();
  CHECK(extracted > 0.0);
  CHECK(edot == doctest::Approx(p - extracted).epsilon(1e-9));
}

TEST_CASE("distribute_power") {
  auto l = test_layout();
  auto q0 = distribute_power(0.0, l);
  for (auto& m : q0) CHECK(m.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(distribute_power(-1.0, l));

  // uniform shapes: every node at P / V_total
  const double p = 1234.5;
  auto qu = distribute_power(p, l);
  const double v_total =
      l.fuel_pin_volume_per_cell() * l.axial_cells * l.total_channels();
  for (auto& m : qu)
    for (int k = 0; k < l.radial_fuel_nodes; ++k)
      for (int z = 0; z < l.axial_cells; ++z)
        CHECK(m(k, z) == doctest::Approx(p / v_total).epsilon(1e-12));

  // cosine-like axial shape: integral preserved, peaking preserved
  auto lc = test_layout(3, 8, 6);
  Eigen::VectorXd shape(8);
  for (int z = 0; z < 8; ++z)
    shape[z] = std::cos(M_PI * (z + 0.5 - 4.0) / 10.0);
  shape *= 8.0 / shape.sum();  // normalize to mean 1
  lc.axial_shape = shape;
  lc.validate();
  auto qc = distribute_power(p, lc);
  double integral = 0.0;
  for (int r = 0; r < lc.ring_count; ++r)
    for (int k = 0; k < lc.radial_fuel_nodes; ++k)
      for (int z = 0; z < lc.axial_cells; ++z)
        integral += qc[r](k, z) * M_PI *
                    (std::pow(lc.fuel_node_outer_radius(k), 2) -
                     std::pow(lc.fuel_node_inner_radius(k), 2)) *
                    lc.dz() * lc.channels_per_ring[r];
  CHECK(integral == doctest::Approx(p).epsilon(1e-10));
  const double v_total_c =
      lc.fuel_pin_volume_per_cell() * lc.axial_cells * lc.total_channels();
  CHECK(qc[0].maxCoeff() ==
        doctest::Approx(p / v_total_c * shape.maxCoeff()).epsilon(1e-10));
}

TEST_CASE("core average temperatures") {
  auto l = test_layout();
  auto f = SolidField::uniform(l, 292.0);
  auto [tf, tb] = core_average_temps(f, l);
  CHECK(tf == doctest::Approx(292.0));
  CHECK(tb == doctest::Approx(292.0));

  // two-value field splits by volume
  auto l2 = test_layout(2, 2, 4);
  l2.channels_per_ring = {1, 1};
  l2.radial_shape = Eigen::VectorXd::Ones(2);
  auto f2 = SolidField::uniform(l2, 500.0);
  f2.fuel[1].setConstant(700.0);  // same ring volume -> equal weights
  auto [tf2, tb2] = core_average_temps(f2, l2);
  CHECK(tf2 == doctest::Approx(600.0));

  // nonuniform synthetic field against a direct weighted sum
  auto f3 = SolidField::uniform(l, 0.0);
  double sum = 0.0, vol = 0.0;
  for (int r = 0; r < l.ring_count; ++r)
    for (int k = 0; k < l.radial_fuel_nodes; ++k)
      for (int z = 0; z < l.axial_cells; ++z) {
        f3.fuel[r](k, z) = 500.0 + 10.0 * r + 3.0 * k + 7.0 * z;
        sum += f3.fuel[r](k, z) * l.fuel_node_volume(k) *
               l.channels_per_ring[r];
        vol += l.fuel_node_volume(k) * l.channels_per_ring[r];
      }
  f3.block.setConstant(400.0);
  auto [tf3, tb3] = core_average_temps(f3, l);
  CHECK(tf3 == doctest::Approx(sum / vol).epsilon(1e-12));
  CHECK(tb3 == doctest::Approx(400.0));
}

TEST_CASE("hot-ring ordering and axial symmetry at steady state") {
  auto l = test_layout(3, 4, 5);
  // center-peaked radial shape, channel-weighted average 1
  Eigen::VectorXd rs(3);
  rs << 1.6, 1.2, 0.8;
  double w = 0.0;
  for (int i = 0; i < 3; ++i) w += l.channels_per_ring[i] * rs[i];
  rs *= l.total_channels() / w;
  l.radial_shape = rs;
  // symmetric axial shape
  Eigen::VectorXd as(4);
  as << 0.8, 1.2, 1.2, 0.8;
  l.axial_shape = as;
  l.validate();

  auto q = distribute_power(20000.0, l);
  CoolantCoupling coolant = CoolantCoupling::adiabatic(l);
  coolant.t_gas.setConstant(600.0);
  coolant.htc_clad.setConstant(600.0);
  coolant.htc_block.setConstant(300.0);
  auto f = steady_state(l, SolidField::uniform(l, 600.0), q, coolant, 5000.0);

  double avg_prev = 1e30;
  for (int r = 0; r < 3; ++r) {
    const double avg = f.fuel[r].mean();
    CHECK(avg < avg_prev);
    avg_prev = avg;
  }
  // axial symmetry: z and nz-1-z nodes agree
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < l.radial_fuel_nodes; ++k) {
      CHECK(f.fuel[r](k, 0) == doctest::Approx(f.fuel[r](k, 3)).epsilon(1e-6));
      CHECK(f.fuel[r](k, 1) == doctest::Approx(f.fuel[r](k, 2)).epsilon(1e-6));
    }
}

TEST_CASE("vanishing gap/clad resistance pulls the fuel surface to the wall") {
  auto l = test_layout(2, 1, 10);
  CoolantCoupling coolant = CoolantCoupling::adiabatic(l);
  coolant.t_gas.setConstant(600.0);
  coolant.htc_clad.setConstant(800.0);
  auto q = distribute_power(3000.0, l);

  auto run = [&](double scale) {
    auto ll = l;
    ll.gap_conductivity *= scale;
    ll.clad_conductivity *= scale;
    auto f = steady_state(ll, SolidField::uniform(ll, 600.0), q, coolant,
                          5000.0);
    CoreWallReport report;
    fuel_conduction_rhs(ll, f, q, coolant, &report);
    // extrapolate the outer node temperature across the half-node shell to
    // the true fuel surface: at steady state the whole pin power crosses it
    const int nr = ll.radial_fuel_nodes;
    const double rc =
        0.5 * (ll.fuel_node_inner_radius(nr - 1) +
               ll.fuel_node_outer_radius(nr - 1));
    const double r_half =
        std::log(ll.fuel_radius / rc) / (2.0 * M_PI * 4.0 * ll.dz());
    const double q_pin = q[0](0, 0) * ll.fuel_pin_volume_per_cell();
    const double t_fuel_surface =
        f.fuel[0](nr - 1, 0) - q_pin * r_half;
    return std::pair{t_fuel_surface, report.clad_surface_temp(0, 0)};
  };
  auto [t_surf_lo, t_wall_lo] = run(1.0);
  auto [t_surf_hi, t_wall_hi] = run(1e6);
  // with resistance intact the fuel surface sits well above the wall
  CHECK(t_surf_lo - t_wall_lo > 3.0);
  // with the resistance removed they collapse together
  CHECK(std::abs(t_surf_hi - t_wall_hi) <
        0.05 * (t_surf_lo - t_wall_lo));
}
