#include "brayton/turbo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace brayton {

TurboMap TurboMap::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open turbo map file: " + path);

  TurboMap map;
  bool have_kind = false;
  std::map<std::pair<double, double>, std::pair<double, double>> points;
  std::set<double> n_set, m_set;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    auto fail = [&](const std::string& what) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                               what);
    };
    if (tag == "machine") {
      std::string k;
      if (!(ls >> k)) fail("missing machine kind");
      if (k == "compressor")
        map.kind_ = MachineKind::compressor;
      else if (k == "turbine")
        map.kind_ = MachineKind::turbine;
      else
        fail("unknown machine kind '" + k + "'");
      have_kind = true;
    } else if (tag == "r_tip") {
      if (!(ls >> map.r_tip_) || map.r_tip_ <= 0.0) fail("bad r_tip");
    } else if (tag == "point") {
      double n, m, pr, tr;
      if (!(ls >> n >> m >> pr >> tr)) fail("malformed point row");
      if (!(pr > 1.0 && tr > 1.0))
        fail("map ratios must exceed 1 on the interior");
      points[{n, m}] = {pr, tr};
      n_set.insert(n);
      m_set.insert(m);
    } else if (tag == "surge") {
      double n, m;
      if (!(ls >> n >> m)) fail("malformed surge row");
      map.surge_n_.push_back(n);
      map.surge_m_.push_back(m);
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!have_kind) throw std::runtime_error(path + ": missing machine record");
  if (map.r_tip_ <= 0.0) throw std::runtime_error(path + ": missing r_tip");
  if (n_set.size() < 2 || m_set.size() < 2)
    throw std::runtime_error(path + ": map grid needs at least 2x2 points");

  map.n_grid_.assign(n_set.begin(), n_set.end());
  map.m_grid_.assign(m_set.begin(), m_set.end());
  map.pr_.resize(map.n_grid_.size() * map.m_grid_.size());
  map.tr_.resize(map.pr_.size());
  for (size_t i = 0; i < map.n_grid_.size(); ++i)
    for (size_t j = 0; j < map.m_grid_.size(); ++j) {
      auto it = points.find({map.n_grid_[i], map.m_grid_[j]});
      if (it == points.end())
        throw std::runtime_error(path + ": map grid is not rectangular");
      map.pr_[i * map.m_grid_.size() + j] = it->second.first;
      map.tr_[i * map.m_grid_.size() + j] = it->second.second;
    }
  if (map.kind_ == MachineKind::compressor && map.surge_n_.empty())
    throw std::runtime_error(path + ": compressor map lacks a surge line");
  for (size_t i = 1; i < map.surge_n_.size(); ++i)
    if (map.surge_n_[i] <= map.surge_n_[i - 1])
      throw std::runtime_error(path + ": surge line must increase in N'");
  return map;
}

double TurboMap::surge_flow(double n_corr) const {
  if (surge_n_.empty()) return 0.0;
  if (n_corr <= surge_n_.front()) return surge_m_.front();
  if (n_corr >= surge_n_.back()) return surge_m_.back();
  const auto it = std::upper_bound(surge_n_.begin(), surge_n_.end(), n_corr);
  const size_t i = it - surge_n_.begin();
  const double w =
      (n_corr - surge_n_[i - 1]) / (surge_n_[i] - surge_n_[i - 1]);
  return (1.0 - w) * surge_m_[i - 1] + w * surge_m_[i];
}

bool TurboMap::ratios(double m_corr, double n_corr, MachineRatios& out) const {
  const double n_span = n_grid_.back() - n_grid_.front();
  const double m_span = m_grid_.back() - m_grid_.front();
  if (n_corr < n_grid_.front() - extrapolation_margin * n_span ||
      n_corr > n_grid_.back() + extrapolation_margin * n_span ||
      m_corr < m_grid_.front() - extrapolation_margin * m_span ||
      m_corr > m_grid_.back() + extrapolation_margin * m_span)
    return false;

  const double n = std::clamp(n_corr, n_grid_.front(), n_grid_.back());
  const double m = std::clamp(m_corr, m_grid_.front(), m_grid_.back());

  auto cell = [](const std::vector<double>& g, double v) {
    size_t i = std::upper_bound(g.begin(), g.end(), v) - g.begin();
    if (i == 0) i = 1;
    if (i == g.size()) i = g.size() - 1;
    return i;
  };
  const size_t i = cell(n_grid_, n);
  const size_t j = cell(m_grid_, m);
  const double wn = (n - n_grid_[i - 1]) / (n_grid_[i] - n_grid_[i - 1]);
  const double wm = (m - m_grid_[j - 1]) / (m_grid_[j] - m_grid_[j - 1]);
  const size_t cols = m_grid_.size();
  auto interp = [&](const std::vector<double>& v) {
    return (1.0 - wn) * ((1.0 - wm) * v[(i - 1) * cols + j - 1] +
                         wm * v[(i - 1) * cols + j]) +
           wn * ((1.0 - wm) * v[i * cols + j - 1] + wm * v[i * cols + j]);
  };
  out.pressure_ratio = interp(pr_);
  out.temperature_ratio = interp(tr_);
  out.surge =
      kind_ == MachineKind::compressor && m_corr < surge_flow(n_corr);
  return true;
}

CorrectedQuantities corrected_quantities(double mdot, double t_in,
                                         double p_in, double n_rpm,
                                         double r_tip, double gas_r,
                                         double gamma) {
  if (!(t_in > 0.0 && p_in > 0.0 && r_tip > 0.0 && gas_r > 0.0 &&
        gamma > 1.0))
    throw std::invalid_argument("corrected_quantities: bad inputs");
  CorrectedQuantities c;
  const double d = 2.0 * r_tip;
  c.m_corr = mdot * std::sqrt(t_in * gas_r) / (d * d * p_in);
  c.n_corr = n_rpm * d / std::sqrt(gamma * gas_r * t_in);
  return c;
}

ComponentPowers component_powers(double mdot, double cp_t_in, double t_t_in,
                                 double cp_t_out, double t_t_out,
                                 double cp_c_in, double t_c_in,
                                 double cp_c_out, double t_c_out) {
  ComponentPowers p;
  p.turbine = mdot * (cp_t_in * t_t_in - cp_t_out * t_t_out);
  p.compressor = mdot * (cp_c_out * t_c_out - cp_c_in * t_c_in);
  return p;
}

double shaft_rhs(double p_turbine, double p_compressor, double p_alt,
                 const ShaftState& shaft) {
  if (!(shaft.inertia > 0.0))
    throw std::invalid_argument("shaft inertia must be positive");
  const double omega_floor = 1.0;  // rad/s
  const double omega = std::max(shaft.omega, omega_floor);
  return (p_turbine - p_compressor - p_alt) / (shaft.inertia * omega);
}

}  // namespace brayton
