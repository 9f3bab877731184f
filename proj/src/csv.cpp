#include "brayton/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace brayton {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc())
    throw std::runtime_error("double formatting failed");
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a_hash(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_timeseries_csv(const std::string& path, const TimeSeries& series,
                          const CsvMetadata& metadata) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << "\n";
  const auto& cols = plant_columns();
  for (size_t i = 0; i < cols.size(); ++i)
    out << cols[i] << (i + 1 < cols.size() ? "," : "\n");
  for (const auto& s : series.samples) {
    const auto row = sample_row(s);
    for (size_t i = 0; i < row.size(); ++i)
      out << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

TimeSeries read_timeseries_csv(const std::string& path,
                               CsvMetadata* metadata) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  TimeSeries ts;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (metadata) {
        const auto body = line.substr(line.find_first_not_of("# "));
        const auto sep = body.find(": ");
        if (sep != std::string::npos)
          metadata->emplace_back(body.substr(0, sep), body.substr(sep + 2));
      }
      continue;
    }
    if (!header_seen) {  // column header row
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      double v = 0.0;
      const auto res =
          std::from_chars(field.data(), field.data() + field.size(), v);
      if (res.ec != std::errc())
        throw std::runtime_error("bad numeric field in " + path + ": " +
                                 field);
      row.push_back(v);
    }
    if (row.size() != plant_columns().size())
      throw std::runtime_error("wrong column count in " + path);
    PlantSample s;
    size_t i = 0;
    s.t = row[i++];
    s.p_fiss = row[i++];
    s.t_fuel_avg = row[i++];
    s.t_block_avg = row[i++];
    s.t_core_in = row[i++];
    s.t_core_out = row[i++];
    s.p_core_in = row[i++];
    s.p_core_out = row[i++];
    s.t_turb_in = row[i++];
    s.t_turb_out = row[i++];
    s.p_turb_in = row[i++];
    s.p_turb_out = row[i++];
    s.t_comp_in = row[i++];
    s.t_comp_out = row[i++];
    s.p_comp_in = row[i++];
    s.p_comp_out = row[i++];
    s.mdot = row[i++];
    s.omega = row[i++];
    s.p_turbine = row[i++];
    s.p_compressor = row[i++];
    s.p_alt = row[i++];
    s.q_core = row[i++];
    s.p_radiated = row[i++];
    s.rho_in_pcm = row[i++];
    s.t_space = row[i++];
    ts.samples.push_back(s);
  }
  return ts;
}

}  // namespace brayton
