#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "brayton/plant.hpp"

namespace brayton {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

// FNV-1a 64-bit hash, used to fingerprint run inputs in file headers.
std::uint64_t fnv1a_hash(std::string_view data);

using CsvMetadata = std::vector<std::pair<std::string, std::string>>;

// Writes "# key: value" comment lines, a header row from plant_columns(),
// then one row per sample. Values are shortest-round-trip formatted so a
// read-back reproduces the samples bit for bit.
void write_timeseries_csv(const std::string& path, const TimeSeries& series,
                          const CsvMetadata& metadata = {});

TimeSeries read_timeseries_csv(const std::string& path,
                               CsvMetadata* metadata = nullptr);

}  // namespace brayton
