#pragma once

// File formats: ASCII raster grids, the records CSV and P3 map snapshots.
// Every writer is a pure function of its input.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ssd/landscape.hpp"
#include "ssd/record.hpp"

namespace ssd::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header keys: ncols, nrows, cellsize, NODATA_value; then nrows lines of
/// ncols codes. Ages are not part of the format; daisy cells read back with
/// age 0.
LandGrid read_grid(std::string_view text);
std::string write_grid(const LandGrid& grid);
LandGrid load_grid(const std::filesystem::path& path);
void save_grid(const LandGrid& grid, const std::filesystem::path& path);

inline constexpr std::string_view kRecordsHeader =
    "time,luminosity,temperature_C,area_black_ha,area_white_ha,area_fertile_ha,area_barren_ha,albedo,D_black,"
    "D_white,grown_black,grown_white,decayed_black,decayed_white";

void write_records(const std::vector<SimulationRecord>& records, std::ostream& out);
void write_records(const std::vector<SimulationRecord>& records, const std::filesystem::path& path);

/// Generic numeric CSV: header names plus rows of doubles.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Table read_table(std::string_view text);
Table load_table(const std::filesystem::path& path);

/// Reads a records CSV; the header must match kRecordsHeader exactly.
std::vector<SimulationRecord> read_records(std::string_view text);

using Rgb = std::array<std::uint8_t, 3>;

/// Palette indexed by LandCode.
inline constexpr std::array<Rgb, 4> kPalette = {{{139, 115, 85}, {20, 20, 20}, {240, 240, 240}, {128, 128, 128}}};

std::string write_snapshot(const LandGrid& grid);
void save_snapshot(const LandGrid& grid, const std::filesystem::path& path);

/// `<dir>/map_<step:05>.ppm`
std::filesystem::path snapshot_path(const std::filesystem::path& dir, int step);

}  // namespace ssd::io
