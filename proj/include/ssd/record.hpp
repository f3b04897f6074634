#pragma once

#include <cstdint>

namespace ssd {

/// Per-step output row. Areas are in hectares; growth/decay counts are cells
/// (always 0 for non-spatial runs).
struct SimulationRecord {
  double time = 0.0;
  double luminosity = 0.0;
  double temperature_c = 0.0;
  double area_black_ha = 0.0;
  double area_white_ha = 0.0;
  double area_fertile_ha = 0.0;
  double area_barren_ha = 0.0;
  double albedo = 0.0;
  double d_black = 0.0;
  double d_white = 0.0;
  std::int64_t grown_black = 0;
  std::int64_t grown_white = 0;
  std::int64_t decayed_black = 0;
  std::int64_t decayed_white = 0;

  friend bool operator==(const SimulationRecord&, const SimulationRecord&) = default;
};

}  // namespace ssd
