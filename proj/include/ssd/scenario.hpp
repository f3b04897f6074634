#pragma once

// Scenario configuration: a flat `key = value` text format with `[areas]`,
// `[luminosity]` and `[params]` sections. See docs/scenario-format.md.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ssd/daisyworld.hpp"
#include "ssd/landscape.hpp"

namespace ssd {

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SimulationMode { spatial, nonspatial };

/// How the stock change of a step is written onto the raster.
///   net:   the net change (growth - decay) is carried per species and
///          reconciled as whole cells, growing at the frontier or removing
///          the oldest cells.
///   gross: growth and decay flows are accumulated and allocated separately
///          (growth first, then decay).
enum class AllocationRule { net, gross };

std::string_view to_string(SimulationMode mode);
std::string_view to_string(AllocationRule rule);

struct GridShape {
  int nrows = 0;
  int ncols = 0;
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

struct Scenario {
  std::string name = "scenario";
  SimulationMode mode = SimulationMode::spatial;
  int steps = 100;
  double dt = 1.0;
  double cell_size_m = 100.0;
  /// Indexed by LandCode.
  std::array<double, 4> areas_ha{};
  LuminositySchedule luminosity;
  std::uint64_t seed = 1;
  Neighborhood neighborhood = Neighborhood::moore;
  AllocationRule allocation = AllocationRule::net;
  /// 0 disables map snapshots.
  int snapshot_every = 0;
  std::optional<GridShape> grid_shape;
  DaisyParams params;

  double area(LandCode code) const { return areas_ha[static_cast<int>(code)]; }
  double total_area() const { return areas_ha[0] + areas_ha[1] + areas_ha[2] + areas_ha[3]; }

  /// Throws ScenarioError.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(render_scenario(s)) == s.
std::string render_scenario(const Scenario& scenario);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace ssd
