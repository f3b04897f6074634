#pragma once

// Synchronous coupling of the stock-and-flow model with the raster:
// analyze grid -> inject multipliers -> step -> reconcile raster -> snap stocks.

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ssd/daisyworld.hpp"
#include "ssd/landscape.hpp"
#include "ssd/random.hpp"
#include "ssd/record.hpp"
#include "ssd/scenario.hpp"
#include "ssd/sd_engine.hpp"

namespace ssd {

/// Scenario cannot be mapped onto a raster (area not a whole number of cells,
/// shape mismatch, supplied landscape disagreeing with the areas).
class InitializationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A step failed; `step()` is the 1-based index of the step that failed.
class RunError : public std::runtime_error {
 public:
  RunError(int step, const std::string& what);
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// Sub-cell area (ha) carried between steps. Under net allocation only one
/// of the two is non-zero at any time.
struct Carry {
  double growth = 0.0;
  double decay = 0.0;
};

struct CouplingState {
  std::shared_ptr<const sd::StockFlowModel> model;
  Neighborhood neighborhood = Neighborhood::moore;
  AllocationRule allocation = AllocationRule::net;
  sd::SimState sim;
  LandGrid grid{1, 1, 1.0};
  Carry black;
  Carry white;
  /// Number of completed steps; cells grown in step k carry timestamp k.
  int step_index = 0;
  Rng rng{0};
  /// Cells realized by the last step.
  std::int64_t grown_black = 0;
  std::int64_t grown_white = 0;
  std::int64_t decayed_black = 0;
  std::int64_t decayed_white = 0;
};

/// Whole-cell count for an area; throws InitializationError naming the
/// nearest legal areas when the area is not a multiple of the cell area.
std::int64_t cells_for_area(double area_ha, double cell_area_ha, std::string_view what = "area");

/// Most square factorization rows x cols of n with cols >= rows.
GridShape default_grid_shape(std::int64_t n_cells);

/// Builds the raster (generated from the scenario seed, or the supplied
/// landscape), initializes stocks from the census and injects the initial
/// multipliers.
CouplingState initialize(const Scenario& scenario, const DaisyParams& p,
                         std::optional<LandGrid> landscape = std::nullopt);

/// Record describing the current state (post-reconciliation).
SimulationRecord current_record(const CouplingState& state);

/// One synchronized step. The argument is not modified, so a throwing step
/// leaves the caller with the last completed state.
std::pair<CouplingState, SimulationRecord> step_once(CouplingState state);

struct RunOptions {
  /// Supplied landscape instead of a generated one (spatial mode).
  std::optional<LandGrid> landscape;
  /// Where `map_<step>.ppm` files go when the scenario asks for snapshots.
  std::optional<std::filesystem::path> snapshot_dir;
};

/// Initial record plus one per step. Dispatches on scenario.mode.
std::vector<SimulationRecord> run(const Scenario& scenario, const DaisyParams& p, const RunOptions& options = {});

/// Lumped model only; D columns report the shared fertile fraction.
std::vector<SimulationRecord> run_nonspatial(const Scenario& scenario, const DaisyParams& p);

}  // namespace ssd
