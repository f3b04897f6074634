#pragma once

// Raster land-cover model: codes, per-cell growth timestamps, neighborhood
// statistics and the growth/decay allocation rules.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ssd/random.hpp"

namespace ssd {

enum class LandCode : std::uint8_t { fertile = 0, black = 1, white = 2, barren = 3 };

inline constexpr std::array<LandCode, 4> kAllCodes = {LandCode::fertile, LandCode::black, LandCode::white,
                                                      LandCode::barren};

std::string_view to_string(LandCode code);
std::optional<LandCode> land_code_from_int(int value);
std::optional<LandCode> land_code_from_name(std::string_view name);

inline constexpr bool is_daisy(LandCode c) { return c == LandCode::black || c == LandCode::white; }

/// 8 = Moore neighborhood, 4 = von Neumann.
enum class Neighborhood : std::uint8_t { moore = 8, von_neumann = 4 };

inline constexpr int neighbor_count(Neighborhood n) { return static_cast<int>(n); }

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Per-code cell counts, indexed by LandCode value.
using Census = std::array<std::int64_t, 4>;

class LandGrid {
 public:
  static constexpr std::int32_t kNoAge = -1;

  /// All-fertile grid.
  LandGrid(int nrows, int ncols, double cell_size_m);

  int nrows() const noexcept { return nrows_; }
  int ncols() const noexcept { return ncols_; }
  std::size_t cell_count() const noexcept { return codes_.size(); }
  double cell_size_m() const noexcept { return cell_size_m_; }
  double cell_area_ha() const noexcept { return cell_size_m_ * cell_size_m_ / 10'000.0; }

  LandCode code(int row, int col) const { return codes_[offset(row, col)]; }
  LandCode code(std::size_t index) const { return codes_[index]; }
  /// Growth timestamp; defined exactly on daisy cells.
  std::optional<int> age(int row, int col) const;
  std::int32_t raw_age(std::size_t index) const { return ages_[index]; }

  /// Sets a code; daisy cells get `timestamp`, other cells have it cleared.
  void set(int row, int col, LandCode code, int timestamp = 0);
  void set(std::size_t index, LandCode code, int timestamp = 0);

  bool in_bounds(int row, int col) const noexcept { return row >= 0 && row < nrows_ && col >= 0 && col < ncols_; }
  std::size_t offset(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(col);
  }
  Cell cell_at(std::size_t index) const noexcept {
    return {static_cast<int>(index / static_cast<std::size_t>(ncols_)),
            static_cast<int>(index % static_cast<std::size_t>(ncols_))};
  }

  const std::vector<LandCode>& codes() const noexcept { return codes_; }

  friend bool operator==(const LandGrid&, const LandGrid&) = default;

 private:
  int nrows_;
  int ncols_;
  double cell_size_m_;
  std::vector<LandCode> codes_;
  std::vector<std::int32_t> ages_;
};

/// Uniform random placement with exact per-code counts; daisy ages are 0.
/// Throws GridError when the counts do not sum to nrows*ncols.
LandGrid generate_landscape(const Census& counts, int nrows, int ncols, double cell_size_m, Rng& rng);

std::int64_t count_cells(const LandGrid& grid, LandCode code);
Census census(const LandGrid& grid);

struct AdjacencyStats {
  /// Summed fertile-neighbor incidences over cells of the species.
  std::int64_t g_black = 0;
  std::int64_t g_white = 0;
  /// Cell counts of the species.
  std::int64_t c_black = 0;
  std::int64_t c_white = 0;
};

/// One moving-window pass: for each daisy cell, count the fertile cells in its
/// neighborhood. Cells outside the grid count as non-fertile.
AdjacencyStats adjacency_stats(const LandGrid& grid, Neighborhood hood = Neighborhood::moore);

/// D = G / (k*C) with k the neighborhood size; 0 for an extinct species.
double growth_reduction(const AdjacencyStats& stats, LandCode species, Neighborhood hood = Neighborhood::moore);

/// Fertile cells with at least one neighbor of `species`, in row-major order.
std::vector<Cell> frontier(const LandGrid& grid, LandCode species, Neighborhood hood = Neighborhood::moore);

/// Converts up to n_cells frontier cells (frontier taken once at entry) to
/// `species`, stamping them with `step_index`. Returns the number converted.
std::int64_t allocate_growth(LandGrid& grid, LandCode species, std::int64_t n_cells, int step_index, Rng& rng,
                             Neighborhood hood = Neighborhood::moore);

/// Returns up to n_cells of the oldest `species` cells to fertile soil; ties
/// in age are broken uniformly at random. Returns the number converted.
std::int64_t allocate_decay(LandGrid& grid, LandCode species, std::int64_t n_cells, Rng& rng);

/// Block refinement: every cell becomes factor x factor cells of the same
/// code and age, at cell_size / factor.
LandGrid refine(const LandGrid& grid, int factor);

}  // namespace ssd
