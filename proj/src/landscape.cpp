#include "ssd/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ssd {

std::string_view to_string(LandCode code) {
  switch (code) {
    case LandCode::fertile: return "fertile";
    case LandCode::black: return "black";
    case LandCode::white: return "white";
    case LandCode::barren: return "barren";
  }
  return "?";
}

std::optional<LandCode> land_code_from_int(int value) {
  if (value < 0 || value > 3) return std::nullopt;
  return static_cast<LandCode>(value);
}

std::optional<LandCode> land_code_from_name(std::string_view name) {
  for (auto c : kAllCodes)
    if (to_string(c) == name) return c;
  return std::nullopt;
}

LandGrid::LandGrid(int nrows, int ncols, double cell_size_m)
    : nrows_(nrows), ncols_(ncols), cell_size_m_(cell_size_m) {
  if (nrows <= 0 || ncols <= 0) throw GridError("grid dimensions must be positive");
  if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m)) throw GridError("cell size must be positive");
  const auto n = static_cast<std::size_t>(nrows) * static_cast<std::size_t>(ncols);
  codes_.assign(n, LandCode::fertile);
  ages_.assign(n, kNoAge);
}

std::optional<int> LandGrid::age(int row, int col) const {
  const auto a = ages_[offset(row, col)];
  if (a == kNoAge) return std::nullopt;
  return a;
}

void LandGrid::set(std::size_t index, LandCode code, int timestamp) {
  codes_[index] = code;
  ages_[index] = is_daisy(code) ? timestamp : kNoAge;
}

void LandGrid::set(int row, int col, LandCode code, int timestamp) { set(offset(row, col), code, timestamp); }

LandGrid generate_landscape(const Census& counts, int nrows, int ncols, double cell_size_m, Rng& rng) {
  LandGrid grid(nrows, ncols, cell_size_m);
  std::int64_t total = 0;
  for (auto c : counts) {
    if (c < 0) throw GridError("negative cell count");
    total += c;
  }
  const auto expected = static_cast<std::int64_t>(grid.cell_count());
  if (total != expected) {
    const auto diff = total - expected;
    throw GridError("cell counts sum to " + std::to_string(total) + " but the grid has " + std::to_string(expected) +
                    " cells (" + (diff > 0 ? "surplus " : "deficit ") + std::to_string(std::llabs(diff)) + ")");
  }
  std::vector<LandCode> cells;
  cells.reserve(grid.cell_count());
  for (auto code : kAllCodes) cells.insert(cells.end(), static_cast<std::size_t>(counts[static_cast<int>(code)]), code);
  rng.shuffle(std::span<LandCode>(cells));
  for (std::size_t i = 0; i < cells.size(); ++i) grid.set(i, cells[i], 0);
  return grid;
}

std::int64_t count_cells(const LandGrid& grid, LandCode code) {
  return std::count(grid.codes().begin(), grid.codes().end(), code);
}

Census census(const LandGrid& grid) {
  Census out{};
  for (auto c : grid.codes()) ++out[static_cast<int>(c)];
  return out;
}

namespace {

struct Offset {
  int dr;
  int dc;
};

constexpr std::array<Offset, 8> kMoore = {
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};
constexpr std::array<Offset, 4> kVonNeumann = {{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};

std::span<const Offset> offsets(Neighborhood hood) {
  if (hood == Neighborhood::von_neumann) return kVonNeumann;
  return kMoore;
}

// Indicator raster with a one-cell zero border so the window never needs
// bounds checks.
class PaddedMask {
 public:
  template <class Pred>
  PaddedMask(const LandGrid& grid, Pred pred)
      : stride_(static_cast<std::ptrdiff_t>(grid.ncols()) + 2),
        bits_(static_cast<std::size_t>(grid.nrows() + 2) * static_cast<std::size_t>(stride_), 0) {
    for (int r = 0; r < grid.nrows(); ++r)
      for (int c = 0; c < grid.ncols(); ++c)
        bits_[index(r, c)] = pred(grid.code(grid.offset(r, c))) ? 1 : 0;
  }

  std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>((r + 1) * stride_ + (c + 1));
  }

  int count(std::size_t center, std::span<const std::ptrdiff_t> deltas) const noexcept {
    int n = 0;
    for (auto d : deltas) n += bits_[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(center) + d)];
    return n;
  }

  std::vector<std::ptrdiff_t> deltas(Neighborhood hood) const {
    std::vector<std::ptrdiff_t> out;
    for (auto o : offsets(hood)) out.push_back(o.dr * stride_ + o.dc);
    return out;
  }

 private:
  std::ptrdiff_t stride_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace

AdjacencyStats adjacency_stats(const LandGrid& grid, Neighborhood hood) {
  const PaddedMask fertile(grid, [](LandCode c) { return c == LandCode::fertile; });
  const auto deltas = fertile.deltas(hood);
  AdjacencyStats s;
  for (int r = 0; r < grid.nrows(); ++r) {
    for (int c = 0; c < grid.ncols(); ++c) {
      const auto code = grid.code(grid.offset(r, c));
      if (code == LandCode::black) {
        ++s.c_black;
        s.g_black += fertile.count(fertile.index(r, c), deltas);
      } else if (code == LandCode::white) {
        ++s.c_white;
        s.g_white += fertile.count(fertile.index(r, c), deltas);
      }
    }
  }
  return s;
}

double growth_reduction(const AdjacencyStats& stats, LandCode species, Neighborhood hood) {
  if (!is_daisy(species)) throw GridError("growth reduction is defined for daisy species only");
  const auto g = species == LandCode::black ? stats.g_black : stats.g_white;
  const auto c = species == LandCode::black ? stats.c_black : stats.c_white;
  if (c == 0) return 0.0;
  return static_cast<double>(g) / (static_cast<double>(neighbor_count(hood)) * static_cast<double>(c));
}

std::vector<Cell> frontier(const LandGrid& grid, LandCode species, Neighborhood hood) {
  if (!is_daisy(species)) throw GridError("frontier is defined for daisy species only");
  const PaddedMask occupied(grid, [species](LandCode c) { return c == species; });
  const auto deltas = occupied.deltas(hood);
  std::vector<Cell> out;
  for (int r = 0; r < grid.nrows(); ++r)
    for (int c = 0; c < grid.ncols(); ++c)
      if (grid.code(grid.offset(r, c)) == LandCode::fertile && occupied.count(occupied.index(r, c), deltas) > 0)
        out.push_back({r, c});
  return out;
}

std::int64_t allocate_growth(LandGrid& grid, LandCode species, std::int64_t n_cells, int step_index, Rng& rng,
                             Neighborhood hood) {
  if (n_cells < 0) throw GridError("negative growth request");
  if (n_cells == 0) return 0;
  auto candidates = frontier(grid, species, hood);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(n_cells), candidates.size());
  rng.partial_shuffle(std::span<Cell>(candidates), k);
  for (std::size_t i = 0; i < k; ++i) grid.set(candidates[i].row, candidates[i].col, species, step_index);
  return static_cast<std::int64_t>(k);
}

std::int64_t allocate_decay(LandGrid& grid, LandCode species, std::int64_t n_cells, Rng& rng) {
  if (!is_daisy(species)) throw GridError("decay is defined for daisy species only");
  if (n_cells < 0) throw GridError("negative decay request");
  if (n_cells == 0) return 0;
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < grid.cell_count(); ++i)
    if (grid.code(i) == species) cells.push_back(i);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(n_cells), cells.size());
  // Shuffle then stable-sort by timestamp: oldest first, random within ties.
  rng.shuffle(std::span<std::size_t>(cells));
  std::stable_sort(cells.begin(), cells.end(),
                   [&](std::size_t a, std::size_t b) { return grid.raw_age(a) < grid.raw_age(b); });
  for (std::size_t i = 0; i < k; ++i) grid.set(cells[i], LandCode::fertile);
  return static_cast<std::int64_t>(k);
}

LandGrid refine(const LandGrid& grid, int factor) {
  if (factor < 1) throw GridError("refinement factor must be >= 1");
  LandGrid out(grid.nrows() * factor, grid.ncols() * factor, grid.cell_size_m() / factor);
  for (int r = 0; r < out.nrows(); ++r) {
    for (int c = 0; c < out.ncols(); ++c) {
      const auto src = grid.offset(r / factor, c / factor);
      out.set(r, c, grid.code(src), std::max(grid.raw_age(src), 0));
    }
  }
  return out;
}

}  // namespace ssd
