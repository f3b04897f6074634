#pragma once

// Reference values and brute-force checks shared by the unit and acceptance
// tests. The constants were evaluated at 50 digits with mpmath, independently
// of the library, and frozen here.

#include <cstdint>

#include "ssd/landscape.hpp"

namespace ssd::oracle {

inline constexpr double kTemperatureL1A05 = 26.869946959343709047;
inline constexpr double kTemperatureL09A05 = 19.074451778755800503;
inline constexpr double kGrowthZeroLow = 4.999179629817270863;
inline constexpr double kGrowthZeroHigh = 40.000820370182729137;

// Plain double loop over every cell and every offset.
inline AdjacencyStats adjacency(const LandGrid& g, Neighborhood hood) {
  AdjacencyStats s;
  for (int r = 0; r < g.nrows(); ++r) {
    for (int c = 0; c < g.ncols(); ++c) {
      const auto code = g.code(r, c);
      if (!is_daisy(code)) continue;
      std::int64_t fertile = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (hood == Neighborhood::von_neumann && dr != 0 && dc != 0) continue;
          const int rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= g.nrows() || cc < 0 || cc >= g.ncols()) continue;
          if (g.code(rr, cc) == LandCode::fertile) ++fertile;
        }
      }
      if (code == LandCode::black) {
        s.g_black += fertile;
        ++s.c_black;
      } else {
        s.g_white += fertile;
        ++s.c_white;
      }
    }
  }
  return s;
}

inline LandGrid random_grid(int nrows, int ncols, Rng& rng) {
  LandGrid g(nrows, ncols, 100.0);
  const auto weights = static_cast<int>(rng.below(4));  // vary the mix per grid
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    auto v = static_cast<int>(rng.below(4 + static_cast<std::uint64_t>(weights)));
    if (v > 3) v = 0;
    g.set(i, static_cast<LandCode>(v), 0);
  }
  return g;
}

}  // namespace ssd::oracle
