#pragma once

// Multi-run drivers (seed ensembles, resolution sweeps), record comparison
// and the on-disk layout shared by the CLI and the bindings.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ssd/coupling.hpp"
#include "ssd/io.hpp"

namespace ssd {

/// Worker threads for batch runs: SSD_THREADS if set and > 0, else the
/// hardware concurrency.
int thread_count();

struct EnsembleMember {
  std::uint64_t seed = 0;
  std::vector<SimulationRecord> records;
};

/// Runs seeds scenario.seed, scenario.seed + 1, ... (k of them).
std::vector<EnsembleMember> run_ensemble(const Scenario& scenario, int k, int threads = 0);

struct SweepMember {
  double cell_size_m = 0.0;
  std::vector<SimulationRecord> records;
};

enum class SweepSource {
  /// Generate the coarsest grid once and block-refine it.
  refine,
  /// Generate an independent landscape per resolution from the same seed.
  regenerate,
};

struct SweepOptions {
  std::vector<double> cell_sizes_m;
  SweepSource source = SweepSource::refine;
  /// Coarsest landscape to refine from instead of generating one.
  std::optional<LandGrid> base;
};

/// Refinement factors must be whole numbers: every size divides the coarsest.
std::vector<SweepMember> run_sweep(const Scenario& scenario, const SweepOptions& options, int threads = 0);

/// One row per run: final temperature and areas plus the mean temperature.
struct RunSummary {
  double final_temperature_c = 0.0;
  double mean_temperature_c = 0.0;
  double final_area_black_ha = 0.0;
  double final_area_white_ha = 0.0;
};
RunSummary summarize(const std::vector<SimulationRecord>& records);

void write_summary_csv(const std::vector<EnsembleMember>& members, const std::filesystem::path& path);
void write_sweep_csv(const std::vector<SweepMember>& members, const std::filesystem::path& path);

/// `meta.txt`: version, command line and the effective scenario.
void write_meta(const std::filesystem::path& dir, const Scenario& scenario, const std::string& command);

struct Comparison {
  bool schema_match = false;
  bool identical = false;
  /// Per column, max |a - b| over rows present in both.
  std::vector<std::pair<std::string, double>> max_abs_diff;
  std::size_t rows_a = 0;
  std::size_t rows_b = 0;
};

Comparison compare_tables(const io::Table& a, const io::Table& b);

std::string version();

}  // namespace ssd
