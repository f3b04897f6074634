#include "ssd/batch.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace ssd {

std::string version() { return SSD_VERSION; }

int thread_count() {
  if (const char* env = std::getenv("SSD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const auto hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// Runs job(i) for i in [0, n) on up to `threads` workers; rethrows the
// first failure after all workers stop.
template <class Job>
void parallel_for(std::size_t n, int threads, Job job) {
  if (threads <= 0) threads = thread_count();
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < n;) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << body;
}

}  // namespace

std::vector<EnsembleMember> run_ensemble(const Scenario& scenario, int k, int threads) {
  if (k <= 0) throw std::invalid_argument("ensemble needs at least one seed");
  std::vector<EnsembleMember> out(static_cast<std::size_t>(k));
  parallel_for(out.size(), threads, [&](std::size_t i) {
    Scenario sc = scenario;
    sc.seed = scenario.seed + i;
    out[i].seed = sc.seed;
    out[i].records = run(sc, sc.params);
  });
  return out;
}

std::vector<SweepMember> run_sweep(const Scenario& scenario, const SweepOptions& options, int threads) {
  if (options.cell_sizes_m.empty()) throw std::invalid_argument("sweep needs at least one resolution");
  double coarsest = 0.0;
  for (double s : options.cell_sizes_m) {
    if (!(s > 0.0)) throw std::invalid_argument("resolution must be > 0");
    coarsest = std::max(coarsest, s);
  }

  std::optional<LandGrid> base;
  if (options.source == SweepSource::refine) {
    if (options.base) {
      base = options.base;
      coarsest = base->cell_size_m();
    } else {
      Scenario sc = scenario;
      sc.cell_size_m = coarsest;
      base = initialize(sc, sc.params).grid;
    }
  }

  std::vector<int> factors(options.cell_sizes_m.size(), 1);
  if (base) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const double f = coarsest / options.cell_sizes_m[i];
      const double r = std::round(f);
      if (r < 1.0 || std::abs(f - r) > 1e-9 * f)
        throw std::invalid_argument("resolution " + format_double(options.cell_sizes_m[i]) +
                                    " m is not the coarsest " + format_double(coarsest) +
                                    " m divided by a whole number");
      factors[i] = static_cast<int>(r);
    }
  }

  std::vector<SweepMember> out(options.cell_sizes_m.size());
  parallel_for(out.size(), threads, [&](std::size_t i) {
    Scenario sc = scenario;
    sc.cell_size_m = options.cell_sizes_m[i];
    sc.grid_shape.reset();
    RunOptions ro;
    if (base) ro.landscape = factors[i] == 1 ? *base : refine(*base, factors[i]);
    if (ro.landscape) sc.cell_size_m = ro.landscape->cell_size_m();
    out[i].cell_size_m = options.cell_sizes_m[i];
    out[i].records = run(sc, sc.params, ro);
  });
  return out;
}

RunSummary summarize(const std::vector<SimulationRecord>& records) {
  RunSummary s;
  if (records.empty()) return s;
  double sum = 0.0;
  for (const auto& r : records) sum += r.temperature_c;
  s.mean_temperature_c = sum / static_cast<double>(records.size());
  s.final_temperature_c = records.back().temperature_c;
  s.final_area_black_ha = records.back().area_black_ha;
  s.final_area_white_ha = records.back().area_white_ha;
  return s;
}

namespace {

std::string summary_fields(const RunSummary& s) {
  return format_double(s.final_temperature_c) + "," + format_double(s.mean_temperature_c) + "," +
         format_double(s.final_area_black_ha) + "," + format_double(s.final_area_white_ha) + "\n";
}

constexpr const char* kSummaryColumns = "final_temperature_C,mean_temperature_C,final_area_black_ha,final_area_white_ha";

}  // namespace

void write_summary_csv(const std::vector<EnsembleMember>& members, const std::filesystem::path& path) {
  std::string body = std::string("seed,") + kSummaryColumns + "\n";
  for (const auto& m : members) body += std::to_string(m.seed) + "," + summary_fields(summarize(m.records));
  write_text(path, body);
}

void write_sweep_csv(const std::vector<SweepMember>& members, const std::filesystem::path& path) {
  std::string body = std::string("cell_size_m,") + kSummaryColumns + "\n";
  for (const auto& m : members) body += format_double(m.cell_size_m) + "," + summary_fields(summarize(m.records));
  write_text(path, body);
}

void write_meta(const std::filesystem::path& dir, const Scenario& scenario, const std::string& command) {
  std::string body = "# ssd " + version() + "\n# command: " + command + "\n";
  body += render_scenario(scenario);
  write_text(dir / "meta.txt", body);
}

Comparison compare_tables(const io::Table& a, const io::Table& b) {
  Comparison c;
  c.rows_a = a.rows.size();
  c.rows_b = b.rows.size();
  c.schema_match = a.columns == b.columns;
  if (!c.schema_match) return c;
  const auto rows = std::min(a.rows.size(), b.rows.size());
  bool same = a.rows.size() == b.rows.size();
  for (std::size_t j = 0; j < a.columns.size(); ++j) {
    double worst = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double x = a.rows[i][j], y = b.rows[i][j];
      if (x != y) same = false;
      worst = std::max(worst, std::abs(x - y));
    }
    c.max_abs_diff.emplace_back(a.columns[j], worst);
  }
  c.identical = same;
  return c;
}

}  // namespace ssd
