// ssd: run, ensemble, sweep, genland and compare.
//
// Exit codes: 0 ok, 1 bad input (arguments, scenario, grid), 2 run failure,
// 3 compare found differences.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ssd/batch.hpp"
#include "ssd/coupling.hpp"
#include "ssd/io.hpp"
#include "ssd/scenario.hpp"

namespace fs = std::filesystem;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::optional<int> steps;
  std::optional<double> cellsize;

  void add(CLI::App* app) {
    app->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "Override the scenario seed");
    app->add_option("--mode", mode, "Override the mode")->check(CLI::IsMember({"spatial", "nonspatial", "non-spatial"}));
    app->add_option("--steps", steps, "Override the number of steps")->check(CLI::PositiveNumber);
    app->add_option("--cellsize", cellsize, "Override the cell size in meters")->check(CLI::PositiveNumber);
  }

  ssd::Scenario load() const {
    ssd::Scenario sc;
    try {
      sc = ssd::load_scenario(scenario);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
    if (seed) sc.seed = *seed;
    if (!mode.empty()) sc.mode = mode == "spatial" ? ssd::SimulationMode::spatial : ssd::SimulationMode::nonspatial;
    if (steps) sc.steps = *steps;
    if (cellsize) {
      sc.cell_size_m = *cellsize;
      sc.grid_shape.reset();
    }
    try {
      sc.validate();
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
    return sc;
  }
};

std::string command_line(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) out += (i ? " " : "") + std::string(argv[i]);
  return out;
}

ssd::LandGrid load_grid_arg(const std::string& path) {
  try {
    return ssd::io::load_grid(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

void write_run(const fs::path& dir, const ssd::Scenario& sc, const std::vector<ssd::SimulationRecord>& records,
               const std::string& cmd) {
  fs::create_directories(dir);
  ssd::io::write_records(records, dir / "records.csv");
  ssd::write_meta(dir, sc, cmd);
}

ssd::Census parse_counts(const std::string& text) {
  ssd::Census counts{};
  std::array<bool, 4> seen{};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("counts entry '" + item + "' is not name=value");
    const auto code = ssd::land_code_from_name(item.substr(0, eq));
    if (!code) throw InputError("unknown land code '" + item.substr(0, eq) + "'");
    long long n = 0;
    try {
      std::size_t used = 0;
      n = std::stoll(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1 || n < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InputError("bad count in '" + item + "'");
    }
    const int i = static_cast<int>(*code);
    if (seen[i]) throw InputError("duplicate count for '" + item.substr(0, eq) + "'");
    seen[i] = true;
    counts[i] = n;
  }
  return counts;
}

ssd::GridShape parse_shape(const std::string& text) {
  int r = 0, c = 0;
  char x = 0, extra = 0;
  if (std::sscanf(text.c_str(), "%d%c%d%c", &r, &x, &c, &extra) != 3 || (x != 'x' && x != 'X') || r <= 0 || c <= 0)
    throw InputError("shape must be ROWSxCOLS, got '" + text + "'");
  return {r, c};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial system dynamics Daisyworld simulator"};
  app.set_version_flag("--version", ssd::version());
  app.require_subcommand(1);
  const std::string cmd = command_line(argc, argv);

  ScenarioArgs run_args;
  std::string run_out, run_refine;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run_args.add(run);
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_option("--refine-from", run_refine, "Start from this grid file instead of a generated one")
      ->check(CLI::ExistingFile);

  ScenarioArgs ens_args;
  std::string ens_out;
  int ens_k = 10;
  auto* ens = app.add_subcommand("ensemble", "Run K seeds of one scenario");
  ens_args.add(ens);
  ens->add_option("--seeds", ens_k, "Number of seeds")->check(CLI::PositiveNumber);
  ens->add_option("--out", ens_out, "Output directory")->required();

  ScenarioArgs sw_args;
  std::string sw_out, sw_refine;
  std::vector<double> sw_res{100.0, 50.0, 25.0, 12.5};
  bool sw_regen = false;
  auto* sweep = app.add_subcommand("sweep", "Run one scenario at several cell sizes");
  sw_args.add(sweep);
  sweep->add_option("--resolutions", sw_res, "Cell sizes in meters")->delimiter(',')->check(CLI::PositiveNumber);
  sweep->add_option("--out", sw_out, "Output directory")->required();
  auto* refine_opt =
      sweep->add_option("--refine-from", sw_refine, "Coarsest grid to refine from")->check(CLI::ExistingFile);
  sweep->add_flag("--regenerate", sw_regen, "Generate an independent landscape per resolution")->excludes(refine_opt);

  std::string gl_counts, gl_shape, gl_out;
  double gl_cellsize = 100.0;
  std::uint64_t gl_seed = 1;
  auto* genland = app.add_subcommand("genland", "Generate a random landscape grid");
  genland->add_option("--counts", gl_counts, "Cell counts, e.g. fertile=900,black=50,white=50,barren=0")->required();
  genland->add_option("--shape", gl_shape, "ROWSxCOLS (default: most square)");
  genland->add_option("--cellsize", gl_cellsize, "Cell size in meters")->check(CLI::PositiveNumber);
  genland->add_option("--seed", gl_seed, "Random seed");
  genland->add_option("--out", gl_out, "Output grid file")->required();

  std::string cmp_a, cmp_b;
  auto* compare = app.add_subcommand("compare", "Compare two records CSV files");
  compare->add_option("--a", cmp_a)->required()->check(CLI::ExistingFile);
  compare->add_option("--b", cmp_b)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const auto sc = run_args.load();
      ssd::RunOptions opt;
      if (!run_refine.empty()) {
        opt.landscape = load_grid_arg(run_refine);
      }
      ssd::Scenario eff = sc;
      if (opt.landscape) eff.cell_size_m = opt.landscape->cell_size_m();
      opt.snapshot_dir = fs::path(run_out);
      fs::create_directories(run_out);
      const auto records = ssd::run(eff, eff.params, opt);
      write_run(run_out, eff, records, cmd);
      std::cout << "wrote " << records.size() << " records to " << (fs::path(run_out) / "records.csv").string()
                << "\n";
    } else if (*ens) {
      const auto sc = ens_args.load();
      const auto members = ssd::run_ensemble(sc, ens_k);
      for (const auto& m : members) {
        char name[32];
        std::snprintf(name, sizeof name, "seed_%03llu", static_cast<unsigned long long>(m.seed));
        ssd::Scenario s = sc;
        s.seed = m.seed;
        write_run(fs::path(ens_out) / name, s, m.records, cmd);
      }
      ssd::write_summary_csv(members, fs::path(ens_out) / "summary.csv");
      std::cout << "wrote " << members.size() << " runs to " << ens_out << "\n";
    } else if (*sweep) {
      const auto sc = sw_args.load();
      ssd::SweepOptions opt;
      opt.cell_sizes_m = sw_res;
      opt.source = sw_regen ? ssd::SweepSource::regenerate : ssd::SweepSource::refine;
      if (!sw_refine.empty()) opt.base = load_grid_arg(sw_refine);
      const auto members = ssd::run_sweep(sc, opt);
      for (const auto& m : members) {
        ssd::Scenario s = sc;
        s.cell_size_m = m.cell_size_m;
        write_run(fs::path(sw_out) / ("res_" + ssd::format_double(m.cell_size_m)), s, m.records, cmd);
      }
      ssd::write_sweep_csv(members, fs::path(sw_out) / "sweep.csv");
      std::cout << "wrote " << members.size() << " runs to " << sw_out << "\n";
    } else if (*genland) {
      const auto counts = parse_counts(gl_counts);
      std::int64_t total = 0;
      for (auto n : counts) total += n;
      const auto shape = gl_shape.empty() ? ssd::default_grid_shape(total) : parse_shape(gl_shape);
      ssd::Rng rng(gl_seed);
      ssd::LandGrid grid(1, 1, 1.0);
      try {
        grid = ssd::generate_landscape(counts, shape.nrows, shape.ncols, gl_cellsize, rng);
      } catch (const ssd::GridError& e) {
        throw InputError(e.what());
      }
      ssd::io::save_grid(grid, gl_out);
      const auto c = ssd::census(grid);
      std::cout << grid.nrows() << "x" << grid.ncols() << " fertile=" << c[0] << " black=" << c[1]
                << " white=" << c[2] << " barren=" << c[3] << "\n";
    } else if (*compare) {
      ssd::io::Table a, b;
      try {
        a = ssd::io::load_table(cmp_a);
        b = ssd::io::load_table(cmp_b);
      } catch (const std::exception& e) {
        throw InputError(e.what());
      }
      const auto c = ssd::compare_tables(a, b);
      if (!c.schema_match) {
        std::cerr << "error: column headers differ\n";
        return 1;
      }
      if (c.rows_a != c.rows_b) std::cout << "rows: " << c.rows_a << " vs " << c.rows_b << "\n";
      for (const auto& [col, diff] : c.max_abs_diff)
        if (diff != 0.0) std::cout << col << ": max |diff| = " << ssd::format_double(diff) << "\n";
      std::cout << (c.identical ? "identical" : "different") << "\n";
      return c.identical ? 0 : 3;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
