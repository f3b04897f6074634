// Acceptance suite: one PASS/FAIL line per criterion.
//
//   ssd_acceptance --cli PATH --scenarios DIR [--criterion N]...
//
// Exit status is 0 only when every selected criterion passes.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "ssd/batch.hpp"
#include "ssd/coupling.hpp"
#include "ssd/daisyworld.hpp"
#include "ssd/io.hpp"
#include "ssd/scenario.hpp"

namespace fs = std::filesystem;
using namespace ssd;

namespace {

struct Context {
  fs::path cli;
  fs::path scenarios;
};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note("FAILED " + what);
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Scenario load(const Context& ctx, const std::string& name) { return load_scenario(ctx.scenarios / name); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const SimulationRecord& at_time(const std::vector<SimulationRecord>& r, double t) {
  for (const auto& x : r)
    if (x.time == t) return x;
  throw std::runtime_error("no record at t=" + fmt(t, 1));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome equations(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const DaisyParams p;
  const double t1 = planetary_temperature(1.0, 0.5, p);
  const double t09 = planetary_temperature(0.9, 0.5, p);
  o.note("T(1,0.5)=" + fmt(t1, 6) + " T(0.9,0.5)=" + fmt(t09, 6));
  o.require(std::abs(t1 - oracle::kTemperatureL1A05) < 0.1, "T(L=1) vs oracle");
  o.require(std::abs(t09 - oracle::kTemperatureL09A05) < 0.1, "T(L=0.9) vs oracle");
  o.require(std::abs(t1 - 26.9) < 0.1 && std::abs(t09 - 19.1) < 0.1, "T near 26.9 / 19.1");
  const double half_width = std::sqrt(1.0 / p.growth_coeff);
  for (double z : {p.growth_optimum - half_width, p.growth_optimum + half_width})
    o.require(std::abs(growth_rate(z, p)) < 1e-9, "growth_rate zero at " + fmt(z, 9));
  o.require(std::abs(p.growth_optimum - half_width - oracle::kGrowthZeroLow) < 1e-9 &&
                std::abs(p.growth_optimum + half_width - oracle::kGrowthZeroHigh) < 1e-9,
            "zero locations vs oracle");
  const auto sc = load(ctx, "fig7.scn");
  const auto state = initialize(sc, sc.params);
  const double albedo = current_record(state).albedo;
  o.note("fig7 initial albedo=" + format_double(albedo));
  o.require(albedo == 0.5, "initial albedo exactly 0.5");
  const double s = seconds_since(t0);
  o.note("runtime " + fmt(s, 3) + " s");
  o.require(s < 1.0, "runtime < 1 s");
  return o;
}

Outcome conservation(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::int64_t checks = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto sc = load(ctx, "fig7.scn");
    sc.seed = seed;
    sc.steps = 100;
    auto s = initialize(sc, sc.params);
    const auto barren = census(s.grid)[3];
    for (int k = 0; k <= sc.steps; ++k) {
      if (k > 0) s = step_once(std::move(s)).first;
      const auto rec = current_record(s);
      const auto c = census(s.grid);
      const double ca = s.grid.cell_area_ha();
      const auto& m = *s.model;
      const double total = rec.area_black_ha + rec.area_white_ha + rec.area_fertile_ha + rec.area_barren_ha;
      const bool ok = total == 1000.0 && sd::get_value(m, s.sim, var::area_black) == c[1] * ca &&
                      sd::get_value(m, s.sim, var::area_white) == c[2] * ca &&
                      sd::get_value(m, s.sim, var::area_fertile) == c[0] * ca && c[3] == barren &&
                      total == sd::get_value(m, s.sim, var::total_area);
      if (!ok) {
        o.require(false, "seed " + std::to_string(seed) + " step " + std::to_string(k));
        return o;
      }
      ++checks;
    }
  }
  const double s = seconds_since(t0);
  o.note(std::to_string(checks) + " states checked, runtime " + fmt(s, 3) + " s");
  o.require(s < 10.0, "runtime < 10 s");
  return o;
}

Outcome adjacency(const Context&) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20240601);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int nr = 3 + static_cast<int>(rng.below(18));
    const int nc = 3 + static_cast<int>(rng.below(18));
    const auto g = oracle::random_grid(nr, nc, rng);
    const auto got = adjacency_stats(g);
    const auto want = oracle::adjacency(g, Neighborhood::moore);
    const bool same = got.g_black == want.g_black && got.g_white == want.g_white && got.c_black == want.c_black &&
                      got.c_white == want.c_white;
    const auto d = [](std::int64_t gg, std::int64_t cc) {
      return cc == 0 ? 0.0 : static_cast<double>(gg) / (8.0 * static_cast<double>(cc));
    };
    const bool d_same = growth_reduction(got, LandCode::black) == d(want.g_black, want.c_black) &&
                        growth_reduction(got, LandCode::white) == d(want.g_white, want.c_white);
    if (!same || !d_same) ++mismatches;
  }
  const double s = seconds_since(t0);
  o.note("200 grids, " + std::to_string(mismatches) + " mismatches, runtime " + fmt(s, 3) + " s");
  o.require(mismatches == 0, "exact equality with the brute-force oracle");
  o.require(s < 5.0, "runtime < 5 s");
  return o;
}

Outcome equivalence(const Context& ctx) {
  Outcome o;
  auto sc = load(ctx, "fig7.scn");
  DaisyParams p = sc.params;
  const auto lumped = build_nonspatial_model(sc, p);
  const auto spatial = build_spatial_model(sc, p);
  auto a = sd::init_state(lumped);
  const double x0 = sd::get_value(lumped, a, var::fraction_fertile);
  const std::pair<std::string, double> inj[] = {{std::string(var::multiplier_black), x0},
                                                {std::string(var::multiplier_white), x0}};
  auto b = sd::init_state(spatial, inj);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double x = sd::get_value(spatial, b, var::fraction_fertile);
    b = sd::inject(spatial, std::move(b), var::multiplier_black, x);
    b = sd::inject(spatial, std::move(b), var::multiplier_white, x);
    b = sd::step(spatial, std::move(b));
    a = sd::step(lumped, std::move(a));
    for (auto id : {var::area_black, var::area_white, var::area_fertile})
      worst = std::max(worst, std::abs(sd::get_value(lumped, a, id) - sd::get_value(spatial, b, id)));
  }
  o.note("max |stock difference| over 100 steps = " + format_double(worst));
  o.require(worst <= 1e-12, "difference <= 1e-12");
  return o;
}

std::vector<SimulationRecord> nonspatial(Scenario sc) {
  sc.mode = SimulationMode::nonspatial;
  return run(sc, sc.params);
}

std::vector<SimulationRecord> spatial(Scenario sc, std::uint64_t seed) {
  sc.mode = SimulationMode::spatial;
  sc.seed = seed;
  sc.snapshot_every = 0;
  return run(sc, sc.params);
}

Outcome drop_recovery(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto sc = load(ctx, "fig7.scn");
  const auto ns = nonspatial(sc);
  // Pre-drop window is [45, 50): L is already 0.9 at t = 50.
  double pre = 0.0;
  for (int t = 45; t < 50; ++t) pre += at_time(ns, t).temperature_c;
  pre /= 5.0;
  const double ns100 = at_time(ns, 100).temperature_c;
  o.note("non-spatial pre-drop mean=" + fmt(pre) + " T100=" + fmt(ns100));
  o.require(std::abs(ns100 - pre) <= 2.0, "(a) non-spatial recovery within 2 C");
  std::string temps;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double t100 = at_time(spatial(sc, seed), 100).temperature_c;
    temps += (seed > 1 ? "," : "") + fmt(t100);
    o.require(t100 < ns100, "(b) spatial seed " + std::to_string(seed) + " below non-spatial");
  }
  o.note("spatial T100=[" + temps + "]");
  const double s = seconds_since(t0);
  o.note("runtime " + fmt(s, 3) + " s");
  o.require(s < 30.0, "runtime < 30 s");
  return o;
}

Outcome stress_extinction(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  bool any_variant = false;
  for (const char* file : {"fig8.scn", "fig8_caption.scn"}) {
    const auto sc = load(ctx, file);
    const auto ns = nonspatial(sc);
    const double threshold = sc.params.extinction_fraction * sc.total_area();
    std::optional<double> extinct_at;
    double min_white = ns.front().area_white_ha;
    for (const auto& r : ns) {
      min_white = std::min(min_white, r.area_white_ha);
      if (!extinct_at && r.time < 100 && r.area_white_ha <= threshold) extinct_at = r.time;
    }
    int survivors = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      if (at_time(spatial(sc, seed), 100).area_white_ha > 0.0) ++survivors;
    const bool ok = extinct_at.has_value() && survivors >= 3;
    any_variant = any_variant || ok;
    o.note(std::string(file) + ": L1=" + format_double(sc.luminosity.l1) + " non-spatial white " +
           (extinct_at ? "extinct at t=" + fmt(*extinct_at, 0) : "not extinct (min " + fmt(min_white) +
                                                                     " ha, t100 " + fmt(ns.back().area_white_ha) +
                                                                     " ha, threshold " + fmt(threshold) + " ha)") +
           ", spatial survivors " + std::to_string(survivors) + "/5");
  }
  o.require(any_variant, "extinction contrast under at least one variant");
  const double s = seconds_since(t0);
  o.note("runtime " + fmt(s, 3) + " s");
  o.require(s < 30.0, "runtime < 30 s");
  return o;
}

Outcome ramp_contrast(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto sc = load(ctx, "fig9.scn");
  const auto ns = nonspatial(sc);
  const double ns50 = at_time(ns, 50).temperature_c;
  double ns_min = std::numeric_limits<double>::infinity();
  double ns_min_t = 0;
  for (const auto& r : ns) {
    if (r.time > sc.luminosity.t_start && r.time <= sc.luminosity.t_end && r.temperature_c < ns_min) {
      ns_min = r.temperature_c;
      ns_min_t = r.time;
    }
  }
  o.note("non-spatial T50=" + fmt(ns50) + " min in ramp=" + fmt(ns_min) + " at t=" + fmt(ns_min_t, 0) +
         " (excess " + fmt(ns_min - ns50) + ")");
  o.require(ns_min < ns50, "non-spatial dips below its t=50 value");
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = spatial(sc, seed);
    const double a = at_time(r, 50).temperature_c, b = at_time(r, 100).temperature_c;
    detail += (seed > 1 ? "," : "") + fmt(a, 2) + "->" + fmt(b, 2);
    o.require(b > a, "spatial seed " + std::to_string(seed) + " T100 > T50");
  }
  o.note("spatial T50->T100=[" + detail + "]");
  const double s = seconds_since(t0);
  o.note("runtime " + fmt(s, 3) + " s");
  o.require(s < 30.0, "runtime < 30 s");
  return o;
}

Outcome resolution_trend(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto sc = load(ctx, "fig7.scn");
  int monotone = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Scenario s = sc;
    s.seed = seed;
    s.snapshot_every = 0;
    SweepOptions opt;
    opt.cell_sizes_m = {100, 50, 25, 12.5};
    const auto members = run_sweep(s, opt);
    std::vector<double> means;
    for (const auto& m : members) {
      double sum = 0.0;
      int n = 0;
      for (const auto& r : m.records)
        if (r.time >= 90 && r.time <= 100) {
          sum += r.temperature_c;
          ++n;
        }
      means.push_back(sum / n);
    }
    const bool ok = means[1] <= means[0] && means[2] <= means[1];
    if (ok) ++monotone;
    o.note("seed " + std::to_string(seed) + " means 100/50/25/12.5=" + fmt(means[0], 2) + "/" + fmt(means[1], 2) + "/" +
           fmt(means[2], 2) + "/" + fmt(means[3], 2) + (ok ? " monotone" : ""));
  }
  o.require(monotone >= 4, "non-increasing in >= 4 of 5 seeds (got " + std::to_string(monotone) + ")");
  const double s = seconds_since(t0);
  o.note("runtime " + fmt(s, 3) + " s");
  o.require(s < 300.0, "runtime < 5 min");
  return o;
}

Outcome determinism(const Context& ctx) {
  Outcome o;
  const auto base = fs::temp_directory_path() / "ssd_acceptance_determinism";
  fs::remove_all(base);
  const auto a = base / "a", b = base / "b";
  const std::string cmd = "\"" + ctx.cli.string() + "\" run --scenario \"" + (ctx.scenarios / "fig7.scn").string() +
                          "\" --seed 1 --out ";
  o.require(shell(cmd + "\"" + a.string() + "\"") == 0, "first run");
  o.require(shell(cmd + "\"" + b.string() + "\"") == 0, "second run");
  if (!o.pass) return o;
  int files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "meta.txt") continue;  // records the output path
    ++files;
    o.require(fs::exists(b / name) && slurp(entry.path()) == slurp(b / name), name.string() + " identical");
  }
  int files_b = 0;
  for (const auto& entry : fs::directory_iterator(b))
    if (entry.path().filename() != "meta.txt") ++files_b;
  o.require(files == files_b, "same file set");
  o.require(fs::exists(a / "records.csv"), "records.csv present");
  o.note(std::to_string(files) + " files compared (records.csv plus snapshots)");
  fs::remove_all(base);
  return o;
}

Outcome performance(const Context& ctx) {
  Outcome o;
  const auto base = fs::temp_directory_path() / "ssd_acceptance_perf";
  fs::remove_all(base);
  const std::pair<const char*, double> cases[] = {{"fig7.scn", 1.0}, {"fig10_12_5.scn", 60.0}};
  for (const auto& [file, budget] : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const int rc = shell("\"" + ctx.cli.string() + "\" run --scenario \"" + (ctx.scenarios / file).string() +
                         "\" --out \"" + (base / file).string() + "\"");
    const double s = seconds_since(t0);
    o.require(rc == 0, std::string(file) + " exit 0");
    o.require(s < budget, std::string(file) + " under " + fmt(budget, 0) + " s");
    o.note(std::string(file) + " " + fmt(s, 3) + " s");
  }
  fs::remove_all(base);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  Context ctx;
  std::vector<int> selected;
  std::string cli, scenarios;
  app.add_option("--cli", cli, "Path to the ssd executable")->required();
  app.add_option("--scenarios", scenarios, "Directory with the shipped scenario files")->required();
  app.add_option("--criterion", selected, "Run only these criteria (1-10)");
  CLI11_PARSE(app, argc, argv);
  ctx.cli = cli;
  ctx.scenarios = scenarios;

  const std::vector<std::pair<std::string, std::function<Outcome(const Context&)>>> criteria = {
      {"equation spot checks", equations},
      {"conservation and consistency", conservation},
      {"adjacency oracle", adjacency},
      {"structural equivalence", equivalence},
      {"luminosity drop: spatial run ends cooler", drop_recovery},
      {"stress test: white extinction contrast", stress_extinction},
      {"luminosity ramp contrast", ramp_contrast},
      {"resolution trend", resolution_trend},
      {"determinism", determinism},
      {"performance budget", performance},
  };
  if (selected.empty()) {
    selected.resize(criteria.size());
    std::iota(selected.begin(), selected.end(), 1);
  }

  int failures = 0;
  for (int n : selected) {
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "no criterion " << n << "\n";
      return 2;
    }
    const auto& [name, fn] = criteria[static_cast<std::size_t>(n - 1)];
    Outcome o;
    try {
      o = fn(ctx);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << n << " [" << name << "]: " << (o.pass ? "PASS" : "FAIL") << " | " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
