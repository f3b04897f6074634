#include <doctest.h>

#include <filesystem>

#include "ssd/batch.hpp"
#include "ssd/coupling.hpp"
#include "ssd/io.hpp"

using namespace ssd;

namespace {

Scenario fig7_like(std::uint64_t seed = 1) {
  Scenario sc;
  sc.steps = 100;
  sc.areas_ha = {500, 100, 100, 300};
  sc.luminosity = LuminositySchedule::step(1.0, 0.9, 50);
  sc.seed = seed;
  return sc;
}

void check_invariants(const CouplingState& s, const Census& initial) {
  const auto c = census(s.grid);
  const double ca = s.grid.cell_area_ha();
  const auto& m = *s.model;
  REQUIRE(c[0] + c[1] + c[2] + c[3] == static_cast<std::int64_t>(s.grid.cell_count()));
  REQUIRE(c[3] == initial[3]);
  REQUIRE(sd::get_value(m, s.sim, var::area_black) == c[1] * ca);
  REQUIRE(sd::get_value(m, s.sim, var::area_white) == c[2] * ca);
  REQUIRE(sd::get_value(m, s.sim, var::area_fertile) == c[0] * ca);
  for (std::size_t i = 0; i < s.grid.cell_count(); ++i) {
    if (is_daisy(s.grid.code(i))) {
      REQUIRE(s.grid.raw_age(i) >= 0);
      REQUIRE(s.grid.raw_age(i) <= s.step_index);
    } else {
      REQUIRE(s.grid.raw_age(i) == LandGrid::kNoAge);
    }
  }
  REQUIRE(s.black.growth >= 0.0);
  REQUIRE(s.black.growth < ca);
  REQUIRE(s.white.decay >= 0.0);
  REQUIRE(s.white.decay < ca);
}

}  // namespace

TEST_CASE("default grid shape") {
  CHECK(default_grid_shape(1000) == GridShape{25, 40});
  CHECK(default_grid_shape(64000) == GridShape{250, 256});
  CHECK(default_grid_shape(7) == GridShape{1, 7});
  CHECK(default_grid_shape(36) == GridShape{6, 6});
}

TEST_CASE("areas must be whole cells") {
  CHECK(cells_for_area(100.0, 0.25) == 400);
  CHECK(cells_for_area(100.0, 0.015625) == 6400);
  try {
    cells_for_area(100.5, 1.0, "black");
    FAIL("expected an error");
  } catch (const InitializationError& e) {
    const std::string what = e.what();
    CHECK(what.find("100") != std::string::npos);
    CHECK(what.find("101") != std::string::npos);
  }
  auto sc = fig7_like();
  sc.cell_size_m = 300;
  CHECK_THROWS_AS(initialize(sc, sc.params), InitializationError);
  sc = fig7_like();
  sc.grid_shape = GridShape{10, 10};
  CHECK_THROWS_AS(initialize(sc, sc.params), InitializationError);
}

TEST_CASE("coupled invariants hold at every step") {
  for (auto rule : {AllocationRule::net, AllocationRule::gross}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      for (auto hood : {Neighborhood::moore, Neighborhood::von_neumann}) {
        auto sc = fig7_like(seed);
        sc.allocation = rule;
        sc.neighborhood = hood;
        auto s = initialize(sc, sc.params);
        const auto initial = census(s.grid);
        check_invariants(s, initial);
        for (int k = 1; k <= sc.steps; ++k) {
          auto [next, rec] = step_once(s);
          s = std::move(next);
          REQUIRE(s.step_index == k);
          check_invariants(s, initial);
          REQUIRE(rec.area_black_ha + rec.area_white_ha + rec.area_fertile_ha + rec.area_barren_ha == 1000.0);
          const auto stats = adjacency_stats(s.grid, hood);
          REQUIRE(rec.d_black == growth_reduction(stats, LandCode::black, hood));
          REQUIRE(rec.d_white == growth_reduction(stats, LandCode::white, hood));
          for (std::size_t i = 0; i < s.grid.cell_count(); ++i)
            if (s.grid.raw_age(i) == k) REQUIRE(s.grid.code(i) != LandCode::fertile);
        }
      }
    }
  }
}

TEST_CASE("net allocation never grows and decays a species in the same step") {
  auto sc = fig7_like(4);
  const auto records = run(sc, sc.params);
  for (const auto& r : records) {
    CHECK((r.grown_black == 0 || r.decayed_black == 0));
    CHECK((r.grown_white == 0 || r.decayed_white == 0));
  }
}

TEST_CASE("runs are deterministic and depend on the seed") {
  const auto a = run(fig7_like(3), {});
  const auto b = run(fig7_like(3), {});
  const auto c = run(fig7_like(4), {});
  CHECK(a == b);
  CHECK(a.size() == 101);
  CHECK_FALSE(a == c);
}

TEST_CASE("failed step leaves the previous state intact") {
  auto sc = fig7_like();
  sc.luminosity = LuminositySchedule::step(1.0, 1e300, 3);
  auto s = initialize(sc, sc.params);
  s = step_once(s).first;
  s = step_once(s).first;
  const auto grid = s.grid;
  const auto values = s.sim.values;
  const auto carry = s.black.growth;
  CHECK_THROWS(step_once(s));
  CHECK(s.grid == grid);
  CHECK(s.sim.values == values);
  CHECK(s.black.growth == carry);
  CHECK(s.step_index == 2);
  try {
    run(sc, sc.params);
    FAIL("expected RunError");
  } catch (const RunError& e) {
    CHECK(e.step() == 3);
  }
}

TEST_CASE("supplied landscape must agree with the scenario") {
  auto sc = fig7_like();
  auto grid = initialize(sc, sc.params).grid;
  RunOptions opt;
  opt.landscape = grid;
  CHECK(run(sc, sc.params, opt).front().area_white_ha == 100.0);
  sc.areas_ha = {400, 200, 100, 300};
  CHECK_THROWS_AS(run(sc, sc.params, opt), InitializationError);
  sc = fig7_like();
  opt.landscape = refine(grid, 2);
  CHECK_THROWS_AS(run(sc, sc.params, opt), InitializationError);
  sc.cell_size_m = 50;
  CHECK(run(sc, sc.params, opt).size() == 101);
}

TEST_CASE("pinning the multipliers to x reproduces the lumped model") {
  auto sc = fig7_like();
  sc.mode = SimulationMode::nonspatial;
  DaisyParams p;
  p.extinction_fraction = 0.0;
  const auto lumped = build_nonspatial_model(sc, p);
  const auto spatial = build_spatial_model(sc, p);
  auto a = sd::init_state(lumped);
  const double x0 = sd::get_value(lumped, a, var::fraction_fertile);
  const std::pair<std::string, double> inj[] = {{"D_black", x0}, {"D_white", x0}};
  auto b = sd::init_state(spatial, inj);
  for (int k = 0; k < 100; ++k) {
    const double x = sd::get_value(spatial, b, var::fraction_fertile);
    b = sd::inject(spatial, b, var::multiplier_black, x);
    b = sd::inject(spatial, b, var::multiplier_white, x);
    b = sd::step(spatial, b);
    a = sd::step(lumped, a);
    for (auto id : {var::area_black, var::area_white, var::area_fertile})
      REQUIRE(std::abs(sd::get_value(lumped, a, id) - sd::get_value(spatial, b, id)) <= 1e-12);
  }
}

TEST_CASE("non-spatial extinction snap returns area to fertile soil") {
  Scenario sc;
  sc.mode = SimulationMode::nonspatial;
  sc.steps = 30;
  sc.areas_ha = {0, 500, 10, 490};
  sc.luminosity = LuminositySchedule::constant(1.0);
  sc.params.decay_rate = 1.0;  // everything dies in one step
  const auto records = run(sc, sc.params);
  for (const auto& r : records) {
    CHECK(r.area_black_ha + r.area_white_ha + r.area_fertile_ha + r.area_barren_ha == doctest::Approx(1000.0));
    CHECK(r.d_black == r.d_white);
  }
  CHECK(records[1].area_black_ha == 0.0);
  CHECK(records[1].area_white_ha == 0.0);
  CHECK(records[1].area_fertile_ha == 510.0);
}

TEST_CASE("snapshots are written every N steps") {
  auto sc = fig7_like();
  sc.steps = 6;
  sc.snapshot_every = 3;
  const auto dir = std::filesystem::temp_directory_path() / "ssd_test_snapshots";
  std::filesystem::remove_all(dir);
  RunOptions opt;
  opt.snapshot_dir = dir;
  run(sc, sc.params, opt);
  CHECK(std::filesystem::exists(io::snapshot_path(dir, 0)));
  CHECK(std::filesystem::exists(io::snapshot_path(dir, 3)));
  CHECK(std::filesystem::exists(io::snapshot_path(dir, 6)));
  CHECK_FALSE(std::filesystem::exists(io::snapshot_path(dir, 1)));
  std::filesystem::remove_all(dir);
}

TEST_CASE("ensemble and sweep") {
  auto sc = fig7_like(5);
  sc.steps = 10;
  const auto members = run_ensemble(sc, 3, 2);
  REQUIRE(members.size() == 3);
  CHECK(members[1].seed == 6);
  auto s6 = fig7_like(6);
  s6.steps = 10;
  CHECK(members[1].records == run(s6, s6.params));

  SweepOptions opt;
  opt.cell_sizes_m = {100, 50};
  const auto sweep = run_sweep(sc, opt, 2);
  REQUIRE(sweep.size() == 2);
  CHECK(sweep[0].records.front().temperature_c == sweep[1].records.front().temperature_c);
  opt.cell_sizes_m = {100, 30};
  CHECK_THROWS(run_sweep(sc, opt, 1));
}

TEST_CASE("table comparison") {
  io::Table a{{"x", "y"}, {{1, 2}, {3, 4}}};
  auto b = a;
  CHECK(compare_tables(a, b).identical);
  b.rows[1][1] = 4.5;
  const auto c = compare_tables(a, b);
  CHECK_FALSE(c.identical);
  CHECK(c.max_abs_diff[1].second == 0.5);
  b.columns[0] = "z";
  CHECK_FALSE(compare_tables(a, b).schema_match);
}
