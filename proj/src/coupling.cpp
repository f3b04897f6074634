#include "ssd/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ssd/io.hpp"

namespace ssd {

RunError::RunError(int step, const std::string& what)
    : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

std::int64_t cells_for_area(double area_ha, double cell_area_ha, std::string_view what) {
  if (!(area_ha >= 0.0) || !std::isfinite(area_ha))
    throw InitializationError(std::string(what) + " must be a finite non-negative area");
  const double ratio = area_ha / cell_area_ha;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    const double lo = std::floor(ratio) * cell_area_ha;
    const double hi = std::ceil(ratio) * cell_area_ha;
    throw InitializationError(std::string(what) + " " + format_double(area_ha) +
                              " ha is not a whole number of cells of " + format_double(cell_area_ha) +
                              " ha; nearest legal areas are " + format_double(lo) + " and " + format_double(hi));
  }
  return static_cast<std::int64_t>(n);
}

GridShape default_grid_shape(std::int64_t n_cells) {
  if (n_cells <= 0) throw InitializationError("grid needs at least one cell");
  auto rows = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n_cells)));
  while (rows * rows > n_cells) --rows;
  while ((rows + 1) * (rows + 1) <= n_cells) ++rows;
  while (n_cells % rows != 0) --rows;
  const auto cols = n_cells / rows;
  if (cols > std::numeric_limits<int>::max()) throw InitializationError("grid too large");
  return {static_cast<int>(rows), static_cast<int>(cols)};
}

namespace {

std::string id(std::string_view v) { return std::string(v); }

sd::SimState inject_multipliers(const sd::StockFlowModel& model, sd::SimState sim, const LandGrid& grid,
                                Neighborhood hood) {
  const auto stats = adjacency_stats(grid, hood);
  sim = sd::inject(model, std::move(sim), var::multiplier_black, growth_reduction(stats, LandCode::black, hood));
  sim = sd::inject(model, std::move(sim), var::multiplier_white, growth_reduction(stats, LandCode::white, hood));
  return sim;
}

sd::SimState snap_stocks(const sd::StockFlowModel& model, sd::SimState sim, const LandGrid& grid) {
  const auto counts = census(grid);
  const double ca = grid.cell_area_ha();
  sim = sd::set_stock(model, std::move(sim), var::area_black, counts[1] * ca);
  sim = sd::set_stock(model, std::move(sim), var::area_white, counts[2] * ca);
  sim = sd::set_stock(model, std::move(sim), var::area_fertile, counts[0] * ca);
  return sim;
}

struct Realized {
  std::int64_t grown = 0;
  std::int64_t decayed = 0;
};

// Whole cells out of an accumulated area; the remainder stays in [0, ca).
std::int64_t take_cells(double& carry, double ca) {
  auto n = static_cast<std::int64_t>(std::floor(carry / ca));
  if (n < 0) n = 0;
  carry -= static_cast<double>(n) * ca;
  if (carry < 0.0) carry = 0.0;
  return n;
}

Realized reconcile(CouplingState& s, LandCode species, Carry& carry, double growth_ha, double decay_ha,
                   int stamp) {
  const double ca = s.grid.cell_area_ha();
  Realized out;
  if (s.allocation == AllocationRule::gross) {
    carry.growth += growth_ha;
    carry.decay += decay_ha;
    const auto n_grow = take_cells(carry.growth, ca);
    out.grown = allocate_growth(s.grid, species, n_grow, stamp, s.rng, s.neighborhood);
    const auto n_decay = take_cells(carry.decay, ca);
    out.decayed = allocate_decay(s.grid, species, n_decay, s.rng);
    return out;
  }
  double net = carry.growth - carry.decay + growth_ha - decay_ha;
  if (net >= 0.0) {
    const auto n = take_cells(net, ca);
    out.grown = allocate_growth(s.grid, species, n, stamp, s.rng, s.neighborhood);
    carry = {net, 0.0};
  } else {
    double loss = -net;
    const auto n = take_cells(loss, ca);
    out.decayed = allocate_decay(s.grid, species, n, s.rng);
    carry = {0.0, loss};
  }
  return out;
}

}  // namespace

CouplingState initialize(const Scenario& scenario, const DaisyParams& p, std::optional<LandGrid> landscape) {
  scenario.validate();
  CouplingState s;
  s.neighborhood = scenario.neighborhood;
  s.allocation = scenario.allocation;
  s.rng = Rng(scenario.seed);

  if (landscape) {
    if (std::abs(landscape->cell_size_m() - scenario.cell_size_m) > 1e-12 * scenario.cell_size_m)
      throw InitializationError("landscape cell size " + format_double(landscape->cell_size_m()) +
                                " m differs from scenario cell size " + format_double(scenario.cell_size_m) + " m");
    const auto counts = census(*landscape);
    const double ca = landscape->cell_area_ha();
    for (auto code : kAllCodes) {
      const double have = counts[static_cast<int>(code)] * ca;
      const double want = scenario.area(code);
      if (std::abs(have - want) > 1e-9 * std::max(1.0, want))
        throw InitializationError("landscape has " + format_double(have) + " ha " + std::string(to_string(code)) +
                                  ", scenario says " + format_double(want) + " ha");
    }
    s.grid = std::move(*landscape);
  } else {
    const double ca = scenario.cell_size_m * scenario.cell_size_m / 10'000.0;
    Census counts{};
    std::int64_t total = 0;
    for (auto code : kAllCodes) {
      counts[static_cast<int>(code)] = cells_for_area(scenario.area(code), ca, to_string(code));
      total += counts[static_cast<int>(code)];
    }
    GridShape shape = scenario.grid_shape ? *scenario.grid_shape : default_grid_shape(total);
    if (static_cast<std::int64_t>(shape.nrows) * shape.ncols != total)
      throw InitializationError("grid shape " + std::to_string(shape.nrows) + "x" + std::to_string(shape.ncols) +
                                " does not hold " + std::to_string(total) + " cells");
    s.grid = generate_landscape(counts, shape.nrows, shape.ncols, scenario.cell_size_m, s.rng);
  }

  // Stocks start from the census, not the nominal areas.
  Scenario snapped = scenario;
  const auto counts = census(s.grid);
  for (auto code : kAllCodes) snapped.areas_ha[static_cast<int>(code)] = counts[static_cast<int>(code)] * s.grid.cell_area_ha();
  s.model = std::make_shared<const sd::StockFlowModel>(build_spatial_model(snapped, p));

  const auto stats = adjacency_stats(s.grid, s.neighborhood);
  const std::pair<std::string, double> inj[] = {
      {id(var::multiplier_black), growth_reduction(stats, LandCode::black, s.neighborhood)},
      {id(var::multiplier_white), growth_reduction(stats, LandCode::white, s.neighborhood)}};
  s.sim = sd::init_state(*s.model, inj);
  return s;
}

SimulationRecord current_record(const CouplingState& s) {
  const auto& m = *s.model;
  const auto counts = census(s.grid);
  const double ca = s.grid.cell_area_ha();
  SimulationRecord r;
  r.time = s.sim.time;
  r.luminosity = sd::get_value(m, s.sim, var::luminosity);
  r.temperature_c = sd::get_value(m, s.sim, var::temperature);
  r.area_fertile_ha = counts[0] * ca;
  r.area_black_ha = counts[1] * ca;
  r.area_white_ha = counts[2] * ca;
  r.area_barren_ha = counts[3] * ca;
  r.albedo = sd::get_value(m, s.sim, var::albedo);
  r.d_black = sd::get_value(m, s.sim, var::multiplier_black);
  r.d_white = sd::get_value(m, s.sim, var::multiplier_white);
  r.grown_black = s.grown_black;
  r.grown_white = s.grown_white;
  r.decayed_black = s.decayed_black;
  r.decayed_white = s.decayed_white;
  return r;
}

std::pair<CouplingState, SimulationRecord> step_once(CouplingState s) {
  const auto& m = *s.model;
  const int stamp = s.step_index + 1;
  s.sim = inject_multipliers(m, std::move(s.sim), s.grid, s.neighborhood);
  s.sim = sd::step(m, std::move(s.sim));

  const double dt = m.dt();
  const auto b = reconcile(s, LandCode::black, s.black, sd::applied_flow(m, s.sim, var::black_growth) * dt,
                           sd::applied_flow(m, s.sim, var::black_decay) * dt, stamp);
  const auto w = reconcile(s, LandCode::white, s.white, sd::applied_flow(m, s.sim, var::white_growth) * dt,
                           sd::applied_flow(m, s.sim, var::white_decay) * dt, stamp);
  s.grown_black = b.grown;
  s.decayed_black = b.decayed;
  s.grown_white = w.grown;
  s.decayed_white = w.decayed;

  s.sim = snap_stocks(m, std::move(s.sim), s.grid);
  s.sim = inject_multipliers(m, std::move(s.sim), s.grid, s.neighborhood);
  s.step_index = stamp;
  auto record = current_record(s);
  return {std::move(s), record};
}

namespace {

void maybe_snapshot(const Scenario& sc, const RunOptions& opt, const CouplingState& s) {
  if (sc.snapshot_every <= 0 || !opt.snapshot_dir) return;
  if (s.step_index % sc.snapshot_every != 0) return;
  io::save_snapshot(s.grid, io::snapshot_path(*opt.snapshot_dir, s.step_index));
}

}  // namespace

std::vector<SimulationRecord> run(const Scenario& scenario, const DaisyParams& p, const RunOptions& options) {
  if (scenario.mode == SimulationMode::nonspatial) return run_nonspatial(scenario, p);
  if (options.snapshot_dir && scenario.snapshot_every > 0) std::filesystem::create_directories(*options.snapshot_dir);

  auto state = initialize(scenario, p, options.landscape);
  std::vector<SimulationRecord> records;
  records.reserve(static_cast<std::size_t>(scenario.steps) + 1);
  records.push_back(current_record(state));
  maybe_snapshot(scenario, options, state);
  for (int k = 1; k <= scenario.steps; ++k) {
    try {
      auto [next, record] = step_once(std::move(state));
      state = std::move(next);
      records.push_back(record);
    } catch (const std::exception& e) {
      throw RunError(k, e.what());
    }
    maybe_snapshot(scenario, options, state);
  }
  return records;
}

std::vector<SimulationRecord> run_nonspatial(const Scenario& scenario, const DaisyParams& p) {
  scenario.validate();
  const auto model = build_nonspatial_model(scenario, p);
  auto sim = sd::init_state(model);
  const double total = scenario.total_area();
  const double threshold = p.extinction_fraction * total;

  auto record = [&](const sd::SimState& st) {
    SimulationRecord r;
    r.time = st.time;
    r.luminosity = sd::get_value(model, st, var::luminosity);
    r.temperature_c = sd::get_value(model, st, var::temperature);
    r.area_black_ha = sd::get_value(model, st, var::area_black);
    r.area_white_ha = sd::get_value(model, st, var::area_white);
    r.area_barren_ha = scenario.area(LandCode::barren);
    r.area_fertile_ha = total - r.area_black_ha - r.area_white_ha - r.area_barren_ha;
    r.albedo = sd::get_value(model, st, var::albedo);
    r.d_black = r.d_white = sd::get_value(model, st, var::fraction_fertile);
    return r;
  };

  std::vector<SimulationRecord> records;
  records.reserve(static_cast<std::size_t>(scenario.steps) + 1);
  records.push_back(record(sim));
  for (int k = 1; k <= scenario.steps; ++k) {
    try {
      sim = sd::step(model, std::move(sim));
      for (auto species : {var::area_black, var::area_white}) {
        const double v = sd::get_value(model, sim, species);
        if (v != 0.0 && v < threshold) {
          const double fertile = sd::get_value(model, sim, var::area_fertile);
          sim = sd::set_stock(model, std::move(sim), species, 0.0);
          sim = sd::set_stock(model, std::move(sim), var::area_fertile, fertile + v);
        }
      }
    } catch (const std::exception& e) {
      throw RunError(k, e.what());
    }
    records.push_back(record(sim));
  }
  return records;
}

}  // namespace ssd
