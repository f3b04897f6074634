#include "ssd/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ssd {

std::string_view to_string(SimulationMode mode) {
  return mode == SimulationMode::spatial ? "spatial" : "nonspatial";
}

std::string_view to_string(AllocationRule rule) { return rule == AllocationRule::net ? "net" : "gross"; }

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("cannot format number");
  return std::string(buf, end);
}

void Scenario::validate() const {
  if (steps < 1) throw ScenarioError("steps must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ScenarioError("dt must be > 0");
  if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m)) throw ScenarioError("cell_size_m must be > 0");
  for (auto code : kAllCodes)
    if (!(area(code) >= 0.0) || !std::isfinite(area(code)))
      throw ScenarioError("area of " + std::string(to_string(code)) + " must be >= 0");
  if (!(total_area() > 0.0)) throw ScenarioError("total area must be > 0");
  if (snapshot_every < 0) throw ScenarioError("snapshot interval must be >= 0");
  if (grid_shape && (grid_shape->nrows <= 0 || grid_shape->ncols <= 0))
    throw ScenarioError("grid_shape dimensions must be positive");
  try {
    luminosity.validate();
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry, std::less<>>;

[[noreturn]] void fail(int line, std::string_view key, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line;
  if (!key.empty()) msg << ", key '" << key << "'";
  msg << ": " << what;
  throw ScenarioError(msg.str());
}

double to_number(const Entry& e, std::string_view key) {
  double v = 0.0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) fail(e.line, key, "malformed number '" + e.value + "'");
  return v;
}

template <class Int>
Int to_integer(const Entry& e, std::string_view key) {
  Int v{};
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) fail(e.line, key, "malformed integer '" + e.value + "'");
  return v;
}

// Pops known keys off a section; whatever remains afterwards is unknown.
class Reader {
 public:
  Reader(std::string name, Section section, int header_line)
      : name_(std::move(name)), section_(std::move(section)), header_line_(header_line) {}

  std::optional<Entry> take(std::string_view key) {
    auto it = section_.find(key);
    if (it == section_.end()) return std::nullopt;
    Entry e = it->second;
    section_.erase(it);
    return e;
  }

  Entry require(std::string_view key) {
    auto e = take(key);
    if (!e) fail(header_line_, key, "missing required key in " + name_);
    return *e;
  }

  void finish() const {
    if (!section_.empty()) {
      const auto& [key, e] = *section_.begin();
      fail(e.line, key, "unknown key in " + name_);
    }
  }

 private:
  std::string name_;
  Section section_;
  int header_line_;
};

}  // namespace

Scenario parse_scenario(std::string_view text) {
  std::map<std::string, Section, std::less<>> sections;
  std::map<std::string, int, std::less<>> section_lines{{"", 0}};
  sections[""];
  std::string current;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, {}, "malformed section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (current != "areas" && current != "luminosity" && current != "params")
        fail(line_no, {}, "unknown section [" + current + "]");
      if (section_lines.count(current)) fail(line_no, {}, "duplicate section [" + current + "]");
      section_lines[current] = line_no;
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, {}, "expected 'key = value'");
    const auto key = std::string(trim(line.substr(0, eq)));
    const auto value = std::string(trim(line.substr(eq + 1)));
    if (key.empty()) fail(line_no, {}, "empty key");
    if (value.empty()) fail(line_no, key, "empty value");
    if (!sections[current].emplace(key, Entry{value, line_no}).second) fail(line_no, key, "duplicate key");
  }

  Scenario sc;

  Reader top("top level", sections[""], 1);
  if (auto e = top.take("name")) sc.name = e->value;
  if (auto e = top.take("mode")) {
    if (e->value == "spatial")
      sc.mode = SimulationMode::spatial;
    else if (e->value == "nonspatial" || e->value == "non-spatial")
      sc.mode = SimulationMode::nonspatial;
    else
      fail(e->line, "mode", "expected spatial or nonspatial");
  }
  {
    auto e = top.require("steps");
    sc.steps = to_integer<int>(e, "steps");
    if (sc.steps < 1) fail(e.line, "steps", "must be >= 1");
  }
  if (auto e = top.take("dt")) sc.dt = to_number(*e, "dt");
  if (auto e = top.take("cell_size_m")) sc.cell_size_m = to_number(*e, "cell_size_m");
  if (auto e = top.take("seed")) sc.seed = to_integer<std::uint64_t>(*e, "seed");
  if (auto e = top.take("neighborhood")) {
    const int n = to_integer<int>(*e, "neighborhood");
    if (n == 8)
      sc.neighborhood = Neighborhood::moore;
    else if (n == 4)
      sc.neighborhood = Neighborhood::von_neumann;
    else
      fail(e->line, "neighborhood", "expected 8 or 4");
  }
  if (auto e = top.take("allocation")) {
    if (e->value == "net")
      sc.allocation = AllocationRule::net;
    else if (e->value == "gross")
      sc.allocation = AllocationRule::gross;
    else
      fail(e->line, "allocation", "expected net or gross");
  }
  if (auto e = top.take("snapshots")) {
    if (e->value == "none") {
      sc.snapshot_every = 0;
    } else if (e->value.rfind("every", 0) == 0) {
      Entry n{std::string(trim(std::string_view(e->value).substr(5))), e->line};
      sc.snapshot_every = to_integer<int>(n, "snapshots");
      if (sc.snapshot_every < 1) fail(e->line, "snapshots", "interval must be >= 1");
    } else {
      fail(e->line, "snapshots", "expected 'none' or 'every N'");
    }
  }
  if (auto e = top.take("grid_shape")) {
    const auto x = e->value.find('x');
    if (x == std::string::npos) fail(e->line, "grid_shape", "expected ROWSxCOLS");
    GridShape shape;
    shape.nrows = to_integer<int>(Entry{std::string(trim(std::string_view(e->value).substr(0, x))), e->line},
                                  "grid_shape");
    shape.ncols = to_integer<int>(Entry{std::string(trim(std::string_view(e->value).substr(x + 1))), e->line},
                                  "grid_shape");
    if (shape.nrows <= 0 || shape.ncols <= 0) fail(e->line, "grid_shape", "dimensions must be positive");
    sc.grid_shape = shape;
  }
  top.finish();

  if (!section_lines.count("areas")) fail(line_no, {}, "missing [areas] section");
  Reader areas("[areas]", sections["areas"], section_lines["areas"]);
  for (auto code : kAllCodes) {
    const auto key = to_string(code);
    auto e = areas.require(key);
    const double v = to_number(e, key);
    if (v < 0.0) fail(e.line, key, "area must be >= 0");
    sc.areas_ha[static_cast<int>(code)] = v;
  }
  areas.finish();

  if (!section_lines.count("luminosity")) fail(line_no, {}, "missing [luminosity] section");
  Reader lum("[luminosity]", sections["luminosity"], section_lines["luminosity"]);
  const auto kind = lum.require("kind");
  const double l0 = to_number(lum.require("L0"), "L0");
  if (kind.value == "constant") {
    sc.luminosity = LuminositySchedule::constant(l0);
  } else if (kind.value == "step") {
    const double l1 = to_number(lum.require("L1"), "L1");
    sc.luminosity = LuminositySchedule::step(l0, l1, to_number(lum.require("t_change"), "t_change"));
  } else if (kind.value == "ramp") {
    const double l1 = to_number(lum.require("L1"), "L1");
    const double t0 = to_number(lum.require("t_start"), "t_start");
    const auto end = lum.require("t_end");
    const double t1 = to_number(end, "t_end");
    if (!(t1 > t0)) fail(end.line, "t_end", "ramp needs t_end > t_start");
    sc.luminosity = LuminositySchedule::ramp(l0, l1, t0, t1);
  } else {
    fail(kind.line, "kind", "expected constant, step or ramp");
  }
  lum.finish();

  if (section_lines.count("params")) {
    Reader params("[params]", sections["params"], section_lines["params"]);
    auto set = [&](std::string_view key, double& field) {
      if (auto e = params.take(key)) field = to_number(*e, key);
    };
    auto& p = sc.params;
    set("albedo_fertile", p.albedo_fertile);
    set("albedo_black", p.albedo_black);
    set("albedo_white", p.albedo_white);
    set("albedo_barren", p.albedo_barren);
    set("solar_flux", p.solar_flux);
    set("stefan_boltzmann", p.stefan_boltzmann);
    set("q_prime", p.q_prime);
    set("decay_rate", p.decay_rate);
    set("growth_optimum", p.growth_optimum);
    set("growth_coeff", p.growth_coeff);
    set("extinction_fraction", p.extinction_fraction);
    params.finish();
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

std::string render_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "name = " << sc.name << '\n';
  out << "mode = " << to_string(sc.mode) << '\n';
  out << "steps = " << sc.steps << '\n';
  out << "dt = " << format_double(sc.dt) << '\n';
  out << "cell_size_m = " << format_double(sc.cell_size_m) << '\n';
  out << "seed = " << sc.seed << '\n';
  out << "neighborhood = " << neighbor_count(sc.neighborhood) << '\n';
  out << "allocation = " << to_string(sc.allocation) << '\n';
  if (sc.snapshot_every > 0)
    out << "snapshots = every " << sc.snapshot_every << '\n';
  else
    out << "snapshots = none\n";
  if (sc.grid_shape) out << "grid_shape = " << sc.grid_shape->nrows << 'x' << sc.grid_shape->ncols << '\n';

  out << "\n[areas]\n";
  for (auto code : kAllCodes) out << to_string(code) << " = " << format_double(sc.area(code)) << '\n';

  const auto& l = sc.luminosity;
  out << "\n[luminosity]\n";
  out << "kind = " << to_string(l.kind) << '\n';
  out << "L0 = " << format_double(l.l0) << '\n';
  if (l.kind == ScheduleKind::step) {
    out << "L1 = " << format_double(l.l1) << '\n';
    out << "t_change = " << format_double(l.t_change) << '\n';
  } else if (l.kind == ScheduleKind::ramp) {
    out << "L1 = " << format_double(l.l1) << '\n';
    out << "t_start = " << format_double(l.t_start) << '\n';
    out << "t_end = " << format_double(l.t_end) << '\n';
  }

  const auto& p = sc.params;
  out << "\n[params]\n";
  out << "albedo_fertile = " << format_double(p.albedo_fertile) << '\n';
  out << "albedo_black = " << format_double(p.albedo_black) << '\n';
  out << "albedo_white = " << format_double(p.albedo_white) << '\n';
  out << "albedo_barren = " << format_double(p.albedo_barren) << '\n';
  out << "solar_flux = " << format_double(p.solar_flux) << '\n';
  out << "stefan_boltzmann = " << format_double(p.stefan_boltzmann) << '\n';
  out << "q_prime = " << format_double(p.q_prime) << '\n';
  out << "decay_rate = " << format_double(p.decay_rate) << '\n';
  out << "growth_optimum = " << format_double(p.growth_optimum) << '\n';
  out << "growth_coeff = " << format_double(p.growth_coeff) << '\n';
  out << "extinction_fraction = " << format_double(p.extinction_fraction) << '\n';
  return out.str();
}

}  // namespace ssd
