#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>
#include <pybind11/operators.h>

#include <sstream>

#include "ssd/batch.hpp"
#include "ssd/coupling.hpp"
#include "ssd/io.hpp"
#include "ssd/scenario.hpp"

namespace py = pybind11;
using namespace ssd;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spatial system dynamics Daisyworld simulator";
  m.attr("__version__") = version();

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<InitializationError>(m, "InitializationError", PyExc_ValueError);
  py::register_exception<GridError>(m, "GridError", PyExc_ValueError);
  py::register_exception<io::FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<RunError>(m, "RunError", PyExc_RuntimeError);

  py::enum_<LandCode>(m, "LandCode")
      .value("fertile", LandCode::fertile)
      .value("black", LandCode::black)
      .value("white", LandCode::white)
      .value("barren", LandCode::barren);
  py::enum_<Neighborhood>(m, "Neighborhood")
      .value("moore", Neighborhood::moore)
      .value("von_neumann", Neighborhood::von_neumann);
  py::enum_<SimulationMode>(m, "SimulationMode")
      .value("spatial", SimulationMode::spatial)
      .value("nonspatial", SimulationMode::nonspatial);
  py::enum_<AllocationRule>(m, "AllocationRule").value("net", AllocationRule::net).value("gross", AllocationRule::gross);

  py::class_<DaisyParams>(m, "DaisyParams")
      .def(py::init<>())
      .def_readwrite("albedo_fertile", &DaisyParams::albedo_fertile)
      .def_readwrite("albedo_black", &DaisyParams::albedo_black)
      .def_readwrite("albedo_white", &DaisyParams::albedo_white)
      .def_readwrite("albedo_barren", &DaisyParams::albedo_barren)
      .def_readwrite("solar_flux", &DaisyParams::solar_flux)
      .def_readwrite("stefan_boltzmann", &DaisyParams::stefan_boltzmann)
      .def_readwrite("q_prime", &DaisyParams::q_prime)
      .def_readwrite("decay_rate", &DaisyParams::decay_rate)
      .def_readwrite("growth_optimum", &DaisyParams::growth_optimum)
      .def_readwrite("growth_coeff", &DaisyParams::growth_coeff)
      .def_readwrite("extinction_fraction", &DaisyParams::extinction_fraction)
      .def("validate", &DaisyParams::validate)
      .def(py::self == py::self);

  py::class_<LuminositySchedule>(m, "LuminositySchedule")
      .def_static("constant", &LuminositySchedule::constant, py::arg("l"))
      .def_static("step", &LuminositySchedule::step, py::arg("l0"), py::arg("l1"), py::arg("t_change"))
      .def_static("ramp", &LuminositySchedule::ramp, py::arg("l0"), py::arg("l1"), py::arg("t_start"),
                  py::arg("t_end"))
      .def("at", &LuminositySchedule::at, py::arg("time"))
      .def_property_readonly("kind", [](const LuminositySchedule& s) { return std::string(to_string(s.kind)); })
      .def_readonly("l0", &LuminositySchedule::l0)
      .def_readonly("l1", &LuminositySchedule::l1);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("name", &Scenario::name)
      .def_readwrite("mode", &Scenario::mode)
      .def_readwrite("steps", &Scenario::steps)
      .def_readwrite("dt", &Scenario::dt)
      .def_readwrite("cell_size_m", &Scenario::cell_size_m)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("neighborhood", &Scenario::neighborhood)
      .def_readwrite("allocation", &Scenario::allocation)
      .def_readwrite("snapshot_every", &Scenario::snapshot_every)
      .def_readwrite("luminosity", &Scenario::luminosity)
      .def_readwrite("params", &Scenario::params)
      .def_property(
          "areas_ha",
          [](const Scenario& s) {
            py::dict d;
            for (auto c : kAllCodes) d[py::str(std::string(to_string(c)))] = s.area(c);
            return d;
          },
          [](Scenario& s, const std::map<std::string, double>& areas) {
            for (const auto& [k, v] : areas) {
              const auto code = land_code_from_name(k);
              if (!code) throw py::value_error("unknown land code '" + k + "'");
              s.areas_ha[static_cast<int>(*code)] = v;
            }
          })
      .def_property(
          "grid_shape",
          [](const Scenario& s) -> std::optional<std::pair<int, int>> {
            if (!s.grid_shape) return std::nullopt;
            return std::pair{s.grid_shape->nrows, s.grid_shape->ncols};
          },
          [](Scenario& s, std::optional<std::pair<int, int>> shape) {
            if (shape)
              s.grid_shape = GridShape{shape->first, shape->second};
            else
              s.grid_shape.reset();
          })
      .def("total_area", &Scenario::total_area)
      .def("validate", &Scenario::validate)
      .def(py::self == py::self);

  m.def("parse_scenario", &parse_scenario, py::arg("text"));
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("render_scenario", &render_scenario, py::arg("scenario"));

  m.def("planetary_albedo",
        [](double black, double white, double barren, const DaisyParams& p) {
          return planetary_albedo(AreaState{black, white, barren}, p);
        },
        py::arg("black"), py::arg("white"), py::arg("barren"), py::arg("params") = DaisyParams{},
        "Area-weighted albedo; arguments are fractions of the planet, fertile soil is the remainder.");
  m.def("planetary_temperature", &planetary_temperature, py::arg("luminosity"), py::arg("albedo"),
        py::arg("params") = DaisyParams{});
  m.def("local_temperature", &local_temperature, py::arg("albedo"), py::arg("species_albedo"),
        py::arg("planetary_temperature"), py::arg("params") = DaisyParams{});
  m.def("growth_rate", &growth_rate, py::arg("local_temperature"), py::arg("params") = DaisyParams{});

  py::class_<LandGrid>(m, "LandGrid")
      .def(py::init<int, int, double>(), py::arg("nrows"), py::arg("ncols"), py::arg("cell_size_m"))
      .def_property_readonly("nrows", &LandGrid::nrows)
      .def_property_readonly("ncols", &LandGrid::ncols)
      .def_property_readonly("cell_size_m", &LandGrid::cell_size_m)
      .def_property_readonly("cell_area_ha", &LandGrid::cell_area_ha)
      .def("code", py::overload_cast<int, int>(&LandGrid::code, py::const_), py::arg("row"), py::arg("col"))
      .def("age", &LandGrid::age, py::arg("row"), py::arg("col"))
      .def("set", py::overload_cast<int, int, LandCode, int>(&LandGrid::set), py::arg("row"), py::arg("col"),
           py::arg("code"), py::arg("timestamp") = 0)
      .def("codes",
           [](const LandGrid& g) {
             std::vector<std::vector<int>> rows(static_cast<std::size_t>(g.nrows()));
             for (int r = 0; r < g.nrows(); ++r)
               for (int c = 0; c < g.ncols(); ++c) rows[r].push_back(static_cast<int>(g.code(r, c)));
             return rows;
           },
           "Codes as a list of rows of ints.")
      .def(py::self == py::self);

  m.def("generate_landscape",
        [](const std::map<std::string, std::int64_t>& counts, int nrows, int ncols, double cell_size_m,
           std::uint64_t seed) {
          Census c{};
          for (const auto& [k, v] : counts) {
            const auto code = land_code_from_name(k);
            if (!code) throw py::value_error("unknown land code '" + k + "'");
            c[static_cast<int>(*code)] = v;
          }
          Rng rng(seed);
          return generate_landscape(c, nrows, ncols, cell_size_m, rng);
        },
        py::arg("counts"), py::arg("nrows"), py::arg("ncols"), py::arg("cell_size_m"), py::arg("seed"));
  m.def("census", [](const LandGrid& g) {
    const auto c = census(g);
    py::dict d;
    for (auto code : kAllCodes) d[py::str(std::string(to_string(code)))] = c[static_cast<int>(code)];
    return d;
  });
  m.def("adjacency_stats",
        [](const LandGrid& g, Neighborhood hood) {
          const auto s = adjacency_stats(g, hood);
          py::dict d;
          d["g_black"] = s.g_black;
          d["g_white"] = s.g_white;
          d["c_black"] = s.c_black;
          d["c_white"] = s.c_white;
          return d;
        },
        py::arg("grid"), py::arg("neighborhood") = Neighborhood::moore);
  m.def("growth_reduction",
        [](const LandGrid& g, LandCode species, Neighborhood hood) {
          return growth_reduction(adjacency_stats(g, hood), species, hood);
        },
        py::arg("grid"), py::arg("species"), py::arg("neighborhood") = Neighborhood::moore);
  m.def("refine", &refine, py::arg("grid"), py::arg("factor"));
  m.def("read_grid", &io::read_grid, py::arg("text"));
  m.def("write_grid", &io::write_grid, py::arg("grid"));
  m.def("load_grid", &io::load_grid, py::arg("path"));

  py::class_<SimulationRecord>(m, "Record")
      .def_readonly("time", &SimulationRecord::time)
      .def_readonly("luminosity", &SimulationRecord::luminosity)
      .def_readonly("temperature_c", &SimulationRecord::temperature_c)
      .def_readonly("area_black_ha", &SimulationRecord::area_black_ha)
      .def_readonly("area_white_ha", &SimulationRecord::area_white_ha)
      .def_readonly("area_fertile_ha", &SimulationRecord::area_fertile_ha)
      .def_readonly("area_barren_ha", &SimulationRecord::area_barren_ha)
      .def_readonly("albedo", &SimulationRecord::albedo)
      .def_readonly("d_black", &SimulationRecord::d_black)
      .def_readonly("d_white", &SimulationRecord::d_white)
      .def_readonly("grown_black", &SimulationRecord::grown_black)
      .def_readonly("grown_white", &SimulationRecord::grown_white)
      .def_readonly("decayed_black", &SimulationRecord::decayed_black)
      .def_readonly("decayed_white", &SimulationRecord::decayed_white)
      .def(py::self == py::self)
      .def("__repr__", [](const SimulationRecord& r) {
        std::ostringstream s;
        s << "Record(time=" << r.time << ", temperature_c=" << r.temperature_c << ")";
        return s.str();
      });

  m.def("run",
        [](const Scenario& sc, std::optional<LandGrid> landscape) {
          py::gil_scoped_release release;
          RunOptions opt;
          opt.landscape = std::move(landscape);
          return run(sc, sc.params, opt);
        },
        py::arg("scenario"), py::arg("landscape") = std::nullopt,
        "Initial record plus one per step; dispatches on scenario.mode.");
  m.def("run_ensemble",
        [](const Scenario& sc, int k, int threads) {
          py::gil_scoped_release release;
          std::vector<std::pair<std::uint64_t, std::vector<SimulationRecord>>> out;
          for (auto& m : run_ensemble(sc, k, threads)) out.emplace_back(m.seed, std::move(m.records));
          return out;
        },
        py::arg("scenario"), py::arg("seeds"), py::arg("threads") = 0, "List of (seed, records).");
  m.def("run_sweep",
        [](const Scenario& sc, std::vector<double> cell_sizes, bool regenerate, int threads) {
          py::gil_scoped_release release;
          SweepOptions opt;
          opt.cell_sizes_m = std::move(cell_sizes);
          opt.source = regenerate ? SweepSource::regenerate : SweepSource::refine;
          std::vector<std::pair<double, std::vector<SimulationRecord>>> out;
          for (auto& m : run_sweep(sc, opt, threads)) out.emplace_back(m.cell_size_m, std::move(m.records));
          return out;
        },
        py::arg("scenario"), py::arg("cell_sizes_m"), py::arg("regenerate") = false, py::arg("threads") = 0,
        "List of (cell_size_m, records).");
  m.def("write_records",
        [](const std::vector<SimulationRecord>& records) {
          std::ostringstream s;
          io::write_records(records, s);
          return s.str();
        },
        py::arg("records"), "Records CSV text.");
}
