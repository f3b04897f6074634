"""Python bindings for the ssd spatial Daisyworld simulator."""

from ._core import (  # noqa: F401
    AllocationRule,
    DaisyParams,
    LandCode,
    LandGrid,
    LuminositySchedule,
    Neighborhood,
    Record,
    Scenario,
    SimulationMode,
    __version__,
    adjacency_stats,
    census,
    growth_rate,
    growth_reduction,
    load_grid,
    load_scenario,
    local_temperature,
    parse_scenario,
    planetary_albedo,
    planetary_temperature,
    read_grid,
    refine,
    render_scenario,
    run,
    run_ensemble,
    run_sweep,
    generate_landscape,
    write_grid,
    write_records,
)


def records_to_columns(records):
    """Column name -> list of values, in the records CSV column order."""
    names = RECORD_COLUMNS
    return {name: [getattr(r, attr) for r in records] for name, attr in zip(names, _RECORD_ATTRS)}


RECORD_COLUMNS = (
    "time luminosity temperature_C area_black_ha area_white_ha area_fertile_ha area_barren_ha albedo "
    "D_black D_white grown_black grown_white decayed_black decayed_white"
).split()

_RECORD_ATTRS = (
    "time luminosity temperature_c area_black_ha area_white_ha area_fertile_ha area_barren_ha albedo "
    "d_black d_white grown_black grown_white decayed_black decayed_white"
).split()
