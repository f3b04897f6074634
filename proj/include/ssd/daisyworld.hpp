#pragma once

// Daisyworld physics (albedo, radiative temperature, local temperature,
// parabolic growth) and the stock-and-flow wiring of both model variants.

#include <string_view>

#include "ssd/sd_engine.hpp"

namespace ssd {

struct Scenario;

struct DaisyParams {
  double albedo_fertile = 0.5;
  double albedo_black = 0.25;
  double albedo_white = 0.75;
  double albedo_barren = 0.5;
  double solar_flux = 917.0;            // W m^-2
  double stefan_boltzmann = 5.67032e-8;
  double q_prime = 20.0;                // degC
  double decay_rate = 0.3;              // per step
  double growth_optimum = 22.5;         // degC
  double growth_coeff = 0.003265;
  /// Non-spatial runs snap a daisy stock below this fraction of the planet to 0.
  double extinction_fraction = 1e-4;

  /// Throws std::invalid_argument when a value is out of range.
  void validate() const;

  friend bool operator==(const DaisyParams&, const DaisyParams&) = default;
};

enum class ScheduleKind { constant, step, ramp };

std::string_view to_string(ScheduleKind kind);

struct LuminositySchedule {
  ScheduleKind kind = ScheduleKind::constant;
  double l0 = 1.0;
  double l1 = 1.0;
  double t_change = 0.0;  // step
  double t_start = 0.0;   // ramp
  double t_end = 0.0;     // ramp

  static LuminositySchedule constant(double l);
  static LuminositySchedule step(double l0, double l1, double t_change);
  static LuminositySchedule ramp(double l0, double l1, double t_start, double t_end);

  double at(double time) const;
  void validate() const;

  friend bool operator==(const LuminositySchedule&, const LuminositySchedule&) = default;
};

/// Fractions of total planet area; fertile is the closure.
struct AreaState {
  double black = 0.0;
  double white = 0.0;
  double barren = 0.0;

  double fertile() const noexcept { return 1.0 - black - white - barren; }
};

double planetary_albedo(const AreaState& areas, const DaisyParams& p);

/// Radiative equilibrium temperature in degC.
double planetary_temperature(double luminosity, double albedo, const DaisyParams& p);

double local_temperature(double albedo, double species_albedo, double planetary_temp, const DaisyParams& p);

/// Parabolic growth response; negative outside the viable band.
double growth_rate(double local_temp, const DaisyParams& p);

/// Variable ids shared by both model variants.
namespace var {
inline constexpr std::string_view area_black = "area_black";
inline constexpr std::string_view area_white = "area_white";
inline constexpr std::string_view area_fertile = "area_fertile";
inline constexpr std::string_view area_barren = "area_barren";
inline constexpr std::string_view total_area = "total_area";
inline constexpr std::string_view fraction_fertile = "fraction_fertile";
inline constexpr std::string_view luminosity = "luminosity";
inline constexpr std::string_view albedo = "average_albedo";
inline constexpr std::string_view temperature = "planetary_temperature";
inline constexpr std::string_view local_temp_black = "temperature_black";
inline constexpr std::string_view local_temp_white = "temperature_white";
inline constexpr std::string_view growth_rate_black = "growth_rate_black";
inline constexpr std::string_view growth_rate_white = "growth_rate_white";
inline constexpr std::string_view multiplier_black = "D_black";
inline constexpr std::string_view multiplier_white = "D_white";
inline constexpr std::string_view black_growth = "black_growth";
inline constexpr std::string_view black_decay = "black_decay";
inline constexpr std::string_view white_growth = "white_growth";
inline constexpr std::string_view white_decay = "white_decay";
}  // namespace var

/// Lumped model: both species share the fertile fraction of the whole planet
/// as growth multiplier (D_black = D_white = fraction_fertile).
sd::StockFlowModel build_nonspatial_model(const Scenario& scenario, const DaisyParams& p);

/// Same wiring, but D_black and D_white are exogenous and must be injected.
sd::StockFlowModel build_spatial_model(const Scenario& scenario, const DaisyParams& p);

}  // namespace ssd
