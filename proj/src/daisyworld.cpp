#include "ssd/daisyworld.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "ssd/scenario.hpp"

namespace ssd {

void DaisyParams::validate() const {
  for (double a : {albedo_fertile, albedo_black, albedo_white, albedo_barren})
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("albedo outside [0,1]");
  if (!(solar_flux > 0.0)) throw std::invalid_argument("solar_flux must be > 0");
  if (!(stefan_boltzmann > 0.0)) throw std::invalid_argument("stefan_boltzmann must be > 0");
  if (!(q_prime > 0.0)) throw std::invalid_argument("q_prime must be > 0");
  if (!(decay_rate >= 0.0 && decay_rate <= 1.0)) throw std::invalid_argument("decay_rate outside [0,1]");
  if (!(growth_coeff >= 0.0)) throw std::invalid_argument("growth_coeff must be >= 0");
  if (!std::isfinite(growth_optimum)) throw std::invalid_argument("growth_optimum must be finite");
  if (!(extinction_fraction >= 0.0 && extinction_fraction < 1.0))
    throw std::invalid_argument("extinction_fraction outside [0,1)");
}

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::step: return "step";
    case ScheduleKind::ramp: return "ramp";
  }
  return "?";
}

LuminositySchedule LuminositySchedule::constant(double l) {
  LuminositySchedule s;
  s.kind = ScheduleKind::constant;
  s.l0 = s.l1 = l;
  return s;
}

LuminositySchedule LuminositySchedule::step(double l0, double l1, double t_change) {
  LuminositySchedule s;
  s.kind = ScheduleKind::step;
  s.l0 = l0;
  s.l1 = l1;
  s.t_change = t_change;
  return s;
}

LuminositySchedule LuminositySchedule::ramp(double l0, double l1, double t_start, double t_end) {
  LuminositySchedule s;
  s.kind = ScheduleKind::ramp;
  s.l0 = l0;
  s.l1 = l1;
  s.t_start = t_start;
  s.t_end = t_end;
  return s;
}

double LuminositySchedule::at(double time) const {
  switch (kind) {
    case ScheduleKind::constant: return l0;
    case ScheduleKind::step: return time < t_change ? l0 : l1;
    case ScheduleKind::ramp:
      if (time <= t_start) return l0;
      if (time >= t_end) return l1;
      return l0 + (l1 - l0) * (time - t_start) / (t_end - t_start);
  }
  return l0;
}

void LuminositySchedule::validate() const {
  if (!(l0 >= 0.0) || !std::isfinite(l0)) throw std::invalid_argument("luminosity L0 must be >= 0");
  if (kind != ScheduleKind::constant && (!(l1 >= 0.0) || !std::isfinite(l1)))
    throw std::invalid_argument("luminosity L1 must be >= 0");
  if (kind == ScheduleKind::ramp && !(t_end > t_start))
    throw std::invalid_argument("luminosity ramp needs t_end > t_start");
}

double planetary_albedo(const AreaState& a, const DaisyParams& p) {
  return a.fertile() * p.albedo_fertile + a.black * p.albedo_black + a.white * p.albedo_white +
         a.barren * p.albedo_barren;
}

double planetary_temperature(double luminosity, double albedo, const DaisyParams& p) {
  const double flux = p.solar_flux * luminosity * (1.0 - albedo) / p.stefan_boltzmann;
  return std::sqrt(std::sqrt(flux)) - 273.0;
}

double local_temperature(double albedo, double species_albedo, double planetary_temp, const DaisyParams& p) {
  return p.q_prime * (albedo - species_albedo) + planetary_temp;
}

double growth_rate(double local_temp, const DaisyParams& p) {
  const double d = p.growth_optimum - local_temp;
  return 1.0 - p.growth_coeff * d * d;
}

namespace {

using sd::VariableDef;
using Args = std::span<const double>;

std::string s(std::string_view v) { return std::string(v); }

// Everything except the two growth multipliers, which differ per variant.
std::vector<VariableDef> shared_wiring(const Scenario& sc, const DaisyParams& p) {
  p.validate();
  sc.luminosity.validate();
  const double total = sc.total_area();
  if (!(total > 0.0)) throw std::invalid_argument("total planet area must be > 0");

  std::vector<VariableDef> v;
  v.push_back(VariableDef::constant("albedo_fertile", p.albedo_fertile));
  v.push_back(VariableDef::constant("albedo_black", p.albedo_black));
  v.push_back(VariableDef::constant("albedo_white", p.albedo_white));
  v.push_back(VariableDef::constant("albedo_barren", p.albedo_barren));
  v.push_back(VariableDef::constant("decay_rate", p.decay_rate));
  v.push_back(VariableDef::constant(s(var::area_barren), sc.area(LandCode::barren)));
  v.push_back(VariableDef::constant(s(var::total_area), total));

  v.push_back(VariableDef::stock(s(var::area_black), sc.area(LandCode::black), {s(var::black_growth)},
                                 {s(var::black_decay)}));
  v.push_back(VariableDef::stock(s(var::area_white), sc.area(LandCode::white), {s(var::white_growth)},
                                 {s(var::white_decay)}));
  v.push_back(VariableDef::stock(s(var::area_fertile), sc.area(LandCode::fertile),
                                 {s(var::black_decay), s(var::white_decay)},
                                 {s(var::black_growth), s(var::white_growth)}));

  const auto schedule = sc.luminosity;
  v.push_back(VariableDef::auxiliary(s(var::luminosity), {}, [schedule](Args, double t) { return schedule.at(t); }));

  v.push_back(VariableDef::auxiliary(s(var::fraction_fertile),
                                     {s(var::area_black), s(var::area_white), s(var::area_barren), s(var::total_area)},
                                     [](Args a, double) {
                                       return AreaState{a[0] / a[3], a[1] / a[3], a[2] / a[3]}.fertile();
                                     }));

  v.push_back(VariableDef::auxiliary(
      s(var::albedo),
      {s(var::area_black), s(var::area_white), s(var::area_barren), s(var::total_area), "albedo_fertile",
       "albedo_black", "albedo_white", "albedo_barren"},
      [p](Args a, double) {
        DaisyParams q = p;
        q.albedo_fertile = a[4];
        q.albedo_black = a[5];
        q.albedo_white = a[6];
        q.albedo_barren = a[7];
        return planetary_albedo(AreaState{a[0] / a[3], a[1] / a[3], a[2] / a[3]}, q);
      }));

  v.push_back(VariableDef::auxiliary("absorbed_luminosity", {s(var::luminosity), s(var::albedo)},
                                     [](Args a, double) { return a[0] * (1.0 - a[1]); }));

  v.push_back(VariableDef::auxiliary(s(var::temperature), {s(var::luminosity), s(var::albedo)},
                                     [p](Args a, double) { return planetary_temperature(a[0], a[1], p); }));

  for (auto [adjust, local, rate, species_albedo] :
       {std::tuple{"temperature_adjustment_black", var::local_temp_black, var::growth_rate_black, "albedo_black"},
        std::tuple{"temperature_adjustment_white", var::local_temp_white, var::growth_rate_white, "albedo_white"}}) {
    v.push_back(VariableDef::auxiliary(adjust, {s(var::albedo), species_albedo}, [p](Args a, double) {
      return local_temperature(a[0], a[1], 0.0, p);
    }));
    v.push_back(VariableDef::auxiliary(s(local), {s(var::temperature), adjust},
                                       [](Args a, double) { return a[0] + a[1]; }));
    v.push_back(VariableDef::auxiliary(s(rate), {s(local)}, [p](Args a, double) { return growth_rate(a[0], p); }));
  }

  // Growth never goes negative; dying is only ever the decay term.
  auto growth = [](Args a, double) { return a[0] * std::max(a[1] * a[2], 0.0); };
  auto decay = [](Args a, double) { return a[0] * a[1]; };
  v.push_back(VariableDef::flow(s(var::black_growth), {s(var::area_black), s(var::multiplier_black),
                                                       s(var::growth_rate_black)},
                                growth));
  v.push_back(VariableDef::flow(s(var::white_growth), {s(var::area_white), s(var::multiplier_white),
                                                       s(var::growth_rate_white)},
                                growth));
  v.push_back(VariableDef::flow(s(var::black_decay), {s(var::area_black), "decay_rate"}, decay));
  v.push_back(VariableDef::flow(s(var::white_decay), {s(var::area_white), "decay_rate"}, decay));
  return v;
}

}  // namespace

sd::StockFlowModel build_nonspatial_model(const Scenario& scenario, const DaisyParams& p) {
  auto defs = shared_wiring(scenario, p);
  auto shared_x = [](Args a, double) { return a[0]; };
  defs.push_back(VariableDef::auxiliary(s(var::multiplier_black), {s(var::fraction_fertile)}, shared_x));
  defs.push_back(VariableDef::auxiliary(s(var::multiplier_white), {s(var::fraction_fertile)}, shared_x));
  return sd::StockFlowModel::build(std::move(defs), scenario.dt);
}

sd::StockFlowModel build_spatial_model(const Scenario& scenario, const DaisyParams& p) {
  auto defs = shared_wiring(scenario, p);
  defs.push_back(VariableDef::exogenous(s(var::multiplier_black)));
  defs.push_back(VariableDef::exogenous(s(var::multiplier_white)));
  return sd::StockFlowModel::build(std::move(defs), scenario.dt);
}

}  // namespace ssd
