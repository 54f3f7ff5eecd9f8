#pragma once

#include <algorithm>
#include <limits>

#include "mei/core/carrier.hpp"

namespace mei::devices {

/// Solar-thermal compressed air energy storage: an air store fed by the
/// compressor and a thermal store fed by compression heat and collected solar
/// heat. Discharge runs preheated air through the turbine (electricity), sends
/// surplus stored heat to the heating network and exhaust air to cooling.
struct StCaesParams {
  double air_capacity = 0.0;      // kWh
  double thermal_capacity = 0.0;  // kWh
  double eta_charge = 0.7;        // kWh air per kWh electricity
  double eta_heat = 0.2;          // kWh heat captured per kWh electricity
  double loss = 0.0;              // fraction of both stores lost per step
  double eta_turbine = 0.6;       // kWh electricity per kWh air
  double heat_boost = 0.0;        // extra kWh electricity per kWh preheat
  double cooling = 0.0;           // kWh cooling per kWh exhaust air
  double preheat_ratio = 0.0;     // kWh preheat drawn per kWh air
  double charge_rating = 0.0;     // kW electric, used by dispatch
  double discharge_rating = 0.0;  // kW electric, used by dispatch

  /// Electricity per kWh of air while preheat is available.
  double electric_yield() const noexcept { return eta_turbine + heat_boost * preheat_ratio; }

  void validate() const {
    auto fail = [](const char* what) { throw InvalidInput(std::string("st-caes: ") + what); };
    if (!(air_capacity >= 0.0) || !(thermal_capacity >= 0.0)) fail("capacities must be >= 0");
    if (!(eta_charge > 0.0 && eta_charge <= 1.0)) fail("eta_charge must lie in (0, 1]");
    if (!(eta_heat >= 0.0 && eta_heat < 1.0)) fail("eta_heat must lie in [0, 1)");
    if (eta_charge + eta_heat > 1.0 + 1e-12) fail("eta_charge + eta_heat must not exceed 1");
    if (!(loss >= 0.0 && loss < 1.0)) fail("loss must lie in [0, 1)");
    if (!(eta_turbine > 0.0 && eta_turbine <= 1.0)) fail("eta_turbine must lie in (0, 1]");
    if (!(heat_boost >= 0.0 && heat_boost <= 1.0)) fail("heat_boost must lie in [0, 1]");
    if (!(cooling >= 0.0)) fail("cooling must be >= 0");
    if (eta_turbine + cooling > 1.0 + 1e-12) fail("eta_turbine + cooling must not exceed 1");
    if (!(preheat_ratio >= 0.0)) fail("preheat_ratio must be >= 0");
    if (!(charge_rating >= 0.0) || !(discharge_rating >= 0.0)) fail("ratings must be >= 0");
  }

  bool operator==(const StCaesParams&) const = default;
};

struct StCaesState {
  double air = 0.0;      // kWh
  double thermal = 0.0;  // kWh
  StCaesParams params;

  void validate() const {
    params.validate();
    if (!(air >= 0.0 && air <= params.air_capacity)) throw InvalidInput("st-caes: air store out of range");
    if (!(thermal >= 0.0 && thermal <= params.thermal_capacity)) {
      throw InvalidInput("st-caes: thermal store out of range");
    }
  }

  bool operator==(const StCaesState&) const = default;
};

struct ChargeResult {
  StCaesState state;
  double accepted_elec = 0.0;  // kW
  double accepted_heat = 0.0;  // kW
};

struct DischargeResult {
  StCaesState state;
  PortVector delivered;  // kW over the step
};

struct StepResult {
  StCaesState state;
  double accepted_elec = 0.0;
  double accepted_heat = 0.0;
  PortVector delivered;
};

namespace detail {

inline StCaesState decay(StCaesState s) {
  s.air *= 1.0 - s.params.loss;
  s.thermal *= 1.0 - s.params.loss;
  return s;
}

inline ChargeResult charge_no_loss(StCaesState s, double elec_in, double heat_in, double dt) {
  const StCaesParams& p = s.params;
  ChargeResult r{s, 0.0, 0.0};
  if (dt == 0.0) return r;

  double elec = elec_in;
  const double air_gain = p.eta_charge * elec * dt;
  const double air_room = std::max(0.0, p.air_capacity - s.air);
  if (air_gain > air_room) elec *= air_room / air_gain;

  double heat = heat_in;
  const double thermal_gain = (p.eta_heat * elec + heat) * dt;
  const double thermal_room = std::max(0.0, p.thermal_capacity - s.thermal);
  if (thermal_gain > thermal_room) {
    const double scale = thermal_room / thermal_gain;
    elec *= scale;
    heat *= scale;
  }

  r.state.air = std::min(p.air_capacity, s.air + p.eta_charge * elec * dt);
  r.state.thermal = std::min(p.thermal_capacity, s.thermal + (p.eta_heat * elec + heat) * dt);
  r.accepted_elec = elec;
  r.accepted_heat = heat;
  return r;
}

inline DischargeResult discharge_no_loss(StCaesState s, double elec_req, double heat_req,
                                         double cool_req, double dt) {
  const StCaesParams& p = s.params;
  DischargeResult r{s, {}};
  if (dt == 0.0) return r;

  const double want_elec = elec_req * dt;
  const double want_heat = heat_req * dt;
  const double want_cool = cool_req * dt;
  const double air = s.air;
  const double thermal = s.thermal;

  // Air that can still be fully preheated.
  const double knee = p.preheat_ratio > 0.0 ? thermal / p.preheat_ratio
                                            : std::numeric_limits<double>::infinity();
  const double yield = p.electric_yield();
  const double preheated = std::min(air, knee);
  const double elec_max = yield * preheated + p.eta_turbine * (air - preheated);

  // Electric path first.
  const double elec = std::min(want_elec, elec_max);
  double air_elec = 0.0;
  if (elec <= yield * preheated) {
    air_elec = elec / yield;
  } else {
    air_elec = preheated + (elec - yield * preheated) / p.eta_turbine;
  }
  air_elec = std::min(air_elec, air);
  const double preheat = std::min(thermal, p.preheat_ratio * air_elec);

  // Exhaust cooling, drawing extra air only when the electric draw falls short.
  double air_extra = 0.0;
  if (p.cooling > 0.0 && want_cool > p.cooling * air_elec) {
    air_extra = std::min(air - air_elec, (want_cool - p.cooling * air_elec) / p.cooling);
    air_extra = std::max(0.0, air_extra);
  }
  const double cool = std::min(want_cool, p.cooling * (air_elec + air_extra));

  // Surplus stored heat.
  const double heat = std::min(want_heat, std::max(0.0, thermal - preheat));

  r.state.air = std::max(0.0, air - air_elec - air_extra);
  r.state.thermal = std::max(0.0, thermal - preheat - heat);
  r.delivered[Carrier::electricity] = elec / dt;
  r.delivered[Carrier::heat] = heat / dt;
  r.delivered[Carrier::cooling] = cool / dt;
  return r;
}

}  // namespace detail

/// One charging step: stores decay by the loss fraction, then accept
/// electricity (air plus compression heat) and solar heat. When a store would
/// overflow, accepted powers are scaled down proportionally.
inline ChargeResult st_caes_charge(const StCaesState& state, double elec_in, double solar_heat_in,
                                   double dt) {
  if (elec_in < 0.0 || solar_heat_in < 0.0 || dt < 0.0) {
    throw InvalidInput("negative charge power");
  }
  return detail::charge_no_loss(detail::decay(state), elec_in, solar_heat_in, dt);
}

/// One discharging step. Electricity is served first from preheated air, then
/// cooling from turbine exhaust, then heating from the remaining thermal store.
/// Deliveries never exceed the requests.
inline DischargeResult st_caes_discharge(const StCaesState& state, double elec_req,
                                         double heat_req, double cool_req, double dt) {
  if (elec_req < 0.0 || heat_req < 0.0 || cool_req < 0.0 || dt < 0.0) {
    throw InvalidInput("negative discharge request");
  }
  return detail::discharge_no_loss(detail::decay(state), elec_req, heat_req, cool_req, dt);
}

/// Combined step used by the dispatcher: one decay, then charge, then discharge.
inline StepResult st_caes_step(const StCaesState& state, double elec_in, double heat_in,
                               double elec_req, double heat_req, double cool_req, double dt) {
  if (elec_in < 0.0 || heat_in < 0.0) throw InvalidInput("negative charge power");
  if (elec_req < 0.0 || heat_req < 0.0 || cool_req < 0.0) {
    throw InvalidInput("negative discharge request");
  }
  const ChargeResult c = detail::charge_no_loss(detail::decay(state), elec_in, heat_in, dt);
  const DischargeResult d = detail::discharge_no_loss(c.state, elec_req, heat_req, cool_req, dt);
  return {d.state, c.accepted_elec, c.accepted_heat, d.delivered};
}

}  // namespace mei::devices
