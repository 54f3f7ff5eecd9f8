#pragma once

#include <array>
#include <string>

#include "mei/core/scenario.hpp"

namespace mei {

/// Compliance with the five structural design principles of a micro energy
/// internet: clean source, storage, electricity-to-heat/cooling conversion,
/// self-use, and an energy management system.
struct PrincipleReport {
  std::array<bool, 5> satisfied{};
  std::array<std::string, 5> messages;

  bool all() const {
    for (bool b : satisfied) {
      if (!b) return false;
    }
    return true;
  }
};

namespace detail {

/// Carriers reachable from electricity through hubs and storage devices.
inline std::array<bool, kCarrierCount> reachable_from_electricity(const Scenario& s) {
  std::array<std::array<bool, kCarrierCount>, kCarrierCount> edge{};
  for (const auto& hub : s.topology.hubs) {
    if (!(hub.capacity > 0.0)) continue;
    for (Carrier in : kAllCarriers) {
      for (Carrier out : kAllCarriers) {
        if (hub.coupling(out, in) > 0.0) edge[index(in)][index(out)] = true;
      }
    }
  }
  for (const auto& d : s.devices) {
    if (const auto* caes = std::get_if<StCaesDevice>(&d.spec)) {
      const auto& p = caes->params;
      if (!(p.charge_rating > 0.0)) continue;
      const std::size_t e = index(Carrier::electricity);
      if (p.eta_heat > 0.0 && p.thermal_capacity > 0.0) edge[e][index(Carrier::heat)] = true;
      if (p.cooling > 0.0 && p.air_capacity > 0.0 && p.discharge_rating > 0.0) {
        edge[e][index(Carrier::cooling)] = true;
      }
    }
  }
  std::array<bool, kCarrierCount> seen{};
  seen[index(Carrier::electricity)] = true;
  for (std::size_t pass = 0; pass < kCarrierCount; ++pass) {
    for (std::size_t a = 0; a < kCarrierCount; ++a) {
      if (!seen[a]) continue;
      for (std::size_t b = 0; b < kCarrierCount; ++b) {
        if (edge[a][b]) seen[b] = true;
      }
    }
  }
  return seen;
}

}  // namespace detail

inline PrincipleReport check_design_principles(const Scenario& s) {
  PrincipleReport r;

  bool clean = false;
  bool storage = false;
  for (const auto& d : s.devices) {
    if (std::holds_alternative<SolarDevice>(d.spec) || std::holds_alternative<BipvSpec>(d.spec)) clean = true;
    if (const auto* plant = std::get_if<devices::DualRolePlantSpec>(&d.spec)) {
      if (plant->mode == devices::PlantMode::generator && devices::salt_loop_valid(*plant)) clean = true;
    }
    if (const auto* caes = std::get_if<StCaesDevice>(&d.spec)) {
      if (caes->params.air_capacity > 0.0 || caes->params.thermal_capacity > 0.0) storage = true;
    }
  }
  const auto reach = detail::reachable_from_electricity(s);
  const bool to_heat = reach[index(Carrier::heat)];
  const bool to_cool = reach[index(Carrier::cooling)];

  r.satisfied = {clean, storage, to_heat && to_cool, s.self_use, s.ems.has_value()};
  r.messages[0] = clean ? "clean energy source integrated" : "no clean energy source";
  r.messages[1] = storage ? "energy storage deployed" : "no storage with positive capacity";
  if (to_heat && to_cool) {
    r.messages[2] = "electricity convertible to heat and cooling";
  } else if (!to_heat && !to_cool) {
    r.messages[2] = "no electricity-to-heat or electricity-to-cooling path";
  } else {
    r.messages[2] = to_heat ? "no electricity-to-cooling path" : "no electricity-to-heat path";
  }
  r.messages[3] = s.self_use ? "energy mainly for self-use" : "self-use not declared";
  r.messages[4] = s.ems ? "energy management system configured" : "no energy management configuration";
  return r;
}

}  // namespace mei
