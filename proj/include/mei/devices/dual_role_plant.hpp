#pragma once

#include <cmath>
#include <string_view>

#include "mei/core/carrier.hpp"

namespace mei::devices {

enum class PlantMode { load, generator };

constexpr std::string_view to_string(PlantMode m) noexcept {
  return m == PlantMode::load ? "load" : "generator";
}

inline constexpr double kSaltSetpoint = 600.0;   // deg C
inline constexpr double kSaltTolerance = 2.0;    // deg C

/// Solar-thermal carbon-fiber recycling plant: either an electric load or an
/// equivalent combined heat and power source.
struct DualRolePlantSpec {
  PlantMode mode = PlantMode::load;
  double demand = 0.0;       // kW electric, load mode
  double elec_output = 0.0;  // kW, generator mode
  double heat_output = 0.0;  // kW, generator mode
  double salt_setpoint = kSaltSetpoint;
  double salt_tolerance = kSaltTolerance;

  void validate() const {
    if (!(demand >= 0.0)) throw InvalidInput("plant demand must be >= 0");
    if (!(elec_output >= 0.0) || !(heat_output >= 0.0)) throw InvalidInput("plant outputs must be >= 0");
    if (!(salt_tolerance >= 0.0)) throw InvalidInput("salt tolerance must be >= 0");
  }

  bool operator==(const DualRolePlantSpec&) const = default;
};

/// Generator mode is only meaningful while the molten-salt loop holds its
/// nominal temperature band. Not simulated; metadata check only.
inline bool salt_loop_valid(const DualRolePlantSpec& spec) {
  return std::abs(spec.salt_setpoint - kSaltSetpoint) <= spec.salt_tolerance;
}

inline PortVector dual_role_plant(const DualRolePlantSpec& spec) {
  PortVector v;
  if (spec.mode == PlantMode::load) {
    v[Carrier::electricity] = -spec.demand;
  } else {
    v[Carrier::electricity] = spec.elec_output;
    v[Carrier::heat] = spec.heat_output;
  }
  return v;
}

}  // namespace mei::devices
