#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mei/core/error.hpp"

namespace mei::ems {

/// Update periods (h) of the thermal, gas and electric control layers.
struct LayerTimescales {
  double slow = 1.0;
  double medium = 1.0;
  double fast = 1.0;

  void validate() const {
    if (!(fast > 0.0 && medium >= fast && slow >= medium)) {
      throw InvalidInput("timescales must satisfy slow >= medium >= fast > 0");
    }
    if (!is_multiple(slow, medium) || !is_multiple(medium, fast)) {
      throw InvalidInput("timescales must be integer multiples of each other");
    }
  }

  static bool is_multiple(double a, double b) {
    const double k = a / b;
    return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k);
  }
};

struct LayerSchedule {
  std::vector<double> slow;    // instants, h
  std::vector<double> medium;
  std::vector<double> fast;
};

inline std::vector<double> instants(double step, double horizon) {
  const auto n = static_cast<std::size_t>(std::llround(horizon / step));
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(static_cast<double>(k) * step);
  return out;
}

inline LayerSchedule timescale_schedule(const LayerTimescales& ts, double horizon) {
  ts.validate();
  if (!(horizon >= 0.0) || !LayerTimescales::is_multiple(horizon, ts.slow)) {
    throw InvalidInput("horizon misaligned");
  }
  return {instants(ts.slow, horizon), instants(ts.medium, horizon), instants(ts.fast, horizon)};
}

/// Number of dispatch steps a layer holds its setpoint.
inline std::size_t hold_steps(double layer_step, double time_step) {
  if (!LayerTimescales::is_multiple(layer_step, time_step) || layer_step < time_step - 1e-12) {
    throw InvalidInput("timescales must be multiples of the time step");
  }
  return static_cast<std::size_t>(std::llround(layer_step / time_step));
}

}  // namespace mei::ems
