#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mei/core/scenario.hpp"

namespace mei::ems {

struct ModeDecision {
  OperationMode mode = OperationMode::grid_connected;
  std::vector<double> bounds;  // per connection, kW
};

/// Utility-connection layer. Islanding forces autonomous operation with every
/// exchange bound set to zero; otherwise the configured bounds apply.
inline ModeDecision decide_mode(const std::map<Carrier, std::vector<double>>& prices,
                                const std::map<std::string, std::vector<double>>& forecasts, bool islanded,
                                std::span<const UtilityConnection> connections) {
  std::optional<std::size_t> horizon;
  auto check = [&](std::size_t n) {
    if (horizon && *horizon != n) throw InvalidInput("inconsistent horizon");
    horizon = n;
  };
  for (const auto& [c, series] : prices) check(series.size());
  for (const auto& [id, series] : forecasts) check(series.size());

  ModeDecision d;
  d.mode = islanded ? OperationMode::autonomous : OperationMode::grid_connected;
  for (const auto& u : connections) d.bounds.push_back(islanded ? 0.0 : u.bound);
  return d;
}

inline ModeDecision decide_mode(const Scenario& s, bool islanded) {
  return decide_mode(s.prices, s.profiles, islanded || s.mode == OperationMode::autonomous, s.utilities);
}

}  // namespace mei::ems
