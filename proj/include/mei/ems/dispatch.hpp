#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mei/core/scenario.hpp"

namespace mei::ems {

struct ExchangeFlow {
  std::string pair;  // connection id
  Carrier carrier = Carrier::electricity;
  std::size_t step = 0;
  double flow = 0.0;   // kW, positive = import
  double bound = 0.0;  // kW
};

struct ExchangeSchedule {
  OperationMode mode = OperationMode::grid_connected;
  std::vector<ExchangeFlow> flows;
  bool converged = true;
  double residual = 0.0;
  std::size_t iterations = 0;

  double flow(const std::string& pair, std::size_t step) const {
    for (const auto& f : flows) {
      if (f.pair == pair && f.step == step) return f.flow;
    }
    return 0.0;
  }
};

/// Per-step ST-CAES operation as decided by the dispatcher; stores are end of
/// step.
struct StorageTrace {
  std::string device;
  std::vector<double> charge_elec;   // kW
  std::vector<double> charge_heat;   // kW, solar heat drawn from the network
  std::vector<PortVector> delivered; // kW, electricity / heat / cooling
  std::vector<double> air;           // kWh
  std::vector<double> thermal;       // kWh
};

struct UnitSeries {
  std::string id;
  std::string kind;
  std::string node;
  std::vector<PortVector> injection;  // kW per step
};

struct DispatchSetpoints {
  double time_step = 1.0;
  std::size_t steps = 0;
  std::vector<UnitSeries> devices;
  std::vector<std::vector<PortVector>> hub_inputs;  // [hub][step]
  std::vector<std::vector<double>> link_flows;      // [link][step]
  std::vector<std::vector<double>> exchange;        // [connection][step]
  std::vector<StorageTrace> storage;
  double fuel_cost = 0.0;
  double exchange_cost = 0.0;

  double operating_cost() const { return fuel_cost + exchange_cost; }

  /// Network state of one step, for balance checks.
  NetworkState state_at(const Scenario& s, std::size_t t) const {
    NetworkState st;
    for (const auto& n : s.topology.nodes) st.injections[n.id] = PortVector{};
    for (const auto& d : devices) st.injections[d.node] += d.injection[t];
    for (std::size_t u = 0; u < s.utilities.size() && u < exchange.size(); ++u) {
      st.injections[s.utilities[u].node][s.utilities[u].carrier] += exchange[u][t];
    }
    for (const auto& h : hub_inputs) st.hub_inputs.push_back(h[t]);
    for (const auto& l : link_flows) st.link_flows.push_back(l[t]);
    return st;
  }
};

inline std::string device_kind(const DeviceSpec& spec) {
  struct Visitor {
    std::string operator()(const SolarDevice& d) const { return std::string(devices::to_string(d.spec.kind)); }
    std::string operator()(const StCaesDevice&) const { return "st_caes"; }
    std::string operator()(const devices::DualRolePlantSpec&) const { return "plant"; }
    std::string operator()(const LoadSpec&) const { return "load"; }
    std::string operator()(const BipvSpec&) const { return "bipv"; }
    std::string operator()(const ChpSpec&) const { return "chp"; }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace mei::ems
