#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mei/core/coupling.hpp"

namespace mei {

struct Node {
  std::string id;
  std::vector<Carrier> carriers;  // canonical order, no duplicates

  bool serves(Carrier c) const {
    return std::find(carriers.begin(), carriers.end(), c) != carriers.end();
  }
  bool operator==(const Node&) const = default;
};

/// Capacity-bounded single-carrier connection. Positive flow runs from -> to.
struct Link {
  std::string id;
  std::string from;
  std::string to;
  Carrier carrier = Carrier::electricity;
  double capacity = 0.0;  // kW, both directions
  bool operator==(const Link&) const = default;
};

/// Stateless converter at a node. `capacity` bounds each used input in kW.
struct Hub {
  std::string id;
  std::string node;
  CouplingMatrix coupling;
  double capacity = 0.0;
  bool operator==(const Hub&) const = default;
};

struct DeviceRef {
  std::string node;
  std::string device;
  bool operator==(const DeviceRef&) const = default;
};

struct NetworkTopology {
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<Hub> hubs;
  std::vector<DeviceRef> devices;

  const Node* find_node(const std::string& id) const {
    for (const auto& n : nodes) {
      if (n.id == id) return &n;
    }
    return nullptr;
  }

  std::optional<std::size_t> node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].id == id) return i;
    }
    return std::nullopt;
  }

  void validate() const {
    std::set<std::string> ids;
    for (const auto& n : nodes) {
      if (!ids.insert(n.id).second) throw InvalidInput("duplicate node id '" + n.id + "'");
    }
    for (const auto& l : links) {
      if (!find_node(l.from) || !find_node(l.to)) {
        throw InvalidInput("link '" + l.id + "' references an unknown node");
      }
      if (!(l.capacity > 0.0)) throw InvalidInput("link '" + l.id + "' capacity must be positive");
      if (!find_node(l.from)->serves(l.carrier) || !find_node(l.to)->serves(l.carrier)) {
        throw InvalidInput("link '" + l.id + "' carrier not served at both ends");
      }
    }
    for (const auto& h : hubs) {
      if (!find_node(h.node)) throw InvalidInput("hub '" + h.id + "' references an unknown node");
      h.coupling.validate();
    }
    for (const auto& d : devices) {
      if (!find_node(d.node)) {
        throw InvalidInput("device '" + d.device + "' references an unknown node");
      }
    }
  }

  bool operator==(const NetworkTopology&) const = default;
};

struct NodeCarrier {
  std::string node;
  Carrier carrier = Carrier::electricity;
  auto operator<=>(const NodeCarrier&) const = default;
};

/// Everything that moves energy in one time step. Link flows and hub inputs
/// are aligned with the topology's link and hub lists; missing entries read
/// as zero.
struct NetworkState {
  std::map<std::string, PortVector> injections;
  std::vector<double> link_flows;
  std::vector<PortVector> hub_inputs;
};

/// Per node and carrier: injections + hub outputs - hub inputs - link
/// outflows + link inflows. A balanced state has an all-zero residual.
inline std::map<NodeCarrier, double> balance_residual(const NetworkTopology& topology,
                                                      const NetworkState& state) {
  std::map<NodeCarrier, double> residual;
  for (const auto& n : topology.nodes) {
    for (Carrier c : kAllCarriers) residual[{n.id, c}] = 0.0;
  }
  auto add = [&](const std::string& node, const PortVector& v) {
    if (!topology.find_node(node)) throw InvalidInput("unknown node");
    for (Carrier c : kAllCarriers) residual[{node, c}] += v[c];
  };
  for (const auto& [node, v] : state.injections) add(node, v);
  for (std::size_t h = 0; h < topology.hubs.size() && h < state.hub_inputs.size(); ++h) {
    const Hub& hub = topology.hubs[h];
    const PortVector& in = state.hub_inputs[h];
    add(hub.node, hub_output(hub.coupling, in) - in);
  }
  for (std::size_t l = 0; l < topology.links.size() && l < state.link_flows.size(); ++l) {
    const Link& link = topology.links[l];
    const double f = state.link_flows[l];
    add(link.from, PortVector::of(link.carrier, -f));
    add(link.to, PortVector::of(link.carrier, f));
  }
  return residual;
}

/// Convenience overload: injections only, no flows or hub activity.
inline std::map<NodeCarrier, double> balance_residual(
    const NetworkTopology& topology, const std::map<std::string, PortVector>& injections) {
  NetworkState state;
  state.injections = injections;
  return balance_residual(topology, state);
}

inline double max_abs_residual(const std::map<NodeCarrier, double>& residual) {
  double worst = 0.0;
  for (const auto& [key, r] : residual) worst = std::max(worst, std::abs(r));
  return worst;
}

}  // namespace mei
