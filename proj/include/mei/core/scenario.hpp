#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "mei/core/topology.hpp"
#include "mei/devices/dual_role_plant.hpp"
#include "mei/devices/solar.hpp"
#include "mei/devices/st_caes.hpp"

namespace mei {

enum class OperationMode { autonomous, grid_connected };

constexpr std::string_view to_string(OperationMode m) noexcept {
  return m == OperationMode::autonomous ? "autonomous" : "grid_connected";
}

/// Solar source driven by a named irradiance profile (W/m^2).
struct SolarDevice {
  devices::SolarSourceSpec spec;
  std::string irradiance;
  bool operator==(const SolarDevice&) const = default;
};

struct StCaesDevice {
  devices::StCaesParams params;
  double air_initial = 0.0;      // kWh
  double thermal_initial = 0.0;  // kWh

  devices::StCaesState initial_state() const { return {air_initial, thermal_initial, params}; }
  bool operator==(const StCaesDevice&) const = default;
};

/// Fixed demand on one carrier: injection = -scale * profile(t).
struct LoadSpec {
  Carrier carrier = Carrier::electricity;
  std::string profile;
  double scale = 1.0;
  bool operator==(const LoadSpec&) const = default;
};

/// Building-integrated PV micro-grid seen from the network as a signed net
/// electric injection profile (kW).
struct BipvSpec {
  std::string profile;
  double scale = 1.0;
  bool operator==(const BipvSpec&) const = default;
};

/// Fuel-fired combined heat and power unit. Fuel is bought at the gas price;
/// heat recovery may be partial.
struct ChpSpec {
  double fuel_capacity = 0.0;  // kW fuel
  double eta_elec = 0.3;
  double eta_heat = 0.45;

  void validate() const {
    if (!(fuel_capacity >= 0.0)) throw InvalidInput("chp fuel capacity must be >= 0");
    if (!(eta_elec >= 0.0 && eta_heat >= 0.0 && eta_elec + eta_heat <= 1.0 + 1e-12)) {
      throw InvalidInput("chp efficiencies must be >= 0 and sum to at most 1");
    }
  }
  bool operator==(const ChpSpec&) const = default;
};

using DeviceSpec =
    std::variant<SolarDevice, StCaesDevice, devices::DualRolePlantSpec, LoadSpec, BipvSpec, ChpSpec>;

struct Device {
  std::string id;
  std::string node;
  DeviceSpec spec;
  bool operator==(const Device&) const = default;
};

/// Connection of this energy internet to an external utility (or a peer) on
/// one carrier. Positive exchange flow is an import.
struct UtilityConnection {
  std::string id;
  std::string node;
  Carrier carrier = Carrier::electricity;
  double bound = 0.0;  // kW
  bool operator==(const UtilityConnection&) const = default;
};

struct EmsConfig {
  double slow_step = 1.0;    // h, thermal layer
  double medium_step = 1.0;  // h, gas layer
  double fast_step = 1.0;    // h, electric layer
  std::vector<double> tariffs;  // heat tariffs for leader-follower dispatch
  bool operator==(const EmsConfig&) const = default;
};

/// Candidate hub component for planning.
struct CatalogComponent {
  std::string id;
  double capital_cost = 0.0;
  double operating_cost = 0.0;
  double emission = 0.0;  // kg CO2
  PortVector capability;  // kW per carrier
  bool operator==(const CatalogComponent&) const = default;
};

/// Linear component model for the control layer, matrices row-major:
/// x' = A x + B1 w + B2 u, z = C x + D u.
struct DynamicsSpec {
  std::string id;
  std::size_t states = 0;
  std::size_t controls = 0;
  std::size_t disturbances = 0;
  std::size_t outputs = 0;
  std::vector<double> A, B1, B2, C, D;

  void validate() const {
    if (states == 0 || controls == 0 || disturbances == 0 || outputs == 0) {
      throw InvalidInput("dynamics dimensions must be positive");
    }
    auto check = [](const std::vector<double>& m, std::size_t size, const char* name) {
      if (m.size() != size) throw InvalidInput(std::string("matrix ") + name + " has the wrong size");
    };
    check(A, states * states, "A");
    check(B1, states * disturbances, "B1");
    check(B2, states * controls, "B2");
    check(C, outputs * states, "C");
    check(D, outputs * controls, "D");
  }
  bool operator==(const DynamicsSpec&) const = default;
};

/// Carriers a device touches at its node.
inline std::vector<Carrier> device_carriers(const DeviceSpec& spec) {
  struct Visitor {
    std::vector<Carrier> operator()(const SolarDevice& d) const {
      switch (d.spec.kind) {
        case devices::SolarKind::pv:
        case devices::SolarKind::chimney: return {Carrier::electricity};
        case devices::SolarKind::collector: return {Carrier::heat};
        case devices::SolarKind::full_spectrum: return {Carrier::electricity, Carrier::heat};
      }
      return {};
    }
    std::vector<Carrier> operator()(const StCaesDevice& d) const {
      if (d.params.cooling > 0.0) return {Carrier::electricity, Carrier::heat, Carrier::cooling};
      return {Carrier::electricity, Carrier::heat};
    }
    std::vector<Carrier> operator()(const devices::DualRolePlantSpec& d) const {
      if (d.mode == devices::PlantMode::load) return {Carrier::electricity};
      return {Carrier::electricity, Carrier::heat};
    }
    std::vector<Carrier> operator()(const LoadSpec& d) const { return {d.carrier}; }
    std::vector<Carrier> operator()(const BipvSpec&) const { return {Carrier::electricity}; }
    std::vector<Carrier> operator()(const ChpSpec&) const { return {Carrier::electricity, Carrier::heat}; }
  };
  return std::visit(Visitor{}, spec);
}

struct Scenario {
  std::string name;
  NetworkTopology topology;
  std::vector<Device> devices;
  std::vector<UtilityConnection> utilities;
  std::map<std::string, std::vector<double>> profiles;
  std::map<Carrier, std::vector<double>> prices;  // currency per kWh
  OperationMode mode = OperationMode::grid_connected;
  bool self_use = false;
  double time_step = 1.0;  // h
  std::optional<EmsConfig> ems;
  std::vector<CatalogComponent> catalog;
  std::vector<DynamicsSpec> dynamics;

  /// Common length of all profiles and price series (0 when there are none).
  std::size_t horizon() const {
    if (!profiles.empty()) return profiles.begin()->second.size();
    if (!prices.empty()) return prices.begin()->second.size();
    return 0;
  }

  double price(Carrier c, std::size_t t) const {
    auto it = prices.find(c);
    if (it == prices.end() || t >= it->second.size()) return 0.0;
    return it->second[t];
  }

  const Device* find_device(const std::string& id) const {
    for (const auto& d : devices) {
      if (d.id == id) return &d;
    }
    return nullptr;
  }

  void validate() const {
    if (!(time_step > 0.0)) throw InvalidInput("time step must be positive");
    topology.validate();

    const std::size_t h = horizon();
    for (const auto& [id, series] : profiles) {
      if (series.size() != h) throw InvalidInput("profile '" + id + "' has an inconsistent horizon");
      for (double v : series) {
        if (!std::isfinite(v)) throw InvalidInput("profile '" + id + "' has a non-finite value");
      }
    }
    for (const auto& [carrier, series] : prices) {
      if (!profiles.empty() && series.size() != h) {
        throw InvalidInput("price series for " + std::string(to_string(carrier)) + " has an inconsistent horizon");
      }
      if (profiles.empty() && series.size() != h) throw InvalidInput("price series have inconsistent horizons");
    }

    std::set<std::string> units;
    auto claim = [&](const std::string& id) {
      if (!units.insert(id).second) throw InvalidInput("duplicate id '" + id + "'");
    };
    for (const auto& l : topology.links) claim(l.id);
    for (const auto& hub : topology.hubs) {
      claim(hub.id);
      if (!(hub.capacity >= 0.0)) throw InvalidInput("hub '" + hub.id + "' capacity must be >= 0");
      const Node* node = topology.find_node(hub.node);
      for (Carrier in : kAllCarriers) {
        if (!hub.coupling.uses_input(in)) continue;
        if (!node->serves(in)) throw InvalidInput("hub '" + hub.id + "' input carrier not served at its node");
        for (Carrier out : kAllCarriers) {
          if (hub.coupling(out, in) > 0.0 && !node->serves(out)) {
            throw InvalidInput("hub '" + hub.id + "' output carrier not served at its node");
          }
        }
      }
    }
    for (const auto& u : utilities) {
      claim(u.id);
      const Node* node = topology.find_node(u.node);
      if (!node) throw InvalidInput("utility '" + u.id + "' references an unknown node");
      if (!node->serves(u.carrier)) throw InvalidInput("utility '" + u.id + "' carrier not served at its node");
      if (!(u.bound >= 0.0)) throw InvalidInput("utility '" + u.id + "' bound must be >= 0");
    }
    for (const auto& d : devices) {
      claim(d.id);
      const Node* node = topology.find_node(d.node);
      if (!node) throw InvalidInput("device '" + d.id + "' references an unknown node");
      for (Carrier c : device_carriers(d.spec)) {
        if (!node->serves(c)) {
          throw InvalidInput("device '" + d.id + "' needs " + std::string(to_string(c)) + " at node '" + d.node + "'");
        }
      }
      auto need_profile = [&](const std::string& p) {
        if (!profiles.count(p)) throw InvalidInput("device '" + d.id + "' references unknown profile '" + p + "'");
      };
      std::visit(
          [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, SolarDevice>) {
              spec.spec.validate();
              need_profile(spec.irradiance);
            } else if constexpr (std::is_same_v<T, StCaesDevice>) {
              spec.initial_state().validate();
            } else if constexpr (std::is_same_v<T, devices::DualRolePlantSpec>) {
              spec.validate();
            } else if constexpr (std::is_same_v<T, LoadSpec>) {
              need_profile(spec.profile);
              if (!(spec.scale >= 0.0)) throw InvalidInput("load scale must be >= 0");
            } else if constexpr (std::is_same_v<T, BipvSpec>) {
              need_profile(spec.profile);
            } else if constexpr (std::is_same_v<T, ChpSpec>) {
              spec.validate();
            }
          },
          d.spec);
    }
    for (const auto& c : catalog) {
      claim(c.id);
      if (!(c.capital_cost >= 0.0 && c.operating_cost >= 0.0 && c.emission >= 0.0)) {
        throw InvalidInput("component '" + c.id + "' costs and emission must be >= 0");
      }
    }
    std::set<std::string> models;
    for (const auto& d : dynamics) {
      if (!models.insert(d.id).second) throw InvalidInput("duplicate id '" + d.id + "'");
      d.validate();
    }
    if (ems) {
      const EmsConfig& e = *ems;
      if (!(e.fast_step > 0.0 && e.medium_step >= e.fast_step && e.slow_step >= e.medium_step)) {
        throw InvalidInput("timescales must satisfy slow >= medium >= fast > 0");
      }
      for (double t : e.tariffs) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("tariffs must be finite and >= 0");
      }
    }
  }

  bool operator==(const Scenario&) const = default;
};

}  // namespace mei
