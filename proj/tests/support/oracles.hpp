#pragma once

// Independent reference computations shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mei/core/scenario.hpp"
#include "mei/devices/st_caes.hpp"
#include "mei/ems/dispatch.hpp"
#include "mei/ems/hinf.hpp"

namespace mei::oracle {

// Scalar plant x' = a x + w + u with z = (x, u).
inline ems::DeviceDynamics scalar_plant(double a) {
  ems::DeviceDynamics d;
  d.A = Eigen::MatrixXd::Constant(1, 1, a);
  d.B1 = Eigen::MatrixXd::Ones(1, 1);
  d.B2 = Eigen::MatrixXd::Ones(1, 1);
  d.C = Eigen::MatrixXd(2, 1);
  d.C << 1, 0;
  d.D = Eigen::MatrixXd(2, 1);
  d.D << 0, 1;
  return d;
}

/// Positive root of -p^2 (1 - 1/gamma^2) + 1 = 0 for the scalar plant at a = 0.
inline double scalar_root(double gamma) { return 1.0 / std::sqrt(1.0 - 1.0 / (gamma * gamma)); }

/// Stabilizing Riccati solution from the stable invariant subspace of the
/// Hamiltonian, with a plain eigendecomposition.
inline std::optional<Eigen::MatrixXd> hamiltonian_riccati(const ems::DeviceDynamics& d, double gamma) {
  const Eigen::Index n = d.states();
  const Eigen::MatrixXd r = d.D.transpose() * d.D;
  const Eigen::MatrixXd s = d.B2 * r.inverse() * d.B2.transpose() - d.B1 * d.B1.transpose() / (gamma * gamma);
  Eigen::MatrixXd h(2 * n, 2 * n);
  h << d.A, -s, -d.C.transpose() * d.C, -d.A.transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> es(h);
  Eigen::MatrixXcd u(2 * n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < 2 * n; ++j) {
    if (es.eigenvalues()(j).real() < 0) {
      if (k == n) return std::nullopt;
      u.col(k++) = es.eigenvectors().col(j);
    }
  }
  if (k != n) return std::nullopt;
  const Eigen::MatrixXcd p = u.bottomRows(n) * u.topRows(n).inverse();
  return p.real();
}

/// Random 3-state plant with two controls, z = (x, u).
inline ems::DeviceDynamics random_three_state(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  ems::DeviceDynamics d;
  d.A = Eigen::MatrixXd(3, 3);
  d.B1 = Eigen::MatrixXd(3, 1);
  d.B2 = Eigen::MatrixXd(3, 2);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) d.A(i, j) = g(rng);
    d.B1(i, 0) = g(rng);
    d.B2(i, 0) = g(rng);
    d.B2(i, 1) = g(rng);
  }
  d.C = Eigen::MatrixXd::Zero(5, 3);
  d.C.topRows(3) = Eigen::MatrixXd::Identity(3, 3);
  d.D = Eigen::MatrixXd::Zero(5, 2);
  d.D.bottomRows(2) = Eigen::MatrixXd::Identity(2, 2);
  return d;
}

/// Piecewise-constant scalar disturbance in [-1, 1], new level every 250 steps.
inline std::vector<Eigen::VectorXd> random_disturbance(std::mt19937_64& rng, std::size_t steps) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Eigen::VectorXd> w;
  double level = u(rng);
  for (std::size_t k = 0; k < steps; ++k) {
    if (k % 250 == 0) level = u(rng);
    w.push_back(Eigen::VectorXd::Constant(1, level));
  }
  return w;
}

/// One node with a gas CHP and an ST-CAES over three hourly steps.
inline Scenario chp_caes_toy() {
  Scenario s;
  s.name = "toy";
  s.topology.nodes = {{"n", {Carrier::electricity, Carrier::heat}}};
  devices::StCaesParams p;
  p.air_capacity = 100;
  p.thermal_capacity = 100;
  p.eta_charge = 0.7;
  p.eta_heat = 0.2;
  p.loss = 0.01;
  p.eta_turbine = 0.6;
  p.charge_rating = 50;
  p.discharge_rating = 50;
  s.devices.push_back({"chp", "n", ChpSpec{400, 0.35, 0.45}});
  s.devices.push_back({"caes", "n", StCaesDevice{p, 20, 0}});
  s.devices.push_back({"demand", "n", LoadSpec{Carrier::electricity, "load", 1.0}});
  s.profiles["load"] = {60, 60, 60};
  s.prices[Carrier::gas] = {0.02, 0.10, 0.10};
  return s;
}

/// Cheapest fuel bill for the toy: net storage power per step on a 1e-2
/// lattice of the rating, simulated with the device model; the CHP covers
/// the remainder of the 60 kW load.
inline double chp_caes_lattice_cost(const Scenario& s) {
  const auto& chp = std::get<ChpSpec>(s.devices[0].spec);
  const auto& caes = std::get<StCaesDevice>(s.devices[1].spec);
  const double rating = caes.params.discharge_rating;
  std::vector<double> lattice;
  for (int k = -100; k <= 100; ++k) lattice.push_back(k * 1e-2 * rating);
  double best = std::numeric_limits<double>::infinity();
  for (double s0 : lattice) {
    for (double s1 : lattice) {
      for (double s2 : lattice) {
        const double net[3] = {s0, s1, s2};
        devices::StCaesState st = caes.initial_state();
        double cost = 0.0;
        bool ok = true;
        for (int t = 0; t < 3 && ok; ++t) {
          const double c = std::max(0.0, -net[t]);
          const double e = std::max(0.0, net[t]);
          const auto r = devices::st_caes_step(st, c, 0, e, 0, 0, 1.0);
          if (r.accepted_elec < c - 1e-9 || r.delivered[Carrier::electricity] < e - 1e-9) ok = false;
          st = r.state;
          const double fuel = (60.0 - net[t]) / chp.eta_elec;
          if (fuel < 0 || fuel > chp.fuel_capacity) ok = false;
          cost += s.prices.at(Carrier::gas)[t] * fuel;
        }
        if (ok) best = std::min(best, cost);
      }
    }
  }
  return best;
}

/// Largest nodal imbalance of one dispatch step, summed directly from the
/// setpoints: device injections, hub conversion, link transfers, exchange.
inline double nodal_imbalance(const Scenario& s, const ems::DispatchSetpoints& d, std::size_t t) {
  std::map<std::pair<std::string, Carrier>, double> sum;
  for (const auto& n : s.topology.nodes) {
    for (Carrier c : kAllCarriers) sum[{n.id, c}] = 0.0;
  }
  for (const auto& u : d.devices) {
    for (Carrier c : kAllCarriers) sum[{u.node, c}] += u.injection[t][c];
  }
  for (std::size_t h = 0; h < s.topology.hubs.size(); ++h) {
    const Hub& hub = s.topology.hubs[h];
    const PortVector& in = d.hub_inputs[h][t];
    for (Carrier out : kAllCarriers) {
      double produced = 0.0;
      for (Carrier c : kAllCarriers) produced += hub.coupling(out, c) * in[c];
      sum[{hub.node, out}] += produced - in[out];
    }
  }
  for (std::size_t l = 0; l < s.topology.links.size(); ++l) {
    const Link& link = s.topology.links[l];
    sum[{link.from, link.carrier}] -= d.link_flows[l][t];
    sum[{link.to, link.carrier}] += d.link_flows[l][t];
  }
  for (std::size_t u = 0; u < s.utilities.size(); ++u) {
    sum[{s.utilities[u].node, s.utilities[u].carrier}] += d.exchange[u][t];
  }
  double worst = 0.0;
  for (const auto& [key, v] : sum) worst = std::max(worst, std::abs(v));
  return worst;
}

/// Random grid-connected scenario: up to 5 nodes on a random tree with
/// electricity and heat links, up to 6 devices, 24 hourly steps. The grid
/// and heat utilities at the root keep every draw feasible.
inline Scenario random_scenario(unsigned seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  constexpr std::size_t steps = 24;

  Scenario s;
  s.name = "random" + std::to_string(seed);
  s.self_use = true;
  const std::size_t nodes = 1 + pick(5);
  for (std::size_t i = 0; i < nodes; ++i) {
    s.topology.nodes.push_back({"n" + std::to_string(i), {Carrier::electricity, Carrier::heat}});
    if (i == 0) continue;
    const std::string parent = "n" + std::to_string(pick(i));
    const std::string child = "n" + std::to_string(i);
    s.topology.links.push_back({"e" + std::to_string(i), parent, child, Carrier::electricity, 1e4});
    s.topology.links.push_back({"h" + std::to_string(i), parent, child, Carrier::heat, 1e4});
  }
  s.utilities.push_back({"grid", "n0", Carrier::electricity, 1e4});
  s.utilities.push_back({"district", "n0", Carrier::heat, 1e4});
  if (pick(2) == 0) {
    Hub boiler{"boiler", "n" + std::to_string(pick(nodes)), {}, uni(10, 80)};
    boiler.coupling.set(Carrier::heat, Carrier::electricity, uni(0.8, 0.99));
    s.topology.hubs.push_back(boiler);
  }

  std::vector<double> sun(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    sun[t] = std::max(0.0, 900.0 * std::sin(3.14159265358979 * (static_cast<double>(t) - 6.0) / 12.0));
  }
  s.profiles["sun"] = sun;
  for (Carrier c : {Carrier::electricity, Carrier::heat, Carrier::gas}) {
    std::vector<double> price(steps);
    for (auto& p : price) p = uni(0.05, 0.8);
    s.prices[c] = price;
  }

  const std::size_t devices = 1 + pick(6);
  for (std::size_t k = 0; k < devices; ++k) {
    const std::string id = "d" + std::to_string(k);
    const std::string node = "n" + std::to_string(pick(nodes));
    switch (pick(8)) {
      case 0:
        s.devices.push_back({id, node, SolarDevice{{devices::SolarKind::pv, uni(10, 80), uni(0.12, 0.2), uni(50, 400)}, "sun"}});
        break;
      case 1:
        s.devices.push_back(
            {id, node, SolarDevice{{devices::SolarKind::collector, uni(10, 80), uni(0.4, 0.6), uni(50, 200)}, "sun"}});
        break;
      case 2:
      case 3: {
        std::vector<double> load(steps);
        for (auto& v : load) v = uni(0, 40);
        s.profiles["load" + id] = load;
        s.devices.push_back({id, node, LoadSpec{k % 2 ? Carrier::heat : Carrier::electricity, "load" + id, 1.0}});
        break;
      }
      case 4: {
        std::vector<double> net(steps);
        for (auto& v : net) v = uni(-5, 10);
        s.profiles["bipv" + id] = net;
        s.devices.push_back({id, node, BipvSpec{"bipv" + id, 1.0}});
        break;
      }
      case 5: {
        devices::StCaesParams p;
        p.air_capacity = uni(20, 200);
        p.thermal_capacity = uni(20, 200);
        p.loss = uni(0, 0.02);
        p.cooling = 0.0;
        p.charge_rating = uni(5, 40);
        p.discharge_rating = uni(5, 40);
        s.devices.push_back({id, node, StCaesDevice{p, p.air_capacity * uni(0, 1), p.thermal_capacity * uni(0, 1)}});
        break;
      }
      case 6:
        s.devices.push_back({id, node, ChpSpec{uni(20, 200), uni(0.25, 0.4), uni(0.3, 0.5)}});
        break;
      default: {
        devices::DualRolePlantSpec plant;
        plant.mode = devices::PlantMode::load;
        plant.demand = uni(1, 20);
        s.devices.push_back({id, node, plant});
        break;
      }
    }
    s.topology.devices.push_back({node, id});
  }
  if (pick(2) == 0) s.ems = EmsConfig{4, 2, 1, {0.0, 0.05}};
  return s;
}

inline std::vector<std::vector<std::string>> read_csv(const std::string& text, std::string* comment = nullptr) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      if (comment) *comment = line;
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace mei::oracle
