#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mei/core/scenario.hpp"
#include "mei/planner/bargain.hpp"

namespace mei::planner {

inline constexpr std::size_t kMaxCatalogSize = 20;

struct PortfolioPlan {
  std::vector<std::string> selected;
  std::uint32_t mask = 0;
  BargainResult bargain;
  ParetoFront front;                    // x = inclusion bit per component
  std::vector<std::uint32_t> front_masks;
  DisagreementPoint disagreement;
  PortVector peak_demand;
};

/// Peak of the summed fixed demand per carrier over the scenario horizon.
inline PortVector peak_demand(const Scenario& s) {
  PortVector peak;
  for (std::size_t t = 0; t < s.horizon(); ++t) {
    PortVector demand;
    for (const auto& d : s.devices) {
      if (const auto* load = std::get_if<LoadSpec>(&d.spec)) {
        demand[load->carrier] += load->scale * s.profiles.at(load->profile)[t];
      } else if (const auto* plant = std::get_if<devices::DualRolePlantSpec>(&d.spec)) {
        if (plant->mode == devices::PlantMode::load) demand[Carrier::electricity] += plant->demand;
      }
    }
    for (Carrier c : kAllCarriers) peak[c] = std::max(peak[c], demand[c]);
  }
  return peak;
}

/// Exhaustive subset enumeration: feasible subsets cover peak demand on every
/// carrier; f1 = capital + operating cost, f2 = emissions. The finite Pareto
/// front is the exact nondominated set, and the compromise maximizes the Nash
/// product against the front's nadir.
inline PortfolioPlan plan_hub_portfolio(std::span<const CatalogComponent> catalog, const Scenario& demand) {
  if (catalog.size() > kMaxCatalogSize) throw InvalidInput("catalog too large");
  const std::size_t n = catalog.size();
  PortfolioPlan plan;
  plan.peak_demand = peak_demand(demand);

  std::vector<ParetoPoint> candidates;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    PortVector cap;
    double f1 = 0.0;
    double f2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1U)) continue;
      cap += catalog[i].capability;
      f1 += catalog[i].capital_cost + catalog[i].operating_cost;
      f2 += catalog[i].emission;
    }
    bool ok = true;
    for (Carrier c : kAllCarriers) {
      if (cap[c] < plan.peak_demand[c] - 1e-9) ok = false;
    }
    if (!ok) continue;
    Decision bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<double>(mask >> i & 1U);
    candidates.push_back({std::move(bits), f1, f2, 0.0});
  }
  if (candidates.empty()) throw Infeasible("infeasible demand");

  plan.front.points = nondominated(std::move(candidates));
  for (const auto& p : plan.front.points) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p.x[i] > 0.5) m |= 1U << i;
    }
    plan.front_masks.push_back(m);
  }
  plan.disagreement = disagreement_point(plan.front);
  plan.bargain = nash_bargain_finite(plan.front, plan.disagreement);
  for (std::size_t i = 0; i < n; ++i) {
    if (plan.bargain.x[i] > 0.5) {
      plan.mask |= 1U << i;
      plan.selected.push_back(catalog[i].id);
    }
  }
  return plan;
}

}  // namespace mei::planner
