#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mei/core/scenario.hpp"
#include "mei/ems/dispatch.hpp"
#include "mei/ems/linear_program.hpp"
#include "mei/ems/timescale.hpp"

namespace mei::ems {

inline constexpr double kBalanceTolerance = 1e-9;    // kW
inline constexpr double kExtraAirCost = 1e-7;        // per kW, keeps exhaust air minimal
inline constexpr double kReplayTolerance = 1e-6;     // kWh, relative to capacity

/// How the utility connections enter the dispatch problem.
struct ExchangePolicy {
  enum class Kind { fixed, free } kind = Kind::fixed;
  const ExchangeSchedule* schedule = nullptr;  // fixed: flows per (connection, step)
  std::vector<double> bounds;                  // free: per connection, kW
};

namespace detail {

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct UnitVars {
  std::size_t elec = kNone;  // solar electricity
  std::size_t heat = kNone;  // solar heat
  std::size_t fuel = kNone;  // chp
  std::size_t recovery = kNone;
  std::size_t charge = kNone;  // st-caes
  std::size_t solar_in = kNone;
  std::size_t discharge = kNone;
  std::size_t cool = kNone;
  std::size_t heat_out = kNone;
  std::size_t extra_air = kNone;
  std::size_t air = kNone;  // end of step
  std::size_t thermal = kNone;
};

}  // namespace detail

/// Whole-horizon dispatch as one linear program. Renewable outputs are
/// curtailable, loads, BIPV and plant injections are fixed, storage couples
/// the steps, and layer timescales hold slow (thermal) and medium (gas)
/// setpoints constant inside their blocks.
class IopfModel {
 public:
  IopfModel(const Scenario& s, std::size_t steps, const ExchangePolicy& policy)
      : s_(&s), steps_(steps), dt_(s.time_step) {
    if (steps > s.horizon()) throw InvalidInput("horizon exceeds the scenario profiles");
    if (policy.kind == ExchangePolicy::Kind::free && policy.bounds.size() != s.utilities.size()) {
      throw InvalidInput("exchange bounds do not match the connections");
    }
    hold_slow_ = hold_medium_ = hold_fast_ = 1;
    if (s.ems) {
      hold_slow_ = hold_steps(s.ems->slow_step, dt_);
      hold_medium_ = hold_steps(s.ems->medium_step, dt_);
      hold_fast_ = hold_steps(s.ems->fast_step, dt_);
    }
    build(policy);
  }

  lp::LinearProgram& program() { return lp_; }
  const lp::LinearProgram& program() const { return lp_; }
  std::size_t steps() const { return steps_; }

  /// Leader-owned heat (kWh over the horizon) as LP terms plus a constant.
  const std::vector<lp::Term>& owned_heat_terms() const { return owned_heat_; }
  double owned_heat_constant() const { return owned_heat_constant_; }

  /// Operating cost of x: fuel plus exchange, tiny regularizers excluded.
  double operating_cost(const std::vector<double>& x) const {
    return fuel_cost(x) + exchange_cost(x);
  }

  double fuel_cost(const std::vector<double>& x) const {
    double c = 0.0;
    for (const auto& [var, price] : fuel_terms_) c += price * x[var];
    return c;
  }

  double exchange_cost(const std::vector<double>& x) const {
    double c = fixed_exchange_cost_;
    for (const auto& [var, price] : exchange_terms_) c += price * x[var];
    return c;
  }

  /// Free exchange decision of x, per connection and step.
  std::vector<std::vector<double>> exchange_of(const std::vector<double>& x) const {
    std::vector<std::vector<double>> out(exchange_.size(), std::vector<double>(steps_, 0.0));
    for (std::size_t u = 0; u < exchange_.size(); ++u) {
      for (std::size_t t = 0; t < steps_; ++t) {
        out[u][t] = exchange_[u][t] == detail::kNone ? fixed_exchange_[u][t] : x[exchange_[u][t]];
      }
    }
    return out;
  }

  /// Assembles setpoints from a solution and replays the storage devices.
  DispatchSetpoints extract(std::vector<double> x) const {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], lp_.lower()[j], lp_.upper()[j]);
    const Scenario& s = *s_;
    DispatchSetpoints out;
    out.time_step = dt_;
    out.steps = steps_;
    auto val = [&](std::size_t v) { return v == detail::kNone ? 0.0 : x[v]; };

    for (std::size_t d = 0; d < s.devices.size(); ++d) {
      const Device& dev = s.devices[d];
      UnitSeries series{dev.id, device_kind(dev.spec), dev.node, {}};
      const auto* caes = std::get_if<StCaesDevice>(&dev.spec);
      StorageTrace trace;
      trace.device = dev.id;
      devices::StCaesState state;
      if (caes) state = caes->initial_state();
      for (std::size_t t = 0; t < steps_; ++t) {
        const detail::UnitVars& v = vars_[d][t];
        PortVector inj = fixed_[d][t];
        if (const auto* chp = std::get_if<ChpSpec>(&dev.spec)) {
          inj[Carrier::electricity] += chp->eta_elec * val(v.fuel);
          inj[Carrier::heat] += val(v.recovery);
        } else if (caes) {
          const double c = val(v.charge), q = val(v.solar_in), e = val(v.discharge);
          const double hx = val(v.heat_out), k = val(v.cool);
          inj[Carrier::electricity] += e - c;
          inj[Carrier::heat] += hx - q;
          inj[Carrier::cooling] += k;
          const auto step = devices::st_caes_step(state, c, q, e, hx, k, dt_);
          state = step.state;
          const double scale = 1.0 + caes->params.air_capacity + caes->params.thermal_capacity;
          if (std::abs(state.air - val(v.air)) > kReplayTolerance * scale ||
              std::abs(state.thermal - val(v.thermal)) > kReplayTolerance * scale) {
            throw std::logic_error("device replay diverged for '" + dev.id + "'");
          }
          trace.charge_elec.push_back(c);
          trace.charge_heat.push_back(q);
          trace.delivered.push_back(step.delivered);
          trace.air.push_back(state.air);
          trace.thermal.push_back(state.thermal);
        } else {
          inj[Carrier::electricity] += val(v.elec);
          inj[Carrier::heat] += val(v.heat);
        }
        series.injection.push_back(inj);
      }
      out.devices.push_back(std::move(series));
      if (caes) out.storage.push_back(std::move(trace));
    }

    for (const auto& hub_vars : hub_) {
      std::vector<PortVector> series;
      for (std::size_t t = 0; t < steps_; ++t) {
        PortVector in;
        for (Carrier c : kAllCarriers) in[c] = val(hub_vars[t][index(c)]);
        series.push_back(in);
      }
      out.hub_inputs.push_back(std::move(series));
    }
    for (const auto& link_vars : link_) {
      std::vector<double> series;
      for (std::size_t t = 0; t < steps_; ++t) series.push_back(val(link_vars[t]));
      out.link_flows.push_back(std::move(series));
    }
    out.exchange = exchange_of(x);
    out.fuel_cost = fuel_cost(x);
    out.exchange_cost = exchange_cost(x);
    return out;
  }

 private:
  using Terms = std::vector<lp::Term>;

  std::size_t var(double lo, double hi, double cost) { return lp_.add_variable(lo, hi, cost); }

  void hold(const std::vector<std::size_t>& series, std::size_t block) {
    if (block <= 1) return;
    for (std::size_t t = 0; t < series.size(); ++t) {
      if (t % block == 0 || series[t] == detail::kNone || series[t - 1] == detail::kNone) continue;
      lp_.add_row({{series[t], 1.0}, {series[t - 1], -1.0}}, lp::Sense::equal, 0.0, t);
    }
  }

  void build(const ExchangePolicy& policy) {
    const Scenario& s = *s_;
    const auto& nodes = s.topology.nodes;
    // balance[t][(node, carrier)] -> terms, rhs
    std::vector<std::map<std::pair<std::size_t, std::size_t>, Terms>> terms(steps_);
    std::vector<std::map<std::pair<std::size_t, std::size_t>, double>> rhs(steps_);
    auto node_of = [&](const std::string& id) { return *s.topology.node_index(id); };
    auto add = [&](std::size_t t, std::size_t node, Carrier c, std::size_t v, double coef) {
      terms[t][{node, index(c)}].push_back({v, coef});
    };
    auto fixed = [&](std::size_t t, std::size_t node, const PortVector& p) {
      for (Carrier c : kAllCarriers) rhs[t][{node, index(c)}] -= p[c];
    };

    vars_.assign(s.devices.size(), std::vector<detail::UnitVars>(steps_));
    fixed_.assign(s.devices.size(), std::vector<PortVector>(steps_));
    std::vector<std::vector<std::size_t>> medium_series, slow_series, fast_series;

    for (std::size_t d = 0; d < s.devices.size(); ++d) {
      const Device& dev = s.devices[d];
      const std::size_t node = node_of(dev.node);
      auto& v = vars_[d];
      std::visit(
          [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, SolarDevice>) {
              const auto& irr = s.profiles.at(spec.irradiance);
              for (std::size_t t = 0; t < steps_; ++t) {
                const PortVector avail = devices::solar_available(irr[t], spec.spec);
                if (spec.spec.kind != devices::SolarKind::collector) {
                  v[t].elec = var(0.0, avail[Carrier::electricity], 0.0);
                  add(t, node, Carrier::electricity, v[t].elec, 1.0);
                }
                if (spec.spec.kind == devices::SolarKind::collector ||
                    spec.spec.kind == devices::SolarKind::full_spectrum) {
                  v[t].heat = var(0.0, avail[Carrier::heat], 0.0);
                  add(t, node, Carrier::heat, v[t].heat, 1.0);
                  owned_heat_.push_back({v[t].heat, dt_});
                }
              }
            } else if constexpr (std::is_same_v<T, LoadSpec>) {
              const auto& prof = s.profiles.at(spec.profile);
              for (std::size_t t = 0; t < steps_; ++t) {
                fixed_[d][t] = PortVector::of(spec.carrier, -spec.scale * prof[t]);
              }
            } else if constexpr (std::is_same_v<T, BipvSpec>) {
              const auto& prof = s.profiles.at(spec.profile);
              for (std::size_t t = 0; t < steps_; ++t) {
                fixed_[d][t] = PortVector::of(Carrier::electricity, spec.scale * prof[t]);
              }
            } else if constexpr (std::is_same_v<T, devices::DualRolePlantSpec>) {
              for (std::size_t t = 0; t < steps_; ++t) fixed_[d][t] = devices::dual_role_plant(spec);
              if (spec.mode == devices::PlantMode::generator) {
                owned_heat_constant_ += spec.heat_output * dt_ * static_cast<double>(steps_);
              }
            } else if constexpr (std::is_same_v<T, ChpSpec>) {
              std::vector<std::size_t> fuel;
              for (std::size_t t = 0; t < steps_; ++t) {
                const double price = s.price(Carrier::gas, t) * dt_;
                v[t].fuel = var(0.0, spec.fuel_capacity, price);
                fuel_terms_.push_back({v[t].fuel, price});
                v[t].recovery = var(0.0, lp::kInf, 0.0);
                lp_.add_row({{v[t].recovery, 1.0}, {v[t].fuel, -spec.eta_heat}}, lp::Sense::less_equal, 0.0, t);
                add(t, node, Carrier::electricity, v[t].fuel, spec.eta_elec);
                add(t, node, Carrier::heat, v[t].recovery, 1.0);
                fuel.push_back(v[t].fuel);
              }
              medium_series.push_back(fuel);
            } else if constexpr (std::is_same_v<T, StCaesDevice>) {
              build_caes(spec, node, v, add, slow_series, fast_series);
            }
          },
          dev.spec);
      for (std::size_t t = 0; t < steps_; ++t) fixed(t, node, fixed_[d][t]);
    }

    hub_.assign(s.topology.hubs.size(), std::vector<std::array<std::size_t, kCarrierCount>>(steps_));
    for (std::size_t h = 0; h < s.topology.hubs.size(); ++h) {
      const Hub& hub = s.topology.hubs[h];
      const std::size_t node = node_of(hub.node);
      bool thermal_only = true;
      for (Carrier in : kAllCarriers) {
        for (Carrier o : {Carrier::electricity, Carrier::gas}) {
          if (hub.coupling(o, in) > 0.0) thermal_only = false;
        }
      }
      for (Carrier in : kAllCarriers) {
        std::vector<std::size_t> series;
        for (std::size_t t = 0; t < steps_; ++t) {
          auto& slot = hub_[h][t][index(in)];
          slot = detail::kNone;
          if (!hub.coupling.uses_input(in)) continue;
          slot = var(0.0, hub.capacity, 0.0);
          add(t, node, in, slot, -1.0);
          for (Carrier o : kAllCarriers) {
            if (hub.coupling(o, in) > 0.0) add(t, node, o, slot, hub.coupling(o, in));
          }
          series.push_back(slot);
        }
        if (series.empty()) continue;
        if (in == Carrier::gas) {
          medium_series.push_back(series);
        } else if (thermal_only && (in == Carrier::heat || in == Carrier::cooling)) {
          slow_series.push_back(series);
        } else {
          fast_series.push_back(series);
        }
      }
    }

    link_.assign(s.topology.links.size(), std::vector<std::size_t>(steps_));
    for (std::size_t l = 0; l < s.topology.links.size(); ++l) {
      const Link& link = s.topology.links[l];
      for (std::size_t t = 0; t < steps_; ++t) {
        link_[l][t] = var(-link.capacity, link.capacity, 0.0);
        add(t, node_of(link.from), link.carrier, link_[l][t], -1.0);
        add(t, node_of(link.to), link.carrier, link_[l][t], 1.0);
      }
    }

    exchange_.assign(s.utilities.size(), std::vector<std::size_t>(steps_, detail::kNone));
    fixed_exchange_.assign(s.utilities.size(), std::vector<double>(steps_, 0.0));
    for (std::size_t u = 0; u < s.utilities.size(); ++u) {
      const UtilityConnection& conn = s.utilities[u];
      const std::size_t node = node_of(conn.node);
      std::vector<std::size_t> series;
      for (std::size_t t = 0; t < steps_; ++t) {
        const double price = s.price(conn.carrier, t) * dt_;
        if (policy.kind == ExchangePolicy::Kind::free) {
          const double b = policy.bounds[u];
          exchange_[u][t] = var(-b, b, price);
          exchange_terms_.push_back({exchange_[u][t], price});
          add(t, node, conn.carrier, exchange_[u][t], 1.0);
          series.push_back(exchange_[u][t]);
        } else {
          const double f = policy.schedule ? policy.schedule->flow(conn.id, t) : 0.0;
          if (std::abs(f) > conn.bound * (1.0 + 1e-12)) throw InvalidInput("exchange exceeds its bound");
          fixed_exchange_[u][t] = f;
          fixed_exchange_cost_ += price * f;
          rhs[t][{node, index(conn.carrier)}] -= f;
        }
      }
      if (!series.empty()) fast_series.push_back(series);
    }

    for (std::size_t t = 0; t < steps_; ++t) {
      for (std::size_t n = 0; n < nodes.size(); ++n) {
        for (Carrier c : kAllCarriers) {
          const std::pair<std::size_t, std::size_t> key{n, index(c)};
          auto it = terms[t].find(key);
          const double b = rhs[t].count(key) ? rhs[t][key] : 0.0;
          if (!nodes[n].serves(c)) continue;
          if (it == terms[t].end() || it->second.empty()) {
            if (std::abs(b) > kBalanceTolerance) {
              throw Infeasible("infeasible dispatch at step " + std::to_string(t), t);
            }
            continue;
          }
          lp_.add_row(it->second, lp::Sense::equal, b, t);
        }
      }
    }

    for (const auto& series : slow_series) hold(series, hold_slow_);
    for (const auto& series : medium_series) hold(series, hold_medium_);
    for (const auto& series : fast_series) hold(series, hold_fast_);
  }

  template <class Add>
  void build_caes(const StCaesDevice& dev, std::size_t node, std::vector<detail::UnitVars>& v, Add& add,
                  std::vector<std::vector<std::size_t>>& slow_series,
                  std::vector<std::vector<std::size_t>>& fast_series) {
    const auto& p = dev.params;
    const double keep = 1.0 - p.loss;
    const double yield = p.electric_yield();
    std::vector<std::size_t> charge, discharge, solar_in, heat_out, cool;
    double air0 = dev.air_initial, thermal0 = dev.thermal_initial;
    std::size_t air_prev = detail::kNone, thermal_prev = detail::kNone;
    for (std::size_t t = 0; t < steps_; ++t) {
      auto& u = v[t];
      u.charge = var(0.0, p.charge_rating, 0.0);
      u.solar_in = var(0.0, lp::kInf, 0.0);
      u.discharge = var(0.0, p.discharge_rating, 0.0);
      u.heat_out = var(0.0, lp::kInf, 0.0);
      if (p.cooling > 0.0) {
        u.cool = var(0.0, lp::kInf, 0.0);
        u.extra_air = var(0.0, lp::kInf, kExtraAirCost);
      }
      u.air = var(0.0, p.air_capacity, 0.0);
      u.thermal = var(0.0, p.thermal_capacity, 0.0);

      Terms air{{u.air, 1.0}, {u.charge, -p.eta_charge * dt_}, {u.discharge, dt_ / yield}};
      Terms thermal{{u.thermal, 1.0}, {u.charge, -p.eta_heat * dt_}, {u.solar_in, -dt_},
                    {u.discharge, p.preheat_ratio * dt_ / yield}, {u.heat_out, dt_}};
      Terms air_room{{u.charge, p.eta_charge * dt_}};
      Terms thermal_room{{u.charge, p.eta_heat * dt_}, {u.solar_in, dt_}};
      if (u.extra_air != detail::kNone) air.push_back({u.extra_air, dt_});
      double air_rhs = 0.0, thermal_rhs = 0.0;
      double air_cap = p.air_capacity, thermal_cap = p.thermal_capacity;
      if (air_prev == detail::kNone) {
        air_rhs = keep * air0;
        thermal_rhs = keep * thermal0;
        air_cap -= keep * air0;
        thermal_cap -= keep * thermal0;
      } else {
        air.push_back({air_prev, -keep});
        thermal.push_back({thermal_prev, -keep});
        air_room.push_back({air_prev, keep});
        thermal_room.push_back({thermal_prev, keep});
      }
      lp_.add_row(std::move(air), lp::Sense::equal, air_rhs, t);
      lp_.add_row(std::move(thermal), lp::Sense::equal, thermal_rhs, t);
      lp_.add_row(std::move(air_room), lp::Sense::less_equal, air_cap, t);
      lp_.add_row(std::move(thermal_room), lp::Sense::less_equal, thermal_cap, t);
      if (u.cool != detail::kNone) {
        lp_.add_row({{u.cool, 1.0}, {u.discharge, -p.cooling / yield}, {u.extra_air, -p.cooling}},
                    lp::Sense::less_equal, 0.0, t);
        add(t, node, Carrier::cooling, u.cool, 1.0);
        cool.push_back(u.cool);
      }
      add(t, node, Carrier::electricity, u.discharge, 1.0);
      add(t, node, Carrier::electricity, u.charge, -1.0);
      add(t, node, Carrier::heat, u.heat_out, 1.0);
      add(t, node, Carrier::heat, u.solar_in, -1.0);
      charge.push_back(u.charge);
      discharge.push_back(u.discharge);
      solar_in.push_back(u.solar_in);
      heat_out.push_back(u.heat_out);
      air_prev = u.air;
      thermal_prev = u.thermal;
    }
    fast_series.push_back(charge);
    fast_series.push_back(discharge);
    slow_series.push_back(solar_in);
    slow_series.push_back(heat_out);
    if (!cool.empty()) slow_series.push_back(cool);
  }

  const Scenario* s_;
  std::size_t steps_;
  double dt_;
  std::size_t hold_slow_ = 1, hold_medium_ = 1, hold_fast_ = 1;
  lp::LinearProgram lp_;
  std::vector<std::vector<detail::UnitVars>> vars_;
  std::vector<std::vector<PortVector>> fixed_;
  std::vector<std::vector<std::array<std::size_t, kCarrierCount>>> hub_;
  std::vector<std::vector<std::size_t>> link_;
  std::vector<std::vector<std::size_t>> exchange_;
  std::vector<std::vector<double>> fixed_exchange_;
  double fixed_exchange_cost_ = 0.0;
  std::vector<std::pair<std::size_t, double>> fuel_terms_;
  std::vector<std::pair<std::size_t, double>> exchange_terms_;
  Terms owned_heat_;
  double owned_heat_constant_ = 0.0;
};

/// Solves the model LP; on infeasibility, reports the earliest step whose
/// prefix of the horizon cannot be served.
inline lp::Solution solve_model(const IopfModel& model, const Scenario& s, const ExchangePolicy& policy) {
  lp::Solution sol = lp::solve(model.program());
  if (sol.status == lp::Status::optimal) return sol;
  if (sol.status == lp::Status::infeasible) {
    std::size_t lo = 0, hi = model.steps() - 1;  // prefix [0, hi] infeasible
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      bool feasible = true;
      try {
        feasible = lp::solve(IopfModel(s, mid + 1, policy).program()).status != lp::Status::infeasible;
      } catch (const Infeasible&) {
        feasible = false;
      }
      if (feasible) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    throw Infeasible("infeasible dispatch at step " + std::to_string(lo), lo);
  }
  throw std::runtime_error("dispatch linear program did not reach an optimum");
}

inline void check_steps(const Scenario& s, std::size_t steps) {
  s.validate();
  if (steps == 0) throw InvalidInput("horizon must be positive");
  if (steps > s.horizon()) throw InvalidInput("horizon exceeds the scenario profiles");
}

/// Joint minimization of fuel and exchange cost with the exchange fixed.
inline DispatchSetpoints iopf_cooperative(const Scenario& s, const ExchangeSchedule& exchange, std::size_t steps) {
  check_steps(s, steps);
  const ExchangePolicy policy{ExchangePolicy::Kind::fixed, &exchange, {}};
  const IopfModel model(s, steps, policy);
  const lp::Solution sol = solve_model(model, s, policy);
  return model.extract(sol.x);
}

/// Same problem with the exchange decided jointly within the given bounds.
inline DispatchSetpoints iopf_free_exchange(const Scenario& s, const std::vector<double>& bounds, std::size_t steps) {
  check_steps(s, steps);
  const ExchangePolicy policy{ExchangePolicy::Kind::free, nullptr, bounds};
  const IopfModel model(s, steps, policy);
  const lp::Solution sol = solve_model(model, s, policy);
  return model.extract(sol.x);
}

}  // namespace mei::ems
