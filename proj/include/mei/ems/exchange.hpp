#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mei/ems/dispatch.hpp"
#include "mei/ems/iopf.hpp"
#include "mei/ems/mode.hpp"
#include "mei/game/nash.hpp"

namespace mei::ems {

inline constexpr double kMemoQuantum = 1e-6;  // kW
inline constexpr double kInfeasibleCost = 1e15;

struct ExchangeKey {
  std::string pair;
  Carrier carrier = Carrier::electricity;
  std::size_t step = 0;
  double bound = 0.0;
};

/// One MEI in the exchange game. Its strategy is the full vector of flows over
/// `keys`; `cost` sees the whole profile (own entry included).
struct MeiCostModel {
  std::string id;
  std::vector<ExchangeKey> keys;
  std::function<double(const game::Profile&, std::size_t self)> cost;
  std::function<game::Strategy(const game::Profile&, std::size_t self)> best_response;
};

namespace detail {

/// Memo of inner evaluations keyed on the profile quantized to 1e-6 kW.
class EvaluationMemo {
 public:
  template <class F>
  auto cost(std::size_t player, const game::Profile& profile, F&& eval) {
    const auto key = quantize(player, profile);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = costs_.find(key); it != costs_.end()) return it->second;
    }
    const double v = eval();
    std::lock_guard<std::mutex> lock(mutex_);
    costs_.emplace(key, v);
    return v;
  }

  template <class F>
  game::Strategy response(std::size_t player, const game::Profile& profile, F&& eval) {
    const auto key = quantize(player, profile);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = responses_.find(key); it != responses_.end()) return it->second;
    }
    game::Strategy v = eval();
    std::lock_guard<std::mutex> lock(mutex_);
    responses_.emplace(key, v);
    return v;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return costs_.size() + responses_.size();
  }

 private:
  static std::vector<std::int64_t> quantize(std::size_t player, const game::Profile& profile) {
    std::vector<std::int64_t> key{static_cast<std::int64_t>(player)};
    for (const auto& s : profile) {
      key.push_back(static_cast<std::int64_t>(s.size()));
      for (double v : s) key.push_back(std::llround(v / kMemoQuantum));
    }
    return key;
  }

  mutable std::mutex mutex_;
  std::map<std::vector<std::int64_t>, double> costs_;
  std::map<std::vector<std::int64_t>, game::Strategy> responses_;
};

}  // namespace detail

/// Nash equilibrium of the exchange game by best-response iteration.
/// Autonomous operation returns the all-zero schedule without solving.
inline ExchangeSchedule exchange_equilibrium(const std::vector<MeiCostModel>& meis, OperationMode mode, double tol,
                                             std::size_t max_iter = 200) {
  if (meis.empty()) throw InvalidInput("exchange game needs at least one MEI");
  ExchangeSchedule out;
  out.mode = mode;
  for (const auto& m : meis) {
    for (const auto& k : m.keys) out.flows.push_back({k.pair, k.carrier, k.step, 0.0, k.bound});
  }
  if (mode == OperationMode::autonomous) {
    for (auto& f : out.flows) f.bound = 0.0;
    return out;
  }

  auto memo = std::make_shared<detail::EvaluationMemo>();
  game::GameProblem g;
  game::Profile init;
  for (std::size_t i = 0; i < meis.size(); ++i) {
    const MeiCostModel& m = meis[i];
    if (!m.cost) throw InvalidInput("MEI cost model missing");
    std::vector<double> lo, hi;
    for (const auto& k : m.keys) {
      if (!(k.bound >= 0.0)) throw InvalidInput("exchange bound must be >= 0");
      lo.push_back(-k.bound);
      hi.push_back(k.bound);
    }
    game::PlayerProblem p;
    p.strategies = game::Box(lo, hi);
    p.cost = [&m, i, memo](const game::Profile& profile) {
      return memo->cost(i, profile, [&] { return m.cost(profile, i); });
    };
    if (m.best_response) {
      p.best_response = [&m, i, memo](const game::Profile& profile) {
        return memo->response(i, profile, [&] { return m.best_response(profile, i); });
      };
    }
    g.players.push_back(std::move(p));
    init.emplace_back(m.keys.size(), 0.0);
  }

  const game::EquilibriumResult r = game::nash_solve(g, init, tol, max_iter);
  std::size_t f = 0;
  for (std::size_t i = 0; i < meis.size(); ++i) {
    for (std::size_t k = 0; k < meis[i].keys.size(); ++k) out.flows[f++].flow = r.profile[i][k];
  }
  out.converged = r.converged;
  out.residual = std::max(0.0, r.residual);
  out.iterations = r.iterations;
  return out;
}

/// Exchange keys of a scenario: every connection at every step.
inline std::vector<ExchangeKey> scenario_exchange_keys(const Scenario& s, const std::vector<double>& bounds,
                                                       std::size_t steps) {
  std::vector<ExchangeKey> keys;
  for (std::size_t u = 0; u < s.utilities.size(); ++u) {
    for (std::size_t t = 0; t < steps; ++t) {
      keys.push_back({s.utilities[u].id, s.utilities[u].carrier, t, bounds.at(u)});
    }
  }
  return keys;
}

/// A scenario trading with its utilities. The cost of an exchange vector is the
/// cooperative dispatch cost with that exchange fixed; the best response is the
/// dispatch with the exchange free.
inline MeiCostModel scenario_cost_model(const Scenario& s, const std::vector<double>& bounds, std::size_t steps) {
  MeiCostModel m;
  m.id = s.name;
  m.keys = scenario_exchange_keys(s, bounds, steps);
  auto schedule_of = [&s, keys = m.keys](const game::Strategy& own) {
    ExchangeSchedule sched;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      sched.flows.push_back({keys[k].pair, keys[k].carrier, keys[k].step, own[k], keys[k].bound});
    }
    return sched;
  };
  m.cost = [&s, steps, schedule_of](const game::Profile& profile, std::size_t self) {
    try {
      return iopf_cooperative(s, schedule_of(profile[self]), steps).operating_cost();
    } catch (const Infeasible&) {
      return kInfeasibleCost;
    }
  };
  m.best_response = [&s, bounds, steps](const game::Profile&, std::size_t) {
    const DispatchSetpoints d = iopf_free_exchange(s, bounds, steps);
    game::Strategy out;
    for (const auto& series : d.exchange) out.insert(out.end(), series.begin(), series.end());
    return out;
  };
  return m;
}

}  // namespace mei::ems
