#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mei/ems/iopf.hpp"
#include "mei/game/stackelberg.hpp"

namespace mei::ems {

/// One infrastructure owner: cost of its own setpoints given the other's.
struct InfrastructureModel {
  std::string owner;
  std::function<double(const game::Strategy& own, const game::Strategy& other)> cost;
  game::StrategySet setpoints;
  std::function<game::Strategy(const game::Strategy& other)> response;  // optional exact reaction
};

struct StackelbergDispatch {
  std::string leader;
  std::string follower;
  game::Strategy leader_setpoints;
  game::Strategy follower_setpoints;
  double leader_cost = 0.0;
  double follower_cost = 0.0;
};

/// Leader-follower dispatch between two infrastructures; the first commits.
inline StackelbergDispatch iopf_stackelberg(const InfrastructureModel& leader, const InfrastructureModel& follower,
                                            double tol) {
  if (!leader.cost || !follower.cost) throw InvalidInput("infrastructure cost model missing");
  game::BilevelProblem p;
  p.leader_cost = leader.cost;
  p.follower_cost = follower.cost;
  p.leader_set = leader.setpoints;
  p.follower_set = follower.setpoints;
  p.follower_response = follower.response;
  const game::StackelbergResult r = game::stackelberg_solve(p, tol);
  return {leader.owner, follower.owner, r.leader, r.follower, r.leader_cost, follower.cost(r.follower, r.leader)};
}

inline constexpr double kFollowerBand = 1e-9;

struct TariffOutcome {
  double tariff = 0.0;           // currency per kWh of leader heat
  double heat = 0.0;             // kWh bought from the leader
  double follower_cost = 0.0;    // operating cost plus heat payments
};

struct ScenarioStackelberg {
  DispatchSetpoints setpoints;
  double tariff = 0.0;
  double leader_cost = 0.0;  // negative heat revenue
  double follower_cost = 0.0;
  std::vector<TariffOutcome> outcomes;
};

/// Heat seller (owner of the solar heat sources and a generating plant) leads
/// by posting a tariff from the configured list; the electricity dispatcher
/// follows with the cooperative dispatch paying for the seller's heat.
inline ScenarioStackelberg iopf_stackelberg(const Scenario& s, const ExchangeSchedule& exchange, std::size_t steps,
                                            double tol = kFollowerBand) {
  check_steps(s, steps);
  std::vector<double> tariffs = s.ems && !s.ems->tariffs.empty() ? s.ems->tariffs : std::vector<double>{0.0, 0.05, 0.1};
  for (double t : tariffs) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("tariffs must be finite and >= 0");
  }
  const ExchangePolicy policy{ExchangePolicy::Kind::fixed, &exchange, {}};
  const IopfModel model(s, steps, policy);
  const auto& owned = model.owned_heat_terms();
  auto heat_of = [&](const game::Strategy& y) {
    double h = model.owned_heat_constant();
    for (const auto& t : owned) h += t.coef * y[t.var];
    return h;
  };

  solve_model(model, s, policy);  // reports the failing step when infeasible

  ScenarioStackelberg out;
  game::BilevelProblem p;
  p.leader_cost = [&](const game::Strategy& x, const game::Strategy& y) { return -x[0] * heat_of(y); };
  p.follower_cost = [&](const game::Strategy& y, const game::Strategy& x) {
    return model.operating_cost(y) + x[0] * heat_of(y);
  };
  p.follower_response = [&](const game::Strategy& x) {
    const double tau = x[0];
    lp::LinearProgram lp = model.program();
    for (const auto& t : owned) lp.set_cost(t.var, lp.cost()[t.var] + tau * t.coef);
    lp::Solution sol = lp::solve(lp);
    if (sol.status != lp::Status::optimal) throw std::runtime_error("follower dispatch did not reach an optimum");
    if (tau > 0.0) {
      // Optimistic reaction: among near-optimal follower dispatches, the one
      // buying the most leader heat.
      lp::LinearProgram tie = lp;
      std::vector<lp::Term> objective;
      for (std::size_t j = 0; j < lp.variables(); ++j) {
        if (lp.cost()[j] != 0.0) objective.push_back({j, lp.cost()[j]});
        tie.set_cost(j, 0.0);
      }
      tie.add_row(objective, lp::Sense::less_equal, sol.objective + tol * (1.0 + std::abs(sol.objective)), steps);
      for (const auto& t : owned) tie.set_cost(t.var, -tau * t.coef);
      const lp::Solution second = lp::solve(tie);
      if (second.status == lp::Status::optimal) sol = second;
    }
    out.outcomes.push_back({tau, heat_of(sol.x), p.follower_cost(sol.x, x)});
    return sol.x;
  };
  game::FiniteActions actions;
  for (double t : tariffs) actions.actions.push_back({t});
  p.leader_set = actions;
  p.follower_set = game::FiniteActions{{{0.0}}};

  const game::StackelbergResult r = game::stackelberg_solve(p, tol);
  out.tariff = r.leader[0];
  out.leader_cost = r.leader_cost;
  out.follower_cost = p.follower_cost(r.follower, r.leader);
  out.setpoints = model.extract(r.follower);
  return out;
}

}  // namespace mei::ems
