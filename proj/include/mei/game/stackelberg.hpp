#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "mei/game/nash.hpp"

namespace mei::game {

/// Leader-follower problem. The leader minimizes F(x, y*(x)) where y*(x)
/// minimizes the follower objective f(y; x).
struct BilevelProblem {
  std::function<double(const Strategy& leader, const Strategy& follower)> leader_cost;
  std::function<double(const Strategy& follower, const Strategy& leader)> follower_cost;
  StrategySet leader_set;
  StrategySet follower_set;
  /// Optional exact follower reaction (already tie-broken).
  std::function<Strategy(const Strategy& leader)> follower_response;

  void validate() const {
    if (!leader_cost) throw InvalidInput("leader objective missing");
    if (!follower_cost && !follower_response) throw InvalidInput("follower objective missing");
    for (const StrategySet* set : {&leader_set, &follower_set}) {
      if (const auto* box = std::get_if<Box>(set)) {
        box->validate();
      } else if (std::get<FiniteActions>(*set).actions.empty()) {
        throw InvalidInput("finite action list is empty");
      }
    }
  }
};

struct StackelbergResult {
  Strategy leader;
  Strategy follower;
  double leader_cost = 0.0;
};

/// Follower reaction with ties resolved in the leader's favour: among
/// strategies within tol * (1 + |f*|) of the follower optimum, the one with
/// the lowest leader cost.
inline Strategy follower_reaction(const BilevelProblem& p, const Strategy& leader, double tol) {
  if (p.follower_response) return p.follower_response(leader);

  auto f = [&](const Strategy& y) { return p.follower_cost(y, leader); };
  auto big_f = [&](const Strategy& y) { return p.leader_cost(leader, y); };

  if (const auto* box = std::get_if<Box>(&p.follower_set)) {
    const DescentOptions opts{std::min(tol, kBestResponseTolerance), kBestResponseSweeps};
    const Strategy y0 = coordinate_descent(f, *box, box->center(), opts);
    const double f_star = f(y0);
    const double band = f_star + tol * (1.0 + std::abs(f_star));
    auto restricted = [&](const Strategy& y) {
      return f(y) <= band ? big_f(y) : std::numeric_limits<double>::infinity();
    };
    return coordinate_descent(restricted, *box, y0, opts);
  }

  const auto& actions = std::get<FiniteActions>(p.follower_set).actions;
  double f_star = std::numeric_limits<double>::infinity();
  for (const auto& y : actions) f_star = std::min(f_star, f(y));
  const double band = f_star + tol * (1.0 + std::abs(f_star));
  const Strategy* best = nullptr;
  double best_leader = std::numeric_limits<double>::infinity();
  for (const auto& y : actions) {
    if (f(y) > band) continue;
    const double v = big_f(y);
    if (!best || v < best_leader) {
      best = &y;
      best_leader = v;
    }
  }
  return *best;
}

inline StackelbergResult stackelberg_solve(const BilevelProblem& p, double tol) {
  p.validate();
  if (!(tol > 0.0)) throw InvalidInput("invalid tolerance");

  auto outcome = [&](const Strategy& x) {
    StackelbergResult r;
    r.leader = x;
    r.follower = follower_reaction(p, x, tol);
    r.leader_cost = p.leader_cost(x, r.follower);
    return r;
  };

  if (const auto* box = std::get_if<Box>(&p.leader_set)) {
    auto value = [&](const Strategy& x) { return outcome(x).leader_cost; };
    const Strategy x = coordinate_descent(value, *box, box->center(), {tol, kBestResponseSweeps});
    return outcome(x);
  }

  StackelbergResult best;
  bool first = true;
  for (const auto& x : std::get<FiniteActions>(p.leader_set).actions) {
    StackelbergResult r = outcome(x);
    if (first || r.leader_cost < best.leader_cost) {
      best = std::move(r);
      first = false;
    }
  }
  return best;
}

}  // namespace mei::game
