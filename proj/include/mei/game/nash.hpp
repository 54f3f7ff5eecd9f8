#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mei/game/box.hpp"

namespace mei::game {

using Strategy = std::vector<double>;
using Profile = std::vector<Strategy>;

/// Finite list of candidate strategies.
struct FiniteActions {
  std::vector<Strategy> actions;
};

using StrategySet = std::variant<Box, FiniteActions>;

inline std::size_t strategy_dimension(const StrategySet& set) {
  if (const auto* box = std::get_if<Box>(&set)) return box->size();
  const auto& actions = std::get<FiniteActions>(set).actions;
  return actions.empty() ? 0 : actions.front().size();
}

/// One player: a cost over the full profile (own entry included) and a
/// strategy set. An optional structured best-response replaces the generic
/// inner search when the caller can solve it exactly.
struct PlayerProblem {
  std::function<double(const Profile&)> cost;
  StrategySet strategies;
  std::function<Strategy(const Profile&)> best_response;

  void validate() const {
    if (!cost) throw InvalidInput("player objective missing");
    if (const auto* box = std::get_if<Box>(&strategies)) {
      box->validate();
    } else if (std::get<FiniteActions>(strategies).actions.empty()) {
      throw InvalidInput("finite action list is empty");
    }
  }
};

struct GameProblem {
  std::vector<PlayerProblem> players;

  void validate() const {
    if (players.empty()) throw InvalidInput("game has no players");
    for (const auto& p : players) p.validate();
  }
};

struct EquilibriumResult {
  Profile profile;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

inline constexpr double kBestResponseTolerance = 1e-8;
inline constexpr std::size_t kBestResponseSweeps = 50;

namespace detail {

inline void check_profile(const GameProblem& game, const Profile& profile) {
  if (profile.size() != game.players.size()) throw InvalidInput("profile dimension mismatch");
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i].size() != strategy_dimension(game.players[i].strategies)) {
      throw InvalidInput("profile dimension mismatch");
    }
  }
}

}  // namespace detail

/// Minimizer of player i's cost with the others held fixed.
inline Strategy best_response(const GameProblem& game, std::size_t i, const Profile& profile) {
  if (i >= game.players.size()) throw InvalidInput("unknown player");
  detail::check_profile(game, profile);
  const PlayerProblem& player = game.players[i];
  if (player.best_response) return player.best_response(profile);

  Profile trial = profile;
  if (const auto* box = std::get_if<Box>(&player.strategies)) {
    auto own_cost = [&](const Strategy& s) {
      trial[i] = s;
      return player.cost(trial);
    };
    return coordinate_descent(own_cost, *box, profile[i], {kBestResponseTolerance, kBestResponseSweeps});
  }

  const auto& actions = std::get<FiniteActions>(player.strategies).actions;
  const double current = player.cost(profile);
  bool current_listed = false;
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < actions.size(); ++k) {
    trial[i] = actions[k];
    const double c = player.cost(trial);
    if (c < best_cost) {
      best_cost = c;
      best = k;
    }
    if (actions[k] == profile[i]) current_listed = true;
  }
  // Keep the current action on ties.
  if (current_listed && !(best_cost < current)) return profile[i];
  return actions[best];
}

/// Largest gain any single player could obtain by deviating unilaterally.
inline double nash_residual(const GameProblem& game, const Profile& profile) {
  double residual = 0.0;
  for (std::size_t i = 0; i < game.players.size(); ++i) {
    Profile deviated = profile;
    deviated[i] = best_response(game, i, profile);
    const double gain = game.players[i].cost(profile) - game.players[i].cost(deviated);
    residual = std::max(residual, gain);
  }
  return residual;
}

/// Gauss-Seidel best-response iteration in player order.
inline EquilibriumResult nash_solve(const GameProblem& game, Profile init, double tol, std::size_t max_iter) {
  game.validate();
  if (!(tol > 0.0)) throw InvalidInput("invalid tolerance");
  detail::check_profile(game, init);

  EquilibriumResult result;
  result.profile = std::move(init);
  result.residual = nash_residual(game, result.profile);
  if (result.residual <= tol) {
    result.converged = true;
    return result;
  }
  for (std::size_t it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < game.players.size(); ++i) {
      Strategy candidate = best_response(game, i, result.profile);
      Profile trial = result.profile;
      trial[i] = candidate;
      if (game.players[i].cost(trial) < game.players[i].cost(result.profile)) result.profile = std::move(trial);
    }
    result.iterations = it;
    result.residual = nash_residual(game, result.profile);
    if (result.residual <= tol) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

/// Two-player finite game from cost matrices (row player picks the row).
inline GameProblem bimatrix_game(const Eigen::MatrixXd& row_costs, const Eigen::MatrixXd& col_costs) {
  if (row_costs.rows() != col_costs.rows() || row_costs.cols() != col_costs.cols()) {
    throw InvalidInput("dimension error");
  }
  if (row_costs.size() == 0) throw InvalidInput("dimension error");
  auto actions = [](Eigen::Index n) {
    FiniteActions a;
    for (Eigen::Index k = 0; k < n; ++k) a.actions.push_back({static_cast<double>(k)});
    return a;
  };
  auto cell = [](const Profile& p) {
    return std::pair{static_cast<Eigen::Index>(p[0][0]), static_cast<Eigen::Index>(p[1][0])};
  };
  GameProblem g;
  g.players.push_back({[row_costs, cell](const Profile& p) {
                         auto [r, c] = cell(p);
                         return row_costs(r, c);
                       },
                       actions(row_costs.rows()), {}});
  g.players.push_back({[col_costs, cell](const Profile& p) {
                         auto [r, c] = cell(p);
                         return col_costs(r, c);
                       },
                       actions(row_costs.cols()), {}});
  return g;
}

/// Cells (i, j) where row i is a best reply to column j and column j is a
/// best reply to row i. Indices are zero-based.
inline std::vector<std::pair<std::size_t, std::size_t>> pure_nash_enumerate(const Eigen::MatrixXd& row_costs,
                                                                            const Eigen::MatrixXd& col_costs) {
  if (row_costs.rows() != col_costs.rows() || row_costs.cols() != col_costs.cols()) {
    throw InvalidInput("dimension error");
  }
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (Eigen::Index i = 0; i < row_costs.rows(); ++i) {
    for (Eigen::Index j = 0; j < row_costs.cols(); ++j) {
      const bool row_best = row_costs(i, j) <= row_costs.col(j).minCoeff();
      const bool col_best = col_costs(i, j) <= col_costs.row(i).minCoeff();
      if (row_best && col_best) cells.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return cells;
}

}  // namespace mei::game
