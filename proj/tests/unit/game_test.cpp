#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mei/game/saddle.hpp"
#include "mei/game/stackelberg.hpp"

namespace mei::game {
namespace {

TEST(GoldenSection, QuadraticVertex) {
  EXPECT_NEAR(golden_section([](double x) { return (x - 2) * (x - 2); }, 0, 5, 1e-6), 2.0, 1e-6);
}

TEST(GoldenSection, MonotoneEndpoint) {
  EXPECT_NEAR(golden_section([](double x) { return x; }, 0, 1, 1e-6), 0.0, 1e-6);
}

TEST(GoldenSection, SymmetricProduct) {
  auto f = [](double x) { return -(1 - x * x) * (2 * x - x * x); };
  // Maximizer of (1 - x^2)(2x - x^2) on [0, 1]; derivative root found by bisection.
  auto df = [](double x) { return -2 * x * (2 * x - x * x) + (1 - x * x) * (2 - 2 * x); };
  double lo = 0.01, hi = 0.99;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (df(mid) > 0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(golden_section(f, 0, 1, 1e-7), 0.5 * (lo + hi), 1e-6);
}

TEST(GoldenSection, EvaluationBound) {
  for (double tol : {1e-2, 1e-4, 1e-6, 1e-9}) {
    for (double width : {0.5, 1.0, 5.0, 1000.0}) {
      std::size_t calls = 0;
      auto r = golden_section_search(
          [&](double x) {
            ++calls;
            return std::abs(x - 0.3 * width);
          },
          0.0, width, tol);
      EXPECT_EQ(calls, r.evaluations);
      EXPECT_LE(calls, golden_evaluation_bound(0.0, width, tol));
      EXPECT_NEAR(r.x, 0.3 * width, tol);
    }
  }
}

TEST(GoldenSection, Errors) {
  auto f = [](double x) { return x; };
  try {
    golden_section(f, 1, 1, 1e-3);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_STREQ(e.what(), "empty interval");
  }
  try {
    golden_section(f, 0, 1, 0);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_STREQ(e.what(), "invalid tolerance");
  }
}

PlayerProblem box_player(std::function<double(const Profile&)> cost, double lo, double hi) {
  return {std::move(cost), Box({lo}, {hi}), {}};
}

GameProblem cournot() {
  GameProblem g;
  g.players.push_back(box_player([](const Profile& p) { return -p[0][0] * (1 - p[0][0] - p[1][0]); }, 0, 1));
  g.players.push_back(box_player([](const Profile& p) { return -p[1][0] * (1 - p[0][0] - p[1][0]); }, 0, 1));
  return g;
}

TEST(BestResponse, DecoupledQuadratic) {
  GameProblem g;
  g.players.push_back(box_player([](const Profile& p) { return std::pow(p[0][0] - 3, 2); }, 0, 10));
  EXPECT_NEAR(best_response(g, 0, {{0.0}})[0], 3.0, 1e-7);
}

TEST(BestResponse, Cournot) {
  EXPECT_NEAR(best_response(cournot(), 0, {{0.9}, {1.0 / 3}})[0], (1 - 1.0 / 3) / 2, 1e-7);
}

TEST(BestResponse, FiniteArgmin) {
  GameProblem g;
  const std::vector<double> costs{5, 1, 7};
  g.players.push_back({[costs](const Profile& p) { return costs[static_cast<std::size_t>(p[0][0])]; },
                       FiniteActions{{{0}, {1}, {2}}},
                       {}});
  EXPECT_EQ(best_response(g, 0, {{0}}), Strategy{1});
}

TEST(BestResponse, UnknownPlayer) {
  try {
    best_response(cournot(), 2, {{0.0}, {0.0}});
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_STREQ(e.what(), "unknown player");
  }
}

TEST(NashSolve, Cournot) {
  const EquilibriumResult r = nash_solve(cournot(), {{0.0}, {0.0}}, 1e-13, 200);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.profile[0][0], 1.0 / 3, 1e-6);
  EXPECT_NEAR(r.profile[1][0], 1.0 / 3, 1e-6);
  EXPECT_LE(nash_residual(cournot(), r.profile), 1e-13);
}

TEST(NashSolve, DecoupledOneSweep) {
  GameProblem g;
  g.players.push_back(box_player([](const Profile& p) { return std::pow(p[0][0] - 3, 2); }, 0, 10));
  g.players.push_back(box_player([](const Profile& p) { return std::pow(p[1][0] + 1, 2); }, -5, 5));
  const EquilibriumResult r = nash_solve(g, {{8.0}, {4.0}}, 1e-8, 10);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_NEAR(r.profile[0][0], 3.0, 1e-7);
  EXPECT_NEAR(r.profile[1][0], -1.0, 1e-7);
}

TEST(NashSolve, AffineTransformKeepsFixedPoint) {
  GameProblem g = cournot();
  auto original = g.players[0].cost;
  g.players[0].cost = [original](const Profile& p) { return 7.5 * original(p) - 4.0; };
  const EquilibriumResult a = nash_solve(cournot(), {{0.0}, {0.0}}, 1e-13, 200);
  const EquilibriumResult b = nash_solve(g, {{0.0}, {0.0}}, 1e-13, 200);
  ASSERT_TRUE(a.converged && b.converged);
  EXPECT_NEAR(a.profile[0][0], b.profile[0][0], 1e-6);
  EXPECT_NEAR(a.profile[1][0], b.profile[1][0], 1e-6);
}

TEST(NashSolve, NonConvergenceIsReported) {
  // Matching pennies has no pure equilibrium; best responses cycle.
  Eigen::MatrixXd row(2, 2), col(2, 2);
  row << -1, 1, 1, -1;
  col = -row;
  const EquilibriumResult r = nash_solve(bimatrix_game(row, col), {{0}, {0}}, 1e-9, 20);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.residual, 1e-9);
  EXPECT_EQ(r.iterations, 20u);
}

TEST(NashSolve, BimatrixAgreesWithEnumeration) {
  Eigen::MatrixXd row(2, 2), col(2, 2);
  row << 1, 3, 0, 2;
  col << 1, 0, 3, 2;
  // Oracle: check mutual best response on all four cells.
  std::vector<std::pair<std::size_t, std::size_t>> oracle;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const bool row_ok = row(i, j) <= row(1 - i, j);
      const bool col_ok = col(i, j) <= col(i, 1 - j);
      if (row_ok && col_ok) oracle.emplace_back(i, j);
    }
  }
  ASSERT_EQ(oracle.size(), 1u);
  EXPECT_EQ(pure_nash_enumerate(row, col), oracle);
  for (double r0 : {0.0, 1.0}) {
    for (double c0 : {0.0, 1.0}) {
      const EquilibriumResult r = nash_solve(bimatrix_game(row, col), {{r0}, {c0}}, 1e-12, 10);
      ASSERT_TRUE(r.converged);
      EXPECT_EQ(r.profile[0][0], static_cast<double>(oracle[0].first));
      EXPECT_EQ(r.profile[1][0], static_cast<double>(oracle[0].second));
    }
  }
}

TEST(PureNash, PrisonersDilemma) {
  Eigen::MatrixXd row(2, 2), col(2, 2);
  // Action 0 = cooperate, 1 = defect; costs are years in prison.
  row << 1, 3, 0, 2;
  col << 1, 0, 3, 2;
  const auto cells = pure_nash_enumerate(row, col);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0], std::make_pair(std::size_t{1}, std::size_t{1}));
}

TEST(PureNash, ZeroMatricesAllCells) {
  EXPECT_EQ(pure_nash_enumerate(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 3)).size(), 6u);
}

TEST(PureNash, MatchingPenniesEmpty) {
  Eigen::MatrixXd row(2, 2);
  row << -1, 1, 1, -1;
  EXPECT_TRUE(pure_nash_enumerate(row, -row).empty());
}

TEST(PureNash, ShapeMismatch) {
  try {
    pure_nash_enumerate(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 3));
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_STREQ(e.what(), "dimension error");
  }
}

TEST(PureNash, AgreesWithNashSolveOnRandomGames) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(0, 9);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd row(3, 4), col(3, 4);
    for (Eigen::Index i = 0; i < 3; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) {
        row(i, j) = u(rng);
        col(i, j) = u(rng);
      }
    }
    const auto cells = pure_nash_enumerate(row, col);
    const EquilibriumResult r = nash_solve(bimatrix_game(row, col), {{0}, {0}}, 1e-12, 50);
    if (!r.converged) continue;
    const std::pair<std::size_t, std::size_t> found{static_cast<std::size_t>(r.profile[0][0]),
                                                    static_cast<std::size_t>(r.profile[1][0])};
    EXPECT_NE(std::find(cells.begin(), cells.end(), found), cells.end());
  }
}

TEST(Saddle, Singleton) {
  const SaddleResult r = saddle_solve({Eigen::MatrixXd::Zero(1, 1)}, 1);
  EXPECT_EQ(r.value, 0.0);
}

TEST(Saddle, MatchingPennies) {
  Eigen::MatrixXd a(2, 2);
  a << 1, -1, -1, 1;
  const SaddleResult r = saddle_solve({a}, 100000);
  EXPECT_NEAR(r.row(0), 0.5, 1e-2);
  EXPECT_NEAR(r.col(0), 0.5, 1e-2);
  EXPECT_NEAR(r.value, 0.0, 1e-2);
  EXPECT_LE(r.lower, r.upper);
}

TEST(Saddle, ExploitabilityShrinksByDecade) {
  Eigen::MatrixXd a(2, 2);
  a << 1, -1, -1, 1;
  double previous = saddle_solve({a}, 10).exploitability;
  for (std::size_t n = 100; n <= 1000000; n *= 10) {
    const double current = saddle_solve({a}, n).exploitability;
    EXPECT_LE(current, previous) << n;
    previous = current;
  }
}

TEST(Saddle, GridMinimaxOracle) {
  Eigen::MatrixXd a(2, 3);
  a << 3, -1, 2, 1, 2, -1;
  // Row player maximizes min_j over a 1e-3 grid of mixtures (p, 1 - p).
  double best = -1e9;
  for (int k = 0; k <= 1000; ++k) {
    const double p = k / 1000.0;
    double worst = 1e9;
    for (int j = 0; j < 3; ++j) worst = std::min(worst, p * a(0, j) + (1 - p) * a(1, j));
    best = std::max(best, worst);
  }
  const SaddleResult r = saddle_solve({a}, 100000);
  EXPECT_NEAR(r.value, best, 1e-2);
  EXPECT_LE(r.lower, best + 1e-9);
  EXPECT_GE(r.upper, best - 1e-3);
}

BilevelProblem quadratic_bilevel() {
  BilevelProblem p;
  p.leader_cost = [](const Strategy& x, const Strategy& y) { return std::pow(x[0] - 1, 2) + y[0] * y[0]; };
  p.follower_cost = [](const Strategy& y, const Strategy& x) { return std::pow(y[0] - x[0], 2); };
  p.leader_set = Box({0}, {1});
  p.follower_set = Box({0}, {1});
  return p;
}

TEST(Stackelberg, QuadraticBoxes) {
  const StackelbergResult r = stackelberg_solve(quadratic_bilevel(), 1e-8);
  EXPECT_NEAR(r.leader[0], 0.5, 1e-5);
  EXPECT_NEAR(r.follower[0], 0.5, 1e-5);
  EXPECT_NEAR(r.leader_cost, 0.5, 1e-8);
}

TEST(Stackelberg, IndifferentFollowerFavoursLeader) {
  BilevelProblem p;
  p.leader_cost = [](const Strategy& x, const Strategy&) { return x[0] * x[0]; };
  p.follower_cost = [](const Strategy&, const Strategy&) { return 0.0; };
  p.leader_set = Box({-1}, {1});
  p.follower_set = Box({0}, {1});
  const StackelbergResult r = stackelberg_solve(p, 1e-8);
  EXPECT_NEAR(r.leader[0], 0.0, 1e-6);

  // A leader cost that depends on y makes the tie-break observable.
  p.leader_cost = [](const Strategy& x, const Strategy& y) { return x[0] * x[0] + std::pow(y[0] - 0.3, 2); };
  const StackelbergResult q = stackelberg_solve(p, 1e-8);
  EXPECT_NEAR(q.leader[0], 0.0, 1e-6);
  EXPECT_NEAR(q.follower[0], 0.3, 1e-6);
}

TEST(Stackelberg, FiniteLeaderMatchesEnumeration) {
  BilevelProblem p = quadratic_bilevel();
  p.leader_set = FiniteActions{{{0.0}, {0.5}, {1.0}}};
  const StackelbergResult r = stackelberg_solve(p, 1e-8);
  // Oracle: y*(x) = x, so F = (x - 1)^2 + x^2 on the three actions.
  double best_x = 0, best_f = 1e9;
  for (double x : {0.0, 0.5, 1.0}) {
    const double f = std::pow(x - 1, 2) + x * x;
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  EXPECT_EQ(r.leader[0], best_x);
  EXPECT_NEAR(r.leader_cost, best_f, 1e-8);
}

TEST(Stackelberg, FiniteFollowerTieBreak) {
  BilevelProblem p;
  p.leader_cost = [](const Strategy&, const Strategy& y) { return -y[0]; };
  p.follower_cost = [](const Strategy& y, const Strategy&) { return y[0] < 1.5 ? 0.0 : 1.0; };
  p.leader_set = FiniteActions{{{0.0}}};
  p.follower_set = FiniteActions{{{0.0}, {1.0}, {2.0}}};
  EXPECT_EQ(stackelberg_solve(p, 1e-9).follower, Strategy{1.0});
}

}  // namespace
}  // namespace mei::game
