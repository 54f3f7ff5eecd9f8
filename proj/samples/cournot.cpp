// Two-firm Cournot duopoly solved by best-response iteration.
#include <iostream>

#include "mei/game/nash.hpp"

int main() {
  using namespace mei::game;
  GameProblem g;
  for (std::size_t i = 0; i < 2; ++i) {
    g.players.push_back({[i](const Profile& p) { return -p[i][0] * (1 - p[0][0] - p[1][0]); }, Box({0.0}, {1.0}), {}});
  }
  const EquilibriumResult r = nash_solve(g, {{0.0}, {0.0}}, 1e-12, 200);
  std::cout << "q1 = " << r.profile[0][0] << ", q2 = " << r.profile[1][0] << " after " << r.iterations
            << " sweeps\n";
}
