// Cost/emission trade-off settled by Nash bargaining over a weighted front.
#include <cmath>
#include <iostream>

#include "mei/planner/bargain.hpp"

int main() {
  using namespace mei::planner;
  BiObjectiveProblem p;
  p.cost = [](const Decision& x) { return std::pow(x[0] - 1, 2); };
  p.emission = [](const Decision& x) { return std::pow(x[0] + 1, 2); };
  p.box = mei::game::Box({-1.0}, {1.0});

  std::vector<double> weights;
  for (int i = 0; i <= 20; ++i) weights.push_back(i / 20.0);
  const ParetoFront front = pareto_sweep(p, weights);
  const BargainResult r = nash_bargain(p, front, {4, 9}, 1e-9);
  std::cout << "front points: " << front.points.size() << "\n";
  std::cout << "x = " << r.x[0] << ", cost " << r.f1 << ", emission " << r.f2 << "\n";
}
