#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "mei/game/golden_section.hpp"
#include "mei/planner/pareto.hpp"

namespace mei::planner {

struct DisagreementPoint {
  double f1 = 0.0;
  double f2 = 0.0;
};

struct BargainResult {
  Decision x;
  double f1 = 0.0;
  double f2 = 0.0;
  double nash_product = 0.0;
  double weight = 0.0;
};

inline constexpr double kDominanceSlack = 1e-9;

/// Nadir of the front: the largest cost and the largest emission.
inline DisagreementPoint disagreement_point(const ParetoFront& front) {
  if (front.empty()) throw InvalidInput("empty Pareto front");
  DisagreementPoint d{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : front.points) {
    d.f1 = std::max(d.f1, p.f1);
    d.f2 = std::max(d.f2, p.f2);
  }
  return d;
}

inline double nash_product(const DisagreementPoint& d, double f1, double f2) {
  return (d.f1 - f1) * (d.f2 - f2);
}

namespace detail {

inline void check_disagreement(const ParetoFront& front, const DisagreementPoint& d) {
  if (front.empty()) throw InvalidInput("empty Pareto front");
  for (const auto& p : front.points) {
    if (p.f1 > d.f1 + kDominanceSlack || p.f2 > d.f2 + kDominanceSlack) {
      throw InvalidInput("invalid disagreement point");
    }
  }
}

/// Best front point by Nash product; ties keep the lower cost.
inline BargainResult best_front_point(const ParetoFront& front, const DisagreementPoint& d) {
  BargainResult best;
  bool first = true;
  for (const auto& p : front.points) {
    const double v = nash_product(d, p.f1, p.f2);
    if (first || v > best.nash_product) {
      best = {p.x, p.f1, p.f2, v, p.weight};
      first = false;
    }
  }
  return best;
}

}  // namespace detail

/// Nash bargaining over the Pareto curve. The curve is traced by a
/// Chebyshev scalarization between the ideal point of the front and d,
/// parametrized by one weight, and the weight is chosen by golden-section
/// search on the Nash product. Stored front points are compared as well.
inline BargainResult nash_bargain(const BiObjectiveProblem& p, const ParetoFront& front,
                                  const DisagreementPoint& d, double tol) {
  detail::check_disagreement(front, d);
  p.validate();
  if (!(tol > 0.0)) throw InvalidInput("invalid tolerance");

  double z1 = std::numeric_limits<double>::infinity();
  double z2 = std::numeric_limits<double>::infinity();
  for (const auto& q : front.points) {
    z1 = std::min(z1, q.f1);
    z2 = std::min(z2, q.f2);
  }
  const double s1 = d.f1 > z1 ? d.f1 - z1 : 1.0;
  const double s2 = d.f2 > z2 ? d.f2 - z2 : 1.0;

  auto curve = [&](double lambda) {
    auto scalar = [&](const Decision& x) {
      const double a = lambda * (p.cost(x) - z1) / s1;
      const double b = (1.0 - lambda) * (p.emission(x) - z2) / s2;
      return std::max(a, b) + 1e-6 * (a + b) + constraint_penalty(p, x);
    };
    return game::coordinate_descent(scalar, p.box, p.box.center(), {kScalarizedTolerance, 200});
  };
  auto product_at = [&](double lambda) {
    const Decision x = curve(lambda);
    if (!feasible(p, x)) return -std::numeric_limits<double>::infinity();
    return nash_product(d, p.cost(x), p.emission(x));
  };

  BargainResult best = detail::best_front_point(front, d);
  if (front.points.size() > 1 || z1 != d.f1 || z2 != d.f2) {
    const double lambda = game::golden_section([&](double l) { return -product_at(l); }, 0.0, 1.0, tol);
    const Decision x = curve(lambda);
    if (feasible(p, x)) {
      const double f1 = p.cost(x);
      const double f2 = p.emission(x);
      const double v = nash_product(d, f1, f2);
      bool dominated = false;
      for (const auto& q : front.points) {
        if (dominates(q.f1, q.f2, f1, f2)) dominated = true;
      }
      if (!dominated && v > best.nash_product) best = {x, f1, f2, v, lambda};
    }
  }
  return best;
}

/// Bargaining over a finite front: the point with the largest Nash product.
inline BargainResult nash_bargain_finite(const ParetoFront& front, const DisagreementPoint& d) {
  detail::check_disagreement(front, d);
  return detail::best_front_point(front, d);
}

}  // namespace mei::planner
