#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "mei/game/box.hpp"

namespace mei::planner {

using Decision = std::vector<double>;
using Objective = std::function<double(const Decision&)>;

/// Cost f1 and emission f2 over a box, with equality (g = 0) and inequality
/// (h <= 0) constraints.
struct BiObjectiveProblem {
  Objective cost;
  Objective emission;
  std::vector<Objective> equalities;
  std::vector<Objective> inequalities;
  game::Box box;

  void validate() const {
    if (!cost || !emission) throw InvalidInput("objective missing");
    if (box.size() == 0) throw InvalidInput("empty decision box");
    box.validate();
  }
};

struct ParetoPoint {
  Decision x;
  double f1 = 0.0;
  double f2 = 0.0;
  double weight = 0.0;  // scalarization weight that produced the point
};

struct ParetoFront {
  std::vector<ParetoPoint> points;  // f1 ascending

  bool empty() const noexcept { return points.empty(); }
};

inline constexpr double kPenaltyWeight = 1e6;
inline constexpr double kFeasibilityTolerance = 1e-6;
inline constexpr double kScalarizedTolerance = 1e-10;

inline double constraint_penalty(const BiObjectiveProblem& p, const Decision& x) {
  double s = 0.0;
  for (const auto& g : p.equalities) s += std::pow(g(x), 2);
  for (const auto& h : p.inequalities) s += std::pow(std::max(0.0, h(x)), 2);
  return kPenaltyWeight * s;
}

inline bool feasible(const BiObjectiveProblem& p, const Decision& x, double tol = kFeasibilityTolerance) {
  for (const auto& g : p.equalities) {
    if (std::abs(g(x)) > tol) return false;
  }
  for (const auto& h : p.inequalities) {
    if (h(x) > tol) return false;
  }
  return true;
}

/// a dominates b: no worse in both objectives, strictly better in one.
inline bool dominates(double a1, double a2, double b1, double b2) {
  return a1 <= b1 && a2 <= b2 && (a1 < b1 || a2 < b2);
}

/// Keeps the nondominated points (first occurrence of exact duplicates) and
/// sorts them by f1, then f2.
inline std::vector<ParetoPoint> nondominated(std::vector<ParetoPoint> pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    return a.f1 != b.f1 ? a.f1 < b.f1 : a.f2 < b.f2;
  });
  std::vector<ParetoPoint> kept;
  double best_f2 = std::numeric_limits<double>::infinity();
  for (auto& p : pts) {
    if (p.f2 < best_f2) {
      best_f2 = p.f2;
      kept.push_back(std::move(p));
    }
  }
  return kept;
}

struct ObjectiveRange {
  double f1_min = 0.0, f1_max = 1.0;
  double f2_min = 0.0, f2_max = 1.0;

  double scale1() const { return f1_max > f1_min ? f1_max - f1_min : 1.0; }
  double scale2() const { return f2_max > f2_min ? f2_max - f2_min : 1.0; }
};

/// Sampled objective ranges over the box: a regular grid for up to three
/// variables, seeded uniform samples beyond that.
inline ObjectiveRange sample_range(const BiObjectiveProblem& p, std::size_t budget = 4096) {
  const std::size_t n = p.box.size();
  ObjectiveRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  auto visit = [&](const Decision& x) {
    const double a = p.cost(x);
    const double b = p.emission(x);
    r.f1_min = std::min(r.f1_min, a);
    r.f1_max = std::max(r.f1_max, a);
    r.f2_min = std::min(r.f2_min, b);
    r.f2_max = std::max(r.f2_max, b);
  };
  if (n <= 3) {
    const auto per_dim = static_cast<std::size_t>(std::max(
        2.0, std::floor(std::pow(static_cast<double>(budget), 1.0 / static_cast<double>(n)))));
    std::vector<std::size_t> idx(n, 0);
    Decision x(n);
    while (true) {
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(idx[i]) / static_cast<double>(per_dim - 1);
        x[i] = p.box.lower[i] + t * (p.box.upper[i] - p.box.lower[i]);
      }
      visit(x);
      std::size_t k = 0;
      while (k < n && ++idx[k] == per_dim) idx[k++] = 0;
      if (k == n) break;
    }
  } else {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Decision x(n);
    for (std::size_t s = 0; s < budget; ++s) {
      for (std::size_t i = 0; i < n; ++i) x[i] = p.box.lower[i] + u(rng) * (p.box.upper[i] - p.box.lower[i]);
      visit(x);
    }
    visit(p.box.lower);
    visit(p.box.upper);
  }
  return r;
}

/// Weighted-sum sweep: for each weight minimize lambda * f1_hat +
/// (1 - lambda) * f2_hat plus the constraint penalty. Infeasible and
/// dominated results are dropped.
inline ParetoFront pareto_sweep(const BiObjectiveProblem& p, std::span<const double> weights) {
  if (weights.empty()) throw InvalidInput("no weights");
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("weight outside [0, 1]");
  }
  p.validate();
  const ObjectiveRange range = sample_range(p);

  std::vector<double> order(weights.begin(), weights.end());
  std::sort(order.begin(), order.end());

  std::vector<ParetoPoint> raw;
  for (double lambda : order) {
    auto scalar = [&](const Decision& x) {
      return lambda * (p.cost(x) - range.f1_min) / range.scale1() +
             (1.0 - lambda) * (p.emission(x) - range.f2_min) / range.scale2() + constraint_penalty(p, x);
    };
    Decision x = game::coordinate_descent(scalar, p.box, p.box.center(), {kScalarizedTolerance, 200});
    if (!feasible(p, x)) continue;
    raw.push_back({x, p.cost(x), p.emission(x), lambda});
  }
  return {nondominated(std::move(raw))};
}

}  // namespace mei::planner
