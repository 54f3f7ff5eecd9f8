#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mei/game/golden_section.hpp"

namespace mei::game {

/// Axis-aligned box [lower, upper] in R^n.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  Box() = default;
  Box(std::vector<double> lo, std::vector<double> hi) : lower(std::move(lo)), upper(std::move(hi)) {
    validate();
  }
  static Box uniform(std::size_t n, double lo, double hi) {
    return Box(std::vector<double>(n, lo), std::vector<double>(n, hi));
  }

  std::size_t size() const noexcept { return lower.size(); }

  void validate() const {
    if (lower.size() != upper.size()) throw InvalidInput("box bounds differ in dimension");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(lower[i] <= upper[i])) throw InvalidInput("box lower bound exceeds upper bound");
    }
  }

  bool contains(const std::vector<double>& x, double slack = 0.0) const {
    if (x.size() != size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
    }
    return true;
  }

  std::vector<double> project(std::vector<double> x) const {
    for (std::size_t i = 0; i < x.size() && i < size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    return x;
  }

  std::vector<double> center() const {
    std::vector<double> c(size());
    for (std::size_t i = 0; i < size(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
    return c;
  }

  bool operator==(const Box&) const = default;
};

struct DescentOptions {
  double tol = 1e-8;
  std::size_t max_sweeps = 50;
};

/// Coordinate descent with a golden-section line search per coordinate.
/// A coordinate move is kept only if it strictly lowers f, so the result is
/// never worse than the (projected) start.
template <class F>
std::vector<double> coordinate_descent(F&& f, const Box& box, std::vector<double> x,
                                       const DescentOptions& options = {}) {
  x = box.project(std::move(x));
  double fx = f(x);
  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double largest_move = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double lo = box.lower[i];
      const double hi = box.upper[i];
      if (!(lo < hi)) continue;
      std::vector<double> trial = x;
      auto along = [&](double t) {
        trial[i] = t;
        return f(trial);
      };
      const double t = golden_section(along, lo, hi, options.tol);
      trial[i] = t;
      const double ft = f(trial);
      if (ft < fx) {
        largest_move = std::max(largest_move, std::abs(t - x[i]));
        x[i] = t;
        fx = ft;
      }
    }
    if (largest_move <= options.tol) break;
  }
  return x;
}

}  // namespace mei::game
