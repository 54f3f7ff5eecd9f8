#pragma once

#include <cmath>
#include <cstddef>

#include "mei/core/error.hpp"

namespace mei::game {

/// Golden ratio conjugate, (sqrt(5) - 1) / 2.
inline constexpr double kGoldenConjugate = 0.6180339887498948482;

struct GoldenSectionResult {
  double x = 0.0;
  std::size_t evaluations = 0;
};

/// Upper bound on function evaluations for a search over [a, b] to `tol`.
inline std::size_t golden_evaluation_bound(double a, double b, double tol) {
  const double ratio = (b - a) / tol;
  if (ratio <= 1.0) return 2;
  return static_cast<std::size_t>(std::ceil(std::log(ratio) / std::log(1.0 / kGoldenConjugate))) + 2;
}

/// Minimizes a unimodal f on [a, b]. The returned point is the midpoint of a
/// final bracket no wider than 2 * tol, so it lies within tol of the minimizer.
template <class F>
GoldenSectionResult golden_section_search(F&& f, double a, double b, double tol) {
  if (!(a < b)) throw InvalidInput("empty interval");
  if (!(tol > 0.0)) throw InvalidInput("invalid tolerance");

  double lo = a;
  double hi = b;
  if (hi - lo <= 2.0 * tol) return {0.5 * (lo + hi), 0};

  // Iterations needed for (b - a) * rho^k <= 2 tol.
  const auto iterations = static_cast<std::size_t>(
      std::ceil(std::log((b - a) / (2.0 * tol)) / std::log(1.0 / kGoldenConjugate)));

  double c = hi - kGoldenConjugate * (hi - lo);
  double d = lo + kGoldenConjugate * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  std::size_t evaluations = 2;

  for (std::size_t k = 0; k < iterations; ++k) {
    const bool last = k + 1 == iterations;
    if (fc < fd) {
      hi = d;
      if (last) break;
      d = c;
      fd = fc;
      c = hi - kGoldenConjugate * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      if (last) break;
      c = d;
      fc = fd;
      d = lo + kGoldenConjugate * (hi - lo);
      fd = f(d);
    }
    ++evaluations;
  }
  return {0.5 * (lo + hi), evaluations};
}

template <class F>
double golden_section(F&& f, double a, double b, double tol) {
  return golden_section_search(std::forward<F>(f), a, b, tol).x;
}

}  // namespace mei::game
