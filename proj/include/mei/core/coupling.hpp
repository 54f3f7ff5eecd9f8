#pragma once

#include <array>

#include "mei/core/carrier.hpp"

namespace mei {

/// Linear energy-hub conversion: out[i] = sum_j c[i][j] * in[j].
///
/// Entries are efficiency fractions in [0, 1]. Each input column sums to at
/// most 1 so that a hub can never create energy.
class CouplingMatrix {
public:
  CouplingMatrix() = default;

  static CouplingMatrix identity() {
    CouplingMatrix m;
    for (Carrier c : kAllCarriers) m.set(c, c, 1.0);
    return m;
  }

  double operator()(Carrier out, Carrier in) const noexcept {
    return c_[index(out)][index(in)];
  }

  void set(Carrier out, Carrier in, double fraction) { c_[index(out)][index(in)] = fraction; }

  double column_sum(Carrier in) const noexcept {
    double sum = 0.0;
    for (Carrier out : kAllCarriers) sum += (*this)(out, in);
    return sum;
  }

  /// True if some output draws on this input carrier.
  bool uses_input(Carrier in) const noexcept { return column_sum(in) > 0.0; }

  /// Throws InvalidInput naming the first violated invariant.
  void validate() const {
    for (Carrier in : kAllCarriers) {
      for (Carrier out : kAllCarriers) {
        const double v = (*this)(out, in);
        if (!(v >= 0.0 && v <= 1.0)) {
          throw InvalidInput("coupling entry outside [0, 1]");
        }
      }
      if (column_sum(in) > 1.0 + 1e-12) throw InvalidInput("hub column exceeds unity");
    }
  }

  bool operator==(const CouplingMatrix&) const = default;

private:
  std::array<std::array<double, kCarrierCount>, kCarrierCount> c_{};
};

/// Output flows of a hub for nonnegative input flows.
inline PortVector hub_output(const CouplingMatrix& c, const PortVector& p_in) {
  for (Carrier in : kAllCarriers) {
    if (p_in[in] < 0.0) throw InvalidInput("hub input must be nonnegative");
  }
  PortVector out;
  for (Carrier o : kAllCarriers) {
    double sum = 0.0;
    for (Carrier in : kAllCarriers) sum += c(o, in) * p_in[in];
    out[o] = sum;
  }
  return out;
}

}  // namespace mei
