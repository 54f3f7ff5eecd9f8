#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "mei/core/error.hpp"

namespace mei {

enum class Carrier : std::size_t { electricity = 0, heat = 1, cooling = 2, gas = 3 };

inline constexpr std::size_t kCarrierCount = 4;

inline constexpr std::array<Carrier, kCarrierCount> kAllCarriers = {
    Carrier::electricity, Carrier::heat, Carrier::cooling, Carrier::gas};

constexpr std::size_t index(Carrier c) noexcept { return static_cast<std::size_t>(c); }

constexpr std::string_view to_string(Carrier c) noexcept {
  switch (c) {
    case Carrier::electricity: return "electricity";
    case Carrier::heat: return "heat";
    case Carrier::cooling: return "cooling";
    case Carrier::gas: return "gas";
  }
  return "?";
}

inline std::optional<Carrier> parse_carrier(std::string_view text) noexcept {
  for (Carrier c : kAllCarriers) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

/// Signed per-carrier power in kW; positive means injection into the network.
/// Carriers that were never set read as 0 kW.
class PortVector {
public:
  constexpr PortVector() = default;

  static PortVector of(Carrier c, double kw) {
    PortVector v;
    v[c] = kw;
    return v;
  }

  constexpr double& operator[](Carrier c) noexcept { return values_[index(c)]; }
  constexpr double operator[](Carrier c) const noexcept { return values_[index(c)]; }

  double total() const noexcept {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum;
  }

  bool is_finite() const noexcept {
    for (double v : values_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  bool is_zero() const noexcept {
    for (double v : values_) {
      if (v != 0.0) return false;
    }
    return true;
  }

  PortVector& operator+=(const PortVector& o) noexcept {
    for (std::size_t i = 0; i < kCarrierCount; ++i) values_[i] += o.values_[i];
    return *this;
  }
  PortVector& operator-=(const PortVector& o) noexcept {
    for (std::size_t i = 0; i < kCarrierCount; ++i) values_[i] -= o.values_[i];
    return *this;
  }
  PortVector& operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
  }

  friend PortVector operator+(PortVector a, const PortVector& b) noexcept { return a += b; }
  friend PortVector operator-(PortVector a, const PortVector& b) noexcept { return a -= b; }
  friend PortVector operator*(PortVector a, double s) noexcept { return a *= s; }
  friend PortVector operator*(double s, PortVector a) noexcept { return a *= s; }
  friend PortVector operator-(PortVector a) noexcept { return a *= -1.0; }

  bool operator==(const PortVector&) const = default;

private:
  std::array<double, kCarrierCount> values_{};
};

}  // namespace mei
