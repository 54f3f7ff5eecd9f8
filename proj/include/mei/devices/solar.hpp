#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "mei/core/carrier.hpp"

namespace mei::devices {

enum class SolarKind { pv, chimney, full_spectrum, collector };

constexpr std::string_view to_string(SolarKind k) noexcept {
  switch (k) {
    case SolarKind::pv: return "pv";
    case SolarKind::chimney: return "chimney";
    case SolarKind::full_spectrum: return "full_spectrum";
    case SolarKind::collector: return "collector";
  }
  return "?";
}

/// Share of solar energy in the ultraviolet/visible band (photoelectric use)
/// and in the infrared band (thermal use).
inline constexpr double kVisibleFraction = 0.58;
inline constexpr double kInfraredFraction = 0.42;

struct SolarSourceSpec {
  SolarKind kind = SolarKind::pv;
  double rated_capacity = 0.0;  // kW
  double efficiency = 0.0;      // electric (or thermal, for collectors)
  double area = 0.0;            // m^2
  // full_spectrum only
  double thermal_efficiency = 0.0;
  double pv_fraction = kVisibleFraction;
  double thermal_fraction = kInfraredFraction;

  void validate() const {
    if (!(efficiency > 0.0 && efficiency <= 1.0)) throw InvalidInput("solar efficiency must lie in (0, 1]");
    if (!(area >= 0.0)) throw InvalidInput("collector area must be >= 0");
    if (!(rated_capacity >= 0.0)) throw InvalidInput("rated capacity must be >= 0");
    if (std::abs(pv_fraction + thermal_fraction - 1.0) > 1e-12) {
      throw InvalidInput("spectrum fractions must sum to 1");
    }
    if (kind == SolarKind::full_spectrum && !(thermal_efficiency > 0.0 && thermal_efficiency <= 1.0)) {
      throw InvalidInput("thermal efficiency must lie in (0, 1]");
    }
  }

  bool operator==(const SolarSourceSpec&) const = default;
};

struct SpectrumSplit {
  double elec = 0.0;  // kW
  double heat = 0.0;  // kW
};

/// Visible band to photovoltaics, infrared band to the thermoelectric path.
inline SpectrumSplit full_spectrum_output(double irradiance, const SolarSourceSpec& spec) {
  if (spec.kind != SolarKind::full_spectrum) {
    throw InvalidInput("spectrum split undefined for this source");
  }
  if (irradiance < 0.0) throw InvalidInput("irradiance must be >= 0");
  const double captured = irradiance * spec.area / 1000.0;
  return {spec.pv_fraction * captured * spec.efficiency,
          spec.thermal_fraction * captured * spec.thermal_efficiency};
}

/// Clipped linear conversion shared by PV, chimney and trough collectors.
inline double clipped_output(double irradiance, const SolarSourceSpec& spec) {
  const double p = std::max(0.0, irradiance) * spec.area * spec.efficiency / 1000.0;
  return std::min(spec.rated_capacity, p);
}

inline std::vector<double> pv_output(std::span<const double> irradiance, const SolarSourceSpec& spec) {
  if (spec.kind != SolarKind::pv) throw InvalidInput("pv_output requires a pv source");
  std::vector<double> out;
  out.reserve(irradiance.size());
  for (double s : irradiance) out.push_back(clipped_output(s, spec));
  return out;
}

/// Updraft tower: P = eta * S * A, clipped at the rating.
inline double chimney_output(double irradiance, const SolarSourceSpec& spec) {
  if (spec.kind != SolarKind::chimney) throw InvalidInput("chimney_output requires a chimney source");
  if (irradiance < 0.0) throw InvalidInput("irradiance must be >= 0");
  return clipped_output(irradiance, spec);
}

/// Parabolic trough heat, clipped at the rating.
inline double collector_output(double irradiance, const SolarSourceSpec& spec) {
  if (spec.kind != SolarKind::collector) throw InvalidInput("collector_output requires a collector source");
  return clipped_output(irradiance, spec);
}

/// Available output of any solar source at one irradiance sample.
inline PortVector solar_available(double irradiance, const SolarSourceSpec& spec) {
  switch (spec.kind) {
    case SolarKind::pv:
    case SolarKind::chimney: return PortVector::of(Carrier::electricity, clipped_output(irradiance, spec));
    case SolarKind::collector: return PortVector::of(Carrier::heat, clipped_output(irradiance, spec));
    case SolarKind::full_spectrum: {
      const SpectrumSplit s = full_spectrum_output(std::max(0.0, irradiance), spec);
      PortVector v;
      v[Carrier::electricity] = s.elec;
      v[Carrier::heat] = s.heat;
      return v;
    }
  }
  return {};
}

/// Synthetic hourly global horizontal irradiance (W/m^2) for a high-plateau
/// site at the given latitude: extraterrestrial radiation on the horizontal
/// through a constant clear-sky transmittance, with a deterministic
/// day-to-day cloudiness pattern. 8760 samples, hour 0 = Jan 1 00:00-01:00.
inline std::vector<double> reference_irradiance_year(double latitude_deg = 36.6,
                                                     double transmittance = 0.72) {
  constexpr double kSolarConstant = 1367.0;
  const double phi = latitude_deg * std::numbers::pi / 180.0;
  std::vector<double> g;
  g.reserve(8760);
  for (int day = 0; day < 365; ++day) {
    const double n = day + 1.0;
    const double decl = 23.45 * std::numbers::pi / 180.0 * std::sin(2.0 * std::numbers::pi * (284.0 + n) / 365.0);
    const double ecc = 1.0 + 0.033 * std::cos(2.0 * std::numbers::pi * n / 365.0);
    // Cloudiness cycles with a 7-day and an 11-day period.
    const double cloud = 0.80 + 0.12 * std::cos(2.0 * std::numbers::pi * n / 7.0) +
                         0.08 * std::sin(2.0 * std::numbers::pi * n / 11.0);
    for (int hour = 0; hour < 24; ++hour) {
      const double omega = (hour + 0.5 - 12.0) * 15.0 * std::numbers::pi / 180.0;
      const double cos_zenith = std::sin(phi) * std::sin(decl) + std::cos(phi) * std::cos(decl) * std::cos(omega);
      const double value = kSolarConstant * ecc * cos_zenith * transmittance * std::min(1.0, cloud);
      g.push_back(std::max(0.0, value));
    }
  }
  return g;
}

}  // namespace mei::devices
