#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mei/core/principles.hpp"
#include "mei/ems/exchange.hpp"
#include "mei/ems/iopf.hpp"
#include "mei/ems/mode.hpp"
#include "mei/ems/stackelberg_dispatch.hpp"
#include "mei/ems/timescale.hpp"
#include "mei/io/number_format.hpp"

namespace mei::io {

inline constexpr double kEquilibriumTolerance = 1e-7;  // currency

struct RunFlags {
  bool islanded = false;
  bool stackelberg = false;
};

struct ResidualRow {
  std::size_t step = 0;
  std::string node;
  Carrier carrier = Carrier::electricity;
  double value = 0.0;
};

struct RunReport {
  Scenario scenario;
  OperationMode mode = OperationMode::grid_connected;
  bool stackelberg = false;
  double tariff = 0.0;
  ems::DispatchSetpoints setpoints;
  ems::ExchangeSchedule schedule;
  std::vector<ResidualRow> residuals;
  PrincipleReport principles;

  double max_residual() const {
    double worst = 0.0;
    for (const auto& r : residuals) worst = std::max(worst, std::abs(r.value));
    return worst;
  }
};

/// Mode decision, exchange equilibrium, dispatch and storage replay.
inline RunReport run_dispatch(const Scenario& s, std::size_t steps, const RunFlags& flags) {
  ems::check_steps(s, steps);
  if (s.ems) {
    ems::timescale_schedule({s.ems->slow_step, s.ems->medium_step, s.ems->fast_step},
                            static_cast<double>(steps) * s.time_step);
  }
  RunReport r;
  r.scenario = s;
  r.stackelberg = flags.stackelberg;
  r.principles = check_design_principles(s);

  const ems::ModeDecision mode = ems::decide_mode(s, flags.islanded);
  r.mode = mode.mode;
  r.schedule = ems::exchange_equilibrium({ems::scenario_cost_model(s, mode.bounds, steps)}, mode.mode,
                                         kEquilibriumTolerance);
  if (flags.stackelberg) {
    ems::ScenarioStackelberg st = ems::iopf_stackelberg(s, r.schedule, steps);
    r.setpoints = std::move(st.setpoints);
    r.tariff = st.tariff;
  } else {
    r.setpoints = ems::iopf_cooperative(s, r.schedule, steps);
  }
  for (std::size_t t = 0; t < steps; ++t) {
    const auto res = balance_residual(s.topology, r.setpoints.state_at(s, t));
    for (const auto& n : s.topology.nodes) {
      for (Carrier c : n.carriers) r.residuals.push_back({t, n.id, c, res.at({n.id, c})});
    }
  }
  return r;
}

namespace detail {

inline std::string fmt(double v) { return format_number(v); }

inline double time_of(const RunReport& r, std::size_t t) {
  return static_cast<double>(t) * r.setpoints.time_step;
}

inline PortVector hub_net(const Hub& hub, const PortVector& in) {
  PortVector clamped;
  for (Carrier c : kAllCarriers) clamped[c] = std::max(0.0, in[c]);
  return hub_output(hub.coupling, clamped) - in;
}

inline bool is_demand(const ems::UnitSeries& u) { return u.kind == "load" || u.kind == "plant_load"; }

inline std::string unit_kind(const RunReport& r, const ems::UnitSeries& u) {
  if (u.kind == "plant") {
    const Device* d = r.scenario.find_device(u.id);
    if (d && std::get<devices::DualRolePlantSpec>(d->spec).mode == devices::PlantMode::load) return "plant_load";
  }
  return u.kind;
}

}  // namespace detail

inline std::string dispatch_csv(const RunReport& r) {
  std::ostringstream o;
  o << "step,time_h,kind,unit,node,electricity_kw,heat_kw,cooling_kw,gas_kw\n";
  const auto& sp = r.setpoints;
  auto row = [&](std::size_t t, const std::string& kind, const std::string& unit, const std::string& node,
                 const PortVector& v) {
    o << t << "," << detail::fmt(detail::time_of(r, t)) << "," << kind << "," << unit << "," << node;
    for (Carrier c : kAllCarriers) o << "," << detail::fmt(v[c]);
    o << "\n";
  };
  for (std::size_t t = 0; t < sp.steps; ++t) {
    for (const auto& u : sp.devices) row(t, detail::unit_kind(r, u), u.id, u.node, u.injection[t]);
    for (std::size_t h = 0; h < sp.hub_inputs.size(); ++h) {
      const Hub& hub = r.scenario.topology.hubs[h];
      row(t, "hub", hub.id, hub.node, detail::hub_net(hub, sp.hub_inputs[h][t]));
    }
    for (std::size_t l = 0; l < sp.link_flows.size(); ++l) {
      const Link& link = r.scenario.topology.links[l];
      row(t, "link", link.id, link.from, PortVector::of(link.carrier, sp.link_flows[l][t]));
    }
  }
  return o.str();
}

inline std::string exchange_csv(const RunReport& r) {
  std::ostringstream o;
  o << "step,time_h,connection,node,carrier,flow_kw\n";
  const auto& sp = r.setpoints;
  for (std::size_t t = 0; t < sp.steps; ++t) {
    for (std::size_t u = 0; u < sp.exchange.size(); ++u) {
      const UtilityConnection& c = r.scenario.utilities[u];
      o << t << "," << detail::fmt(detail::time_of(r, t)) << "," << c.id << "," << c.node << "," << to_string(c.carrier)
        << "," << detail::fmt(sp.exchange[u][t]) << "\n";
    }
  }
  return o.str();
}

inline std::string storage_csv(const RunReport& r) {
  std::ostringstream o;
  o << "step,time_h,device,charge_elec_kw,charge_heat_kw,electricity_kw,heat_kw,cooling_kw,air_kwh,thermal_kwh\n";
  const auto& sp = r.setpoints;
  for (std::size_t t = 0; t < sp.steps; ++t) {
    for (const auto& s : sp.storage) {
      o << t << "," << detail::fmt(detail::time_of(r, t)) << "," << s.device << "," << detail::fmt(s.charge_elec[t]) << ","
        << detail::fmt(s.charge_heat[t]) << "," << detail::fmt(s.delivered[t][Carrier::electricity]) << ","
        << detail::fmt(s.delivered[t][Carrier::heat]) << "," << detail::fmt(s.delivered[t][Carrier::cooling]) << ","
        << detail::fmt(s.air[t]) << "," << detail::fmt(s.thermal[t]) << "\n";
    }
  }
  return o.str();
}

inline std::string residuals_csv(const RunReport& r) {
  std::ostringstream o;
  o << "step,time_h,node,carrier,residual_kw\n";
  for (const auto& row : r.residuals) {
    o << row.step << "," << detail::fmt(detail::time_of(r, row.step)) << "," << row.node << ","
      << to_string(row.carrier) << "," << detail::fmt(row.value) << "\n";
  }
  return o.str();
}

/// Energy totals over the run, kWh.
struct EnergyTotals {
  PortVector demand;
  PortVector served;
  PortVector imported;
  PortVector exported;
  std::map<std::string, PortVector> generation;  // by source kind
};

inline EnergyTotals energy_totals(const RunReport& r) {
  EnergyTotals e;
  const auto& sp = r.setpoints;
  const double dt = sp.time_step;
  for (std::size_t t = 0; t < sp.steps; ++t) {
    for (const auto& u : sp.devices) {
      const std::string kind = detail::unit_kind(r, u);
      const PortVector v = u.injection[t] * dt;
      if (detail::is_demand(u) || kind == "plant_load") {
        e.demand -= v;
      } else {
        e.served += v;
      }
      if (kind == "pv" || kind == "bipv" || kind == "chimney" || kind == "full_spectrum" || kind == "collector" ||
          kind == "plant" || kind == "chp") {
        e.generation[kind] += v;
      }
    }
    for (std::size_t h = 0; h < sp.hub_inputs.size(); ++h) {
      e.served += detail::hub_net(r.scenario.topology.hubs[h], sp.hub_inputs[h][t]) * dt;
    }
    for (std::size_t u = 0; u < sp.exchange.size(); ++u) {
      const Carrier c = r.scenario.utilities[u].carrier;
      const double f = sp.exchange[u][t] * dt;
      e.served[c] += f;
      if (f > 0.0) e.imported[c] += f;
      if (f < 0.0) e.exported[c] -= f;
    }
  }
  return e;
}

inline std::string mwh_line(const std::string& label, double kwh) {
  return label + ": " + format_fixed2(kwh / 1000.0) + " MWh (" + format_number(kwh) + " kWh)\n";
}

inline std::string cumulative_line(const std::string& label, double kwh) {
  return "cumulative " + label + ": " + format_fixed2(kwh / 1000.0) + " MWh\n";
}

inline std::string summary_text(const RunReport& r) {
  std::ostringstream o;
  const auto& sp = r.setpoints;
  o << "scenario: " << r.scenario.name << "\n";
  o << "mode: " << to_string(r.mode) << "\n";
  o << "steps: " << sp.steps << "\n";
  o << "time step: " << format_number(sp.time_step) << " h\n";
  if (r.stackelberg) {
    o << "dispatch: stackelberg, heat tariff " << format_number(r.tariff) << "\n";
  } else {
    o << "dispatch: cooperative\n";
  }
  o << "operating cost: " << format_number(sp.operating_cost()) << "\n";
  o << "fuel cost: " << format_number(sp.fuel_cost) << "\n";
  o << "exchange cost: " << format_number(sp.exchange_cost) << "\n";
  o << "exchange equilibrium: " << (r.schedule.converged ? "converged" : "not converged") << ", residual "
    << format_number(r.schedule.residual) << ", iterations " << r.schedule.iterations << "\n";
  o << "max balance residual: " << format_number(r.max_residual()) << " kW\n";
  static const char* names[5] = {"clean energy", "energy storage", "conversion", "self-use", "energy management"};
  for (std::size_t i = 0; i < 5; ++i) {
    o << "principle " << names[i] << ": " << (r.principles.satisfied[i] ? "pass" : "fail");
    if (!r.principles.messages[i].empty()) o << " (" << r.principles.messages[i] << ")";
    o << "\n";
  }
  const EnergyTotals e = energy_totals(r);
  for (Carrier c : kAllCarriers) {
    const std::string name(to_string(c));
    o << mwh_line("total demand " + name, e.demand[c]);
    o << mwh_line("total served " + name, e.served[c]);
    o << mwh_line("total import " + name, e.imported[c]);
    o << mwh_line("total export " + name, e.exported[c]);
  }
  auto gen = [&](const std::string& kind, Carrier c) {
    auto it = e.generation.find(kind);
    return it == e.generation.end() ? 0.0 : it->second[c];
  };
  o << cumulative_line("PV generation", gen("pv", Carrier::electricity));
  o << cumulative_line("BIPV generation", gen("bipv", Carrier::electricity));
  o << cumulative_line("chimney generation", gen("chimney", Carrier::electricity));
  o << cumulative_line("full-spectrum electricity", gen("full_spectrum", Carrier::electricity));
  o << cumulative_line("full-spectrum heat", gen("full_spectrum", Carrier::heat));
  o << cumulative_line("collector heat", gen("collector", Carrier::heat));
  o << cumulative_line("CHP electricity", gen("chp", Carrier::electricity));
  o << cumulative_line("plant electricity", gen("plant", Carrier::electricity));
  return o.str();
}

/// Long-format series for plotting: "# series: ..." comment, header, then one
/// row per (step, series).
inline std::string plotdata_csv(const RunReport& r) {
  const auto& sp = r.setpoints;
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  auto add = [&](std::string name) {
    names.push_back(std::move(name));
    values.emplace_back(sp.steps, 0.0);
    return values.size() - 1;
  };
  for (const auto& u : sp.devices) {
    const Device* d = r.scenario.find_device(u.id);
    for (Carrier c : d ? device_carriers(d->spec) : std::vector<Carrier>{}) {
      const std::size_t k = add(u.id + "_" + std::string(to_string(c)));
      for (std::size_t t = 0; t < sp.steps; ++t) values[k][t] = u.injection[t][c];
    }
  }
  for (std::size_t h = 0; h < sp.hub_inputs.size(); ++h) {
    const Hub& hub = r.scenario.topology.hubs[h];
    for (Carrier c : kAllCarriers) {
      bool used = hub.coupling.uses_input(c);
      for (Carrier in : kAllCarriers) used = used || hub.coupling(c, in) > 0.0;
      if (!used) continue;
      const std::size_t k = add(hub.id + "_" + std::string(to_string(c)));
      for (std::size_t t = 0; t < sp.steps; ++t) values[k][t] = detail::hub_net(hub, sp.hub_inputs[h][t])[c];
    }
  }
  for (std::size_t l = 0; l < sp.link_flows.size(); ++l) {
    const std::size_t k = add(r.scenario.topology.links[l].id);
    values[k] = sp.link_flows[l];
  }
  for (std::size_t u = 0; u < sp.exchange.size(); ++u) {
    const std::size_t k = add(r.scenario.utilities[u].id);
    values[k] = sp.exchange[u];
  }
  for (const auto& s : sp.storage) {
    values[add(s.device + "_air")] = s.air;
    values[add(s.device + "_thermal")] = s.thermal;
  }

  std::ostringstream o;
  o << "# series: ";
  for (std::size_t i = 0; i < names.size(); ++i) o << (i ? ";" : "") << names[i];
  o << "\nstep,time_h,series,value\n";
  for (std::size_t t = 0; t < sp.steps; ++t) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      o << t << "," << detail::fmt(detail::time_of(r, t)) << "," << names[i] << "," << detail::fmt(values[i][t]) << "\n";
    }
  }
  return o.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw IoError("cannot write '" + path.string() + "'");
}

/// Writes dispatch.csv, exchange.csv, storage.csv, residuals.csv and
/// summary.txt into the directory, creating it when missing.
inline void emit_report(const RunReport& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
  write_file(dir / "dispatch.csv", dispatch_csv(r));
  write_file(dir / "exchange.csv", exchange_csv(r));
  write_file(dir / "storage.csv", storage_csv(r));
  write_file(dir / "residuals.csv", residuals_csv(r));
  write_file(dir / "summary.txt", summary_text(r));
}

inline void emit_plotdata(const RunReport& r, const std::filesystem::path& dir) {
  write_file(dir / "plotdata.csv", plotdata_csv(r));
}

}  // namespace mei::io
