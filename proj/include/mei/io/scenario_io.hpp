#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mei/core/scenario.hpp"
#include "mei/ems/timescale.hpp"
#include "mei/io/number_format.hpp"

namespace mei::io {

namespace detail {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string kind;
  std::string id;
  std::size_t line = 0;
  std::vector<Entry> entries;

  std::string label() const { return kind + " " + id; }
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

inline std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = value.find(',', start);
    out.emplace_back(trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<Section> tokenize(std::string_view doc) {
  std::vector<Section> sections;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= doc.size()) {
    const std::size_t end = doc.find('\n', pos);
    std::string_view line = doc.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? doc.size() + 1 : end + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      const std::string_view inner = trim(line.substr(1, line.size() - 2));
      const std::size_t space = inner.find_first_of(" \t");
      if (space == std::string_view::npos) throw ParseError("section header needs a name and an id", line_no);
      const std::string_view kind = inner.substr(0, space);
      const std::string_view id = trim(inner.substr(space));
      if (!valid_name(id)) throw ParseError("invalid id '" + std::string(id) + "'", line_no);
      sections.push_back({std::string(kind), std::string(id), line_no, {}});
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    if (sections.empty()) throw ParseError("entry outside any section", line_no);
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ParseError("empty key", line_no, sections.back().label());
    for (const auto& e : sections.back().entries) {
      if (e.key == key) throw ParseError("duplicate key '" + key + "'", line_no, sections.back().label());
    }
    sections.back().entries.push_back({key, std::string(trim(line.substr(eq + 1))), line_no});
  }
  return sections;
}

/// Typed access to one section; every key must be consumed.
class Reader {
 public:
  explicit Reader(const Section& s) : s_(s), used_(s.entries.size(), false) {}

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, s_.line, s_.label()); }
  [[noreturn]] void fail(const std::string& message, const Entry& e) const {
    throw ParseError(message, e.line, s_.label());
  }

  const Entry* find(const std::string& key) {
    for (std::size_t i = 0; i < s_.entries.size(); ++i) {
      if (s_.entries[i].key == key) {
        used_[i] = true;
        return &s_.entries[i];
      }
    }
    return nullptr;
  }

  const Entry& require(const std::string& key) {
    const Entry* e = find(key);
    if (!e) fail("missing key '" + key + "'");
    return *e;
  }

  std::string text(const std::string& key) {
    const Entry& e = require(key);
    if (!valid_name(e.value)) fail("invalid name '" + e.value + "'", e);
    return e.value;
  }

  double to_number(const Entry& e, std::string_view token) const {
    double v = 0.0;
    if (!parse_number(token, v)) fail("invalid number '" + std::string(token) + "'", e);
    return v;
  }

  double number(const std::string& key) {
    const Entry& e = require(key);
    return to_number(e, e.value);
  }

  double number_or(const std::string& key, double fallback) {
    const Entry* e = find(key);
    return e ? to_number(*e, e->value) : fallback;
  }

  std::size_t count(const std::string& key) {
    const Entry& e = require(key);
    const double v = to_number(e, e.value);
    if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) fail("expected a count", e);
    return static_cast<std::size_t>(v);
  }

  std::vector<double> numbers(const std::string& key, bool required = true) {
    const Entry* e = required ? &require(key) : find(key);
    std::vector<double> out;
    if (!e) return out;
    for (const auto& token : split_list(e->value)) out.push_back(to_number(*e, token));
    return out;
  }

  bool boolean(const std::string& key, bool fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail("expected true or false", *e);
  }

  Carrier carrier_value(const Entry& e, std::string_view text) const {
    const auto c = parse_carrier(text);
    if (!c) fail("unknown carrier '" + std::string(text) + "'", e);
    return *c;
  }

  Carrier carrier(const std::string& key) {
    const Entry& e = require(key);
    return carrier_value(e, e.value);
  }

  /// Entries named prefix.suffix, marked as consumed.
  std::vector<std::pair<std::string, const Entry*>> prefixed(const std::string& prefix) {
    std::vector<std::pair<std::string, const Entry*>> out;
    for (std::size_t i = 0; i < s_.entries.size(); ++i) {
      const auto& k = s_.entries[i].key;
      if (k.size() > prefix.size() + 1 && k.compare(0, prefix.size(), prefix) == 0 && k[prefix.size()] == '.') {
        used_[i] = true;
        out.emplace_back(k.substr(prefix.size() + 1), &s_.entries[i]);
      }
    }
    return out;
  }

  const std::vector<Entry>& entries() const { return s_.entries; }
  void consume_all() { used_.assign(used_.size(), true); }

  void finish() const {
    for (std::size_t i = 0; i < s_.entries.size(); ++i) {
      if (!used_[i]) fail("unknown key '" + s_.entries[i].key + "'", s_.entries[i]);
    }
  }

  const Section& section() const { return s_; }

 private:
  const Section& s_;
  std::vector<bool> used_;
};

template <class F>
void checked(const Section& s, F&& f) {
  try {
    f();
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ParseError(e.what(), s.line, s.label());
  }
}

inline devices::SolarKind solar_kind(const std::string& k) {
  if (k == "pv") return devices::SolarKind::pv;
  if (k == "chimney") return devices::SolarKind::chimney;
  if (k == "collector") return devices::SolarKind::collector;
  return devices::SolarKind::full_spectrum;
}

inline DeviceSpec parse_device(Reader& r, const std::string& kind) {
  if (kind == "pv" || kind == "chimney" || kind == "collector" || kind == "full_spectrum") {
    SolarDevice d;
    d.spec.kind = solar_kind(kind);
    d.spec.rated_capacity = kind == "full_spectrum" ? r.number_or("rated", 0.0) : r.number("rated");
    d.spec.efficiency = r.number("efficiency");
    d.spec.area = r.number("area");
    if (kind == "full_spectrum") {
      d.spec.thermal_efficiency = r.number("thermal_efficiency");
      d.spec.pv_fraction = r.number_or("pv_fraction", devices::kVisibleFraction);
      d.spec.thermal_fraction = r.number_or("thermal_fraction", devices::kInfraredFraction);
    }
    d.irradiance = r.text("irradiance");
    d.spec.validate();
    return d;
  }
  if (kind == "st_caes") {
    StCaesDevice d;
    auto& p = d.params;
    p.air_capacity = r.number("air_capacity");
    p.thermal_capacity = r.number("thermal_capacity");
    p.eta_charge = r.number_or("eta_charge", p.eta_charge);
    p.eta_heat = r.number_or("eta_heat", p.eta_heat);
    p.loss = r.number_or("loss", p.loss);
    p.eta_turbine = r.number_or("eta_turbine", p.eta_turbine);
    p.heat_boost = r.number_or("heat_boost", p.heat_boost);
    p.cooling = r.number_or("cooling", p.cooling);
    p.preheat_ratio = r.number_or("preheat_ratio", p.preheat_ratio);
    p.charge_rating = r.number("charge_rating");
    p.discharge_rating = r.number("discharge_rating");
    d.air_initial = r.number_or("air_initial", 0.0);
    d.thermal_initial = r.number_or("thermal_initial", 0.0);
    d.initial_state().validate();
    return d;
  }
  if (kind == "plant") {
    devices::DualRolePlantSpec d;
    const Entry& mode = r.require("mode");
    if (mode.value == "load") {
      d.mode = devices::PlantMode::load;
    } else if (mode.value == "generator") {
      d.mode = devices::PlantMode::generator;
    } else {
      r.fail("plant mode must be load or generator", mode);
    }
    d.demand = r.number_or("demand", 0.0);
    d.elec_output = r.number_or("elec_output", 0.0);
    d.heat_output = r.number_or("heat_output", 0.0);
    d.salt_setpoint = r.number_or("salt_setpoint", devices::kSaltSetpoint);
    d.salt_tolerance = r.number_or("salt_tolerance", devices::kSaltTolerance);
    d.validate();
    return d;
  }
  if (kind == "load") {
    LoadSpec d;
    d.carrier = r.carrier("carrier");
    d.profile = r.text("profile");
    d.scale = r.number_or("scale", 1.0);
    if (!(d.scale >= 0.0)) throw InvalidInput("load scale must be >= 0");
    return d;
  }
  if (kind == "bipv") {
    BipvSpec d;
    d.profile = r.text("profile");
    d.scale = r.number_or("scale", 1.0);
    return d;
  }
  if (kind == "chp") {
    ChpSpec d;
    d.fuel_capacity = r.number("fuel_capacity");
    d.eta_elec = r.number_or("eta_elec", d.eta_elec);
    d.eta_heat = r.number_or("eta_heat", d.eta_heat);
    d.validate();
    return d;
  }
  r.fail("unknown device kind '" + kind + "'", r.require("kind"));
}

}  // namespace detail

/// Parses and validates a scenario document. Errors carry the line and
/// section they refer to.
inline Scenario parse_scenario(std::string_view doc) {
  using detail::Reader;
  using detail::Section;
  const std::vector<Section> sections = detail::tokenize(doc);

  Scenario s;
  s.name = "scenario";
  std::map<std::string, const Section*> unit_line, node_line, profile_line;
  std::set<std::string> seen_once;
  std::map<std::string, std::size_t> dyn_seen;

  auto claim = [&](std::map<std::string, const Section*>& ids, const Section& sec) {
    if (!ids.emplace(sec.id, &sec).second) throw ParseError("duplicate id '" + sec.id + "'", sec.line, sec.label());
  };
  auto once = [&](const Section& sec) {
    if (!seen_once.insert(sec.kind).second) throw ParseError("duplicate section '" + sec.kind + "'", sec.line, sec.label());
  };

  for (const Section& sec : sections) {
    Reader r(sec);
    const std::string& k = sec.kind;
    detail::checked(sec, [&] {
      if (k == "scenario") {
        once(sec);
        s.name = sec.id;
        s.time_step = r.number_or("time_step", 1.0);
        if (!(s.time_step > 0.0)) r.fail("time step must be positive");
        if (const auto* m = r.find("mode")) {
          if (m->value == "autonomous") {
            s.mode = OperationMode::autonomous;
          } else if (m->value == "grid_connected") {
            s.mode = OperationMode::grid_connected;
          } else {
            r.fail("mode must be autonomous or grid_connected", *m);
          }
        }
        s.self_use = r.boolean("self_use", false);
      } else if (k == "node") {
        claim(node_line, sec);
        Node n{sec.id, {}};
        const auto& e = r.require("carriers");
        std::set<Carrier> set;
        for (const auto& token : detail::split_list(e.value)) {
          if (!set.insert(r.carrier_value(e, token)).second) r.fail("duplicate carrier '" + token + "'", e);
        }
        if (set.empty()) r.fail("node serves no carrier", e);
        for (Carrier c : kAllCarriers) {
          if (set.count(c)) n.carriers.push_back(c);
        }
        s.topology.nodes.push_back(n);
      } else if (k == "link") {
        claim(unit_line, sec);
        Link l{sec.id, r.text("from"), r.text("to"), r.carrier("carrier"), r.number("capacity")};
        if (!(l.capacity > 0.0)) r.fail("link capacity must be positive");
        s.topology.links.push_back(l);
      } else if (k == "hub") {
        claim(unit_line, sec);
        Hub h{sec.id, r.text("node"), {}, r.number("capacity")};
        if (!(h.capacity >= 0.0)) r.fail("hub capacity must be >= 0");
        for (const auto& e : r.entries()) {
          const std::size_t dot = e.key.find('.');
          if (dot == std::string::npos) continue;
          const Carrier out = r.carrier_value(e, e.key.substr(0, dot));
          const Carrier in = r.carrier_value(e, e.key.substr(dot + 1));
          const double v = r.to_number(e, e.value);
          if (!(v >= 0.0 && v <= 1.0)) r.fail("coupling entry outside [0, 1]", e);
          h.coupling.set(out, in, v);
          if (h.coupling.column_sum(in) > 1.0 + 1e-12) r.fail("hub column exceeds unity", e);
        }
        for (Carrier c : kAllCarriers) r.prefixed(std::string(to_string(c)));
        s.topology.hubs.push_back(h);
      } else if (k == "utility") {
        claim(unit_line, sec);
        UtilityConnection u{sec.id, r.text("node"), r.carrier("carrier"), r.number("bound")};
        if (!(u.bound >= 0.0)) r.fail("utility bound must be >= 0");
        s.utilities.push_back(u);
      } else if (k == "profile") {
        claim(profile_line, sec);
        s.profiles[sec.id] = r.numbers("values");
      } else if (k == "price") {
        const auto c = parse_carrier(sec.id);
        if (!c) r.fail("unknown carrier '" + sec.id + "'");
        if (s.prices.count(*c)) r.fail("duplicate id '" + sec.id + "'");
        s.prices[*c] = r.numbers("values");
      } else if (k == "device") {
        claim(unit_line, sec);
        const detail::Entry& kind = r.require("kind");
        Device d{sec.id, r.text("node"), detail::parse_device(r, kind.value)};
        s.devices.push_back(d);
        s.topology.devices.push_back({d.node, d.id});
      } else if (k == "ems") {
        once(sec);
        EmsConfig e;
        e.slow_step = r.number("slow");
        e.medium_step = r.number("medium");
        e.fast_step = r.number("fast");
        e.tariffs = r.numbers("tariffs", false);
        ems::LayerTimescales{e.slow_step, e.medium_step, e.fast_step}.validate();
        for (double t : e.tariffs) {
          if (!(t >= 0.0)) r.fail("tariffs must be >= 0");
        }
        s.ems = e;
      } else if (k == "component") {
        claim(unit_line, sec);
        CatalogComponent c;
        c.id = sec.id;
        c.capital_cost = r.number("capital");
        c.operating_cost = r.number_or("operating", 0.0);
        c.emission = r.number("emission");
        for (const auto& [name, e] : r.prefixed("capability")) c.capability[r.carrier_value(*e, name)] = r.to_number(*e, e->value);
        if (!(c.capital_cost >= 0.0 && c.operating_cost >= 0.0 && c.emission >= 0.0)) {
          r.fail("component costs and emission must be >= 0");
        }
        s.catalog.push_back(c);
      } else if (k == "dynamics") {
        if (dyn_seen.count(sec.id)) r.fail("duplicate id '" + sec.id + "'");
        dyn_seen[sec.id] = sec.line;
        DynamicsSpec d;
        d.id = sec.id;
        d.states = r.count("states");
        d.controls = r.count("controls");
        d.disturbances = r.count("disturbances");
        d.outputs = r.count("outputs");
        d.A = r.numbers("A");
        d.B1 = r.numbers("B1");
        d.B2 = r.numbers("B2");
        d.C = r.numbers("C");
        d.D = r.numbers("D");
        d.validate();
        s.dynamics.push_back(d);
      } else {
        throw ParseError("unknown section '" + k + "'", sec.line);
      }
      r.finish();
    });
  }

  // Cross references, reported at the referencing section.
  auto node_of = [&](const Section& sec, const std::string& id) -> const Node& {
    const Node* n = s.topology.find_node(id);
    if (!n) throw ParseError("unknown node '" + id + "'", sec.line, sec.label());
    return *n;
  };
  auto serves = [&](const Section& sec, const Node& n, Carrier c) {
    if (!n.serves(c)) {
      throw ParseError("node '" + n.id + "' does not serve " + std::string(to_string(c)), sec.line, sec.label());
    }
  };
  for (const auto& l : s.topology.links) {
    const Section& sec = *unit_line.at(l.id);
    serves(sec, node_of(sec, l.from), l.carrier);
    serves(sec, node_of(sec, l.to), l.carrier);
  }
  for (const auto& h : s.topology.hubs) {
    const Section& sec = *unit_line.at(h.id);
    const Node& n = node_of(sec, h.node);
    for (Carrier in : kAllCarriers) {
      for (Carrier out : kAllCarriers) {
        if (h.coupling(out, in) > 0.0) {
          serves(sec, n, in);
          serves(sec, n, out);
        }
      }
    }
  }
  for (const auto& u : s.utilities) {
    const Section& sec = *unit_line.at(u.id);
    serves(sec, node_of(sec, u.node), u.carrier);
  }
  std::size_t horizon = 0;
  bool have_horizon = false;
  for (const Section& sec : sections) {
    if (sec.kind != "profile" && sec.kind != "price") continue;
    const std::size_t n = sec.kind == "profile" ? s.profiles.at(sec.id).size() : s.prices.at(*parse_carrier(sec.id)).size();
    if (have_horizon && n != horizon) throw ParseError("inconsistent horizon", sec.line, sec.label());
    horizon = n;
    have_horizon = true;
  }
  for (const auto& d : s.devices) {
    const Section& sec = *unit_line.at(d.id);
    const Node& n = node_of(sec, d.node);
    for (Carrier c : device_carriers(d.spec)) serves(sec, n, c);
    std::string profile;
    if (const auto* solar = std::get_if<SolarDevice>(&d.spec)) profile = solar->irradiance;
    if (const auto* load = std::get_if<LoadSpec>(&d.spec)) profile = load->profile;
    if (const auto* bipv = std::get_if<BipvSpec>(&d.spec)) profile = bipv->profile;
    if (!profile.empty() && !s.profiles.count(profile)) {
      throw ParseError("unknown profile '" + profile + "'", sec.line, sec.label());
    }
  }
  try {
    s.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(e.what(), sections.empty() ? 1 : sections.front().line);
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace detail {

inline std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_exact(v[i]);
  }
  return out;
}

}  // namespace detail

/// Writes a document that parses back to an equal scenario.
inline std::string write_scenario(const Scenario& s) {
  using detail::join;
  std::ostringstream o;
  auto num = [](double v) { return format_exact(v); };
  o << "[scenario " << s.name << "]\n";
  o << "time_step = " << num(s.time_step) << "\n";
  o << "mode = " << to_string(s.mode) << "\n";
  o << "self_use = " << (s.self_use ? "true" : "false") << "\n";
  for (const auto& n : s.topology.nodes) {
    o << "\n[node " << n.id << "]\ncarriers = ";
    for (std::size_t i = 0; i < n.carriers.size(); ++i) o << (i ? ", " : "") << to_string(n.carriers[i]);
    o << "\n";
  }
  for (const auto& l : s.topology.links) {
    o << "\n[link " << l.id << "]\nfrom = " << l.from << "\nto = " << l.to << "\ncarrier = " << to_string(l.carrier)
      << "\ncapacity = " << num(l.capacity) << "\n";
  }
  for (const auto& h : s.topology.hubs) {
    o << "\n[hub " << h.id << "]\nnode = " << h.node << "\ncapacity = " << num(h.capacity) << "\n";
    for (Carrier out : kAllCarriers) {
      for (Carrier in : kAllCarriers) {
        if (h.coupling(out, in) != 0.0) o << to_string(out) << "." << to_string(in) << " = " << num(h.coupling(out, in)) << "\n";
      }
    }
  }
  for (const auto& u : s.utilities) {
    o << "\n[utility " << u.id << "]\nnode = " << u.node << "\ncarrier = " << to_string(u.carrier)
      << "\nbound = " << num(u.bound) << "\n";
  }
  for (const auto& [id, values] : s.profiles) o << "\n[profile " << id << "]\nvalues = " << join(values) << "\n";
  for (const auto& [c, values] : s.prices) o << "\n[price " << to_string(c) << "]\nvalues = " << join(values) << "\n";
  for (const auto& d : s.devices) {
    o << "\n[device " << d.id << "]\n";
    std::visit(
        [&](const auto& spec) {
          using T = std::decay_t<decltype(spec)>;
          if constexpr (std::is_same_v<T, SolarDevice>) {
            o << "kind = " << devices::to_string(spec.spec.kind) << "\nnode = " << d.node;
            o << "\nrated = " << num(spec.spec.rated_capacity) << "\nefficiency = " << num(spec.spec.efficiency)
              << "\narea = " << num(spec.spec.area) << "\n";
            if (spec.spec.kind == devices::SolarKind::full_spectrum) {
              o << "thermal_efficiency = " << num(spec.spec.thermal_efficiency)
                << "\npv_fraction = " << num(spec.spec.pv_fraction)
                << "\nthermal_fraction = " << num(spec.spec.thermal_fraction) << "\n";
            }
            o << "irradiance = " << spec.irradiance << "\n";
          } else if constexpr (std::is_same_v<T, StCaesDevice>) {
            const auto& p = spec.params;
            o << "kind = st_caes\nnode = " << d.node << "\nair_capacity = " << num(p.air_capacity)
              << "\nthermal_capacity = " << num(p.thermal_capacity) << "\neta_charge = " << num(p.eta_charge)
              << "\neta_heat = " << num(p.eta_heat) << "\nloss = " << num(p.loss)
              << "\neta_turbine = " << num(p.eta_turbine) << "\nheat_boost = " << num(p.heat_boost)
              << "\ncooling = " << num(p.cooling) << "\npreheat_ratio = " << num(p.preheat_ratio)
              << "\ncharge_rating = " << num(p.charge_rating) << "\ndischarge_rating = " << num(p.discharge_rating)
              << "\nair_initial = " << num(spec.air_initial) << "\nthermal_initial = " << num(spec.thermal_initial)
              << "\n";
          } else if constexpr (std::is_same_v<T, devices::DualRolePlantSpec>) {
            o << "kind = plant\nnode = " << d.node << "\nmode = " << devices::to_string(spec.mode)
              << "\ndemand = " << num(spec.demand) << "\nelec_output = " << num(spec.elec_output)
              << "\nheat_output = " << num(spec.heat_output) << "\nsalt_setpoint = " << num(spec.salt_setpoint)
              << "\nsalt_tolerance = " << num(spec.salt_tolerance) << "\n";
          } else if constexpr (std::is_same_v<T, LoadSpec>) {
            o << "kind = load\nnode = " << d.node << "\ncarrier = " << to_string(spec.carrier)
              << "\nprofile = " << spec.profile << "\nscale = " << num(spec.scale) << "\n";
          } else if constexpr (std::is_same_v<T, BipvSpec>) {
            o << "kind = bipv\nnode = " << d.node << "\nprofile = " << spec.profile << "\nscale = " << num(spec.scale)
              << "\n";
          } else if constexpr (std::is_same_v<T, ChpSpec>) {
            o << "kind = chp\nnode = " << d.node << "\nfuel_capacity = " << num(spec.fuel_capacity)
              << "\neta_elec = " << num(spec.eta_elec) << "\neta_heat = " << num(spec.eta_heat) << "\n";
          }
        },
        d.spec);
  }
  if (s.ems) {
    o << "\n[ems main]\nslow = " << num(s.ems->slow_step) << "\nmedium = " << num(s.ems->medium_step)
      << "\nfast = " << num(s.ems->fast_step) << "\n";
    if (!s.ems->tariffs.empty()) o << "tariffs = " << join(s.ems->tariffs) << "\n";
  }
  for (const auto& c : s.catalog) {
    o << "\n[component " << c.id << "]\ncapital = " << num(c.capital_cost) << "\noperating = " << num(c.operating_cost)
      << "\nemission = " << num(c.emission) << "\n";
    for (Carrier k : kAllCarriers) {
      if (c.capability[k] != 0.0) o << "capability." << to_string(k) << " = " << num(c.capability[k]) << "\n";
    }
  }
  for (const auto& d : s.dynamics) {
    o << "\n[dynamics " << d.id << "]\nstates = " << d.states << "\ncontrols = " << d.controls
      << "\ndisturbances = " << d.disturbances << "\noutputs = " << d.outputs << "\nA = " << join(d.A)
      << "\nB1 = " << join(d.B1) << "\nB2 = " << join(d.B2) << "\nC = " << join(d.C) << "\nD = " << join(d.D) << "\n";
  }
  return o.str();
}

}  // namespace mei::io
