#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mei/io/number_format.hpp"
#include "mei/io/report.hpp"
#include "mei/io/scenario_io.hpp"
#include "oracles.hpp"

namespace mei::io {
namespace {

const std::string kQinghai = std::string(MEI_SOURCE_DIR) + "/scenarios/qinghai.scn";

using oracle::read_csv;

double num(const std::string& s) { return std::stod(s); }

std::string parse_error(const std::string& doc) {
  try {
    parse_scenario(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal =
    "[node bus]\n"
    "carriers = electricity\n"
    "\n"
    "[profile demand]\n"
    "values = 1, 2\n"
    "\n"
    "[device lamp]\n"
    "kind = load\n"
    "node = bus\n"
    "carrier = electricity\n"
    "profile = demand\n";

TEST(NumberFormat, FixedTwoDecimalsRoundsHalfUp) {
  EXPECT_EQ(format_fixed2(1.005), "1.01");
  EXPECT_EQ(format_fixed2(109910.0 / 1000.0), "109.91");
  EXPECT_EQ(format_fixed2(20880.0 / 1000.0), "20.88");
  EXPECT_EQ(format_fixed2(0.0), "0.00");
  EXPECT_EQ(format_fixed2(-0.001), "0.00");
  EXPECT_EQ(format_fixed2(9.995), "10.00");
  EXPECT_EQ(format_fixed2(-2.345), "-2.35");
}

TEST(NumberFormat, ShortestNineDigitForm) {
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1 + 0.2), "0.3");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(250.0), "250");
  EXPECT_EQ(format_number(1e-12), "1e-12");
  EXPECT_THROW(format_number(std::nan("")), InvalidInput);
}

TEST(NumberFormat, ExactFormRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 258.4, -1e-300, 6.02214076e23}) {
    double back = 0.0;
    ASSERT_TRUE(parse_number(format_exact(v), back));
    EXPECT_EQ(back, v);
  }
}

TEST(NumberFormat, StrictParse) {
  double v = 0.0;
  EXPECT_TRUE(parse_number("+2.5", v));
  EXPECT_EQ(v, 2.5);
  EXPECT_FALSE(parse_number("", v));
  EXPECT_FALSE(parse_number("1x", v));
  EXPECT_FALSE(parse_number("inf", v));
  EXPECT_FALSE(parse_number(" 1", v));
}

TEST(ScenarioParse, MinimalDocument) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.topology.nodes.size(), 1u);
  EXPECT_EQ(s.devices.size(), 1u);
  EXPECT_EQ(s.horizon(), 2u);
}

TEST(ScenarioParse, HubColumnAboveUnity) {
  const std::string doc = std::string(kMinimal) +
                          "\n[node plant]\ncarriers = electricity, heat, cooling\n"
                          "[hub mix]\nnode = plant\ncapacity = 10\n"
                          "heat.electricity = 0.7\n"
                          "cooling.electricity = 0.5\n";
  const std::string msg = parse_error(doc);
  // The offending entry is line 19 of the document.
  EXPECT_NE(msg.find("hub column exceeds unity at line 19"), std::string::npos) << msg;
  EXPECT_NE(msg.find("[hub mix]"), std::string::npos) << msg;
}

TEST(ScenarioParse, PositionedErrors) {
  EXPECT_NE(parse_error(std::string(kMinimal) + "[turbine t]\nx = 1\n").find("unknown section 'turbine' at line 12"),
            std::string::npos);
  EXPECT_NE(parse_error(std::string(kMinimal) + "colour = red\n").find("unknown key 'colour' at line 12"),
            std::string::npos);
  EXPECT_NE(parse_error(std::string(kMinimal) + "[node bus]\ncarriers = heat\n").find("duplicate id 'bus' at line 12"),
            std::string::npos);
  EXPECT_NE(parse_error("[node a]\ncarriers = electricity\ncarriers = heat\n").find("line 3"), std::string::npos);
  EXPECT_NE(parse_error("[node a]\ncarriers = steam\n").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error("[node a]\ncarriers electricity\n").find("line 2"), std::string::npos);
}

TEST(ScenarioParse, CrossReferencesNameTheSection) {
  std::string doc = kMinimal;
  doc.replace(doc.find("node = bus"), 10, "node = attic");
  const std::string msg = parse_error(doc);
  EXPECT_NE(msg.find("unknown node 'attic' at line 7 in section [device lamp]"), std::string::npos) << msg;

  const std::string ragged = std::string(kMinimal) + "[profile other]\nvalues = 1, 2, 3\n";
  EXPECT_NE(parse_error(ragged).find("inconsistent horizon at line 12"), std::string::npos);
}

TEST(ScenarioParse, WriteThenParseIsFixedPoint) {
  const Scenario s = load_scenario(kQinghai);
  const std::string text = write_scenario(s);
  const Scenario back = parse_scenario(text);
  EXPECT_TRUE(back == s);
  EXPECT_EQ(write_scenario(back), text);
}

TEST(ScenarioParse, FixedPointOnMinimal) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_TRUE(parse_scenario(write_scenario(s)) == s);
}

TEST(ScenarioParse, QinghaiInventory) {
  const Scenario s = load_scenario(kQinghai);
  std::size_t sources = 0, caes = 0;
  for (const auto& d : s.devices) {
    const std::string kind = ems::device_kind(d.spec);
    if (kind == "pv" || kind == "chimney" || kind == "full_spectrum" || kind == "collector" || kind == "bipv") {
      ++sources;
    }
    if (kind == "st_caes") ++caes;
  }
  std::set<Carrier> carriers;
  for (const auto& n : s.topology.nodes) carriers.insert(n.carriers.begin(), n.carriers.end());
  EXPECT_EQ(sources, 6u);
  EXPECT_EQ(caes, 1u);
  EXPECT_EQ(carriers.size(), 4u);
  EXPECT_TRUE(s.self_use);
  EXPECT_TRUE(s.ems.has_value());
  EXPECT_TRUE(check_design_principles(s).all());
}

TEST(ScenarioParse, MissingFileIsIoError) { EXPECT_THROW(load_scenario("/nonexistent/x.scn"), IoError); }

Scenario zero_demand() {
  Scenario s = parse_scenario(
      "[node bus]\ncarriers = electricity, heat\n"
      "[profile flat]\nvalues = " +
      [] {
        std::string v;
        for (int i = 0; i < 24; ++i) v += i ? ", 0" : "0";
        return v;
      }() +
      "\n[device lamp]\nkind = load\nnode = bus\ncarrier = electricity\nprofile = flat\n"
      "[hub boiler]\nnode = bus\ncapacity = 5\nheat.electricity = 0.9\n");
  return s;
}

TEST(Report, ZeroDemandIsAllZero) {
  const RunReport r = run_dispatch(zero_demand(), 24, {});
  const auto rows = read_csv(dispatch_csv(r));
  ASSERT_EQ(rows.size(), 1u + 24u * 2u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t c = 5; c < 9; ++c) EXPECT_EQ(rows[i][c], "0");
  }
  for (const auto& row : r.residuals) EXPECT_EQ(row.value, 0.0);
}

TEST(Report, EmptyReportHasHeadersOnly) {
  const RunReport r;
  EXPECT_EQ(dispatch_csv(r), "step,time_h,kind,unit,node,electricity_kw,heat_kw,cooling_kw,gas_kw\n");
  EXPECT_EQ(read_csv(exchange_csv(r)).size(), 1u);
  EXPECT_EQ(read_csv(storage_csv(r)).size(), 1u);
  EXPECT_EQ(read_csv(residuals_csv(r)).size(), 1u);
  EXPECT_EQ(read_csv(plotdata_csv(r)).size(), 1u);
  const std::string summary = summary_text(r);
  EXPECT_NE(summary.find("total demand electricity: 0.00 MWh"), std::string::npos);
  EXPECT_NE(summary.find("cumulative PV generation: 0.00 MWh"), std::string::npos);
}

TEST(Report, SummaryFormatsFieldFixture) {
  // 24 hourly PV values summing to 109910 kWh.
  RunReport r;
  r.setpoints.steps = 24;
  ems::UnitSeries pv{"pv_station", "pv", "campus", {}};
  for (int t = 0; t < 24; ++t) pv.injection.push_back(PortVector::of(Carrier::electricity, t < 23 ? 4580.0 : 4570.0));
  r.setpoints.devices.push_back(pv);
  ems::UnitSeries bipv{"library", "bipv", "campus", std::vector<PortVector>(24, PortVector::of(Carrier::electricity, 870.0))};
  r.setpoints.devices.push_back(bipv);
  const std::string summary = summary_text(r);
  EXPECT_NE(summary.find("cumulative PV generation: 109.91 MWh\n"), std::string::npos) << summary;
  EXPECT_NE(summary.find("cumulative BIPV generation: 20.88 MWh"), std::string::npos);
}

TEST(Report, IslandedQinghaiHasZeroExchange) {
  const RunReport r = run_dispatch(load_scenario(kQinghai), 24, {true, false});
  EXPECT_EQ(r.mode, OperationMode::autonomous);
  const auto rows = read_csv(exchange_csv(r));
  ASSERT_EQ(rows.size(), 1u + 24u * 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][5], "0");
  EXPECT_LE(r.max_residual(), 1e-9);
}

// Served energy re-aggregated from the CSV files, independent of the summary.
struct CsvTotals {
  std::map<std::string, double> demand, served;
};

CsvTotals csv_totals(const RunReport& r) {
  static const char* names[4] = {"electricity", "heat", "cooling", "gas"};
  CsvTotals t;
  const double dt = r.setpoints.time_step;
  for (const auto& row : read_csv(dispatch_csv(r))) {
    if (row[0] == "step" || row[2] == "link") continue;
    for (int c = 0; c < 4; ++c) {
      const double kwh = num(row[5 + c]) * dt;
      if (row[2] == "load" || row[2] == "plant_load") {
        t.demand[names[c]] -= kwh;
      } else {
        t.served[names[c]] += kwh;
      }
    }
  }
  for (const auto& row : read_csv(exchange_csv(r))) {
    if (row[0] == "step") continue;
    t.served[row[4]] += num(row[5]) * dt;
  }
  return t;
}

TEST(Report, GridConnectedQinghaiServesDemand) {
  const RunReport r = run_dispatch(load_scenario(kQinghai), 24, {});
  EXPECT_LE(r.max_residual(), 1e-9);
  const CsvTotals t = csv_totals(r);
  for (const auto& [carrier, demand] : t.demand) {
    EXPECT_NEAR(t.served.at(carrier) / 1000.0, demand / 1000.0, 1e-6) << carrier;
  }
  EXPECT_GT(t.demand.at("electricity"), 0.0);

  const EnergyTotals e = energy_totals(r);
  for (Carrier c : kAllCarriers) {
    const std::string name(to_string(c));
    EXPECT_NEAR(e.demand[c], t.demand.count(name) ? t.demand.at(name) : 0.0, 1e-6);
    EXPECT_NEAR(e.served[c], t.served.count(name) ? t.served.at(name) : 0.0, 1e-6);
  }
}

TEST(Report, PlotdataRoundTripReproducesTotals) {
  const RunReport r = run_dispatch(load_scenario(kQinghai), 24, {});
  std::string comment;
  const auto rows = read_csv(plotdata_csv(r), &comment);
  ASSERT_EQ(comment.rfind("# series: ", 0), 0u);
  std::vector<std::string> series;
  std::istringstream names(comment.substr(10));
  for (std::string n; std::getline(names, n, ';');) series.push_back(n);
  EXPECT_EQ(rows.size() - 1, 24u * series.size());

  std::map<std::string, double> sums;
  for (std::size_t i = 1; i < rows.size(); ++i) sums[rows[i][2]] += num(rows[i][3]) * r.setpoints.time_step;
  const EnergyTotals e = energy_totals(r);
  double pv = 0.0;
  for (const auto& d : r.scenario.devices) {
    if (ems::device_kind(d.spec) == "pv") pv += sums.at(d.id + "_electricity");
  }
  EXPECT_NEAR(pv, e.generation.at("pv")[Carrier::electricity], 1e-6);
  EXPECT_NEAR(sums.at("library_bipv_electricity"), e.generation.at("bipv")[Carrier::electricity], 1e-6);
  EXPECT_NEAR(sums.at("grid"), e.imported[Carrier::electricity] - e.exported[Carrier::electricity], 1e-6);
}

TEST(Report, PlotdataCardinality) {
  RunReport r;
  r.setpoints.steps = 2;
  r.setpoints.link_flows = {{1.5, -2.0}};
  r.scenario.topology.links.push_back({"feeder", "a", "b", Carrier::electricity, 5.0});
  const auto rows = read_csv(plotdata_csv(r));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "0", "feeder", "1.5"}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"1", "1", "feeder", "-2"}));
}

TEST(Report, RunsAreByteIdentical) {
  const Scenario s = load_scenario(kQinghai);
  const RunReport a = run_dispatch(s, 24, {false, true});
  const RunReport b = run_dispatch(s, 24, {false, true});
  EXPECT_EQ(dispatch_csv(a), dispatch_csv(b));
  EXPECT_EQ(storage_csv(a), storage_csv(b));
  EXPECT_EQ(summary_text(a), summary_text(b));
  EXPECT_EQ(plotdata_csv(a), plotdata_csv(b));
}

TEST(Report, EmitWritesFileSet) {
  const auto dir = std::filesystem::temp_directory_path() / "mei_io_test_emit";
  std::filesystem::remove_all(dir);
  const RunReport r = run_dispatch(zero_demand(), 24, {});
  emit_report(r, dir);
  emit_plotdata(r, dir);
  for (const char* f : {"dispatch.csv", "exchange.csv", "storage.csv", "residuals.csv", "summary.txt", "plotdata.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "dispatch.csv", std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), dispatch_csv(r));
  std::filesystem::remove_all(dir);
}

TEST(Report, UnwritableDirectoryNamesPath) {
  const auto blocker = std::filesystem::temp_directory_path() / "mei_io_test_blocker";
  std::ofstream(blocker) << "x";
  try {
    emit_report(RunReport{}, blocker / "out");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find((blocker / "out").string()), std::string::npos);
  }
  std::filesystem::remove(blocker);
}

TEST(Report, InfeasibleRunNamesStep) {
  Scenario s = zero_demand();
  s.profiles["flat"][3] = 5.0;
  try {
    run_dispatch(s, 24, {});
    FAIL() << "expected Infeasible";
  } catch (const Infeasible& e) {
    EXPECT_STREQ(e.what(), "infeasible dispatch at step 3");
  }
}

TEST(Report, MisalignedHorizonRejected) {
  Scenario s = load_scenario(kQinghai);
  EXPECT_THROW(run_dispatch(s, 23, {}), InvalidInput);
}

}  // namespace
}  // namespace mei::io
