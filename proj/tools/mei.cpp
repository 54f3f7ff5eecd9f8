#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <random>
#include <string>

#include "mei/mei.hpp"

namespace {

using mei::io::format_number;

constexpr double kControlDt = 1e-3;      // s
constexpr double kControlHorizon = 10.0;  // s
constexpr double kDisturbanceHold = 0.1;  // s
constexpr unsigned kDisturbanceSeed = 1;

std::string matrix_text(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += "  [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += (j ? ", " : "") + format_number(m(i, j));
    out += "]\n";
  }
  return out;
}

void print_principles(const mei::PrincipleReport& p) {
  static const char* names[5] = {"clean energy", "energy storage", "conversion", "self-use", "energy management"};
  for (std::size_t i = 0; i < 5; ++i) {
    std::cout << "principle " << names[i] << ": " << (p.satisfied[i] ? "pass" : "fail") << " (" << p.messages[i]
              << ")\n";
  }
}

int cmd_validate(const std::string& file) {
  const mei::Scenario s = mei::io::load_scenario(file);
  std::cout << "scenario " << s.name << ": " << s.topology.nodes.size() << " nodes, " << s.devices.size()
            << " devices, " << s.topology.hubs.size() << " hubs, " << s.topology.links.size() << " links, horizon "
            << s.horizon() << " steps\n";
  print_principles(mei::check_design_principles(s));
  return 0;
}

int cmd_plan(const std::string& file) {
  const mei::Scenario s = mei::io::load_scenario(file);
  if (s.catalog.empty()) throw mei::InvalidInput("scenario has no component catalog");
  const mei::planner::PortfolioPlan plan = mei::planner::plan_hub_portfolio(s.catalog, s);
  std::cout << "peak demand:";
  for (mei::Carrier c : mei::kAllCarriers) std::cout << " " << mei::to_string(c) << " " << format_number(plan.peak_demand[c]);
  std::cout << " kW\n";
  std::cout << "pareto front (cost, emission, components):\n";
  for (std::size_t i = 0; i < plan.front.points.size(); ++i) {
    const auto& p = plan.front.points[i];
    std::cout << "  " << format_number(p.f1) << ", " << format_number(p.f2) << ",";
    for (std::size_t k = 0; k < s.catalog.size(); ++k) {
      if (plan.front_masks[i] >> k & 1U) std::cout << " " << s.catalog[k].id;
    }
    std::cout << "\n";
  }
  std::cout << "disagreement point: " << format_number(plan.disagreement.f1) << ", "
            << format_number(plan.disagreement.f2) << "\n";
  std::cout << "bargain: cost " << format_number(plan.bargain.f1) << ", emission " << format_number(plan.bargain.f2)
            << ", nash product " << format_number(plan.bargain.nash_product) << "\n";
  std::cout << "selected:";
  for (const auto& id : plan.selected) std::cout << " " << id;
  std::cout << "\n";
  return 0;
}

int cmd_dispatch(const std::string& file, double hours, bool islanded, bool stackelberg, const std::string& out) {
  const mei::Scenario s = mei::io::load_scenario(file);
  const double ratio = hours / s.time_step;
  const double steps = std::round(ratio);
  if (!(hours > 0.0) || std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    throw mei::InvalidInput("hours must be a positive multiple of the time step");
  }
  const mei::io::RunReport r = mei::io::run_dispatch(s, static_cast<std::size_t>(steps), {islanded, stackelberg});
  mei::io::emit_report(r, out);
  mei::io::emit_plotdata(r, out);
  std::cout << mei::io::summary_text(r);
  return 0;
}

int cmd_control(const std::string& file, double gamma) {
  const mei::Scenario s = mei::io::load_scenario(file);
  if (s.dynamics.empty()) throw mei::InvalidInput("scenario has no dynamics block");
  const mei::ems::AttenuationLevel level(gamma);
  bool all_passed = true;
  for (const auto& spec : s.dynamics) {
    const mei::ems::DeviceDynamics d = mei::ems::device_dynamics(spec);
    const mei::ems::ControlLaw law = mei::ems::hinf_synthesize(d, level);

    std::mt19937 rng(kDisturbanceSeed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const auto steps = static_cast<std::size_t>(std::llround(kControlHorizon / kControlDt));
    const auto hold = static_cast<std::size_t>(std::llround(kDisturbanceHold / kControlDt));
    std::vector<Eigen::VectorXd> w(steps);
    Eigen::VectorXd current(d.B1.cols());
    for (std::size_t k = 0; k < steps; ++k) {
      if (k % hold == 0) {
        for (Eigen::Index j = 0; j < current.size(); ++j) current(j) = dist(rng);
      }
      w[k] = current;
    }
    const auto tr = mei::ems::simulate_closed_loop(d, law, w, kControlDt, kControlHorizon);
    const auto check = mei::ems::dissipation_check(tr, gamma);
    all_passed = all_passed && check.passed;

    std::cout << "dynamics " << spec.id << " (gamma " << format_number(gamma) << ")\n";
    std::cout << "K =\n" << matrix_text(law.K) << "P =\n" << matrix_text(law.P);
    std::cout << "dissipation: " << (check.passed ? "pass" : "fail") << ", worst prefix "
              << format_number(check.worst_prefix) << "\n";
  }
  return all_passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Micro energy internet planning, dispatch and control"};
  app.require_subcommand(1);

  std::string file;
  std::string out;
  double hours = 0.0;
  double gamma = 0.0;
  bool islanded = false;
  bool stackelberg = false;

  auto* validate = app.add_subcommand("validate", "Parse a scenario and check the design principles");
  validate->add_option("file", file, "Scenario document")->required();

  auto* plan = app.add_subcommand("plan", "Pareto front and bargained hub portfolio");
  plan->add_option("file", file, "Scenario document")->required();

  auto* dispatch = app.add_subcommand("dispatch", "Run the energy management layers and write reports");
  dispatch->add_option("file", file, "Scenario document")->required();
  dispatch->add_option("--hours", hours, "Horizon in hours")->required();
  dispatch->add_flag("--islanded", islanded, "Force autonomous operation");
  dispatch->add_flag("--stackelberg", stackelberg, "Leader-follower dispatch");
  dispatch->add_option("--out", out, "Output directory")->required();

  auto* control = app.add_subcommand("control", "H-infinity synthesis for each dynamics block");
  control->add_option("file", file, "Scenario document")->required();
  control->add_option("--gamma", gamma, "Attenuation level")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*plan) return cmd_plan(file);
    if (*dispatch) return cmd_dispatch(file, hours, islanded, stackelberg, out);
    if (*control) return cmd_control(file, gamma);
  } catch (const mei::Infeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mei::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mei::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
