// One simulated day of the campus reference scenario, grid-connected.
#include <iostream>

#include "mei/mei.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : "scenarios/qinghai.scn";
  try {
    const mei::Scenario s = mei::io::load_scenario(path);
    const mei::io::RunReport r = mei::io::run_dispatch(s, s.horizon(), {});
    std::cout << mei::io::summary_text(r);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
