// State feedback for a single integrator against a worst-case disturbance.
#include <cmath>
#include <iostream>

#include "mei/ems/hinf.hpp"

int main() {
  using namespace mei::ems;
  DeviceDynamics d;
  d.A = Eigen::MatrixXd::Zero(1, 1);
  d.B1 = Eigen::MatrixXd::Ones(1, 1);
  d.B2 = Eigen::MatrixXd::Ones(1, 1);
  d.C = (Eigen::MatrixXd(2, 1) << 1, 0).finished();
  d.D = (Eigen::MatrixXd(2, 1) << 0, 1).finished();
  for (double gamma : {1.5, std::sqrt(2.0), 10.0, 1e6}) {
    const ControlLaw law = hinf_synthesize(d, AttenuationLevel(gamma));
    std::cout << "gamma " << gamma << ": K = " << law.K(0, 0) << "\n";
  }
}
