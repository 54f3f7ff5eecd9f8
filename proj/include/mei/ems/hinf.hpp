#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "mei/core/error.hpp"
#include "mei/core/scenario.hpp"

namespace mei::ems {

/// Linear device model  x' = A x + B1 w + B2 u,  z = C x + D u.
struct DeviceDynamics {
  Eigen::MatrixXd A, B1, B2, C, D;

  Eigen::Index states() const { return A.rows(); }

  void validate() const {
    const Eigen::Index n = A.rows();
    if (n == 0 || A.cols() != n) throw InvalidInput("A must be square and non-empty");
    if (B1.rows() != n || B2.rows() != n || C.cols() != n) throw InvalidInput("dynamics dimension mismatch");
    if (D.rows() != C.rows() || D.cols() != B2.cols()) throw InvalidInput("dynamics dimension mismatch");
    if (!A.allFinite() || !B1.allFinite() || !B2.allFinite() || !C.allFinite() || !D.allFinite()) {
      throw InvalidInput("dynamics must be finite");
    }
    const Eigen::MatrixXd r = D.transpose() * D;
    if (r.size() == 0 || r.llt().info() != Eigen::Success) throw InvalidInput("D^T D must be positive definite");
    const double scale = 1.0 + C.cwiseAbs().maxCoeff() * D.cwiseAbs().maxCoeff();
    if ((C.transpose() * D).cwiseAbs().maxCoeff() > 1e-12 * scale) throw InvalidInput("C^T D must vanish");
  }
};

/// Builds the Eigen model from a parsed row-major block.
inline DeviceDynamics device_dynamics(const DynamicsSpec& s) {
  s.validate();
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  auto map = [](const std::vector<double>& v, std::size_t rows, std::size_t cols) -> Eigen::MatrixXd {
    return Eigen::Map<const RowMajor>(v.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  };
  DeviceDynamics d{map(s.A, s.states, s.states), map(s.B1, s.states, s.disturbances),
                   map(s.B2, s.states, s.controls), map(s.C, s.outputs, s.states), map(s.D, s.outputs, s.controls)};
  d.validate();
  return d;
}

struct AttenuationLevel {
  double gamma = 1.0;

  explicit AttenuationLevel(double g) : gamma(g) {
    if (!(g > 0.0) || !std::isfinite(g)) throw InvalidInput("attenuation level must be positive");
  }
};

/// u = -K x, with worst-case disturbance w = L x.
struct ControlLaw {
  Eigen::MatrixXd K;
  Eigen::MatrixXd P;
  Eigen::MatrixXd L;
  double gamma = 0.0;
};

namespace detail {

inline Eigen::MatrixXd riccati_s(const DeviceDynamics& d, double gamma) {
  const Eigen::MatrixXd r = d.D.transpose() * d.D;
  return d.B2 * r.llt().solve(d.B2.transpose()) - d.B1 * d.B1.transpose() / (gamma * gamma);
}

/// Solves Ac^T X + X Ac + Q = 0 through the Kronecker form.
inline Eigen::MatrixXd lyapunov(const Eigen::MatrixXd& ac, const Eigen::MatrixXd& q) {
  const Eigen::Index n = ac.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd kron(n * n, n * n);
  const Eigen::MatrixXd at = ac.transpose();
  // vec(At X + X Ac) = (I (x) At + Ac^T (x) I) vec(X), column-major vec.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      kron.block(i * n, j * n, n, n) = id(i, j) * at + at(i, j) * id;
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(q.data(), n * n);
  const Eigen::VectorXd x = kron.fullPivLu().solve(rhs);
  Eigen::MatrixXd out = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (out + out.transpose());
}

inline double max_real_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::EigenSolver<Eigen::MatrixXd>(m, false).eigenvalues().real().maxCoeff();
}

[[noreturn]] inline void infeasible() { throw Infeasible("attenuation level infeasible"); }

}  // namespace detail

/// Riccati residual A^T P + P A + C^T C - P S P.
inline Eigen::MatrixXd riccati_residual(const DeviceDynamics& d, const Eigen::MatrixXd& p, double gamma) {
  const Eigen::MatrixXd s = detail::riccati_s(d, gamma);
  return d.A.transpose() * p + p * d.A + d.C.transpose() * d.C - p * s * p;
}

/// Stabilizing solution of the game Riccati equation via the matrix sign
/// function of the Hamiltonian, polished by Newton steps.
inline ControlLaw hinf_synthesize(const DeviceDynamics& d, AttenuationLevel level) {
  d.validate();
  const double gamma = level.gamma;
  const Eigen::Index n = d.states();
  const Eigen::MatrixXd s = detail::riccati_s(d, gamma);
  const Eigen::MatrixXd q = d.C.transpose() * d.C;

  Eigen::MatrixXd h(2 * n, 2 * n);
  h << d.A, -s, -q, -d.A.transpose();

  Eigen::MatrixXd z = h;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(z);
    const double det = lu.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-300) detail::infeasible();
    const Eigen::MatrixXd inv = lu.inverse();
    if (!inv.allFinite()) detail::infeasible();
    const double c = std::pow(std::abs(det), -1.0 / static_cast<double>(2 * n));
    const Eigen::MatrixXd next = 0.5 * (c * z + inv / c);
    const double change = (next - z).lpNorm<1>();
    z = next;
    if (change <= 1e-13 * std::max(1.0, z.lpNorm<1>())) {
      converged = true;
      break;
    }
  }
  if (!converged || !z.allFinite()) detail::infeasible();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  if ((z * z - id).cwiseAbs().maxCoeff() > 1e-6) detail::infeasible();

  Eigen::MatrixXd lhs(2 * n, n);
  Eigen::MatrixXd rhs(2 * n, n);
  lhs << z.block(0, n, n, n), z.block(n, n, n, n) + Eigen::MatrixXd::Identity(n, n);
  rhs << -(z.block(0, 0, n, n) + Eigen::MatrixXd::Identity(n, n)), -z.block(n, 0, n, n);
  Eigen::MatrixXd p = lhs.colPivHouseholderQr().solve(rhs);
  if (!p.allFinite()) detail::infeasible();
  p = (0.5 * (p + p.transpose())).eval();

  for (int it = 0; it < 30; ++it) {
    const double res = riccati_residual(d, p, gamma).cwiseAbs().maxCoeff();
    if (res <= 1e-13 * std::max(1.0, p.cwiseAbs().maxCoeff())) break;
    const Eigen::MatrixXd ac = d.A - s * p;
    if (detail::max_real_eigenvalue(ac) >= 0.0) break;
    const Eigen::MatrixXd next = detail::lyapunov(ac, q + p * s * p);
    if (!next.allFinite()) break;
    p = next;
  }

  if (riccati_residual(d, p, gamma).cwiseAbs().maxCoeff() > 1e-8) detail::infeasible();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p);
  if (eig.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, p.cwiseAbs().maxCoeff())) detail::infeasible();
  if (detail::max_real_eigenvalue(d.A - s * p) >= -1e-10) detail::infeasible();

  ControlLaw law;
  const Eigen::MatrixXd r = d.D.transpose() * d.D;
  law.K = r.llt().solve(d.B2.transpose() * p);
  law.P = p;
  law.L = d.B1.transpose() * p / (gamma * gamma);
  law.gamma = gamma;
  if (detail::max_real_eigenvalue(d.A - d.B2 * law.K) >= -1e-10) detail::infeasible();
  return law;
}

struct TrajectorySample {
  Eigen::VectorXd x, u, w, z;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<TrajectorySample> samples;
  Eigen::VectorXd final_state;
};

/// Forward-Euler integration of x' = (A - B2 K) x + B1 w over [0, T].
/// Sample k holds the state at t = k dt and the input applied on that step.
inline Trajectory simulate_closed_loop(const DeviceDynamics& d, const ControlLaw& law,
                                       const std::vector<Eigen::VectorXd>& w, double dt, double horizon,
                                       const Eigen::VectorXd& x0 = {}) {
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  const double ratio = horizon / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidInput("T must be a multiple of dt");
  }
  if (w.size() < steps) throw InvalidInput("disturbance series shorter than the horizon");
  Trajectory tr;
  tr.dt = dt;
  Eigen::VectorXd x = x0.size() ? x0 : Eigen::VectorXd::Zero(d.states());
  tr.samples.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const Eigen::VectorXd u = -law.K * x;
    const Eigen::VectorXd z = d.C * x + d.D * u;
    tr.samples.push_back({x, u, w[k], z});
    x = x + dt * (d.A * x + d.B1 * w[k] + d.B2 * u);
  }
  tr.final_state = x;
  return tr;
}

struct DissipationResult {
  bool passed = true;
  double worst_prefix = 0.0;  // max over T of J_T
  double threshold = 0.0;
};

/// Checks J_T = sum (|z|^2 - gamma^2 |w|^2) dt <= 1e-6 (1 + sum |w|^2 dt)
/// for every prefix T, the disturbance energy taken over the same prefix.
inline DissipationResult dissipation_check(const Trajectory& tr, double gamma) {
  DissipationResult r;
  double j = 0.0;
  double energy = 0.0;
  double worst_margin = -std::numeric_limits<double>::infinity();
  for (const auto& s : tr.samples) {
    j += (s.z.squaredNorm() - gamma * gamma * s.w.squaredNorm()) * tr.dt;
    energy += s.w.squaredNorm() * tr.dt;
    const double bound = 1e-6 * (1.0 + energy);
    if (j - bound > worst_margin) {
      worst_margin = j - bound;
      r.threshold = bound;
    }
    r.worst_prefix = std::max(r.worst_prefix, j);
    if (j > bound) r.passed = false;
  }
  return r;
}

}  // namespace mei::ems
