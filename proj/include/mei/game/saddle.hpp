#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "mei/core/error.hpp"

namespace mei::game {

/// Zero-sum matrix game: the row player maximizes x^T A y, the column player
/// minimizes it.
struct ZeroSumMatrixGame {
  Eigen::MatrixXd payoff;

  void validate() const {
    if (payoff.size() == 0) throw InvalidInput("empty payoff matrix");
    if (!payoff.allFinite()) throw InvalidInput("payoff matrix has non-finite entries");
  }
};

struct SaddleResult {
  Eigen::VectorXd row;  // mixed strategy
  Eigen::VectorXd col;
  double value = 0.0;
  double upper = 0.0;           // max_i (A ybar)_i
  double lower = 0.0;           // min_j (xbar^T A)_j
  double exploitability = 0.0;  // upper - lower
};

/// Simultaneous fictitious play. Each round both players reply to the
/// opponent's empirical mixture; ties go to the lowest index.
inline SaddleResult saddle_solve(const ZeroSumMatrixGame& game, std::size_t iterations) {
  game.validate();
  if (iterations < 1) throw InvalidInput("iterations must be >= 1");
  const Eigen::MatrixXd& a = game.payoff;
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();

  Eigen::VectorXd row_counts = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd col_counts = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd row_payoff = Eigen::VectorXd::Zero(m);  // A * col_counts
  Eigen::VectorXd col_payoff = Eigen::VectorXd::Zero(n);  // A^T * row_counts

  for (std::size_t t = 0; t < iterations; ++t) {
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    row_payoff.maxCoeff(&i);
    col_payoff.minCoeff(&j);
    row_counts(i) += 1.0;
    col_counts(j) += 1.0;
    row_payoff += a.col(j);
    col_payoff += a.row(i).transpose();
  }

  SaddleResult r;
  const double count = static_cast<double>(iterations);
  r.row = row_counts / count;
  r.col = col_counts / count;
  r.upper = (a * r.col).maxCoeff();
  r.lower = (a.transpose() * r.row).minCoeff();
  r.value = 0.5 * (r.upper + r.lower);
  r.exploitability = r.upper - r.lower;
  return r;
}

}  // namespace mei::game
