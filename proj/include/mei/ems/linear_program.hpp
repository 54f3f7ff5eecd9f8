#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mei/core/error.hpp"

namespace mei::lp {

enum class Sense { equal, less_equal, greater_equal };

struct Term {
  std::size_t var;
  double coef;
};

struct Row {
  std::vector<Term> terms;
  Sense sense = Sense::equal;
  double rhs = 0.0;
  std::size_t tag = 0;  // caller data, e.g. a time step
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min c^T x  s.t.  rows,  lo <= x <= hi  (lo finite).
class LinearProgram {
 public:
  std::size_t add_variable(double lo, double hi, double cost) {
    if (!std::isfinite(lo)) throw InvalidInput("variable lower bound must be finite");
    if (!(hi >= lo)) throw InvalidInput("variable bounds are inverted");
    lo_.push_back(lo);
    hi_.push_back(hi);
    cost_.push_back(cost);
    return lo_.size() - 1;
  }

  std::size_t add_row(std::vector<Term> terms, Sense sense, double rhs, std::size_t tag = 0) {
    for (const auto& t : terms) {
      if (t.var >= lo_.size()) throw InvalidInput("row references an unknown variable");
    }
    rows_.push_back({std::move(terms), sense, rhs, tag});
    return rows_.size() - 1;
  }

  void set_cost(std::size_t var, double c) { cost_.at(var) = c; }
  void set_bounds(std::size_t var, double lo, double hi) {
    lo_.at(var) = lo;
    hi_.at(var) = hi;
  }

  std::size_t variables() const noexcept { return lo_.size(); }
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<double>& lower() const noexcept { return lo_; }
  const std::vector<double>& upper() const noexcept { return hi_; }
  const std::vector<double>& cost() const noexcept { return cost_; }
  const std::vector<Row>& row_list() const noexcept { return rows_; }

  double objective(const std::vector<double>& x) const {
    double v = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) v += cost_[j] * x[j];
    return v;
  }

  /// Largest bound or row violation of x.
  double max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      worst = std::max({worst, lo_[j] - x[j], x[j] - hi_[j]});
    }
    for (const auto& r : rows_) {
      double a = 0.0;
      for (const auto& t : r.terms) a += t.coef * x[t.var];
      const double d = a - r.rhs;
      if (r.sense == Sense::equal) worst = std::max(worst, std::abs(d));
      if (r.sense == Sense::less_equal) worst = std::max(worst, d);
      if (r.sense == Sense::greater_equal) worst = std::max(worst, -d);
    }
    return worst;
  }

 private:
  std::vector<double> lo_, hi_, cost_;
  std::vector<Row> rows_;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Solution {
  Status status = Status::optimal;
  std::vector<double> x;
  double objective = 0.0;
  std::optional<std::size_t> infeasible_row;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  double feasibility_tol = 1e-7;
  double drop_tol = 1e-13;
};

namespace detail {

/// Bounded-variable primal simplex on a dense tableau, two phases.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) {}

  Solution run() {
    build();
    Solution s;
    // Phase 1: drive artificials to zero.
    std::vector<double> phase1(ncols_, 0.0);
    for (std::size_t j = first_art_; j < ncols_; ++j) phase1[j] = 1.0;
    set_costs(phase1);
    Status st = iterate(s.pivots);
    if (st == Status::iteration_limit) {
      s.status = st;
      return s;
    }
    double infeas = 0.0;
    std::size_t worst_row = 0;
    double worst = -1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= first_art_) {
        infeas += beta_[i];
        if (beta_[i] > worst) {
          worst = beta_[i];
          worst_row = art_row_[basis_[i] - first_art_];
        }
      }
    }
    if (infeas > opt_.feasibility_tol * (1.0 + rhs_scale_)) {
      s.status = Status::infeasible;
      s.infeasible_row = worst_row;
      return s;
    }
    // Retire artificials: pivot basic ones out where possible, freeze the rest.
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < first_art_) continue;
      const double* row = &t_[i * ncols_];
      std::size_t best = ncols_;
      double mag = opt_.pivot_tol;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (std::abs(row[j]) > mag) {
          mag = std::abs(row[j]);
          best = j;
        }
      }
      if (best < ncols_) pivot(i, best, entering_value(best));
    }
    for (std::size_t j = first_art_; j < ncols_; ++j) range_[j] = 0.0;

    std::vector<double> phase2(ncols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = lp_.cost()[j];
    set_costs(phase2);
    st = iterate(s.pivots);
    if (st != Status::optimal) {
      s.status = st;
      return s;
    }
    s.x = extract();
    s.objective = lp_.objective(s.x);
    return s;
  }

 private:
  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::size_t m_ = 0, n_ = 0, ncols_ = 0, first_art_ = 0;
  std::vector<double> t_;      // m x ncols tableau, B^-1 A
  std::vector<double> a_;      // m x ncols original (sign-normalized) matrix
  std::vector<double> b_;      // shifted, sign-normalized rhs
  std::vector<double> beta_;   // basic values (shifted)
  std::vector<double> range_;  // upper bound of shifted variable
  std::vector<double> cost_;
  std::vector<double> d_;      // reduced costs
  std::vector<std::size_t> basis_;
  std::vector<char> at_upper_;
  std::vector<char> is_basic_;
  std::vector<std::size_t> art_row_;
  double rhs_scale_ = 0.0;

  double& t(std::size_t i, std::size_t j) { return t_[i * ncols_ + j]; }

  void build() {
    const auto& rows = lp_.row_list();
    m_ = rows.size();
    n_ = lp_.variables();
    std::size_t slacks = 0;
    for (const auto& r : rows) {
      if (r.sense != Sense::equal) ++slacks;
    }
    first_art_ = n_ + slacks;
    // Rows are sign-normalized so the shifted rhs is nonnegative. A row whose
    // slack then has coefficient +1 starts with the slack basic; all others
    // get an artificial.
    std::vector<double> rhs(m_);
    std::vector<double> sign(m_, 1.0);
    std::vector<std::size_t> slack_of(m_, static_cast<std::size_t>(-1));
    std::size_t next_slack = n_;
    for (std::size_t i = 0; i < m_; ++i) {
      double v = rows[i].rhs;
      for (const auto& term : rows[i].terms) v -= term.coef * lp_.lower()[term.var];
      rhs[i] = v;
      if (rows[i].sense != Sense::equal) slack_of[i] = next_slack++;
    }
    std::size_t arts = 0;
    std::vector<char> needs_art(m_, 1);
    for (std::size_t i = 0; i < m_; ++i) {
      if (rhs[i] < 0.0) sign[i] = -1.0;
      const double slack_coef = rows[i].sense == Sense::less_equal      ? 1.0
                                : rows[i].sense == Sense::greater_equal ? -1.0
                                                                        : 0.0;
      if (slack_coef * sign[i] > 0.0) needs_art[i] = 0;
      if (needs_art[i]) ++arts;
    }
    ncols_ = first_art_ + arts;
    t_.assign(m_ * ncols_, 0.0);
    b_.assign(m_, 0.0);
    range_.assign(ncols_, kInf);
    for (std::size_t j = 0; j < n_; ++j) range_[j] = lp_.upper()[j] - lp_.lower()[j];
    basis_.assign(m_, 0);
    is_basic_.assign(ncols_, 0);
    at_upper_.assign(ncols_, 0);
    art_row_.clear();
    std::size_t next_art = first_art_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (const auto& term : rows[i].terms) t(i, term.var) += sign[i] * term.coef;
      b_[i] = sign[i] * rhs[i];
      rhs_scale_ = std::max(rhs_scale_, std::abs(b_[i]));
      if (slack_of[i] != static_cast<std::size_t>(-1)) {
        const double slack_coef = rows[i].sense == Sense::less_equal ? 1.0 : -1.0;
        t(i, slack_of[i]) = sign[i] * slack_coef;
      }
      if (needs_art[i]) {
        t(i, next_art) = 1.0;
        basis_[i] = next_art;
        art_row_.push_back(i);
        ++next_art;
      } else {
        basis_[i] = slack_of[i];
      }
      is_basic_[basis_[i]] = 1;
    }
    a_ = t_;
    beta_ = b_;
  }

  void set_costs(const std::vector<double>& c) {
    cost_ = c;
    d_ = c;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[i * ncols_];
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (row[j] != 0.0) d_[j] -= cb * row[j];
      }
    }
    for (std::size_t i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
  }

  double entering_value(std::size_t j) const { return at_upper_[j] ? range_[j] : 0.0; }

  /// Makes column q basic in row r. `value` is q's new (shifted) value.
  void pivot(std::size_t r, std::size_t q, double value) {
    double* prow = &t_[r * ncols_];
    const double piv = prow[q];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] /= piv;
        nz.push_back(j);
      }
    }
    prow[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * ncols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j : nz) {
        double v = row[j] - f * prow[j];
        if (std::abs(v) < opt_.drop_tol) v = 0.0;
        row[j] = v;
      }
      row[q] = 0.0;
    }
    const double dq = d_[q];
    if (dq != 0.0) {
      for (std::size_t j : nz) d_[j] -= dq * prow[j];
      d_[q] = 0.0;
    }
    const std::size_t leaving = basis_[r];
    is_basic_[leaving] = 0;
    is_basic_[q] = 1;
    basis_[r] = q;
    beta_[r] = value;
    at_upper_[q] = 0;
  }

  Status iterate(std::size_t& pivots) {
    const std::size_t limit = 50 * (m_ + ncols_) + 1000;
    std::size_t degenerate_run = 0;
    for (std::size_t it = 0; it < limit; ++it) {
      const bool bland = degenerate_run > 50;
      // Entering column.
      std::size_t q = ncols_;
      double best = 0.0;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (is_basic_[j] || range_[j] <= 0.0) continue;
        const double dj = d_[j];
        double score = 0.0;
        if (!at_upper_[j] && dj < -opt_.optimality_tol) score = -dj;
        if (at_upper_[j] && dj > opt_.optimality_tol) score = dj;
        if (score <= 0.0) continue;
        if (bland) {
          q = j;
          break;
        }
        if (score > best) {
          best = score;
          q = j;
        }
      }
      if (q == ncols_) return Status::optimal;

      const double dir = at_upper_[q] ? -1.0 : 1.0;
      // Ratio test.
      double theta = range_[q];
      std::size_t r = m_;
      bool to_upper = false;
      double r_mag = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_[i * ncols_ + q];
        if (std::abs(a) <= opt_.pivot_tol) continue;
        const double delta = dir * a;  // basic value falls by delta per unit step
        const std::size_t bv = basis_[i];
        double ratio = 0.0;
        bool upper = false;
        if (delta > 0.0) {
          ratio = std::max(0.0, beta_[i]) / delta;
        } else {
          if (!std::isfinite(range_[bv])) continue;
          ratio = std::max(0.0, range_[bv] - beta_[i]) / -delta;
          upper = true;
        }
        bool take = false;
        if (r == m_) {
          take = ratio <= theta;
        } else if (ratio < theta - 1e-12) {
          take = true;
        } else if (ratio <= theta + 1e-12) {
          take = bland ? bv < basis_[r] : std::abs(a) > r_mag;
        }
        if (take) {
          theta = ratio;
          r = i;
          to_upper = upper;
          r_mag = std::abs(a);
        }
      }
      if (!std::isfinite(theta)) return Status::unbounded;
      degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;

      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_[i * ncols_ + q];
        if (a != 0.0) beta_[i] -= dir * theta * a;
      }
      if (r == m_) {
        at_upper_[q] = !at_upper_[q];  // bound flip
        continue;
      }
      const std::size_t leaving = basis_[r];
      const double value = at_upper_[q] ? range_[q] - theta : theta;
      pivot(r, q, value);
      at_upper_[leaving] = to_upper ? 1 : 0;
      ++pivots;
    }
    return Status::iteration_limit;
  }

  /// Recomputes basic values from the original data for accuracy.
  std::vector<double> extract() {
    Eigen::MatrixXd basis(m_, m_);
    Eigen::VectorXd rhs(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      double v = b_[i];
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (!is_basic_[j] && at_upper_[j]) v -= a_[i * ncols_ + j] * range_[j];
      }
      rhs(static_cast<Eigen::Index>(i)) = v;
      for (std::size_t k = 0; k < m_; ++k) {
        basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = a_[i * ncols_ + basis_[k]];
      }
    }
    Eigen::VectorXd xb = m_ > 0 ? Eigen::VectorXd(basis.partialPivLu().solve(rhs)) : Eigen::VectorXd();
    std::vector<double> shifted(ncols_, 0.0);
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (!is_basic_[j] && at_upper_[j]) shifted[j] = range_[j];
    }
    for (std::size_t k = 0; k < m_; ++k) {
      const double refined = xb(static_cast<Eigen::Index>(k));
      // Fall back to the tableau value if refinement went astray.
      shifted[basis_[k]] = std::isfinite(refined) && std::abs(refined - beta_[k]) < 1e-6 * (1.0 + std::abs(beta_[k]))
                               ? refined
                               : beta_[k];
    }
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      double v = lp_.lower()[j] + shifted[j];
      v = std::clamp(v, lp_.lower()[j], lp_.upper()[j]);
      x[j] = v;
    }
    return x;
  }
};

}  // namespace detail

inline Solution solve(const LinearProgram& lp, const SimplexOptions& options = {}) {
  detail::Simplex simplex(lp, options);
  return simplex.run();
}

}  // namespace mei::lp
