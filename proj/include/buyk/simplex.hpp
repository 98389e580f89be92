#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "buyk/core.hpp"

namespace buyk {

/// maximize objective . x  subject to  rows[i] . x <= rhs[i],  x >= 0.
struct LinearProgram {
  struct Row {
    std::vector<Rational> coeffs;
    Rational rhs;
  };

  std::size_t num_vars = 0;
  std::vector<Rational> objective;
  std::vector<Row> rows;

  explicit LinearProgram(std::size_t vars = 0) : num_vars(vars), objective(vars) {}

  Row& add_row(Rational rhs) {
    rows.push_back({std::vector<Rational>(num_vars), std::move(rhs)});
    return rows.back();
  }

  /// Adds x_var <= bound.
  void add_upper_bound(std::size_t var, Rational bound) { add_row(std::move(bound)).coeffs.at(var) = 1; }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  std::vector<Rational> x;
};

namespace detail {

/**
 * Dense exact tableau. Columns: original variables, one slack per row, and
 * an optional auxiliary column used by phase one. Pivoting follows Bland's
 * rule (lowest-index entering column, lowest-index basic variable among tied
 * ratios), which rules out cycling.
 */
class Tableau {
 public:
  Tableau(const LinearProgram& lp, bool with_aux) : m_(lp.rows.size()), n_(lp.num_vars) {
    aux_ = with_aux ? n_ + m_ : npos;
    cols_ = n_ + m_ + (with_aux ? 1 : 0);
    rows_.assign(m_, std::vector<Rational>(cols_ + 1));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      check_dim(n_, lp.rows[i].coeffs.size(), "constraint row");
      for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = lp.rows[i].coeffs[j];
      rows_[i][n_ + i] = 1;
      if (with_aux) rows_[i][aux_] = -1;
      rows_[i][cols_] = lp.rows[i].rhs;
      basis_[i] = n_ + i;
    }
    obj_.assign(cols_ + 1, Rational());
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void pivot(std::size_t r, std::size_t s) {
    const Rational inv = Rational(1) / rows_[r][s];
    for (auto& c : rows_[r]) c *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || rows_[i][s].is_zero()) continue;
      eliminate(rows_[i], rows_[r], s);
    }
    if (!obj_[s].is_zero()) eliminate(obj_, rows_[r], s);
    basis_[r] = s;
  }

  /// Runs Bland pivots on the current objective row. Returns false if unbounded.
  bool optimize(std::size_t& pivots, std::size_t banned = npos) {
    for (;;) {
      std::size_t s = npos;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j == banned) continue;
        if (obj_[j].sign() < 0) { s = j; break; }
      }
      if (s == npos) return true;
      std::size_t r = npos;
      Rational best_ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        if (rows_[i][s].sign() <= 0) continue;
        Rational ratio = rows_[i][cols_] / rows_[i][s];
        if (r == npos || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[r])) {
          r = i;
          best_ratio = std::move(ratio);
        }
      }
      if (r == npos) return false;
      pivot(r, s);
      ++pivots;
    }
  }

  /// Sets the objective row to maximize `c` (c indexed by column) and
  /// expresses it in terms of the current nonbasic variables.
  void set_objective(const std::vector<Rational>& c) {
    obj_.assign(cols_ + 1, Rational());
    for (std::size_t j = 0; j < c.size(); ++j) obj_[j] = -c[j];
    for (std::size_t i = 0; i < m_; ++i)
      if (!obj_[basis_[i]].is_zero()) eliminate(obj_, rows_[i], basis_[i]);
  }

  Rational objective_value() const { return obj_[cols_]; }
  std::size_t rows() const { return m_; }
  std::size_t aux() const { return aux_; }
  std::size_t basic(std::size_t i) const { return basis_[i]; }
  const Rational& rhs(std::size_t i) const { return rows_[i][cols_]; }
  const Rational& at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  std::size_t cols() const { return cols_; }

  std::vector<Rational> primal() const {
    std::vector<Rational> x(n_);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = rows_[i][cols_];
    return x;
  }

 private:
  static void eliminate(std::vector<Rational>& target, const std::vector<Rational>& pivot_row, std::size_t s) {
    const Rational factor = target[s];
    for (std::size_t j = 0; j < target.size(); ++j)
      if (!pivot_row[j].is_zero()) target[j] -= factor * pivot_row[j];
  }

  std::size_t m_, n_, cols_ = 0, aux_ = npos;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Exact two-phase primal simplex with Bland's rule.
inline LpSolution solve(const LinearProgram& lp, const Limits& limits = default_limits()) {
  check_dim(lp.num_vars, lp.objective.size(), "objective");
  const std::size_t m = lp.rows.size();
  if ((m + 1) * (lp.num_vars + m + 2) > limits.lp_max_cells) throw LimitExceeded("linear program exceeds size cap");

  std::size_t worst = detail::Tableau::npos;
  for (std::size_t i = 0; i < m; ++i)
    if (lp.rows[i].rhs.sign() < 0 && (worst == detail::Tableau::npos || lp.rows[i].rhs < lp.rows[worst].rhs))
      worst = i;

  const bool phase_one = worst != detail::Tableau::npos;
  detail::Tableau t(lp, phase_one);
  std::size_t pivots = 0;

  if (phase_one) {
    // maximize -aux; one pivot on the most negative row makes the start feasible
    std::vector<Rational> c(t.cols());
    c[t.aux()] = -1;
    t.set_objective(c);
    t.pivot(worst, t.aux());
    t.optimize(pivots);
    if (t.objective_value().sign() < 0) return {LpStatus::infeasible, {}, {}};
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.basic(i) != t.aux()) continue;
      for (std::size_t j = 0; j < t.cols(); ++j) {
        if (j != t.aux() && !t.at(i, j).is_zero()) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }

  std::vector<Rational> c(t.cols());
  for (std::size_t j = 0; j < lp.num_vars; ++j) c[j] = lp.objective[j];
  t.set_objective(c);
  if (!t.optimize(pivots, phase_one ? t.aux() : detail::Tableau::npos)) return {LpStatus::unbounded, {}, {}};
  return {LpStatus::optimal, t.objective_value(), t.primal()};
}

}  // namespace buyk
