#include "cloudprice/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cloudprice/error.hpp"

namespace cloudprice {

namespace {

constexpr double kPivotEps = 1e-12;

struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;  // excluding the right-hand side
  std::vector<double> cells;  // (rows + 1) x (cols + 1); last row holds reduced costs
  std::vector<std::size_t> basis;

  double& at(std::size_t r, std::size_t c) { return cells[r * (cols + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return cells[r * (cols + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis[pr] = pc;
  }
};

}  // namespace

FeasibilityResult solve_feasibility(const FeasibilityProblem& problem, double tolerance) {
  const std::size_t n = problem.num_variables;
  const std::size_t m = problem.constraints.size();
  for (const auto& c : problem.constraints) {
    if (c.coeffs.size() != n) throw InputError("constraint '" + c.name + "' has wrong width");
  }

  // Normalize every row to a nonnegative right-hand side.
  std::vector<double> flip(m, 1.0);
  std::vector<Sense> sense(m);
  double scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = problem.constraints[i];
    sense[i] = c.sense;
    if (c.rhs < 0.0) {
      flip[i] = -1.0;
      if (c.sense == Sense::kLessEqual) sense[i] = Sense::kGreaterEqual;
      else if (c.sense == Sense::kGreaterEqual) sense[i] = Sense::kLessEqual;
    }
    scale = std::max(scale, std::abs(c.rhs));
  }

  // Column layout: structural | one slack or surplus per inequality | artificials.
  std::vector<std::size_t> slack_col(m, 0), art_col(m, 0);
  std::vector<bool> has_slack(m, false), has_art(m, false);
  std::size_t cols = n;
  for (std::size_t i = 0; i < m; ++i) {
    if (sense[i] != Sense::kEqual) {
      has_slack[i] = true;
      slack_col[i] = cols++;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (sense[i] != Sense::kLessEqual) {
      has_art[i] = true;
      art_col[i] = cols++;
    }
  }

  Tableau t;
  t.rows = m;
  t.cols = cols;
  t.cells.assign((m + 1) * (cols + 1), 0.0);
  t.basis.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = problem.constraints[i];
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = flip[i] * c.coeffs[j];
    t.rhs(i) = flip[i] * c.rhs;
    if (has_slack[i]) t.at(i, slack_col[i]) = sense[i] == Sense::kLessEqual ? 1.0 : -1.0;
    if (has_art[i]) {
      t.at(i, art_col[i]) = 1.0;
      t.basis[i] = art_col[i];
    } else {
      t.basis[i] = slack_col[i];
    }
  }
  // Reduced costs of "minimize sum of artificials" with the artificial basis priced out.
  for (std::size_t i = 0; i < m; ++i) {
    if (!has_art[i]) continue;
    t.at(m, art_col[i]) = 1.0;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!has_art[i]) continue;
    for (std::size_t c = 0; c <= cols; ++c) t.at(m, c) -= t.at(i, c);
  }

  FeasibilityResult res;
  while (true) {
    std::size_t enter = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (t.at(m, c) < -kPivotEps) {
        enter = c;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotEps) continue;
      const double ratio = t.rhs(r) / a;
      if (ratio < best - kPivotEps ||
          (std::abs(ratio - best) <= kPivotEps && leave < m && t.basis[r] < t.basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen for a phase-1 objective
    t.pivot(leave, enter);
    ++res.pivots;
  }

  res.point.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis[r] < n) res.point[t.basis[r]] = std::max(0.0, t.rhs(r));
  }
  res.infeasibility = std::max(0.0, -t.rhs(m));

  // y_i from the reduced costs of the unit columns: d_slack = -(+/-1) y_i, d_art = 1 - y_i.
  res.duals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double y = 0.0;
    if (has_art[i]) {
      y = 1.0 - t.at(m, art_col[i]);
    } else {
      y = -t.at(m, slack_col[i]);
    }
    res.duals[i] = flip[i] * y;
  }
  res.feasible = res.infeasibility <= tolerance * scale;
  return res;
}

double max_violation(const FeasibilityProblem& problem, const std::vector<double>& x) {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  for (const auto& c : problem.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coeffs[j] * x[j];
    switch (c.sense) {
      case Sense::kLessEqual:
        worst = std::max(worst, lhs - c.rhs);
        break;
      case Sense::kGreaterEqual:
        worst = std::max(worst, c.rhs - lhs);
        break;
      case Sense::kEqual:
        worst = std::max(worst, std::abs(lhs - c.rhs));
        break;
    }
  }
  return worst;
}

}  // namespace cloudprice
