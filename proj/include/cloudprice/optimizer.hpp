#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cloudprice/model.hpp"
#include "cloudprice/pricing.hpp"

namespace cloudprice {

/// Operator objective nu * revenue + F_beta.
struct ObjectiveSpec {
  double nu = 0.0;
  double beta = 2.0;
};

struct SolverConfig {
  double tolerance = 1e-6;       // stop once (#barrier terms)/t <= tolerance
  double barrier_update = 20.0;  // t <- barrier_update * t
  double initial_barrier = 1.0;  // scaled down when |objective| at the start exceeds the term count
  int max_newton_iterations = 500;  // per centering step
  int max_outer_iterations = 200;
  double fd_step = 1e-6;  // relative step of the finite-difference Hessian
  bool analytic_hessian = true;
};

void validate(const ObjectiveSpec& spec);
void validate(const SolverConfig& config);

struct SolveResult {
  PricingPlan plan;
  Outcome outcome;
  double objective = 0.0;
  double revenue = 0.0;
  double fairness = 0.0;
  int iterations = 0;        // Newton steps (grid points for the grid oracle)
  int outer_iterations = 0;  // barrier updates
  bool converged = false;
  double gap = 0.0;  // (#barrier terms)/t at exit
  std::string diagnostics;
};

/// nu * revenue + beta-fairness of the count-expanded net utilities.
/// Throws InfeasibleError for an infeasible plan and InputError for a zero utility.
double objective(const Instance& instance, const PricingPlan& plan, const ObjectiveSpec& spec);

/// Largest revenue weight for which the objective is certified concave in the prices.
///
/// For isoelastic users the objective separates into per-type terms g_j(r_j) with r
/// affine in the prices, so g_j'' <= 0 for every j is sufficient. Solving g_j'' <= 0 for
/// nu and bounding r_j from below through count_j R_ij x_j <= C_i gives
///
///   nu_j = w^(1-beta) (gamma/c)^beta (beta(1-alpha) - gamma)/gamma
///          * (min_i C_i/(count_j R_ij))^(beta(alpha-1)),   w = gamma/(1-alpha) - 1.
///
/// Returns min_j nu_j, or 0 when beta <= 1 or beta(1-alpha_j) <= gamma for some j.
double concavity_weight_bound(const Instance& instance, double beta, double gamma);

/// Maximize the objective over the prices of `kind` with a log-barrier interior-point
/// method: minimize -t*objective - sum log(slack) for t = t0, mu t0, ... until the gap
/// estimate drops below the tolerance. Throws InfeasibleError if no strictly feasible
/// price exists. A stalled inner solve returns converged = false with diagnostics.
SolveResult barrier_optimize(const Instance& instance, PlanKind kind, const ObjectiveSpec& spec,
                             const SolverConfig& config = {}, std::vector<double> bundle = {});

/// Lowest feasible bundle price: the root of sum_j count_j mu_j x_j(mu_j^gamma p) =
/// min_i C_i / b_i, found by bisection in log(p).
double bundled_price_bisection(const Instance& instance, std::vector<double> bundle = {});

/// Cartesian price grid, one axis per price dimension.
struct GridSpec {
  std::vector<std::vector<double>> axes;

  static std::vector<double> uniform_axis(double first, double last, double step);
  static GridSpec uniform(std::size_t dims, double first, double last, double step);
};

/// Exhaustive search over a price grid of dimension <= 3; infeasible and zero-utility
/// points are skipped. Ties keep the first point in lexicographic order.
SolveResult grid_oracle(const Instance& instance, PlanKind kind, const ObjectiveSpec& spec,
                        const GridSpec& grid, std::vector<double> bundle = {});

struct DiscountPoint {
  double gamma = 1.0;
  bool ok = false;
  double objective = 0.0;
  std::string error;
};

struct DiscountSearchResult {
  double best_gamma = 1.0;
  SolveResult best;
  std::vector<DiscountPoint> points;
};

/// Runs barrier_optimize for every gamma on the grid and keeps the best converged one.
/// Failures are recorded per point; throws InfeasibleError if every point fails.
DiscountSearchResult discount_line_search(const Instance& instance, PlanKind kind,
                                          const ObjectiveSpec& spec,
                                          const std::vector<double>& gamma_grid,
                                          const SolverConfig& config = {},
                                          std::vector<double> bundle = {});

struct BoundCheck {
  bool holds = false;
  double slack = 0.0;  // lhs - rhs
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Fairness-revenue tradeoff bounds for isoelastic users with alpha < 1.
///
/// beta > 1: revenue >= (F (1-beta))^(1/(1-beta)) * sum_j count_j (1-alpha_j)/(gamma+alpha_j-1).
/// beta < 1: F >= revenue^(1-beta)/(1-beta) * (gamma/(1-alpha_min) - 1)^(1-beta).
BoundCheck tradeoff_bound_check(const Instance& instance, const PricingPlan& plan, double beta);

}  // namespace cloudprice
