#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cloudprice {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct LinearConstraint {
  std::vector<double> coeffs;  // one per variable
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

/// Find x >= 0 satisfying every constraint. Dense tableau, meant for small problems.
struct FeasibilityProblem {
  std::size_t num_variables = 0;
  std::vector<LinearConstraint> constraints;
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> point;  // phase-1 optimum; a witness when feasible
  double infeasibility = 0.0;  // minimal total artificial mass
  // Phase-1 dual per constraint, in the constraint's own orientation. When infeasible,
  // the rows with nonzero duals form a certificate.
  std::vector<double> duals;
  std::size_t pivots = 0;
};

/// Phase-1 simplex with Bland's rule (so it cannot cycle). `tolerance` bounds the
/// residual artificial mass accepted as feasible, relative to max(1, max |rhs|).
FeasibilityResult solve_feasibility(const FeasibilityProblem& problem, double tolerance = 1e-9);

/// Largest violation of any constraint (or of x >= 0) at `x`.
double max_violation(const FeasibilityProblem& problem, const std::vector<double>& x);

}  // namespace cloudprice
