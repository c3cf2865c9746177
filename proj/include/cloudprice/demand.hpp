#pragma once

#include <functional>

namespace cloudprice {

/// Isoelastic utility U(x) = c x^(1-alpha)/(1-alpha), or c log x when alpha == 1.
struct UtilityParams {
  double alpha = 0.5;
  double c = 1.0;

  double value(double jobs) const;
  double marginal(double jobs) const;
  double curvature(double jobs) const;
};

void validate(const UtilityParams& utility);

/// True when the demand stationarity point is a maximum (gamma > 1 - alpha).
bool demand_well_posed(const UtilityParams& utility, double discount);

/// A user's demand at a given per-job cost, together with the net utility it yields.
struct DemandPoint {
  double jobs = 0.0;
  double per_job_cost = 0.0;
  double discount = 1.0;
  double net_utility = 0.0;
};

// Closed-form maximizer of U(x) - r x^gamma.
double optimal_demand(const UtilityParams& utility, double per_job_cost, double discount);

// d(jobs)/d(cost) at the optimal demand. Strictly negative.
double demand_sensitivity(const UtilityParams& utility, double per_job_cost, double discount);

// U(x*) - r x*^gamma. A user whose best interior point yields a loss opts out and gets 0.
double net_utility(const UtilityParams& utility, double per_job_cost, double discount);

/// Net utility of processing a fixed number of jobs; zero jobs yields zero utility.
double net_utility_at(const UtilityParams& utility, double per_job_cost, double discount,
                      double jobs);

DemandPoint demand_point(const UtilityParams& utility, double per_job_cost, double discount);

/// Numeric fallback for utilities without a closed-form demand.
///
/// Solves U'(x) = r gamma x^(gamma-1) by bisection in log(x) over [1e-12, 1e12]. The
/// marginal utility must be positive on the bracket. Throws InputError when the
/// stationarity residual has no sign change, or more than one, on the bracket.
double demand_by_bisection(const std::function<double(double)>& marginal_utility,
                           double per_job_cost, double discount);

/// Derivatives of the per-user quantities with respect to the per-job cost r.
///
/// Isoelastic demand is x = K r^e with e = 1/(1-alpha-gamma), so every quantity here is
/// a power of r and the derivatives are exact.
struct CostResponse {
  double jobs = 0.0;        // x
  double d_jobs = 0.0;      // dx/dr
  double d2_jobs = 0.0;     // d2x/dr2
  double payment = 0.0;     // r x^gamma
  double d_payment = 0.0;
  double d2_payment = 0.0;
  double utility = 0.0;     // U(x) - r x^gamma, not clamped
  double d_utility = 0.0;
  double d2_utility = 0.0;
};

CostResponse cost_response(const UtilityParams& utility, double per_job_cost, double discount);

}  // namespace cloudprice
