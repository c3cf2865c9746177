#include "cloudprice/demand.hpp"

#include <cmath>
#include <string>

#include "cloudprice/error.hpp"

namespace cloudprice {

namespace {

bool is_log_utility(const UtilityParams& u) { return u.alpha == 1.0; }

void check_demand_args(const UtilityParams& utility, double per_job_cost, double discount) {
  validate(utility);
  if (!(discount > 0.0 && discount <= 1.0)) {
    throw InputError("discount must lie in (0, 1], got " + std::to_string(discount));
  }
  if (!demand_well_posed(utility, discount)) {
    throw InputError("demand undefined: discount " + std::to_string(discount) +
                     " must exceed 1 - alpha = " + std::to_string(1.0 - utility.alpha));
  }
  if (!(per_job_cost > 0.0) || !std::isfinite(per_job_cost)) {
    throw InputError("per-job cost must be positive and finite, got " +
                     std::to_string(per_job_cost));
  }
}

// Exponent e of the demand curve x = K r^e.
double demand_exponent(const UtilityParams& u, double discount) {
  return 1.0 / (1.0 - u.alpha - discount);
}

}  // namespace

double UtilityParams::value(double jobs) const {
  if (jobs <= 0.0) return 0.0;
  if (alpha == 1.0) return c * std::log(jobs);
  return c * std::pow(jobs, 1.0 - alpha) / (1.0 - alpha);
}

double UtilityParams::marginal(double jobs) const { return c * std::pow(jobs, -alpha); }

double UtilityParams::curvature(double jobs) const {
  return -alpha * c * std::pow(jobs, -alpha - 1.0);
}

void validate(const UtilityParams& utility) {
  if (!(utility.c > 0.0) || !std::isfinite(utility.c)) {
    throw InputError("utility scale c must be positive, got " + std::to_string(utility.c));
  }
  if (!(utility.alpha > 0.0 && utility.alpha <= 1.0)) {
    throw InputError("utility alpha must lie in (0, 1], got " + std::to_string(utility.alpha));
  }
}

bool demand_well_posed(const UtilityParams& utility, double discount) {
  if (is_log_utility(utility)) return discount > 0.0;
  return discount > 1.0 - utility.alpha;
}

double optimal_demand(const UtilityParams& utility, double per_job_cost, double discount) {
  check_demand_args(utility, per_job_cost, discount);
  // U'(x) = r gamma x^(gamma-1)  =>  x = (gamma r / c)^(1/(1-alpha-gamma)); also covers alpha=1.
  const double e = demand_exponent(utility, discount);
  return std::exp(e * std::log(discount * per_job_cost / utility.c));
}

double demand_sensitivity(const UtilityParams& utility, double per_job_cost, double discount) {
  const double x = optimal_demand(utility, per_job_cost, discount);
  const double g = discount;
  const double numer = g * std::pow(x, g - 1.0);
  const double denom = utility.curvature(x) + g * (1.0 - g) * std::pow(x, g - 2.0) * per_job_cost;
  return numer / denom;
}

double net_utility_at(const UtilityParams& utility, double per_job_cost, double discount,
                      double jobs) {
  if (jobs < 0.0) throw InputError("jobs must be nonnegative");
  if (jobs == 0.0) return 0.0;
  return utility.value(jobs) - per_job_cost * std::pow(jobs, discount);
}

double net_utility(const UtilityParams& utility, double per_job_cost, double discount) {
  const double x = optimal_demand(utility, per_job_cost, discount);
  const double surplus = net_utility_at(utility, per_job_cost, discount, x);
  return surplus > 0.0 ? surplus : 0.0;
}

DemandPoint demand_point(const UtilityParams& utility, double per_job_cost, double discount) {
  DemandPoint point;
  point.per_job_cost = per_job_cost;
  point.discount = discount;
  point.jobs = optimal_demand(utility, per_job_cost, discount);
  point.net_utility = net_utility(utility, per_job_cost, discount);
  return point;
}

double demand_by_bisection(const std::function<double(double)>& marginal_utility,
                           double per_job_cost, double discount) {
  if (!(per_job_cost > 0.0)) throw InputError("per-job cost must be positive");
  if (!(discount > 0.0 && discount <= 1.0)) throw InputError("discount must lie in (0, 1]");

  const double log_rg = std::log(per_job_cost * discount);
  // Residual of the stationarity condition in log form, as a function of log(x).
  auto residual = [&](double y) {
    const double mu = marginal_utility(std::exp(y));
    if (!(mu > 0.0)) throw InputError("marginal utility must be positive on the bracket");
    return std::log(mu) - log_rg - (discount - 1.0) * y;
  };

  const double lo_end = std::log(1e-12);
  const double hi_end = std::log(1e12);
  constexpr int kScan = 240;

  int sign_changes = 0;
  double lo = lo_end, hi = hi_end;
  double prev_y = lo_end;
  double prev_r = residual(prev_y);
  for (int k = 1; k <= kScan; ++k) {
    const double y = lo_end + (hi_end - lo_end) * k / kScan;
    const double r = residual(y);
    if ((prev_r > 0.0) != (r > 0.0)) {
      ++sign_changes;
      lo = prev_y;
      hi = y;
    }
    prev_y = y;
    prev_r = r;
  }
  if (sign_changes == 0) throw InputError("no stationary demand in [1e-12, 1e12]");
  if (sign_changes > 1) throw InputError("stationarity condition has multiple roots");

  const bool lo_positive = residual(lo) > 0.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if ((residual(mid) > 0.0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

CostResponse cost_response(const UtilityParams& utility, double per_job_cost, double discount) {
  CostResponse out;
  const double r = per_job_cost;
  const double e = demand_exponent(utility, discount);
  const double x = optimal_demand(utility, r, discount);
  const double q = 1.0 + discount * e;  // payment r x^gamma scales as r^q
  out.jobs = x;
  out.d_jobs = e * x / r;
  out.d2_jobs = e * (e - 1.0) * x / (r * r);
  out.payment = r * std::pow(x, discount);
  out.d_payment = q * out.payment / r;
  out.d2_payment = q * (q - 1.0) * out.payment / (r * r);
  out.utility = utility.value(x) - out.payment;
  // Envelope theorem: dU/dr = -x^gamma.
  out.d_utility = -out.payment / r;
  out.d2_utility = -discount * e * out.payment / (r * r);
  return out;
}

}  // namespace cloudprice
