#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cloudprice/model.hpp"
#include "cloudprice/optimizer.hpp"
#include "cloudprice/pricing.hpp"
#include "cloudprice/simplex.hpp"

namespace cloudprice {

// Intervals are numbered from 0 in this API; the JSON format and CLI use 1-based numbers.

/// Users submitting in one interval. `deadlines[j]` is the last interval in which jobs of
/// type j may run; it must lie in [own index, horizon - 1]. An interval with no user
/// types is idle and only contributes capacity.
struct IntervalSpec {
  Instance instance;
  std::vector<std::size_t> deadlines;
  double nu = 0.0;
};

struct HorizonSpec {
  std::vector<IntervalSpec> intervals;  // horizon T = intervals.size()

  std::size_t horizon() const { return intervals.size(); }
};

/// Checks deadlines, resource dimensions across intervals and every interval instance.
void validate(const HorizonSpec& spec);

/// x_{j,s}(t): jobs per user of type j submitted in s and processed in t.
struct ScheduleVariable {
  std::size_t type = 0;
  std::size_t submitted = 0;
  std::size_t processed = 0;
};

struct HorizonProgram {
  HorizonSpec spec;  // gamma already applied to every interval
  PlanKind kind = PlanKind::kResource;
  double beta = 2.0;
  std::vector<ScheduleVariable> variables;
  std::vector<double> nu_bounds;  // concavity weight bound per interval
  std::vector<std::string> warnings;
};

/// Lays out the joint program: per-interval prices plus the schedule variables, with
/// objective sum_s (nu_s revenue_s + F_beta,s). Intervals whose nu exceeds the concavity
/// bound are reported in `warnings`.
HorizonProgram build_program(const HorizonSpec& spec, double beta, double gamma,
                             PlanKind kind = PlanKind::kResource);

/// Objective of the joint program at the given per-interval plans (idle intervals: nullopt).
double program_objective(const HorizonProgram& program,
                         const std::vector<std::optional<PricingPlan>>& plans);

struct ScheduleCheck {
  bool feasible = false;
  std::vector<double> jobs;  // one per program variable; a witness when feasible
  double residual = 0.0;     // worst constraint violation of `jobs`
  double infeasibility = 0.0;
  // Binding capacity row when infeasible.
  std::optional<std::size_t> interval;
  std::optional<std::size_t> resource;
  std::string certificate;
};

/// Feasibility LP for demanded jobs demand[s][j] (per user). Deadline rows are
/// equalities: processing more than demanded never helps capacity.
ScheduleCheck schedule_feasible(const HorizonProgram& program,
                                const std::vector<std::vector<double>>& demand);

/// The LP itself, exposed for tests.
FeasibilityProblem schedule_lp(const HorizonProgram& program,
                               const std::vector<std::vector<double>>& demand);

/// Membership test for the joint constraint set: every deadline row holds with the
/// demand induced by the prices (sum_t x >= x*(p_s)), and every capacity row holds.
bool joint_point_feasible(const HorizonProgram& program,
                          const std::vector<std::optional<PricingPlan>>& plans,
                          const std::vector<double>& jobs, double tolerance = 1e-9);

struct PriceRepair {
  std::size_t interval = 0;
  double factor = 1.0;
};

struct HorizonResult {
  std::vector<std::optional<PricingPlan>> plans;
  std::vector<std::optional<SolveResult>> stage_one;  // independent per-interval solves
  std::vector<std::vector<double>> demand;            // x*_{j,s} at the final prices
  std::vector<double> schedule;                       // aligned with program.variables
  std::vector<double> interval_revenue;
  std::vector<double> interval_fairness;
  double revenue = 0.0;
  double fairness = 0.0;
  double objective = 0.0;
  bool feasible = false;
  bool converged = false;  // every stage-one solve converged
  std::vector<PriceRepair> repairs;
  std::vector<std::string> warnings;
};

/// Two-stage solve: optimize each interval's prices against the capacity it can reach
/// before its latest deadline, then check the joint schedule with the feasibility LP.
/// When the schedule is infeasible, prices of the latest interval feeding the binding
/// capacity row are scaled up by the smallest factor (bisection) that removes as much
/// of the infeasibility as that interval can, and the check repeats.
HorizonResult solve_horizon(const HorizonProgram& program, const SolverConfig& config = {});

}  // namespace cloudprice
