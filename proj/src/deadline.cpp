#include "cloudprice/deadline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cloudprice/error.hpp"
#include "cloudprice/fairness.hpp"

namespace cloudprice {

namespace {

std::string interval_name(std::size_t s) { return "interval " + std::to_string(s + 1); }

bool idle(const IntervalSpec& interval) { return interval.instance.user_types.empty(); }

PricingPlan scaled(const PricingPlan& plan, double factor) {
  PricingPlan out = plan;
  if (auto* b = std::get_if<BundledPlan>(&out)) {
    b->price *= factor;
  } else if (auto* r = std::get_if<ResourcePlan>(&out)) {
    for (double& p : r->prices) p *= factor;
  } else {
    for (double& p : std::get<DifferentiatedPlan>(out).prices) p *= factor;
  }
  return out;
}

std::vector<double> demand_of(const Instance& instance, const std::optional<PricingPlan>& plan) {
  if (!plan) return std::vector<double>(instance.num_types(), 0.0);
  return evaluate(instance, *plan).demand;
}

// Capacity rows are appended after the deadline rows; this maps them back.
struct CapacityRow {
  std::size_t row = 0;
  std::size_t interval = 0;
  std::size_t resource = 0;
};

std::vector<CapacityRow> capacity_rows(const HorizonProgram& program) {
  std::size_t deadline_rows = 0;
  for (const auto& interval : program.spec.intervals) deadline_rows += interval.instance.num_types();
  std::vector<CapacityRow> rows;
  const std::size_t m = program.spec.intervals.front().instance.num_resources();
  for (std::size_t t = 0; t < program.spec.horizon(); ++t) {
    for (std::size_t i = 0; i < m; ++i) rows.push_back({deadline_rows + rows.size(), t, i});
  }
  return rows;
}

}  // namespace

void validate(const HorizonSpec& spec) {
  if (spec.intervals.empty()) throw InputError("horizon: at least one interval required");
  const std::size_t m = spec.intervals.front().instance.num_resources();
  const std::size_t horizon = spec.horizon();
  for (std::size_t s = 0; s < horizon; ++s) {
    const auto& interval = spec.intervals[s];
    const std::string where = "intervals[" + std::to_string(s) + "]";
    try {
      validate(interval.instance);
    } catch (const InputError& e) {
      throw InputError(where + ".instance." + e.what());
    }
    if (interval.instance.num_resources() != m) {
      throw InputError(where + ".instance.resources: every interval needs " + std::to_string(m) +
                       " resources");
    }
    if (!(interval.nu >= 0.0) || !std::isfinite(interval.nu)) {
      throw InputError(where + ".nu: must be >= 0");
    }
    if (interval.deadlines.size() != interval.instance.num_types()) {
      throw InputError(where + ".deadlines: expected one per user type");
    }
    for (std::size_t j = 0; j < interval.deadlines.size(); ++j) {
      const std::size_t tau = interval.deadlines[j];
      if (tau < s || tau >= horizon) {
        throw InputError(where + ".deadlines[" + std::to_string(j) + "]: deadline " +
                         std::to_string(tau + 1) + " outside [" + std::to_string(s + 1) + ", " +
                         std::to_string(horizon) + "]");
      }
    }
  }
}

HorizonProgram build_program(const HorizonSpec& spec, double beta, double gamma, PlanKind kind) {
  validate(spec);
  validate(ObjectiveSpec{0.0, beta});
  HorizonProgram program;
  program.kind = kind;
  program.beta = beta;
  program.spec = spec;
  for (std::size_t s = 0; s < spec.horizon(); ++s) {
    auto& interval = program.spec.intervals[s];
    try {
      interval.instance = with_gamma(interval.instance, gamma);
    } catch (const InputError& e) {
      throw InputError("intervals[" + std::to_string(s) + "].instance." + e.what());
    }
    for (std::size_t j = 0; j < interval.instance.num_types(); ++j) {
      for (std::size_t t = s; t <= interval.deadlines[j]; ++t) {
        program.variables.push_back({j, s, t});
      }
    }
    double bound = 0.0;
    if (!idle(interval)) bound = concavity_weight_bound(interval.instance, beta, gamma);
    program.nu_bounds.push_back(bound);
    if (!idle(interval) && interval.nu > bound) {
      std::ostringstream os;
      os << interval_name(s) << ": nu = " << interval.nu << " exceeds the concavity bound "
         << bound << "; the joint program is not certified convex";
      program.warnings.push_back(os.str());
    }
  }
  return program;
}

double program_objective(const HorizonProgram& program,
                         const std::vector<std::optional<PricingPlan>>& plans) {
  if (plans.size() != program.spec.horizon()) throw InputError("one plan per interval expected");
  double total = 0.0;
  for (std::size_t s = 0; s < plans.size(); ++s) {
    const auto& interval = program.spec.intervals[s];
    if (idle(interval)) continue;
    if (!plans[s]) throw InputError(interval_name(s) + " has users but no plan");
    total += objective(interval.instance, *plans[s], {interval.nu, program.beta});
  }
  return total;
}

FeasibilityProblem schedule_lp(const HorizonProgram& program,
                               const std::vector<std::vector<double>>& demand) {
  const auto& intervals = program.spec.intervals;
  if (demand.size() != intervals.size()) throw InputError("demand: one row per interval");
  FeasibilityProblem lp;
  lp.num_variables = program.variables.size();

  for (std::size_t s = 0; s < intervals.size(); ++s) {
    const auto& inst = intervals[s].instance;
    if (demand[s].size() != inst.num_types()) {
      throw InputError("demand[" + std::to_string(s) + "]: one entry per user type");
    }
    for (std::size_t j = 0; j < inst.num_types(); ++j) {
      if (!(demand[s][j] >= 0.0)) throw InputError("demand must be nonnegative");
      LinearConstraint row;
      row.coeffs.assign(lp.num_variables, 0.0);
      for (std::size_t v = 0; v < program.variables.size(); ++v) {
        const auto& var = program.variables[v];
        if (var.submitted == s && var.type == j) row.coeffs[v] = 1.0;
      }
      row.sense = Sense::kEqual;
      row.rhs = demand[s][j];
      row.name = "deadline of " + inst.user_types[j].label + " submitted in " + interval_name(s);
      lp.constraints.push_back(std::move(row));
    }
  }

  const std::size_t m = intervals.front().instance.num_resources();
  for (std::size_t t = 0; t < intervals.size(); ++t) {
    const auto& here = intervals[t].instance.resources;
    for (std::size_t i = 0; i < m; ++i) {
      LinearConstraint row;
      row.coeffs.assign(lp.num_variables, 0.0);
      for (std::size_t v = 0; v < program.variables.size(); ++v) {
        const auto& var = program.variables[v];
        if (var.processed != t) continue;
        const auto& user = intervals[var.submitted].instance.user_types[var.type];
        row.coeffs[v] = user.count * user.requirements[i];
      }
      row.sense = Sense::kLessEqual;
      row.rhs = here.capacities[i];
      row.name = "capacity of resource '" + here.names[i] + "' in " + interval_name(t);
      lp.constraints.push_back(std::move(row));
    }
  }
  return lp;
}

ScheduleCheck schedule_feasible(const HorizonProgram& program,
                                const std::vector<std::vector<double>>& demand) {
  const FeasibilityProblem lp = schedule_lp(program, demand);
  const FeasibilityResult res = solve_feasibility(lp);
  ScheduleCheck check;
  check.feasible = res.feasible;
  check.jobs = res.point;
  check.residual = max_violation(lp, res.point);
  check.infeasibility = res.infeasibility;
  if (!check.feasible) {
    double strongest = 0.0;
    for (const auto& row : capacity_rows(program)) {
      const double y = std::abs(res.duals[row.row]);
      if (y > strongest + 1e-12) {
        strongest = y;
        check.interval = row.interval;
        check.resource = row.resource;
        check.certificate = lp.constraints[row.row].name;
      }
    }
    if (check.certificate.empty()) check.certificate = "deadline rows are inconsistent";
  }
  return check;
}

bool joint_point_feasible(const HorizonProgram& program,
                          const std::vector<std::optional<PricingPlan>>& plans,
                          const std::vector<double>& jobs, double tolerance) {
  const auto& intervals = program.spec.intervals;
  if (plans.size() != intervals.size() || jobs.size() != program.variables.size()) return false;
  std::vector<std::vector<double>> demand;
  for (std::size_t s = 0; s < intervals.size(); ++s) {
    if (!idle(intervals[s]) && !plans[s]) return false;
    demand.push_back(demand_of(intervals[s].instance, plans[s]));
  }
  const FeasibilityProblem lp = schedule_lp(program, demand);
  for (double x : jobs) {
    if (x < -tolerance) return false;
  }
  for (const auto& row : lp.constraints) {
    double lhs = 0.0;
    for (std::size_t v = 0; v < jobs.size(); ++v) lhs += row.coeffs[v] * jobs[v];
    // Deadline rows are relaxed to ">=" here: the joint set allows over-processing.
    if (row.sense == Sense::kEqual && lhs < row.rhs - tolerance) return false;
    if (row.sense == Sense::kLessEqual && lhs > row.rhs + tolerance) return false;
  }
  return true;
}

HorizonResult solve_horizon(const HorizonProgram& program, const SolverConfig& config) {
  const auto& intervals = program.spec.intervals;
  const std::size_t horizon = intervals.size();
  HorizonResult out;
  out.plans.assign(horizon, std::nullopt);
  out.stage_one.assign(horizon, std::nullopt);
  out.warnings = program.warnings;
  out.converged = true;

  // Stage 1: each interval sees the capacity it can reach before its latest deadline.
  for (std::size_t s = 0; s < horizon; ++s) {
    const auto& interval = intervals[s];
    if (idle(interval)) continue;
    const std::size_t last = *std::max_element(interval.deadlines.begin(), interval.deadlines.end());
    Instance window = interval.instance;
    for (std::size_t i = 0; i < window.num_resources(); ++i) {
      double reach = 0.0;
      for (std::size_t t = s; t <= last; ++t) reach += intervals[t].instance.resources.capacities[i];
      window.resources.capacities[i] = reach;
    }
    try {
      SolveResult res = barrier_optimize(window, program.kind, {interval.nu, program.beta}, config);
      out.converged = out.converged && res.converged;
      if (!res.converged) out.warnings.push_back(interval_name(s) + ": " + res.diagnostics);
      out.plans[s] = res.plan;
      out.stage_one[s] = std::move(res);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError(interval_name(s) + ": " + e.what());
    }
  }

  for (std::size_t s = 0; s < horizon; ++s) {
    out.demand.push_back(demand_of(intervals[s].instance, out.plans[s]));
  }

  // Stage 2: schedule check with price repair.
  auto infeasibility_with = [&](std::size_t s, double factor) {
    auto demand = out.demand;
    demand[s] = demand_of(intervals[s].instance, scaled(*out.plans[s], factor));
    return schedule_feasible(program, demand);
  };

  constexpr double kMaxFactor = 1e8;
  std::vector<bool> exhausted(horizon, false);
  ScheduleCheck check = schedule_feasible(program, out.demand);
  for (std::size_t round = 0; !check.feasible && round < 4 * horizon + 4; ++round) {
    const std::size_t t_bind = check.interval.value_or(horizon - 1);
    const std::size_t i_bind = check.resource.value_or(0);

    // Latest interval whose jobs can land on the binding row.
    std::optional<std::size_t> chosen;
    for (std::size_t s = std::min(t_bind, horizon - 1) + 1; s-- > 0;) {
      if (exhausted[s] || idle(intervals[s])) continue;
      const auto& inst = intervals[s].instance;
      for (std::size_t j = 0; j < inst.num_types(); ++j) {
        if (intervals[s].deadlines[j] >= t_bind && inst.user_types[j].requirements[i_bind] > 0.0 &&
            out.demand[s][j] > 0.0) {
          chosen = s;
          break;
        }
      }
      if (chosen) break;
    }
    if (!chosen) break;

    const std::size_t s = *chosen;
    const double base = check.infeasibility;
    const ScheduleCheck floor_check = infeasibility_with(s, kMaxFactor);
    const double floor = floor_check.infeasibility;
    if (!floor_check.feasible && !(floor < base * (1.0 - 1e-9))) {
      exhausted[s] = true;
      continue;
    }
    // Smallest factor reaching feasibility, or the floor this interval alone can reach.
    auto good = [&](double f) {
      const ScheduleCheck c = infeasibility_with(s, f);
      return floor_check.feasible ? c.feasible : c.infeasibility <= floor + 1e-6 * (base - floor);
    };
    double lo = 1.0, hi = kMaxFactor;
    for (int it = 0; it < 200 && hi / lo - 1.0 > 1e-9; ++it) {
      const double mid = std::sqrt(lo * hi);
      (good(mid) ? hi : lo) = mid;
    }
    out.plans[s] = scaled(*out.plans[s], hi);
    out.demand[s] = demand_of(intervals[s].instance, out.plans[s]);
    out.repairs.push_back({s, hi});
    if (!floor_check.feasible) exhausted[s] = true;
    check = schedule_feasible(program, out.demand);
  }
  if (!check.feasible) {
    throw InfeasibleError("no feasible schedule: " + check.certificate + " cannot be met");
  }

  out.feasible = true;
  out.schedule = check.jobs;
  for (std::size_t s = 0; s < horizon; ++s) {
    double rev = 0.0, fair = 0.0;
    if (out.plans[s]) {
      const auto& inst = intervals[s].instance;
      const Outcome o = evaluate(inst, *out.plans[s]);
      rev = o.revenue;
      fair = beta_fairness(expand_by_count(inst, o.net_utility), program.beta);
    }
    out.interval_revenue.push_back(rev);
    out.interval_fairness.push_back(fair);
    out.revenue += rev;
    out.fairness += fair;
    out.objective += intervals[s].nu * rev + fair;
  }
  return out;
}

}  // namespace cloudprice
