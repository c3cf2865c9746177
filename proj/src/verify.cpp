#include "cloudprice/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "cloudprice/deadline.hpp"
#include "cloudprice/demand.hpp"
#include "cloudprice/error.hpp"
#include "cloudprice/fairness.hpp"
#include "cloudprice/optimizer.hpp"
#include "cloudprice/pricing.hpp"
#include "cloudprice/trace.hpp"

namespace cloudprice {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

Instance random_instance(Rng& rng, std::size_t m, std::size_t n, bool discount) {
  Instance inst;
  for (std::size_t i = 0; i < m; ++i) {
    inst.resources.names.push_back("r" + std::to_string(i + 1));
    inst.resources.capacities.push_back(uniform(rng, 1.0, 10.0));
  }
  double alpha_min = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    UserType u;
    u.label = "t" + std::to_string(j + 1);
    u.count = 1 + static_cast<int>(rng() % 4);
    for (std::size_t i = 0; i < m; ++i) u.requirements.push_back(uniform(rng, 0.05, 1.0));
    u.utility = {uniform(rng, 0.2, 0.9), uniform(rng, 0.5, 2.0)};
    alpha_min = std::min(alpha_min, u.utility.alpha);
    inst.user_types.push_back(std::move(u));
  }
  inst.gamma = discount ? uniform(rng, 1.0 - alpha_min + 0.05, 1.0) : 1.0;
  validate(inst);
  return inst;
}

// Random prices of the given kind, doubled until the plan is feasible.
PricingPlan random_feasible_plan(const Instance& inst, PlanKind kind, Rng& rng) {
  const PlanParameterization param(inst, kind);
  std::vector<double> theta(param.dimension());
  for (double& t : theta) t = uniform(rng, 0.1, 5.0);
  for (int k = 0; k < 200; ++k) {
    const PricingPlan plan = param.plan(theta);
    if (evaluate(inst, plan).feasible) return plan;
    for (double& t : theta) t *= 2.0;
  }
  throw InfeasibleError("could not find a feasible random plan");
}

// Fault hook target: the closed form with its exponent optionally negated.
double demand_under_test(const UtilityParams& u, double r, double g, bool broken) {
  const double x = optimal_demand(u, r, g);
  return broken ? 1.0 / x : x;
}

struct Check {
  std::string scope, name, anchor;
  std::function<std::pair<bool, std::string>(Rng&, const VerifyOptions&)> run;
};

std::vector<Check> checks() {
  std::vector<Check> all;

  all.push_back({"demand", "closed-form demand solves the stationarity condition",
                 "user utility maximization",
                 [](Rng& rng, const VerifyOptions& opt) {
                   double worst = 0.0;
                   for (int k = 0; k < 1000; ++k) {
                     const UtilityParams u{uniform(rng, 0.3, 0.95), uniform(rng, 0.5, 2.0)};
                     const double g = uniform(rng, 1.0 - u.alpha + 0.3, 1.0);
                     const double r = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
                     const double x = demand_under_test(u, r, g, opt.break_demand);
                     const double root = demand_by_bisection(
                         [&](double y) { return u.marginal(y); }, r, g);
                     worst = std::max(worst, rel_err(x, root));
                   }
                   return std::pair{worst <= 1e-9, "max rel err " + sci(worst)};
                 }});

  all.push_back({"demand", "net utility is a price-independent multiple of the payment",
                 "net utility closed form",
                 [](Rng& rng, const VerifyOptions& opt) {
                   double worst = 0.0;
                   for (int k = 0; k < 1000; ++k) {
                     const UtilityParams u{uniform(rng, 0.3, 0.95), uniform(rng, 0.5, 2.0)};
                     const double g = uniform(rng, 1.0 - u.alpha + 0.3, 1.0);
                     const double r = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
                     const double x = demand_under_test(u, r, g, opt.break_demand);
                     const double direct = u.value(x) - r * std::pow(x, g);
                     const double closed = (g / (1.0 - u.alpha) - 1.0) * r * std::pow(x, g);
                     worst = std::max(worst, rel_err(direct, closed));
                   }
                   return std::pair{worst <= 1e-9, "max rel err " + sci(worst)};
                 }});

  all.push_back({"demand", "demand sensitivity matches central differences", "demand derivative",
                 [](Rng& rng, const VerifyOptions&) {
                   double worst = 0.0;
                   for (int k = 0; k < 1000; ++k) {
                     const UtilityParams u{uniform(rng, 0.3, 0.95), uniform(rng, 0.5, 2.0)};
                     const double g = uniform(rng, 1.0 - u.alpha + 0.3, 1.0);
                     const double r = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
                     const double h = 1e-6 * r;
                     const double fd =
                         (optimal_demand(u, r + h, g) - optimal_demand(u, r - h, g)) / (2 * h);
                     worst = std::max(worst, rel_err(demand_sensitivity(u, r, g), fd));
                   }
                   return std::pair{worst <= 1e-5, "max rel err " + sci(worst)};
                 }});

  all.push_back({"pricing", "revenue decreases in every resource price",
                 "revenue monotone in price",
                 [](Rng& rng, const VerifyOptions&) {
                   int bad = 0, total = 0;
                   for (int inst_no = 0; inst_no < 10; ++inst_no) {
                     const Instance inst =
                         random_instance(rng, 1 + rng() % 3, 1 + rng() % 3, inst_no % 2 == 1);
                     for (int k = 0; k < 50; ++k) {
                       auto p = std::get<ResourcePlan>(
                           random_feasible_plan(inst, PlanKind::kResource, rng));
                       for (std::size_t i = 0; i < p.prices.size(); ++i) {
                         const double h = 1e-6 * p.prices[i];
                         auto up = p, down = p;
                         up.prices[i] += h;
                         down.prices[i] -= h;
                         ++total;
                         if (!(evaluate(inst, up).revenue < evaluate(inst, down).revenue)) ++bad;
                       }
                     }
                   }
                   return std::pair{bad == 0, std::to_string(bad) + " of " +
                                                  std::to_string(total) + " derivatives >= 0"};
                 }});

  all.push_back({"pricing", "lifted differentiated plan reproduces the resource outcome",
                 "differentiated pricing generalizes resource pricing",
                 [](Rng& rng, const VerifyOptions&) {
                   double worst = 0.0;
                   for (int k = 0; k < 50; ++k) {
                     const Instance inst = random_instance(rng, 1 + rng() % 3, 1 + rng() % 3, true);
                     const auto p =
                         std::get<ResourcePlan>(random_feasible_plan(inst, PlanKind::kResource, rng));
                     const Outcome a = evaluate(inst, p);
                     const Outcome b = evaluate(inst, lift_resource_to_differentiated(inst, p));
                     worst = std::max(worst, rel_err(b.revenue, a.revenue));
                     for (std::size_t j = 0; j < a.demand.size(); ++j) {
                       worst = std::max(worst, rel_err(b.demand[j], a.demand[j]));
                     }
                   }
                   return std::pair{worst <= 1e-12, "max rel diff " + sci(worst)};
                 }});

  all.push_back({"pricing", "usage decreases in each price", "constraint set monotone in price",
                 [](Rng& rng, const VerifyOptions&) {
                   int bad = 0;
                   for (int k = 0; k < 200; ++k) {
                     const Instance inst = random_instance(rng, 2, 3, true);
                     auto p =
                         std::get<ResourcePlan>(random_feasible_plan(inst, PlanKind::kResource, rng));
                     const std::size_t i = rng() % p.prices.size();
                     auto up = p;
                     up.prices[i] *= 1.1;
                     const auto u0 = evaluate(inst, p).usage, u1 = evaluate(inst, up).usage;
                     for (std::size_t q = 0; q < u0.size(); ++q) bad += u1[q] > u0[q];
                   }
                   return std::pair{bad == 0, std::to_string(bad) + " increases"};
                 }});

  all.push_back({"fairness", "beta-lambda fairness ranks like beta-fairness at lambda = 1/beta - 1",
                 "order equivalence of the fairness families",
                 [](Rng& rng, const VerifyOptions&) {
                   int bad = 0;
                   for (int k = 0; k < 1000; ++k) {
                     const double beta = rng() % 2 ? uniform(rng, 0.1, 0.9) : uniform(rng, 1.1, 8.0);
                     std::vector<double> u(3), v(3);
                     for (auto& x : u) x = uniform(rng, 0.1, 10.0);
                     for (auto& x : v) x = uniform(rng, 0.1, 10.0);
                     const FairnessSpec spec{beta, matching_lambda(beta)};
                     const bool a = beta_fairness(u, beta) > beta_fairness(v, beta);
                     const bool b = beta_lambda_fairness(u, spec) > beta_lambda_fairness(v, spec);
                     bad += a != b;
                   }
                   return std::pair{bad == 0, std::to_string(bad) + " disagreements"};
                 }});

  all.push_back({"fairness", "equitability is invariant to scaling the utilities",
                 "equitability-efficiency split",
                 [](Rng& rng, const VerifyOptions&) {
                   double worst = 0.0;
                   for (int k = 0; k < 200; ++k) {
                     const FairnessSpec spec{uniform(rng, 1.1, 5.0), uniform(rng, -2.0, 2.0)};
                     std::vector<double> u(4);
                     for (auto& x : u) x = uniform(rng, 0.1, 10.0);
                     auto scaled = u;
                     const double t = uniform(rng, 0.1, 10.0);
                     for (auto& x : scaled) x *= t;
                     worst = std::max(worst, rel_err(equitability_efficiency_split(scaled, spec).equitability,
                                                     equitability_efficiency_split(u, spec).equitability));
                   }
                   return std::pair{worst <= 1e-12, "max rel diff " + sci(worst)};
                 }});

  all.push_back({"fairness", "Pareto improvements raise beta-lambda fairness when (1-beta)(lambda-1/beta+1) >= 0",
                 "Pareto efficiency of beta-lambda fairness",
                 [](Rng& rng, const VerifyOptions&) {
                   int bad = 0;
                   for (int k = 0; k < 1000; ++k) {
                     const double beta = rng() % 2 ? uniform(rng, 0.1, 0.9) : uniform(rng, 1.1, 8.0);
                     const double sign = beta < 1.0 ? 1.0 : -1.0;
                     const FairnessSpec spec{beta, matching_lambda(beta) + sign * uniform(rng, 0.0, 2.0)};
                     std::vector<double> v(3), u(3);
                     for (auto& x : v) x = uniform(rng, 0.1, 10.0);
                     for (std::size_t j = 0; j < 3; ++j) u[j] = v[j] * (1.0 + uniform(rng, 0.0, 0.5));
                     u[rng() % 3] *= 1.01;
                     bad += !pareto_probe(spec, u, v);
                   }
                   return std::pair{bad == 0, std::to_string(bad) + " violations"};
                 }});

  all.push_back({"optimizer", "barrier optimum matches the grid oracle",
                 "interior-point optimization",
                 [](Rng&, const VerifyOptions&) {
                   const Instance toy{{{"r"}, {4.0}}, {{"t", 1, {1.0}, {0.5, 1.0}}}, 1.0};
                   const auto a = barrier_optimize(toy, PlanKind::kDifferentiated, {1.0, 2.0});
                   const auto ga = grid_oracle(toy, PlanKind::kDifferentiated, {1.0, 2.0},
                                               GridSpec::uniform(1, 0.3, 1.0, 1e-4));
                   const Instance ref = reference_instance();
                   const auto b = barrier_optimize(ref, PlanKind::kResource, {1.0, 2.0});
                   const auto gb = grid_oracle(ref, PlanKind::kResource, {1.0, 2.0},
                                               GridSpec::uniform(2, 0.05, 10.0, 0.05));
                   const bool ok = a.converged && b.converged &&
                                   a.objective >= ga.objective - 1e-3 * std::abs(ga.objective) &&
                                   b.objective >= gb.objective - 1e-3 * std::abs(gb.objective);
                   return std::pair{ok, "toy " + sci(a.objective) + " vs " + sci(ga.objective) +
                                            ", reference " + sci(b.objective) + " vs " +
                                            sci(gb.objective)};
                 }});

  all.push_back({"optimizer", "bundled optimum is the lowest feasible price for every nu",
                 "bundled optimum at the lowest feasible price",
                 [](Rng&, const VerifyOptions&) {
                   const Instance ref = reference_instance();
                   const double p = bundled_price_bisection(ref);
                   SolverConfig cfg;
                   cfg.tolerance = 1e-10;
                   double worst = 0.0;
                   for (double nu : {0.0, 1.0, 100.0}) {
                     const auto r = barrier_optimize(ref, PlanKind::kBundled, {nu, 2.0}, cfg);
                     worst = std::max(worst, rel_err(std::get<BundledPlan>(r.plan).price, p));
                   }
                   return std::pair{worst <= 1e-6, "max rel diff to bisection " + sci(worst)};
                 }});

  all.push_back({"optimizer", "differentiated >= resource >= bundled at the optimum",
                 "plan dominance",
                 [](Rng&, const VerifyOptions&) {
                   const Instance ref = reference_instance();
                   bool ok = true;
                   for (double nu : {0.0, 1.0}) {
                     const double b = barrier_optimize(ref, PlanKind::kBundled, {nu, 2.0}).objective;
                     const double r = barrier_optimize(ref, PlanKind::kResource, {nu, 2.0}).objective;
                     const double d =
                         barrier_optimize(ref, PlanKind::kDifferentiated, {nu, 2.0}).objective;
                     ok = ok && d >= r - 1e-6 * std::abs(r) && r >= b - 1e-6 * std::abs(b);
                   }
                   return std::pair{ok, "reference instance, nu in {0, 1}"};
                 }});

  all.push_back({"bounds", "fairness-revenue tradeoff bounds hold", "revenue lower bound from fairness",
                 [](Rng& rng, const VerifyOptions&) {
                   int bad = 0;
                   double collapse = 0.0;
                   for (int k = 0; k < 500; ++k) {
                     const Instance inst = random_instance(rng, 1 + rng() % 3, 1 + rng() % 3, true);
                     const auto kind = static_cast<PlanKind>(rng() % 3);
                     const PricingPlan plan = random_feasible_plan(inst, kind, rng);
                     for (double beta : {0.5, 2.0}) bad += !tradeoff_bound_check(inst, plan, beta).holds;
                   }
                   const Instance single{{{"r"}, {4.0}}, {{"t", 1, {1.0}, {0.5, 1.0}}}, 1.0};
                   for (double beta : {0.5, 2.0}) {
                     const auto c = tradeoff_bound_check(single, DifferentiatedPlan{{0.7}}, beta);
                     collapse = std::max(collapse, std::abs(c.slack) / std::max(1.0, std::abs(c.lhs)));
                   }
                   return std::pair{bad == 0 && collapse <= 1e-9,
                                    std::to_string(bad) + " violations, single-type |slack| " +
                                        sci(collapse)};
                 }});

  all.push_back({"deadline", "immediate deadlines decouple into single-interval solves",
                 "multi-interval program with deadlines",
                 [](Rng&, const VerifyOptions&) {
                   HorizonSpec spec;
                   spec.intervals.push_back({reference_instance(6, 6), {0, 0, 0}, 0.0});
                   spec.intervals.push_back({reference_instance(4, 8), {1, 1, 1}, 0.0});
                   const auto program = build_program(spec, 2.0, 1.0);
                   const auto res = solve_horizon(program);
                   const double f1 = barrier_optimize(spec.intervals[0].instance, PlanKind::kResource,
                                                      {0.0, 2.0}).fairness;
                   const double f2 = barrier_optimize(spec.intervals[1].instance, PlanKind::kResource,
                                                      {0.0, 2.0}).fairness;
                   const double err = rel_err(res.fairness, f1 + f2);
                   return std::pair{err <= 1e-6 && res.repairs.empty(), "rel diff " + sci(err)};
                 }});

  all.push_back({"deadline", "a tight interval defers work to a later idle interval",
                 "deadline constraints",
                 [](Rng&, const VerifyOptions&) {
                   HorizonSpec spec;
                   const Instance busy{{{"r"}, {1.0}}, {{"t", 1, {1.0}, {0.5, 1.0}}}, 1.0};
                   const Instance idle{{{"r"}, {1.0}}, {}, 1.0};
                   spec.intervals.push_back({busy, {1}, 0.0});
                   spec.intervals.push_back({idle, {}, 0.0});
                   const auto program = build_program(spec, 2.0, 1.0);
                   const auto res = solve_horizon(program);
                   const auto check = schedule_feasible(program, res.demand);
                   double deferred = 0.0;
                   for (std::size_t v = 0; v < program.variables.size(); ++v) {
                     if (program.variables[v].processed == 1) deferred += res.schedule.at(v);
                   }
                   const bool ok = res.feasible && deferred > 1e-6 && check.residual <= 1e-9;
                   return std::pair{ok, "deferred " + sci(deferred) + ", residual " +
                                            sci(check.residual)};
                 }});

  all.push_back({"trace", "k-means recovers planted clusters", "job clustering",
                 [](Rng& rng, const VerifyOptions& opt) {
                   const std::vector<Point> centers{{1.0, 1.0}, {6.0, 2.0}, {3.0, 7.0}};
                   std::normal_distribution<double> noise(0.0, 0.05);
                   std::vector<Point> points;
                   for (int k = 0; k < 300; ++k) {
                     const auto& c = centers[k % 3];
                     points.push_back({c[0] + noise(rng), c[1] + noise(rng)});
                   }
                   const auto model = kmeans(points, {3, 10, opt.seed, 300});
                   double worst = 0.0;
                   for (const auto& c : centers) {
                     double best = 1e300;
                     for (const auto& m : model.centroids) {
                       best = std::min(best, std::hypot(m[0] - c[0], m[1] - c[1]) / std::hypot(c[0], c[1]));
                     }
                     worst = std::max(worst, best);
                   }
                   bool monotone = true;
                   for (std::size_t i = 1; i < model.history.size(); ++i) {
                     monotone = monotone && model.history[i] <= model.history[i - 1] * (1 + 1e-12);
                   }
                   return std::pair{worst <= 0.05 && monotone,
                                    "max centroid rel err " + sci(worst)};
                 }});
  return all;
}

}  // namespace

const std::vector<std::string>& verify_scopes() {
  static const std::vector<std::string> scopes{"demand",   "pricing",  "fairness", "optimizer",
                                               "bounds",   "deadline", "trace"};
  return scopes;
}

std::vector<PropertyResult> run_verification(const VerifyOptions& options) {
  for (const auto& s : options.scopes) {
    if (std::find(verify_scopes().begin(), verify_scopes().end(), s) == verify_scopes().end()) {
      throw InputError("unknown verify scope '" + s + "'");
    }
  }
  std::vector<PropertyResult> results;
  for (const auto& check : checks()) {
    if (!options.scopes.empty() &&
        std::find(options.scopes.begin(), options.scopes.end(), check.scope) == options.scopes.end()) {
      continue;
    }
    // Each property gets its own stream so scope filtering does not change the samples.
    std::seed_seq seq(check.name.begin(), check.name.end());
    Rng rng(seq);
    rng.discard(options.seed);
    PropertyResult r{check.scope, check.name, check.anchor, false, ""};
    try {
      auto [ok, detail] = check.run(rng, options);
      r.passed = ok;
      r.detail = detail;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_report(const std::vector<PropertyResult>& results) {
  std::ostringstream os;
  std::size_t failed = 0;
  for (const auto& r : results) {
    failed += !r.passed;
    os << (r.passed ? "PASS" : "FAIL") << " [" << r.scope << "] " << r.name << " (" << r.anchor
       << "): " << r.detail << '\n';
  }
  os << results.size() - failed << "/" << results.size() << " properties passed\n";
  return os.str();
}

}  // namespace cloudprice
