#include "cloudprice/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cloudprice/error.hpp"
#include "cloudprice/fairness.hpp"

namespace cloudprice {

void validate(const ObjectiveSpec& spec) {
  if (!(spec.nu >= 0.0) || !std::isfinite(spec.nu)) throw InputError("nu must be >= 0");
  if (!(spec.beta > 0.0) || spec.beta == 1.0 || !std::isfinite(spec.beta)) {
    throw InputError("beta must be positive and != 1");
  }
}

void validate(const SolverConfig& config) {
  if (!(config.tolerance > 0.0)) throw InputError("solver tolerance must be positive");
  if (!(config.barrier_update > 1.0)) throw InputError("barrier update must exceed 1");
  if (!(config.initial_barrier > 0.0)) throw InputError("initial barrier must be positive");
  if (config.max_newton_iterations < 1 || config.max_outer_iterations < 1) {
    throw InputError("iteration limits must be positive");
  }
  if (!(config.fd_step > 0.0)) throw InputError("finite-difference step must be positive");
}

double objective(const Instance& instance, const PricingPlan& plan, const ObjectiveSpec& spec) {
  validate(spec);
  const Outcome out = evaluate(instance, plan);
  if (!out.feasible) throw InfeasibleError("plan violates " + out.violation);
  for (std::size_t j = 0; j < out.net_utility.size(); ++j) {
    if (!(out.net_utility[j] > 0.0)) {
      throw InputError("user type '" + instance.user_types[j].label + "' has zero net utility");
    }
  }
  const auto utilities = expand_by_count(instance, out.net_utility);
  return spec.nu * out.revenue + beta_fairness(utilities, spec.beta);
}

double concavity_weight_bound(const Instance& instance, double beta, double gamma) {
  if (!(beta > 1.0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& user : instance.user_types) {
    const double a = user.utility.alpha;
    const double c = user.utility.c;
    if (a >= 1.0 || !(gamma > 1.0 - a)) return 0.0;
    const double margin = beta * (1.0 - a) - gamma;
    if (!(margin > 0.0)) return 0.0;

    double tightest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < user.requirements.size(); ++i) {
      const double req = user.requirements[i];
      if (req > 0.0) {
        tightest = std::min(tightest, instance.resources.capacities[i] / (user.count * req));
      }
    }
    if (!(tightest > 0.0)) return 0.0;

    const double w = gamma / (1.0 - a) - 1.0;
    const double log_bound = (1.0 - beta) * std::log(w) + beta * std::log(gamma / c) +
                             std::log(margin / gamma) + beta * (a - 1.0) * std::log(tightest);
    best = std::min(best, std::exp(log_bound));
  }
  return std::isfinite(best) ? best : 0.0;
}

namespace {

struct Constraint {
  std::string name;
  double capacity = 0.0;
  std::vector<double> weight;  // per type, already multiplied by the type count
};

// Barrier subproblem for one plan kind. Points are only ever built from strictly feasible
// prices; `at` reports whether a price vector lies in that domain.
class BarrierProblem {
 public:
  struct Point {
    bool ok = false;
    std::vector<CostResponse> resp;
    std::vector<double> slack;
    double objective = 0.0;
  };

  BarrierProblem(const Instance& instance, PlanKind kind, const ObjectiveSpec& spec,
                 std::vector<double> bundle)
      : instance_(instance), param_(instance, kind, std::move(bundle)), spec_(spec) {
    const std::size_t n = instance.num_types();
    a_.resize(static_cast<Eigen::Index>(param_.dimension()), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < param_.dimension(); ++k) {
      for (std::size_t j = 0; j < n; ++j) a_(k, j) = param_.coefficient(k, j);
    }

    if (kind == PlanKind::kBundled) {
      Constraint c{"bundle capacity", std::numeric_limits<double>::infinity(), {}};
      const auto& b = param_.bundle();
      for (std::size_t i = 0; i < b.size(); ++i) {
        c.capacity = std::min(c.capacity, instance.resources.capacities[i] / b[i]);
      }
      for (const auto& user : instance.user_types) {
        c.weight.push_back(user.count * bundle_requirement(user, b));
      }
      constraints_.push_back(std::move(c));
    } else {
      for (std::size_t i = 0; i < instance.num_resources(); ++i) {
        Constraint c{"capacity of resource '" + instance.resources.names[i] + "'",
                     instance.resources.capacities[i],
                     {}};
        bool used = false;
        for (const auto& user : instance.user_types) {
          c.weight.push_back(user.count * user.requirements[i]);
          used = used || user.requirements[i] > 0.0;
        }
        if (used) constraints_.push_back(std::move(c));
      }
    }
  }

  const PlanParameterization& param() const { return param_; }
  std::size_t dimension() const { return param_.dimension(); }

  std::size_t barrier_terms() const {
    return constraints_.size() + (param_.needs_price_bounds() ? dimension() : 0);
  }

  Point at(const std::vector<double>& theta) const {
    Point p;
    for (double v : theta) {
      if (!(v > 0.0) || !std::isfinite(v)) return p;
    }
    const auto costs = param_.costs(theta);
    const double g = instance_.gamma;
    p.resp.reserve(costs.size());
    for (std::size_t j = 0; j < costs.size(); ++j) {
      if (!(costs[j] > 0.0) || !std::isfinite(costs[j])) return p;
      const auto r = cost_response(instance_.user_types[j].utility, costs[j], g);
      if (!std::isfinite(r.jobs) || !(r.utility > 0.0) || !std::isfinite(r.utility)) return p;
      p.resp.push_back(r);
    }
    for (const auto& c : constraints_) {
      double used = 0.0;
      for (std::size_t j = 0; j < p.resp.size(); ++j) used += c.weight[j] * p.resp[j].jobs;
      const double s = c.capacity - used;
      if (!(s > 0.0)) return p;
      p.slack.push_back(s);
    }
    const double b = spec_.beta;
    double obj = 0.0;
    for (std::size_t j = 0; j < p.resp.size(); ++j) {
      const auto& r = p.resp[j];
      const double fair = std::exp((1.0 - b) * std::log(r.utility)) / (1.0 - b);
      obj += instance_.user_types[j].count * (spec_.nu * r.payment + fair);
    }
    if (!std::isfinite(obj)) return p;
    p.objective = obj;
    p.ok = true;
    return p;
  }

  double phi(const Point& p, const std::vector<double>& theta, double t) const {
    double v = -t * p.objective;
    for (double s : p.slack) v -= std::log(s);
    if (param_.needs_price_bounds()) {
      for (double x : theta) v -= std::log(x);
    }
    return v;
  }

  Eigen::VectorXd gradient(const Point& p, const std::vector<double>& theta, double t) const {
    const std::size_t n = p.resp.size();
    Eigen::VectorXd gr = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    const double b = spec_.beta;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& r = p.resp[j];
      const double count = instance_.user_types[j].count;
      const double dfair = std::exp(-b * std::log(r.utility)) * r.d_utility;
      gr(j) = -t * count * (spec_.nu * r.d_payment + dfair);
      for (std::size_t c = 0; c < constraints_.size(); ++c) {
        gr(j) += constraints_[c].weight[j] * r.d_jobs / p.slack[c];
      }
    }
    Eigen::VectorXd g = a_ * gr;
    if (param_.needs_price_bounds()) {
      for (std::size_t k = 0; k < theta.size(); ++k) g(k) -= 1.0 / theta[k];
    }
    return g;
  }

  // With `convexify`, each type's objective curvature enters with its absolute value. The
  // barrier part is already positive semidefinite in the costs, so the result is a
  // positive definite model even where the objective is not concave.
  Eigen::MatrixXd hessian(const Point& p, const std::vector<double>& theta, double t,
                          bool convexify = false) const {
    const auto n = static_cast<Eigen::Index>(p.resp.size());
    Eigen::MatrixXd hr = Eigen::MatrixXd::Zero(n, n);
    const double b = spec_.beta;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& r = p.resp[j];
      const double count = instance_.user_types[j].count;
      const double lu = std::log(r.utility);
      const double d2fair = -b * std::exp((-b - 1.0) * lu) * r.d_utility * r.d_utility +
                            std::exp(-b * lu) * r.d2_utility;
      const double curvature = -t * count * (spec_.nu * r.d2_payment + d2fair);
      hr(j, j) += convexify ? std::abs(curvature) : curvature;
    }
    for (std::size_t c = 0; c < constraints_.size(); ++c) {
      const double s = p.slack[c];
      Eigen::VectorXd v(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        v(j) = constraints_[c].weight[j] * p.resp[j].d_jobs;
        hr(j, j) += constraints_[c].weight[j] * p.resp[j].d2_jobs / s;
      }
      hr.noalias() += v * v.transpose() / (s * s);
    }
    Eigen::MatrixXd h = a_ * hr * a_.transpose();
    if (param_.needs_price_bounds()) {
      for (std::size_t k = 0; k < theta.size(); ++k) h(k, k) += 1.0 / (theta[k] * theta[k]);
    }
    return h;
  }

  // Central differences of the analytic gradient, one-sided near the domain boundary.
  Eigen::MatrixXd fd_hessian(const std::vector<double>& theta, double t, double rel_step) const {
    const auto d = static_cast<Eigen::Index>(theta.size());
    Eigen::MatrixXd h(d, d);
    const Eigen::VectorXd g0 = gradient(at(theta), theta, t);
    for (Eigen::Index k = 0; k < d; ++k) {
      const double step = rel_step * std::max(std::abs(theta[k]), 1e-12);
      auto plus = theta, minus = theta;
      plus[k] += step;
      minus[k] -= step;
      const Point pp = at(plus), pm = at(minus);
      if (pp.ok && pm.ok) {
        h.col(k) = (gradient(pp, plus, t) - gradient(pm, minus, t)) / (2.0 * step);
      } else if (pp.ok) {
        h.col(k) = (gradient(pp, plus, t) - g0) / step;
      } else if (pm.ok) {
        h.col(k) = (g0 - gradient(pm, minus, t)) / step;
      } else {
        h.col(k).setZero();
        h(k, k) = 1.0;
      }
    }
    return 0.5 * (h + h.transpose());
  }

  // Smallest uniform price s*1 at which every constraint uses at most half its capacity.
  std::vector<double> strictly_feasible_start() const {
    for (const auto& c : constraints_) {
      if (!(c.capacity > 0.0)) throw InfeasibleError("no strictly feasible price: " + c.name + " is zero");
    }
    const std::size_t n = instance_.num_types();
    auto half_loaded = [&](double s) {
      const auto costs = param_.costs(std::vector<double>(dimension(), s));
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) {
        if (!(costs[j] > 0.0)) return false;
        x[j] = optimal_demand(instance_.user_types[j].utility, costs[j], instance_.gamma);
      }
      for (const auto& c : constraints_) {
        double used = 0.0;
        for (std::size_t j = 0; j < n; ++j) used += c.weight[j] * x[j];
        if (!(used <= 0.5 * c.capacity)) return false;
      }
      return true;
    };

    double lo = 1.0, hi = 1.0;
    if (half_loaded(1.0)) {
      while (half_loaded(lo) && lo > 1e-250) lo *= 0.5;
      hi = 2.0 * lo;
    } else {
      while (!half_loaded(hi)) {
        hi *= 2.0;
        if (hi > 1e250) throw InfeasibleError("no strictly feasible price: capacity unreachable");
      }
      lo = 0.5 * hi;
    }
    for (int it = 0; it < 100; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (mid <= lo || mid >= hi) break;
      (half_loaded(mid) ? hi : lo) = mid;
    }
    std::vector<double> theta(dimension(), hi);
    if (!at(theta).ok) {
      throw InfeasibleError(
          "no strictly feasible price with positive net utility for every user type");
    }
    return theta;
  }

 private:
  const Instance& instance_;
  PlanParameterization param_;
  ObjectiveSpec spec_;
  Eigen::MatrixXd a_;
  std::vector<Constraint> constraints_;
};

Eigen::VectorXd newton_direction(const Eigen::MatrixXd& h, const Eigen::VectorXd& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd d = -llt.solve(g);
    if (d.allFinite() && d.dot(g) < 0.0) return d;
  }
  // Indefinite model: keep the eigenvectors, use |eigenvalue| floored relative to the
  // largest one. Negative-curvature directions then become descent directions with a
  // sensible length instead of being swamped by a diagonal shift.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseAbs();
  const double floor = std::max(1e-12, 1e-10 * lambda.maxCoeff());
  const Eigen::MatrixXd& v = eig.eigenvectors();
  const Eigen::VectorXd coeff = v.transpose() * g;
  Eigen::VectorXd d = -v * coeff.cwiseQuotient(lambda.cwiseMax(floor));
  if (d.allFinite() && d.dot(g) < 0.0) return d;
  return -g / std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
}

std::vector<double> step(const std::vector<double>& theta, const Eigen::VectorXd& d,
                         double alpha) {
  std::vector<double> out(theta);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += alpha * d(static_cast<Eigen::Index>(k));
  return out;
}

enum class CenterStatus { kCentered, kStalled, kIterationLimit };

CenterStatus center(const BarrierProblem& problem, std::vector<double>& theta, double t,
                    const SolverConfig& config, int& newton_steps, std::string& note) {
  constexpr double kDecrementTol = 1e-10;  // lambda^2 / 2
  constexpr double kNoiseFloor = 1e-6;
  constexpr double kArmijo = 1e-4;

  for (int it = 0; it < config.max_newton_iterations; ++it) {
    const auto point = problem.at(theta);
    const Eigen::VectorXd g = problem.gradient(point, theta, t);
    Eigen::VectorXd d;
    bool modified = !config.analytic_hessian;
    if (config.analytic_hessian) {
      const Eigen::MatrixXd h = problem.hessian(point, theta, t);
      Eigen::LLT<Eigen::MatrixXd> llt(h);
      if (llt.info() == Eigen::Success) d = -llt.solve(g);
      if (d.size() == 0 || !d.allFinite() || !(d.dot(g) < 0.0)) {
        d = newton_direction(problem.hessian(point, theta, t, true), g);
        modified = true;
      }
    } else {
      d = newton_direction(problem.fd_hessian(theta, t, config.fd_step), g);
    }
    const double slope = g.dot(d);
    const double decrement = -0.5 * slope;
    if (decrement <= kDecrementTol) return CenterStatus::kCentered;

    const double phi0 = problem.phi(point, theta, t);
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(phi0) + 1.0);
    double alpha = 1.0;
    bool accepted = false;
    bool progressed = false;
    while (alpha > 1e-18) {
      auto candidate = step(theta, d, alpha);
      const auto cp = problem.at(candidate);
      if (cp.ok) {
        const double value = problem.phi(cp, candidate, t);
        if (value <= phi0 + kArmijo * alpha * slope + noise) {
          progressed = value < phi0 && candidate != theta;
          theta = std::move(candidate);
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    // A step accepted only through the rounding allowance means phi is flat to machine
    // precision here.
    accepted = accepted && progressed;
    if (accepted && modified && alpha == 1.0) {
      // The modified model overstates curvature along nonconcave directions; stretch the
      // step while the barrier function keeps falling.
      double best = problem.phi(problem.at(theta), theta, t);
      for (double stretch = 2.0; stretch <= 1048576.0; stretch *= 2.0) {
        auto candidate = step(theta, d, stretch - stretch / 2.0);
        const auto cp = problem.at(candidate);
        if (!cp.ok) break;
        const double value = problem.phi(cp, candidate, t);
        if (!(value < best)) break;
        best = value;
        theta = std::move(candidate);
        alpha = stretch;
      }
    }
    ++newton_steps;
    if (!accepted) {
      if (decrement <= std::max(kNoiseFloor, 1e3 * noise)) return CenterStatus::kCentered;
      std::ostringstream os;
      os << "line search stalled at t=" << t << " with Newton decrement " << decrement;
      note = os.str();
      return CenterStatus::kStalled;
    }
  }
  std::ostringstream os;
  os << "centering hit " << config.max_newton_iterations << " Newton steps at t=" << t;
  note = os.str();
  return CenterStatus::kIterationLimit;
}

SolveResult finish(const Instance& instance, const PricingPlan& plan, const ObjectiveSpec& spec) {
  SolveResult res;
  res.plan = plan;
  res.outcome = evaluate(instance, plan);
  res.revenue = res.outcome.revenue;
  const auto utilities = expand_by_count(instance, res.outcome.net_utility);
  res.fairness = beta_fairness(utilities, spec.beta);
  res.objective = spec.nu * res.revenue + res.fairness;
  return res;
}

}  // namespace

SolveResult barrier_optimize(const Instance& instance, PlanKind kind, const ObjectiveSpec& spec,
                             const SolverConfig& config, std::vector<double> bundle) {
  validate(instance);
  validate(spec);
  validate(config);
  if (instance.user_types.empty()) throw InputError("instance has no user types");

  const BarrierProblem problem(instance, kind, spec, std::move(bundle));
  std::vector<double> theta = problem.strictly_feasible_start();
  const double terms = static_cast<double>(problem.barrier_terms());

  // Large objectives start far from the central path at t=initial_barrier; shrink t so the
  // barrier and objective terms start comparable.
  double t = config.initial_barrier;
  if (const auto start = problem.at(theta); start.ok && std::abs(start.objective) > terms) {
    t *= terms / std::abs(start.objective);
  }
  int newton_steps = 0;
  int outer = 0;
  bool converged = false;
  std::string note;
  for (; outer < config.max_outer_iterations; ++outer) {
    const auto status = center(problem, theta, t, config, newton_steps, note);
    if (status != CenterStatus::kCentered) break;
    if (terms / t <= config.tolerance) {
      converged = true;
      break;
    }
    t *= config.barrier_update;
  }
  if (!converged && note.empty()) note = "outer iteration limit reached";

  SolveResult res = finish(instance, problem.param().plan(theta), spec);
  res.iterations = newton_steps;
  res.outer_iterations = outer + 1;
  res.converged = converged;
  res.gap = terms / t;
  res.diagnostics = converged ? "ok" : note;
  return res;
}

double bundled_price_bisection(const Instance& instance, std::vector<double> bundle) {
  validate(instance);
  if (bundle.empty()) bundle = capacity_proportional_bundle(instance.resources);
  double available = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    available = std::min(available, instance.resources.capacities[i] / bundle.at(i));
  }
  if (!(available > 0.0)) throw InfeasibleError("bundle capacity is zero");

  std::vector<double> mu;
  for (const auto& user : instance.user_types) mu.push_back(bundle_requirement(user, bundle));
  auto excess = [&](double price) {
    double used = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      const auto& user = instance.user_types[j];
      const double cost = std::pow(mu[j], instance.gamma) * price;
      used += user.count * mu[j] * optimal_demand(user.utility, cost, instance.gamma);
    }
    return used - available;
  };

  double lo = 1.0, hi = 1.0;
  while (excess(lo) < 0.0) lo *= 0.5;
  while (excess(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 300; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(excess(lo)) < std::abs(excess(hi)) ? lo : hi;
}

std::vector<double> GridSpec::uniform_axis(double first, double last, double step) {
  if (!(step > 0.0) || last < first) throw InputError("grid axis: need step > 0 and last >= first");
  std::vector<double> axis;
  const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9)) + 1;
  axis.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) axis.push_back(first + static_cast<double>(k) * step);
  return axis;
}

GridSpec GridSpec::uniform(std::size_t dims, double first, double last, double step) {
  GridSpec spec;
  spec.axes.assign(dims, uniform_axis(first, last, step));
  return spec;
}

SolveResult grid_oracle(const Instance& instance, PlanKind kind, const ObjectiveSpec& spec,
                        const GridSpec& grid, std::vector<double> bundle) {
  validate(instance);
  validate(spec);
  const PlanParameterization param(instance, kind, std::move(bundle));
  const std::size_t dims = param.dimension();
  if (dims > 3) throw InputError("grid oracle supports at most 3 price dimensions");
  if (grid.axes.size() != dims) throw InputError("grid needs one axis per price dimension");
  for (const auto& axis : grid.axes) {
    if (axis.empty()) throw InputError("grid axis is empty");
  }

  std::vector<std::size_t> index(dims, 0);
  std::vector<double> theta(dims);
  std::optional<std::vector<double>> best_theta;
  double best = -std::numeric_limits<double>::infinity();
  int visited = 0;
  while (true) {
    for (std::size_t k = 0; k < dims; ++k) theta[k] = grid.axes[k][index[k]];
    ++visited;
    try {
      const double value = objective(instance, param.plan(theta), spec);
      if (value > best) {
        best = value;
        best_theta = theta;
      }
    } catch (const InputError&) {
    } catch (const InfeasibleError&) {
    }
    // Odometer increment, last axis fastest.
    std::size_t k = dims;
    bool wrapped = true;
    while (k > 0) {
      --k;
      if (++index[k] < grid.axes[k].size()) {
        wrapped = false;
        break;
      }
      index[k] = 0;
    }
    if (wrapped) break;
  }
  if (!best_theta) throw InfeasibleError("grid oracle: no feasible grid point");

  SolveResult res = finish(instance, param.plan(*best_theta), spec);
  res.iterations = visited;
  res.converged = true;
  res.diagnostics = "grid";
  return res;
}

DiscountSearchResult discount_line_search(const Instance& instance, PlanKind kind,
                                          const ObjectiveSpec& spec,
                                          const std::vector<double>& gamma_grid,
                                          const SolverConfig& config,
                                          std::vector<double> bundle) {
  if (gamma_grid.empty()) throw InputError("discount grid is empty");
  DiscountSearchResult out;
  bool found = false;
  for (double g : gamma_grid) {
    DiscountPoint point;
    point.gamma = g;
    try {
      const Instance at_g = with_gamma(instance, g);
      SolveResult res = barrier_optimize(at_g, kind, spec, config, bundle);
      point.objective = res.objective;
      point.ok = res.converged;
      if (!res.converged) point.error = res.diagnostics;
      if (point.ok && (!found || res.objective > out.best.objective)) {
        out.best = std::move(res);
        out.best_gamma = g;
        found = true;
      }
    } catch (const std::exception& e) {
      point.error = e.what();
    }
    out.points.push_back(std::move(point));
  }
  if (!found) throw InfeasibleError("discount line search: no grid point solved");
  return out;
}

BoundCheck tradeoff_bound_check(const Instance& instance, const PricingPlan& plan, double beta) {
  if (!(beta > 0.0) || beta == 1.0) throw InputError("beta must be positive and != 1");
  double alpha_min = 1.0;
  for (const auto& user : instance.user_types) {
    if (user.utility.alpha >= 1.0) {
      throw InputError("tradeoff bounds need alpha < 1 for every user type");
    }
    alpha_min = std::min(alpha_min, user.utility.alpha);
  }
  const Outcome out = evaluate(instance, plan);
  const auto utilities = expand_by_count(instance, out.net_utility);
  const double fairness = beta_fairness(utilities, beta);
  const double g = instance.gamma;

  BoundCheck check;
  if (beta > 1.0) {
    double weight = 0.0;
    for (const auto& user : instance.user_types) {
      const double a = user.utility.alpha;
      weight += user.count * (1.0 - a) / (g + a - 1.0);
    }
    check.lhs = out.revenue;
    check.rhs = std::pow(fairness * (1.0 - beta), 1.0 / (1.0 - beta)) * weight;
  } else {
    check.lhs = fairness;
    check.rhs = std::pow(out.revenue, 1.0 - beta) / (1.0 - beta) *
                std::pow(g / (1.0 - alpha_min) - 1.0, 1.0 - beta);
  }
  check.slack = check.lhs - check.rhs;
  check.holds = check.slack >= -1e-9 * std::max(1.0, std::abs(check.rhs));
  return check;
}

}  // namespace cloudprice
