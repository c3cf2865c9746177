#include "cloudprice/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cloudprice/error.hpp"

namespace cloudprice {

std::string_view to_string(PlanKind kind) {
  switch (kind) {
    case PlanKind::kBundled:
      return "bundled";
    case PlanKind::kResource:
      return "resource";
    case PlanKind::kDifferentiated:
      return "differentiated";
  }
  return "unknown";
}

PlanKind parse_plan_kind(std::string_view name) {
  if (name == "bundled") return PlanKind::kBundled;
  if (name == "resource") return PlanKind::kResource;
  if (name == "differentiated") return PlanKind::kDifferentiated;
  throw InputError("unknown plan kind '" + std::string(name) +
                   "' (expected bundled, resource or differentiated)");
}

PlanKind kind_of(const PricingPlan& plan) {
  return static_cast<PlanKind>(plan.index());
}

std::vector<double> capacity_proportional_bundle(const ResourceModel& resources) {
  double smallest = std::numeric_limits<double>::infinity();
  for (double c : resources.capacities) smallest = std::min(smallest, c);
  if (!(smallest > 0.0)) {
    throw InputError("capacity-proportional bundle needs strictly positive capacities");
  }
  std::vector<double> bundle;
  bundle.reserve(resources.size());
  for (double c : resources.capacities) bundle.push_back(c / smallest);
  return bundle;
}

namespace {

void check_bundle(const std::vector<double>& bundle, std::size_t m) {
  if (bundle.size() != m) {
    throw InputError("bundle: expected " + std::to_string(m) + " entries");
  }
  for (double b : bundle) {
    if (!(b > 0.0) || !std::isfinite(b)) throw InputError("bundle: entries must be positive");
  }
}

struct PlanValidator {
  const Instance& instance;

  void operator()(const BundledPlan& p) const {
    check_bundle(p.bundle, instance.num_resources());
    if (!(p.price > 0.0) || !std::isfinite(p.price)) {
      throw InputError("bundled price must be positive");
    }
  }
  void operator()(const ResourcePlan& p) const {
    if (p.prices.size() != instance.num_resources()) {
      throw InputError("resource prices: expected one per resource");
    }
    bool any_positive = false;
    for (double v : p.prices) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("resource prices must be >= 0");
      any_positive = any_positive || v > 0.0;
    }
    if (!any_positive) throw InputError("resource prices: at least one must be positive");
  }
  void operator()(const DifferentiatedPlan& p) const {
    if (p.prices.size() != instance.num_types()) {
      throw InputError("differentiated prices: expected one per user type");
    }
    for (double v : p.prices) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw InputError("differentiated prices must be positive");
      }
    }
  }
};

}  // namespace

void validate_plan(const Instance& instance, const PricingPlan& plan) {
  std::visit(PlanValidator{instance}, plan);
}

double bundle_requirement(const UserType& user, const std::vector<double>& bundle) {
  check_bundle(bundle, user.requirements.size());
  double mu = 0.0;
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    mu = std::max(mu, user.requirements[i] / bundle[i]);
  }
  return mu;
}

double per_job_cost(const Instance& instance, const PricingPlan& plan, std::size_t user_index) {
  const UserType& user = instance.user_types.at(user_index);
  const double g = instance.gamma;
  double cost = 0.0;
  if (const auto* b = std::get_if<BundledPlan>(&plan)) {
    cost = std::pow(bundle_requirement(user, b->bundle), g) * b->price;
  } else if (const auto* r = std::get_if<ResourcePlan>(&plan)) {
    for (std::size_t i = 0; i < r->prices.size(); ++i) {
      if (user.requirements[i] > 0.0) cost += r->prices[i] * std::pow(user.requirements[i], g);
    }
  } else {
    cost = std::get<DifferentiatedPlan>(plan).prices.at(user_index);
  }
  if (!(cost > 0.0)) {
    throw InputError("user type '" + user.label +
                     "' has zero per-job cost; its demand is unbounded");
  }
  return cost;
}

std::vector<double> usage_for(const Instance& instance, const std::vector<double>& demand) {
  if (demand.size() != instance.num_types()) throw InputError("demand: one entry per type");
  std::vector<double> usage(instance.num_resources(), 0.0);
  for (std::size_t j = 0; j < demand.size(); ++j) {
    const auto& user = instance.user_types[j];
    for (std::size_t i = 0; i < usage.size(); ++i) {
      usage[i] += user.count * user.requirements[i] * demand[j];
    }
  }
  return usage;
}

Outcome evaluate(const Instance& instance, const PricingPlan& plan) {
  validate_plan(instance, plan);
  const std::size_t n = instance.num_types();
  const double g = instance.gamma;

  Outcome out;
  out.demand.resize(n);
  out.cost.resize(n);
  out.net_utility.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& user = instance.user_types[j];
    const double r = per_job_cost(instance, plan, j);
    const double x = optimal_demand(user.utility, r, g);
    out.cost[j] = r;
    out.demand[j] = x;
    out.net_utility[j] = net_utility(user.utility, r, g);
    out.revenue += user.count * r * std::pow(x, g);
  }

  out.usage = usage_for(instance, out.demand);
  out.leftover.resize(out.usage.size());
  out.feasible = true;
  for (std::size_t i = 0; i < out.usage.size(); ++i) {
    const double cap = instance.resources.capacities[i];
    out.leftover[i] = cap - out.usage[i];
    if (out.usage[i] > cap + kFeasibilityTolerance && out.feasible) {
      out.feasible = false;
      out.violation = "capacity of resource '" + instance.resources.names[i] + "'";
    }
  }

  if (const auto* b = std::get_if<BundledPlan>(&plan)) {
    double bundles = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& user = instance.user_types[j];
      bundles += user.count * bundle_requirement(user, b->bundle) * out.demand[j];
    }
    double available = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b->bundle.size(); ++i) {
      available = std::min(available, instance.resources.capacities[i] / b->bundle[i]);
    }
    out.bundle_usage = bundles;
    out.bundle_capacity = available;
    if (bundles > available + kFeasibilityTolerance && out.feasible) {
      out.feasible = false;
      out.violation = "bundle capacity";
    }
  }
  return out;
}

DominantInfo dominant_info(const UserType& user, const ResourceModel& resources, double demand) {
  if (user.requirements.size() != resources.size()) {
    throw InputError("requirements and resources differ in length");
  }
  DominantInfo info;
  double best = -1.0;
  for (std::size_t i = 0; i < resources.size(); ++i) {
    const double cap = resources.capacities[i];
    if (!(cap > 0.0)) throw InputError("dominant resource needs positive capacities");
    const double ratio = user.requirements[i] / cap;
    if (ratio > best) {
      best = ratio;
      info.resource = i;
    }
  }
  info.share = best * demand;
  return info;
}

DifferentiatedPlan lift_resource_to_differentiated(const Instance& instance,
                                                   const ResourcePlan& plan) {
  DifferentiatedPlan lifted;
  lifted.prices.reserve(instance.num_types());
  for (std::size_t j = 0; j < instance.num_types(); ++j) {
    lifted.prices.push_back(per_job_cost(instance, plan, j));
  }
  return lifted;
}

PlanParameterization::PlanParameterization(const Instance& instance, PlanKind kind,
                                           std::vector<double> bundle)
    : kind_(kind), cols_(instance.num_types()) {
  const double g = instance.gamma;
  switch (kind) {
    case PlanKind::kBundled: {
      bundle_ = bundle.empty() ? capacity_proportional_bundle(instance.resources)
                               : std::move(bundle);
      check_bundle(bundle_, instance.num_resources());
      rows_ = 1;
      a_.resize(cols_);
      for (std::size_t j = 0; j < cols_; ++j) {
        a_[j] = std::pow(bundle_requirement(instance.user_types[j], bundle_), g);
      }
      break;
    }
    case PlanKind::kResource: {
      rows_ = instance.num_resources();
      a_.assign(rows_ * cols_, 0.0);
      for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
          const double req = instance.user_types[j].requirements[i];
          a_[i * cols_ + j] = req > 0.0 ? std::pow(req, g) : 0.0;
        }
      }
      break;
    }
    case PlanKind::kDifferentiated: {
      rows_ = cols_;
      a_.assign(rows_ * cols_, 0.0);
      for (std::size_t j = 0; j < cols_; ++j) a_[j * cols_ + j] = 1.0;
      break;
    }
  }
}

std::vector<double> PlanParameterization::costs(const std::vector<double>& theta) const {
  std::vector<double> r(cols_, 0.0);
  for (std::size_t k = 0; k < rows_; ++k) {
    for (std::size_t j = 0; j < cols_; ++j) r[j] += a_[k * cols_ + j] * theta[k];
  }
  return r;
}

PricingPlan PlanParameterization::plan(const std::vector<double>& theta) const {
  if (theta.size() != rows_) throw InputError("price vector has the wrong dimension");
  switch (kind_) {
    case PlanKind::kBundled:
      return BundledPlan{bundle_, theta[0]};
    case PlanKind::kResource:
      return ResourcePlan{theta};
    case PlanKind::kDifferentiated:
      break;
  }
  return DifferentiatedPlan{theta};
}

std::vector<double> PlanParameterization::theta_of(const PricingPlan& plan) const {
  if (kind_of(plan) != kind_) throw InputError("plan kind does not match parameterization");
  if (const auto* b = std::get_if<BundledPlan>(&plan)) return {b->price};
  if (const auto* r = std::get_if<ResourcePlan>(&plan)) return r->prices;
  return std::get<DifferentiatedPlan>(plan).prices;
}

}  // namespace cloudprice
