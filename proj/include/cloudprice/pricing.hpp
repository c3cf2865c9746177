#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cloudprice/model.hpp"

namespace cloudprice {

/// One price per bundle of resources in a fixed ratio.
struct BundledPlan {
  std::vector<double> bundle;  // b_i > 0
  double price = 0.0;          // per bundle
};

/// Independent unit price per resource.
struct ResourcePlan {
  std::vector<double> prices;  // p_i >= 0, at least one positive
};

/// Operator-chosen per-job price for each user type.
struct DifferentiatedPlan {
  std::vector<double> prices;  // one per user type, > 0
};

using PricingPlan = std::variant<BundledPlan, ResourcePlan, DifferentiatedPlan>;

enum class PlanKind { kBundled, kResource, kDifferentiated };

std::string_view to_string(PlanKind kind);
PlanKind parse_plan_kind(std::string_view name);
PlanKind kind_of(const PricingPlan& plan);

/// Bundle with the same resource ratio as the capacities, scaled so the smallest entry is 1.
std::vector<double> capacity_proportional_bundle(const ResourceModel& resources);

void validate_plan(const Instance& instance, const PricingPlan& plan);

/// Number of bundles one job of `user` needs: max_i R_i / b_i.
double bundle_requirement(const UserType& user, const std::vector<double>& bundle);

/// Per-job cost of user type `user_index` under `plan`.
double per_job_cost(const Instance& instance, const PricingPlan& plan, std::size_t user_index);

/// Evaluation of a plan on an instance. Utilities, demand and costs are per user of each
/// type; usage and revenue already include the type counts.
struct Outcome {
  std::vector<double> demand;       // x*_j
  std::vector<double> cost;         // r_j
  std::vector<double> net_utility;  // U_j(x*_j) - r_j x*_j^gamma
  double revenue = 0.0;
  std::vector<double> usage;     // sum_j count_j R_ij x*_j
  std::vector<double> leftover;  // C_i - usage_i
  bool feasible = false;
  // Bundled plans only: bundles consumed and bundles available.
  std::optional<double> bundle_usage;
  std::optional<double> bundle_capacity;
  // Name of the first violated constraint when infeasible.
  std::string violation;
};

constexpr double kFeasibilityTolerance = 1e-9;

Outcome evaluate(const Instance& instance, const PricingPlan& plan);

/// Physical usage for an arbitrary per-user demand vector.
std::vector<double> usage_for(const Instance& instance, const std::vector<double>& demand);

struct DominantInfo {
  std::size_t resource = 0;  // 0-based index maximizing R_i / C_i; ties to the lowest index
  double share = 0.0;        // max_i R_i x / C_i
};

DominantInfo dominant_info(const UserType& user, const ResourceModel& resources, double demand);

/// Differentiated plan charging each type exactly its per-job cost under `plan`.
DifferentiatedPlan lift_resource_to_differentiated(const Instance& instance,
                                                   const ResourcePlan& plan);

/// Linear map from a plan's price vector to the per-job costs.
///
/// Every plan kind sets r = A^T theta for a fixed matrix A whose shape depends on the kind:
/// 1 x n for bundled (entries mu_j^gamma), m x n for resource (R_ij^gamma), n x n identity
/// for differentiated. The optimizer works in theta and uses A for the chain rule.
class PlanParameterization {
 public:
  PlanParameterization(const Instance& instance, PlanKind kind,
                       std::vector<double> bundle = {});

  PlanKind kind() const { return kind_; }
  std::size_t dimension() const { return rows_; }
  std::size_t num_types() const { return cols_; }
  double coefficient(std::size_t k, std::size_t j) const { return a_[k * cols_ + j]; }
  const std::vector<double>& bundle() const { return bundle_; }

  std::vector<double> costs(const std::vector<double>& theta) const;
  PricingPlan plan(const std::vector<double>& theta) const;
  std::vector<double> theta_of(const PricingPlan& plan) const;

  // Resource prices need an explicit nonnegativity barrier; the other kinds are kept
  // positive by the capacity constraints.
  bool needs_price_bounds() const { return kind_ == PlanKind::kResource; }

 private:
  PlanKind kind_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
  std::vector<double> bundle_;
};

}  // namespace cloudprice
