#include <doctest.h>

#include <cmath>

#include "cloudprice/error.hpp"
#include "cloudprice/pricing.hpp"

using namespace cloudprice;

namespace {

Instance two_by_two() {
  Instance inst;
  inst.resources = {{"cpu", "mem"}, {4.0, 8.0}};
  inst.user_types = {{"a", 2, {1.0, 0.5}, {0.5, 1.0}}, {"b", 1, {0.2, 2.0}, {0.6, 1.0}}};
  return inst;
}

}  // namespace

TEST_CASE("resource plan cost is the requirement-weighted price sum") {
  const Instance inst = two_by_two();
  const ResourcePlan plan{{1.0, 2.0}};
  CHECK(per_job_cost(inst, plan, 0) == doctest::Approx(2.0));
  CHECK(per_job_cost(inst, plan, 1) == doctest::Approx(4.2));
}

TEST_CASE("evaluate: usage, revenue and leftover from the demand closed form") {
  const Instance inst = two_by_two();
  const ResourcePlan plan{{1.0, 2.0}};
  const Outcome out = evaluate(inst, plan);
  // Type a: alpha 0.5, r 2 -> x = r^-2 = 0.25. Type b: alpha 0.6, r 4.2 -> x = 4.2^(-1/0.6).
  const double xa = 0.25, xb = std::pow(4.2, -1.0 / 0.6);
  CHECK(out.demand[0] == doctest::Approx(xa));
  CHECK(out.demand[1] == doctest::Approx(xb));
  CHECK(out.usage[0] == doctest::Approx(2 * 1.0 * xa + 0.2 * xb));
  CHECK(out.usage[1] == doctest::Approx(2 * 0.5 * xa + 2.0 * xb));
  CHECK(out.revenue == doctest::Approx(2 * 2.0 * xa + 4.2 * xb));
  CHECK(out.leftover[0] == doctest::Approx(4.0 - out.usage[0]));
  CHECK(out.feasible);
}

TEST_CASE("low prices violate capacity") {
  const Outcome out = evaluate(two_by_two(), ResourcePlan{{0.01, 0.01}});
  CHECK_FALSE(out.feasible);
  CHECK_FALSE(out.violation.empty());
}

TEST_CASE("bundled plan: per-job cost uses the number of bundles a job needs") {
  const Instance inst = two_by_two();
  const auto bundle = capacity_proportional_bundle(inst.resources);
  REQUIRE(bundle.size() == 2);
  CHECK(bundle[0] == doctest::Approx(1.0));
  CHECK(bundle[1] == doctest::Approx(2.0));
  CHECK(bundle_requirement(inst.user_types[1], bundle) == doctest::Approx(1.0));  // max(0.2, 1.0)
  const BundledPlan plan{bundle, 3.0};
  CHECK(per_job_cost(inst, plan, 0) == doctest::Approx(3.0));
  const Outcome out = evaluate(inst, plan);
  REQUIRE(out.bundle_capacity);
  CHECK(*out.bundle_capacity == doctest::Approx(4.0));
}

TEST_CASE("volume discount applies gamma to requirements") {
  Instance inst = two_by_two();
  inst.gamma = 0.9;
  const ResourcePlan plan{{1.0, 2.0}};
  CHECK(per_job_cost(inst, plan, 1) ==
        doctest::Approx(std::pow(0.2, 0.9) * 1.0 + std::pow(2.0, 0.9) * 2.0));
}

TEST_CASE("lifting a resource plan keeps every per-type quantity") {
  const Instance inst = two_by_two();
  const ResourcePlan plan{{1.5, 0.7}};
  const Outcome a = evaluate(inst, plan);
  const Outcome b = evaluate(inst, lift_resource_to_differentiated(inst, plan));
  CHECK(a.revenue == doctest::Approx(b.revenue));
  CHECK(a.usage[1] == doctest::Approx(b.usage[1]));
}

TEST_CASE("parameterization is affine: costs = A^T theta") {
  const Instance inst = two_by_two();
  const PlanParameterization param(inst, PlanKind::kResource);
  const std::vector<double> theta{1.0, 2.0};
  const auto costs = param.costs(theta);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(costs[j] == doctest::Approx(per_job_cost(inst, param.plan(theta), j)));
  }
  CHECK(param.theta_of(param.plan(theta)) == theta);
}

TEST_CASE("dominant resource share") {
  const Instance inst = two_by_two();
  const auto d = dominant_info(inst.user_types[1], inst.resources, 2.0);
  CHECK(d.resource == 1);
  CHECK(d.share == doctest::Approx(0.5));
}

TEST_CASE("plan validation and parsing") {
  const Instance inst = two_by_two();
  CHECK_THROWS_AS(validate_plan(inst, ResourcePlan{{1.0}}), InputError);
  CHECK_THROWS_AS(validate_plan(inst, DifferentiatedPlan{{1.0, -1.0}}), InputError);
  CHECK(parse_plan_kind("bundled") == PlanKind::kBundled);
  CHECK_THROWS_AS(parse_plan_kind("flat"), InputError);
}

TEST_CASE("zero capacity is allowed but makes any positive demand infeasible") {
  Instance inst = two_by_two();
  inst.resources.capacities[0] = 0.0;
  CHECK_NOTHROW(validate(inst));
  CHECK_FALSE(evaluate(inst, ResourcePlan{{100.0, 100.0}}).feasible);
}
