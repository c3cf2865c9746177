#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cloudprice/demand.hpp"

namespace cloudprice {

/// Named resources and their capacities.
///
/// Capacities may be zero (a resource that is unavailable in some interval), in which
/// case any plan with positive demand for it is infeasible.
struct ResourceModel {
  std::vector<std::string> names;
  std::vector<double> capacities;

  std::size_t size() const { return capacities.size(); }
};

/// A group of identical users sharing a per-job requirement vector and utility.
struct UserType {
  std::string label;
  int count = 1;
  std::vector<double> requirements;
  UtilityParams utility;
};

/// The market: resources, user types and the volume-discount exponent gamma.
struct Instance {
  ResourceModel resources;
  std::vector<UserType> user_types;
  double gamma = 1.0;

  std::size_t num_resources() const { return resources.size(); }
  std::size_t num_types() const { return user_types.size(); }
};

void validate(const ResourceModel& resources);
void validate(const UserType& user, std::size_t num_resources);
void validate(const Instance& instance);

/// Copy of `instance` with a different discount exponent (validated).
Instance with_gamma(const Instance& instance, double gamma);

/// The three-type, two-resource market obtained by clustering a production task trace:
/// centroids (0.4, 2.7), (0.01, 0.02), (0.6, 0.5); alpha = (0.4, 0.7, 0.5); c = 1;
/// one user each of types 1 and 3, eight of type 2; capacity 6 for CPU and memory.
Instance reference_instance(double cpu_capacity = 6.0, double mem_capacity = 6.0,
                            double gamma = 1.0);

}  // namespace cloudprice
