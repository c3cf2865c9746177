#include "cloudprice/model.hpp"

#include <algorithm>
#include <cmath>

#include "cloudprice/error.hpp"

namespace cloudprice {

void validate(const ResourceModel& resources) {
  if (resources.capacities.empty()) throw InputError("resources: at least one resource required");
  if (resources.names.size() != resources.capacities.size()) {
    throw InputError("resources: names and capacities differ in length");
  }
  for (std::size_t i = 0; i < resources.size(); ++i) {
    const double c = resources.capacities[i];
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw InputError("resources[" + std::to_string(i) + "].capacity: must be finite and >= 0");
    }
  }
}

void validate(const UserType& user, std::size_t num_resources) {
  if (user.count < 1) throw InputError("count: must be >= 1");
  if (user.requirements.size() != num_resources) {
    throw InputError("requirements: expected " + std::to_string(num_resources) + " entries, got " +
                     std::to_string(user.requirements.size()));
  }
  double largest = 0.0;
  for (std::size_t i = 0; i < num_resources; ++i) {
    const double r = user.requirements[i];
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw InputError("requirements[" + std::to_string(i) + "]: must be finite and >= 0");
    }
    largest = std::max(largest, r);
  }
  if (!(largest > 0.0)) throw InputError("requirements: at least one entry must be positive");
  validate(user.utility);
}

void validate(const Instance& instance) {
  validate(instance.resources);
  if (!(instance.gamma > 0.0 && instance.gamma <= 1.0)) {
    throw InputError("gamma: must lie in (0, 1]");
  }
  for (std::size_t j = 0; j < instance.user_types.size(); ++j) {
    const auto& user = instance.user_types[j];
    const std::string where = "user_types[" + std::to_string(j) + "]";
    try {
      validate(user, instance.num_resources());
    } catch (const InputError& e) {
      throw InputError(where + "." + e.what());
    }
    if (!demand_well_posed(user.utility, instance.gamma)) {
      throw InputError(where + ".alpha: gamma " + std::to_string(instance.gamma) +
                       " must exceed 1 - alpha = " + std::to_string(1.0 - user.utility.alpha));
    }
  }
}

Instance with_gamma(const Instance& instance, double gamma) {
  Instance out = instance;
  out.gamma = gamma;
  validate(out);
  return out;
}

Instance reference_instance(double cpu_capacity, double mem_capacity, double gamma) {
  Instance inst;
  inst.resources.names = {"cpu", "mem"};
  inst.resources.capacities = {cpu_capacity, mem_capacity};
  inst.gamma = gamma;
  inst.user_types = {
      {"type1", 1, {0.4, 2.7}, {0.4, 1.0}},
      {"type2", 8, {0.01, 0.02}, {0.7, 1.0}},
      {"type3", 1, {0.6, 0.5}, {0.5, 1.0}},
  };
  validate(inst);
  return inst;
}

}  // namespace cloudprice
