#include "cloudprice/io.hpp"

#include <fstream>
#include <sstream>

#include "cloudprice/error.hpp"

namespace cloudprice {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + "." + key + ": missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw InputError(path + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw InputError(path + ": expected an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw InputError(path + ": expected a string");
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) throw InputError(path + ": expected an array");
  return v;
}

std::string at_index(const std::string& path, std::size_t k) {
  return path + "[" + std::to_string(k) + "]";
}

Instance parse_instance(const json& doc, const std::string& root) {
  Instance inst;
  const std::string rpath = root.empty() ? "resources" : root + ".resources";
  const json& resources = array(field(doc, "resources", root.empty() ? "instance" : root), rpath);
  for (std::size_t i = 0; i < resources.size(); ++i) {
    const std::string p = at_index(rpath, i);
    inst.resources.names.push_back(text(field(resources[i], "name", p), p + ".name"));
    inst.resources.capacities.push_back(number(field(resources[i], "capacity", p), p + ".capacity"));
  }
  const std::string upath = root.empty() ? "user_types" : root + ".user_types";
  const json& users = array(field(doc, "user_types", root.empty() ? "instance" : root), upath);
  for (std::size_t j = 0; j < users.size(); ++j) {
    const std::string p = at_index(upath, j);
    UserType u;
    u.label = users[j].contains("label") ? text(users[j]["label"], p + ".label")
                                         : "type" + std::to_string(j + 1);
    u.count = users[j].contains("count") ? integer(users[j]["count"], p + ".count") : 1;
    u.utility.alpha = number(field(users[j], "alpha", p), p + ".alpha");
    u.utility.c = users[j].contains("c") ? number(users[j]["c"], p + ".c") : 1.0;
    const json& req = array(field(users[j], "requirements", p), p + ".requirements");
    for (std::size_t i = 0; i < req.size(); ++i) {
      u.requirements.push_back(number(req[i], at_index(p + ".requirements", i)));
    }
    inst.user_types.push_back(std::move(u));
  }
  const std::string gpath = root.empty() ? "gamma" : root + ".gamma";
  inst.gamma = doc.contains("gamma") ? number(doc["gamma"], gpath) : 1.0;
  try {
    validate(inst);
  } catch (const InputError& e) {
    throw InputError((root.empty() ? "" : root + ".") + e.what());
  }
  return inst;
}

json vec(const std::vector<double>& v) { return json(v); }

}  // namespace

Instance instance_from_json(const json& doc) { return parse_instance(doc, ""); }

json instance_to_json(const Instance& instance) {
  json doc;
  doc["resources"] = json::array();
  for (std::size_t i = 0; i < instance.num_resources(); ++i) {
    doc["resources"].push_back(
        {{"name", instance.resources.names[i]}, {"capacity", instance.resources.capacities[i]}});
  }
  doc["user_types"] = json::array();
  for (const auto& u : instance.user_types) {
    doc["user_types"].push_back({{"label", u.label},
                                 {"count", u.count},
                                 {"alpha", u.utility.alpha},
                                 {"c", u.utility.c},
                                 {"requirements", u.requirements}});
  }
  doc["gamma"] = instance.gamma;
  return doc;
}

HorizonSpec horizon_from_json(const json& doc) {
  HorizonSpec spec;
  const json& intervals = array(field(doc, "intervals", "horizon spec"), "intervals");
  if (doc.contains("horizon")) {
    const int horizon = integer(doc["horizon"], "horizon");
    if (horizon < 1 || static_cast<std::size_t>(horizon) != intervals.size()) {
      throw InputError("horizon: must equal the number of intervals (" +
                       std::to_string(intervals.size()) + ")");
    }
  }
  for (std::size_t s = 0; s < intervals.size(); ++s) {
    const std::string p = at_index("intervals", s);
    IntervalSpec interval;
    interval.instance = parse_instance(field(intervals[s], "instance", p), p + ".instance");
    if (intervals[s].contains("deadlines")) {
      const json& d = array(intervals[s]["deadlines"], p + ".deadlines");
      for (std::size_t j = 0; j < d.size(); ++j) {
        const int tau = integer(d[j], at_index(p + ".deadlines", j));
        if (tau < 1) throw InputError(at_index(p + ".deadlines", j) + ": intervals start at 1");
        interval.deadlines.push_back(static_cast<std::size_t>(tau - 1));
      }
    } else {
      interval.deadlines.assign(interval.instance.num_types(), s);
    }
    interval.nu = intervals[s].contains("nu") ? number(intervals[s]["nu"], p + ".nu") : 0.0;
    spec.intervals.push_back(std::move(interval));
  }
  validate(spec);
  return spec;
}

json horizon_to_json(const HorizonSpec& spec) {
  json doc;
  doc["horizon"] = spec.horizon();
  doc["intervals"] = json::array();
  for (const auto& interval : spec.intervals) {
    json d = json::array();
    for (std::size_t tau : interval.deadlines) d.push_back(tau + 1);
    doc["intervals"].push_back(
        {{"instance", instance_to_json(interval.instance)}, {"deadlines", d}, {"nu", interval.nu}});
  }
  return doc;
}

json plan_to_json(const PricingPlan& plan) {
  json doc;
  doc["kind"] = std::string(to_string(kind_of(plan)));
  if (const auto* b = std::get_if<BundledPlan>(&plan)) {
    doc["bundle"] = b->bundle;
    doc["price"] = b->price;
  } else if (const auto* r = std::get_if<ResourcePlan>(&plan)) {
    doc["prices"] = r->prices;
  } else {
    doc["prices"] = std::get<DifferentiatedPlan>(plan).prices;
  }
  return doc;
}

json outcome_to_json(const Instance& instance, const Outcome& outcome) {
  json doc;
  doc["types"] = json::array();
  for (std::size_t j = 0; j < instance.num_types(); ++j) {
    doc["types"].push_back({{"label", instance.user_types[j].label},
                            {"count", instance.user_types[j].count},
                            {"cost", outcome.cost[j]},
                            {"demand", outcome.demand[j]},
                            {"net_utility", outcome.net_utility[j]}});
  }
  doc["revenue"] = outcome.revenue;
  doc["usage"] = vec(outcome.usage);
  doc["leftover"] = vec(outcome.leftover);
  doc["feasible"] = outcome.feasible;
  if (outcome.bundle_usage) doc["bundle_usage"] = *outcome.bundle_usage;
  if (outcome.bundle_capacity) doc["bundle_capacity"] = *outcome.bundle_capacity;
  return doc;
}

json solve_result_to_json(const Instance& instance, const SolveResult& result) {
  return {{"plan", plan_to_json(result.plan)},
          {"outcome", outcome_to_json(instance, result.outcome)},
          {"objective", result.objective},
          {"revenue", result.revenue},
          {"fairness", result.fairness},
          {"iterations", result.iterations},
          {"outer_iterations", result.outer_iterations},
          {"converged", result.converged},
          {"gap", result.gap},
          {"diagnostics", result.diagnostics}};
}

json horizon_result_to_json(const HorizonProgram& program, const HorizonResult& result) {
  json doc;
  doc["intervals"] = json::array();
  for (std::size_t s = 0; s < program.spec.horizon(); ++s) {
    json entry{{"interval", s + 1},
               {"revenue", result.interval_revenue[s]},
               {"fairness", result.interval_fairness[s]},
               {"demand", result.demand[s]}};
    entry["plan"] = result.plans[s] ? plan_to_json(*result.plans[s]) : json(nullptr);
    doc["intervals"].push_back(std::move(entry));
  }
  doc["schedule"] = json::array();
  for (std::size_t v = 0; v < program.variables.size(); ++v) {
    const auto& var = program.variables[v];
    const auto& user = program.spec.intervals[var.submitted].instance.user_types[var.type];
    doc["schedule"].push_back({{"type", user.label},
                               {"submitted", var.submitted + 1},
                               {"processed", var.processed + 1},
                               {"jobs", result.schedule[v]}});
  }
  doc["repairs"] = json::array();
  for (const auto& r : result.repairs) {
    doc["repairs"].push_back({{"interval", r.interval + 1}, {"factor", r.factor}});
  }
  doc["revenue"] = result.revenue;
  doc["fairness"] = result.fairness;
  doc["objective"] = result.objective;
  doc["feasible"] = result.feasible;
  doc["converged"] = result.converged;
  doc["warnings"] = result.warnings;
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

HorizonSpec load_horizon(const std::filesystem::path& path) {
  return horizon_from_json(read_json_file(path));
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace cloudprice
