#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cloudprice/deadline.hpp"
#include "cloudprice/model.hpp"
#include "cloudprice/optimizer.hpp"
#include "cloudprice/pricing.hpp"

namespace cloudprice {

// Instance JSON:
//   {"resources": [{"name": str, "capacity": number}, ...],
//    "user_types": [{"label": str, "count": int, "alpha": number, "c": number,
//                    "requirements": [number, ...]}, ...],
//    "gamma": number}
// Parse errors name the offending field path, e.g. "user_types[1].alpha: ...".
Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& instance);

// Horizon JSON: {"horizon": T, "intervals": [{"instance": <Instance>,
//   "deadlines": [int, ...] (1-based), "nu": number}, ...]}
HorizonSpec horizon_from_json(const nlohmann::json& doc);
nlohmann::json horizon_to_json(const HorizonSpec& spec);

nlohmann::json plan_to_json(const PricingPlan& plan);
nlohmann::json outcome_to_json(const Instance& instance, const Outcome& outcome);
nlohmann::json solve_result_to_json(const Instance& instance, const SolveResult& result);
nlohmann::json horizon_result_to_json(const HorizonProgram& program, const HorizonResult& result);

/// Reads and parses a JSON file; syntax errors and missing files become InputError.
nlohmann::json read_json_file(const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);
HorizonSpec load_horizon(const std::filesystem::path& path);

/// Stable pretty-printed text (2-space indent, trailing newline).
std::string dump(const nlohmann::json& doc);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cloudprice
