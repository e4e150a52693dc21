#pragma once

#include <map>
#include <string>
#include <string_view>

#include "memsat/integrator.hpp"

namespace memsat {

/// One JSON object: solved, steps, rejected_steps, integrated_time,
/// wall_time, max_xl_seen, mean_dt, seed, assignment (DIMACS ints or null).
std::string run_record_json(const RunRecord& rec);

/// Parses a flat JSON object of SolverParams fields into an override map.
/// Field names are checked later by apply_param_overrides.
std::map<std::string, double> parse_params_json(std::string_view text);

std::string read_text_file(const std::string& path);

}  // namespace memsat
