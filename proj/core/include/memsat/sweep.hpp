#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memsat/flow.hpp"
#include "memsat/stats.hpp"

namespace memsat {

enum class SolverKind { Dmm, DmmCompetition, WalkSat };

std::string_view to_string(SolverKind kind) noexcept;
SolverKind solver_kind_from_string(std::string_view name);

/// Ensemble over planted CDC instances: instances_per_n instances for every
/// n, each solved once with `budget` steps (flips for WalkSAT).
struct SweepConfig {
  SolverKind solver = SolverKind::Dmm;
  std::vector<std::size_t> n_values;
  double ratio = 4.3;
  double p0 = 0.08;
  std::size_t instances_per_n = 100;
  std::uint64_t seed = 0;
  std::uint64_t budget = 100'000'000;
  unsigned workers = 1;
  double noise = 0.5;
  /// SolverParams fields overriding the per-formula defaults (DMM only).
  std::map<std::string, double> param_overrides;
  /// Append-only per-run log. Runs already present are reused, not rerun.
  std::string jsonl_path;

  void validate() const;
  static SweepConfig from_json(std::string_view text);
};

/// Seed of instance `index` at size n. Shared by every solver kind so that
/// DMM and WalkSAT sweeps see the same formulas.
std::uint64_t instance_seed(std::uint64_t base, std::size_t n, std::size_t index);

struct RunSummary {
  std::size_t n = 0;
  std::size_t instance = 0;
  std::uint64_t instance_seed = 0;
  bool solved = false;
  std::uint64_t steps = 0;
  double integrated_time = 0.0;
  double max_xl = 0.0;
  double mean_dt = 0.0;
  double wall_time = 0.0;
  std::string failure;
};

/// Aggregates at one n. Medians use the convention that unsolved runs count
/// as +infinity and are reported only when more than half the runs solved.
/// median_max_xl and mean_dt are medians over solved runs of the per-run
/// maximum x_l and average step size.
struct SweepRow {
  std::size_t n = 0;
  std::size_t instances = 0;
  std::size_t solved = 0;
  std::optional<double> median_steps;
  std::optional<double> p10;
  std::optional<double> p90;
  std::optional<double> median_t;
  std::optional<double> median_max_xl;
  std::optional<double> mean_dt;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepResult {
  SolverKind solver = SolverKind::Dmm;
  double ratio = 0.0;
  double p0 = 0.0;
  std::vector<SweepRow> rows;
  std::optional<LinearFit> power_fit;
  std::optional<LinearFit> exponential_fit;
  std::vector<RunSummary> runs;  // ordered by (n, instance)
};

/// SolverParams::for_formula(f) with `overrides` applied; unknown keys throw InvalidConfig.
SolverParams resolve_params(const Formula& f, const std::map<std::string, double>& overrides);
void apply_param_overrides(SolverParams& p, const std::map<std::string, double>& overrides);

/// Runs one ensemble member; never throws for solver failures.
RunSummary run_instance(const SweepConfig& cfg, std::size_t n, std::size_t index);

SweepResult run_sweep(const SweepConfig& cfg);

/// Rebuilds rows and fits from `runs` (any order).
SweepResult aggregate(const SweepConfig& cfg, std::vector<RunSummary> runs);

std::string sweep_csv(const SweepResult& r);
std::string run_json_line(const SweepConfig& cfg, const RunSummary& run);

}  // namespace memsat
