#pragma once

#include <cstddef>
#include <vector>

#include "memsat/flow.hpp"

namespace memsat {

/// Per-clause long-memory growth rates, retuned every `interval` time units:
/// clauses whose x_l is strictly above the (lower) median grow their rate by
/// up_factor, the rest shrink by down_factor, never below alpha_floor. A clause
/// whose x_l reached the cap restarts at x_l = 1, alpha = alpha_floor.
struct CompetitionSchedule {
  double interval = 1e4;
  double up_factor = 1.1;
  double down_factor = 0.9;
  double alpha_floor = 1.0;
  double alpha_init = 5.0;
  std::vector<double> per_clause_alpha;
  double next_adapt_time = 0.0;
  std::size_t adaptations = 0;

  static CompetitionSchedule for_clauses(std::size_t m);
  static CompetitionSchedule for_clauses(std::size_t m, const CompetitionSchedule& settings);

  void validate(std::size_t m) const;
};

/// Lower median (element at index (size-1)/2 of the sorted copy).
double lower_median(std::vector<double> values);

/// Applies every adaptation instant that state.t has crossed since the last
/// call. Only per_clause_alpha and capped x_l entries change. Returns true if
/// an adaptation happened.
bool maybe_adapt(CompetitionSchedule& schedule, SolverState& state, double xl_max);

}  // namespace memsat
