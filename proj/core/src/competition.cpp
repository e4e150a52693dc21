#include "memsat/competition.hpp"

#include <algorithm>
#include <cmath>

#include "memsat/error.hpp"

namespace memsat {

CompetitionSchedule CompetitionSchedule::for_clauses(std::size_t m) {
  return for_clauses(m, CompetitionSchedule{});
}

CompetitionSchedule CompetitionSchedule::for_clauses(std::size_t m, const CompetitionSchedule& settings) {
  CompetitionSchedule s = settings;
  s.per_clause_alpha.assign(m, s.alpha_init);
  s.next_adapt_time = s.interval;
  s.adaptations = 0;
  return s;
}

void CompetitionSchedule::validate(std::size_t m) const {
  if (per_clause_alpha.size() != m) throw Error(ErrorCode::LengthMismatch, "per-clause alpha size");
  if (!(interval > 0.0)) throw Error(ErrorCode::InvalidConfig, "adaptation interval must be positive");
  if (!(alpha_floor > 0.0) || !(up_factor > 0.0) || !(down_factor > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "adaptation factors must be positive");
  }
  for (double a : per_clause_alpha)
    if (!(a >= alpha_floor)) throw Error(ErrorCode::InvalidConfig, "per-clause alpha below floor");
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InsufficientPoints, "median of empty set");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

bool maybe_adapt(CompetitionSchedule& schedule, SolverState& state, double xl_max) {
  if (!(state.t >= schedule.next_adapt_time)) return false;
  while (state.t >= schedule.next_adapt_time) {
    const double med = lower_median(state.xl);
    for (std::size_t j = 0; j < state.xl.size(); ++j) {
      double& a = schedule.per_clause_alpha[j];
      a = state.xl[j] > med ? a * schedule.up_factor : a * schedule.down_factor;
      a = std::max(a, schedule.alpha_floor);
      if (state.xl[j] >= xl_max) {
        state.xl[j] = 1.0;
        a = schedule.alpha_floor;
      }
    }
    schedule.next_adapt_time += schedule.interval;
    ++schedule.adaptations;
  }
  return true;
}

}  // namespace memsat
