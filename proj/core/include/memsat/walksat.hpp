#pragma once

#include <cstdint>

#include "memsat/cnf.hpp"
#include "memsat/integrator.hpp"

namespace memsat {

struct WalkSatParams {
  double noise = 0.5;
  std::uint64_t max_flips = 10'000'000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// SKC WalkSAT from a uniformly random assignment. Each step picks a random
/// unsatisfied clause and flips a zero-break variable if one exists; otherwise
/// a random clause variable with probability `noise`, else the minimum-break
/// variable (lowest index on ties). RunRecord::steps counts flips; the
/// integration-specific fields stay zero.
RunRecord walksat_solve(const Formula& f, const WalkSatParams& params);

}  // namespace memsat
