#pragma once

#include <cstdint>
#include <vector>

#include "memsat/cnf.hpp"
#include "memsat/flow.hpp"

namespace memsat {

/// Factor subgraph of unsatisfied (C >= 1/2) and recently unsatisfied
/// (C < 1/2 with x_s > 0) clauses plus every variable they touch.
struct UnsatGraphSnapshot {
  std::uint64_t step = 0;
  std::vector<std::uint32_t> unsat;
  std::vector<std::uint32_t> recently_unsat;
  std::vector<std::uint32_t> variables;
  std::vector<std::size_t> component_sizes;  // node counts, largest first
};

struct TransitionAnalysis {
  UnsatGraphSnapshot before;
  UnsatGraphSnapshot after;
  std::size_t newly_satisfied = 0;
  std::size_t newly_unsatisfied = 0;
};

UnsatGraphSnapshot unsat_graph(const Formula& f, const SolverState& s);

/// Compares two consecutive accepted states clause by clause.
TransitionAnalysis analyze_transition(const Formula& f, const SolverState& before, const SolverState& after);

}  // namespace memsat
