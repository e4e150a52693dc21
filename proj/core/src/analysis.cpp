#include "memsat/analysis.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "memsat/error.hpp"

namespace memsat {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::size_t size_of_root(std::size_t root) const { return size_[root]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

UnsatGraphSnapshot unsat_graph(const Formula& f, const SolverState& s) {
  if (s.v.size() != f.num_vars() || s.xs.size() != f.num_clauses()) {
    throw Error(ErrorCode::LengthMismatch, "state does not match formula");
  }
  UnsatGraphSnapshot snap;
  snap.step = s.steps;
  std::vector<std::uint32_t> clauses;
  for (std::size_t j = 0; j < f.num_clauses(); ++j) {
    const bool unsat = !(clause_constraint(f, s.v, j) < 0.5);
    if (unsat) {
      snap.unsat.push_back(static_cast<std::uint32_t>(j));
      clauses.push_back(static_cast<std::uint32_t>(j));
    } else if (s.xs[j] > 0.0) {
      snap.recently_unsat.push_back(static_cast<std::uint32_t>(j));
      clauses.push_back(static_cast<std::uint32_t>(j));
    }
  }

  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> var_node(f.num_vars(), kAbsent);
  for (auto j : clauses)
    for (const auto& lit : f.clause(j))
      if (var_node[lit.var] == kAbsent) {
        var_node[lit.var] = 0;
        snap.variables.push_back(lit.var);
      }
  std::sort(snap.variables.begin(), snap.variables.end());
  for (std::size_t k = 0; k < snap.variables.size(); ++k) var_node[snap.variables[k]] = clauses.size() + k;

  DisjointSets sets(clauses.size() + snap.variables.size());
  for (std::size_t c = 0; c < clauses.size(); ++c)
    for (const auto& lit : f.clause(clauses[c])) sets.unite(c, var_node[lit.var]);

  for (std::size_t node = 0; node < clauses.size() + snap.variables.size(); ++node)
    if (sets.find(node) == node) snap.component_sizes.push_back(sets.size_of_root(node));
  std::sort(snap.component_sizes.begin(), snap.component_sizes.end(), std::greater<>());
  return snap;
}

TransitionAnalysis analyze_transition(const Formula& f, const SolverState& before, const SolverState& after) {
  TransitionAnalysis out;
  out.before = unsat_graph(f, before);
  out.after = unsat_graph(f, after);
  for (std::size_t j = 0; j < f.num_clauses(); ++j) {
    const bool was_sat = clause_constraint(f, before.v, j) < 0.5;
    const bool is_sat = clause_constraint(f, after.v, j) < 0.5;
    if (!was_sat && is_sat) ++out.newly_satisfied;
    if (was_sat && !is_sat) ++out.newly_unsatisfied;
  }
  return out;
}

}  // namespace memsat
