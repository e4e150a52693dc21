#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "memsat/cnf.hpp"

namespace memsat {

/// Constants of the memcomputing flow and of the adaptive Euler scheme.
/// Defaults are the published 3-SAT parameter set; zeta and xl_max depend
/// on the formula, see for_formula().
struct SolverParams {
  double alpha = 5.0;     // long-memory growth rate
  double beta = 20.0;     // short-memory rate
  double gamma = 0.25;    // short-memory threshold
  double delta = 0.05;    // long-memory threshold
  double epsilon = 1e-3;  // short-memory floor
  double zeta = 1e-3;     // rigidity weight on x_l
  double xl_max = 1e4;    // long-memory cap
  double dt_min = 0x1.0p-7;
  double dt_max = 1e3;

  // Adaptive step: accept when dt * max|derivative| <= max_change, or dt == dt_min.
  double max_change = 0.125;
  double dt_grow = 1.2;
  double dt_shrink = 0.5;

  /// Defaults with zeta chosen by clause ratio and xl_max = 1e4 * m.
  static SolverParams for_formula(const Formula& f);

  /// Throws InvalidConfig unless 0 < delta < gamma < 1/2, epsilon in (0, 1),
  /// zeta > 0, xl_max >= 1, 0 < dt_min < dt_max, and sane step-rule constants.
  void validate() const;
};

/// zeta = 1e-1 for ratio >= 6, 1e-2 for 5 <= ratio < 6, 1e-3 for
/// 4.27 < ratio < 5, and 1e-2 at or below the threshold (uniform random 4.25).
double default_zeta(double ratio);

/// Voltages v (per variable), short memory x_s and long memory x_l (per clause).
struct SolverState {
  std::vector<double> v;
  std::vector<double> xs;
  std::vector<double> xl;
  double t = 0.0;
  double dt = 0.0;
  std::uint64_t steps = 0;

  /// v in [-1,1], x_s in [0,1], x_l in [1, xl_max], sizes matching f.
  bool in_bounds(const Formula& f, const SolverParams& p) const;

  friend bool operator==(const SolverState&, const SolverState&) = default;
};

struct Derivative {
  std::vector<double> dv;
  std::vector<double> dxs;
  std::vector<double> dxl;
};

// Per-clause primitives. `j` is a clause index; `i` a 0-based variable.

/// C_j = 1/2 min_k (1 - q_k v_k), in [0, 1]. The clause is satisfied when C_j < 1/2.
double clause_constraint(const Formula& f, std::span<const double> v, std::size_t j);

/// Variable attaining the minimum in C_j; ties go to the lowest variable index.
std::uint32_t argmin_literal(const Formula& f, std::span<const double> v, std::size_t j);

/// G_{i,j} = 1/2 q_ij min over the other two literals of (1 - q v).
/// Throws NotInClause when i does not occur in clause j.
double gradient_term(const Formula& f, std::span<const double> v, std::size_t j, std::uint32_t i);

/// R_{i,j} = 1/2 (q_ij - v_i) when i is the clause's argmin variable, else 0.
double rigidity_term(const Formula& f, std::span<const double> v, std::size_t j, std::uint32_t i);

/// E_j = 1/8 prod_k (1 - q_k v_k). Diagnostic only.
double clause_energy(const Formula& f, std::span<const double> v, std::size_t j);

/// Which voltage terms evaluate() includes; the split is used by Jacobian checks.
enum class VoltageTerms { All, GradientOnly, RigidityOnly };

/// Summary of one right-hand-side evaluation.
struct FlowStats {
  std::size_t unsatisfied = 0;  // clauses with C_j >= 1/2
  double max_abs = 0.0;         // max |component| over dv, dxs, dxl
};

/// Clause-major evaluator of the right-hand side. Holds flattened clause
/// data for the hot loop; the formula must outlive it.
class FlowField {
 public:
  /// `allow_simd` = false forces the portable scalar loop; both paths give
  /// bit-identical results.
  FlowField(const Formula& f, const SolverParams& p, bool allow_simd = true);
  bool uses_simd() const noexcept { return simd_blocks_ > 0; }

  const Formula& formula() const noexcept { return *formula_; }
  const SolverParams& params() const noexcept { return params_; }

  /// Writes the derivative at `s` into `out` (resized as needed). When
  /// `clause_alpha` is non-empty it replaces alpha clause by clause.
  /// Does not check bounds.
  FlowStats evaluate(const SolverState& s, Derivative& out, std::span<const double> clause_alpha = {},
                     VoltageTerms terms = VoltageTerms::All) const;

 private:
  const Formula* formula_;
  SolverParams params_;
  std::vector<std::uint32_t> vars_;  // 3 per clause
  std::vector<double> signs_;        // 3 per clause, +-1.0
  std::size_t simd_blocks_ = 0;      // leading 4-clause blocks handled by the vector kernel
  std::vector<std::uint32_t> block_vars_;
  std::vector<double> block_signs_;
};

/// Bounds-checked flow evaluation; throws OutOfBoundsState.
Derivative flow_field(const Formula& f, const SolverParams& p, const SolverState& s);

}  // namespace memsat
