#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "memsat/cnf.hpp"
#include "memsat/competition.hpp"
#include "memsat/flow.hpp"

namespace memsat {

/// One row of the optional trajectory dump.
struct TrajectoryPoint {
  std::uint64_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  std::size_t num_unsat = 0;
  double max_xl = 0.0;
};

struct RunConfig {
  std::uint64_t max_steps = 100'000'000;
  std::uint64_t seed = 0;
  /// Explicit initial state; random voltages from `seed` when absent.
  std::optional<SolverState> initial_state;
  bool record_trajectory = false;
  std::uint64_t snapshot_stride = 1;
  /// Per-clause alpha adaptation; plain integration when absent.
  std::optional<CompetitionSchedule> competition;
  /// Called with the state after every accepted step.
  std::function<void(const SolverState&)> on_step;

  void validate() const;
};

struct RunRecord {
  bool solved = false;
  std::optional<Assignment> assignment;
  std::uint64_t steps = 0;
  std::uint64_t rejected_steps = 0;
  double integrated_time = 0.0;
  double wall_time = 0.0;
  double max_xl_seen = 0.0;
  double mean_dt = 0.0;
  std::uint64_t seed = 0;
  std::string failure;  // set when the run aborted (e.g. non-finite derivative)
  std::vector<TrajectoryPoint> trajectory;
};

/// v_i ~ U(-1, 1) from cfg.seed, x_s = 0.5, x_l = 1, t = 0, dt = dt_min.
/// An explicit initial state is returned as given once it passes the bounds check.
SolverState init_state(const Formula& f, const SolverParams& p, const RunConfig& cfg);

/// Adaptive forward-Euler stepper. Owns the scratch derivative so repeated
/// attempts at the same state reuse one evaluation.
class EulerIntegrator {
 public:
  EulerIntegrator(const Formula& f, const SolverParams& p);

  /// One attempt: accept (advance state, grow dt) or reject (shrink dt only).
  /// Throws NonFiniteDerivative.
  bool attempt(SolverState& s, std::span<const double> clause_alpha = {});

  /// Unsatisfied-clause count at the last evaluated state.
  std::size_t unsatisfied() const noexcept { return stats_.unsatisfied; }

  /// Evaluates at `s` if it differs from the cached point.
  const FlowStats& evaluate(const SolverState& s, std::span<const double> clause_alpha = {});
  void invalidate() noexcept { cached_ = false; }

  const FlowField& field() const noexcept { return field_; }

  /// Largest x_l written by the last accepted step.
  double last_max_xl() const noexcept { return max_xl_; }

 private:
  FlowField field_;
  Derivative d_;
  FlowStats stats_;
  bool cached_ = false;
  double max_xl_ = 1.0;
};

struct StepResult {
  SolverState state;
  bool accepted;
};

/// Single stateless Euler attempt; see EulerIntegrator::attempt.
StepResult euler_step(const Formula& f, const SolverParams& p, const SolverState& s);

/// sign(v) with zeros mapped to +1, if every clause has C_j < 1/2.
std::optional<Assignment> check_solved(const Formula& f, const SolverState& s);

/// Integrates until solved or cfg.max_steps accepted steps.
RunRecord solve(const Formula& f, const SolverParams& p, const RunConfig& cfg);

/// Outcome of a run started inside the restricted solution orthant.
struct OrthantRun {
  RunRecord record;
  double max_constraint = 0.0;   // max_j C_j over every visited state
  bool monotone = true;          // gauged voltages never decreased
  std::uint64_t steps_checked = 0;
};

/// Basin-of-attraction harness. `f` must be solved by the all-true
/// assignment. Starts from v_i ~ U[1 - 2 gamma, 1] (or all ones when
/// `exact_solution`), x_s = 0, x_l = 1; solves, then keeps integrating for
/// `extra_steps` to watch the trajectory stay in the orthant.
OrthantRun solve_from_orthant(const Formula& f, const SolverParams& p, std::uint64_t seed,
                              std::uint64_t extra_steps = 100, bool exact_solution = false);

/// CSV header + rows: step,t,dt,num_unsat,max_xl.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& points);

}  // namespace memsat
