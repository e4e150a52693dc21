#include "memsat/integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#if defined(__x86_64__) && defined(__GNUC__)
#include <immintrin.h>
#endif

#include "memsat/error.hpp"
#include "memsat/rng.hpp"

namespace memsat {

void RunConfig::validate() const {
  if (max_steps < 1) throw Error(ErrorCode::InvalidConfig, "max_steps must be >= 1");
  if (snapshot_stride < 1) throw Error(ErrorCode::InvalidConfig, "snapshot_stride must be >= 1");
}

SolverState init_state(const Formula& f, const SolverParams& p, const RunConfig& cfg) {
  if (cfg.initial_state) {
    if (!cfg.initial_state->in_bounds(f, p)) {
      throw Error(ErrorCode::OutOfBoundsState, "explicit initial state outside the invariant hypercube");
    }
    return *cfg.initial_state;
  }
  SolverState s;
  Rng rng(cfg.seed);
  s.v.resize(f.num_vars());
  for (auto& x : s.v) x = rng.uniform(-1.0, 1.0);
  s.xs.assign(f.num_clauses(), 0.5);
  s.xl.assign(f.num_clauses(), 1.0);
  s.t = 0.0;
  s.dt = p.dt_min;
  s.steps = 0;
  return s;
}

namespace {

#if defined(__x86_64__) && defined(__GNUC__)
// x <- clamp(x + dt * d, lo, hi); returns max(x) (at least lo). max_pd(lo, y)
// and min_pd(hi, y) reproduce std::clamp exactly, NaN included.
__attribute__((target("avx2"))) double advance_avx2(double* x, const double* d, std::size_t n, double dt,
                                                     double lo, double hi) {
  const __m256d vdt = _mm256_set1_pd(dt), vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
  __m256d top = vlo;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d y = _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(vdt, _mm256_loadu_pd(d + i)));
    const __m256d z = _mm256_min_pd(vhi, _mm256_max_pd(vlo, y));
    _mm256_storeu_pd(x + i, z);
    top = _mm256_max_pd(top, z);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, top);
  double result = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    x[i] = std::clamp(x[i] + dt * d[i], lo, hi);
    result = std::max(result, x[i]);
  }
  return result;
}
#endif

double advance(std::vector<double>& x, const std::vector<double>& d, double dt, double lo, double hi) {
#if defined(__x86_64__) && defined(__GNUC__)
  static const bool avx2 = __builtin_cpu_supports("avx2");
  if (avx2) return advance_avx2(x.data(), d.data(), x.size(), dt, lo, hi);
#endif
  double result = lo;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(x[i] + dt * d[i], lo, hi);
    result = std::max(result, x[i]);
  }
  return result;
}

}  // namespace

EulerIntegrator::EulerIntegrator(const Formula& f, const SolverParams& p) : field_(f, p) {}

const FlowStats& EulerIntegrator::evaluate(const SolverState& s, std::span<const double> clause_alpha) {
  if (!cached_) {
    stats_ = field_.evaluate(s, d_, clause_alpha);
    cached_ = true;
  }
  return stats_;
}

bool EulerIntegrator::attempt(SolverState& s, std::span<const double> clause_alpha) {
  const auto& p = field_.params();
  const FlowStats& st = evaluate(s, clause_alpha);
  if (!std::isfinite(st.max_abs)) throw Error(ErrorCode::NonFiniteDerivative, "flow field is not finite");

  const double dt = s.dt;
  if (!(dt * st.max_abs <= p.max_change) && dt > p.dt_min) {
    s.dt = std::max(dt * p.dt_shrink, p.dt_min);
    return false;
  }

  advance(s.v, d_.dv, dt, -1.0, 1.0);
  advance(s.xs, d_.dxs, dt, 0.0, 1.0);
  max_xl_ = advance(s.xl, d_.dxl, dt, 1.0, p.xl_max);
  s.t += dt;
  s.steps += 1;
  s.dt = std::min(dt * p.dt_grow, p.dt_max);
  cached_ = false;
  return true;
}

StepResult euler_step(const Formula& f, const SolverParams& p, const SolverState& s) {
  if (!s.in_bounds(f, p)) throw Error(ErrorCode::OutOfBoundsState, "state outside the invariant hypercube");
  EulerIntegrator integ(f, p);
  StepResult r{s, false};
  r.accepted = integ.attempt(r.state);
  return r;
}

std::optional<Assignment> check_solved(const Formula& f, const SolverState& s) {
  if (s.v.size() != f.num_vars()) throw Error(ErrorCode::LengthMismatch, "voltage vector length");
  for (std::size_t j = 0; j < f.num_clauses(); ++j)
    if (!(clause_constraint(f, s.v, j) < 0.5)) return std::nullopt;
  std::vector<std::int8_t> values(f.num_vars());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = s.v[i] < 0.0 ? -1 : 1;
  return Assignment(std::move(values));
}

RunRecord solve(const Formula& f, const SolverParams& p, const RunConfig& cfg) {
  p.validate();
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.seed = cfg.seed;
  SolverState s = init_state(f, p, cfg);
  EulerIntegrator integ(f, p);

  std::optional<CompetitionSchedule> schedule;
  if (cfg.competition) {
    schedule = cfg.competition->per_clause_alpha.empty()
                   ? CompetitionSchedule::for_clauses(f.num_clauses(), *cfg.competition)
                   : *cfg.competition;
    schedule->validate(f.num_clauses());
  }
  auto alpha = [&]() -> std::span<const double> {
    return schedule ? std::span<const double>(schedule->per_clause_alpha) : std::span<const double>{};
  };

  rec.max_xl_seen = *std::max_element(s.xl.begin(), s.xl.end());

  try {
    while (s.steps < cfg.max_steps) {
      const double dt = s.dt;
      if (!integ.attempt(s, alpha())) {
        ++rec.rejected_steps;
        continue;
      }
      rec.max_xl_seen = std::max(rec.max_xl_seen, integ.last_max_xl());
      if (schedule && maybe_adapt(*schedule, s, p.xl_max)) integ.invalidate();
      if (cfg.on_step) cfg.on_step(s);

      // The next step's evaluation doubles as the satisfiability check.
      const FlowStats& st = integ.evaluate(s, alpha());
      if (cfg.record_trajectory && s.steps % cfg.snapshot_stride == 0) {
        rec.trajectory.push_back({s.steps, s.t, dt, st.unsatisfied, integ.last_max_xl()});
      }
      if (st.unsatisfied == 0) {
        auto a = check_solved(f, s);
        if (!a || !verify(f, *a)) throw std::logic_error("thresholded voltages failed verification");
        rec.assignment = std::move(a);
        rec.solved = true;
        break;
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonFiniteDerivative) throw;
    rec.failure = e.what();
  }

  rec.steps = s.steps;
  rec.integrated_time = s.t;
  rec.mean_dt = s.steps > 0 ? s.t / static_cast<double>(s.steps) : p.dt_min;
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

namespace {

double max_constraint(const Formula& f, const SolverState& s) {
  double worst = 0.0;
  for (std::size_t j = 0; j < f.num_clauses(); ++j) worst = std::max(worst, clause_constraint(f, s.v, j));
  return worst;
}

}  // namespace

OrthantRun solve_from_orthant(const Formula& f, const SolverParams& p, std::uint64_t seed,
                              std::uint64_t extra_steps, bool exact_solution) {
  if (!verify(f, Assignment::all_true(f.num_vars()))) {
    throw Error(ErrorCode::InvalidFormula, "orthant runs need a formula solved by the all-true assignment");
  }
  SolverState init;
  Rng rng(seed);
  init.v.resize(f.num_vars());
  for (auto& x : init.v) x = exact_solution ? 1.0 : rng.uniform(1.0 - 2.0 * p.gamma, 1.0);
  init.xs.assign(f.num_clauses(), 0.0);
  init.xl.assign(f.num_clauses(), 1.0);
  init.dt = p.dt_min;

  OrthantRun out;
  out.max_constraint = max_constraint(f, init);
  std::vector<double> prev = init.v;
  auto observe = [&](const SolverState& s) {
    out.max_constraint = std::max(out.max_constraint, max_constraint(f, s));
    for (std::size_t i = 0; i < s.v.size(); ++i)
      if (s.v[i] < prev[i]) out.monotone = false;
    prev = s.v;
    ++out.steps_checked;
  };

  RunConfig cfg;
  cfg.seed = seed;
  cfg.max_steps = 100'000;
  cfg.initial_state = init;
  SolverState last = init;
  cfg.on_step = [&](const SolverState& s) {
    observe(s);
    last = s;
  };
  out.record = solve(f, p, cfg);

  EulerIntegrator integ(f, p);
  for (std::uint64_t k = 0; k < extra_steps;) {
    if (integ.attempt(last)) {
      observe(last);
      ++k;
    }
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& points) {
  out << "step,t,dt,num_unsat,max_xl\n";
  for (const auto& pt : points) {
    out << pt.step << ',' << pt.t << ',' << pt.dt << ',' << pt.num_unsat << ',' << pt.max_xl << '\n';
  }
}

}  // namespace memsat
