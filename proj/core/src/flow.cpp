#include "memsat/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "memsat/error.hpp"

#if defined(__x86_64__) && defined(__GNUC__)
#define MEMSAT_AVX2_KERNEL 1
#include <immintrin.h>
#else
#define MEMSAT_AVX2_KERNEL 0
#endif

namespace memsat {
namespace {

// Slot of the smallest (1 - q v) value; equal values resolve to the lower variable index.
// Indexing instead of branching: the outcome is data dependent and mispredicts badly.
inline int argmin_slot(const double t[3], const std::uint32_t var[3]) noexcept {
  const int one = static_cast<int>(t[1] < t[0]) | (static_cast<int>(t[1] == t[0]) & static_cast<int>(var[1] < var[0]));
  const double tb = t[one];
  const std::uint32_t vb = var[one];
  const int two = static_cast<int>(t[2] < tb) | (static_cast<int>(t[2] == tb) & static_cast<int>(var[2] < vb));
  return one + two * (2 - one);
}

struct ClauseView {
  double t[3];
  std::uint32_t var[3];
  double q[3];
};

ClauseView view_clause(const Formula& f, std::span<const double> v, std::size_t j) {
  if (j >= f.num_clauses()) throw Error(ErrorCode::OutOfRange, "clause index " + std::to_string(j));
  if (v.size() != f.num_vars()) throw Error(ErrorCode::LengthMismatch, "voltage vector length");
  ClauseView cv{};
  const auto& c = f.clause(j);
  for (int k = 0; k < 3; ++k) {
    cv.var[k] = c[k].var;
    cv.q[k] = static_cast<double>(c[k].sign);
    cv.t[k] = 1.0 - cv.q[k] * v[c[k].var];
  }
  return cv;
}

int slot_of(const ClauseView& cv, std::uint32_t i, std::size_t j) {
  for (int k = 0; k < 3; ++k)
    if (cv.var[k] == i) return k;
  throw Error(ErrorCode::NotInClause, "variable " + std::to_string(i) + " not in clause " + std::to_string(j));
}

// Flattened clause data plus the state being evaluated.
struct Kernel {
  const std::uint32_t* vars;    // 3 per clause
  const double* signs;          // 3 per clause
  const std::uint32_t* bvars;   // per block of 4 clauses: slot-major 3 x 4
  const double* bsigns;
  const double* v;
  const double* xs;
  const double* xl;
  const double* alpha;          // per clause, or null
  double* dv;
  double* dxs;
  double* dxl;
  double alpha_all, beta, gamma, delta, epsilon, zeta;
};

struct Accum {
  std::size_t unsat = 0;
  double max_mem = 0.0;
};

template <VoltageTerms Terms>
void scalar_clauses(const Kernel& k, std::size_t begin, std::size_t end, Accum& acc) {
  // Locals keep the constants in registers; the stores below may otherwise alias them.
  const double alpha_all = k.alpha_all, beta = k.beta, gamma = k.gamma, delta = k.delta;
  const double epsilon = k.epsilon, zeta = k.zeta;
  const double* v = k.v;
  double* dv = k.dv;
  std::size_t unsat = 0;
  double max_mem = acc.max_mem;

  for (std::size_t j = begin; j < end; ++j) {
    const std::uint32_t* idx = k.vars + 3 * j;
    const double* q = k.signs + 3 * j;
    const double v0 = v[idx[0]], v1 = v[idx[1]], v2 = v[idx[2]];
    const double t[3] = {1.0 - q[0] * v0, 1.0 - q[1] * v1, 1.0 - q[2] * v2};
    const int sigma = argmin_slot(t, idx);
    const double c = 0.5 * std::min(std::min(t[0], t[1]), t[2]);
    const double xs = k.xs[j];
    const double xl = k.xl[j];

    if constexpr (Terms != VoltageTerms::RigidityOnly) {
      const double gw = xl * xs;
      const double g0 = 0.5 * q[0] * std::min(t[1], t[2]);
      const double g1 = 0.5 * q[1] * std::min(t[0], t[2]);
      const double g2 = 0.5 * q[2] * std::min(t[0], t[1]);
      dv[idx[0]] += gw * g0;
      dv[idx[1]] += gw * g1;
      dv[idx[2]] += gw * g2;
    }
    if constexpr (Terms != VoltageTerms::GradientOnly) {
      const double rw = (1.0 + zeta * xl) * (1.0 - xs);
      const double vv[3] = {v0, v1, v2};
      dv[idx[sigma]] += rw * (0.5 * (q[sigma] - vv[sigma]));
    }

    const double alpha = k.alpha ? k.alpha[j] : alpha_all;
    const double dxs = beta * (xs + epsilon) * (c - gamma);
    const double dxl = alpha * (c - delta);
    k.dxs[j] = dxs;
    k.dxl[j] = dxl;
    max_mem = std::max(max_mem, std::max(std::abs(dxs), std::abs(dxl)));
    unsat += (c >= 0.5) ? 1 : 0;
  }
  acc.unsat += unsat;
  acc.max_mem = max_mem;
}

#if MEMSAT_AVX2_KERNEL
// Four clauses per iteration. Every lane performs the scalar loop's
// operations in the same order and dv is updated clause by clause, so the
// result is bit-identical to scalar_clauses<All>.
__attribute__((target("avx2"))) void avx2_blocks(const Kernel& k, std::size_t blocks, Accum& acc) {
  const __m256d one = _mm256_set1_pd(1.0), half = _mm256_set1_pd(0.5);
  const __m256d beta = _mm256_set1_pd(k.beta), gamma = _mm256_set1_pd(k.gamma);
  const __m256d delta = _mm256_set1_pd(k.delta), epsilon = _mm256_set1_pd(k.epsilon);
  const __m256d zeta = _mm256_set1_pd(k.zeta), alpha_all = _mm256_set1_pd(k.alpha_all);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d max_mem = _mm256_set1_pd(acc.max_mem);
  std::size_t unsat = 0;
  double* dv = k.dv;
  alignas(32) double add[4][4];
  alignas(32) std::int64_t var[4][4];

  for (std::size_t b = 0; b < blocks; ++b) {
    const std::uint32_t* bv = k.bvars + 12 * b;
    const double* bq = k.bsigns + 12 * b;
    const __m128i i0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(bv));
    const __m128i i1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(bv + 4));
    const __m128i i2 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(bv + 8));
    const __m256d v0 = _mm256_i32gather_pd(k.v, i0, 8);
    const __m256d v1 = _mm256_i32gather_pd(k.v, i1, 8);
    const __m256d v2 = _mm256_i32gather_pd(k.v, i2, 8);
    const __m256d q0 = _mm256_loadu_pd(bq), q1 = _mm256_loadu_pd(bq + 4), q2 = _mm256_loadu_pd(bq + 8);
    const __m256d t0 = _mm256_sub_pd(one, _mm256_mul_pd(q0, v0));
    const __m256d t1 = _mm256_sub_pd(one, _mm256_mul_pd(q1, v1));
    const __m256d t2 = _mm256_sub_pd(one, _mm256_mul_pd(q2, v2));

    const __m256i w0 = _mm256_cvtepu32_epi64(i0), w1 = _mm256_cvtepu32_epi64(i1), w2 = _mm256_cvtepu32_epi64(i2);
    const __m256d sel1 = _mm256_or_pd(
        _mm256_cmp_pd(t1, t0, _CMP_LT_OQ),
        _mm256_and_pd(_mm256_cmp_pd(t1, t0, _CMP_EQ_OQ), _mm256_castsi256_pd(_mm256_cmpgt_epi64(w0, w1))));
    const __m256d tb = _mm256_blendv_pd(t0, t1, sel1);
    const __m256i wb = _mm256_castpd_si256(
        _mm256_blendv_pd(_mm256_castsi256_pd(w0), _mm256_castsi256_pd(w1), sel1));
    const __m256d sel2 = _mm256_or_pd(
        _mm256_cmp_pd(t2, tb, _CMP_LT_OQ),
        _mm256_and_pd(_mm256_cmp_pd(t2, tb, _CMP_EQ_OQ), _mm256_castsi256_pd(_mm256_cmpgt_epi64(wb, w2))));
    const __m256d qs = _mm256_blendv_pd(_mm256_blendv_pd(q0, q1, sel1), q2, sel2);
    const __m256d vs = _mm256_blendv_pd(_mm256_blendv_pd(v0, v1, sel1), v2, sel2);
    const __m256i ws = _mm256_castpd_si256(
        _mm256_blendv_pd(_mm256_castsi256_pd(wb), _mm256_castsi256_pd(w2), sel2));

    // std::min(a, b) returns a unless b < a, which is _mm256_min_pd(b, a).
    const __m256d c = _mm256_mul_pd(half, _mm256_min_pd(t2, _mm256_min_pd(t1, t0)));
    const __m256d xs = _mm256_loadu_pd(k.xs + 4 * b);
    const __m256d xl = _mm256_loadu_pd(k.xl + 4 * b);

    const __m256d gw = _mm256_mul_pd(xl, xs);
    const __m256d g0 = _mm256_mul_pd(_mm256_mul_pd(half, q0), _mm256_min_pd(t2, t1));
    const __m256d g1 = _mm256_mul_pd(_mm256_mul_pd(half, q1), _mm256_min_pd(t2, t0));
    const __m256d g2 = _mm256_mul_pd(_mm256_mul_pd(half, q2), _mm256_min_pd(t1, t0));
    const __m256d rw = _mm256_mul_pd(_mm256_add_pd(one, _mm256_mul_pd(zeta, xl)), _mm256_sub_pd(one, xs));
    _mm256_store_pd(add[0], _mm256_mul_pd(gw, g0));
    _mm256_store_pd(add[1], _mm256_mul_pd(gw, g1));
    _mm256_store_pd(add[2], _mm256_mul_pd(gw, g2));
    _mm256_store_pd(add[3], _mm256_mul_pd(rw, _mm256_mul_pd(half, _mm256_sub_pd(qs, vs))));
    _mm256_store_si256(reinterpret_cast<__m256i*>(var[0]), w0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(var[1]), w1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(var[2]), w2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(var[3]), ws);

    const __m256d alpha = k.alpha ? _mm256_loadu_pd(k.alpha + 4 * b) : alpha_all;
    const __m256d dxs = _mm256_mul_pd(_mm256_mul_pd(beta, _mm256_add_pd(xs, epsilon)), _mm256_sub_pd(c, gamma));
    const __m256d dxl = _mm256_mul_pd(alpha, _mm256_sub_pd(c, delta));
    _mm256_storeu_pd(k.dxs + 4 * b, dxs);
    _mm256_storeu_pd(k.dxl + 4 * b, dxl);
    max_mem = _mm256_max_pd(max_mem, _mm256_max_pd(_mm256_and_pd(dxs, abs_mask), _mm256_and_pd(dxl, abs_mask)));
    unsat += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(c, half, _CMP_GE_OQ))));

    for (int lane = 0; lane < 4; ++lane) {
      dv[var[0][lane]] += add[0][lane];
      dv[var[1][lane]] += add[1][lane];
      dv[var[2][lane]] += add[2][lane];
      dv[var[3][lane]] += add[3][lane];
    }
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, max_mem);
  acc.max_mem = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  acc.unsat += unsat;
}

bool cpu_has_avx2() {
  static const bool has = __builtin_cpu_supports("avx2");
  return has;
}
#endif

template <VoltageTerms Terms>
FlowStats evaluate_impl(const Kernel& k, std::size_t m, std::size_t simd_blocks, std::span<double> dv) {
  std::fill(dv.begin(), dv.end(), 0.0);
  Accum acc;
  std::size_t done = 0;
#if MEMSAT_AVX2_KERNEL
  if constexpr (Terms == VoltageTerms::All) {
    if (simd_blocks > 0) {
      avx2_blocks(k, simd_blocks, acc);
      done = 4 * simd_blocks;
    }
  }
#else
  (void)simd_blocks;
#endif
  scalar_clauses<Terms>(k, done, m, acc);

  FlowStats stats;
  stats.unsatisfied = acc.unsat;
  double max_v = 0.0;
  bool finite = true;
  for (double d : dv) {
    max_v = std::max(max_v, std::abs(d));
    finite &= std::isfinite(d);
  }
  // A non-finite voltage derivative implies non-finite voltages; report it
  // through max_abs so the integrator refuses the step.
  stats.max_abs = finite ? std::max(max_v, acc.max_mem) : std::numeric_limits<double>::quiet_NaN();
  return stats;
}

}  // namespace

double default_zeta(double ratio) {
  if (ratio >= 6.0) return 1e-1;
  if (ratio >= 5.0) return 1e-2;
  if (ratio > 4.27) return 1e-3;
  return 1e-2;
}

SolverParams SolverParams::for_formula(const Formula& f) {
  SolverParams p;
  p.zeta = default_zeta(f.ratio());
  p.xl_max = 1e4 * static_cast<double>(f.num_clauses());
  return p;
}

void SolverParams::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); };
  if (!(delta > 0.0 && delta < gamma && gamma < 0.5)) fail("require 0 < delta < gamma < 1/2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
  if (!(alpha > 0.0) || !(beta > 0.0)) fail("alpha and beta must be positive");
  if (!(zeta > 0.0)) fail("zeta must be positive");
  if (!(xl_max >= 1.0) || !std::isfinite(xl_max)) fail("xl_max must be finite and >= 1");
  if (!(dt_min > 0.0 && dt_min < dt_max) || !std::isfinite(dt_max)) fail("require 0 < dt_min < dt_max");
  if (!(max_change > 0.0)) fail("max_change must be positive");
  if (!(dt_grow >= 1.0)) fail("dt_grow must be >= 1");
  if (!(dt_shrink > 0.0 && dt_shrink < 1.0)) fail("dt_shrink must lie in (0, 1)");
}

bool SolverState::in_bounds(const Formula& f, const SolverParams& p) const {
  if (v.size() != f.num_vars() || xs.size() != f.num_clauses() || xl.size() != f.num_clauses()) return false;
  for (double x : v)
    if (!(x >= -1.0 && x <= 1.0)) return false;
  for (double x : xs)
    if (!(x >= 0.0 && x <= 1.0)) return false;
  for (double x : xl)
    if (!(x >= 1.0 && x <= p.xl_max)) return false;
  return true;
}

double clause_constraint(const Formula& f, std::span<const double> v, std::size_t j) {
  const auto cv = view_clause(f, v, j);
  return 0.5 * std::min({cv.t[0], cv.t[1], cv.t[2]});
}

std::uint32_t argmin_literal(const Formula& f, std::span<const double> v, std::size_t j) {
  const auto cv = view_clause(f, v, j);
  return cv.var[argmin_slot(cv.t, cv.var)];
}

double gradient_term(const Formula& f, std::span<const double> v, std::size_t j, std::uint32_t i) {
  const auto cv = view_clause(f, v, j);
  const int k = slot_of(cv, i, j);
  return 0.5 * cv.q[k] * std::min(cv.t[(k + 1) % 3], cv.t[(k + 2) % 3]);
}

double rigidity_term(const Formula& f, std::span<const double> v, std::size_t j, std::uint32_t i) {
  const auto cv = view_clause(f, v, j);
  const int k = slot_of(cv, i, j);
  if (argmin_slot(cv.t, cv.var) != k) return 0.0;
  return 0.5 * (cv.q[k] - v[i]);
}

double clause_energy(const Formula& f, std::span<const double> v, std::size_t j) {
  const auto cv = view_clause(f, v, j);
  return 0.125 * cv.t[0] * cv.t[1] * cv.t[2];
}

FlowField::FlowField(const Formula& f, const SolverParams& p, bool allow_simd) : formula_(&f), params_(p) {
  params_.validate();
  vars_.reserve(3 * f.num_clauses());
  signs_.reserve(3 * f.num_clauses());
  for (const auto& c : f.clauses()) {
    for (const auto& lit : c) {
      vars_.push_back(lit.var);
      signs_.push_back(static_cast<double>(lit.sign));
    }
  }
#if MEMSAT_AVX2_KERNEL
  if (allow_simd && cpu_has_avx2() && f.num_vars() <= std::numeric_limits<std::int32_t>::max()) {
    simd_blocks_ = f.num_clauses() / 4;
    block_vars_.resize(12 * simd_blocks_);
    block_signs_.resize(12 * simd_blocks_);
    for (std::size_t b = 0; b < simd_blocks_; ++b) {
      for (std::size_t lane = 0; lane < 4; ++lane) {
        for (std::size_t slot = 0; slot < 3; ++slot) {
          block_vars_[12 * b + 4 * slot + lane] = vars_[3 * (4 * b + lane) + slot];
          block_signs_[12 * b + 4 * slot + lane] = signs_[3 * (4 * b + lane) + slot];
        }
      }
    }
  }
#else
  (void)allow_simd;
#endif
}

FlowStats FlowField::evaluate(const SolverState& s, Derivative& out, std::span<const double> clause_alpha,
                              VoltageTerms terms) const {
  const std::size_t m = formula_->num_clauses();
  out.dv.resize(formula_->num_vars());
  out.dxs.resize(m);
  out.dxl.resize(m);
  if (!clause_alpha.empty() && clause_alpha.size() != m) {
    throw Error(ErrorCode::LengthMismatch, "per-clause alpha must have one entry per clause");
  }
  const Kernel k{vars_.data(),
                 signs_.data(),
                 block_vars_.data(),
                 block_signs_.data(),
                 s.v.data(),
                 s.xs.data(),
                 s.xl.data(),
                 clause_alpha.empty() ? nullptr : clause_alpha.data(),
                 out.dv.data(),
                 out.dxs.data(),
                 out.dxl.data(),
                 params_.alpha,
                 params_.beta,
                 params_.gamma,
                 params_.delta,
                 params_.epsilon,
                 params_.zeta};
  switch (terms) {
    case VoltageTerms::All:
      return evaluate_impl<VoltageTerms::All>(k, m, simd_blocks_, out.dv);
    case VoltageTerms::GradientOnly:
      return evaluate_impl<VoltageTerms::GradientOnly>(k, m, 0, out.dv);
    case VoltageTerms::RigidityOnly:
      return evaluate_impl<VoltageTerms::RigidityOnly>(k, m, 0, out.dv);
  }
  return {};
}

Derivative flow_field(const Formula& f, const SolverParams& p, const SolverState& s) {
  if (!s.in_bounds(f, p)) throw Error(ErrorCode::OutOfBoundsState, "state outside the invariant hypercube");
  FlowField field(f, p);
  Derivative d;
  field.evaluate(s, d);
  return d;
}

}  // namespace memsat
