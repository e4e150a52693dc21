#include "memsat/walksat.hpp"

#include <chrono>
#include <limits>
#include <stdexcept>

#include "memsat/error.hpp"
#include "memsat/rng.hpp"

namespace memsat {

void WalkSatParams::validate() const {
  if (!(noise >= 0.0 && noise <= 1.0)) throw Error(ErrorCode::InvalidConfig, "noise must lie in [0, 1]");
}

namespace {

class WalkSat {
 public:
  WalkSat(const Formula& f, Rng& rng) : f_(f), rng_(rng) {
    std::vector<std::int8_t> values(f.num_vars());
    for (auto& v : values) v = rng_.coin() ? 1 : -1;
    assignment_ = Assignment(std::move(values));
    true_count_.assign(f.num_clauses(), 0);
    unsat_pos_.assign(f.num_clauses(), kNone);
    for (std::size_t j = 0; j < f.num_clauses(); ++j) {
      for (const auto& lit : f.clause(j))
        if (is_true(lit)) ++true_count_[j];
      if (true_count_[j] == 0) add_unsat(j);
    }
  }

  bool solved() const noexcept { return unsat_.empty(); }
  const Assignment& assignment() const noexcept { return assignment_; }

  void step(double noise) {
    const auto j = unsat_[rng_.below(unsat_.size())];
    const Clause& c = f_.clause(j);

    std::uint32_t best = c[0].var;
    std::size_t best_break = std::numeric_limits<std::size_t>::max();
    for (const auto& lit : c) {
      const std::size_t b = break_count(lit.var);
      if (b < best_break || (b == best_break && lit.var < best)) {
        best = lit.var;
        best_break = b;
      }
    }
    if (best_break != 0 && rng_.uniform() < noise) best = c[rng_.below(3)].var;
    flip(best);
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool is_true(const Literal& lit) const noexcept { return lit.sign * assignment_[lit.var] == 1; }

  // Clauses that become unsatisfied if `var` flips.
  std::size_t break_count(std::uint32_t var) const noexcept {
    std::size_t count = 0;
    for (const auto& occ : f_.occurrences(var)) {
      if (true_count_[occ.clause] == 1 && is_true(f_.clause(occ.clause)[occ.slot])) ++count;
    }
    return count;
  }

  void flip(std::uint32_t var) {
    assignment_.flip(var);
    for (const auto& occ : f_.occurrences(var)) {
      if (is_true(f_.clause(occ.clause)[occ.slot])) {
        if (true_count_[occ.clause]++ == 0) remove_unsat(occ.clause);
      } else {
        if (--true_count_[occ.clause] == 0) add_unsat(occ.clause);
      }
    }
  }

  void add_unsat(std::size_t j) {
    unsat_pos_[j] = unsat_.size();
    unsat_.push_back(j);
  }

  void remove_unsat(std::size_t j) {
    const std::size_t pos = unsat_pos_[j];
    unsat_[pos] = unsat_.back();
    unsat_pos_[unsat_[pos]] = pos;
    unsat_.pop_back();
    unsat_pos_[j] = kNone;
  }

  const Formula& f_;
  Rng& rng_;
  Assignment assignment_;
  std::vector<std::uint32_t> true_count_;
  std::vector<std::size_t> unsat_;
  std::vector<std::size_t> unsat_pos_;
};

}  // namespace

RunRecord walksat_solve(const Formula& f, const WalkSatParams& params) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(params.seed);
  WalkSat ws(f, rng);

  RunRecord rec;
  rec.seed = params.seed;
  std::uint64_t flips = 0;
  while (!ws.solved() && flips < params.max_flips) {
    ws.step(params.noise);
    ++flips;
  }
  rec.steps = flips;
  if (ws.solved()) {
    if (!verify(f, ws.assignment())) throw std::logic_error("walksat bookkeeping diverged");
    rec.solved = true;
    rec.assignment = ws.assignment();
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace memsat
