#pragma once

// Independent reference implementations used only by the tests.

#include <cstdint>
#include <optional>
#include <vector>

#include "memsat/cnf.hpp"
#include "memsat/rng.hpp"

namespace memsat::testing {

/// Exhaustive search over all 2^n assignments (n <= 20).
inline std::optional<Assignment> brute_force_model(const Formula& f) {
  const std::size_t n = f.num_vars();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    bool all = true;
    for (const auto& c : f.clauses()) {
      bool sat = false;
      for (const auto& lit : c) {
        const int value = (mask >> lit.var) & 1 ? 1 : -1;
        if (value == lit.sign) sat = true;
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) {
      std::vector<std::int8_t> values(n);
      for (std::size_t i = 0; i < n; ++i) values[i] = (mask >> i) & 1 ? 1 : -1;
      return Assignment(std::move(values));
    }
  }
  return std::nullopt;
}

/// Random formula with distinct variables per clause, built without the generator module.
inline Formula random_formula(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<Clause> clauses(m);
  for (auto& c : clauses) {
    std::uint32_t a = static_cast<std::uint32_t>(rng.below(n)), b, d;
    do b = static_cast<std::uint32_t>(rng.below(n)); while (b == a);
    do d = static_cast<std::uint32_t>(rng.below(n)); while (d == a || d == b);
    c = {Literal{a, rng.coin() ? 1 : -1}, Literal{b, rng.coin() ? 1 : -1}, Literal{d, rng.coin() ? 1 : -1}};
  }
  return Formula(n, std::move(clauses));
}

inline Assignment random_assignment(Rng& rng, std::size_t n) {
  std::vector<std::int8_t> values(n);
  for (auto& v : values) v = rng.coin() ? 1 : -1;
  return Assignment(std::move(values));
}

}  // namespace memsat::testing
