#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace memsat {

/// A signed occurrence of a 0-based variable. sign is +1 (plain) or -1 (negated).
struct Literal {
  std::uint32_t var = 0;
  int sign = 1;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;

/// Where a variable occurs: clause index and position (0..2) inside it.
struct Occurrence {
  std::uint32_t clause;
  std::uint32_t slot;
};

/// Immutable 3-SAT formula. Every clause holds three literals over pairwise
/// distinct variables; n >= 3 and m >= 1. Construction validates and builds
/// the variable-to-clause incidence lists.
class Formula {
 public:
  Formula(std::size_t num_vars, std::vector<Clause> clauses);

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t num_clauses() const noexcept { return clauses_.size(); }
  double ratio() const noexcept {
    return static_cast<double>(clauses_.size()) / static_cast<double>(num_vars_);
  }

  std::span<const Clause> clauses() const noexcept { return clauses_; }
  const Clause& clause(std::size_t j) const { return clauses_.at(j); }

  /// Occurrences of variable i, in clause order.
  std::span<const Occurrence> occurrences(std::size_t i) const noexcept {
    return {occurrences_.data() + occ_offsets_[i], occ_offsets_[i + 1] - occ_offsets_[i]};
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.num_vars_ == b.num_vars_ && a.clauses_ == b.clauses_;
  }

 private:
  std::size_t num_vars_;
  std::vector<Clause> clauses_;
  std::vector<std::size_t> occ_offsets_;
  std::vector<Occurrence> occurrences_;
};

/// Boolean assignment stored as +1 (TRUE) / -1 (FALSE) per variable.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<std::int8_t> values);
  static Assignment all_true(std::size_t n) { return Assignment(std::vector<std::int8_t>(n, 1)); }

  std::size_t size() const noexcept { return values_.size(); }
  int operator[](std::size_t i) const noexcept { return values_[i]; }
  void flip(std::size_t i) noexcept { values_[i] = static_cast<std::int8_t>(-values_[i]); }
  std::span<const std::int8_t> values() const noexcept { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::int8_t> values_;
};

Formula parse_dimacs(std::string_view text);
Formula parse_dimacs(std::istream& in);
Formula read_dimacs_file(const std::string& path);

std::string serialize_dimacs(const Formula& f);
void write_dimacs_file(const Formula& f, const std::string& path);

/// Checks a clause list against the formula invariants and throws
/// InvalidFormula when it would not form a Formula (e.g. empty list).
void validate_clauses(std::size_t num_vars, std::span<const Clause> clauses);

bool clause_satisfied(const Clause& c, const Assignment& a) noexcept;
bool verify(const Formula& f, const Assignment& a);
std::size_t count_unsatisfied(const Formula& f, const Assignment& a);

/// Applies the local gauge q_ij -> g_i * q_ij. If g solves f then the
/// gauged formula is solved by the all-true assignment.
Formula gauge(const Formula& f, const Assignment& g);

/// DIMACS model line: "v 1 -2 3 ... 0".
std::string model_line(const Assignment& a);

}  // namespace memsat
