#include "memsat/cnf.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <iterator>
#include <sstream>

#include "memsat/error.hpp"

namespace memsat {
namespace {

void check_clause(std::size_t num_vars, const Clause& c, std::size_t index) {
  for (std::size_t k = 0; k < 3; ++k) {
    if (c[k].var >= num_vars) {
      throw Error(ErrorCode::VarOutOfRange, "clause " + std::to_string(index) + " references variable " +
                                                std::to_string(c[k].var + 1) + " of " +
                                                std::to_string(num_vars));
    }
    if (c[k].sign != 1 && c[k].sign != -1) {
      throw Error(ErrorCode::InvalidFormula, "literal sign must be +1 or -1");
    }
  }
  if (c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var) {
    throw Error(ErrorCode::DuplicateVarInClause, "clause " + std::to_string(index) + " repeats a variable");
  }
}

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\f' || ch == '\v'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

long long parse_int(std::string_view tok, std::size_t line_no) {
  long long value = 0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw Error(ErrorCode::Syntax, "line " + std::to_string(line_no) + ": bad token '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

Formula::Formula(std::size_t num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  validate_clauses(num_vars_, clauses_);

  occ_offsets_.assign(num_vars_ + 1, 0);
  for (const auto& c : clauses_)
    for (const auto& lit : c) ++occ_offsets_[lit.var + 1];
  for (std::size_t i = 0; i < num_vars_; ++i) occ_offsets_[i + 1] += occ_offsets_[i];
  occurrences_.resize(occ_offsets_.back());
  std::vector<std::size_t> fill(occ_offsets_.begin(), occ_offsets_.end() - 1);
  for (std::size_t j = 0; j < clauses_.size(); ++j)
    for (std::uint32_t k = 0; k < 3; ++k)
      occurrences_[fill[clauses_[j][k].var]++] = {static_cast<std::uint32_t>(j), k};
}

void validate_clauses(std::size_t num_vars, std::span<const Clause> clauses) {
  if (num_vars < 3) throw Error(ErrorCode::InvalidFormula, "a 3-SAT formula needs at least 3 variables");
  if (clauses.empty()) throw Error(ErrorCode::InvalidFormula, "formula has no clauses");
  for (std::size_t j = 0; j < clauses.size(); ++j) check_clause(num_vars, clauses[j], j);
}

Assignment::Assignment(std::vector<std::int8_t> values) : values_(std::move(values)) {
  for (auto v : values_)
    if (v != 1 && v != -1) throw Error(ErrorCode::OutOfRange, "assignment values must be +1 or -1");
}

Formula parse_dimacs(std::string_view text) {
  std::size_t num_vars = 0;
  std::size_t declared = 0;
  bool have_header = false;
  std::vector<Clause> clauses;
  std::vector<long long> pending;
  std::size_t line_no = 0;

  auto flush_clause = [&]() {
    if (pending.size() != 3) {
      throw Error(ErrorCode::NotThreeSat, "clause " + std::to_string(clauses.size() + 1) + " has " +
                                              std::to_string(pending.size()) + " literals");
    }
    Clause c;
    for (std::size_t k = 0; k < 3; ++k) {
      const long long lit = pending[k];
      const auto mag = static_cast<unsigned long long>(lit < 0 ? -lit : lit);
      if (mag > num_vars) {
        throw Error(ErrorCode::VarOutOfRange, "literal " + std::to_string(lit) + " exceeds " +
                                                  std::to_string(num_vars) + " variables");
      }
      c[k] = Literal{static_cast<std::uint32_t>(mag - 1), lit < 0 ? -1 : 1};
    }
    check_clause(num_vars, c, clauses.size());
    clauses.push_back(c);
    pending.clear();
  };

  std::size_t pos = 0;
  bool done = false;
  while (pos <= text.size() && !done) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens[0].front() == 'c') continue;
    if (tokens[0] == "%") break;  // SATLIB trailer
    if (tokens[0] == "p") {
      if (have_header || tokens.size() != 4 || tokens[1] != "cnf") {
        throw Error(ErrorCode::Syntax, "line " + std::to_string(line_no) + ": malformed header");
      }
      const long long n = parse_int(tokens[2], line_no);
      const long long m = parse_int(tokens[3], line_no);
      if (n < 0 || m < 0) throw Error(ErrorCode::Syntax, "negative counts in header");
      num_vars = static_cast<std::size_t>(n);
      declared = static_cast<std::size_t>(m);
      have_header = true;
      clauses.reserve(declared);
      continue;
    }
    if (!have_header) {
      throw Error(ErrorCode::Syntax, "line " + std::to_string(line_no) + ": clause before 'p cnf' header");
    }
    for (auto tok : tokens) {
      if (tok == "%") {
        done = true;
        break;
      }
      const long long lit = parse_int(tok, line_no);
      if (lit == 0) {
        flush_clause();
      } else {
        pending.push_back(lit);
      }
    }
  }
  if (!have_header) throw Error(ErrorCode::Syntax, "missing 'p cnf' header");
  if (!pending.empty()) flush_clause();  // tolerate a missing final terminator
  if (clauses.size() != declared) {
    throw Error(ErrorCode::Syntax, "header declares " + std::to_string(declared) + " clauses, found " +
                                       std::to_string(clauses.size()));
  }
  return Formula(num_vars, std::move(clauses));
}

Formula parse_dimacs(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_dimacs(std::string_view(text));
}

Formula read_dimacs_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return parse_dimacs(in);
}

std::string serialize_dimacs(const Formula& f) {
  std::string out = "p cnf " + std::to_string(f.num_vars()) + " " + std::to_string(f.num_clauses()) + "\n";
  out.reserve(out.size() + f.num_clauses() * 16);
  for (const auto& c : f.clauses()) {
    for (const auto& lit : c) {
      if (lit.sign < 0) out += '-';
      out += std::to_string(lit.var + 1);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

void write_dimacs_file(const Formula& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << serialize_dimacs(f);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

bool clause_satisfied(const Clause& c, const Assignment& a) noexcept {
  for (const auto& lit : c)
    if (lit.sign * a[lit.var] == 1) return true;
  return false;
}

bool verify(const Formula& f, const Assignment& a) {
  return count_unsatisfied(f, a) == 0;
}

std::size_t count_unsatisfied(const Formula& f, const Assignment& a) {
  if (a.size() != f.num_vars()) {
    throw Error(ErrorCode::LengthMismatch, "assignment has " + std::to_string(a.size()) + " values for " +
                                               std::to_string(f.num_vars()) + " variables");
  }
  std::size_t unsat = 0;
  for (const auto& c : f.clauses())
    if (!clause_satisfied(c, a)) ++unsat;
  return unsat;
}

Formula gauge(const Formula& f, const Assignment& g) {
  if (g.size() != f.num_vars()) throw Error(ErrorCode::LengthMismatch, "gauge length differs from variable count");
  std::vector<Clause> clauses(f.clauses().begin(), f.clauses().end());
  for (auto& c : clauses)
    for (auto& lit : c) lit.sign *= g[lit.var];
  return Formula(f.num_vars(), std::move(clauses));
}

std::string model_line(const Assignment& a) {
  std::string out = "v";
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += ' ';
    if (a[i] < 0) out += '-';
    out += std::to_string(i + 1);
  }
  out += " 0";
  return out;
}

}  // namespace memsat
