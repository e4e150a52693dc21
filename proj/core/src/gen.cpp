#include "memsat/gen.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "memsat/error.hpp"
#include "memsat/rng.hpp"

namespace memsat {
namespace {

// Sub-stream ids of an instance seed.
constexpr std::uint64_t kClauseStream = 1;
constexpr std::uint64_t kPlantStream = 2;

std::size_t rounded_clause_count(std::size_t n, double ratio) {
  if (n < 3) throw Error(ErrorCode::OutOfRange, "need at least 3 variables");
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw Error(ErrorCode::OutOfRange, "ratio must be positive");
  const double m = std::round(ratio * static_cast<double>(n));
  if (m < 1.0) throw Error(ErrorCode::OutOfRange, "ratio * n rounds to zero clauses");
  return static_cast<std::size_t>(m);
}

std::array<std::uint32_t, 3> distinct_triple(Rng& rng, std::size_t n) {
  std::array<std::uint32_t, 3> v{};
  v[0] = static_cast<std::uint32_t>(rng.below(n));
  do {
    v[1] = static_cast<std::uint32_t>(rng.below(n));
  } while (v[1] == v[0]);
  do {
    v[2] = static_cast<std::uint32_t>(rng.below(n));
  } while (v[2] == v[0] || v[2] == v[1]);
  return v;
}

}  // namespace

std::size_t CdcParams::num_clauses() const { return rounded_clause_count(n, ratio); }

void CdcParams::validate() const {
  (void)cdc_probabilities(p0);
  (void)num_clauses();
}

CdcProbabilities cdc_probabilities(double p0) {
  if (!(p0 > 0.0 && p0 <= 0.25)) throw Error(ErrorCode::OutOfRange, "p0 must lie in (0, 0.25]");
  return {p0, (1.0 - 4.0 * p0) / 6.0, (1.0 + 2.0 * p0) / 6.0};
}

PlantedInstance generate_cdc(const CdcParams& params) {
  params.validate();
  const auto probs = cdc_probabilities(params.p0);
  const std::size_t m = params.num_clauses();
  const double one_negation = probs.p0 + 3.0 * probs.p1;

  Rng clause_rng(derive_seed(params.seed, kClauseStream));
  std::vector<Clause> clauses(m);
  for (auto& c : clauses) {
    const auto vars = distinct_triple(clause_rng, params.n);
    std::array<int, 3> q{1, 1, 1};
    const double u = clause_rng.uniform();
    if (u < probs.p0) {
      // all three literals true under the planted assignment
    } else if (u < one_negation) {
      q[clause_rng.below(3)] = -1;
    } else {
      q.fill(-1);
      q[clause_rng.below(3)] = 1;
    }
    for (std::size_t k = 0; k < 3; ++k) c[k] = Literal{vars[k], q[k]};
  }

  Rng plant_rng(derive_seed(params.seed, kPlantStream));
  std::vector<std::int8_t> values(params.n);
  for (auto& v : values) v = plant_rng.coin() ? 1 : -1;
  Assignment planted(std::move(values));

  for (auto& c : clauses)
    for (auto& lit : c) lit.sign *= planted[lit.var];

  return {Formula(params.n, std::move(clauses)), std::move(planted), params};
}

Formula generate_uniform(std::size_t n, double ratio, std::uint64_t seed) {
  const std::size_t m = rounded_clause_count(n, ratio);
  Rng rng(derive_seed(seed, kClauseStream));
  std::vector<Clause> clauses(m);
  for (auto& c : clauses) {
    const auto vars = distinct_triple(rng, n);
    for (std::size_t k = 0; k < 3; ++k) c[k] = Literal{vars[k], rng.coin() ? 1 : -1};
  }
  return Formula(n, std::move(clauses));
}

std::optional<std::string> hard_regime_warning(double ratio, double p0) {
  if (ratio <= 4.25 || p0 <= 0.077 || p0 >= 0.25) {
    return "parameters (ratio=" + std::to_string(ratio) + ", p0=" + std::to_string(p0) +
           ") are outside the hard CDC regime ratio > 4.25, 0.077 < p0 < 0.25";
  }
  return std::nullopt;
}

std::string instance_metadata_json(const PlantedInstance& inst, bool include_planted) {
  const auto probs = cdc_probabilities(inst.params.p0);
  nlohmann::json j;
  j["generator"] = "cdc";
  j["n"] = inst.params.n;
  j["m"] = inst.formula.num_clauses();
  j["ratio"] = inst.params.ratio;
  j["p0"] = probs.p0;
  j["p1"] = probs.p1;
  j["p2"] = probs.p2;
  j["seed"] = inst.params.seed;
  j["duplicate_clauses_allowed"] = true;
  if (include_planted) {
    std::vector<int> planted(inst.planted.values().begin(), inst.planted.values().end());
    j["planted"] = planted;
  } else {
    j["planted"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string uniform_metadata_json(std::size_t n, double ratio, std::uint64_t seed, std::size_t m) {
  nlohmann::json j;
  j["generator"] = "uniform";
  j["n"] = n;
  j["m"] = m;
  j["ratio"] = ratio;
  j["seed"] = seed;
  j["duplicate_clauses_allowed"] = true;
  return j.dump(2) + "\n";
}

}  // namespace memsat
