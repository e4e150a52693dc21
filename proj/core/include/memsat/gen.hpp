#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "memsat/cnf.hpp"

namespace memsat {

/// Clause-type probabilities of a clause-distribution-controlled instance.
/// Measured against the planted assignment: p0 = no false literal, p1 (each
/// of three placements) = one false literal, p2 (each of three) = two.
struct CdcProbabilities {
  double p0;
  double p1;
  double p2;
};

struct CdcParams {
  std::size_t n = 100;
  double ratio = 4.3;
  double p0 = 0.08;
  std::uint64_t seed = 0;

  /// m = round(ratio * n).
  std::size_t num_clauses() const;
  void validate() const;
};

struct PlantedInstance {
  Formula formula;
  Assignment planted;
  CdcParams params;
};

/// p1 = (1 - 4 p0) / 6, p2 = (1 + 2 p0) / 6. Requires 0 < p0 <= 1/4.
CdcProbabilities cdc_probabilities(double p0);

/// Draws m i.i.d. clauses over three distinct variables with the CDC
/// clause-type law, then hides the all-true solution behind a uniformly
/// random gauge. Duplicate clauses are allowed. Deterministic in the seed.
PlantedInstance generate_cdc(const CdcParams& params);

/// Uniform random 3-SAT: three distinct variables, independent fair signs.
Formula generate_uniform(std::size_t n, double ratio, std::uint64_t seed);

/// Non-empty when (ratio, p0) lies outside the regime where CDC instances
/// are hard for local search (ratio > 4.25 and 0.077 < p0 < 0.25).
std::optional<std::string> hard_regime_warning(double ratio, double p0);

/// Sidecar metadata describing a generated instance, as a JSON document.
std::string instance_metadata_json(const PlantedInstance& inst, bool include_planted);
std::string uniform_metadata_json(std::size_t n, double ratio, std::uint64_t seed, std::size_t m);

}  // namespace memsat
