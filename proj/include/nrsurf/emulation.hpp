#pragma once

#include <string>

#include "nrsurf/coding_pipeline.hpp"
#include "nrsurf/gf2.hpp"

namespace nrsurf {

// One target resource element: data symbol (never an NRS column), subcarrier,
// and the QPSK phase it must carry.
struct PhaseTarget {
  int symbol;
  int subcarrier;
  double phase;
};

struct PhaseTargets {
  std::vector<PhaseTarget> entries;

  void validate() const;  // throws std::invalid_argument
  static PhaseTargets read_csv(const std::string& path);
};

// Affine GF(2) model of the coding pipeline restricted to the constrained
// bit positions: encode(x)|constrained = A x ^ b.
struct AffineModel {
  Gf2Matrix a;   // kConstrainedBits x kPayloadBits
  BitVec b;      // kConstrainedBits
  int rank = 0;
};

// Probe the pipeline with unit vectors; verifies the model against `probes`
// random payloads and throws std::logic_error on any mismatch.
AffineModel build_affine_model(const CodingPipeline& pipeline, int probes = 100,
                               uint64_t probe_seed = 1);

struct SolveResult {
  BitVec payload;                 // 256 bits, free variables zeroed
  std::vector<int> unsat_bits;   // constrained-bit indices that cannot be met
  bool ok() const { return unsat_bits.empty(); }
  std::string payload_hex() const;
};

// Solve for a payload whose encoding realizes every target phase. Targets may
// cover any subset of the 120 data REs; unaddressed constrained REs are left
// free (their rows are dropped from the system).
SolveResult solve_payload(const PhaseTargets& targets, const CodingPipeline& pipeline,
                          const AffineModel& model);

// Number of subcarrier pairs with both members free, given the count of NRS
// subcarriers in a symbol.
int controllable_harmonics(int nrs_subcarriers_in_symbol);

}  // namespace nrsurf
