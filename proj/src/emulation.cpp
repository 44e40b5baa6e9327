#include "nrsurf/emulation.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nrsurf {

void PhaseTargets::validate() const {
  for (const auto& t : entries) {
    if (t.symbol < 0 || t.symbol >= kSymbolsPerSubframe || is_nrs_symbol(t.symbol))
      throw std::invalid_argument("target addresses an NRS symbol column");
    if (t.subcarrier < 0 || t.subcarrier >= kNumSubcarriers)
      throw std::invalid_argument("target subcarrier out of range");
  }
}

PhaseTargets PhaseTargets::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  PhaseTargets t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-')) continue;  // header
    std::istringstream ss(line);
    PhaseTarget e;
    char comma;
    if (ss >> e.symbol >> comma >> e.subcarrier >> comma >> e.phase)
      t.entries.push_back(e);
  }
  t.validate();
  return t;
}

AffineModel build_affine_model(const CodingPipeline& pipeline, int probes,
                               uint64_t probe_seed) {
  const auto& pos = pipeline.constrained_positions();
  const int m = int(pos.size());
  AffineModel model;
  model.a = Gf2Matrix(m, kPayloadBits);

  const BitVec zero(kPayloadBits, 0);
  const BitVec enc0 = pipeline.encode_bits(zero);
  model.b.resize(m);
  for (int r = 0; r < m; ++r) model.b[r] = enc0[pos[r]];

  BitVec unit(kPayloadBits, 0);
  for (int j = 0; j < kPayloadBits; ++j) {
    unit[j] = 1;
    const BitVec enc = pipeline.encode_bits(unit);
    unit[j] = 0;
    for (int r = 0; r < m; ++r) model.a.set(r, j, (enc[pos[r]] ^ model.b[r]) & 1);
  }
  model.rank = model.a.rank();

  // Affinity check on random probes; a mismatch means the pipeline is not
  // linear and the model is unusable.
  std::mt19937_64 rng(probe_seed);
  for (int p = 0; p < probes; ++p) {
    BitVec x(kPayloadBits);
    for (auto& bit : x) bit = uint8_t(rng() & 1);
    const BitVec enc = pipeline.encode_bits(x);
    for (int r = 0; r < m; ++r) {
      uint8_t pred = model.b[r];
      for (int j = 0; j < kPayloadBits; ++j) pred ^= uint8_t(model.a.get(r, j) & x[j]);
      if (pred != enc[pos[r]]) throw std::logic_error("pipeline failed affinity probe");
    }
  }
  return model;
}

SolveResult solve_payload(const PhaseTargets& targets, const CodingPipeline& pipeline,
                          const AffineModel& model) {
  targets.validate();
  // Row index of a data-symbol RE within the constrained system.
  std::vector<std::vector<int>> re_row(kSymbolsPerSubframe,
                                       std::vector<int>(kNumSubcarriers, -1));
  {
    int j = 0;
    for (const auto& [s, c] : pipeline.re_order()) {
      if (!is_nrs_symbol(s)) re_row[s][c] = j;
      ++j;
    }
  }
  std::vector<int> rows;
  BitVec rhs;
  std::vector<int> row_to_constrained;
  for (const auto& t : targets.entries) {
    const int re_index = re_row[t.symbol][t.subcarrier];
    if (re_index < 0) throw std::logic_error("target RE not in data set");
    // Constrained rows are enumerated two per data RE in the same order.
    int base = 0;
    {
      // position of this RE among the non-NRS-symbol REs
      int k = 0;
      for (const auto& [s, c] : pipeline.re_order()) {
        if (is_nrs_symbol(s)) continue;
        if (s == t.symbol && c == t.subcarrier) break;
        ++k;
      }
      base = 2 * k;
    }
    const auto [b0, b1] = qpsk_bits(t.phase);
    rows.push_back(base);
    rhs.push_back(uint8_t(b0 ^ model.b[base]));
    row_to_constrained.push_back(base);
    rows.push_back(base + 1);
    rhs.push_back(uint8_t(b1 ^ model.b[base + 1]));
    row_to_constrained.push_back(base + 1);
  }

  Gf2Matrix sys(int(rows.size()), kPayloadBits);
  for (int r = 0; r < int(rows.size()); ++r)
    for (int j = 0; j < kPayloadBits; ++j)
      if (model.a.get(rows[r], j)) sys.set(r, j, true);

  SolveResult res;
  std::vector<int> unsat;
  auto x = sys.solve(rhs, &unsat);
  if (!x) {
    for (int r : unsat) res.unsat_bits.push_back(row_to_constrained[r]);
    res.payload.assign(kPayloadBits, 0);
    return res;
  }
  res.payload = std::move(*x);
  return res;
}

std::string SolveResult::payload_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (size_t i = 0; i + 3 < payload.size(); i += 4) {
    int v = payload[i] << 3 | payload[i + 1] << 2 | payload[i + 2] << 1 | payload[i + 3];
    s += digits[v];
  }
  return s;
}

int controllable_harmonics(int nrs_subcarriers_in_symbol) {
  const int free_sc = kNumSubcarriers - nrs_subcarriers_in_symbol;
  if (free_sc < 0) throw std::invalid_argument("more NRS than subcarriers");
  return free_sc * (free_sc - 1) / 2;
}

}  // namespace nrsurf
