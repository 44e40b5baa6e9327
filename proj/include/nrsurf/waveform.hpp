#pragma once

#include <string>

#include "nrsurf/common.hpp"
#include "nrsurf/resource_grid.hpp"

namespace nrsurf {

struct BasebandSignal {
  cvec samples;
  double sample_rate = kSampleRateHz;
  double t0 = 0.0;  // absolute start time (s)

  double duration() const { return samples.size() / sample_rate; }
  // Nearest-sample value at absolute time t; throws std::out_of_range.
  cplx at_time(double t) const;
  int index_of(double t) const;
};

// Per-symbol CP lengths and useful-part start offsets (samples) inside one
// subframe, LTE normal-CP profile at 3.84 Msps.
struct SubframeTiming {
  std::array<int, kSymbolsPerSubframe> cp_len{};
  std::array<int, kSymbolsPerSubframe> useful_start{};  // samples from subframe start
  SubframeTiming();
};

const SubframeTiming& subframe_timing();

// OFDM-modulate one subframe: subcarrier c occupies c * 15 kHz at complex
// baseband, unit amplitude, CP prepended per the normal-CP profile.
BasebandSignal modulate_subframe(const ResourceGrid& grid, double t0 = 0.0);

// Noiseless FFT demodulation back to per-RE phases (nearest constellation
// point for data REs). Test/inspection path.
ResourceGrid demodulate_subframe(const BasebandSignal& sig, const ResourceGrid& nrs_layout);

// Periodic repetition of a single grid column (one OFDM symbol incl. 18-sample
// CP), used for ETS experiments on back-to-back identical symbols. Returns the
// signal plus the useful-part start indices of each repetition.
struct SymbolTrain {
  BasebandSignal signal;
  std::vector<int> useful_starts;
};
SymbolTrain repeat_symbol(const std::array<double, kNumSubcarriers>& phases, int repeats,
                          double t0 = 0.0);

// Interleaved float32 little-endian I/Q.
void write_iq(const BasebandSignal& sig, const std::string& path);

}  // namespace nrsurf
