#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nrsurf/common.hpp"

namespace nrsurf {

// Symbol columns of a subframe that carry NRS pilots.
inline constexpr std::array<int, 4> kNrsSymbols = {5, 6, 12, 13};
// Default NRS subcarrier positions inside an NRS-bearing symbol. The exact
// pair is deployment-specific; two subcarriers spaced 6 apart is the usual
// single-port layout.
inline constexpr std::array<int, 2> kDefaultNrsSubcarriers = {0, 6};
inline constexpr double kNrsPhase = kPi / 4.0;

bool is_nrs_symbol(int symbol);

// Gray-mapped QPSK: bit pair (b0,b1) -> phase of (1-2*b0 + j(1-2*b1))/sqrt(2).
double qpsk_phase(int b0, int b1);
// Inverse map: phase (one of the four constellation phases) -> bit pair.
std::pair<int, int> qpsk_bits(double phase);

// One NB-IoT subframe: 14 symbols x 12 subcarriers of QPSK phases with the
// NRS resource elements marked.
struct ResourceGrid {
  std::array<std::array<double, kNumSubcarriers>, kSymbolsPerSubframe> phase{};
  std::array<std::array<bool, kNumSubcarriers>, kSymbolsPerSubframe> nrs{};

  // All-NRS-marked grid with data phases defaulted to pi/4.
  static ResourceGrid make(const std::array<int, 2>& nrs_sc = kDefaultNrsSubcarriers);

  // Throws std::invalid_argument on a bad grid (phase not in the QPSK set,
  // NRS outside the NRS symbol columns, wrong NRS count).
  void validate() const;

  void write_csv(const std::string& path) const;
};

// Enumeration of the data (non-NRS) resource elements of a grid in
// symbol-major order. Used both by the modulator and the coding pipeline.
std::vector<std::pair<int, int>> data_re_order(const ResourceGrid& grid);

struct FrameSchedule {
  double period_sec = kPeriodSec;
  std::vector<int> nbpu_subframe_indices;  // one per surface
  int symbols_per_period = kSymbolsPerPeriod;
};

struct FrameScheduleConfig {
  std::vector<int> nbpu_subframe_indices = {0};
};

FrameSchedule build_frame_schedule(const FrameScheduleConfig& cfg = {});

// Start time (s) of OFDM symbol n counted from t=0 with the 20 ms schedule
// repeating indefinitely. Start is the beginning of the symbol's CP.
double symbol_start_time(int n);

}  // namespace nrsurf
