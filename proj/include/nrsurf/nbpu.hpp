#pragma once

#include <random>

#include "nrsurf/channel.hpp"
#include "nrsurf/emulation.hpp"
#include "nrsurf/frontend.hpp"

namespace nrsurf {

// One control frame inside a single NB-IoT subframe: symbols 0-4 are the
// always-ON sync train, 7-11 carry one OOK bit each, {5,6,12,13} are the NRS
// columns and stay untouched.
struct NbpuFrame {
  static constexpr int kInfoBits = 5;
  static constexpr std::array<int, 5> kSyncSymbols{0, 1, 2, 3, 4};
  static constexpr std::array<int, 5> kInfoSymbols{7, 8, 9, 10, 11};

  std::array<uint8_t, kInfoBits> info_bits{};

  static NbpuFrame from_value(unsigned value);  // throws if value >= 32
  unsigned value() const;
};

// Scheduled reconfiguration list carried (by index) in a frame's info bits.
struct ReconfigInfo {
  struct Entry {
    double time_sec;  // within the 20 ms period
    int beam_id;
  };
  std::vector<Entry> entries;
  int surface_id = 0;

  void validate() const;  // strictly increasing times
};

// Phase-target set for the emulation solver: ON phases on sync symbols,
// ON/OFF per info bit on the info symbols.
PhaseTargets assemble_frame(const NbpuFrame& frame);

// Adaptive OOK slicer state: threshold halfway between the running ON level
// (from sync symbols) and the running floor estimate.
struct OokThreshold {
  double on_level = 0.0;
  double floor_level = 0.0;
  int updates = 0;

  void update(double sync_energy, double floor_energy);
  double value() const;
};

// bit_i = (center sample of info symbol i) > threshold.
std::array<uint8_t, NbpuFrame::kInfoBits> demodulate_ook(
    const std::array<double, NbpuFrame::kInfoBits>& center_samples, double threshold);

// Noiseless ON/OFF center-sample energies through the receiver chain.
double on_center_level();
double off_center_level();

struct BerPoint {
  double snr_db;
  long symbols;
  long errors;
  double ber;
};

// Fast Monte-Carlo symbol-error rate at one in-band SNR; optional extra
// interference tones (relative-power template) are added before the filter.
BerPoint ber_at_snr(double snr_db, long symbols, uint64_t seed,
                    const std::vector<InterferenceTone>& interference = {});

std::vector<BerPoint> ber_sweep(const std::vector<double>& snr_db_list, long symbols_per_point,
                                uint64_t seed,
                                const std::vector<InterferenceTone>& interference = {});

}  // namespace nrsurf
