#pragma once

#include <functional>
#include <random>

#include "nrsurf/common.hpp"
#include "nrsurf/frontend.hpp"

namespace nrsurf {

struct EtsConfig {
  double slot_sec = kEtsSlotSec;  // one 3.84 Msps sample, ~260.4 ns
  int slots_per_symbol = kEtsSlotsPerSymbol;
  int sync_symbols = 5;
  int stride = 13;  // slots the sampling offset advances per 20 ms frame
};

// ETS over `sync_symbols` back-to-back repeated symbols: sample i is taken at
// symbol_starts[i] + (base_offset + i) * slot (offset wraps within the
// symbol). Collectively equivalent to consecutive 3.84 Msps samples.
rvec equivalent_time_sample(const EnvelopeSignal& rx, const std::vector<double>& symbol_starts,
                            int base_offset, const EtsConfig& cfg = {});

// Smallest N with union_{n<N} {stride*n + j mod slots : j < samples_per_frame}
// covering all slots. Brute-force residue-coverage oracle.
int minimal_cover_frames(int stride, int samples_per_frame, int slots = kEtsSlotsPerSymbol);

// Matched-filter template: the clean receiver-chain envelope of the
// max-power NBPU symbol on the 260 ns slot grid.
const rvec& sync_template();

struct BootstrapResult {
  int window_center_slot = 0;
  int frames_used = 0;
  double score = 0.0;  // normalized circular correlation at the peak
  bool found = false;
};

// Appendix-style bootstrap: sweep the whole symbol via ETS, then locate the
// symbol center by full matched filtering. `adc(frame, slot)` returns the
// receiver's reading for the sample it believes sits at `slot` of the sync
// symbol; the simulation injects the true (unknown) offset behind it.
BootstrapResult bootstrap_sweep(const std::function<double(int frame, int slot)>& adc,
                                const EtsConfig& cfg = {}, double score_threshold = 0.5,
                                int max_frames = 1024);

struct WindowScore {
  double score = 0.0;        // zero-mean normalized correlation, [-1, 1]
  int offset_slots = 0;      // estimated misalignment, in {-1, 0, +1}
  double offset_frac = 0.0;  // parabolic-vertex refinement of the same
};

// Correlate the 5 ETS samples against the template around window_center with
// a +-1 slot search (the 780 ns central window). Ties break to the earliest
// slot. The fractional estimate is the vertex of the parabola through the
// three correlations (falls back to the integer when they are not concave).
WindowScore matched_filter_window(const rvec& samples, const rvec& tmpl, int window_center_slot);

// Per-period tracking state.
struct SyncState {
  double error_slots = 0.0;  // estimate minus ground truth, in slots
  int window_center_slot = kEtsSlotsPerSymbol / 2;
  bool locked = false;
  int low_score_streak = 0;
  double last_score = 0.0;
};

struct SyncEngineConfig {
  double snr_db = std::numeric_limits<double>::infinity();
  double drift_ns_per_period = 0.0;
  double score_threshold = 0.2;
  int unlock_after = 3;
  // Frames accumulated per estimate. Drift per 20 ms frame is far below one
  // slot, so the tracker can average the 5-sample window across consecutive
  // frames before deciding.
  int avg_periods = 64;
  EtsConfig ets;
};

// One 20 ms tracking update: inject drift, take the 5 ETS samples through the
// receiver chain, correct the estimate by the matched-filter offset. When
// nbpu_present is false (missed frame) only the drift accumulates.
SyncState synchronize_period(const SyncState& state, const SyncEngineConfig& cfg,
                             std::mt19937_64& rng, bool nbpu_present = true);

struct SyncSweepPoint {
  double snr_db;
  int trials;
  double mean_error_ns;
  double p95_error_ns;
  double max_error_ns;
};

// Monte-Carlo sync-error sweep in the locked-tracking regime: per trial the
// true timing offset is a uniform sub-slot fraction, one matched-filter
// update (averaged over avg_periods frames) is performed and the residual
// recorded.
std::vector<SyncSweepPoint> sync_error_sweep(const std::vector<double>& snr_db_list,
                                             int trials, uint64_t seed, int avg_periods = 64);

// NR reconfiguration-timing budget pieces.
inline constexpr double kFr2SymbolCpSec = 585e-9;
inline constexpr double kHalfSubframeCpSec = 1106e-9;
inline constexpr double kReconfigLatencySec = 10e-9;
inline constexpr double kNonColocatedPenaltySec = 260e-9;

}  // namespace nrsurf
