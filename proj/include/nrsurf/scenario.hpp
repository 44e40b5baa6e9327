#pragma once

#include <optional>
#include <string>

#include "nrsurf/power.hpp"
#include "nrsurf/surface.hpp"

namespace nrsurf {

enum class CpMode { kSymbol, kHalfSubframe };  // 585 ns vs 1106 ns budget

struct PeriodLayout {
  double period_sec = kPeriodSec;
  double sweep_window_sec = 5e-3;
  int ssb_count = 64;
  int surface_ssb_count = 8;
  double report_delay_sec = 27e-3;  // in [25, 29] ms
  CpMode cp_mode = CpMode::kSymbol;
  bool non_colocated = false;  // adds the 260 ns propagation penalty

  double data_window_sec() const { return period_sec - sweep_window_sec; }
  void validate() const;
  double cp_budget_sec() const;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

// UE with a small set of selectable antennas (offsets from the body position)
// walking a polyline at constant speed.
struct UeDef {
  std::vector<Vec2> antennas{{0.0, 0.0}};
  std::vector<Vec2> waypoints;  // at least the start position
  double speed_mps = 1.0;

  Vec2 position(double t) const;
};

// Surface normal points along +x of its local frame; bearing of a point is
// the angle from the normal.
struct SurfaceDef {
  Vec2 position;
  double facing_deg = 0.0;  // world heading of the normal
  SurfaceConfig cfg;
  rvec codebook_targets_deg;  // one codeword per surface SSB

  double bearing_to(const Vec2& p) const;
};

// Time-windowed attenuation on one UE antenna's surface path.
struct BlockageEvent {
  int ue = 0;
  int antenna = 0;
  double from_sec = 0.0;
  double to_sec = 0.0;
  double attenuation_db = 30.0;
};

struct Environment {
  Vec2 bs_position;
  std::vector<SurfaceDef> surfaces;
  std::vector<UeDef> ues;
  std::vector<BlockageEvent> blockages;
  // Reference SNR at 1 m x 1 m legs with 0 dB array term.
  double ref_snr_db = 60.0;
  double path_loss_exponent = 2.0;

  double blockage_db(int ue, int antenna, double t) const;
};

// Tx budget minus both log-distance legs, plus the (absolute) array-factor
// term of the applied codeword at the antenna's bearing, minus blockage. The
// direct BS->UE path is out of scope (blocked by construction).
double ue_snr(const Environment& env, int surface, const std::vector<uint8_t>& beam_bits,
              int ue, int antenna, double t);

// Best antenna's SNR (selection combining).
double ue_snr_best_antenna(const Environment& env, int surface,
                           const std::vector<uint8_t>& beam_bits, int ue, double t);

struct BeamScheduleEntry {
  double time_sec;  // within the period, CP-snapped
  int surface_id;
  int beam_id;
};

struct BeamSchedule {
  std::vector<BeamScheduleEntry> entries;
  CpMode cp_mode = CpMode::kSymbol;
};

// Snap to the latest CP start at or before t (period-relative seconds).
double snap_to_cp(double t, CpMode mode);

// Equal split of the data window among the reporting UEs; one entry per slice
// start carrying that UE's beam.
BeamSchedule schedule_multi(const std::vector<std::pair<int, int>>& ue_beams, int surface_id,
                            const PeriodLayout& layout);

struct SimEvent {
  double t;
  std::string kind;
  int surface = -1;
  int beam = -1;
  int ue = -1;
  double snr_db = std::numeric_limits<double>::quiet_NaN();
};

struct PendingReport {
  double ready_sec;  // absolute
  int ue;
  int surface;
  int beam;
};

struct SimState {
  int period = 0;
  std::vector<int> applied_beam;            // per surface
  std::vector<std::vector<int>> best_beam;  // [surface][ue], folded from reports
  std::vector<PendingReport> in_flight;
  std::vector<SimEvent> events;
};

SimState make_state(const Environment& env);

// One 20 ms period: NBPU decode (or hold-last on a miss), SSB sweep with the
// surface cycling its codewords, per-UE argmax measurement, report after
// report_delay, CP-aligned reconfigurations, per-slice served-SNR samples.
void run_period(SimState& state, const Environment& env, const PeriodLayout& layout,
                bool nbpu_ok = true);

// Power timeline for one period: 1 NBPU subframe + (sweep + schedule)
// reconfiguration bursts, each with a 10 us wake lead.
PowerTimeline duty_cycle_timeline(const PeriodLayout& layout, const BeamSchedule& schedule);

struct ScenarioConfig {
  int version = 1;
  Environment env;
  PeriodLayout layout;
  int periods = 50;
  std::vector<int> nbpu_miss_periods;  // periods whose NBPU decode fails

  static ScenarioConfig from_json_file(const std::string& path);
};

SimState run_scenario(const ScenarioConfig& cfg);

void write_event_log(const std::vector<SimEvent>& events, const std::string& path);

}  // namespace nrsurf
