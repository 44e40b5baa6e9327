#include "nrsurf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "nrsurf/csv.hpp"
#include "nrsurf/resource_grid.hpp"
#include "nrsurf/sync.hpp"

namespace nrsurf {

void PeriodLayout::validate() const {
  if (period_sec <= 0.0 || sweep_window_sec <= 0.0 || sweep_window_sec >= period_sec)
    throw std::invalid_argument("sweep window must sit inside the period");
  if (ssb_count < 1 || ssb_count > 64) throw std::invalid_argument("ssb_count outside 1..64");
  if (surface_ssb_count < 1 || surface_ssb_count > ssb_count)
    throw std::invalid_argument("surface_ssb_count outside 1..ssb_count");
  if (report_delay_sec < 25e-3 || report_delay_sec > 29e-3)
    throw std::invalid_argument("report delay outside [25, 29] ms");
}

double PeriodLayout::cp_budget_sec() const {
  double b = cp_mode == CpMode::kSymbol ? kFr2SymbolCpSec : kHalfSubframeCpSec;
  if (non_colocated) b -= kNonColocatedPenaltySec;
  return b;
}

double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Vec2 UeDef::position(double t) const {
  if (waypoints.empty()) throw std::invalid_argument("ue needs at least one waypoint");
  Vec2 p = waypoints.front();
  double remaining = speed_mps * std::max(t, 0.0);
  for (size_t i = 1; i < waypoints.size(); ++i) {
    const double leg = distance(p, waypoints[i]);
    if (remaining < leg) {
      const double f = leg > 0.0 ? remaining / leg : 0.0;
      return {p.x + f * (waypoints[i].x - p.x), p.y + f * (waypoints[i].y - p.y)};
    }
    remaining -= leg;
    p = waypoints[i];
  }
  return p;  // parked at the final waypoint
}

double SurfaceDef::bearing_to(const Vec2& p) const {
  const double world = std::atan2(p.y - position.y, p.x - position.x);
  return rad2deg(wrap_phase(world - deg2rad(facing_deg)));
}

double Environment::blockage_db(int ue, int antenna, double t) const {
  double total = 0.0;
  for (const BlockageEvent& b : blockages)
    if (b.ue == ue && b.antenna == antenna && t >= b.from_sec && t < b.to_sec)
      total += b.attenuation_db;
  return total;
}

namespace {

// Absolute array term: 10 log10 |sum Gamma_n e^{j beta d n (sin ue + sin bs)}|^2.
double array_term_db(const SurfaceDef& s, const std::vector<uint8_t>& bits, double ue_bearing_deg,
                     double bs_bearing_deg) {
  const double beta = 2.0 * kPi / s.cfg.wavelength();
  const double sum_sin = std::sin(deg2rad(ue_bearing_deg)) + std::sin(deg2rad(bs_bearing_deg));
  cplx acc{};
  for (int n = 0; n < s.cfg.columns; ++n) {
    const double m = n - 0.5 * (s.cfg.columns - 1);
    const double arg = beta * s.cfg.spacing() * m * sum_sin + (bits[n] ? kPi : 0.0);
    acc += s.cfg.reflection_amplitude * cplx{std::cos(arg), std::sin(arg)};
  }
  return lin_to_db(std::max(std::norm(acc), 1e-30));
}

}  // namespace

double ue_snr(const Environment& env, int surface, const std::vector<uint8_t>& beam_bits,
              int ue, int antenna, double t) {
  const SurfaceDef& s = env.surfaces.at(surface);
  const UeDef& u = env.ues.at(ue);
  const Vec2 body = u.position(t);
  const Vec2 ant{body.x + u.antennas.at(antenna).x, body.y + u.antennas.at(antenna).y};
  const double d1 = std::max(distance(env.bs_position, s.position), 1.0);
  const double d2 = std::max(distance(s.position, ant), 1.0);
  const double pl = 10.0 * env.path_loss_exponent * (std::log10(d1) + std::log10(d2));
  const double gain = array_term_db(s, beam_bits, s.bearing_to(ant), s.bearing_to(env.bs_position));
  return env.ref_snr_db - pl + gain - env.blockage_db(ue, antenna, t);
}

double ue_snr_best_antenna(const Environment& env, int surface,
                           const std::vector<uint8_t>& beam_bits, int ue, double t) {
  double best = -std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < env.ues.at(ue).antennas.size(); ++a)
    best = std::max(best, ue_snr(env, surface, beam_bits, ue, int(a), t));
  return best;
}

double snap_to_cp(double t, CpMode mode) {
  if (mode == CpMode::kHalfSubframe) return std::floor(t / 0.5e-3) * 0.5e-3;
  const int sf = int(std::floor(t / kSubframeSec));
  const double within = t - sf * kSubframeSec;
  double best = 0.0;
  for (int n = 0; n < kSymbolsPerSubframe; ++n) {
    const double start = symbol_start_time(n);
    if (start <= within + 1e-12) best = start;
  }
  return sf * kSubframeSec + best;
}

BeamSchedule schedule_multi(const std::vector<std::pair<int, int>>& ue_beams, int surface_id,
                            const PeriodLayout& layout) {
  BeamSchedule sched;
  sched.cp_mode = layout.cp_mode;
  if (ue_beams.empty()) return sched;
  const double slice = layout.data_window_sec() / double(ue_beams.size());
  for (size_t i = 0; i < ue_beams.size(); ++i) {
    const double t = snap_to_cp(layout.sweep_window_sec + i * slice, layout.cp_mode);
    sched.entries.push_back({t, surface_id, ue_beams[i].second});
  }
  return sched;
}

SimState make_state(const Environment& env) {
  SimState st;
  st.applied_beam.assign(env.surfaces.size(), 0);
  st.best_beam.assign(env.surfaces.size(), std::vector<int>(env.ues.size(), -1));
  return st;
}

void run_period(SimState& state, const Environment& env, const PeriodLayout& layout,
                bool nbpu_ok) {
  layout.validate();
  const double t0 = state.period * layout.period_sec;

  // Reports that arrived before this period's NBPU get folded into it.
  if (nbpu_ok) {
    for (const PendingReport& r : state.in_flight)
      if (r.ready_sec <= t0) state.best_beam[r.surface][r.ue] = r.beam;
  }
  state.in_flight.erase(std::remove_if(state.in_flight.begin(), state.in_flight.end(),
                                       [&](const PendingReport& r) { return r.ready_sec <= t0; }),
                        state.in_flight.end());

  for (size_t s = 0; s < env.surfaces.size(); ++s) {
    const SurfaceDef& surf = env.surfaces[s];
    std::vector<std::vector<uint8_t>> codebook;
    for (double tgt : surf.codebook_targets_deg)
      codebook.push_back(steer_codebook(tgt, surf.bearing_to(env.bs_position), surf.cfg));

    // NBPU decode, then the data-window schedule it carries.
    state.events.push_back({t0, nbpu_ok ? "nbpu" : "nbpu_miss", int(s), -1, -1});
    BeamSchedule sched;
    if (nbpu_ok) {
      std::vector<std::pair<int, int>> ue_beams;
      for (size_t u = 0; u < env.ues.size(); ++u)
        if (state.best_beam[s][u] >= 0) ue_beams.push_back({int(u), state.best_beam[s][u]});
      sched = schedule_multi(ue_beams, int(s), layout);
    }

    // SSB sweep: the surface walks its codewords, each UE tracks its argmax.
    std::vector<int> ue_pick(env.ues.size(), -1);
    std::vector<double> ue_best(env.ues.size(), -std::numeric_limits<double>::infinity());
    const double slot = layout.sweep_window_sec / layout.surface_ssb_count;
    for (int b = 0; b < int(codebook.size()) && b < layout.surface_ssb_count; ++b) {
      const double tb = t0 + b * slot;
      state.events.push_back({tb, "sweep", int(s), b, -1});
      for (size_t u = 0; u < env.ues.size(); ++u) {
        const double snr = ue_snr_best_antenna(env, int(s), codebook[b], int(u), tb);
        state.events.push_back({tb, "measure", int(s), b, int(u), snr});
        if (snr > ue_best[u]) {
          ue_best[u] = snr;
          ue_pick[u] = b;
        }
      }
    }
    for (size_t u = 0; u < env.ues.size(); ++u) {
      if (ue_pick[u] < 0) continue;
      const double ready = t0 + layout.sweep_window_sec + layout.report_delay_sec;
      state.in_flight.push_back({ready, int(u), int(s), ue_pick[u]});
      state.events.push_back({ready, "report", int(s), ue_pick[u], int(u), ue_best[u]});
    }

    // Execute the schedule; on a missed NBPU the previous beam is held.
    if (!sched.entries.empty()) {
      for (size_t i = 0; i < sched.entries.size(); ++i) {
        const BeamScheduleEntry& e = sched.entries[i];
        state.applied_beam[s] = e.beam_id;
        state.events.push_back({t0 + e.time_sec, "reconfig", int(s), e.beam_id, -1});
        // Served-SNR sample for the slice's UE, taken mid-slice.
        const double slice_end = (i + 1 < sched.entries.size())
                                     ? sched.entries[i + 1].time_sec
                                     : layout.period_sec;
        const double tm = t0 + 0.5 * (e.time_sec + slice_end);
        // Slice i belongs to the i-th reporting UE.
        int u = 0, seen = -1;
        for (size_t q = 0; q < env.ues.size(); ++q)
          if (state.best_beam[s][q] >= 0 && ++seen == int(i)) { u = int(q); break; }
        state.events.push_back(
            {tm, "served", int(s), e.beam_id, u,
             ue_snr_best_antenna(env, int(s), codebook[e.beam_id], u, tm)});
      }
    } else {
      // No schedule this period: sample every UE against the held beam.
      const int held = state.applied_beam[s];
      const double tm = t0 + layout.sweep_window_sec + 0.5 * layout.data_window_sec();
      for (size_t u = 0; u < env.ues.size(); ++u)
        state.events.push_back(
            {tm, "served", int(s), held, int(u),
             ue_snr_best_antenna(env, int(s), codebook[held], int(u), tm)});
    }
  }
  ++state.period;
}

PowerTimeline duty_cycle_timeline(const PeriodLayout& layout, const BeamSchedule& schedule) {
  layout.validate();
  struct Burst {
    double t;
    PowerState state;
    double dur;
  };
  constexpr double kReconfigBurstSec = 130e-6;
  std::vector<Burst> bursts;
  bursts.push_back({0.0, PowerState::kNbpuActive, kSubframeSec});
  const double slot = layout.sweep_window_sec / layout.surface_ssb_count;
  for (int b = 0; b < layout.surface_ssb_count; ++b) {
    const double t = std::max(b * slot, kSubframeSec + kWakeLeadSec);
    bursts.push_back({t, PowerState::kReconfigActive, kReconfigBurstSec});
  }
  for (const BeamScheduleEntry& e : schedule.entries)
    bursts.push_back({e.time_sec, PowerState::kReconfigActive, kReconfigBurstSec});
  std::sort(bursts.begin(), bursts.end(), [](const Burst& a, const Burst& b) { return a.t < b.t; });

  PowerTimeline tl;
  double cursor = 0.0;
  for (const Burst& b : bursts) {
    const double wake_at = std::max(b.t - kWakeLeadSec, cursor);
    tl.append(PowerState::kIdle, wake_at - cursor);
    tl.append(PowerState::kWake, kWakeLeadSec);
    tl.append(b.state, b.dur);
    cursor = wake_at + kWakeLeadSec + b.dur;
  }
  tl.append(PowerState::kIdle, std::max(layout.period_sec - cursor, 0.0));
  return tl;
}

SimState run_scenario(const ScenarioConfig& cfg) {
  SimState st = make_state(cfg.env);
  for (int p = 0; p < cfg.periods; ++p) {
    const bool ok = std::find(cfg.nbpu_miss_periods.begin(), cfg.nbpu_miss_periods.end(), p) ==
                    cfg.nbpu_miss_periods.end();
    run_period(st, cfg.env, cfg.layout, ok);
  }
  return st;
}

namespace {

Vec2 vec2_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario config: " + path);
  nlohmann::json j;
  in >> j;
  ScenarioConfig cfg;
  cfg.version = j.at("version").get<int>();
  if (cfg.version != 1) throw std::invalid_argument("unsupported scenario schema version");
  cfg.periods = j.value("periods", 50);
  if (j.contains("nbpu_miss_periods"))
    cfg.nbpu_miss_periods = j["nbpu_miss_periods"].get<std::vector<int>>();

  if (j.contains("layout")) {
    const auto& l = j["layout"];
    cfg.layout.sweep_window_sec = l.value("sweep_window_ms", 5.0) * 1e-3;
    cfg.layout.ssb_count = l.value("ssb_count", 64);
    cfg.layout.surface_ssb_count = l.value("surface_ssb_count", 8);
    cfg.layout.report_delay_sec = l.value("report_delay_ms", 27.0) * 1e-3;
    cfg.layout.cp_mode =
        l.value("cp_mode", std::string("symbol")) == "half_subframe" ? CpMode::kHalfSubframe
                                                                     : CpMode::kSymbol;
    cfg.layout.non_colocated = l.value("non_colocated", false);
  }

  const auto& e = j.at("environment");
  cfg.env.bs_position = vec2_from(e.at("bs_position"));
  cfg.env.ref_snr_db = e.value("ref_snr_db", 60.0);
  cfg.env.path_loss_exponent = e.value("path_loss_exponent", 2.0);
  for (const auto& sj : e.at("surfaces")) {
    SurfaceDef s;
    s.position = vec2_from(sj.at("position"));
    s.facing_deg = sj.value("facing_deg", 0.0);
    s.cfg.columns = sj.value("columns", 16);
    s.codebook_targets_deg = sj.at("codebook_targets_deg").get<rvec>();
    cfg.env.surfaces.push_back(std::move(s));
  }
  for (const auto& uj : e.at("ues")) {
    UeDef u;
    if (uj.contains("antennas")) {
      u.antennas.clear();
      for (const auto& a : uj["antennas"]) u.antennas.push_back(vec2_from(a));
    }
    for (const auto& w : uj.at("waypoints")) u.waypoints.push_back(vec2_from(w));
    u.speed_mps = uj.value("speed_mps", 1.0);
    cfg.env.ues.push_back(std::move(u));
  }
  if (e.contains("blockages")) {
    for (const auto& bj : e["blockages"]) {
      BlockageEvent b;
      b.ue = bj.value("ue", 0);
      b.antenna = bj.value("antenna", 0);
      b.from_sec = bj.at("from_ms").get<double>() * 1e-3;
      b.to_sec = bj.at("to_ms").get<double>() * 1e-3;
      b.attenuation_db = bj.value("attenuation_db", 30.0);
      cfg.env.blockages.push_back(b);
    }
  }
  return cfg;
}

void write_event_log(const std::vector<SimEvent>& events, const std::string& path) {
  CsvWriter csv(path);
  csv.header({"t", "event", "surface", "beam", "ue", "snr_db"});
  std::vector<SimEvent> sorted = events;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SimEvent& a, const SimEvent& b) { return a.t < b.t; });
  for (const SimEvent& ev : sorted)
    csv.raw_row(CsvWriter::fmt(ev.t) + "," + ev.kind + "," + std::to_string(ev.surface) + "," +
                std::to_string(ev.beam) + "," + std::to_string(ev.ue) + "," +
                CsvWriter::fmt(ev.snr_db));
}

}  // namespace nrsurf
