#include "nrsurf/acceptance.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "nrsurf/channel.hpp"
#include "nrsurf/emulation.hpp"
#include "nrsurf/harmonics.hpp"
#include "nrsurf/nbpu.hpp"
#include "nrsurf/power.hpp"
#include "nrsurf/scenario.hpp"
#include "nrsurf/surface.hpp"
#include "nrsurf/sync.hpp"
#include "nrsurf/waveform.hpp"

namespace nrsurf {

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

// 1. Envelope harmonic law: amplitudes proportional to 12-k, phases k*pi.
Check harmonic_law() {
  Check c;
  cvec x(kFftSize);
  const auto ph = max_power_phases();
  for (int n = 0; n < kFftSize; ++n) {
    cplx acc{};
    for (int sc = 0; sc < kNumSubcarriers; ++sc) {
      const double arg = 2.0 * kPi * (sc - kSubcarrierOffset) * n / kFftSize + ph[sc];
      acc += cplx{std::cos(arg), std::sin(arg)};
    }
    x[n] = acc;
  }
  rvec env(kFftSize);
  for (int n = 0; n < kFftSize; ++n) env[n] = std::norm(x[n]);

  double num = 0.0, den = 0.0;
  std::array<double, 11> amp{}, phase{};
  for (int k = 1; k <= 11; ++k) {
    cplx bin{};
    for (int n = 0; n < kFftSize; ++n) {
      const double arg = -2.0 * kPi * k * n / kFftSize;
      bin += env[n] * cplx{std::cos(arg), std::sin(arg)};
    }
    amp[k - 1] = 2.0 * std::abs(bin) / kFftSize;
    phase[k - 1] = std::arg(bin);
    num += amp[k - 1] * (12.0 - k);
    den += (12.0 - k) * (12.0 - k);
  }
  const double scale = num / den;
  double rms = 0.0;
  double worst_phase = 0.0;
  for (int k = 1; k <= 11; ++k) {
    const double rel = amp[k - 1] / scale / (12.0 - k) - 1.0;
    rms += rel * rel;
    worst_phase = std::max(worst_phase,
                           std::abs(rad2deg(wrap_phase(phase[k - 1] - k * kPi))));
  }
  rms = std::sqrt(rms / 11.0);
  c.require(rms < 0.02, "amplitude RMS deviation " + fmt(rms));
  c.require(worst_phase < 2.0, "phase error " + fmt(worst_phase) + " deg");
  c.detail << "rms=" << fmt(rms) << " max_phase_err=" << fmt(worst_phase) << "deg";
  return c;
}

// 2. Affine round trip on 100 random full target vectors; rank(A) = 240.
Check emulation_round_trip() {
  Check c;
  const CodingPipeline pipeline;
  const AffineModel model = build_affine_model(pipeline);
  c.require(model.rank >= kConstrainedBits, "rank " + std::to_string(model.rank));
  std::mt19937_64 rng(7);
  std::bernoulli_distribution bit(0.5);
  int exact = 0;
  for (int trial = 0; trial < 100; ++trial) {
    PhaseTargets targets;
    for (int sym : {0, 1, 2, 3, 4, 7, 8, 9, 10, 11})
      for (int sc = 0; sc < kNumSubcarriers; ++sc)
        targets.entries.push_back({sym, sc, qpsk_phase(bit(rng), bit(rng))});
    const SolveResult res = solve_payload(targets, pipeline, model);
    if (!res.ok()) continue;
    const ResourceGrid grid = pipeline.encode_grid(res.payload);
    bool all = true;
    for (const PhaseTarget& t : targets.entries)
      all = all && std::abs(wrap_phase(grid.phase[t.symbol][t.subcarrier] - t.phase)) < 1e-9;
    exact += all;
  }
  c.require(exact == 100, std::to_string(exact) + "/100 target sets reproduced");
  c.detail << "rank=" << model.rank << " exact=" << exact << "/100";
  return c;
}

// 3. ETS vs direct sampling; bootstrap residue coverage at stride 13.
Check ets_equivalence() {
  Check c;
  const SymbolTrain train = repeat_symbol(max_power_phases(), 8);
  const EnvelopeSignal env = envelope_detect(train.signal);
  std::vector<double> starts;
  for (int i = 1; i <= 5; ++i)
    starts.push_back(train.useful_starts[i] / kSampleRateHz);
  double worst = 0.0;
  for (int base : {0, 37, 200}) {
    const rvec ets = equivalent_time_sample(env, starts, base);
    for (int i = 0; i < 5; ++i) {
      const double direct =
          env.at_index_exact(starts[0] + ((base + i) % kEtsSlotsPerSymbol) * kEtsSlotSec);
      worst = std::max(worst, std::abs(ets[i] - direct) / std::max(std::abs(direct), 1e-12));
    }
  }
  c.require(worst < 1e-9, "ETS/direct relative error " + fmt(worst));
  const int n13 = minimal_cover_frames(13, 5);
  const int n23 = minimal_cover_frames(23, 5);
  c.require(n13 <= 60, "stride-13 coverage needs " + std::to_string(n13) + " frames");
  c.detail << "rel_err=" << fmt(worst) << " N(stride13)=" << n13 << " N(stride23)=" << n23
           << " sweep_time=" << fmt(n13 * kPeriodSec) << "s";
  return c;
}

// 4 & 9 share one Monte-Carlo sweep.
std::vector<SyncSweepPoint> shared_sync_sweep() {
  static const std::vector<SyncSweepPoint> sweep =
      sync_error_sweep({-5.0, 0.0, 5.0, 10.0, 15.0}, 400, 2024);
  return sweep;
}

Check sync_accuracy() {
  Check c;
  const auto sweep = shared_sync_sweep();
  double at0 = 0.0;
  int inversions = 0;
  for (size_t i = 0; i < sweep.size(); ++i) {
    if (sweep[i].snr_db == 0.0) at0 = sweep[i].mean_error_ns;
    if (i > 0 && sweep[i].mean_error_ns > sweep[i - 1].mean_error_ns * 1.05) ++inversions;
  }
  c.require(at0 <= 260.0, "mean error at 0 dB " + fmt(at0) + " ns");
  c.require(inversions <= 1, std::to_string(inversions) + " curve inversions");
  c.detail << "mean@0dB=" << fmt(at0) << "ns inversions=" << inversions;
  return c;
}

// 5. BER at the +14 dB operating point and under the adjacent-NR template.
Check nbpu_ber() {
  Check c;
  const long n = 200000;
  const BerPoint op = ber_at_snr(14.0, n, 99);
  const BerPoint intf =
      ber_at_snr(std::numeric_limits<double>::infinity(), n, 100, nr_interference_template(-10.0));
  c.require(op.ber <= 2e-5, "BER@+14dB " + fmt(op.ber));
  c.require(intf.ber <= 2e-5, "BER@-10dB SINR " + fmt(intf.ber));
  c.detail << "ber14=" << op.errors << "/" << n << " ber_intf=" << intf.errors << "/" << n;
  return c;
}

// 6. Codebook main lobes, HPBW at 16/80 columns, 4x4 3D lobes.
Check beam_synthesis() {
  Check c;
  rvec grid;
  for (double a = 0.0; a <= 90.0; a += 0.05) grid.push_back(a);
  SurfaceConfig cfg16;
  double worst_lobe = 0.0;
  for (double tgt = 10.0; tgt <= 70.0; tgt += 10.0) {
    const BeamPattern p = array_factor(cfg16, steer_codebook(tgt, 0.0, cfg16), grid);
    worst_lobe = std::max(worst_lobe, std::abs(p.main_lobe_deg - tgt));
  }
  c.require(worst_lobe <= 2.0, "main-lobe error " + fmt(worst_lobe) + " deg");

  const BeamPattern p30 = array_factor(cfg16, steer_codebook(30.0, 0.0, cfg16), grid);
  c.require(std::abs(p30.hpbw_deg - 6.3) <= 1.0, "16-col HPBW " + fmt(p30.hpbw_deg) + " deg");

  SurfaceConfig cfg80 = cfg16;
  cfg80.columns = 80;
  const BeamPattern p80 = array_factor(cfg80, steer_codebook(30.0, 0.0, cfg80), grid);
  c.require(std::abs(p80.hpbw_deg - 1.3) <= 0.3, "80-col HPBW " + fmt(p80.hpbw_deg) + " deg");

  SurfaceConfig cfg4;
  cfg4.columns = 4;
  cfg4.rows = 4;
  double worst3d = 0.0;
  for (double az = 0.0; az <= 60.0; az += 10.0)
    for (double el = 0.0; el <= 40.0; el += 10.0) {
      if (az == 0.0 && el == 0.0) continue;
      // Real-coefficient patterns repeat at the antipode; search the window
      // around the target, restricted to its hemisphere.
      rvec az_grid, el_grid;
      for (double a = az - 40.0; a <= std::min(az + 40.0, 90.0); a += 0.5)
        az_grid.push_back(a);
      for (double e = el - 25.0; e <= std::min(el + 40.0, 60.0); e += 0.5)
        el_grid.push_back(e);
      const Lobe3d lobe = main_lobe_3d(cfg4, codebook_3d(az, el, cfg4), az_grid, el_grid, az, el);
      worst3d = std::max(worst3d, std::hypot(lobe.az_deg - az, lobe.el_deg - el));
    }
  c.require(worst3d <= 5.0, "3D lobe error " + fmt(worst3d) + " deg");
  c.detail << "lobe_err=" << fmt(worst_lobe) << " hpbw16=" << fmt(p30.hpbw_deg)
           << " hpbw80=" << fmt(p80.hpbw_deg) << " lobe3d_err=" << fmt(worst3d);
  return c;
}

// 7. Power budget, component ratios and battery life.
Check power_budget() {
  Check c;
  const PowerTable table;
  const PowerTimeline tl = default_period_timeline();
  const double avg = average_power(tl, table);
  c.require(std::abs(avg - 242.7e-6) <= 0.01 * 242.7e-6, "average " + fmt(avg * 1e6) + " uW");
  const double r_nbpu = table.nbpu_active / duty_component(tl, table, PowerState::kNbpuActive);
  const double r_rcfg =
      table.reconfig_active / duty_component(tl, table, PowerState::kReconfigActive);
  c.require(std::abs(r_nbpu - 20.4) <= 0.05 * 20.4, "nbpu ratio " + fmt(r_nbpu));
  c.require(std::abs(r_rcfg - 13.9) <= 0.05 * 13.9, "reconfig ratio " + fmt(r_rcfg));
  const double years = battery_life_years(avg, kAaCapacityWh);
  c.require(std::abs(years - 2.1) <= 0.1, "battery " + fmt(years) + " years");
  c.detail << "avg=" << fmt(avg * 1e6) << "uW ratios=" << fmt(r_nbpu) << "x/" << fmt(r_rcfg)
           << "x life=" << fmt(years) << "yr";
  return c;
}

Environment two_antenna_env() {
  Environment env;
  env.bs_position = {50.0, 0.0};
  SurfaceDef s;
  s.position = {0.0, 0.0};
  s.facing_deg = 0.0;
  for (double t = 10.0; t <= 70.0; t += 10.0) s.codebook_targets_deg.push_back(t);
  s.codebook_targets_deg.push_back(-40.0);  // specular option, 8 codewords total
  env.surfaces.push_back(s);
  UeDef u;
  u.waypoints = {{8.0, 0.0}};
  u.speed_mps = 0.0;
  // Two antennas at clearly different bearings from the surface.
  u.antennas = {{2.0, 3.64}, {-3.0, 8.66}};  // ~20 deg and ~60 deg bearings
  env.ues.push_back(u);
  return env;
}

double optimum_snr(const Environment& env, const PeriodLayout&, double t) {
  const SurfaceDef& s = env.surfaces[0];
  double best = -1e300;
  for (double tgt : s.codebook_targets_deg)
    best = std::max(best, ue_snr_best_antenna(
                              env, 0, steer_codebook(tgt, s.bearing_to(env.bs_position), s.cfg),
                              0, t));
  return best;
}

// 8. Protocol behavior: blockage recovery, per-period toggling, multi-UE
// split, around-the-corner gain over a flat mirror.
Check protocol_behavior() {
  Check c;
  PeriodLayout layout;

  {  // (a) blockage flip: antenna 0 blocked from 200 ms on.
    Environment env = two_antenna_env();
    env.blockages.push_back({0, 0, 0.2, 1e9, 40.0});
    SimState st = make_state(env);
    for (int p = 0; p < 20; ++p) run_period(st, env, layout);
    // Recovery deadline: flip period + 2 periods + report delay.
    const double deadline = 0.2 + 2 * layout.period_sec + layout.report_delay_sec;
    const int dp = int(std::ceil(deadline / layout.period_sec));
    double served = -1e300;
    for (const SimEvent& ev : st.events)
      if (ev.kind == "served" && ev.t >= dp * layout.period_sec &&
          ev.t < (dp + 1) * layout.period_sec)
        served = std::max(served, ev.snr_db);
    const double opt = optimum_snr(env, layout, (dp + 0.5) * layout.period_sec);
    c.require(served >= opt - 1.0,
              "post-flip served " + fmt(served) + " dB vs optimum " + fmt(opt) + " dB");
    c.detail << "recovery_gap=" << fmt(opt - served) << "dB";
  }

  {  // (b) per-period toggling: blockage alternates antennas each 20 ms.
    Environment env = two_antenna_env();
    for (int p = 0; p < 40; ++p)
      env.blockages.push_back({0, p % 2, p * 20e-3, (p + 1) * 20e-3, 40.0});
    SimState st = make_state(env);
    for (int p = 0; p < 40; ++p) run_period(st, env, layout);
    std::vector<int> beam_per_period(40, -1);
    for (const SimEvent& ev : st.events)
      if (ev.kind == "reconfig") beam_per_period[int(ev.t / layout.period_sec)] = ev.beam;
    bool toggles = true;
    for (int p = 11; p < 40; ++p) toggles = toggles && beam_per_period[p] != beam_per_period[p - 1];
    c.require(toggles, "beam did not change every period under toggling");
  }

  {  // (c) multi-UE split: each UE served with its own best beam in its slice.
    Environment env = two_antenna_env();
    env.ues.clear();
    UeDef u1, u2;
    u1.waypoints = {{8.66, 5.0}};   // ~30 deg bearing
    u2.waypoints = {{5.0, 8.66}};   // ~60 deg bearing
    u1.speed_mps = u2.speed_mps = 0.0;
    env.ues = {u1, u2};
    SimState st = make_state(env);
    for (int p = 0; p < 10; ++p) run_period(st, env, layout);
    const SurfaceDef& s = env.surfaces[0];
    std::array<int, 2> want{};
    for (int u = 0; u < 2; ++u) {
      double best = -1e300;
      for (size_t b = 0; b < s.codebook_targets_deg.size(); ++b) {
        const double snr = ue_snr_best_antenna(
            env, 0,
            steer_codebook(s.codebook_targets_deg[b], s.bearing_to(env.bs_position), s.cfg), u,
            0.0);
        if (snr > best) {
          best = snr;
          want[u] = int(b);
        }
      }
    }
    c.require(want[0] != want[1], "degenerate multi-UE geometry");
    int ok_slices = 0, total = 0;
    double split_t0 = -1.0, split_t1 = -1.0;
    for (const SimEvent& ev : st.events) {
      if (ev.kind != "served" || ev.t < 8 * layout.period_sec) continue;
      ++total;
      if (ev.beam == want[ev.ue]) ++ok_slices;
    }
    for (const SimEvent& ev : st.events)
      if (ev.kind == "reconfig" && ev.t >= 9 * layout.period_sec) {
        (split_t0 < 0.0 ? split_t0 : split_t1) = ev.t - 9 * layout.period_sec;
      }
    c.require(total > 0 && ok_slices == total,
              "multi-UE slices with own best beam " + std::to_string(ok_slices) + "/" +
                  std::to_string(total));
    c.require(std::abs(split_t0 - snap_to_cp(5e-3, layout.cp_mode)) < 1e-9 &&
                  std::abs(split_t1 - snap_to_cp(12.5e-3, layout.cp_mode)) < 1e-9,
              "split instants " + fmt(split_t0 * 1e3) + "/" + fmt(split_t1 * 1e3) + " ms");
  }

  {  // (d) around-the-corner grid: best codeword vs flat mirror, BS at +40 deg.
    Environment env;
    env.bs_position = {std::cos(deg2rad(40.0)) * 50.0, std::sin(deg2rad(40.0)) * 50.0};
    SurfaceDef s;
    s.position = {0.0, 0.0};
    for (double t = 10.0; t <= 70.0; t += 10.0) s.codebook_targets_deg.push_back(t);
    env.surfaces.push_back(s);
    const std::vector<uint8_t> mirror(s.cfg.columns, 0);  // flat plate
    const double inc = s.bearing_to(env.bs_position);
    double min_gain = 1e300, sum_gain = 0.0;
    int points = 0;
    for (double bearing = 0.0; bearing <= 70.0; bearing += 5.0)
      for (double r = 3.0; r <= 12.0; r += 3.0) {
        env.ues.clear();
        UeDef u;
        u.waypoints = {{r * std::cos(deg2rad(bearing)), r * std::sin(deg2rad(bearing))}};
        u.speed_mps = 0.0;
        env.ues.push_back(u);
        double best = -1e300;
        for (double tgt : s.codebook_targets_deg)
          best = std::max(best,
                          ue_snr_best_antenna(env, 0, steer_codebook(tgt, inc, s.cfg), 0, 0.0));
        const double flat = ue_snr_best_antenna(env, 0, mirror, 0, 0.0);
        min_gain = std::min(min_gain, best - flat);
        sum_gain += best - flat;
        ++points;
      }
    c.require(min_gain > 0.0, "mirror gain " + fmt(min_gain) + " dB at worst grid point");
    c.require(sum_gain / points >= 7.6, "mean mirror gain " + fmt(sum_gain / points) + " dB");
    c.detail << " corner_gain_min=" << fmt(min_gain) << "dB mean=" << fmt(sum_gain / points)
             << "dB";
  }
  return c;
}

// 9. Timing budget over every Monte-Carlo sync trial at SNR >= 0 dB.
Check timing_budget() {
  Check c;
  double worst = 0.0;
  for (const SyncSweepPoint& pt : shared_sync_sweep())
    if (pt.snr_db >= 0.0) worst = std::max(worst, pt.max_error_ns);
  const double total = worst + kReconfigLatencySec * 1e9;
  c.require(total < kFr2SymbolCpSec * 1e9, "budget " + fmt(total) + " ns vs 585 ns");
  c.require(total + kNonColocatedPenaltySec * 1e9 < kHalfSubframeCpSec * 1e9,
            "non-colocated budget vs 1106 ns");
  c.detail << "worst_total=" << fmt(total) << "ns";
  return c;
}

}  // namespace

bool run_acceptance(std::ostream& out) {
  struct Entry {
    const char* name;
    Check (*fn)();
  };
  const Entry entries[] = {
      {"harmonic-law", harmonic_law},
      {"emulation-round-trip", emulation_round_trip},
      {"ets-equivalence", ets_equivalence},
      {"sync-accuracy", sync_accuracy},
      {"nbpu-ber", nbpu_ber},
      {"beam-synthesis", beam_synthesis},
      {"power-budget", power_budget},
      {"protocol-behavior", protocol_behavior},
      {"timing-budget", timing_budget},
  };
  bool all = true;
  int id = 0;
  for (const Entry& e : entries) {
    ++id;
    Check c = e.fn();
    out << (c.pass ? "PASS" : "FAIL") << " " << id << " " << e.name;
    const std::string d = c.detail.str();
    if (!d.empty()) out << " (" << d << ")";
    out << "\n" << std::flush;
    all = all && c.pass;
  }
  return all;
}

}  // namespace nrsurf
