#include "nrsurf/sync.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nrsurf/harmonics.hpp"

namespace nrsurf {

rvec equivalent_time_sample(const EnvelopeSignal& rx, const std::vector<double>& symbol_starts,
                            int base_offset, const EtsConfig& cfg) {
  if (int(symbol_starts.size()) < cfg.sync_symbols)
    throw std::invalid_argument("not enough sync symbols");
  rvec out;
  out.reserve(cfg.sync_symbols);
  for (int i = 0; i < cfg.sync_symbols; ++i) {
    const int slot = (base_offset + i) % cfg.slots_per_symbol;
    out.push_back(rx.at_index_exact(symbol_starts[i] + slot * cfg.slot_sec));
  }
  return out;
}

int minimal_cover_frames(int stride, int samples_per_frame, int slots) {
  std::vector<char> seen(slots, 0);
  int covered = 0;
  for (int n = 0; n < 8 * slots; ++n) {
    for (int j = 0; j < samples_per_frame; ++j) {
      int s = (stride * n + j) % slots;
      if (!seen[s]) {
        seen[s] = 1;
        ++covered;
      }
    }
    if (covered == slots) return n + 1;
  }
  throw std::logic_error("stride never covers the slot grid");
}

const rvec& sync_template() {
  static const rvec tmpl = [] {
    const RxChainProbe probe(max_power_phases());
    rvec t(kEtsSlotsPerSymbol);
    for (int s = 0; s < kEtsSlotsPerSymbol; ++s)
      t[s] = probe.sample_clean(s * kEtsSlotSec);
    return t;
  }();
  return tmpl;
}

namespace {

// Zero-mean normalized correlation of x against y (same length).
double norm_corr(const rvec& x, const rvec& y) {
  const int n = int(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    dx += (x[i] - mx) * (x[i] - mx);
    dy += (y[i] - my) * (y[i] - my);
  }
  const double den = std::sqrt(dx * dy);
  return den > 0.0 ? num / den : 0.0;
}

int template_peak_slot() {
  const rvec& t = sync_template();
  return int(std::max_element(t.begin(), t.end()) - t.begin());
}

}  // namespace

BootstrapResult bootstrap_sweep(const std::function<double(int frame, int slot)>& adc,
                                const EtsConfig& cfg, double score_threshold, int max_frames) {
  const int slots = cfg.slots_per_symbol;
  std::vector<char> seen(slots, 0);
  rvec acquired(slots, 0.0);
  BootstrapResult res;
  int covered = 0;
  for (int n = 0; n < max_frames; ++n) {
    for (int j = 0; j < cfg.sync_symbols; ++j) {
      const int s = (cfg.stride * n + j) % slots;
      acquired[s] = adc(n, s);
      if (!seen[s]) {
        seen[s] = 1;
        ++covered;
      }
    }
    res.frames_used = n + 1;
    if (covered == slots) break;
  }
  if (covered < slots) return res;  // found stays false

  // Full circular matched filter against the template.
  const rvec& tmpl = sync_template();
  const int c0 = template_peak_slot();
  double best = -2.0;
  int best_shift = 0;
  rvec rot(slots);
  for (int shift = 0; shift < slots; ++shift) {
    for (int s = 0; s < slots; ++s) rot[s] = tmpl[(s - shift % slots + slots) % slots];
    const double sc = norm_corr(acquired, rot);
    if (sc > best + 1e-12) {
      best = sc;
      best_shift = shift;
    }
  }
  res.score = best;
  res.window_center_slot = (c0 + best_shift) % slots;
  res.found = best >= score_threshold;
  return res;
}

WindowScore matched_filter_window(const rvec& samples, const rvec& tmpl, int window_center_slot) {
  const int n = int(samples.size());
  const int slots = int(tmpl.size());
  const int half = n / 2;
  WindowScore best;
  best.score = -2.0;
  double corr[3];
  for (int off = -1; off <= 1; ++off) {
    rvec seg(n);
    for (int k = 0; k < n; ++k) {
      const int s = ((window_center_slot + off + k - half) % slots + slots) % slots;
      seg[k] = tmpl[s];
    }
    const double sc = norm_corr(samples, seg);
    corr[off + 1] = sc;
    if (sc > best.score + 1e-12) {  // strict: ties keep the earliest offset
      best.score = sc;
      best.offset_slots = off;
    }
  }
  // Parabolic vertex through the three correlations. The concavity guard
  // falls back to the integer decision when the points do not bracket a peak.
  const double den = corr[0] - 2.0 * corr[1] + corr[2];
  if (den < -1e-15) {
    const double v = 0.5 * (corr[0] - corr[2]) / den;
    best.offset_frac = std::clamp(v, -1.0, 1.0);
  } else {
    best.offset_frac = best.offset_slots;
  }
  return best;
}

SyncState synchronize_period(const SyncState& state, const SyncEngineConfig& cfg,
                             std::mt19937_64& rng, bool nbpu_present) {
  SyncState next = state;
  next.error_slots += cfg.drift_ns_per_period * 1e-9 / cfg.ets.slot_sec;
  if (!nbpu_present) return next;  // coast on the last estimate

  static const RxChainProbe probe(max_power_phases());
  const double sigma = noise_sigma_for_snr(probe.signal_power(), cfg.snr_db);
  const int c0 = template_peak_slot();
  const int half = cfg.ets.sync_symbols / 2;

  // The receiver samples at its believed slots c0-2..c0+2; a late estimate
  // means those land later on the true envelope.
  rvec samples(cfg.ets.sync_symbols, 0.0);
  const int avg = std::max(1, cfg.avg_periods);
  for (int a = 0; a < avg; ++a)
    for (int k = 0; k < cfg.ets.sync_symbols; ++k) {
      const double t = (c0 + (k - half) + next.error_slots) * cfg.ets.slot_sec;
      samples[k] += probe.sample(t, sigma, rng) / avg;
    }
  const WindowScore ws = matched_filter_window(samples, sync_template(), c0);
  next.last_score = ws.score;
  if (ws.score < cfg.score_threshold) {
    if (++next.low_score_streak >= cfg.unlock_after) next.locked = false;
    return next;
  }
  next.low_score_streak = 0;
  next.locked = true;
  // A +off match means the samples sit `off` slots late; pull the estimate back.
  next.error_slots -= ws.offset_frac;
  return next;
}

std::vector<SyncSweepPoint> sync_error_sweep(const std::vector<double>& snr_db_list,
                                             int trials, uint64_t seed, int avg_periods) {
  const RxChainProbe probe(max_power_phases());
  const rvec& tmpl = sync_template();
  const int c0 = template_peak_slot();
  std::vector<SyncSweepPoint> out;
  for (double snr : snr_db_list) {
    std::mt19937_64 rng(seed ^ std::hash<double>{}(snr));
    const double sigma = noise_sigma_for_snr(probe.signal_power(), snr);
    std::uniform_real_distribution<double> frac(-0.5, 0.5);
    rvec errors;
    errors.reserve(trials);
    const int avg = std::max(1, avg_periods);
    rvec samples(5);
    for (int i = 0; i < trials; ++i) {
      const double u = frac(rng);  // locked tracking: sub-slot offset only
      std::fill(samples.begin(), samples.end(), 0.0);
      for (int a = 0; a < avg; ++a)
        for (int k = 0; k < 5; ++k)
          samples[k] += probe.sample((c0 + (k - 2) + u) * kEtsSlotSec, sigma, rng) / avg;
      const WindowScore ws = matched_filter_window(samples, tmpl, c0);
      errors.push_back(std::abs(ws.offset_frac - u) * kEtsSlotSec * 1e9);
    }
    std::sort(errors.begin(), errors.end());
    SyncSweepPoint pt;
    pt.snr_db = snr;
    pt.trials = trials;
    pt.mean_error_ns = std::accumulate(errors.begin(), errors.end(), 0.0) / trials;
    pt.p95_error_ns = errors[size_t(0.95 * (trials - 1))];
    pt.max_error_ns = errors.back();
    out.push_back(pt);
  }
  return out;
}

}  // namespace nrsurf
