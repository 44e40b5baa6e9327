#include "nrsurf/frontend.hpp"

#include <cmath>
#include <stdexcept>

namespace nrsurf {

namespace {
constexpr int kBpfTaps = 301;
constexpr double kBpfCutoffHz = 166.5e3;  // tuned: -3 dB lands at 160 kHz
constexpr int kLpfTaps = 129;
constexpr double kLpfCutoffHz = 260e3;
}  // namespace

double EnvelopeSignal::at_time(double t) const {
  const double idx = (t - t0) * sample_rate;
  if (idx < 0.0 || idx > double(samples.size() - 1))
    throw std::out_of_range("time outside envelope");
  const int n = int(idx);
  if (n + 1 >= int(samples.size())) return samples[n];
  const double f = idx - n;
  return samples[n] * (1.0 - f) + samples[n + 1] * f;
}

double EnvelopeSignal::at_index_exact(double t) const {
  const long n = std::lround((t - t0) * sample_rate);
  if (n < 0 || n >= long(samples.size())) throw std::out_of_range("time outside envelope");
  return samples[n];
}

FirFilter FirFilter::lowpass(double cutoff_hz, int taps, double sample_rate, bool blackman) {
  if (taps % 2 == 0) throw std::invalid_argument("odd tap count required");
  FirFilter f;
  f.sample_rate_ = sample_rate;
  f.h_.resize(taps);
  const int mid = taps / 2;
  const double fc = cutoff_hz / sample_rate;
  double sum = 0.0;
  for (int n = 0; n < taps; ++n) {
    const int m = n - mid;
    const double sinc = (m == 0) ? 2.0 * fc : std::sin(2.0 * kPi * fc * m) / (kPi * m);
    const double w = blackman
                         ? 0.42 - 0.5 * std::cos(2.0 * kPi * n / (taps - 1)) +
                               0.08 * std::cos(4.0 * kPi * n / (taps - 1))
                         : 0.54 - 0.46 * std::cos(2.0 * kPi * n / (taps - 1));
    f.h_[n] = sinc * w;
    sum += f.h_[n];
  }
  for (double& c : f.h_) c /= sum;  // unity DC gain
  return f;
}

cvec FirFilter::apply(const cvec& x) const {
  const int n = int(x.size());
  const int mid = int(h_.size()) / 2;
  cvec y(n, cplx{});
  for (int i = 0; i < n; ++i) {
    cplx acc{};
    const int k0 = std::max(0, i - mid);
    const int k1 = std::min(n - 1, i + mid);
    for (int k = k0; k <= k1; ++k) acc += x[k] * h_[mid + (i - k)];
    y[i] = acc;
  }
  return y;
}

rvec FirFilter::apply(const rvec& x) const {
  const int n = int(x.size());
  const int mid = int(h_.size()) / 2;
  rvec y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const int k0 = std::max(0, i - mid);
    const int k1 = std::min(n - 1, i + mid);
    for (int k = k0; k <= k1; ++k) acc += x[k] * h_[mid + (i - k)];
    y[i] = acc;
  }
  return y;
}

cplx FirFilter::apply_at(const cvec& x, int n) const {
  const int mid = int(h_.size()) / 2;
  cplx acc{};
  const int k0 = std::max(0, n - mid);
  const int k1 = std::min(int(x.size()) - 1, n + mid);
  for (int k = k0; k <= k1; ++k) acc += x[k] * h_[mid + (n - k)];
  return acc;
}

double FirFilter::response_db(double freq_hz) const {
  cplx acc{};
  for (size_t n = 0; n < h_.size(); ++n) {
    const double arg = -2.0 * kPi * freq_hz * double(n) / sample_rate_;
    acc += h_[n] * cplx{std::cos(arg), std::sin(arg)};
  }
  return 20.0 * std::log10(std::abs(acc) + 1e-300);
}

const FirFilter& nbpu_bandpass() {
  static const FirFilter f = FirFilter::lowpass(kBpfCutoffHz, kBpfTaps, kSampleRateHz, true);
  return f;
}

BasebandSignal bandpass_filter(const BasebandSignal& sig) {
  BasebandSignal out = sig;
  out.samples = nbpu_bandpass().apply(sig.samples);
  return out;
}

const FirFilter& envelope_lowpass() {
  static const FirFilter f = FirFilter::lowpass(kLpfCutoffHz, kLpfTaps, kSampleRateHz, false);
  return f;
}

EnvelopeSignal envelope_detect(const BasebandSignal& sig) {
  rvec sq(sig.samples.size());
  for (size_t i = 0; i < sq.size(); ++i) sq[i] = std::norm(sig.samples[i]);
  EnvelopeSignal env;
  env.sample_rate = sig.sample_rate;
  env.t0 = sig.t0;
  env.samples = envelope_lowpass().apply(sq);
  return env;
}

rvec adc_sample(const EnvelopeSignal& env, const std::vector<double>& times, double gain_db) {
  if (gain_db < kAmpGainMinDb || gain_db > kAmpGainMaxDb)
    throw std::invalid_argument("amplifier gain outside [40, 68] dB");
  const double g = std::pow(10.0, gain_db / 20.0);
  rvec out;
  out.reserve(times.size());
  for (double t : times) out.push_back(g * env.at_time(t));
  return out;
}

double adc_power_ratio() {
  const double ets_rate = kSymbolsPerPeriod / kPeriodSec;  // 14 ksps
  return kSampleRateHz / ets_rate;
}

RxChainProbe::RxChainProbe(const std::array<double, kNumSubcarriers>& phases,
                           double amplitude)
    : amplitude_(amplitude) {
  const FirFilter& bpf = nbpu_bandpass();
  for (int c = 0; c < kNumSubcarriers; ++c) {
    const double f = (c - kSubcarrierOffset) * kSubcarrierSpacingHz;
    const double h = std::pow(10.0, bpf.response_db(f) / 20.0);
    tones_.push_back({f, amplitude * h * cplx{std::cos(phases[c]), std::sin(phases[c])},
                      0.0, false});
  }
}

void RxChainProbe::add_tone(double freq_hz, double amplitude) {
  const double h = std::pow(10.0, nbpu_bandpass().response_db(freq_hz) / 20.0);
  tones_.push_back({freq_hz, cplx{amplitude * h, 0.0}, 0.0, true});
}

double RxChainProbe::signal_power() const { return 12.0 * amplitude_ * amplitude_; }

double noise_sigma_for_snr(double psig, double snr_db) {
  if (!std::isfinite(snr_db)) return 0.0;
  const double inband = psig / db_to_lin(snr_db);
  const double total = inband * kSampleRateHz / kNbpuBandwidthHz;
  return std::sqrt(total / 2.0);
}

double RxChainProbe::sample(double t, double noise_sigma, std::mt19937_64& rng) const {
  const FirFilter& lpf = envelope_lowpass();
  const FirFilter& bpf = nbpu_bandpass();
  const int lmid = lpf.taps() / 2;
  const int bmid = bpf.taps() / 2;
  const int npts = lpf.taps();

  // Deterministic (filtered) part on the LPF support around t.
  thread_local cvec sf;
  sf.assign(npts, cplx{});
  std::uniform_real_distribution<double> uphase(0.0, 2.0 * kPi);
  for (const Tone& tone : tones_) {
    const double ph0 = tone.random_phase ? uphase(rng) : tone.phase0;
    const double dphi = 2.0 * kPi * tone.freq_hz / kSampleRateHz;
    const double base = 2.0 * kPi * tone.freq_hz * t + ph0 - dphi * lmid;
    cplx rot{std::cos(base), std::sin(base)};
    const cplx step{std::cos(dphi), std::sin(dphi)};
    for (int m = 0; m < npts; ++m) {
      sf[m] += tone.gain * rot;
      rot *= step;
    }
  }

  if (noise_sigma > 0.0) {
    // BPF-filtered white noise over the same support.
    thread_local cvec w;
    const int nw = npts + bpf.taps() - 1;
    w.assign(nw, cplx{});
    std::normal_distribution<double> gauss(0.0, noise_sigma);
    for (cplx& z : w) z = cplx{gauss(rng), gauss(rng)};
    const rvec& h = bpf.coefficients();
    for (int m = 0; m < npts; ++m) {
      cplx acc{};
      const cplx* wp = w.data() + m;
      for (int k = 0; k < bpf.taps(); ++k) acc += h[k] * wp[k];
      sf[m] += acc;
    }
    (void)bmid;
  }

  double out = 0.0;
  const rvec& hl = lpf.coefficients();
  for (int m = 0; m < npts; ++m) out += hl[m] * std::norm(sf[m]);
  return out;
}

double RxChainProbe::sample_clean(double t) const {
  std::mt19937_64 dummy(0);
  return sample(t, 0.0, dummy);
}

}  // namespace nrsurf
