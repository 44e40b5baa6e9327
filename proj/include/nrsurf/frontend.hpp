#pragma once

#include <array>
#include <random>

#include "nrsurf/common.hpp"
#include "nrsurf/waveform.hpp"

namespace nrsurf {

// Real-valued envelope trace on the dense simulation grid.
struct EnvelopeSignal {
  rvec samples;
  double sample_rate = kSampleRateHz;
  double t0 = 0.0;

  double at_time(double t) const;         // linear interpolation
  double at_index_exact(double t) const;  // nearest grid point, no interpolation
};

// Linear-phase FIR applied with group-delay compensation (output sample n is
// aligned with input sample n; edges see zero padding).
class FirFilter {
 public:
  static FirFilter lowpass(double cutoff_hz, int taps, double sample_rate,
                           bool blackman = true);

  cvec apply(const cvec& x) const;
  rvec apply(const rvec& x) const;
  // Single delay-compensated output sample at index n.
  cplx apply_at(const cvec& x, int n) const;
  double response_db(double freq_hz) const;
  int taps() const { return int(h_.size()); }
  const rvec& coefficients() const { return h_; }

 private:
  rvec h_;
  double sample_rate_ = kSampleRateHz;
};

// Receive passband filter: 320 kHz 3 dB bandwidth at complex baseband,
// >= 18 dB suppression at the adjacent NR band edge.
const FirFilter& nbpu_bandpass();
BasebandSignal bandpass_filter(const BasebandSignal& sig);

// Post-detector lowpass: flat across the 11 first-order harmonics
// (<= 165 kHz), rolls off before twice the NBPU bandwidth.
const FirFilter& envelope_lowpass();

// Square-law detector followed by the post-detector lowpass.
EnvelopeSignal envelope_detect(const BasebandSignal& sig);

inline constexpr double kAmpGainMinDb = 40.0;
inline constexpr double kAmpGainMaxDb = 68.0;

// Amplified envelope samples at the requested instants (interpolated from the
// dense grid). Throws std::out_of_range / std::invalid_argument.
rvec adc_sample(const EnvelopeSignal& env, const std::vector<double>& times, double gain_db);

// Power-proxy ratio of a 3.84 Msps ADC versus the 14 ksps one-sample-per-
// symbol schedule (280 samples / 20 ms).
double adc_power_ratio();

// Direct point evaluation of the receiver chain LPF(|BPF(x + n)|^2)(t) for a
// single OFDM symbol treated as periodic, without materializing the dense
// stream. The Monte-Carlo workhorse for sync-error and BER sweeps: the
// filters are applied exactly (tap-for-tap for the noise path; per-tone
// frequency response for the deterministic part), only the neighbouring
// symbols' leakage into the passband filter tails is neglected.
class RxChainProbe {
 public:
  RxChainProbe(const std::array<double, kNumSubcarriers>& phases, double amplitude = 1.0);

  // Add an interference tone (absolute amplitude, random phase per sample()).
  void add_tone(double freq_hz, double amplitude);

  // Envelope value at time t (s from symbol useful-part start). noise_sigma
  // is the std dev per complex dimension of the pre-filter white noise.
  double sample(double t, double noise_sigma, std::mt19937_64& rng) const;
  double sample_clean(double t) const;

  // Mean symbol power before noise (for SNR calibration).
  double signal_power() const;

 private:
  struct Tone {
    double freq_hz;
    cplx gain;  // amplitude x BPF response
    double phase0;
    bool random_phase;
  };
  std::vector<Tone> tones_;
  double amplitude_;
};

// Pre-filter white-noise sigma (per complex dimension) for a requested
// in-band SNR against signal power `psig`.
double noise_sigma_for_snr(double psig, double snr_db);

}  // namespace nrsurf
