#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nrsurf/channel.hpp"
#include "nrsurf/frontend.hpp"
#include "nrsurf/harmonics.hpp"
#include "nrsurf/waveform.hpp"

using namespace nrsurf;

TEST_CASE("receive bandpass hits its corner requirements") {
  const FirFilter& bpf = nbpu_bandpass();
  CHECK(bpf.response_db(0.0) == doctest::Approx(0.0).epsilon(0.01));
  // 320 kHz 3 dB bandwidth at complex baseband: -3 dB at +-160 kHz.
  CHECK(bpf.response_db(160e3) == doctest::Approx(-3.0).epsilon(0.05));
  CHECK(bpf.response_db(-160e3) == doctest::Approx(-3.0).epsilon(0.05));
  // Adjacent NR carrier one guard gap out.
  CHECK(bpf.response_db(160e3 + kGuardGapHz) < -18.0);
  // NBPU band itself passes nearly untouched.
  for (double f = -90e3; f <= 90e3; f += 15e3) CHECK(bpf.response_db(f) > -1.0);
}

TEST_CASE("post-detector lowpass is flat over the harmonics") {
  const FirFilter& lpf = envelope_lowpass();
  for (int k = 1; k <= 11; ++k)
    CHECK(std::abs(lpf.response_db(k * kSubcarrierSpacingHz)) < 0.5);
  // Rolls off before twice the NBPU bandwidth.
  CHECK(lpf.response_db(2 * kNbpuBandwidthHz) < -3.0);
  CHECK(lpf.response_db(1e6) < -40.0);
}

TEST_CASE("fir construction rejects even tap counts") {
  CHECK_THROWS_AS(FirFilter::lowpass(100e3, 128, kSampleRateHz), std::invalid_argument);
}

TEST_CASE("square-law envelope follows the analytic harmonic law") {
  const auto phases = max_power_phases();
  const SymbolTrain tr = repeat_symbol(phases, 6);
  const EnvelopeSignal env = envelope_detect(tr.signal);
  const HarmonicSet h = analytic_envelope(phases);
  // |x(t)|^2 = 12 + 2 * sum_k a_k cos(2 pi k df t + phi_k); check mid-train
  // where the LPF sees steady state.
  const double base = tr.useful_starts[3] / kSampleRateHz;
  for (int slot = 0; slot < kFftSize; slot += 17) {
    const double t_sym = slot / kSampleRateHz;
    const double expect = kNumSubcarriers + 2.0 * h.eval(t_sym);
    CHECK(std::abs(env.at_index_exact(base + t_sym) - expect) < 0.02 * 144.0);
  }
  // Peak at the symbol center, near-null at the edge.
  const double peak = env.at_index_exact(base + 128 / kSampleRateHz);
  CHECK(peak == doctest::Approx(144.0).epsilon(0.02));
  CHECK(env.at_index_exact(base) < 0.1 * peak);
}

TEST_CASE("max-power harmonics follow the 12-k amplitude law") {
  const HarmonicSet h = analytic_envelope(max_power_phases());
  for (int k = 1; k <= 11; ++k) {
    CHECK(h.components[k - 1].amplitude == doctest::Approx(12.0 - k));
    CHECK(std::abs(wrap_phase(h.components[k - 1].phase - k * kPi)) < 1e-9);
  }
}

TEST_CASE("adc sampling respects the amplifier range") {
  EnvelopeSignal env;
  env.samples = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(adc_sample(env, {0.0}, 39.0), std::invalid_argument);
  CHECK_THROWS_AS(adc_sample(env, {0.0}, 69.0), std::invalid_argument);
  const rvec out = adc_sample(env, {0.0, 1.0 / kSampleRateHz}, 40.0);
  CHECK(out[0] == doctest::Approx(100.0));  // 40 dB voltage gain
  CHECK(out[1] == doctest::Approx(200.0));
  CHECK_THROWS_AS(adc_sample(env, {-1.0}, 40.0), std::out_of_range);
}

TEST_CASE("one-sample-per-symbol saves the expected adc power factor") {
  CHECK(adc_power_ratio() == doctest::Approx(kSampleRateHz / (280.0 / 0.02)));
  CHECK(adc_power_ratio() > 200.0);
}

TEST_CASE("rx chain probe matches the dense simulation path") {
  const auto phases = max_power_phases();
  const RxChainProbe probe(phases);
  const SymbolTrain tr = repeat_symbol(phases, 8);
  const EnvelopeSignal env = envelope_detect(bandpass_filter(tr.signal));
  const double base = tr.useful_starts[4] / kSampleRateHz;
  for (int slot : {32, 96, 128, 200}) {
    const double t = slot / kSampleRateHz;
    const double dense = env.at_index_exact(base + t);
    // Absolute tolerance at 1% of the 144 peak: the relative error blows up
    // near the envelope nulls where both paths read close to zero.
    CHECK(std::abs(probe.sample_clean(t) - dense) <= 0.01 * 144.0);
  }
  CHECK(probe.signal_power() == doctest::Approx(12.0));
}

TEST_CASE("noise sigma calibration") {
  CHECK(noise_sigma_for_snr(12.0, std::numeric_limits<double>::infinity()) == 0.0);
  // 0 dB: in-band noise = psig, scaled to the full simulated band, split
  // between the two complex dimensions.
  const double sigma = noise_sigma_for_snr(12.0, 0.0);
  CHECK(sigma * sigma * 2.0 == doctest::Approx(12.0 * kSampleRateHz / kNbpuBandwidthHz));
}

TEST_CASE("channel calibrates in-band snr and interference") {
  const SymbolTrain tr = repeat_symbol(max_power_phases(), 30);
  std::mt19937_64 rng(5);
  ChannelConfig ch;
  ch.snr_db = 0.0;
  const BasebandSignal noisy = apply_channel(tr.signal, ch, rng);
  // Measured total added power over the band should match the calibration.
  double pn = 0.0;
  for (size_t i = 0; i < noisy.samples.size(); ++i)
    pn += std::norm(noisy.samples[i] - tr.signal.samples[i]);
  pn /= double(noisy.samples.size());
  // Calibration reference is the measured train power (slightly below the
  // nominal 12 because of the edge padding), scaled to the simulated band.
  double psig = 0.0;
  for (const cplx& z : tr.signal.samples) psig += std::norm(z);
  psig /= double(tr.signal.samples.size());
  const double expect = psig * kSampleRateHz / kNbpuBandwidthHz;
  CHECK(pn == doctest::Approx(expect).epsilon(0.05));

  // Attenuation scales amplitude.
  ChannelConfig att;
  att.attenuation_db = 20.0;
  const BasebandSignal quiet = apply_channel(tr.signal, att, rng);
  CHECK(std::abs(quiet.samples[100]) == doctest::Approx(0.1 * std::abs(tr.signal.samples[100])));
}

TEST_CASE("nr interference template sits outside the guard gap") {
  const auto tones = nr_interference_template(-8.0);
  CHECK(!tones.empty());
  double total_db = tones[0].power_db + lin_to_db(double(tones.size()));
  CHECK(total_db == doctest::Approx(8.0));  // power sums to signal/SINR
  for (const auto& t : tones) CHECK(std::abs(t.offset_hz) >= kFilterPassbandEdgeHz + kGuardGapHz);
}

TEST_CASE("link budget nominal install lands at +14 dB") {
  const LinkBudget lb;
  CHECK(lb.snr_db(50.0) == doctest::Approx(14.0));
  CHECK(lb.snr_db(25.0) == doctest::Approx(20.0).epsilon(0.01));  // 6 dB per halving
}

TEST_CASE("envelope signal indexing") {
  EnvelopeSignal env;
  env.samples = {0.0, 1.0};
  CHECK(env.at_time(0.5 / kSampleRateHz) == doctest::Approx(0.5));
  CHECK_THROWS_AS(env.at_time(1.0), std::out_of_range);
  CHECK_THROWS_AS(env.at_index_exact(-1.0), std::out_of_range);
}
