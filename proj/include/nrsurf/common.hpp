#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace nrsurf {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;

// NB-IoT downlink numerology (12 x 15 kHz, normal CP at 3.84 Msps).
inline constexpr double kSubcarrierSpacingHz = 15e3;
inline constexpr int kNumSubcarriers = 12;
inline constexpr int kSymbolsPerSubframe = 14;
inline constexpr double kSampleRateHz = 3.84e6;
inline constexpr int kFftSize = 256;            // useful samples per symbol
inline constexpr int kCpFirst = 20;             // first symbol of each 0.5 ms slot
inline constexpr int kCpOther = 18;
inline constexpr int kSamplesPerSubframe = 3840; // 1 ms
inline constexpr double kSubframeSec = 1e-3;
inline constexpr int kSubcarrierOffset = 6;  // subcarrier c -> (c - 6) * 15 kHz
inline constexpr double kNbpuBandwidthHz = 180e3;

// Beam-management period: 20 subframes, 280 OFDM symbols.
inline constexpr double kPeriodSec = 20e-3;
inline constexpr int kSubframesPerPeriod = 20;
inline constexpr int kSymbolsPerPeriod = 280;

// Equivalent-time sampling grid: one slot per baseband sample.
inline constexpr double kEtsSlotSec = 1.0 / kSampleRateHz; // ~260.4 ns
inline constexpr int kEtsSlotsPerSymbol = kFftSize;

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

// Wrap an angle to (-pi, pi].
inline double wrap_phase(double x) {
  x = std::fmod(x + kPi, 2.0 * kPi);
  if (x <= 0.0) x += 2.0 * kPi;
  return x - kPi;
}

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace nrsurf
