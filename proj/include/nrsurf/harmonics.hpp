#pragma once

#include <array>

#include "nrsurf/common.hpp"

namespace nrsurf {

// First-order harmonic set of the square-law envelope of one 12-subcarrier
// QPSK symbol: component k (k = 1..11) is the phasor sum over the 12-k
// subcarrier pairs at spacing k*15 kHz.
struct HarmonicSet {
  struct Component {
    double freq_hz;
    double amplitude;
    double phase;
  };
  std::array<Component, kNumSubcarriers - 1> components;

  // AC part of the per-pair-normalized envelope at time t (s from symbol
  // start): sum_k amplitude_k * cos(2 pi k df t + phase_k).
  double eval(double t) const;
};

HarmonicSet analytic_envelope(const std::array<double, kNumSubcarriers>& phases);

// The maximum-power NBPU symbol: odd-numbered subcarriers (1-indexed) at
// pi/4, the rest at 5*pi/4. Component k then has amplitude 12-k and phase
// k*pi.
std::array<double, kNumSubcarriers> max_power_phases();

// The OFF NBPU symbol phase vector.
std::array<double, kNumSubcarriers> off_symbol_phases();

}  // namespace nrsurf
