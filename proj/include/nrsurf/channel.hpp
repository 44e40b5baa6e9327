#pragma once

#include <optional>
#include <random>

#include "nrsurf/common.hpp"
#include "nrsurf/waveform.hpp"

namespace nrsurf {

// Interference tone at a fixed offset from the NBPU center. Power is relative
// to the signal's mean power (dB).
struct InterferenceTone {
  double offset_hz;
  double power_db;
};

struct ChannelConfig {
  // In-band SNR: signal power over noise power falling inside the 180 kHz
  // NBPU band. Infinity disables noise.
  double snr_db = std::numeric_limits<double>::infinity();
  double attenuation_db = 0.0;
  double blockage_db = 0.0;
  std::vector<InterferenceTone> interference;
};

// Attenuation + complex AWGN calibrated to the in-band SNR + interference
// tones with random phases.
BasebandSignal apply_channel(const BasebandSignal& sig, const ChannelConfig& ch,
                             std::mt19937_64& rng);

// The adjacent-NR-traffic template: a dense tone comb standing in for a fully
// occupied neighboring carrier, starting one guard gap beyond the receive
// filter's passband edge and extending to the simulated Nyquist edge.
// Total interference power is set so the pre-filter SINR equals `sinr_db`.
std::vector<InterferenceTone> nr_interference_template(double sinr_db);

inline constexpr double kFilterPassbandEdgeHz = 160e3;  // half the 320 kHz 3 dB BW
inline constexpr double kGuardGapHz = 70e3;

// Log-distance link budget -> in-band SNR at the NBPU Rx. The effective
// noise floor is calibrated so the nominal install (+16 dBm, +11 dBi Yagi,
// +3 dBi Tx antenna, 50 m) lands at the +14 dB operating SNR.
struct LinkBudget {
  double tx_power_dbm = 16.0;
  double tx_antenna_dbi = 3.0;
  double rx_antenna_dbi = 11.0;
  double path_loss_exponent = 2.0;
  double carrier_hz = 915e6;
  double noise_floor_dbm = link_noise_floor_default();

  double snr_db(double distance_m) const;
  static double link_noise_floor_default();
};

}  // namespace nrsurf
