#pragma once

#include <cstdint>
#include <vector>

#include "nrsurf/common.hpp"

namespace nrsurf {

// Varactor unit cell as a series R-L-C against a fitted port impedance. The
// inductance, board loss and port impedance are solved once so the two GPIO
// bias states reflect with equal 0.6 amplitude and a 180 degree phase split
// at the carrier.
struct VaractorModel {
  double rs_ohm = 13.0;       // varactor series resistance
  double board_loss_ohm = 0;  // fitted extra loss
  double series_l_h = 0;      // fitted
  double port_ohm = 0;        // fitted reference impedance
  double carrier_hz = 24.125e9;

  // Junction capacitance at the modeled bias points {0, 3.3, 15} V.
  static double cj_farad(double bias_v);  // throws on unmodeled bias

  cplx reflection(double bias_v, double freq_hz) const;
  double time_constant_sec() const { return rs_ohm * cj_farad(0.0); }

  static const VaractorModel& fitted();  // solved against the 0/3.3 V states
};

struct SurfaceConfig {
  int columns = 16;
  int rows = 16;
  double carrier_hz = 24.125e9;
  double spacing_m = 0.0;  // 0 -> the tuned default of 0.53 wavelength
  double reflection_amplitude = 0.6;

  double wavelength() const;
  double spacing() const;  // resolved default
};

struct BeamPattern {
  rvec angles_deg;
  rvec gain_db;  // relative, peak = 0 dB
  double main_lobe_deg = 0.0;
  double hpbw_deg = 0.0;
};

// Per-column 1-bit codebook steering a wave incident at `incident_deg` towards
// `target_deg`: ideal phase -(2pi/lambda) d n (sin t + sin i) on centered
// column indices, quantized to the nearer of {0, pi}.
std::vector<uint8_t> steer_codebook(double target_deg, double incident_deg,
                                    const SurfaceConfig& cfg);

// |sum_n Gamma_n exp(j beta d n (sin theta + sin incident))|^2 over the angle
// grid, Gamma_n = amplitude * exp(j pi bit_n). Main lobe = grid argmax, HPBW
// at -3 dB around it (interpolated).
BeamPattern array_factor(const SurfaceConfig& cfg, const std::vector<uint8_t>& bits,
                         const rvec& angles_deg, double incident_deg = 0.0);

// Continuous-phase (unquantized) reference pattern for the same target.
BeamPattern ideal_pattern(const SurfaceConfig& cfg, double target_deg, double incident_deg,
                          const rvec& angles_deg);

// Per-cell 1-bit codebook for an (azimuth, elevation) target, row-major
// columns x rows.
std::vector<uint8_t> codebook_3d(double az_deg, double el_deg, const SurfaceConfig& cfg);

struct Lobe3d {
  double az_deg;
  double el_deg;
};

// Argmax of the 2D array factor over an az/el grid (normal incidence). When a
// reference direction is given the search is restricted to the hemisphere
// around it in direction-cosine space: 1-bit patterns have real coefficients,
// so every lobe has an equal twin at the antipode.
Lobe3d main_lobe_3d(const SurfaceConfig& cfg, const std::vector<uint8_t>& bits,
                    const rvec& az_grid_deg, const rvec& el_grid_deg);
Lobe3d main_lobe_3d(const SurfaceConfig& cfg, const std::vector<uint8_t>& bits,
                    const rvec& az_grid_deg, const rvec& el_grid_deg, double ref_az_deg,
                    double ref_el_deg);

struct ReconfigCost {
  double latency_sec;
  double energy_j;
};

// GPIO rise time plus the varactor RC; 12 pJ per toggled cell.
ReconfigCost reconfig_cost(int cells);

inline constexpr double kGpioRiseSec = 7e-9;
inline constexpr double kCellEnergyJ = 12e-12;

}  // namespace nrsurf
