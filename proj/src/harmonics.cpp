#include "nrsurf/harmonics.hpp"

#include <cmath>

namespace nrsurf {

double HarmonicSet::eval(double t) const {
  double v = 0.0;
  for (const auto& c : components)
    v += c.amplitude * std::cos(2.0 * kPi * c.freq_hz * t + c.phase);
  return v;
}

HarmonicSet analytic_envelope(const std::array<double, kNumSubcarriers>& phases) {
  HarmonicSet h;
  for (int k = 1; k < kNumSubcarriers; ++k) {
    cplx acc{0.0, 0.0};
    for (int i = k; i < kNumSubcarriers; ++i) {
      const double d = phases[i] - phases[i - k];
      acc += cplx{std::cos(d), std::sin(d)};
    }
    h.components[k - 1] = {k * kSubcarrierSpacingHz, std::abs(acc), std::arg(acc)};
  }
  return h;
}

std::array<double, kNumSubcarriers> max_power_phases() {
  std::array<double, kNumSubcarriers> p{};
  for (int i = 0; i < kNumSubcarriers; ++i)
    p[i] = (i % 2 == 0) ? kPi / 4.0 : 5.0 * kPi / 4.0;  // subcarrier 1,3,... (1-indexed)
  return p;
}

std::array<double, kNumSubcarriers> off_symbol_phases() {
  constexpr double a = kPi / 4.0, b = 5.0 * kPi / 4.0;
  return {a, a, b, b, b, b, a, a, a, a, b, b};
}

}  // namespace nrsurf
