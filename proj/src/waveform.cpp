#include "nrsurf/waveform.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nrsurf {

cplx BasebandSignal::at_time(double t) const { return samples.at(index_of(t)); }

int BasebandSignal::index_of(double t) const {
  const double idx = (t - t0) * sample_rate;
  const int n = int(std::lround(idx));
  if (n < 0 || n >= int(samples.size())) throw std::out_of_range("time outside signal");
  return n;
}

SubframeTiming::SubframeTiming() {
  int pos = 0;
  for (int s = 0; s < kSymbolsPerSubframe; ++s) {
    cp_len[s] = (s % 7 == 0) ? kCpFirst : kCpOther;
    pos += cp_len[s];
    useful_start[s] = pos;
    pos += kFftSize;
  }
}

const SubframeTiming& subframe_timing() {
  static const SubframeTiming t;
  return t;
}

namespace {

// One CP-extended OFDM symbol; n counts from -cp to kFftSize. Subcarrier c
// sits at (c - 6) * 15 kHz so the 180 kHz band is centered at baseband. The
// waveform is 256-periodic in n, so the CP is the natural cyclic extension.
void emit_symbol(const std::array<double, kNumSubcarriers>& phases, int cp, cplx* out) {
  for (int n = -cp; n < kFftSize; ++n) {
    cplx acc{0.0, 0.0};
    for (int c = 0; c < kNumSubcarriers; ++c) {
      const double arg = 2.0 * kPi * (c - kSubcarrierOffset) * n / double(kFftSize) + phases[c];
      acc += cplx{std::cos(arg), std::sin(arg)};
    }
    out[n + cp] = acc;
  }
}

}  // namespace

BasebandSignal modulate_subframe(const ResourceGrid& grid, double t0) {
  grid.validate();
  const auto& timing = subframe_timing();
  BasebandSignal sig;
  sig.t0 = t0;
  sig.samples.assign(kSamplesPerSubframe, cplx{});
  for (int s = 0; s < kSymbolsPerSubframe; ++s) {
    const int cp = timing.cp_len[s];
    emit_symbol(grid.phase[s], cp, sig.samples.data() + timing.useful_start[s] - cp);
  }
  return sig;
}

ResourceGrid demodulate_subframe(const BasebandSignal& sig, const ResourceGrid& nrs_layout) {
  if (int(sig.samples.size()) < kSamplesPerSubframe)
    throw std::invalid_argument("subframe signal too short");
  static const double qpsk[4] = {kPi / 4, 3 * kPi / 4, 5 * kPi / 4, 7 * kPi / 4};
  const auto& timing = subframe_timing();
  ResourceGrid out = nrs_layout;
  for (int s = 0; s < kSymbolsPerSubframe; ++s) {
    for (int c = 0; c < kNumSubcarriers; ++c) {
      // Single-bin DFT over the useful part.
      cplx acc{0.0, 0.0};
      for (int n = 0; n < kFftSize; ++n) {
        const double arg = -2.0 * kPi * (c - kSubcarrierOffset) * n / double(kFftSize);
        acc += sig.samples[timing.useful_start[s] + n] * cplx{std::cos(arg), std::sin(arg)};
      }
      const double ph = std::arg(acc);
      if (out.nrs[s][c]) continue;
      double best = qpsk[0], bd = 1e9;
      for (double q : qpsk) {
        const double d = std::abs(wrap_phase(ph - q));
        if (d < bd) {
          bd = d;
          best = q;
        }
      }
      out.phase[s][c] = best;
    }
  }
  return out;
}

SymbolTrain repeat_symbol(const std::array<double, kNumSubcarriers>& phases, int repeats,
                          double t0) {
  const int block = kCpOther + kFftSize;
  SymbolTrain tr;
  tr.signal.t0 = t0;
  tr.signal.samples.assign(size_t(block) * repeats, cplx{});
  std::vector<cplx> one(block);
  emit_symbol(phases, kCpOther, one.data());
  for (int r = 0; r < repeats; ++r) {
    std::copy(one.begin(), one.end(), tr.signal.samples.begin() + size_t(r) * block);
    tr.useful_starts.push_back(r * block + kCpOther);
  }
  return tr;
}

void write_iq(const BasebandSignal& sig, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const cplx& z : sig.samples) {
    const float iq[2] = {float(z.real()), float(z.imag())};
    out.write(reinterpret_cast<const char*>(iq), sizeof(iq));
  }
}

}  // namespace nrsurf
