#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "nrsurf/resource_grid.hpp"
#include "nrsurf/waveform.hpp"

using namespace nrsurf;

namespace {

// Independent single-bin DFT over the useful part of symbol s.
cplx dft_bin(const BasebandSignal& sig, int sym, int subcarrier) {
  const auto& tm = subframe_timing();
  cplx acc{};
  for (int n = 0; n < kFftSize; ++n) {
    const double arg = -2.0 * kPi * (subcarrier - kSubcarrierOffset) * n / double(kFftSize);
    acc += sig.samples[tm.useful_start[sym] + n] * cplx{std::cos(arg), std::sin(arg)};
  }
  return acc;
}

ResourceGrid random_grid(uint64_t seed) {
  std::mt19937_64 rng(seed);
  ResourceGrid g = ResourceGrid::make();
  static const double qpsk[4] = {kPi / 4, 3 * kPi / 4, 5 * kPi / 4, 7 * kPi / 4};
  for (int s = 0; s < kSymbolsPerSubframe; ++s)
    for (int c = 0; c < kNumSubcarriers; ++c)
      if (!g.nrs[s][c]) g.phase[s][c] = qpsk[rng() % 4];
  return g;
}

}  // namespace

TEST_CASE("qpsk gray map and inverse") {
  CHECK(qpsk_phase(0, 0) == doctest::Approx(kPi / 4));
  CHECK(qpsk_phase(1, 0) == doctest::Approx(3 * kPi / 4));
  CHECK(qpsk_phase(1, 1) == doctest::Approx(5 * kPi / 4));
  CHECK(qpsk_phase(0, 1) == doctest::Approx(7 * kPi / 4));
  for (int b0 = 0; b0 < 2; ++b0)
    for (int b1 = 0; b1 < 2; ++b1) {
      const auto [r0, r1] = qpsk_bits(qpsk_phase(b0, b1));
      CHECK(r0 == b0);
      CHECK(r1 == b1);
    }
}

TEST_CASE("grid layout marks NRS pilots and validates") {
  const ResourceGrid g = ResourceGrid::make();
  int marked = 0;
  for (int s = 0; s < kSymbolsPerSubframe; ++s)
    for (int c = 0; c < kNumSubcarriers; ++c)
      if (g.nrs[s][c]) {
        ++marked;
        CHECK(is_nrs_symbol(s));
        CHECK((c == 0 || c == 6));
        CHECK(g.phase[s][c] == doctest::Approx(kNrsPhase));
      }
  CHECK(marked == 8);
  CHECK_NOTHROW(g.validate());

  ResourceGrid bad = g;
  bad.phase[0][0] = 0.1;  // not a constellation point
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = g;
  bad.nrs[1][0] = true;  // NRS outside the pilot columns
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(data_re_order(g).size() == 160);
}

TEST_CASE("modulated subframe carries the grid phases per DFT oracle") {
  const ResourceGrid g = random_grid(7);
  const BasebandSignal sig = modulate_subframe(g);
  CHECK(int(sig.samples.size()) == kSamplesPerSubframe);
  for (int s = 0; s < kSymbolsPerSubframe; ++s)
    for (int c = 0; c < kNumSubcarriers; ++c) {
      const cplx bin = dft_bin(sig, s, c);
      CHECK(std::abs(bin) == doctest::Approx(kFftSize).epsilon(1e-9));
      CHECK(std::abs(wrap_phase(std::arg(bin) - g.phase[s][c])) < 1e-9);
    }
}

TEST_CASE("cyclic prefix equals the tail of the useful part") {
  const BasebandSignal sig = modulate_subframe(random_grid(8));
  const auto& tm = subframe_timing();
  for (int s = 0; s < kSymbolsPerSubframe; ++s) {
    const int cp = tm.cp_len[s];
    CHECK(cp == (s % 7 == 0 ? kCpFirst : kCpOther));
    for (int n = 0; n < cp; ++n) {
      const cplx a = sig.samples[tm.useful_start[s] - cp + n];
      const cplx b = sig.samples[tm.useful_start[s] + kFftSize - cp + n];
      CHECK(std::abs(a - b) < 1e-9);
    }
  }
}

TEST_CASE("modulate/demodulate round trip") {
  const ResourceGrid g = random_grid(9);
  const ResourceGrid back = demodulate_subframe(modulate_subframe(g), ResourceGrid::make());
  for (int s = 0; s < kSymbolsPerSubframe; ++s)
    for (int c = 0; c < kNumSubcarriers; ++c)
      if (!g.nrs[s][c]) CHECK(back.phase[s][c] == doctest::Approx(g.phase[s][c]));
}

TEST_CASE("repeat_symbol is block periodic") {
  std::array<double, kNumSubcarriers> ph{};
  for (int c = 0; c < kNumSubcarriers; ++c) ph[c] = kPi / 4 + (c % 4) * kPi / 2;
  const SymbolTrain tr = repeat_symbol(ph, 4);
  const int block = kCpOther + kFftSize;
  CHECK(int(tr.signal.samples.size()) == 4 * block);
  REQUIRE(tr.useful_starts.size() == 4);
  for (int r = 0; r < 4; ++r) CHECK(tr.useful_starts[r] == r * block + kCpOther);
  for (int n = 0; n < block; ++n)
    CHECK(std::abs(tr.signal.samples[n] - tr.signal.samples[n + block]) < 1e-12);
}

TEST_CASE("symbol_start_time matches the cumulative CP profile") {
  CHECK(symbol_start_time(0) == doctest::Approx(0.0));
  CHECK(symbol_start_time(1) == doctest::Approx((kCpFirst + kFftSize) / kSampleRateHz));
  CHECK(symbol_start_time(7) == doctest::Approx(0.5e-3));    // next 0.5 ms slot
  CHECK(symbol_start_time(14) == doctest::Approx(1e-3));     // next subframe
  CHECK(symbol_start_time(283) == doctest::Approx(symbol_start_time(3) + kPeriodSec));
  // Starts are strictly increasing across a period.
  for (int n = 1; n < kSymbolsPerPeriod; ++n)
    CHECK(symbol_start_time(n) > symbol_start_time(n - 1));
}

TEST_CASE("signal time indexing bounds") {
  const BasebandSignal sig = modulate_subframe(ResourceGrid::make(), 1.0);
  CHECK(sig.index_of(1.0) == 0);
  CHECK(std::abs(sig.at_time(1.0) - sig.samples[0]) < 1e-12);
  CHECK_THROWS_AS(sig.at_time(0.9), std::out_of_range);
  CHECK_THROWS_AS(sig.at_time(1.0 + sig.duration() + 1e-3), std::out_of_range);
}

TEST_CASE("write_iq emits interleaved float32") {
  BasebandSignal sig;
  sig.samples = {{1.0, -2.0}, {0.5, 0.25}};
  const std::string path = "test_waveform_iq.bin";
  write_iq(sig, path);
  std::ifstream in(path, std::ios::binary);
  float v[4];
  in.read(reinterpret_cast<char*>(v), sizeof(v));
  CHECK(in.gcount() == 16);
  CHECK(v[0] == doctest::Approx(1.0f));
  CHECK(v[1] == doctest::Approx(-2.0f));
  CHECK(v[2] == doctest::Approx(0.5f));
  CHECK(v[3] == doctest::Approx(0.25f));
  std::remove(path.c_str());
}
