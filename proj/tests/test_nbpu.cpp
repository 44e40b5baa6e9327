#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nrsurf/harmonics.hpp"
#include "nrsurf/nbpu.hpp"
#include "nrsurf/waveform.hpp"

using namespace nrsurf;

TEST_CASE("frame value round trip") {
  for (unsigned v = 0; v < 32; ++v) CHECK(NbpuFrame::from_value(v).value() == v);
  CHECK_THROWS_AS(NbpuFrame::from_value(32), std::invalid_argument);
  const NbpuFrame f = NbpuFrame::from_value(0b10110);
  CHECK(f.info_bits == std::array<uint8_t, 5>{1, 0, 1, 1, 0});
}

TEST_CASE("reconfig info validation") {
  ReconfigInfo info;
  info.entries = {{1e-3, 0}, {5e-3, 2}};
  CHECK_NOTHROW(info.validate());
  info.entries = {{5e-3, 0}, {5e-3, 1}};  // not strictly increasing
  CHECK_THROWS_AS(info.validate(), std::invalid_argument);
  info.entries = {{1e-3, -1}};
  CHECK_THROWS_AS(info.validate(), std::invalid_argument);
  info.entries = {{25e-3, 0}};  // outside the period
  CHECK_THROWS_AS(info.validate(), std::invalid_argument);
}

TEST_CASE("assembled frame targets the right symbols and phases") {
  const NbpuFrame f = NbpuFrame::from_value(0b01101);
  const PhaseTargets targets = assemble_frame(f);
  CHECK(targets.entries.size() == 120);  // 10 symbols x 12 subcarriers
  const auto on = max_power_phases();
  const auto off = off_symbol_phases();
  for (const auto& t : targets.entries) {
    CHECK(!is_nrs_symbol(t.symbol));
    bool is_sync = false;
    for (int s : NbpuFrame::kSyncSymbols) is_sync |= (t.symbol == s);
    if (is_sync) {
      CHECK(t.phase == doctest::Approx(on[t.subcarrier]));
      continue;
    }
    int i = 0;
    while (NbpuFrame::kInfoSymbols[i] != t.symbol) ++i;
    const auto& expect = f.info_bits[i] ? on : off;
    CHECK(t.phase == doctest::Approx(expect[t.subcarrier]));
  }
}

TEST_CASE("on/off center levels give at least 13 dB") {
  const double ratio_db = lin_to_db(on_center_level() / off_center_level());
  CHECK(ratio_db >= 13.0);
  CHECK(on_center_level() > 100.0);  // near the analytic 144 peak
}

TEST_CASE("threshold adaptation and noiseless slicing") {
  OokThreshold thr;
  thr.update(100.0, 10.0);
  thr.update(120.0, 20.0);
  CHECK(thr.on_level == doctest::Approx(110.0));
  CHECK(thr.floor_level == doctest::Approx(15.0));
  CHECK(thr.value() == doctest::Approx(62.5));

  const double t = 0.5 * (on_center_level() + off_center_level());
  const double on = on_center_level(), off = off_center_level();
  const auto bits = demodulate_ook({on, off, on, on, off}, t);
  CHECK(bits == std::array<uint8_t, 5>{1, 0, 1, 1, 0});
}

TEST_CASE("full chain: payload -> waveform -> envelope -> bits") {
  const CodingPipeline pipe;
  const AffineModel model = build_affine_model(pipe, 10);
  const NbpuFrame frame = NbpuFrame::from_value(0b10011);
  const SolveResult res = solve_payload(assemble_frame(frame), pipe, model);
  REQUIRE(res.ok());

  const BasebandSignal sig = modulate_subframe(pipe.encode_grid(res.payload));
  const EnvelopeSignal env = envelope_detect(bandpass_filter(sig));
  const auto& tm = subframe_timing();
  auto center = [&](int sym) {
    return env.at_index_exact((tm.useful_start[sym] + kFftSize / 2) / kSampleRateHz);
  };
  // Sync symbols all read ON.
  OokThreshold thr;
  for (int s : NbpuFrame::kSyncSymbols) CHECK(center(s) > 0.5 * on_center_level());
  thr.update(center(0), off_center_level());
  std::array<double, 5> info{};
  for (int i = 0; i < 5; ++i) info[i] = center(NbpuFrame::kInfoSymbols[i]);
  CHECK(demodulate_ook(info, thr.value()) == frame.info_bits);
}

TEST_CASE("ber is monotone in snr and clean at the operating point") {
  const auto curve = ber_sweep({-2.0, 6.0, 14.0}, 4000, 77);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].ber >= curve[1].ber);
  CHECK(curve[1].ber >= curve[2].ber);
  CHECK(curve[2].errors == 0);
  CHECK(curve[0].symbols == 4000);
}

TEST_CASE("interference template degrades gracefully") {
  // Noiseless link with the adjacent-carrier comb at -10 dB pre-filter SINR:
  // the bandpass recovers an error-free link on a short run.
  const BerPoint pt = ber_at_snr(std::numeric_limits<double>::infinity(), 3000, 31,
                                 nr_interference_template(-10.0));
  CHECK(pt.errors == 0);
}
