#include "nrsurf/nbpu.hpp"

#include <cmath>
#include <stdexcept>

#include "nrsurf/harmonics.hpp"

namespace nrsurf {

namespace {
// Envelope peak sits at the useful-part midpoint, slot 128 of 256.
constexpr double kCenterTimeSec = (kEtsSlotsPerSymbol / 2) * kEtsSlotSec;
}  // namespace

NbpuFrame NbpuFrame::from_value(unsigned value) {
  if (value >= (1u << kInfoBits)) throw std::invalid_argument("info value needs > 5 bits");
  NbpuFrame f;
  for (int i = 0; i < kInfoBits; ++i) f.info_bits[i] = (value >> (kInfoBits - 1 - i)) & 1u;
  return f;
}

unsigned NbpuFrame::value() const {
  unsigned v = 0;
  for (uint8_t b : info_bits) v = (v << 1) | (b & 1u);
  return v;
}

void ReconfigInfo::validate() const {
  double prev = -1.0;
  for (const Entry& e : entries) {
    if (!(e.time_sec > prev) || e.time_sec >= kPeriodSec)
      throw std::invalid_argument("reconfig times must increase within the period");
    if (e.beam_id < 0) throw std::invalid_argument("negative beam id");
    prev = e.time_sec;
  }
}

PhaseTargets assemble_frame(const NbpuFrame& frame) {
  const auto on = max_power_phases();
  const auto off = off_symbol_phases();
  PhaseTargets targets;
  auto add_symbol = [&](int sym, const std::array<double, kNumSubcarriers>& ph) {
    for (int c = 0; c < kNumSubcarriers; ++c) targets.entries.push_back({sym, c, ph[c]});
  };
  for (int sym : NbpuFrame::kSyncSymbols) add_symbol(sym, on);
  for (int i = 0; i < NbpuFrame::kInfoBits; ++i)
    add_symbol(NbpuFrame::kInfoSymbols[i], frame.info_bits[i] ? on : off);
  targets.validate();
  return targets;
}

void OokThreshold::update(double sync_energy, double floor_energy) {
  const double w = 1.0 / (updates + 1);
  on_level += (sync_energy - on_level) * w;
  floor_level += (floor_energy - floor_level) * w;
  ++updates;
}

double OokThreshold::value() const { return 0.5 * (on_level + floor_level); }

std::array<uint8_t, NbpuFrame::kInfoBits> demodulate_ook(
    const std::array<double, NbpuFrame::kInfoBits>& center_samples, double threshold) {
  std::array<uint8_t, NbpuFrame::kInfoBits> bits{};
  for (int i = 0; i < NbpuFrame::kInfoBits; ++i) bits[i] = center_samples[i] > threshold;
  return bits;
}

double on_center_level() {
  static const double v = RxChainProbe(max_power_phases()).sample_clean(kCenterTimeSec);
  return v;
}

double off_center_level() {
  static const double v = RxChainProbe(off_symbol_phases()).sample_clean(kCenterTimeSec);
  return v;
}

BerPoint ber_at_snr(double snr_db, long symbols, uint64_t seed,
                    const std::vector<InterferenceTone>& interference) {
  RxChainProbe on(max_power_phases());
  RxChainProbe off(off_symbol_phases());
  const double psig = on.signal_power();
  for (const InterferenceTone& tone : interference) {
    const double amp = std::sqrt(psig * db_to_lin(tone.power_db));
    on.add_tone(tone.offset_hz, amp);
    off.add_tone(tone.offset_hz, amp);
  }
  const double sigma = noise_sigma_for_snr(psig, snr_db);
  std::mt19937_64 rng(seed);

  // Threshold adaptation from a short calibration run (sync symbols are
  // always ON; the OFF level doubles as the floor estimate).
  OokThreshold thr;
  for (int i = 0; i < 200; ++i)
    thr.update(on.sample(kCenterTimeSec, sigma, rng), off.sample(kCenterTimeSec, sigma, rng));
  const double threshold = thr.value();

  std::bernoulli_distribution coin(0.5);
  long errors = 0;
  for (long i = 0; i < symbols; ++i) {
    const bool bit = coin(rng);
    const double s = (bit ? on : off).sample(kCenterTimeSec, sigma, rng);
    if ((s > threshold) != bit) ++errors;
  }
  return {snr_db, symbols, errors, double(errors) / double(symbols)};
}

std::vector<BerPoint> ber_sweep(const std::vector<double>& snr_db_list, long symbols_per_point,
                                uint64_t seed, const std::vector<InterferenceTone>& interference) {
  std::vector<BerPoint> out;
  for (size_t i = 0; i < snr_db_list.size(); ++i)
    out.push_back(ber_at_snr(snr_db_list[i], symbols_per_point, seed + i, interference));
  return out;
}

}  // namespace nrsurf
