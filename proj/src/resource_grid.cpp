#include "nrsurf/resource_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nrsurf/csv.hpp"

namespace nrsurf {

bool is_nrs_symbol(int symbol) {
  return std::find(kNrsSymbols.begin(), kNrsSymbols.end(), symbol) != kNrsSymbols.end();
}

double qpsk_phase(int b0, int b1) {
  const double re = 1.0 - 2.0 * b0;
  const double im = 1.0 - 2.0 * b1;
  return std::atan2(im, re) < 0 ? std::atan2(im, re) + 2.0 * kPi : std::atan2(im, re);
}

std::pair<int, int> qpsk_bits(double phase) {
  const double re = std::cos(phase);
  const double im = std::sin(phase);
  return {re < 0 ? 1 : 0, im < 0 ? 1 : 0};
}

ResourceGrid ResourceGrid::make(const std::array<int, 2>& nrs_sc) {
  ResourceGrid g;
  for (int s = 0; s < kSymbolsPerSubframe; ++s)
    for (int c = 0; c < kNumSubcarriers; ++c) g.phase[s][c] = kPi / 4.0;
  for (int s : kNrsSymbols)
    for (int c : nrs_sc) {
      g.nrs[s][c] = true;
      g.phase[s][c] = kNrsPhase;
    }
  return g;
}

void ResourceGrid::validate() const {
  static const double qpsk[4] = {kPi / 4, 3 * kPi / 4, 5 * kPi / 4, 7 * kPi / 4};
  for (int s = 0; s < kSymbolsPerSubframe; ++s) {
    int nrs_count = 0;
    for (int c = 0; c < kNumSubcarriers; ++c) {
      if (nrs[s][c]) {
        ++nrs_count;
        if (!is_nrs_symbol(s))
          throw std::invalid_argument("NRS marked outside NRS symbol columns");
        continue;
      }
      bool ok = false;
      for (double q : qpsk)
        if (std::abs(wrap_phase(phase[s][c] - q)) < 1e-9) ok = true;
      if (!ok) throw std::invalid_argument("grid phase outside the QPSK set");
    }
    if (is_nrs_symbol(s) && nrs_count != 2)
      throw std::invalid_argument("NRS symbol must carry exactly 2 NRS subcarriers");
    if (!is_nrs_symbol(s) && nrs_count != 0)
      throw std::invalid_argument("unexpected NRS count");
  }
}

void ResourceGrid::write_csv(const std::string& path) const {
  CsvWriter w(path);
  w.header({"symbol", "subcarrier", "phase", "is_nrs"});
  for (int s = 0; s < kSymbolsPerSubframe; ++s)
    for (int c = 0; c < kNumSubcarriers; ++c)
      w.row({double(s), double(c), phase[s][c], nrs[s][c] ? 1.0 : 0.0});
}

std::vector<std::pair<int, int>> data_re_order(const ResourceGrid& grid) {
  std::vector<std::pair<int, int>> out;
  out.reserve(160);
  for (int s = 0; s < kSymbolsPerSubframe; ++s)
    for (int c = 0; c < kNumSubcarriers; ++c)
      if (!grid.nrs[s][c]) out.emplace_back(s, c);
  return out;
}

FrameSchedule build_frame_schedule(const FrameScheduleConfig& cfg) {
  FrameSchedule fs;
  fs.nbpu_subframe_indices = cfg.nbpu_subframe_indices;
  for (int i : fs.nbpu_subframe_indices)
    if (i < 0 || i >= kSubframesPerPeriod)
      throw std::invalid_argument("NBPU subframe index out of range");
  return fs;
}

double symbol_start_time(int n) {
  const int per_period = kSymbolsPerPeriod;
  const long periods = n / per_period;
  int k = n % per_period;
  const int slot = k / 7;     // 0.5 ms slots
  const int in_slot = k % 7;
  long samples = long(slot) * 1920;
  samples += in_slot == 0 ? 0 : kCpFirst + kFftSize + (in_slot - 1) * (kCpOther + kFftSize);
  return periods * kPeriodSec + samples / kSampleRateHz;
}

}  // namespace nrsurf
