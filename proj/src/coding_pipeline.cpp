#include "nrsurf/coding_pipeline.hpp"

#include <stdexcept>

namespace nrsurf {

namespace {
// Generator taps, constraint length 7 (memory 6), octal 133/171/165.
constexpr uint32_t kG[3] = {0133, 0171, 0165};

inline int parity7(uint32_t x) {
  x &= 0x7F;
  x ^= x >> 4;
  x ^= x >> 2;
  x ^= x >> 1;
  return x & 1;
}
}  // namespace

BitVec tbcc_encode(const BitVec& payload) {
  const int k = int(payload.size());
  if (k < 6) throw std::invalid_argument("payload too short for tail biting");
  BitVec out(size_t(3) * k);
  // Tail biting: shift register preloaded with the last 6 payload bits.
  uint32_t reg = 0;
  for (int i = 0; i < 6; ++i) reg = (reg << 1) | (payload[k - 6 + i] & 1);
  for (int i = 0; i < k; ++i) {
    reg = ((reg << 1) | (payload[i] & 1)) & 0x7F;
    for (int s = 0; s < 3; ++s) out[size_t(s) * k + i] = uint8_t(parity7(reg & kG[s]));
  }
  return out;
}

BitVec subblock_interleave(const BitVec& d) {
  // 32-column block interleaver with the standard CC column permutation;
  // fill row-wise (dummies at the front), read permuted columns.
  constexpr int kCols = 32;
  constexpr int kPerm[kCols] = {1,  17, 9,  25, 5,  21, 13, 29, 3,  19, 11,
                                27, 7,  23, 15, 31, 0,  16, 8,  24, 4,  20,
                                12, 28, 2,  18, 10, 26, 6,  22, 14, 30};
  const int dsz = int(d.size());
  const int rows = (dsz + kCols - 1) / kCols;
  const int pad = rows * kCols - dsz;
  BitVec out;
  out.reserve(dsz);
  for (int j = 0; j < kCols; ++j)
    for (int r = 0; r < rows; ++r) {
      const int idx = r * kCols + kPerm[j] - pad;
      if (idx >= 0) out.push_back(d[idx]);
    }
  return out;
}

BitVec rate_match(const BitVec& buffer, int e) {
  if (buffer.empty() || e < 0) throw std::invalid_argument("bad rate match request");
  BitVec out(e);
  for (int i = 0; i < e; ++i) out[i] = buffer[i % buffer.size()];
  return out;
}

BitVec scrambler_sequence(uint32_t init, int len) {
  // Length-31 Gold sequence, x1 seeded with 1, x2 with `init`, 1600-step
  // fast-forward. Fixed init rather than a cell-ID seed.
  constexpr int kNc = 1600;
  std::vector<uint8_t> x1(kNc + len + 31), x2(kNc + len + 31);
  x1[0] = 1;
  for (int i = 0; i < 31; ++i) x2[i] = (init >> i) & 1;
  for (int i = 0; i + 31 < int(x1.size()); ++i) {
    x1[i + 31] = x1[i + 3] ^ x1[i];
    x2[i + 31] = x2[i + 3] ^ x2[i + 2] ^ x2[i + 1] ^ x2[i];
  }
  BitVec c(len);
  for (int i = 0; i < len; ++i) c[i] = x1[i + kNc] ^ x2[i + kNc];
  return c;
}

BitVec crc24a(const BitVec& bits) {
  constexpr uint32_t kPoly = 0x864CFB;
  uint32_t reg = 0;
  for (uint8_t b : bits) {
    reg ^= uint32_t(b & 1) << 23;
    reg <<= 1;
    if (reg & 0x1000000) reg ^= kPoly;
    reg &= 0xFFFFFF;
  }
  BitVec out(24);
  for (int i = 0; i < 24; ++i) out[i] = (reg >> (23 - i)) & 1;
  return out;
}

CodingPipeline::CodingPipeline(const PipelineConfig& cfg)
    : cfg_(cfg), layout_(ResourceGrid::make(cfg.nrs_subcarriers)) {
  re_order_ = data_re_order(layout_);
  scramble_ = scrambler_sequence(cfg_.scrambler_init, re_bit_count());
  for (int i = 0; i < int(re_order_.size()); ++i) {
    const int s = re_order_[i].first;
    if (!is_nrs_symbol(s)) {
      constrained_.push_back(2 * i);
      constrained_.push_back(2 * i + 1);
    }
  }
  if (int(constrained_.size()) != kConstrainedBits)
    throw std::logic_error("constrained position count mismatch");
}

BitVec CodingPipeline::encode_bits(const BitVec& payload) const {
  if (int(payload.size()) != kPayloadBits)
    throw std::invalid_argument("payload must be 256 bits");
  BitVec block = payload;
  if (cfg_.attach_crc24) {
    BitVec crc = crc24a(payload);
    block.insert(block.end(), crc.begin(), crc.end());
  }
  const BitVec coded = tbcc_encode(block);
  const int k = int(coded.size()) / 3;
  BitVec buffer;
  buffer.reserve(coded.size());
  for (int s = 0; s < 3; ++s) {
    const BitVec v =
        subblock_interleave(BitVec(coded.begin() + size_t(s) * k, coded.begin() + size_t(s + 1) * k));
    buffer.insert(buffer.end(), v.begin(), v.end());
  }
  BitVec matched = rate_match(buffer, re_bit_count());
  for (int i = 0; i < re_bit_count(); ++i) matched[i] ^= scramble_[i];
  return matched;
}

ResourceGrid CodingPipeline::encode_grid(const BitVec& payload) const {
  const BitVec bits = encode_bits(payload);
  ResourceGrid g = layout_;
  for (int i = 0; i < int(re_order_.size()); ++i) {
    const auto [s, c] = re_order_[i];
    g.phase[s][c] = qpsk_phase(bits[2 * i], bits[2 * i + 1]);
  }
  return g;
}

}  // namespace nrsurf
