#pragma once

#include <cstdint>
#include <vector>

#include "nrsurf/common.hpp"
#include "nrsurf/resource_grid.hpp"

namespace nrsurf {

using BitVec = std::vector<uint8_t>;  // one bit per byte

inline constexpr int kPayloadBits = 256;
inline constexpr int kConstrainedBits = 240;  // 120 REs of the 10 data symbols

struct PipelineConfig {
  std::array<int, 2> nrs_subcarriers = kDefaultNrsSubcarriers;
  uint32_t scrambler_init = 0x1A2B3;  // fixed documented init, not cell-seeded
  bool attach_crc24 = false;          // CRC24A over the payload, appended before coding
};

// Rate-1/3 tail-biting convolutional code, constraint length 7,
// generators 133/171/165 (octal). Output is stream-major d0||d1||d2.
BitVec tbcc_encode(const BitVec& payload);

// Per-stream 32-column sub-block interleaver feeding the circular buffer.
BitVec subblock_interleave(const BitVec& stream);

// Circular-buffer rate matching: first `e` bits of the buffer, wrapping with
// repetition when e exceeds the buffer.
BitVec rate_match(const BitVec& buffer, int e);

// Length-31 Gold scrambling sequence with the fixed init.
BitVec scrambler_sequence(uint32_t init, int len);

// Payload -> modulated subframe grid via encode -> rate match -> scramble ->
// QPSK mapping onto the data REs in symbol-major order.
class CodingPipeline {
 public:
  explicit CodingPipeline(const PipelineConfig& cfg = {});

  // Full coded-and-scrambled RE bit stream (2 bits per data RE, 320 bits).
  BitVec encode_bits(const BitVec& payload) const;
  // Same, mapped onto a grid.
  ResourceGrid encode_grid(const BitVec& payload) const;

  // Bit positions (within the 320-bit RE stream) addressing the 120 REs of
  // the 10 NBPU data symbols {0..4, 7..11}.
  const std::vector<int>& constrained_positions() const { return constrained_; }
  const std::vector<std::pair<int, int>>& re_order() const { return re_order_; }
  const PipelineConfig& config() const { return cfg_; }
  int re_bit_count() const { return int(re_order_.size()) * 2; }

 private:
  PipelineConfig cfg_;
  ResourceGrid layout_;
  std::vector<std::pair<int, int>> re_order_;
  std::vector<int> constrained_;
  BitVec scramble_;
};

// CRC-24A (polynomial 0x864CFB), MSB-first, zero init. Linear over GF(2).
BitVec crc24a(const BitVec& bits);

}  // namespace nrsurf
