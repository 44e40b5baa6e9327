#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace nrsurf {

// Dense bit-packed GF(2) matrix, row-major, 64-bit words.
class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool get(int r, int c) const;
  void set(int r, int c, bool v);
  void xor_row(int dst, int src);  // row[dst] ^= row[src]

  int rank() const;

  // Particular solution of A x = b with free variables zeroed; nullopt when
  // inconsistent. `unsat_rows` (optional) receives the indices of rows whose
  // constraints cannot be met.
  std::optional<std::vector<uint8_t>> solve(const std::vector<uint8_t>& b,
                                            std::vector<int>* unsat_rows = nullptr) const;

 private:
  int rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<uint64_t> data_;
};

}  // namespace nrsurf
