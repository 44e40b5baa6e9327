#include "nrsurf/gf2.hpp"

#include <stdexcept>

namespace nrsurf {

Gf2Matrix::Gf2Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(size_t(rows) * words_, 0) {}

bool Gf2Matrix::get(int r, int c) const {
  return (data_[size_t(r) * words_ + c / 64] >> (c % 64)) & 1u;
}

void Gf2Matrix::set(int r, int c, bool v) {
  uint64_t& w = data_[size_t(r) * words_ + c / 64];
  const uint64_t m = uint64_t(1) << (c % 64);
  w = v ? (w | m) : (w & ~m);
}

void Gf2Matrix::xor_row(int dst, int src) {
  uint64_t* d = &data_[size_t(dst) * words_];
  const uint64_t* s = &data_[size_t(src) * words_];
  for (int i = 0; i < words_; ++i) d[i] ^= s[i];
}

int Gf2Matrix::rank() const {
  Gf2Matrix m = *this;
  int rank = 0;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (m.get(r, c)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int i = 0; i < words_; ++i)
        std::swap(m.data_[size_t(pivot) * words_ + i], m.data_[size_t(rank) * words_ + i]);
    for (int r = 0; r < rows_; ++r)
      if (r != rank && m.get(r, c)) m.xor_row(r, rank);
    ++rank;
  }
  return rank;
}

std::optional<std::vector<uint8_t>> Gf2Matrix::solve(const std::vector<uint8_t>& b,
                                                     std::vector<int>* unsat_rows) const {
  if (int(b.size()) != rows_) throw std::invalid_argument("rhs size mismatch");
  // Augmented [A | b | original-row-id] elimination.
  Gf2Matrix m(rows_, cols_ + 1);
  std::vector<int> row_id(rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int i = 0; i < words_; ++i) m.data_[size_t(r) * m.words_ + i] = data_[size_t(r) * words_ + i];
    m.set(r, cols_, b[r] & 1);
    row_id[r] = r;
  }
  std::vector<int> pivot_col;  // pivot column of each eliminated row
  int rank = 0;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (m.get(r, c)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int i = 0; i < m.words_; ++i)
        std::swap(m.data_[size_t(pivot) * m.words_ + i], m.data_[size_t(rank) * m.words_ + i]);
      std::swap(row_id[pivot], row_id[rank]);
    }
    for (int r = 0; r < rows_; ++r)
      if (r != rank && m.get(r, c)) m.xor_row(r, rank);
    pivot_col.push_back(c);
    ++rank;
  }
  bool consistent = true;
  for (int r = rank; r < rows_; ++r) {
    if (m.get(r, cols_)) {
      consistent = false;
      if (unsat_rows) unsat_rows->push_back(row_id[r]);
    }
  }
  if (!consistent) return std::nullopt;
  std::vector<uint8_t> x(cols_, 0);
  for (int r = 0; r < rank; ++r) x[pivot_col[r]] = m.get(r, cols_) ? 1 : 0;
  return x;
}

}  // namespace nrsurf
