#pragma once

// Dense exact linear algebra over a Field.
//
// Elimination is deterministic: columns are processed left to right and the
// pivot is the first row (in storage order) with a nonzero entry, so RREF
// output, pivot columns, and nullspace bases are reproducible across runs.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gk/gf.hpp"

namespace gk {

struct Mat {
  const Field* F = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<felt> a;

  Mat() = default;
  Mat(const Field& f, std::size_t r, std::size_t c)
      : F(&f), rows(r), cols(c), a(r * c, 0) {}

  felt& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  felt at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  felt* row(std::size_t r) { return a.data() + r * cols; }
  const felt* row(std::size_t r) const { return a.data() + r * cols; }
};

struct RrefResult {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

// In-place reduced row echelon form: leading entries 1, pivot columns cleared
// above and below, pivot columns are the minimal ones for the row space.
inline RrefResult rref_in_place(Mat& M) {
  RrefResult res;
  const Field& F = *M.F;
  std::size_t r = 0;
  for (std::size_t c = 0; c < M.cols && r < M.rows; ++c) {
    std::size_t pr = r;
    while (pr < M.rows && M.at(pr, c) == 0) ++pr;
    if (pr == M.rows) continue;
    if (pr != r) {
      for (std::size_t j = c; j < M.cols; ++j)
        std::swap(M.at(pr, j), M.at(r, j));
    }
    const felt piv = M.at(r, c);
    if (piv != 1) {
      const felt pi = F.inv(piv);
      for (std::size_t j = c; j < M.cols; ++j)
        M.at(r, j) = F.mul(M.at(r, j), pi);
    }
    for (std::size_t i = 0; i < M.rows; ++i) {
      if (i == r) continue;
      const felt f = M.at(i, c);
      if (f == 0) continue;
      for (std::size_t j = c; j < M.cols; ++j)
        M.at(i, j) = F.sub(M.at(i, j), F.mul(f, M.at(r, j)));
    }
    res.pivot_cols.push_back(c);
    ++r;
  }
  res.rank = r;
  return res;
}

inline std::size_t rank_of(Mat M) { return rref_in_place(M).rank; }

// Canonical nullspace basis from the RREF: one vector per free column, in
// increasing free-column order, with a 1 at the free column.
inline std::vector<std::vector<felt>> nullspace(Mat M) {
  const Field& F = *M.F;
  const RrefResult rr = rref_in_place(M);
  std::vector<bool> is_pivot(M.cols, false);
  for (std::size_t c : rr.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<felt>> basis;
  for (std::size_t fc = 0; fc < M.cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<felt> v(M.cols, 0);
    v[fc] = 1;
    for (std::size_t i = 0; i < rr.rank; ++i)
      v[rr.pivot_cols[i]] = F.neg(M.at(i, fc));
    basis.push_back(std::move(v));
  }
  return basis;
}

// Streaming rank of a growing list of vectors (row space). Keeps at most
// min(cols, rank+?) echelon vectors; absorb() reports whether the rank grew.
// Merging two accumulators yields the rank of the combined span, so batches
// can be combined in any order.
class RankAccumulator {
 public:
  RankAccumulator(const Field& F, std::size_t cols) : F_(&F), cols_(cols) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  // leading-entry positions of the echelon rows, strictly increasing
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool absorb(std::vector<felt> v) {
    if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
    const Field& F = *F_;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const felt f = v[pivots_[i]];
      if (f == 0) continue;
      const std::vector<felt>& r = rows_[i];
      for (std::size_t j = pivots_[i]; j < cols_; ++j)
        if (r[j] != 0) v[j] = F.sub(v[j], F.mul(f, r[j]));
    }
    std::size_t p = 0;
    while (p < cols_ && v[p] == 0) ++p;
    if (p == cols_) return false;
    if (v[p] != 1) {
      const felt pi = F.inv(v[p]);
      for (std::size_t j = p; j < cols_; ++j)
        if (v[j] != 0) v[j] = F.mul(v[j], pi);
    }
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(v));
    pivots_.insert(pivots_.begin() + pos, p);
    return true;
  }

  void merge(const RankAccumulator& other) {
    if (other.cols_ != cols_) throw std::invalid_argument("column mismatch");
    for (const std::vector<felt>& r : other.rows_) absorb(r);
  }

 private:
  const Field* F_;
  std::size_t cols_;
  std::vector<std::vector<felt>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace gk
