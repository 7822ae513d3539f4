#pragma once

// Truncated power series over a Field: coefficients for exponents < trunc.
// All operations stay at the shorter truncation of their operands.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gk/gf.hpp"

namespace gk {

struct Series {
  const Field* F = nullptr;
  std::uint32_t trunc = 0;
  std::vector<felt> c;  // size == trunc

  Series() = default;
  Series(const Field& f, std::uint32_t n) : F(&f), trunc(n), c(n, 0) {}

  static Series constant(const Field& f, std::uint32_t n, felt v) {
    Series s(f, n);
    if (n > 0) s.c[0] = v;
    return s;
  }

  static Series monomial(const Field& f, std::uint32_t n, std::uint32_t e, felt v = 1) {
    Series s(f, n);
    if (e < n) s.c[e] = v;
    return s;
  }

  bool operator==(const Series& o) const { return c == o.c; }

  // first index with nonzero coefficient; trunc when none (saturated)
  std::uint32_t ord() const {
    for (std::uint32_t i = 0; i < trunc; ++i)
      if (c[i] != 0) return i;
    return trunc;
  }
};

inline Series operator+(const Series& a, const Series& b) {
  Series r(*a.F, std::min(a.trunc, b.trunc));
  for (std::uint32_t i = 0; i < r.trunc; ++i) r.c[i] = a.F->add(a.c[i], b.c[i]);
  return r;
}

inline Series operator-(const Series& a, const Series& b) {
  Series r(*a.F, std::min(a.trunc, b.trunc));
  for (std::uint32_t i = 0; i < r.trunc; ++i) r.c[i] = a.F->sub(a.c[i], b.c[i]);
  return r;
}

inline Series operator*(const Series& a, const Series& b) {
  Series r(*a.F, std::min(a.trunc, b.trunc));
  for (std::uint32_t i = 0; i < r.trunc; ++i) {
    if (a.c[i] == 0) continue;
    for (std::uint32_t j = 0; i + j < r.trunc; ++j) {
      if (b.c[j] == 0) continue;
      r.c[i + j] = a.F->add(r.c[i + j], a.F->mul(a.c[i], b.c[j]));
    }
  }
  return r;
}

inline Series scale(const Series& a, felt v) {
  Series r(*a.F, a.trunc);
  for (std::uint32_t i = 0; i < a.trunc; ++i) r.c[i] = a.F->mul(a.c[i], v);
  return r;
}

// a^(p^j): characteristic-p power, exact coefficient stride
inline Series pow_pk(const Series& a, std::uint32_t j) {
  Series r(*a.F, a.trunc);
  std::uint64_t stride = 1;
  for (std::uint32_t i = 0; i < j; ++i) stride *= a.F->p();
  for (std::uint32_t i = 0; i < a.trunc; ++i) {
    if (a.c[i] == 0) continue;
    std::uint64_t e = std::uint64_t(i) * stride;
    if (e >= a.trunc) break;
    r.c[e] = a.F->frobenius(a.c[i], j);
  }
  return r;
}

inline Series pow(const Series& a, std::uint64_t n) {
  Series r = Series::constant(*a.F, a.trunc, 1);
  Series base = a;
  while (n) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

}  // namespace gk
