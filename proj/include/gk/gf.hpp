#pragma once

// Finite field arithmetic on integer-encoded elements.
//
// An element of GF(p^k) is a polynomial residue sum c_i t^i, encoded as the
// integer sum c_i p^i (constant term least significant).  A Field fixes the
// modulus deterministically: the monic irreducible of degree k with the
// smallest encoding, so identical (p, k) always name identical fields.
// Small fields (p^k below the table cap) get log/antilog multiplication and
// digit-split addition tables; larger fields fall back to polynomial
// arithmetic on digit vectors.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gk {

using felt = std::uint64_t;

namespace detail {

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Dense F_p[t] polynomials as digit vectors, lowest degree first.
using poly = std::vector<std::uint32_t>;

inline void poly_trim(poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline poly poly_mul(const poly& a, const poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  }
  return r;
}

// Remainder of a by monic b.
inline poly poly_rem(poly a, const poly& b, std::uint64_t p) {
  poly_trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    if (lead != 0)
      for (std::size_t i = 0; i <= db; ++i) {
        const std::uint64_t sub = lead * b[i] % p;
        a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
      }
    a.pop_back();
    poly_trim(a);
    if (a.size() <= db) break;
  }
  poly_trim(a);
  return a;
}

inline bool poly_is_zero(const poly& a) { return a.empty(); }

}  // namespace detail

class Field {
 public:
  Field(std::uint64_t p, std::uint32_t k) : Field(p, k, find_modulus(p, k)) {}

  Field(std::uint64_t p, std::uint32_t k, std::vector<std::uint32_t> modulus)
      : p_(p), k_(k), modulus_(std::move(modulus)) {
    if (!detail::is_prime_u64(p_)) throw std::invalid_argument("gf: p must be prime, got " + std::to_string(p_));
    if (k_ < 1) throw std::invalid_argument("gf: k must be >= 1");
    q_ = checked_pow(p_, k_);
    if (modulus_.size() != k_ + 1 || modulus_.back() != 1)
      throw std::invalid_argument("gf: modulus must be monic of degree k");
    for (auto c : modulus_)
      if (c >= p_) throw std::invalid_argument("gf: modulus coefficient out of range");
    if (!is_irreducible(modulus_, p_))
      throw std::invalid_argument("gf: modulus is reducible");
    init_tables();
  }

  std::uint64_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint64_t size() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  felt modulus_encoded() const {
    felt e = 0;
    for (std::size_t i = modulus_.size(); i-- > 0;) e = e * p_ + modulus_[i];
    return e;
  }

  // Serialization header line: "p k modulus_encoded".
  std::string header() const {
    return std::to_string(p_) + " " + std::to_string(k_) + " " + std::to_string(modulus_encoded());
  }

  felt zero() const { return 0; }
  felt one() const { return 1; }

  felt from_int(std::uint64_t n) const { return n % p_; }

  felt add(felt a, felt b) const {
    if (p_ == 2) return a ^ b;
    if (k_ == 1) return (a + b) % p_;
    if (!add_lo_.empty()) return add_lo_[(a % split_) * split_ + b % split_] + split_ * add_lo_[(a / split_) * split_ + b / split_];
    return add_generic(a, b);
  }

  felt neg(felt a) const {
    if (p_ == 2) return a;
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    if (!neg_lo_.empty()) return neg_lo_[a % split_] + split_ * neg_lo_[a / split_];
    return neg_generic(a);
  }

  felt sub(felt a, felt b) const { return add(a, neg(b)); }

  felt mul(felt a, felt b) const {
    if (a == 0 || b == 0) return 0;
    if (k_ == 1) return a * b % p_;
    if (!log_.empty()) {
      std::uint64_t e = std::uint64_t(log_[a]) + log_[b];
      if (e >= q_ - 1) e -= q_ - 1;
      return exp_[e];
    }
    return mul_generic(a, b);
  }

  felt inv(felt a) const {
    if (a == 0) throw std::invalid_argument("gf: inverse of zero");
    if (k_ == 1) return pow(a, p_ - 2);
    if (!log_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    return pow(a, q_ - 2);
  }

  felt div(felt a, felt b) const { return mul(a, inv(b)); }

  // a^e for any signed exponent; a must be nonzero when e < 0.
  felt pow(felt a, long long e) const {
    if (a == 0) {
      if (e < 0) throw std::invalid_argument("gf: zero to a negative power");
      return e == 0 ? 1 : 0;
    }
    std::uint64_t n = q_ - 1;
    long long r = e % static_cast<long long>(n);
    if (r < 0) r += n;
    if (!log_.empty()) return exp_[mulmod(log_[a], static_cast<std::uint64_t>(r), n)];
    felt acc = 1, base = a;
    std::uint64_t m = static_cast<std::uint64_t>(r);
    while (m) {
      if (m & 1) acc = mul(acc, base);
      base = mul(base, base);
      m >>= 1;
    }
    return acc;
  }

  // a^(p^m); m is reduced mod k since Frobenius has order k.
  felt frobenius(felt a, long long m) const {
    if (a == 0) return 0;
    long long r = m % static_cast<long long>(k_);
    if (r < 0) r += k_;
    std::uint64_t e = 1;
    for (long long i = 0; i < r; ++i) e = mulmod(e, p_, q_ - 1);
    return pow(a, static_cast<long long>(e));
  }

  // Membership in the subfield GF(p^m); m must divide k.
  bool in_subfield(std::uint32_t m, felt a) const {
    if (m == 0 || k_ % m != 0)
      throw std::invalid_argument("gf: subfield degree " + std::to_string(m) + " does not divide " + std::to_string(k_));
    return frobenius(a, m) == a;
  }

  felt encode(const std::vector<std::uint32_t>& coeffs) const {
    if (coeffs.size() != k_) throw std::invalid_argument("gf: encode expects exactly k residues");
    felt e = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      if (coeffs[i] >= p_) throw std::invalid_argument("gf: encode residue out of range");
      e = e * p_ + coeffs[i];
    }
    return e;
  }

  std::vector<std::uint32_t> decode(felt a) const {
    if (a >= q_) throw std::invalid_argument("gf: encoding out of range");
    std::vector<std::uint32_t> c(k_);
    for (std::uint32_t i = 0; i < k_; ++i) {
      c[i] = static_cast<std::uint32_t>(a % p_);
      a /= p_;
    }
    return c;
  }

  // Smallest-encoding multiplicative generator (tables required).
  felt primitive_element() const {
    if (gen_ == 0) throw std::runtime_error("gf: no generator cached for this field size");
    return gen_;
  }

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;
  Field(Field&&) = default;

  static constexpr std::uint64_t table_cap = 1ull << 22;

 private:
  std::uint64_t p_;
  std::uint32_t k_;
  std::uint64_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> log_, exp_;
  std::vector<std::uint32_t> add_lo_, neg_lo_;
  std::uint64_t split_ = 1;
  felt gen_ = 0;

  static std::uint64_t checked_pow(std::uint64_t p, std::uint32_t k) {
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      if (q > (1ull << 62) / p) throw std::invalid_argument("gf: p^k overflows the element encoding");
      q *= p;
    }
    return q;
  }

  static std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
  }

  // Irreducibility by trial division against all monic polynomials of
  // degree <= k/2, enumerated in encoding order.
  static bool is_irreducible(const detail::poly& f, std::uint64_t p) {
    const std::uint32_t k = static_cast<std::uint32_t>(f.size() - 1);
    if (k == 1) return true;
    if (f[0] == 0) return false;
    for (std::uint32_t d = 1; 2 * d <= k; ++d) {
      std::uint64_t count = 1;
      for (std::uint32_t i = 0; i < d; ++i) count *= p;
      for (std::uint64_t c = 0; c < count; ++c) {
        detail::poly g(d + 1, 0);
        std::uint64_t v = c;
        for (std::uint32_t i = 0; i < d; ++i) {
          g[i] = static_cast<std::uint32_t>(v % p);
          v /= p;
        }
        g[d] = 1;
        if (detail::poly_is_zero(detail::poly_rem(f, g, p))) return false;
      }
    }
    return true;
  }

  static std::vector<std::uint32_t> find_modulus(std::uint64_t p, std::uint32_t k) {
    if (!detail::is_prime_u64(p)) throw std::invalid_argument("gf: p must be prime, got " + std::to_string(p));
    if (k < 1) throw std::invalid_argument("gf: k must be >= 1");
    checked_pow(p, k);
    if (k == 1) return {0, 1};
    const std::uint64_t count = checked_pow(p, k);
    for (std::uint64_t c = 0; c < count; ++c) {
      detail::poly f(k + 1, 0);
      std::uint64_t v = c;
      for (std::uint32_t i = 0; i < k; ++i) {
        f[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      f[k] = 1;
      if (is_irreducible(f, p)) return f;
    }
    throw std::logic_error("gf: no irreducible polynomial found");
  }

  felt add_generic(felt a, felt b) const {
    felt r = 0, m = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      r += (a % p_ + b % p_) % p_ * m;
      a /= p_;
      b /= p_;
      m *= p_;
    }
    return r;
  }

  felt neg_generic(felt a) const {
    felt r = 0, m = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      felt d = a % p_;
      r += (d == 0 ? 0 : p_ - d) * m;
      a /= p_;
      m *= p_;
    }
    return r;
  }

  felt mul_generic(felt a, felt b) const {
    detail::poly pa = to_poly(a), pb = to_poly(b);
    return from_poly(detail::poly_rem(detail::poly_mul(pa, pb, p_), modulus_, p_));
  }

  detail::poly to_poly(felt a) const {
    detail::poly r(k_);
    for (std::uint32_t i = 0; i < k_; ++i) {
      r[i] = static_cast<std::uint32_t>(a % p_);
      a /= p_;
    }
    detail::poly_trim(r);
    return r;
  }

  felt from_poly(const detail::poly& f) const {
    felt e = 0;
    for (std::size_t i = f.size(); i-- > 0;) e = e * p_ + f[i];
    return e;
  }

  void init_tables() {
    if (k_ > 1 && p_ != 2 && q_ <= table_cap) {
      std::uint64_t h = (k_ + 1) / 2;
      split_ = 1;
      for (std::uint64_t i = 0; i < h; ++i) split_ *= p_;
      add_lo_.assign(split_ * split_, 0);
      neg_lo_.assign(split_, 0);
      for (std::uint64_t a = 0; a < split_; ++a) {
        std::uint64_t an = 0, m = 1, v = a;
        while (v) {
          std::uint64_t d = v % p_;
          an += (d == 0 ? 0 : p_ - d) * m;
          v /= p_;
          m *= p_;
        }
        neg_lo_[a] = static_cast<std::uint32_t>(an);
        for (std::uint64_t b = 0; b < split_; ++b) {
          std::uint64_t r = 0, mm = 1, x = a, y = b;
          for (std::uint64_t i = 0; i < h; ++i) {
            r += (x % p_ + y % p_) % p_ * mm;
            x /= p_;
            y /= p_;
            mm *= p_;
          }
          add_lo_[a * split_ + b] = static_cast<std::uint32_t>(r);
        }
      }
    }
    if (k_ > 1 && q_ <= table_cap) {
      std::vector<std::uint64_t> primes;
      std::uint64_t n = q_ - 1;
      for (std::uint64_t d = 2; d * d <= n; ++d)
        while (n % d == 0) {
          if (primes.empty() || primes.back() != d) primes.push_back(d);
          n /= d;
        }
      if (n > 1) primes.push_back(n);
      felt g = 0;
      for (felt cand = 2; cand < q_; ++cand) {
        bool ok = true;
        for (auto r : primes) {
          felt acc = 1, base = cand;
          std::uint64_t e = (q_ - 1) / r;
          while (e) {
            if (e & 1) acc = mul_generic(acc, base);
            base = mul_generic(base, base);
            e >>= 1;
          }
          if (acc == 1) { ok = false; break; }
        }
        if (ok) { g = cand; break; }
      }
      if (g == 0) throw std::logic_error("gf: no multiplicative generator found");
      gen_ = g;
      log_.assign(q_, 0);
      exp_.assign(q_ - 1, 0);
      felt acc = 1;
      for (std::uint64_t i = 0; i < q_ - 1; ++i) {
        exp_[i] = static_cast<std::uint32_t>(acc);
        log_[acc] = static_cast<std::uint32_t>(i);
        acc = mul_generic(acc, g);
      }
      if (acc != 1) throw std::logic_error("gf: generator order mismatch");
    }
  }
};

// Deterministic embedding GF(p^m) -> GF(p^n): the canonical generator (class
// of t) maps to the smallest-encoding root of the subfield modulus in the
// target field.
class Embedding {
 public:
  Embedding(const Field& sub, const Field& tgt) : sub_(&sub), tgt_(&tgt) {
    if (sub.p() != tgt.p()) throw std::invalid_argument("gf: embedding requires equal characteristic");
    if (tgt.k() % sub.k() != 0)
      throw std::invalid_argument("gf: embedding requires subfield degree dividing target degree");
    const auto& mod = sub.modulus();
    root_ = tgt.size();
    for (felt x = 0; x < tgt.size(); ++x) {
      felt acc = 0;
      for (std::size_t i = mod.size(); i-- > 0;) acc = tgt.add(tgt.mul(acc, x), tgt.from_int(mod[i]));
      if (acc == 0) { root_ = x; break; }
    }
    if (root_ == tgt.size()) throw std::logic_error("gf: subfield modulus has no root in target");
  }

  felt root() const { return root_; }

  felt operator()(felt a) const {
    auto digits = sub_->decode(a);
    felt acc = 0;
    for (std::size_t i = digits.size(); i-- > 0;) acc = tgt_->add(tgt_->mul(acc, root_), tgt_->from_int(digits[i]));
    return acc;
  }

 private:
  const Field* sub_;
  const Field* tgt_;
  felt root_;
};

inline felt embed_subfield(const Field& sub, const Field& tgt, felt a) { return Embedding(sub, tgt)(a); }

}  // namespace gk
