#pragma once

// The curve over GF(q^6) cut out by
//   form_zy: Z^(q^2-q+1) T^(q-1) - Y^(q^2) + Y T^(q^2-1)   (degree q^2)
//   form_yx: Y^(q+1) - X^q T - X T^q                       (degree q+1)
// Affine chart T=1:  z^m = y^(q^2) - y  and  y^(q+1) = x^q + x,  m = q^2-q+1.
//
// The two surfaces also share the full line {Y=0, T=0}; of that line only
// (1:0:0:0) lies on the curve.  Form vanishing (is_on_curve) therefore accepts
// the whole line, and membership questions against the curve must use the
// enumerated point set.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gk/gf.hpp"
#include "gk/series.hpp"

namespace gk {

struct Point {
  felt x = 0, y = 0, z = 0, t = 0;
  auto operator<=>(const Point&) const = default;
};

enum class PointClass { infinity, subfield, generic };

// linear form a0*X + a1*Y + a2*Z + a3*T
using LinForm = std::array<felt, 4>;

// monomial X^e0 Y^e1 Z^e2 T^e3 with coefficient c
struct FormTerm {
  std::array<std::uint32_t, 4> e;
  felt c = 0;
};

struct OrdResult {
  std::uint64_t value = 0;
  bool saturated = false;  // true: order >= value (truncation reached)
};

// affine branch through a curve point, parameter t: (x(t), y(t), z(t), 1)
struct BranchJet {
  Series x, y, z;
};

// branch through (1:0:0:0) in the chart X=1, parameter s = z-coordinate
struct InfinityBranch {
  Series y, z, t;
};

struct CurveParams {
  std::uint32_t q = 0, p = 0, e = 0;
  std::uint32_t a = 0;  // q+1
  std::uint32_t b = 0;  // q^2
  std::uint32_t m = 0;  // q^2-q+1
  std::uint64_t point_count = 0;     // q^8 - q^6 + q^5 + 1
  std::uint64_t subfield_count = 0;  // q^3 + 1, including (1:0:0:0)
};

namespace detail {

inline void factor_prime_power(std::uint32_t q, std::uint32_t& p, std::uint32_t& e) {
  if (q < 2) throw std::invalid_argument("q must be a prime power >= 2");
  for (std::uint32_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      e = 0;
      std::uint32_t r = q;
      while (r % d == 0) { r /= d; ++e; }
      if (r != 1) throw std::invalid_argument("q must be a prime power");
      return;
    }
  }
  p = q;
  e = 1;
}

// F_p-linear solver for x^q + x = w on GF(q^6) viewed as digit vectors
class AdditiveSolver {
 public:
  AdditiveSolver(const Field& F, std::uint32_t e) : F_(&F), k_(F.k()), p_(F.p()) {
    // columns: digits of basis^q + basis
    std::vector<std::vector<std::uint32_t>> M(k_, std::vector<std::uint32_t>(k_, 0));
    felt basis = 1;
    for (std::uint32_t j = 0; j < k_; ++j) {
      felt img = F.add(F.frobenius(basis, e), basis);
      auto d = F.decode(img);
      for (std::uint32_t i = 0; i < k_; ++i) M[i][j] = d[i];
      basis *= p_;
    }
    // RREF of [M | I]
    std::vector<std::vector<std::uint32_t>> A(k_, std::vector<std::uint32_t>(2 * k_, 0));
    for (std::uint32_t i = 0; i < k_; ++i) {
      for (std::uint32_t j = 0; j < k_; ++j) A[i][j] = M[i][j];
      A[i][k_ + i] = 1;
    }
    std::uint32_t row = 0;
    for (std::uint32_t col = 0; col < k_ && row < k_; ++col) {
      std::uint32_t piv = row;
      while (piv < k_ && A[piv][col] == 0) ++piv;
      if (piv == k_) continue;
      std::swap(A[row], A[piv]);
      std::uint32_t inv = mod_inv(A[row][col]);
      for (std::uint32_t j = 0; j < 2 * k_; ++j) A[row][j] = A[row][j] * inv % p_;
      for (std::uint32_t i = 0; i < k_; ++i) {
        if (i == row || A[i][col] == 0) continue;
        std::uint32_t f = A[i][col];
        for (std::uint32_t j = 0; j < 2 * k_; ++j)
          A[i][j] = (A[i][j] + (p_ - f) * A[row][j]) % p_;
      }
      pivot_cols_.push_back(col);
      ++row;
    }
    rank_ = row;
    R_ = std::move(A);
    // kernel basis from free columns, then all p^(k-rank) kernel elements
    std::vector<felt> kernel_basis;
    std::vector<bool> is_pivot(k_, false);
    for (std::uint32_t c : pivot_cols_) is_pivot[c] = true;
    for (std::uint32_t c = 0; c < k_; ++c) {
      if (is_pivot[c]) continue;
      std::vector<std::uint32_t> v(k_, 0);
      v[c] = 1;
      for (std::uint32_t i = 0; i < rank_; ++i)
        v[pivot_cols_[i]] = (p_ - R_[i][c] % p_) % p_;
      kernel_basis.push_back(F.encode(v));
    }
    kernel_.push_back(0);
    for (felt b : kernel_basis) {
      std::size_t n = kernel_.size();
      for (std::uint32_t c = 1; c < p_; ++c) {
        felt cb = F.mul(F.from_int(c), b);
        for (std::size_t i = 0; i < n; ++i) kernel_.push_back(F.add(kernel_[i], cb));
      }
    }
    std::sort(kernel_.begin(), kernel_.end());
  }

  const std::vector<felt>& kernel() const { return kernel_; }

  // smallest-encoding handling is not needed: returns any particular solution,
  // callers add every kernel element
  bool solve(felt w, felt& x0) const {
    auto d = F_->decode(w);
    std::vector<std::uint32_t> td(k_, 0);
    for (std::uint32_t i = 0; i < k_; ++i) {
      std::uint64_t acc = 0;
      for (std::uint32_t j = 0; j < k_; ++j) acc += std::uint64_t(R_[i][k_ + j]) * d[j];
      td[i] = std::uint32_t(acc % p_);
    }
    for (std::uint32_t i = rank_; i < k_; ++i)
      if (td[i] != 0) return false;
    std::vector<std::uint32_t> sol(k_, 0);
    for (std::uint32_t i = 0; i < rank_; ++i) sol[pivot_cols_[i]] = td[i];
    x0 = F_->encode(sol);
    return true;
  }

 private:
  std::uint32_t mod_inv(std::uint32_t a) const {
    for (std::uint32_t b = 1; b < p_; ++b)
      if (a * b % p_ == 1) return b;
    throw std::logic_error("no inverse mod p");
  }

  const Field* F_;
  std::uint32_t k_, p_;
  std::vector<std::vector<std::uint32_t>> R_;
  std::vector<std::uint32_t> pivot_cols_;
  std::uint32_t rank_ = 0;
  std::vector<felt> kernel_;
};

}  // namespace detail

class Curve {
 public:
  explicit Curve(std::uint32_t q) : F_(make_field(q)) {
    par_.q = q;
    detail::factor_prime_power(q, par_.p, par_.e);
    par_.a = q + 1;
    par_.b = q * q;
    par_.m = q * q - q + 1;
    std::uint64_t Q = q;
    auto ipow = [](std::uint64_t base, int n) {
      std::uint64_t r = 1;
      for (int i = 0; i < n; ++i) r *= base;
      return r;
    };
    par_.point_count = ipow(Q, 8) - ipow(Q, 6) + ipow(Q, 5) + 1;
    par_.subfield_count = ipow(Q, 3) + 1;
  }

  const CurveParams& params() const { return par_; }
  const Field& field() const { return F_; }

  static constexpr Point infinity_point() { return Point{1, 0, 0, 0}; }

  // canonical representative: affine points scaled to T=1, points with T=0
  // scaled so the first nonzero coordinate is 1
  Point canonical(Point P) const {
    if (P.x == 0 && P.y == 0 && P.z == 0 && P.t == 0)
      throw std::invalid_argument("zero vector is not a projective point");
    felt s;
    if (P.t != 0) s = F_.inv(P.t);
    else if (P.x != 0) s = F_.inv(P.x);
    else if (P.y != 0) s = F_.inv(P.y);
    else s = F_.inv(P.z);
    return Point{F_.mul(P.x, s), F_.mul(P.y, s), F_.mul(P.z, s), F_.mul(P.t, s)};
  }

  std::vector<FormTerm> form_zy() const {
    const std::uint32_t q = par_.q;
    return {{{0, 0, par_.m, q - 1}, 1},
            {{0, par_.b, 0, 0}, F_.neg(1)},
            {{0, 1, 0, par_.b - 1}, 1}};
  }

  std::vector<FormTerm> form_yx() const {
    const std::uint32_t q = par_.q;
    return {{{0, par_.a, 0, 0}, 1},
            {{q, 0, 0, 1}, F_.neg(1)},
            {{1, 0, 0, q}, F_.neg(1)}};
  }

  felt eval_form(const std::vector<FormTerm>& form, const Point& P) const {
    felt acc = 0;
    const std::array<felt, 4> co{P.x, P.y, P.z, P.t};
    for (const auto& tm : form) {
      felt v = tm.c;
      for (int i = 0; i < 4; ++i)
        if (tm.e[i] != 0) v = F_.mul(v, F_.pow(co[i], tm.e[i]));
      acc = F_.add(acc, v);
    }
    return acc;
  }

  // both defining forms vanish; also true on the shared line {Y=0, T=0}
  bool is_on_curve(const Point& P) const {
    return eval_form(form_zy(), P) == 0 && eval_form(form_yx(), P) == 0;
  }

  PointClass classify(const Point& P) const {
    Point c = canonical(P);
    if (!is_on_curve(c)) throw std::invalid_argument("point is not on the curve");
    if (c.t == 0) {
      if (c != infinity_point())
        throw std::invalid_argument("point lies on the shared line {Y=0,T=0}, not on the curve");
      return PointClass::infinity;
    }
    const std::uint32_t m2 = 2 * par_.e;  // GF(q^2) inside GF(q^6)
    if (F_.in_subfield(m2, c.x) && F_.in_subfield(m2, c.y) && F_.in_subfield(m2, c.z))
      return PointClass::subfield;
    return PointClass::generic;
  }

  // all points, canonical order: affine sorted by encoded (x,y,z), infinity last
  const std::vector<Point>& points() const {
    if (!pts_.empty()) return pts_;
    enumerate();
    return pts_;
  }

  std::array<LinForm, 2> tangent_line(const Point& P) const {
    Point c = canonical(P);
    PointClass cls = classify(c);
    if (cls == PointClass::infinity)
      return {LinForm{0, 1, 0, 0}, LinForm{0, 0, 0, 1}};
    if (c.z == 0)
      return {LinForm{1, 0, 0, F_.neg(c.x)}, LinForm{0, 1, 0, F_.neg(c.y)}};
    felt zp = F_.pow(c.z, par_.b - par_.q);  // z^(q^2-q)
    LinForm f1{0, 1, zp, F_.neg(F_.add(c.y, F_.mul(zp, c.z)))};
    LinForm f2{F_.neg(1), F_.pow(c.y, par_.q), 0,
               F_.sub(c.x, F_.pow(c.y, par_.a))};
    return {f1, f2};
  }

  BranchJet branch_jet(const Point& P, std::uint32_t trunc) const {
    if (trunc < 2) throw std::invalid_argument("jet truncation must be >= 2");
    Point c = canonical(P);
    PointClass cls = classify(c);
    if (cls == PointClass::infinity)
      throw std::invalid_argument("no affine jet at (1:0:0:0); use the X=1 chart branch");
    const std::uint32_t e = par_.e, m = par_.m;
    Series x, y, z;
    if (c.z == 0) {
      // parameter is z itself; y and x are attracting fixed points
      z = Series::monomial(F_, trunc, 1);
      Series zm = Series::monomial(F_, trunc, m);
      y = fixpoint(Series::constant(F_, trunc, c.y),
                   [&](const Series& s) { return pow_pk(s, 2 * e) - zm; });
      Series yq1 = pow_pk(y, e) * y;
      x = fixpoint(Series::constant(F_, trunc, c.x),
                   [&](const Series& s) { return yq1 - pow_pk(s, e); });
    } else {
      // parameter is y - y0; z by damped Newton steps, one order per step
      y = Series::constant(F_, trunc, c.y) + Series::monomial(F_, trunc, 1);
      Series v = pow_pk(y, 2 * e) - y;
      felt cinv = F_.inv(F_.pow(c.z, m - 1));  // m = 1 in the prime field
      z = fixpoint(Series::constant(F_, trunc, c.z),
                   [&](const Series& s) { return s - scale(pow(s, m) - v, cinv); });
      Series yq1 = pow_pk(y, e) * y;
      x = fixpoint(Series::constant(F_, trunc, c.x),
                   [&](const Series& s) { return yq1 - pow_pk(s, e); });
    }
    if (!(pow(z, m) == pow_pk(y, 2 * e) - y) || !(pow_pk(x, e) + x == pow_pk(y, e) * y))
      throw std::logic_error("jet does not satisfy the curve equations");
    return BranchJet{x, y, z};
  }

  // branch through (1:0:0:0), chart X=1, parameter s: z = s, y = s^m (1+u),
  // t = s^(q^3+1) w with units 1+u, w solved by fixed-point iteration
  const InfinityBranch& infinity_branch(std::uint32_t trunc) const {
    if (inf_.z.trunc >= trunc) return inf_;
    const std::uint32_t e = par_.e, q = par_.q, m = par_.m;
    const std::uint64_t dt = std::uint64_t(q) * q * q + 1;
    const std::uint64_t shift_w = (dt) * (q - 1);
    const std::uint64_t shift_u = std::uint64_t(q) * (par_.b - 1) * m;
    auto w_from_u = [&](const Series& u) {
      Series one = Series::constant(F_, trunc, 1);
      Series opu = one + u;
      Series base = pow_pk(opu, e) * opu;  // (1+u)^(q+1)
      Series sw = Series::monomial(F_, trunc, std::uint32_t(std::min<std::uint64_t>(shift_w, trunc)));
      return fixpoint(base, [&](const Series& w) { return base - sw * pow_pk(w, e); });
    };
    Series u(F_, trunc);
    Series one = Series::constant(F_, trunc, 1);
    Series su = Series::monomial(F_, trunc, std::uint32_t(std::min<std::uint64_t>(shift_u, trunc)));
    u = fixpoint(u, [&](const Series& uu) {
      Series w = w_from_u(uu);
      Series wq1 = pow(w, q - 1);
      Series g = wq1 - one + su * ((one + uu) * pow(w, std::uint64_t(par_.b) - 1)) - pow_pk(uu, 2 * e);
      return uu + g;
    });
    Series w = w_from_u(u);
    InfinityBranch br;
    br.z = Series::monomial(F_, trunc, 1);
    br.y = Series::monomial(F_, trunc, m) * (one + u);
    br.t = Series::monomial(F_, trunc, std::uint32_t(std::min<std::uint64_t>(dt, trunc))) * w;
    // hard check: both chart equations vanish to the truncation
    Series lhs1 = pow(br.z, m) * pow(br.t, q - 1) - pow_pk(br.y, 2 * e) + br.y * pow(br.t, std::uint64_t(par_.b) - 1);
    Series lhs2 = pow_pk(br.y, e) * br.y - br.t - pow_pk(br.t, e);
    if (!(lhs1 == Series(F_, trunc)) || !(lhs2 == Series(F_, trunc)))
      throw std::logic_error("infinity branch does not satisfy the chart equations");
    inf_ = std::move(br);
    return inf_;
  }

  // vanishing order of a homogeneous form along the branch at P, saturating at cap
  OrdResult vanishing_order(const std::vector<FormTerm>& form, const Point& P,
                            std::uint32_t cap) const {
    Point c = canonical(P);
    Series s = (classify(c) == PointClass::infinity)
                   ? substitute_infinity(form, cap)
                   : substitute_affine(form, c, cap);
    std::uint32_t o = s.ord();
    return OrdResult{o, o >= cap};
  }

  OrdResult line_multiplicity(const std::array<LinForm, 2>& L, const Point& P,
                              std::uint32_t cap) const {
    OrdResult r0 = vanishing_order(to_form(L[0]), P, cap);
    OrdResult r1 = vanishing_order(to_form(L[1]), P, cap);
    return (r0.value < r1.value) ? r0 : r1;
  }

  // order of a form along an already-computed affine jet
  OrdResult jet_order(const std::vector<FormTerm>& form, const BranchJet& jet) const {
    Series one = Series::constant(F_, jet.x.trunc, 1);
    Series s = substitute(form, {jet.x, jet.y, jet.z, one}, jet.x.trunc);
    std::uint32_t o = s.ord();
    return OrdResult{o, o >= jet.x.trunc};
  }

  std::uint32_t default_cap() const { return par_.m + 2; }
  std::uint32_t infinity_cap() const { return par_.q * par_.q * par_.q + 3; }

  static std::vector<FormTerm> to_form(const LinForm& f) {
    std::vector<FormTerm> out;
    for (std::uint32_t i = 0; i < 4; ++i) {
      if (f[i] == 0) continue;
      FormTerm t;
      t.e = {0, 0, 0, 0};
      t.e[i] = 1;
      t.c = f[i];
      out.push_back(t);
    }
    return out;
  }

 private:
  static Field make_field(std::uint32_t q) {
    std::uint32_t p, e;
    detail::factor_prime_power(q, p, e);
    return Field(p, 6 * e);
  }

  template <typename Step>
  static Series fixpoint(Series s, Step step) {
    for (std::uint32_t i = 0; i + 2 < 2 * s.trunc + 8; ++i) {
      Series next = step(s);
      if (next == s) return s;
      s = std::move(next);
    }
    throw std::logic_error("series iteration did not stabilize");
  }

  Series substitute_affine(const std::vector<FormTerm>& form, const Point& c,
                           std::uint32_t cap) const {
    BranchJet jet = branch_jet(c, cap);
    Series one = Series::constant(F_, cap, 1);
    return substitute(form, {jet.x, jet.y, jet.z, one}, cap);
  }

  Series substitute_infinity(const std::vector<FormTerm>& form, std::uint32_t cap) const {
    const InfinityBranch& br = infinity_branch(cap);
    Series one = Series::constant(F_, cap, 1);
    Series y = br.y, z = br.z, t = br.t;
    y.trunc = z.trunc = t.trunc = cap;
    y.c.resize(cap);
    z.c.resize(cap);
    t.c.resize(cap);
    return substitute(form, {one, y, z, t}, cap);
  }

  Series substitute(const std::vector<FormTerm>& form, std::array<Series, 4> co,
                    std::uint32_t cap) const {
    Series acc(F_, cap);
    for (const auto& tm : form) {
      Series v = Series::constant(F_, cap, tm.c);
      for (int i = 0; i < 4; ++i)
        if (tm.e[i] != 0) v = v * pow(co[i], tm.e[i]);
      acc = acc + v;
    }
    return acc;
  }

  void enumerate() const {
    const std::uint32_t q = par_.q, e = par_.e, m = par_.m;
    const std::uint64_t Q = F_.size();
    detail::AdditiveSolver solver(F_, e);
    if (solver.kernel().size() != q)
      throw std::logic_error("kernel of x -> x^q + x has the wrong size");
    // sorted (z^m, z) pairs for root extraction
    std::vector<std::pair<felt, felt>> mth(Q - 1);
    for (std::uint64_t i = 1; i < Q; ++i) mth[i - 1] = {F_.pow(i, m), i};
    std::sort(mth.begin(), mth.end());
    std::vector<Point> pts;
    pts.reserve(par_.point_count);
    for (std::uint64_t y = 0; y < Q; ++y) {
      felt x0;
      if (!solver.solve(F_.pow(y, q + 1), x0)) continue;
      felt v = F_.sub(F_.frobenius(y, 2 * e), y);
      if (v == 0) {
        for (felt kx : solver.kernel())
          pts.push_back(Point{F_.add(x0, kx), y, 0, 1});
        continue;
      }
      auto lo = std::lower_bound(mth.begin(), mth.end(), std::pair<felt, felt>{v, 0});
      for (auto it = lo; it != mth.end() && it->first == v; ++it)
        for (felt kx : solver.kernel())
          pts.push_back(Point{F_.add(x0, kx), y, it->second, 1});
    }
    std::sort(pts.begin(), pts.end());
    pts.push_back(infinity_point());
    if (pts.size() != par_.point_count)
      throw std::logic_error("point enumeration does not match the expected count");
    pts_ = std::move(pts);
  }

  CurveParams par_;
  Field F_;
  mutable std::vector<Point> pts_;
  mutable InfinityBranch inf_;
};

}  // namespace gk
