#pragma once

// Projective geometry on PG(3, q^6) for zero-dimensional schemes supported on
// the curve: canonical lines, plane conics and cubics, condition matrices and
// cohomology defects, special-position witness searches, secant tables, and
// section-size audits.
//
// All searches are deterministic: candidates are kept in canonically sorted
// containers and reported witnesses are the lexicographically smallest among
// the best found.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gk/curve.hpp"
#include "gk/linalg.hpp"
#include "gk/series.hpp"

namespace gk {

inline std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::array<felt, 4> point_coords(const Point& P) {
  return {P.x, P.y, P.z, P.t};
}

inline Point point_from_coords(const std::array<felt, 4>& c) {
  return Point{c[0], c[1], c[2], c[3]};
}

// Unique projective representative: first nonzero coordinate scaled to 1.
inline Point normalize_point(const Field& F, const Point& P) {
  std::array<felt, 4> c = point_coords(P);
  for (std::size_t i = 0; i < 4; ++i) {
    if (c[i] == 0) continue;
    const felt s = F.inv(c[i]);
    for (std::size_t j = i; j < 4; ++j) c[j] = F.mul(c[j], s);
    return point_from_coords(c);
  }
  throw std::invalid_argument("zero vector is not a projective point");
}

inline LinForm normalize_form(const Field& F, LinForm f) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (f[i] == 0) continue;
    const felt s = F.inv(f[i]);
    for (std::size_t j = i; j < 4; ++j) f[j] = F.mul(f[j], s);
    return f;
  }
  throw std::invalid_argument("zero linear form");
}

inline felt eval_lin(const Field& F, const LinForm& f, const Point& P) {
  const std::array<felt, 4> c = point_coords(P);
  felt s = 0;
  for (std::size_t i = 0; i < 4; ++i)
    if (f[i] != 0 && c[i] != 0) s = F.add(s, F.mul(f[i], c[i]));
  return s;
}

// ---------------------------------------------------------------------------
// Lines

struct Line {
  // Canonical representation: the RREF of the two defining forms (leading
  // coefficients 1, pivot columns minimal), so equal lines compare equal.
  std::array<LinForm, 2> forms{};
  // Representative of line ∩ {T = 0}; for a line inside {T = 0} this is the
  // canonical first point of the line.
  Point direction{};

  auto operator<=>(const Line& o) const { return forms <=> o.forms; }
  bool operator==(const Line& o) const { return forms == o.forms; }
};

inline Line make_line(const Field& F, const LinForm& f1, const LinForm& f2) {
  Mat M(F, 2, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    M.at(0, j) = f1[j];
    M.at(1, j) = f2[j];
  }
  if (rref_in_place(M).rank != 2)
    throw std::invalid_argument("line needs two independent forms");
  Line L;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 4; ++j) L.forms[i][j] = M.at(i, j);
  Mat D(F, 3, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    D.at(0, j) = L.forms[0][j];
    D.at(1, j) = L.forms[1][j];
  }
  D.at(2, 3) = 1;
  const std::vector<std::vector<felt>> ns = nullspace(D);
  L.direction = normalize_point(
      F, Point{ns[0][0], ns[0][1], ns[0][2], ns[0][3]});
  return L;
}

inline Line line_through(const Field& F, const Point& P, const Point& Q) {
  if (normalize_point(F, P) == normalize_point(F, Q))
    throw std::invalid_argument("line through equal points");
  Mat M(F, 2, 4);
  const std::array<felt, 4> cp = point_coords(P), cq = point_coords(Q);
  for (std::size_t j = 0; j < 4; ++j) {
    M.at(0, j) = cp[j];
    M.at(1, j) = cq[j];
  }
  const std::vector<std::vector<felt>> ns = nullspace(M);
  return make_line(F, LinForm{ns[0][0], ns[0][1], ns[0][2], ns[0][3]},
                   LinForm{ns[1][0], ns[1][1], ns[1][2], ns[1][3]});
}

inline bool on_line(const Field& F, const Line& L, const Point& P) {
  return eval_lin(F, L.forms[0], P) == 0 && eval_lin(F, L.forms[1], P) == 0;
}

inline bool lines_disjoint(const Field& F, const Line& A, const Line& B) {
  Mat M(F, 4, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    M.at(0, j) = A.forms[0][j];
    M.at(1, j) = A.forms[1][j];
    M.at(2, j) = B.forms[0][j];
    M.at(3, j) = B.forms[1][j];
  }
  return rref_in_place(M).rank == 4;
}

inline std::vector<std::uint32_t> line_section(const Field& F, const Line& L,
                                               const std::vector<Point>& pts) {
  std::vector<std::uint32_t> idx;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (on_line(F, L, pts[i])) idx.push_back(static_cast<std::uint32_t>(i));
  return idx;
}

// ---------------------------------------------------------------------------
// Planes

inline std::optional<LinForm> plane_through(const Field& F, const Point& P,
                                            const Point& Q, const Point& R) {
  Mat M(F, 3, 4);
  const std::array<std::array<felt, 4>, 3> c = {point_coords(P),
                                                point_coords(Q),
                                                point_coords(R)};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) M.at(i, j) = c[i][j];
  const std::vector<std::vector<felt>> ns = nullspace(M);
  if (ns.size() != 1) return std::nullopt;
  return normalize_form(F, LinForm{ns[0][0], ns[0][1], ns[0][2], ns[0][3]});
}

// The unique plane containing two distinct coplanar lines, if any.
inline std::optional<LinForm> plane_of_lines(const Field& F, const Line& A,
                                             const Line& B) {
  Mat M(F, 4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    M.at(i, 0) = A.forms[0][i];
    M.at(i, 1) = A.forms[1][i];
    M.at(i, 2) = B.forms[0][i];
    M.at(i, 3) = B.forms[1][i];
  }
  const std::vector<std::vector<felt>> ns = nullspace(M);
  if (ns.size() != 1) return std::nullopt;
  LinForm f{};
  bool nonzero = false;
  for (std::size_t i = 0; i < 4; ++i) {
    f[i] = F.add(F.mul(ns[0][0], A.forms[0][i]), F.mul(ns[0][1], A.forms[1][i]));
    nonzero = nonzero || f[i] != 0;
  }
  if (!nonzero) return std::nullopt;
  return normalize_form(F, f);
}

// ---------------------------------------------------------------------------
// Monomials and evaluation

using Monomial = std::array<std::uint32_t, 4>;

// All degree-d monomials in X,Y,Z,T, lexicographic with X > Y > Z > T.
inline std::vector<Monomial> monomial_basis(std::uint32_t d) {
  std::vector<Monomial> v;
  for (std::uint32_t ex = d + 1; ex-- > 0;)
    for (std::uint32_t ey = d - ex + 1; ey-- > 0;)
      for (std::uint32_t ez = d - ex - ey + 1; ez-- > 0;)
        v.push_back({ex, ey, ez, d - ex - ey - ez});
  return v;
}

inline std::vector<felt> eval_monomials_at(const Field& F,
                                           const std::vector<Monomial>& mons,
                                           std::uint32_t d, const Point& P) {
  const std::array<felt, 4> c = point_coords(P);
  std::array<std::vector<felt>, 4> pw;
  for (std::size_t v = 0; v < 4; ++v) {
    pw[v].assign(d + 1, 1);
    for (std::uint32_t i = 1; i <= d; ++i) pw[v][i] = F.mul(pw[v][i - 1], c[v]);
  }
  std::vector<felt> row(mons.size());
  for (std::size_t i = 0; i < mons.size(); ++i) {
    const Monomial& e = mons[i];
    row[i] = F.mul(F.mul(pw[0][e[0]], pw[1][e[1]]),
                   F.mul(pw[2][e[2]], pw[3][e[3]]));
  }
  return row;
}

namespace detail {

inline std::vector<Series> series_powers(const Series& s, std::uint32_t d) {
  std::vector<Series> pw;
  pw.push_back(Series::constant(*s.F, s.trunc, 1));
  for (std::uint32_t i = 1; i <= d; ++i) pw.push_back(pw.back() * s);
  return pw;
}

// Monomial restrictions to a branch: affine chart T = 1.
inline std::vector<Series> monomial_series(const std::vector<Monomial>& mons,
                                           std::uint32_t d,
                                           const BranchJet& jet) {
  const std::vector<Series> px = series_powers(jet.x, d);
  const std::vector<Series> py = series_powers(jet.y, d);
  const std::vector<Series> pz = series_powers(jet.z, d);
  std::vector<Series> out;
  out.reserve(mons.size());
  for (const Monomial& e : mons)
    out.push_back(px[e[0]] * py[e[1]] * pz[e[2]]);
  return out;
}

// Monomial restrictions to the branch at (1:0:0:0): chart X = 1.
inline std::vector<Series> monomial_series(const std::vector<Monomial>& mons,
                                           std::uint32_t d,
                                           const InfinityBranch& br) {
  const std::vector<Series> py = series_powers(br.y, d);
  const std::vector<Series> pz = series_powers(br.z, d);
  const std::vector<Series> pt = series_powers(br.t, d);
  std::vector<Series> out;
  out.reserve(mons.size());
  for (const Monomial& e : mons)
    out.push_back(py[e[1]] * pz[e[2]] * pt[e[3]]);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Zero-dimensional schemes on the curve

struct SchemePoint {
  Point P{};
  std::uint32_t mult = 1;
  std::optional<BranchJet> jet;  // present for affine points with mult > 1
};

struct ZeroDimScheme {
  std::vector<SchemePoint> pts;

  std::uint64_t degree() const {
    std::uint64_t d = 0;
    for (const SchemePoint& p : pts) d += p.mult;
    return d;
  }
};

// Canonicalizes, validates membership, sorts, and computes the jets needed
// for multiplicity > 1 (truncation mult + jet_slack ≥ mult + 1).
inline ZeroDimScheme make_scheme(
    const Curve& C, const std::vector<std::pair<Point, std::uint32_t>>& entries,
    std::uint32_t jet_slack = 2) {
  if (jet_slack < 1) throw std::invalid_argument("jet_slack must be >= 1");
  ZeroDimScheme Z;
  for (const auto& [P, mult] : entries) {
    if (mult < 1) throw std::invalid_argument("multiplicity must be >= 1");
    SchemePoint sp;
    sp.P = C.canonical(P);
    C.classify(sp.P);
    sp.mult = mult;
    if (mult > 1 && sp.P != Curve::infinity_point())
      sp.jet = C.branch_jet(sp.P, mult + jet_slack);
    Z.pts.push_back(std::move(sp));
  }
  std::sort(Z.pts.begin(), Z.pts.end(),
            [](const SchemePoint& a, const SchemePoint& b) { return a.P < b.P; });
  for (std::size_t i = 1; i < Z.pts.size(); ++i)
    if (Z.pts[i].P == Z.pts[i - 1].P)
      throw std::invalid_argument("duplicate scheme point");
  return Z;
}

// Rows: per point, the coefficients of t^0..t^(mult-1) of every degree-d
// monomial along the branch (a single evaluation row when mult = 1).
inline Mat condition_matrix(const Curve& C, const ZeroDimScheme& Z,
                            std::uint32_t d) {
  const Field& F = C.field();
  const std::vector<Monomial> mons = monomial_basis(d);
  Mat M(F, Z.degree(), mons.size());
  std::size_t r = 0;
  for (const SchemePoint& sp : Z.pts) {
    if (sp.mult == 1) {
      const std::vector<felt> row = eval_monomials_at(F, mons, d, sp.P);
      for (std::size_t j = 0; j < mons.size(); ++j) M.at(r, j) = row[j];
      ++r;
      continue;
    }
    std::vector<Series> restr;
    if (sp.P == Curve::infinity_point()) {
      restr = detail::monomial_series(mons, d, C.infinity_branch(sp.mult));
    } else {
      if (!sp.jet) throw std::invalid_argument("scheme point missing jet");
      if (sp.jet->x.trunc < sp.mult)
        throw std::invalid_argument("jet truncation below multiplicity");
      restr = detail::monomial_series(mons, d, *sp.jet);
    }
    for (std::uint32_t k = 0; k < sp.mult; ++k) {
      for (std::size_t j = 0; j < mons.size(); ++j) M.at(r, j) = restr[j].c[k];
      ++r;
    }
  }
  return M;
}

struct CohomologyDefect {
  std::uint64_t h0 = 0;
  std::uint64_t h1 = 0;
  std::size_t rank = 0;
};

inline CohomologyDefect cohomology_defect(const Curve& C,
                                          const ZeroDimScheme& Z,
                                          std::uint32_t d) {
  Mat M = condition_matrix(C, Z, d);
  const std::size_t r = rref_in_place(M).rank;
  CohomologyDefect res;
  res.rank = r;
  res.h0 = binom(d + 3, 3) - r;
  res.h1 = Z.degree() - r;
  return res;
}

inline bool scheme_spans_space(const Curve& C, const ZeroDimScheme& Z) {
  Mat M = condition_matrix(C, Z, 1);
  return rref_in_place(M).rank == 4;
}

// Residual of Z by the degree-k' form: each multiplicity drops by the
// vanishing order of the form along the branch.
inline ZeroDimScheme residual_scheme(const Curve& C, const ZeroDimScheme& Z,
                                     const std::vector<FormTerm>& form) {
  ZeroDimScheme R;
  for (const SchemePoint& sp : Z.pts) {
    const OrdResult o = C.vanishing_order(form, sp.P, sp.mult + 1);
    if (o.saturated && o.value <= sp.mult)
      throw std::runtime_error(
          "vanishing order saturated below multiplicity; increase jet budget");
    if (o.value >= sp.mult) continue;
    SchemePoint keep = sp;
    keep.mult = sp.mult - static_cast<std::uint32_t>(o.value);
    R.pts.push_back(std::move(keep));
  }
  return R;
}

// ---------------------------------------------------------------------------
// Contact orders of scheme points with linear systems

// deg of the largest subscheme of the mult-truncated branch lying inside the
// common zero locus of the given forms.
inline std::uint32_t scheme_contact(
    const Curve& C, const SchemePoint& sp,
    const std::vector<const std::vector<FormTerm>*>& forms) {
  if (sp.mult == 1) {
    for (const auto* f : forms)
      if (C.eval_form(*f, sp.P) != 0) return 0;
    return 1;
  }
  std::uint64_t best = sp.mult;
  for (const auto* f : forms) {
    OrdResult o;
    if (sp.jet)
      o = C.jet_order(*f, *sp.jet);
    else
      o = C.vanishing_order(*f, sp.P, sp.mult + 1);
    if (o.value < best) best = o.value;
    if (best == 0) break;
  }
  return static_cast<std::uint32_t>(best);
}

struct LineWitness {
  Line line{};
  std::uint64_t capacity = 0;
  std::vector<std::uint32_t> contact;  // per scheme point, in scheme order
};

inline LineWitness line_contact(const Curve& C, const ZeroDimScheme& Z,
                                const Line& L) {
  LineWitness w;
  w.line = L;
  const std::vector<FormTerm> f0 = Curve::to_form(L.forms[0]);
  const std::vector<FormTerm> f1 = Curve::to_form(L.forms[1]);
  for (const SchemePoint& sp : Z.pts) {
    const std::uint32_t c = scheme_contact(C, sp, {&f0, &f1});
    w.contact.push_back(c);
    w.capacity += c;
  }
  return w;
}

// Every line that can meet Z in degree ≥ 2: lines spanned by support pairs
// plus tangent lines at points of multiplicity ≥ 2.
inline std::vector<Line> candidate_lines(const Curve& C,
                                         const ZeroDimScheme& Z) {
  const Field& F = C.field();
  std::set<Line> s;
  for (std::size_t i = 0; i < Z.pts.size(); ++i)
    for (std::size_t j = i + 1; j < Z.pts.size(); ++j)
      s.insert(line_through(F, Z.pts[i].P, Z.pts[j].P));
  for (const SchemePoint& sp : Z.pts)
    if (sp.mult >= 2) {
      const std::array<LinForm, 2> t = C.tangent_line(sp.P);
      s.insert(make_line(F, t[0], t[1]));
    }
  return std::vector<Line>(s.begin(), s.end());
}

inline std::vector<LineWitness> line_contacts(const Curve& C,
                                              const ZeroDimScheme& Z) {
  std::vector<LineWitness> out;
  for (const Line& L : candidate_lines(C, Z)) out.push_back(line_contact(C, Z, L));
  return out;
}

// ---------------------------------------------------------------------------
// Conics

struct Conic {
  LinForm plane{};             // canonical (leading coefficient 1)
  std::array<felt, 10> quad{}; // canonical modulo plane multiples, leading 1
  bool reduced = false;

  auto operator<=>(const Conic& o) const {
    if (auto c = plane <=> o.plane; c != 0) return c;
    return quad <=> o.quad;
  }
  bool operator==(const Conic& o) const {
    return plane == o.plane && quad == o.quad;
  }
};

namespace detail {

inline felt eval_coeffs_at(const Field& F, const std::vector<felt>& coeffs,
                           const std::vector<Monomial>& mons, std::uint32_t d,
                           const std::array<felt, 4>& c) {
  std::array<std::vector<felt>, 4> pw;
  for (std::size_t v = 0; v < 4; ++v) {
    pw[v].assign(d + 1, 1);
    for (std::uint32_t i = 1; i <= d; ++i) pw[v][i] = F.mul(pw[v][i - 1], c[v]);
  }
  felt s = 0;
  for (std::size_t i = 0; i < mons.size(); ++i) {
    if (coeffs[i] == 0) continue;
    const Monomial& e = mons[i];
    s = F.add(s, F.mul(coeffs[i], F.mul(F.mul(pw[0][e[0]], pw[1][e[1]]),
                                        F.mul(pw[2][e[2]], pw[3][e[3]]))));
  }
  return s;
}

}  // namespace detail

// "Reduced" = the restriction to the plane is not a scalar multiple of the
// square of a linear form. In characteristic 2 squares are exactly the forms
// with no cross terms; in odd characteristic squares are the rank-1 forms.
inline bool conic_is_reduced(const Field& F, const LinForm& plane,
                             const std::array<felt, 10>& quad) {
  Mat P(F, 1, 4);
  for (std::size_t j = 0; j < 4; ++j) P.at(0, j) = plane[j];
  const std::vector<std::vector<felt>> basis = nullspace(P);
  const std::vector<Monomial> mons = monomial_basis(2);
  const std::vector<felt> coeffs(quad.begin(), quad.end());
  std::array<std::array<felt, 4>, 3> b;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) b[i][j] = basis[i][j];
  std::array<felt, 3> diag;
  for (std::size_t i = 0; i < 3; ++i)
    diag[i] = detail::eval_coeffs_at(F, coeffs, mons, 2, b[i]);
  std::array<felt, 3> cross;  // (uv, uw, vw) polar coefficients
  std::size_t ci = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      std::array<felt, 4> sum;
      for (std::size_t k = 0; k < 4; ++k) sum[k] = F.add(b[i][k], b[j][k]);
      const felt qs = detail::eval_coeffs_at(F, coeffs, mons, 2, sum);
      cross[ci++] = F.sub(F.sub(qs, diag[i]), diag[j]);
    }
  if (F.p() == 2)
    return cross[0] != 0 || cross[1] != 0 || cross[2] != 0;
  const felt two = F.from_int(2);
  Mat A(F, 3, 3);
  A.at(0, 0) = F.mul(two, diag[0]);
  A.at(1, 1) = F.mul(two, diag[1]);
  A.at(2, 2) = F.mul(two, diag[2]);
  A.at(0, 1) = A.at(1, 0) = cross[0];
  A.at(0, 2) = A.at(2, 0) = cross[1];
  A.at(1, 2) = A.at(2, 1) = cross[2];
  return rref_in_place(A).rank >= 2;
}

// ---------------------------------------------------------------------------
// Plane-curve witness search (conics and plane cubics)

struct PlaneCurveWitness {
  LinForm plane{};
  std::vector<felt> coeffs;  // in monomial_basis(curve_deg) order, canonical
  std::uint64_t capacity = 0;
};

struct PlaneSearchResult {
  std::optional<PlaneCurveWitness> best;          // maximal capacity found
  std::optional<PlaneCurveWitness> best_reduced;  // curve_deg 2 only
  bool budget_exhausted = false;
  std::uint64_t systems_solved = 0;
};

// Candidate planes: all planes spanned by three support points, tangent-line
// planes through a second support point, planes of two coplanar tangent
// lines, and osculating planes at points of multiplicity ≥ 3.
inline std::vector<LinForm> candidate_planes(const Curve& C,
                                             const ZeroDimScheme& Z) {
  const Field& F = C.field();
  std::set<LinForm> s;
  const std::size_t n = Z.pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (auto pl = plane_through(F, Z.pts[i].P, Z.pts[j].P, Z.pts[k].P))
          s.insert(*pl);
  std::vector<std::pair<std::size_t, Line>> tangents;
  for (std::size_t i = 0; i < n; ++i)
    if (Z.pts[i].mult >= 2) {
      const std::array<LinForm, 2> t = C.tangent_line(Z.pts[i].P);
      tangents.emplace_back(i, make_line(F, t[0], t[1]));
    }
  for (const auto& [i, T] : tangents) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const felt a1 = eval_lin(F, T.forms[0], Z.pts[j].P);
      const felt a2 = eval_lin(F, T.forms[1], Z.pts[j].P);
      if (a1 == 0 && a2 == 0) continue;
      LinForm pl{};
      bool nonzero = false;
      for (std::size_t k = 0; k < 4; ++k) {
        pl[k] = F.sub(F.mul(a2, T.forms[0][k]), F.mul(a1, T.forms[1][k]));
        nonzero = nonzero || pl[k] != 0;
      }
      if (nonzero) s.insert(normalize_form(F, pl));
    }
  }
  for (std::size_t u = 0; u < tangents.size(); ++u)
    for (std::size_t v = u + 1; v < tangents.size(); ++v)
      if (auto pl = plane_of_lines(F, tangents[u].second, tangents[v].second))
        s.insert(*pl);
  for (std::size_t i = 0; i < n; ++i) {
    if (Z.pts[i].mult < 3) continue;
    Mat M(F, 3, 4);
    if (Z.pts[i].P == Curve::infinity_point()) {
      const InfinityBranch& br = C.infinity_branch(3);
      for (std::uint32_t r = 0; r < 3; ++r) {
        M.at(r, 0) = r == 0 ? 1 : 0;
        M.at(r, 1) = br.y.c[r];
        M.at(r, 2) = br.z.c[r];
        M.at(r, 3) = br.t.c[r];
      }
    } else {
      const BranchJet& jet = *Z.pts[i].jet;
      for (std::uint32_t r = 0; r < 3; ++r) {
        M.at(r, 0) = jet.x.c[r];
        M.at(r, 1) = jet.y.c[r];
        M.at(r, 2) = jet.z.c[r];
        M.at(r, 3) = r == 0 ? 1 : 0;
      }
    }
    const std::vector<std::vector<felt>> ns = nullspace(M);
    if (ns.size() == 1)
      s.insert(normalize_form(F, LinForm{ns[0][0], ns[0][1], ns[0][2], ns[0][3]}));
  }
  return std::vector<LinForm>(s.begin(), s.end());
}

namespace detail {

struct PlaneCurveSearcher {
  const Curve& C;
  const Field& F;
  const ZeroDimScheme& Z;
  std::uint32_t deg;
  std::uint64_t threshold;
  std::uint64_t budget;
  PlaneSearchResult res;

  std::vector<Monomial> mons;
  std::map<Monomial, std::size_t> mon_index;
  std::size_t ncols;
  std::size_t base_conditions;  // dim of the on-plane system minus 1

  // per-plane state
  LinForm plane{};
  std::vector<std::size_t> on_idx;
  std::vector<std::uint32_t> contact;
  std::vector<std::vector<std::vector<felt>>> blocks;  // point -> depth -> row
  Mat multiples_rref;
  std::vector<std::size_t> multiples_pivots;
  std::set<std::vector<felt>> seen;

  PlaneCurveSearcher(const Curve& c, const ZeroDimScheme& z, std::uint32_t d,
                     std::uint64_t thr, std::uint64_t bud)
      : C(c), F(c.field()), Z(z), deg(d), threshold(thr), budget(bud),
        multiples_rref(F, 0, 0) {
    mons = monomial_basis(deg);
    ncols = mons.size();
    for (std::size_t i = 0; i < ncols; ++i) mon_index[mons[i]] = i;
    base_conditions = binom(deg + 2, 2) - 1;
  }

  void run(const std::vector<LinForm>& planes) {
    for (const LinForm& pl : planes) {
      if (res.budget_exhausted) return;
      search_plane(pl);
    }
  }

  void search_plane(const LinForm& pl) {
    plane = pl;
    const std::vector<FormTerm> plf = Curve::to_form(pl);
    on_idx.clear();
    contact.clear();
    std::uint64_t cap = 0;
    for (std::size_t i = 0; i < Z.pts.size(); ++i) {
      const std::uint32_t c = scheme_contact(C, Z.pts[i], {&plf});
      if (c == 0) continue;
      on_idx.push_back(i);
      contact.push_back(c);
      cap += c;
    }
    if (cap < threshold) return;

    blocks.assign(on_idx.size(), {});
    for (std::size_t u = 0; u < on_idx.size(); ++u) {
      const SchemePoint& sp = Z.pts[on_idx[u]];
      if (sp.mult == 1) {
        blocks[u].push_back(eval_monomials_at(F, mons, deg, sp.P));
        continue;
      }
      std::vector<Series> restr;
      if (sp.P == Curve::infinity_point())
        restr = monomial_series(mons, deg, C.infinity_branch(sp.mult));
      else
        restr = monomial_series(mons, deg, *sp.jet);
      for (std::uint32_t k = 0; k < contact[u]; ++k) {
        std::vector<felt> row(ncols);
        for (std::size_t j = 0; j < ncols; ++j) row[j] = restr[j].c[k];
        blocks[u].push_back(std::move(row));
      }
    }

    // plane · (degree-1 monomials): the trivial solutions to quotient out
    const std::vector<Monomial> lower = monomial_basis(deg - 1);
    Mat mult(F, lower.size(), ncols);
    for (std::size_t i = 0; i < lower.size(); ++i)
      for (std::size_t c = 0; c < 4; ++c) {
        if (plane[c] == 0) continue;
        Monomial m2 = lower[i];
        ++m2[c];
        const std::size_t col = mon_index.at(m2);
        mult.at(i, col) = F.add(mult.at(i, col), plane[c]);
      }
    multiples_rref = mult;
    multiples_pivots = rref_in_place(multiples_rref).pivot_cols;
    seen.clear();

    const std::uint64_t want =
        std::min<std::uint64_t>(base_conditions, cap);
    std::vector<std::uint32_t> used(on_idx.size(), 0);
    assign(0, want, used, mult);
  }

  void assign(std::size_t u, std::uint64_t rem, std::vector<std::uint32_t>& used,
              const Mat& mult) {
    if (res.budget_exhausted) return;
    if (rem == 0) {
      solve(used, mult);
      return;
    }
    if (u == on_idx.size()) return;
    std::uint64_t tail = 0;
    for (std::size_t v = u; v < on_idx.size(); ++v) tail += contact[v];
    if (tail < rem) return;
    const std::uint32_t hi =
        static_cast<std::uint32_t>(std::min<std::uint64_t>(contact[u], rem));
    for (std::uint32_t k = 0; k <= hi; ++k) {
      used[u] = k;
      assign(u + 1, rem - k, used, mult);
      if (res.budget_exhausted) break;
    }
    used[u] = 0;
  }

  void solve(std::vector<std::uint32_t> used, const Mat& mult) {
    while (true) {
      if (++res.systems_solved > budget) {
        res.budget_exhausted = true;
        return;
      }
      std::vector<const std::vector<felt>*> rows;
      for (std::size_t u = 0; u < on_idx.size(); ++u)
        for (std::uint32_t k = 0; k < used[u]; ++k) rows.push_back(&blocks[u][k]);
      Mat R(F, rows.size(), ncols);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < ncols; ++j) R.at(i, j) = (*rows[i])[j];
      const std::vector<std::vector<felt>> ns = nullspace(R);
      RankAccumulator acc(F, ncols);
      for (std::size_t i = 0; i < mult.rows; ++i)
        acc.absorb(std::vector<felt>(mult.row(i), mult.row(i) + ncols));
      std::vector<const std::vector<felt>*> fresh;
      for (const std::vector<felt>& v : ns)
        if (acc.absorb(v)) fresh.push_back(&v);
      if (fresh.empty()) return;
      if (fresh.size() == 1) {
        candidate(*fresh[0]);
        return;
      }
      // Underdetermined: add the next available condition; when none is
      // left, report every residual generator.
      bool extended = false;
      for (std::size_t u = 0; u < on_idx.size() && !extended; ++u)
        if (used[u] < contact[u]) {
          ++used[u];
          extended = true;
        }
      if (!extended) {
        for (const auto* v : fresh) candidate(*v);
        return;
      }
    }
  }

  void candidate(const std::vector<felt>& raw) {
    std::vector<felt> v = raw;
    for (std::size_t i = 0; i < multiples_pivots.size(); ++i) {
      const felt f = v[multiples_pivots[i]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < ncols; ++j)
        v[j] = F.sub(v[j], F.mul(f, multiples_rref.at(i, j)));
    }
    std::size_t lead = ncols;
    for (std::size_t j = 0; j < ncols; ++j)
      if (v[j] != 0) {
        lead = j;
        break;
      }
    if (lead == ncols) return;  // a plane multiple after all
    const felt s = F.inv(v[lead]);
    for (std::size_t j = lead; j < ncols; ++j) v[j] = F.mul(v[j], s);
    if (!seen.insert(v).second) return;

    std::vector<FormTerm> ft;
    for (std::size_t j = 0; j < ncols; ++j)
      if (v[j] != 0) ft.push_back(FormTerm{mons[j], v[j]});
    const std::vector<FormTerm> plf = Curve::to_form(plane);
    std::uint64_t capacity = 0;
    for (std::size_t u = 0; u < on_idx.size(); ++u) {
      const std::uint32_t c =
          scheme_contact(C, Z.pts[on_idx[u]], {&plf, &ft});
      capacity += c;
    }
    PlaneCurveWitness w{plane, v, capacity};
    better(res.best, w);
    if (deg == 2) {
      std::array<felt, 10> q{};
      for (std::size_t j = 0; j < 10; ++j) q[j] = v[j];
      if (conic_is_reduced(F, plane, q)) better(res.best_reduced, w);
    }
  }

  static void better(std::optional<PlaneCurveWitness>& slot,
                     const PlaneCurveWitness& w) {
    if (!slot || w.capacity > slot->capacity ||
        (w.capacity == slot->capacity &&
         std::tie(w.plane, w.coeffs) < std::tie(slot->plane, slot->coeffs)))
      slot = w;
  }
};

}  // namespace detail

inline PlaneSearchResult plane_curve_search(const Curve& C,
                                            const ZeroDimScheme& Z,
                                            const std::vector<LinForm>& planes,
                                            std::uint32_t curve_deg,
                                            std::uint64_t threshold,
                                            std::uint64_t budget = 200000) {
  if (curve_deg < 2 || curve_deg > 3)
    throw std::invalid_argument("plane curve degree must be 2 or 3");
  detail::PlaneCurveSearcher s(C, Z, curve_deg, threshold, budget);
  s.run(planes);
  return std::move(s.res);
}

struct ConicWitness {
  Conic conic{};
  std::uint64_t capacity = 0;
};

struct ConicSearchResult {
  std::optional<ConicWitness> best;
  std::optional<ConicWitness> best_reduced;
  bool budget_exhausted = false;
  std::uint64_t systems_solved = 0;
};

inline ConicSearchResult conic_search(const Curve& C, const ZeroDimScheme& Z,
                                      std::uint64_t threshold,
                                      std::uint64_t budget = 200000) {
  const std::vector<LinForm> planes = candidate_planes(C, Z);
  const PlaneSearchResult r =
      plane_curve_search(C, Z, planes, 2, threshold, budget);
  ConicSearchResult out;
  out.budget_exhausted = r.budget_exhausted;
  out.systems_solved = r.systems_solved;
  const Field& F = C.field();
  auto wrap = [&](const PlaneCurveWitness& w) {
    Conic c;
    c.plane = w.plane;
    for (std::size_t j = 0; j < 10; ++j) c.quad[j] = w.coeffs[j];
    c.reduced = conic_is_reduced(F, c.plane, c.quad);
    return ConicWitness{c, w.capacity};
  };
  if (r.best) out.best = wrap(*r.best);
  if (r.best_reduced) out.best_reduced = wrap(*r.best_reduced);
  return out;
}

// ---------------------------------------------------------------------------
// Defect classification

struct DisjointPairWitness {
  Line first{}, second{};
  std::uint32_t split = 0;  // degree on `first` is m+1+split
  std::uint64_t capacity_first = 0, capacity_second = 0;
};

struct SpaceCubicSample {
  std::string kind;  // "line+conic" or "three lines"
  std::uint64_t estimated_capacity = 0;
};

struct DefectClassification {
  std::uint32_t m = 0, e = 0;
  std::uint64_t degree = 0;
  std::uint64_t h1 = 0;
  std::size_t span_rank = 0;

  // deg ≤ 3m + r - 3 for the span dimension r ≥ 2 of Z: the three-case list
  // below is an exact criterion (disjoint pairs only when r = 3).
  bool list_applicable = false;
  // m ≥ 3, deg < 3m, spanning: h1 > 0 iff a line meets Z in ≥ m+2 or a conic
  // meets Z in ≥ 2m+2.
  bool dichotomy_applicable = false;
  // deg ≤ 4m+2 and every plane meets Z in ≤ 4m-5: extended five-case list
  // (adds plane cubics and sampled degree-3 space curves).
  bool extended_applicable = false;
  std::string hypothesis_notes;

  std::optional<LineWitness> line;           // maximal line contact
  std::optional<ConicWitness> conic;         // maximal conic contact
  std::optional<ConicWitness> conic_reduced; // maximal reduced-conic contact
  std::optional<DisjointPairWitness> disjoint_pair;
  std::optional<PlaneCurveWitness> plane_cubic;
  std::vector<SpaceCubicSample> space_cubic_samples;  // coverage: sampled
  bool conic_budget_exhausted = false;
  bool cubic_budget_exhausted = false;

  bool witness_found = false;
  char witness_case = 0;  // 'a', 'b', or 'c'
  bool agrees = false;    // (h1 >= e) == witness_found
};

inline DefectClassification classify_defect_cause(const Curve& C,
                                                  const ZeroDimScheme& Z,
                                                  std::uint32_t m,
                                                  std::uint32_t e,
                                                  std::uint64_t budget = 200000,
                                                  bool search_cubics = false) {
  const Field& F = C.field();
  DefectClassification rep;
  rep.m = m;
  rep.e = e;
  rep.degree = Z.degree();
  rep.h1 = cohomology_defect(C, Z, m).h1;
  {
    Mat S = condition_matrix(C, Z, 1);
    rep.span_rank = rref_in_place(S).rank;
  }

  std::ostringstream notes;
  const std::uint64_t r_eff = rep.span_rank >= 1 ? rep.span_rank - 1 : 0;
  rep.list_applicable = m >= 1 && e >= 1 && r_eff >= 2 &&
                        rep.degree <= 3ull * m + r_eff - 3;
  if (!rep.list_applicable)
    notes << "degree above 3m+r-3 for the span dimension r, or span below a "
             "plane; list criterion inapplicable; ";
  rep.dichotomy_applicable = m >= 3 && rep.degree < 3ull * m && rep.span_rank == 4;

  const std::vector<LinForm> planes = candidate_planes(C, Z);
  std::uint64_t max_plane_capacity = 0;
  for (const LinForm& pl : planes) {
    const std::vector<FormTerm> plf = Curve::to_form(pl);
    std::uint64_t cap = 0;
    for (const SchemePoint& sp : Z.pts) cap += scheme_contact(C, sp, {&plf});
    max_plane_capacity = std::max(max_plane_capacity, cap);
  }
  rep.extended_applicable = rep.degree <= 4ull * m + 2 &&
                            (4ull * m >= 5 && max_plane_capacity <= 4ull * m - 5);
  if (rep.degree > 4ull * m + 2)
    notes << "total degree above 4m+2; ";
  else if (!(4ull * m >= 5 && max_plane_capacity <= 4ull * m - 5))
    notes << "plane section " << max_plane_capacity
          << " above 4m-5 (checked over candidate planes); ";

  const std::vector<LineWitness> lines = line_contacts(C, Z);
  for (const LineWitness& lw : lines)
    if (!rep.line || lw.capacity > rep.line->capacity) rep.line = lw;

  if (e >= 2) {
    const std::uint64_t need = static_cast<std::uint64_t>(m) + 2;
    for (std::size_t i = 0; i < lines.size() && !rep.disjoint_pair; ++i) {
      if (lines[i].capacity < need) continue;
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        if (lines[j].capacity < need) continue;
        if (!lines_disjoint(F, lines[i].line, lines[j].line)) continue;
        // f with m+1+f ≤ cap_i and m+1+e-f ≤ cap_j, 1 ≤ f ≤ e-1
        const std::int64_t lo = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(m) + 1 + e -
                   static_cast<std::int64_t>(lines[j].capacity));
        const std::int64_t hi = std::min<std::int64_t>(
            static_cast<std::int64_t>(e) - 1,
            static_cast<std::int64_t>(lines[i].capacity) -
                static_cast<std::int64_t>(m) - 1);
        if (lo > hi) continue;
        rep.disjoint_pair = DisjointPairWitness{
            lines[i].line, lines[j].line, static_cast<std::uint32_t>(lo),
            lines[i].capacity, lines[j].capacity};
        break;
      }
    }
  }

  const std::uint64_t conic_threshold = 2ull * m + 1 + e;
  if (rep.degree >= conic_threshold) {
    const PlaneSearchResult cs =
        plane_curve_search(C, Z, planes, 2, conic_threshold, budget);
    rep.conic_budget_exhausted = cs.budget_exhausted;
    auto wrap = [&](const PlaneCurveWitness& w) {
      Conic c;
      c.plane = w.plane;
      for (std::size_t j = 0; j < 10; ++j) c.quad[j] = w.coeffs[j];
      c.reduced = conic_is_reduced(F, c.plane, c.quad);
      return ConicWitness{c, w.capacity};
    };
    if (cs.best) rep.conic = wrap(*cs.best);
    if (cs.best_reduced) rep.conic_reduced = wrap(*cs.best_reduced);
  }

  if (search_cubics && rep.degree >= 3ull * m) {
    const PlaneSearchResult cu =
        plane_curve_search(C, Z, planes, 3, 3ull * m, budget);
    rep.cubic_budget_exhausted = cu.budget_exhausted;
    if (cu.best) rep.plane_cubic = *cu.best;
  }

  // Sampled degree-3 space-curve report: unions of candidate lines and the
  // best conic; contacts are estimated component-wise.
  {
    std::vector<const LineWitness*> top;
    for (const LineWitness& lw : lines)
      if (lw.capacity >= 2) top.push_back(&lw);
    std::sort(top.begin(), top.end(),
              [](const LineWitness* a, const LineWitness* b) {
                if (a->capacity != b->capacity) return a->capacity > b->capacity;
                return a->line < b->line;
              });
    if (top.size() > 6) top.resize(6);
    auto meet = [&](const Line& A, const Line& B) {
      return !lines_disjoint(F, A, B);
    };
    auto estimate = [&](const std::vector<const std::vector<std::uint32_t>*>& contacts) {
      std::uint64_t cap = 0;
      for (std::size_t i = 0; i < Z.pts.size(); ++i) {
        std::uint32_t best = 0;
        for (const auto* c : contacts) best = std::max(best, (*c)[i]);
        cap += best;
      }
      return cap;
    };
    for (std::size_t i = 0; i < top.size(); ++i)
      for (std::size_t j = i + 1; j < top.size(); ++j)
        for (std::size_t k = j + 1; k < top.size(); ++k) {
          const bool connected = (meet(top[i]->line, top[j]->line) &&
                                  (meet(top[j]->line, top[k]->line) ||
                                   meet(top[i]->line, top[k]->line))) ||
                                 (meet(top[i]->line, top[k]->line) &&
                                  meet(top[j]->line, top[k]->line));
          if (!connected) continue;
          Mat S(F, 6, 4);
          std::size_t r = 0;
          for (const auto* lw : {top[i], top[j], top[k]}) {
            Mat LM(F, 2, 4);
            for (std::size_t c2 = 0; c2 < 4; ++c2) {
              LM.at(0, c2) = lw->line.forms[0][c2];
              LM.at(1, c2) = lw->line.forms[1][c2];
            }
            for (const std::vector<felt>& v : nullspace(LM)) {
              for (std::size_t c2 = 0; c2 < 4; ++c2) S.at(r, c2) = v[c2];
              ++r;
            }
          }
          if (rref_in_place(S).rank != 4) continue;
          rep.space_cubic_samples.push_back(SpaceCubicSample{
              "three lines", estimate({&top[i]->contact, &top[j]->contact,
                                       &top[k]->contact})});
        }
    if (rep.conic && !top.empty()) {
      const std::vector<FormTerm> plf = Curve::to_form(rep.conic->conic.plane);
      std::vector<FormTerm> qf;
      const std::vector<Monomial> mons2 = monomial_basis(2);
      for (std::size_t j = 0; j < 10; ++j)
        if (rep.conic->conic.quad[j] != 0)
          qf.push_back(FormTerm{mons2[j], rep.conic->conic.quad[j]});
      std::vector<std::uint32_t> cc;
      for (const SchemePoint& sp : Z.pts)
        cc.push_back(scheme_contact(C, sp, {&plf, &qf}));
      for (const LineWitness* lw : top) {
        // meet: the line's plane intersection point lies on the conic
        Mat M(F, 3, 4);
        for (std::size_t c2 = 0; c2 < 4; ++c2) {
          M.at(0, c2) = lw->line.forms[0][c2];
          M.at(1, c2) = lw->line.forms[1][c2];
          M.at(2, c2) = rep.conic->conic.plane[c2];
        }
        const std::vector<std::vector<felt>> ns = nullspace(M);
        if (ns.size() != 1) continue;
        const Point ip = normalize_point(
            F, Point{ns[0][0], ns[0][1], ns[0][2], ns[0][3]});
        const std::vector<felt> qc(rep.conic->conic.quad.begin(),
                                   rep.conic->conic.quad.end());
        if (detail::eval_coeffs_at(F, qc, mons2, 2, point_coords(ip)) != 0)
          continue;
        rep.space_cubic_samples.push_back(SpaceCubicSample{
            "line+conic", estimate({&lw->contact, &cc})});
      }
    }
  }

  const std::uint64_t line_threshold = static_cast<std::uint64_t>(m) + 1 + e;
  if (rep.line && rep.line->capacity >= line_threshold) {
    rep.witness_found = true;
    rep.witness_case = 'a';
  } else if (rep.conic_reduced && rep.conic_reduced->capacity >= conic_threshold) {
    rep.witness_found = true;
    rep.witness_case = 'b';
  } else if (rep.disjoint_pair) {
    rep.witness_found = true;
    rep.witness_case = 'c';
  }
  rep.agrees = (rep.h1 >= e) == rep.witness_found;
  rep.hypothesis_notes = notes.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Secant classification

struct SecantRecord {
  Line line{};
  std::vector<std::uint32_t> point_idx;
};

struct SecantTable {
  std::vector<SecantRecord> max_secants;          // order q^2-q+1 exactly
  std::vector<SecantRecord> subfield_pair_lines;  // spanned by subfield pairs
  std::map<std::size_t, std::size_t> order_counts;
  std::uint64_t non_subfield_points = 0;
};

inline SecantTable secant_classification(const Curve& C) {
  const Field& F = C.field();
  const std::vector<Point>& pts = C.points();
  const std::uint32_t m = C.params().m;
  SecantTable tab;

  std::map<std::pair<felt, felt>, std::vector<std::uint32_t>> groups;
  std::vector<std::uint32_t> subfield_idx;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (C.classify(pts[i]) == PointClass::generic)
      groups[{pts[i].x, pts[i].y}].push_back(static_cast<std::uint32_t>(i));
    else
      subfield_idx.push_back(static_cast<std::uint32_t>(i));
  }

  for (const auto& [key, idx] : groups) {
    if (idx.size() != m)
      throw std::runtime_error("secant partition violated: group size " +
                               std::to_string(idx.size()));
    const Line L = make_line(F, LinForm{1, 0, 0, F.neg(key.first)},
                             LinForm{0, 1, 0, F.neg(key.second)});
    if (L.direction != Point{0, 0, 1, 0})
      throw std::runtime_error("maximal secant not parallel to the z-axis");
    for (const std::uint32_t i : idx)
      if (!on_line(F, L, pts[i]))
        throw std::runtime_error("point escapes its secant");
    tab.non_subfield_points += idx.size();
    tab.max_secants.push_back(SecantRecord{L, idx});
  }
  std::sort(tab.max_secants.begin(), tab.max_secants.end(),
            [](const SecantRecord& a, const SecantRecord& b) {
              return a.line < b.line;
            });
  if (tab.non_subfield_points + C.params().subfield_count != pts.size())
    throw std::runtime_error("secant classification lost points");

  std::set<Line> seen;
  for (std::size_t a = 0; a < subfield_idx.size(); ++a)
    for (std::size_t b = a + 1; b < subfield_idx.size(); ++b) {
      const Line L = line_through(F, pts[subfield_idx[a]], pts[subfield_idx[b]]);
      if (!seen.insert(L).second) continue;
      std::vector<std::uint32_t> sec = line_section(F, L, pts);
      if (sec.size() > m)
        throw std::runtime_error("line section exceeds q^2-q+1");
      tab.subfield_pair_lines.push_back(SecantRecord{L, std::move(sec)});
    }
  std::sort(tab.subfield_pair_lines.begin(), tab.subfield_pair_lines.end(),
            [](const SecantRecord& a, const SecantRecord& b) {
              return a.line < b.line;
            });

  for (const SecantRecord& r : tab.max_secants)
    ++tab.order_counts[r.point_idx.size()];
  for (const SecantRecord& r : tab.subfield_pair_lines)
    ++tab.order_counts[r.point_idx.size()];
  return tab;
}

// ---------------------------------------------------------------------------
// Section-size audits

struct PlaneSectionReport {
  std::uint32_t alpha = 0;
  std::uint64_t bound = 0;
  std::size_t max_section = 0;
  std::map<std::size_t, std::uint64_t> section_histogram;  // distinct loci
  std::uint64_t lines_checked = 0;       // alpha 1: distinct 2+-point lines
  std::uint64_t max_secant_count = 0;    // alpha 1: lines attaining the bound
  bool max_sections_z_parallel = true;   // alpha 1
  std::uint64_t samples = 0;             // alpha 2
};

// alpha = 1: exhaustive over all lines spanned by curve-point pairs, counting
// each distinct line once via anchor-relative direction keys. alpha = 2:
// seeded random plane conics through curve-point triples.
inline PlaneSectionReport plane_section_bound_check(const Curve& C,
                                                    std::uint32_t alpha,
                                                    std::uint64_t samples = 0,
                                                    std::uint64_t seed = 0) {
  const Field& F = C.field();
  const std::vector<Point>& pts = C.points();
  const std::size_t n = pts.size();
  const std::uint32_t m = C.params().m;
  PlaneSectionReport rep;
  rep.alpha = alpha;

  if (alpha == 1) {
    rep.bound = m;
    std::map<std::size_t, std::uint64_t> hist;  // line size -> size * count
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keys;
    keys.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::array<felt, 4> P = point_coords(pts[i]);
      std::size_t piv = 0;
      while (P[piv] == 0) ++piv;
      const felt ipiv = F.inv(P[piv]);
      keys.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        std::array<felt, 4> Q = point_coords(pts[j]);
        const felt lam = F.mul(Q[piv], ipiv);
        std::array<felt, 3> red;
        std::size_t w = 0;
        for (std::size_t c = 0; c < 4; ++c) {
          if (c == piv) continue;
          red[w++] = F.sub(Q[c], F.mul(lam, P[c]));
        }
        std::size_t lead = 0;
        while (lead < 3 && red[lead] == 0) ++lead;
        const felt il = F.inv(red[lead]);
        for (std::size_t c = lead; c < 3; ++c) red[c] = F.mul(red[c], il);
        const std::uint64_t key =
            (red[0] << 42) | (red[1] << 21) | red[2];
        keys.emplace_back(key, static_cast<std::uint32_t>(j));
      }
      std::sort(keys.begin(), keys.end());
      std::size_t s = 0;
      while (s < keys.size()) {
        std::size_t t = s;
        while (t < keys.size() && keys[t].first == keys[s].first) ++t;
        const std::size_t section = (t - s) + 1;
        if (section > m)
          throw std::runtime_error(
              "line section exceeds q^2-q+1: points " + std::to_string(i) +
              " and " + std::to_string(keys[s].second));
        if (section == m) {
          const Point& A = pts[i];
          const Point& B = pts[keys[s].second];
          if (!(A.t == 1 && B.t == 1 && A.x == B.x && A.y == B.y))
            rep.max_sections_z_parallel = false;
        }
        rep.max_section = std::max(rep.max_section, section);
        ++hist[section];
        s = t;
      }
    }
    for (const auto& [size, total] : hist) {
      if (total % size != 0)
        throw std::runtime_error("inconsistent line multiplicity count");
      rep.section_histogram[size] = total / size;
      rep.lines_checked += total / size;
    }
    if (auto it = rep.section_histogram.find(m); it != rep.section_histogram.end())
      rep.max_secant_count = it->second;
    return rep;
  }

  if (alpha != 2) throw std::invalid_argument("alpha must be 1 or 2");
  rep.bound = 2ull * m;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  const std::vector<Monomial> mons2 = monomial_basis(2);
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::size_t i, j, k;
    LinForm pl{};
    while (true) {
      i = rng() % n;
      j = rng() % n;
      k = rng() % n;
      if (i == j || i == k || j == k) continue;
      const auto p = plane_through(F, pts[i], pts[j], pts[k]);
      if (!p) continue;
      pl = *p;
      break;
    }
    Mat R(F, 3, 10);
    std::size_t r = 0;
    for (const std::size_t idx : {i, j, k}) {
      const std::vector<felt> row = eval_monomials_at(F, mons2, 2, pts[idx]);
      for (std::size_t c = 0; c < 10; ++c) R.at(r, c) = row[c];
      ++r;
    }
    const std::vector<std::vector<felt>> ns = nullspace(R);
    const std::vector<Monomial> mons1 = monomial_basis(1);
    RankAccumulator acc(F, 10);
    std::map<Monomial, std::size_t> idx2;
    for (std::size_t c = 0; c < mons2.size(); ++c) idx2[mons2[c]] = c;
    for (const Monomial& lm : mons1) {
      std::vector<felt> v(10, 0);
      for (std::size_t c = 0; c < 4; ++c) {
        if (pl[c] == 0) continue;
        Monomial m2 = lm;
        ++m2[c];
        v[idx2.at(m2)] = F.add(v[idx2.at(m2)], pl[c]);
      }
      acc.absorb(std::move(v));
    }
    std::vector<felt> quad(10, 0);
    while (true) {
      for (std::size_t c = 0; c < 10; ++c) quad[c] = 0;
      for (const std::vector<felt>& v : ns) {
        const felt coef = rng() % F.size();
        if (coef == 0) continue;
        for (std::size_t c = 0; c < 10; ++c)
          quad[c] = F.add(quad[c], F.mul(coef, v[c]));
      }
      RankAccumulator probe = acc;
      if (probe.absorb(quad)) break;
    }
    std::size_t count = 0;
    std::size_t witness = 0;
    for (std::size_t p2 = 0; p2 < n; ++p2) {
      if (eval_lin(F, pl, pts[p2]) != 0) continue;
      if (detail::eval_coeffs_at(F, quad, mons2, 2, point_coords(pts[p2])) != 0)
        continue;
      ++count;
      witness = p2;
    }
    if (count > rep.bound)
      throw std::runtime_error("conic section exceeds 2(q^2-q+1): point " +
                               std::to_string(witness));
    rep.max_section = std::max(rep.max_section, count);
    ++rep.section_histogram[count];
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Curve section dimension: stated piecewise value vs computed rank

struct SectionDimension {
  std::uint32_t t = 0;
  std::int64_t formula_value = 0;
  std::size_t computed_rank = 0;
  bool match = false;
};

inline SectionDimension curve_section_dimension(const Curve& C,
                                                std::uint32_t t) {
  const std::uint32_t a = C.params().a;
  const std::uint32_t b = C.params().b;
  auto b3 = [](std::int64_t n) -> std::int64_t {
    return n < 3 ? 0 : static_cast<std::int64_t>(binom(n, 3));
  };
  SectionDimension res;
  res.t = t;
  if (t < a)
    res.formula_value = b3(t + 3);
  else if (t < b)
    res.formula_value = b3(t + 3) - b3(t - a + 3);
  else
    res.formula_value = b3(t + 3) - b3(t - a + 3) + b3(t - b) -
                        (t >= a + b ? b3(t - a - b) : 0);

  const Field& F = C.field();
  const std::vector<Monomial> mons = monomial_basis(t);
  RankAccumulator acc(F, mons.size());
  for (const Point& P : C.points()) {
    acc.absorb(eval_monomials_at(F, mons, t, P));
    if (acc.rank() == mons.size()) break;
  }
  res.computed_rank = acc.rank();
  res.match = res.formula_value >= 0 &&
              static_cast<std::size_t>(res.formula_value) == res.computed_rank;
  return res;
}

// ---------------------------------------------------------------------------
// File exports (atomic: temp + rename)

namespace detail {

inline void commit_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

}  // namespace detail

inline void write_matrix_file(const std::string& path, const Mat& M) {
  std::ostringstream out;
  out << M.rows << ' ' << M.cols << ' ' << M.F->header() << '\n';
  for (std::size_t i = 0; i < M.rows; ++i) {
    for (std::size_t j = 0; j < M.cols; ++j) {
      if (j) out << ' ';
      out << M.at(i, j);
    }
    out << '\n';
  }
  detail::commit_file(path, out.str());
}

inline void write_secant_csv(const std::string& path, const SecantTable& tab) {
  std::ostringstream out;
  out << "line_form1,line_form2,order,point_indices\n";
  auto emit = [&](const SecantRecord& r) {
    for (std::size_t f = 0; f < 2; ++f) {
      for (std::size_t c = 0; c < 4; ++c) {
        if (c) out << ' ';
        out << r.line.forms[f][c];
      }
      out << ',';
    }
    out << r.point_idx.size() << ',';
    for (std::size_t i = 0; i < r.point_idx.size(); ++i) {
      if (i) out << ' ';
      out << r.point_idx[i];
    }
    out << '\n';
  };
  for (const SecantRecord& r : tab.max_secants) emit(r);
  for (const SecantRecord& r : tab.subfield_pair_lines) emit(r);
  detail::commit_file(path, out.str());
}

}  // namespace gk
