#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gk/geometry.hpp"

namespace gk {

enum class CodeFamily { functional, one_point, punctured, three_point };

inline const char* family_name(CodeFamily f) {
  switch (f) {
    case CodeFamily::functional: return "functional";
    case CodeFamily::one_point: return "one_point";
    case CodeFamily::punctured: return "punctured";
    case CodeFamily::three_point: return "three_point";
  }
  return "functional";
}

struct CodeFamilyTag {
  CodeFamily family = CodeFamily::functional;
  std::uint32_t m = 0;                 // one_point and punctured families
  std::vector<Point> punctured_out;    // punctured family: removed points
  std::array<std::uint32_t, 3> a{};    // three_point multiplicities
  std::array<Point, 3> base_points{};  // three_point support
};

// dimension = curve_rank - deg(E) + h1(E): the rank the evaluation must hit
// when the point set is large enough to cut out the whole curve
struct DimensionLog {
  std::uint64_t curve_rank = 0;  // degree-d forms evaluated at every point
  bool curve_rank_exact = true;  // false when sampled without saturating
  std::uint64_t scheme_degree = 0;
  std::uint64_t h1 = 0;
  std::uint64_t predicted = 0;
  std::uint64_t computed = 0;
  bool match = false;
};

struct EvaluationCode {
  const Curve* curve = nullptr;
  std::uint32_t d = 0;
  ZeroDimScheme E;
  std::vector<std::uint32_t> B;  // indices into curve->points(), ascending

  // all degree-d forms vanishing on E (coefficients in monomial_basis(d)
  // order); gen_rows selects the independent evaluation rows
  std::vector<std::vector<felt>> basis;
  std::vector<std::size_t> gen_rows;
  std::size_t k = 0;
  std::optional<Mat> gen;  // dense k x n, materialized for small lengths

  DimensionLog dim_log;
  CodeFamilyTag tag;
  std::array<std::optional<Line>, 3> lines;  // three_point connecting lines
  std::array<std::uint64_t, 3> line_sections{};
  std::vector<std::string> warnings;

  std::uint64_t length() const { return B.size(); }

  // generator column at position j: the k selected forms evaluated at the
  // point scaled so its first nonzero coordinate is 1
  std::vector<felt> column(std::size_t j) const {
    if (j >= B.size()) throw std::invalid_argument("column index out of range");
    const Field& F = curve->field();
    const std::vector<Monomial> mons = monomial_basis(d);
    const Point P = normalize_point(F, curve->points()[B[j]]);
    const std::array<felt, 4> c = point_coords(P);
    std::vector<felt> col(k);
    for (std::size_t i = 0; i < k; ++i)
      col[i] = detail::eval_coeffs_at(F, basis[gen_rows[i]], mons, d, c);
    return col;
  }
};

namespace detail {

inline std::vector<felt> form_eval_row(const Field& F,
                                       const std::vector<std::vector<felt>>& forms,
                                       const std::vector<Monomial>& mons,
                                       std::uint32_t d, const Point& P) {
  const std::array<felt, 4> c = point_coords(normalize_point(F, P));
  std::vector<felt> col(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i)
    col[i] = eval_coeffs_at(F, forms[i], mons, d, c);
  return col;
}

}  // namespace detail

// rank of all degree-d monomials evaluated at every curve point, streamed
// with early exit once the space saturates; `sample_limit` = 0 scans all
inline std::pair<std::uint64_t, bool> curve_evaluation_rank(
    const Curve& C, std::uint32_t d, std::uint64_t sample_limit = 0) {
  const Field& F = C.field();
  const std::vector<Monomial> mons = monomial_basis(d);
  RankAccumulator acc(F, mons.size());
  std::uint64_t seen = 0;
  for (const Point& P : C.points()) {
    acc.absorb(eval_monomials_at(F, mons, d, P));
    ++seen;
    if (acc.rank() == mons.size()) return {acc.rank(), true};
    if (sample_limit != 0 && seen >= sample_limit) return {acc.rank(), false};
  }
  return {acc.rank(), true};
}

// Core build over point indices. Evaluation columns are streamed into an
// elimination state over the basis-coefficient space; the state's pivots
// name the independent generator rows, so no full matrix is ever required.
// Dense generator matrices are kept only below `dense_limit` columns.
inline EvaluationCode build_code_at(const Curve& C, std::vector<std::uint32_t> B,
                                    std::uint32_t d, const ZeroDimScheme& E,
                                    CodeFamilyTag tag = {},
                                    std::uint64_t dense_limit = 100000) {
  const Field& F = C.field();
  const std::vector<Point>& pts = C.points();
  if (B.empty()) throw std::invalid_argument("evaluation set is empty");
  {
    std::set<std::uint32_t> seen;
    for (std::uint32_t i : B) {
      if (i >= pts.size()) throw std::invalid_argument("point index out of range");
      if (!seen.insert(i).second)
        throw std::invalid_argument("duplicate evaluation point");
    }
  }
  {
    std::set<Point> support;
    for (const SchemePoint& sp : E.pts) support.insert(sp.P);
    for (std::uint32_t i : B)
      if (support.count(C.canonical(pts[i])))
        throw std::invalid_argument(
            "evaluation points overlap the vanishing scheme");
  }

  EvaluationCode code;
  code.curve = &C;
  code.d = d;
  code.E = E;
  code.B = std::move(B);
  code.tag = std::move(tag);

  const CurveParams& par = C.params();
  const std::uint64_t c_surface =
      static_cast<std::uint64_t>(par.q) * par.q * par.q +
      static_cast<std::uint64_t>(par.q) * par.q;
  if (code.B.size() <= static_cast<std::uint64_t>(d) * c_surface)
    code.warnings.push_back(
        "evaluation set no larger than d*(q^3+q^2); the hypothesis "
        "|B| > d*c - deg(E) may fail");

  const std::vector<Monomial> mons = monomial_basis(d);
  {
    Mat cond = condition_matrix(C, E, d);
    code.basis = nullspace(cond);
  }

  // columns live in the basis-coefficient space; pivots of their span are
  // the first independent set of generator rows
  RankAccumulator cols(F, code.basis.size());
  if (!code.basis.empty()) {
    for (std::uint32_t i : code.B) {
      cols.absorb(detail::form_eval_row(F, code.basis, mons, d, pts[i]));
      if (cols.rank() == code.basis.size()) break;
    }
  }
  code.k = cols.rank();
  code.gen_rows = cols.pivots();

  if (code.B.size() <= dense_limit) {
    Mat G(F, code.k, code.B.size());
    for (std::size_t j = 0; j < code.B.size(); ++j) {
      const std::vector<felt> col = code.column(j);
      for (std::size_t i = 0; i < code.k; ++i) G.at(i, j) = col[i];
    }
    code.gen = std::move(G);
  }

  {
    const std::uint64_t limit =
        pts.size() > dense_limit ? 4 * dense_limit : 0;
    const auto [cr, exact] = curve_evaluation_rank(C, d, limit);
    code.dim_log.curve_rank = cr;
    code.dim_log.curve_rank_exact = exact;
    code.dim_log.scheme_degree = E.degree();
    code.dim_log.h1 = cohomology_defect(C, E, d).h1;
    code.dim_log.predicted = cr - E.degree() + code.dim_log.h1;
    code.dim_log.computed = code.k;
    code.dim_log.match = code.dim_log.predicted == code.dim_log.computed;
  }
  return code;
}

inline EvaluationCode build_code(const Curve& C, const std::vector<Point>& B,
                                 std::uint32_t d, const ZeroDimScheme& E,
                                 CodeFamilyTag tag = {}) {
  const std::vector<Point>& pts = C.points();
  std::map<Point, std::uint32_t> index;
  for (std::size_t i = 0; i < pts.size(); ++i)
    index[pts[i]] = static_cast<std::uint32_t>(i);
  std::vector<std::uint32_t> idx;
  idx.reserve(B.size());
  for (const Point& P : B) {
    const auto it = index.find(C.canonical(P));
    if (it == index.end())
      throw std::invalid_argument("evaluation point not on the curve");
    idx.push_back(it->second);
  }
  return build_code_at(C, std::move(idx), d, E, std::move(tag));
}

inline std::size_t code_dimension(const EvaluationCode& code) { return code.k; }

// ---------------------------------------------------------------------------
// One-point family: evaluate degree-m forms at every point except the one
// at infinity; the dual is the orthogonal complement of the rows.

inline EvaluationCode one_point_dual(const Curve& C, std::uint32_t m) {
  const std::vector<Point>& pts = C.points();
  std::vector<std::uint32_t> B;
  B.reserve(pts.size() - 1);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i] != Curve::infinity_point()) B.push_back(static_cast<std::uint32_t>(i));
  CodeFamilyTag tag;
  tag.family = CodeFamily::one_point;
  tag.m = m;
  EvaluationCode code = build_code_at(C, std::move(B), m, ZeroDimScheme{}, tag);
  if (m < 2)
    code.warnings.push_back("degree below 2: outside the supported distance regime");
  return code;
}

// ---------------------------------------------------------------------------
// Punctured family

struct SurvivalReport {
  std::uint64_t secant_total = 0;
  std::uint64_t secants_surviving = 0;  // keep at least m+2 points
  std::map<std::size_t, std::uint64_t> retained_hist;
  std::uint64_t s1_size = 0;  // removed points rational over the subfield
  std::uint64_t s2_size = 0;
  std::int64_t hypothesis_bound = 0;     // (q^2-q+1-m)(q+1)(q^5-q)
  std::uint64_t secant_family_size = 0;  // (q+1)(q^5-q^3)
  bool hypothesis_holds = false;         // s2_size < hypothesis_bound
};

struct PuncturedBuild {
  EvaluationCode code;
  SurvivalReport report;
};

inline PuncturedBuild punctured_dual(const Curve& C, const std::vector<Point>& S,
                                     std::uint32_t m) {
  const std::vector<Point>& pts = C.points();
  std::map<Point, std::uint32_t> index;
  for (std::size_t i = 0; i < pts.size(); ++i)
    index[pts[i]] = static_cast<std::uint32_t>(i);

  std::set<std::uint32_t> removed;
  for (const Point& P : S) {
    const Point cp = C.canonical(P);
    const auto it = index.find(cp);
    if (it == index.end() || cp == Curve::infinity_point())
      throw std::invalid_argument(
          "puncture set not contained in the code's evaluation points");
    removed.insert(it->second);
  }

  std::vector<std::uint32_t> B;
  B.reserve(pts.size() - 1 - removed.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] == Curve::infinity_point()) continue;
    if (removed.count(static_cast<std::uint32_t>(i))) continue;
    B.push_back(static_cast<std::uint32_t>(i));
  }

  CodeFamilyTag tag;
  tag.family = CodeFamily::punctured;
  tag.m = m;
  for (std::uint32_t i : removed) tag.punctured_out.push_back(pts[i]);
  EvaluationCode code = build_code_at(C, std::move(B), m, ZeroDimScheme{}, tag);

  const CurveParams& par = C.params();
  if (m < par.q + 1 || m > 2 * (par.q + 1))
    code.warnings.push_back("degree outside the q+1..2(q+1) puncturing regime");

  SurvivalReport rep;
  const SecantTable table = secant_classification(C);
  rep.secant_total = table.max_secants.size();
  for (const SecantRecord& r : table.max_secants) {
    std::size_t kept = 0;
    for (std::uint32_t i : r.point_idx)
      if (!removed.count(i)) ++kept;
    ++rep.retained_hist[kept];
    if (kept >= static_cast<std::size_t>(m) + 2) ++rep.secants_surviving;
  }
  for (std::uint32_t i : removed) {
    if (C.classify(pts[i]) == PointClass::generic)
      ++rep.s2_size;
    else
      ++rep.s1_size;
  }
  const std::int64_t q = par.q;
  const std::int64_t q5 = q * q * q * q * q;
  rep.hypothesis_bound =
      (static_cast<std::int64_t>(par.m) - static_cast<std::int64_t>(m)) *
      (q + 1) * (q5 - q);
  rep.secant_family_size = static_cast<std::uint64_t>((q + 1) * (q5 - q * q * q));
  rep.hypothesis_holds =
      static_cast<std::int64_t>(rep.s2_size) < rep.hypothesis_bound;
  return PuncturedBuild{std::move(code), std::move(rep)};
}

// ---------------------------------------------------------------------------
// Three-point family

struct ThreePointCheck {
  bool ok = false;
  std::string violated;  // empty when ok
};

inline ThreePointCheck three_point_check(const Curve& C, const Point& P1,
                                         const Point& P2, const Point& P3,
                                         std::uint32_t d,
                                         const std::array<std::uint32_t, 3>& a) {
  const Field& F = C.field();
  const CurveParams& par = C.params();
  std::array<Point, 3> P;
  try {
    P = {C.canonical(P1), C.canonical(P2), C.canonical(P3)};
    for (const Point& x : P) C.classify(x);
  } catch (const std::invalid_argument&) {
    return {false, "base points must lie on the curve"};
  }
  for (const Point& x : P)
    if (x.t != 1) return {false, "base points must be affine"};
  if (P[0] == P[1] || P[0] == P[2] || P[1] == P[2])
    return {false, "base points must be distinct"};
  if (!plane_through(F, P[0], P[1], P[2]))
    return {false, "base points must span a plane"};
  for (std::size_t i = 0; i < 3; ++i) {
    const Line L = line_through(F, P[(i + 1) % 3], P[(i + 2) % 3]);
    if (L.direction == Point{0, 0, 1, 0})
      return {false, "a connecting line is parallel to the z axis"};
  }
  if (d < 5) return {false, "degree must be at least 5"};
  if (d > par.q - 1) return {false, "degree must be at most q-1"};
  for (std::uint32_t ai : a)
    if (ai < 1 || ai > d) return {false, "multiplicities must lie in 1..d"};
  if (a[0] + a[1] + a[2] > 3 * d - 5)
    return {false, "multiplicities must sum to at most 3d-5"};
  int at_degree = 0;
  for (std::uint32_t ai : a)
    if (ai == d) ++at_degree;
  if (at_degree > 1)
    return {false, "multiplicity equal to the degree is allowed at most once"};
  return {true, ""};
}

inline EvaluationCode three_point_code(const Curve& C, const Point& P1,
                                       const Point& P2, const Point& P3,
                                       std::uint32_t d,
                                       const std::array<std::uint32_t, 3>& a) {
  const ThreePointCheck chk = three_point_check(C, P1, P2, P3, d, a);
  if (!chk.ok) throw std::invalid_argument(chk.violated);

  const Field& F = C.field();
  const std::vector<Point>& pts = C.points();
  const std::array<Point, 3> P = {C.canonical(P1), C.canonical(P2),
                                  C.canonical(P3)};
  const ZeroDimScheme E =
      make_scheme(C, {{P[0], a[0]}, {P[1], a[1]}, {P[2], a[2]}});

  std::vector<std::uint32_t> B;
  B.reserve(pts.size() - 3);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i] != P[0] && pts[i] != P[1] && pts[i] != P[2])
      B.push_back(static_cast<std::uint32_t>(i));

  CodeFamilyTag tag;
  tag.family = CodeFamily::three_point;
  tag.a = a;
  tag.base_points = P;
  EvaluationCode code = build_code_at(C, std::move(B), d, E, tag);
  for (std::size_t i = 0; i < 3; ++i) {
    const Line L = line_through(F, P[(i + 1) % 3], P[(i + 2) % 3]);
    code.lines[i] = L;
    code.line_sections[i] = line_section(F, L, pts).size();
  }
  return code;
}

// ---------------------------------------------------------------------------
// Dual words with prescribed support

struct DualSupportSpace {
  std::size_t dimension = 0;
  // sparse dual words: (column index, value) pairs, support inside S
  std::vector<std::vector<std::pair<std::uint32_t, felt>>> basis;
  std::uint64_t h1_with = 0;     // defect of E together with the S points
  std::uint64_t h1_without = 0;  // defect of E alone
  bool identity_holds = false;   // dimension == h1_with - h1_without
};

inline DualSupportSpace dual_support_space(const EvaluationCode& code,
                                           const std::vector<std::uint32_t>& S) {
  const Curve& C = *code.curve;
  const Field& F = C.field();
  DualSupportSpace out;
  {
    std::set<std::uint32_t> seen;
    for (std::uint32_t j : S) {
      if (j >= code.B.size())
        throw std::invalid_argument("support index out of range");
      if (!seen.insert(j).second)
        throw std::invalid_argument("duplicate support index");
    }
  }
  if (S.empty()) {
    out.h1_without = cohomology_defect(C, code.E, code.d).h1;
    out.h1_with = out.h1_without;
    out.identity_holds = true;
    return out;
  }

  Mat M(F, code.k, S.size());
  for (std::size_t j = 0; j < S.size(); ++j) {
    const std::vector<felt> col = code.column(S[j]);
    for (std::size_t i = 0; i < code.k; ++i) M.at(i, j) = col[i];
  }
  const std::size_t r = rank_of(M);
  out.dimension = S.size() - r;
  for (const std::vector<felt>& w : nullspace(std::move(M))) {
    std::vector<std::pair<std::uint32_t, felt>> word;
    for (std::size_t j = 0; j < S.size(); ++j)
      if (w[j] != 0) word.emplace_back(S[j], w[j]);
    out.basis.push_back(std::move(word));
  }

  std::vector<std::pair<Point, std::uint32_t>> entries;
  for (const SchemePoint& sp : code.E.pts) entries.push_back({sp.P, sp.mult});
  for (std::uint32_t j : S) entries.push_back({C.points()[code.B[j]], 1});
  out.h1_with = cohomology_defect(C, make_scheme(C, entries), code.d).h1;
  out.h1_without = cohomology_defect(C, code.E, code.d).h1;
  out.identity_holds = out.dimension == out.h1_with - out.h1_without;
  return out;
}

// ---------------------------------------------------------------------------
// Export: generator matrix with a tag comment, plus a JSON sidecar

inline void export_code(const EvaluationCode& code, const std::string& path) {
  const Curve& C = *code.curve;
  const Field& F = C.field();
  const CurveParams& par = C.params();

  nlohmann::json tag;
  tag["family"] = family_name(code.tag.family);
  tag["q"] = par.q;
  tag["d"] = code.d;
  tag["m"] = code.tag.m;
  tag["a"] = code.tag.a;
  tag["point_count"] = code.B.size();
  tag["dimension"] = code.k;
  {
    nlohmann::json supp = nlohmann::json::array();
    for (const SchemePoint& sp : code.E.pts)
      supp.push_back({{"point", {sp.P.x, sp.P.y, sp.P.z, sp.P.t}},
                      {"multiplicity", sp.mult}});
    tag["E_support"] = std::move(supp);
  }
  {
    nlohmann::json secs = nlohmann::json::array();
    for (std::size_t i = 0; i < 3; ++i)
      if (code.lines[i]) secs.push_back(code.line_sections[i]);
    tag["L_sections"] = std::move(secs);
  }

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << "# " << tag.dump() << '\n';
    out << code.k << ' ' << code.B.size() << ' ' << F.header() << '\n';
    const std::vector<Monomial> mons = monomial_basis(code.d);
    // rows streamed so the full matrix is never materialized
    std::vector<std::array<felt, 4>> reps;
    if (code.gen) {
      for (std::size_t i = 0; i < code.k; ++i) {
        for (std::size_t j = 0; j < code.B.size(); ++j) {
          if (j) out << ' ';
          out << code.gen->at(i, j);
        }
        out << '\n';
      }
    } else {
      reps.reserve(code.B.size());
      for (std::uint32_t idx : code.B)
        reps.push_back(point_coords(normalize_point(F, C.points()[idx])));
      for (std::size_t i = 0; i < code.k; ++i) {
        const std::vector<felt>& coeffs = code.basis[code.gen_rows[i]];
        for (std::size_t j = 0; j < reps.size(); ++j) {
          if (j) out << ' ';
          out << detail::eval_coeffs_at(F, coeffs, mons, code.d, reps[j]);
        }
        out << '\n';
      }
    }
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);

  detail::commit_file(path + ".json", tag.dump(2) + "\n");
}

struct RawCodeFile {
  std::string comment;  // tag line without the leading "# "
  std::size_t rows = 0, cols = 0;
  std::string field_header;
  std::vector<felt> entries;  // row-major
};

inline RawCodeFile read_code_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  RawCodeFile raw;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw std::runtime_error("missing tag comment: " + path);
  raw.comment = line.substr(2);
  if (!std::getline(in, line)) throw std::runtime_error("missing header: " + path);
  {
    std::istringstream head(line);
    head >> raw.rows >> raw.cols;
    std::getline(head >> std::ws, raw.field_header);
    if (!head && raw.field_header.empty())
      throw std::runtime_error("malformed header: " + path);
  }
  raw.entries.reserve(raw.rows * raw.cols);
  felt v = 0;
  while (in >> v) raw.entries.push_back(v);
  if (raw.entries.size() != raw.rows * raw.cols)
    throw std::runtime_error("truncated matrix: " + path);
  return raw;
}

}  // namespace gk
