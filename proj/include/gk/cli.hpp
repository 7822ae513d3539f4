#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gk/weights.hpp"

namespace gk {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  std::uint32_t q = 2;  // supported: {2, 3, 4, 7}
  std::string subcommand;
  std::string out;          // relative paths resolve under GK_OUT_DIR
  std::uint32_t workers = 1;  // interface knob; kernels are serial
  std::uint64_t seed = 0;
  std::uint64_t budget_subsets = 6'000'000'000ULL;  // exhaustive-scan row ops
  std::uint64_t budget_conics = 200;                // conic samples per survey
  std::uint32_t jet_cap = 0;                        // 0: per-curve default
  std::uint32_t m = 2;
  std::uint32_t d = 6;
  std::array<std::uint32_t, 3> a{6, 3, 3};
  std::string family = "one-point";
  std::string level = "smoke";
  std::string export_kind;
};

inline std::string resolve_out_path(const std::string& out) {
  if (out.empty() || out.front() == '/') return out;
  const char* dir = std::getenv("GK_OUT_DIR");
  if (!dir || !*dir) return out;
  std::string base(dir);
  if (base.back() != '/') base += '/';
  return base + out;
}

// ---------------------------------------------------------------------------
// Verification report

struct ClaimRecord {
  std::string id;
  std::string paper_ref;
  std::string computed;
  std::string expected;
  std::string status;  // match | mismatch | partial | not-applicable
  std::string note;
};

struct VerificationReport {
  int schema_version = kReportSchema;
  std::uint32_t q = 0;
  std::string level;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::vector<ClaimRecord> claims;

  std::size_t count(const std::string& status) const {
    std::size_t n = 0;
    for (const ClaimRecord& c : claims)
      if (c.status == status) ++n;
    return n;
  }
  std::size_t mismatches() const { return count("mismatch"); }
};

inline nlohmann::json report_to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["schema_version"] = rep.schema_version;
  j["environment"] = {{"q", rep.q},
                      {"level", rep.level},
                      {"seed", rep.seed},
                      {"version", rep.version}};
  nlohmann::json arr = nlohmann::json::array();
  for (const ClaimRecord& c : rep.claims) {
    nlohmann::json e = {{"id", c.id},
                        {"paper_ref", c.paper_ref},
                        {"computed", c.computed},
                        {"expected", c.expected},
                        {"status", c.status}};
    if (!c.note.empty()) e["note"] = c.note;
    arr.push_back(std::move(e));
  }
  j["claims"] = std::move(arr);
  j["summary"] = {{"total", rep.claims.size()},
                  {"match", rep.count("match")},
                  {"mismatch", rep.count("mismatch")},
                  {"partial", rep.count("partial")},
                  {"not-applicable", rep.count("not-applicable")}};
  return j;
}

inline void write_report(const std::string& path, const VerificationReport& rep) {
  detail::commit_file(path, report_to_json(rep).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Point and tangent surveys

namespace detail {

inline const char* class_name(PointClass c) {
  switch (c) {
    case PointClass::infinity: return "infinity";
    case PointClass::subfield: return "subfield";
    default: return "generic";
  }
}

inline ClaimRecord claim(std::string id, std::string ref, std::string computed,
                         std::string expected, bool ok, std::string note = "") {
  return ClaimRecord{std::move(id),      std::move(ref),
                     std::move(computed), std::move(expected),
                     ok ? "match" : "mismatch", std::move(note)};
}

}  // namespace detail

inline void write_points_csv(const std::string& path, const Curve& C) {
  std::ostringstream out;
  out << C.field().header() << '\n';
  out << "x,y,z,t\n";
  for (const Point& P : C.points())
    out << P.x << ',' << P.y << ',' << P.z << ',' << P.t << '\n';
  detail::commit_file(path, out.str());
}

// the maximal-secant records alone: one row per classified line
inline void write_max_secant_csv(const std::string& path, const SecantTable& tab) {
  SecantTable trimmed;
  trimmed.max_secants = tab.max_secants;
  write_secant_csv(path, trimmed);
}

struct TangentSurvey {
  std::uint64_t points = 0;
  std::map<std::uint64_t, std::uint64_t> order_histogram;
  std::uint64_t in_stated_set = 0;   // order ∈ {q+1, q²−q+1}
  std::uint64_t special_total = 0;   // subfield and infinity points
  std::uint64_t special_at_m = 0;    // those with order exactly q²−q+1
};

inline std::uint64_t tangent_order_at(const Curve& C, const Point& P,
                                      std::uint32_t jet_cap = 0) {
  const std::uint32_t cap =
      jet_cap ? jet_cap
              : (C.classify(P) == PointClass::infinity ? C.infinity_cap()
                                                       : C.default_cap());
  return C.line_multiplicity(C.tangent_line(P), P, cap).value;
}

inline TangentSurvey tangent_survey(const Curve& C, std::uint32_t jet_cap = 0) {
  const CurveParams& par = C.params();
  TangentSurvey s;
  for (const Point& P : C.points()) {
    const std::uint64_t ord = tangent_order_at(C, P, jet_cap);
    ++s.points;
    ++s.order_histogram[ord];
    if (ord == par.a || ord == par.m) ++s.in_stated_set;
    if (C.classify(P) != PointClass::generic) {
      ++s.special_total;
      if (ord == par.m) ++s.special_at_m;
    }
  }
  return s;
}

inline void write_tangent_csv(const std::string& path, const Curve& C,
                              std::uint32_t jet_cap = 0) {
  const CurveParams& par = C.params();
  std::ostringstream out;
  out << "point,class,order,in_stated_set\n";
  const std::vector<Point>& pts = C.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::uint64_t ord = tangent_order_at(C, pts[i], jet_cap);
    out << i << ',' << detail::class_name(C.classify(pts[i])) << ',' << ord
        << ',' << ((ord == par.a || ord == par.m) ? 1 : 0) << '\n';
  }
  detail::commit_file(path, out.str());
}

inline void write_section_dimension_csv(const std::string& path, const Curve& C,
                                        std::uint32_t t_max) {
  std::ostringstream out;
  out << "t,formula,rank,match\n";
  for (std::uint32_t t = 1; t <= t_max; ++t) {
    const SectionDimension s = curve_section_dimension(C, t);
    out << s.t << ',' << s.formula_value << ',' << s.computed_rank << ','
        << (s.match ? 1 : 0) << '\n';
  }
  detail::commit_file(path, out.str());
}

// ---------------------------------------------------------------------------
// Defect-witness equivalence sampling

struct EquivalenceTrials {
  std::uint64_t attempted = 0;
  std::uint64_t in_hypothesis = 0;  // samples where the exact criterion applies
  std::uint64_t agreements = 0;
  std::uint64_t reduced = 0;
  std::uint64_t reduced_agreements = 0;
  std::uint64_t curvilinear = 0;
  std::uint64_t curvilinear_agreements = 0;
  std::uint64_t defective = 0;  // h1 >= 1 among in-hypothesis samples
  std::vector<std::string> disagreements;
};

namespace detail {

inline std::string scheme_dump(const ZeroDimScheme& Z,
                               const DefectClassification& rep) {
  std::ostringstream out;
  out << "scheme";
  for (const SchemePoint& sp : Z.pts)
    out << " (" << sp.P.x << ' ' << sp.P.y << ' ' << sp.P.z << ' ' << sp.P.t
        << ")^" << sp.mult;
  out << " m=" << rep.m << " h1=" << rep.h1 << " witness="
      << (rep.witness_found ? std::string(1, rep.witness_case) : "none");
  return out.str();
}

}  // namespace detail

inline EquivalenceTrials a2_equivalence_trials(const Curve& C,
                                               const SecantTable& tab,
                                               std::uint64_t target,
                                               std::uint64_t seed) {
  const std::vector<Point>& pts = C.points();
  const std::uint32_t q = C.params().q;
  std::mt19937_64 rng(0xa2a2ULL ^ (seed * 0x9e3779b97f4a7c15ULL + 1));
  EquivalenceTrials out;

  while (out.in_hypothesis < target && out.attempted < 80 * target) {
    const std::uint64_t it = out.attempted++;
    const std::uint32_t m = (q >= 3 && (it & 1)) ? 3u : 2u;
    std::vector<std::pair<Point, std::uint32_t>> ent;
    std::set<Point> used;
    const int kind = static_cast<int>(it % 3);
    if (kind == 0) {
      // secant sections straddling the line threshold m+2, so both sides of
      // the equivalence fire
      const SecantRecord& A = tab.max_secants[rng() % tab.max_secants.size()];
      const SecantRecord& B = tab.max_secants[rng() % tab.max_secants.size()];
      const std::size_t ta =
          std::min<std::size_t>(A.point_idx.size(), m + 1 + rng() % 3);
      for (std::size_t i = 0; i < ta; ++i)
        if (used.insert(pts[A.point_idx[i]]).second)
          ent.push_back({pts[A.point_idx[i]], 1});
      const std::size_t cap = ent.size() + rng() % 4;
      for (int tries = 0; tries < 40 && ent.size() < cap; ++tries) {
        const Point& P = pts[B.point_idx[rng() % B.point_idx.size()]];
        if (used.insert(P).second) ent.push_back({P, 1});
      }
    } else if (kind == 1) {
      // uniform reduced support
      const std::size_t n = 3 + rng() % (3 * m - 1);
      for (int tries = 0; tries < 200 && ent.size() < n; ++tries) {
        const Point& P = pts[rng() % pts.size()];
        if (used.insert(P).second) ent.push_back({P, 1});
      }
    } else {
      // curvilinear: affine points with multiplicities, small total degree
      const std::size_t n = 2 + rng() % 2;
      std::uint32_t degree_left = 3 * m;
      for (int tries = 0; tries < 200 && ent.size() < n; ++tries) {
        const Point& P = pts[rng() % pts.size()];
        if (P == Curve::infinity_point()) continue;
        if (!used.insert(P).second) continue;
        const std::uint32_t mult = std::min<std::uint32_t>(
            1 + rng() % 3, degree_left > ent.size() ? degree_left : 1);
        ent.push_back({P, mult});
        degree_left = degree_left > mult ? degree_left - mult : 1;
      }
    }
    if (ent.size() < 2) continue;

    ZeroDimScheme Z;
    try {
      Z = make_scheme(C, ent);
    } catch (const std::exception&) {
      continue;
    }
    const DefectClassification rep = classify_defect_cause(C, Z, m, 1);
    if (!rep.list_applicable) continue;

    ++out.in_hypothesis;
    bool is_reduced = true;
    for (const SchemePoint& sp : Z.pts)
      if (sp.mult > 1) is_reduced = false;
    if (is_reduced)
      ++out.reduced;
    else
      ++out.curvilinear;
    if (rep.h1 >= 1) ++out.defective;
    if (rep.agrees) {
      ++out.agreements;
      if (is_reduced)
        ++out.reduced_agreements;
      else
        ++out.curvilinear_agreements;
    } else {
      out.disagreements.push_back(detail::scheme_dump(Z, rep));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Code construction from a configuration

inline std::array<Point, 3> default_three_point_base(const Curve& C) {
  const Field& F = C.field();
  std::vector<Point> cand;
  for (const Point& P : C.points())
    if (P.t == 1 && C.classify(P) == PointClass::subfield) cand.push_back(P);
  const Point vertical{0, 0, 1, 0};
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = i + 1; j < cand.size(); ++j)
      for (std::size_t k = j + 1; k < cand.size(); ++k) {
        if (!plane_through(F, cand[i], cand[j], cand[k])) continue;
        if (line_through(F, cand[i], cand[j]).direction == vertical) continue;
        if (line_through(F, cand[i], cand[k]).direction == vertical) continue;
        if (line_through(F, cand[j], cand[k]).direction == vertical) continue;
        return {cand[i], cand[j], cand[k]};
      }
  throw std::runtime_error("no plane-spanning base triple among subfield points");
}

inline EvaluationCode build_from_config(const Curve& C, const RunConfig& cfg) {
  if (cfg.family == "one-point") return one_point_dual(C, cfg.m);
  if (cfg.family == "three-point") {
    const std::array<Point, 3> P = default_three_point_base(C);
    return three_point_code(C, P[0], P[1], P[2], cfg.d, cfg.a);
  }
  throw std::invalid_argument("unknown family: " + cfg.family +
                              " (expected one-point or three-point)");
}

// ---------------------------------------------------------------------------
// Verification suite

namespace detail {

inline std::string u64s(std::uint64_t v) { return std::to_string(v); }

inline std::uint64_t pow_u64(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

inline std::string histogram_string(
    const std::map<std::uint64_t, std::uint64_t>& hist) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, v] : hist) {
    if (!first) out << ", ";
    first = false;
    out << "order " << k << ": " << v;
  }
  return out.str();
}

inline void smoke_claims(VerificationReport& rep, const Curve& C,
                         const SecantTable& tab) {
  const CurveParams& par = C.params();
  const std::vector<Point>& pts = C.points();
  const std::uint64_t q = par.q;

  rep.claims.push_back(claim(
      "point-count", "Theorem u5", u64s(pts.size()), u64s(par.point_count),
      pts.size() == par.point_count));

  std::uint64_t subfield = 0;
  for (const Point& P : pts)
    if (C.classify(P) != PointClass::generic) ++subfield;
  rep.claims.push_back(claim("subfield-count", "Prop:lines", u64s(subfield),
                             u64s(par.subfield_count),
                             subfield == par.subfield_count));

  const std::uint64_t expect_lines = (q + 1) * (pow_u64(q, 5) - pow_u64(q, 3));
  rep.claims.push_back(claim(
      "secant-count", "prop:NumberOfLines", u64s(tab.max_secants.size()),
      u64s(expect_lines), tab.max_secants.size() == expect_lines));

  bool order_ok = true, direction_ok = true;
  const Point vertical{0, 0, 1, 0};
  for (const SecantRecord& r : tab.max_secants) {
    if (r.point_idx.size() != par.m) order_ok = false;
    if (r.line.direction != vertical) direction_ok = false;
  }
  rep.claims.push_back(claim(
      "secant-order", "Prop:lines",
      order_ok ? "every classified line meets the curve in " + u64s(par.m) +
                     " points"
               : "a classified line misses the stated order",
      u64s(par.m) + " points per line", order_ok));
  rep.claims.push_back(claim(
      "secant-direction", "Prop:lines",
      direction_ok ? "every classified line has direction (0:0:1:0)"
                   : "a classified line has another direction",
      "direction (0:0:1:0)", direction_ok));

  std::vector<std::uint8_t> cover(pts.size(), 0);
  for (const SecantRecord& r : tab.max_secants)
    for (std::uint32_t i : r.point_idx) ++cover[i];
  std::uint64_t once = 0, off = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const bool generic = C.classify(pts[i]) == PointClass::generic;
    if (generic && cover[i] == 1) ++once;
    if ((generic && cover[i] != 1) || (!generic && cover[i] != 0)) ++off;
  }
  const std::uint64_t generic_total = pts.size() - par.subfield_count;
  rep.claims.push_back(claim(
      "secant-partition", "partition remark",
      u64s(once) + " of " + u64s(generic_total) +
          " non-subfield points lie on exactly one line" +
          (off ? ", " + u64s(off) + " off-pattern" : ""),
      "each non-subfield point on exactly one line",
      once == generic_total && off == 0));

  std::uint64_t special = 0, special_at_m = 0;
  for (const Point& P : pts)
    if (C.classify(P) != PointClass::generic) {
      ++special;
      if (tangent_order_at(C, P) == par.m) ++special_at_m;
    }
  rep.claims.push_back(claim(
      "tangent-special-points", "tangent proposition",
      u64s(special_at_m) + " of " + u64s(special) +
          " subfield and infinity points at order " + u64s(par.m),
      "order " + u64s(par.m) + " at every non-generic point",
      special == special_at_m));
}

inline std::string designed_string(const DesignedDistance& dd) {
  std::ostringstream out;
  out << "case " << dd.case_id << ": ";
  if (dd.value)
    out << "d = " << *dd.value;
  else if (dd.lower_bound)
    out << "d >= " << *dd.lower_bound;
  else
    out << dd.label;
  return out.str();
}

inline std::string certificate_string(const DistanceCertificate& cert) {
  std::ostringstream out;
  out << "lower " << cert.lower_bound << " (" << bound_tag_name(cert.lower_tag)
      << ")";
  if (cert.upper_bound)
    out << ", witness weight " << *cert.upper_bound << " ("
        << cert.witness_channel << ")";
  out << (cert.exact ? ", exact" : ", not exact");
  return out.str();
}

inline void full_claims(VerificationReport& rep, const Curve& C,
                        const SecantTable& tab, const RunConfig& cfg) {
  const CurveParams& par = C.params();
  const std::uint64_t q = par.q;
  if (q != 2 && q != 3) {
    rep.claims.push_back(ClaimRecord{
        "full-level-comparisons", "Prop:MinimumDistance", "not computed",
        "certificates, weight counts, equivalence sampling, order and "
        "dimension sweeps",
        "not-applicable", "full-level comparisons are pinned at q in {2, 3}"});
    return;
  }

  {
    const TangentSurvey s = tangent_survey(C, cfg.jet_cap);
    rep.claims.push_back(claim(
        "tangent-order-dichotomy", "tangent proposition",
        histogram_string(s.order_histogram) + "; " + u64s(s.in_stated_set) +
            " of " + u64s(s.points) + " points at a stated order",
        "every point at order " + u64s(par.a) + " or " + u64s(par.m),
        s.in_stated_set == s.points,
        "affine points with z != 0 meet their tangent with order q along "
        "the branch"));
  }

  const LineEnvironment env =
      survey_lines(C, static_cast<std::size_t>(cfg.budget_conics), 7);
  const std::uint32_t m_hi = q == 2 ? 3 : 7;
  for (std::uint32_t m = 2; m <= m_hi; ++m) {
    const EvaluationCode code = one_point_dual(C, m);
    const DesignedDistance dd = designed_distance(m, q);
    const DistanceCertificate cert = certified_min_distance(code, env);
    ClaimRecord rec;
    rec.id = "min-distance-m" + u64s(m);
    rec.paper_ref = "Prop:MinimumDistance";
    rec.computed = certificate_string(cert);
    rec.expected = designed_string(dd);
    if (cert.exact && dd.value)
      rec.status = cert.lower_bound == *dd.value ? "match" : "mismatch";
    else if (dd.value)
      rec.status = (cert.upper_bound && *cert.upper_bound == *dd.value)
                       ? "partial"
                       : "mismatch";
    else
      rec.status = "partial";
    if (rec.status == "partial")
      rec.note = "witness meets the designed value; the lower bound stops at " +
                 u64s(cert.lower_bound);
    rep.claims.push_back(std::move(rec));

    if (q == 3 && cert.exact && (m == 4 || m == 5)) {
      const WeightCount wc =
          count_min_weight(code, *cert.upper_bound, &tab);
      ClaimRecord cnt;
      cnt.id = "min-weight-count-m" + u64s(m);
      cnt.paper_ref = "§4.1 A_{m+2}";
      cnt.computed = u64s(wc.codeword_count) + " codewords on " +
                     u64s(wc.support_count) + " supports, all dimension 1";
      cnt.expected = wc.formula + " = " + u64s(wc.formula_value) + " at " +
                     wc.substitution;
      cnt.status =
          (wc.formula_match && wc.one_dimensional_all) ? "match" : "mismatch";
      for (const std::string& s : wc.notes)
        cnt.note += (cnt.note.empty() ? "" : "; ") + s;
      rep.claims.push_back(std::move(cnt));
    }
  }
  if (q == 2)
    rep.claims.push_back(ClaimRecord{
        "min-weight-count", "§4.1 A_{m+2}", "not computed",
        "closed form for degrees with m + q + 1 <= q^2",
        "not-applicable", "no degree at q = 2 falls in the first case"});

  {
    const EquivalenceTrials tr = a2_equivalence_trials(C, tab, 120, cfg.seed);
    ClaimRecord rec;
    rec.id = "defect-witness-equivalence";
    rec.paper_ref = "Lemma a2";
    rec.computed = u64s(tr.agreements) + " of " + u64s(tr.in_hypothesis) +
                   " samples agree (" + u64s(tr.reduced) + " reduced, " +
                   u64s(tr.curvilinear) + " curvilinear, " + u64s(tr.defective) +
                   " defective)";
    rec.expected = "h1 >= 1 iff a witness is found, on every sample";
    if (tr.agreements == tr.in_hypothesis && tr.in_hypothesis > 0)
      rec.status = "match";
    else if (tr.reduced_agreements == tr.reduced)
      rec.status = "partial";
    else
      rec.status = "mismatch";
    for (std::size_t i = 0; i < tr.disagreements.size() && i < 3; ++i)
      rec.note += (rec.note.empty() ? "" : "; ") + tr.disagreements[i];
    rep.claims.push_back(std::move(rec));
  }

  for (std::uint32_t t = 1; t <= q + 4; ++t) {
    const SectionDimension s = curve_section_dimension(C, t);
    rep.claims.push_back(claim(
        "section-dimension-t" + u64s(t), "(eqa1)/(eqa2) dimension formulas",
        "rank " + u64s(s.computed_rank),
        "formula value " + std::to_string(s.formula_value), s.match));
  }
}

inline void heavy_claims(VerificationReport& rep, const Curve& C,
                         const RunConfig& cfg) {
  const Field& F = C.field();
  const CurveParams& par = C.params();
  const std::vector<Point>& pts = C.points();

  rep.claims.push_back(claim(
      "point-count", "Theorem u5", u64s(pts.size()), u64s(par.point_count),
      pts.size() == par.point_count));

  const std::array<Point, 3> P = default_three_point_base(C);
  const EvaluationCode code = three_point_code(C, P[0], P[1], P[2], 6,
                                               {6, 3, 3});
  rep.claims.push_back(claim("three-point-dimension", "§4.2 example",
                             "k = " + u64s(code.k), "k = 72", code.k == 72));

  const bool sections8 = code.line_sections[0] == 8 &&
                         code.line_sections[1] == 8 &&
                         code.line_sections[2] == 8;
  rep.claims.push_back(claim(
      "line-sections", "§4.2 example",
      u64s(code.line_sections[0]) + ", " + u64s(code.line_sections[1]) + ", " +
          u64s(code.line_sections[2]),
      "8, 8, 8", sections8));

  // audit every 6-subset of the three full line sections; only those inside
  // B can carry a dual-support space
  std::uint64_t candidates = 0, valid = 0, dim_one = 0;
  for (int i = 0; i < 3; ++i) {
    const std::vector<std::uint32_t> sec = line_section(F, *code.lines[i], pts);
    std::vector<std::optional<std::uint32_t>> col(sec.size());
    for (std::size_t a = 0; a < sec.size(); ++a) {
      const auto it =
          std::lower_bound(code.B.begin(), code.B.end(), sec[a]);
      if (it != code.B.end() && *it == sec[a])
        col[a] = static_cast<std::uint32_t>(it - code.B.begin());
    }
    std::vector<std::size_t> idx(6);
    for (std::size_t a = 0; a < 6; ++a) idx[a] = a;
    if (sec.size() < 6) continue;
    while (true) {
      ++candidates;
      bool inside = true;
      for (std::size_t a : idx)
        if (!col[a]) inside = false;
      if (inside) {
        ++valid;
        std::vector<std::uint32_t> S;
        for (std::size_t a : idx) S.push_back(*col[a]);
        const DualSupportSpace ds = dual_support_space(code, S);
        if (ds.dimension == 1 && ds.identity_holds) ++dim_one;
      }
      std::size_t a = 6;
      while (a > 0 && idx[a - 1] == sec.size() - 6 + (a - 1)) --a;
      if (a == 0) break;
      ++idx[a - 1];
      for (std::size_t b = a; b < 6; ++b) idx[b] = idx[b - 1] + 1;
    }
  }
  rep.claims.push_back(claim(
      "weight-6-supports", "Theorem u5",
      u64s(candidates) + " candidate subsets audited: " + u64s(valid) +
          " lie in B, " + u64s(dim_one) + " spanning dimension 1",
      "every 6-subset of B ∩ L_i spans dimension 1",
      valid > 0 && valid == dim_one,
      u64s(candidates - valid) + " subsets contain removed base points"));

  const std::uint64_t q6m1 = pow_u64(7, 6) - 1;
  rep.claims.push_back(ClaimRecord{
      "support-count", "u5 corollary",
      u64s(valid) + " supports = 3*C(6,6) within B",
      "84 = 3*C(8,6) from the full line sections",
      valid == 84 ? "match" : "mismatch",
      "the two base points on each line are removed from B, leaving "
      "C(6,6) = 1 support per line"});

  const std::uint64_t formula = q6m1 * 3 * 28;  // C(8,6) = 28
  rep.claims.push_back(claim(
      "count-formula-value", "§4.2 example",
      "(7^6-1)*3*C(8,6) = " + u64s(formula), "9882432", formula == 9882432,
      "enumerated codeword count over B is (7^6-1)*" + u64s(valid) + " = " +
          u64s(q6m1 * valid)));

  {
    const SampleReport sr = random_dependence_trials(code, 5, 100000, cfg.seed);
    rep.claims.push_back(claim(
        "five-subset-independence", "Theorem u5",
        u64s(sr.trials - sr.dependent) + " of " + u64s(sr.trials) +
            " random 5-subsets independent",
        "no dependent 5-subset", sr.dependent == 0));
  }

  {
    const DistanceCertificate cert = certified_min_distance(code);
    ClaimRecord rec;
    rec.id = "three-point-min-distance";
    rec.paper_ref = "Theorem u5";
    rec.computed = certificate_string(cert);
    rec.expected = "d = 6";
    rec.status = (cert.upper_bound && *cert.upper_bound == 6)
                     ? "partial"
                     : "mismatch";
    rec.note = "the lower bound is sampled, not certified";
    rep.claims.push_back(std::move(rec));
  }
}

}  // namespace detail

inline VerificationReport verify_suite(const RunConfig& cfg) {
  if (cfg.level != "smoke" && cfg.level != "full" && cfg.level != "heavy")
    throw std::invalid_argument("unknown level: " + cfg.level);
  if (cfg.level == "heavy" && cfg.q != 7)
    throw std::invalid_argument("the heavy level runs at q = 7 only");
  if (cfg.q == 7 && cfg.level != "heavy")
    throw std::invalid_argument("q = 7 runs at the heavy level only");

  VerificationReport rep;
  rep.q = cfg.q;
  rep.level = cfg.level;
  rep.seed = cfg.seed;

  Curve C(cfg.q);
  if (cfg.level == "heavy") {
    detail::heavy_claims(rep, C, cfg);
    return rep;
  }
  const SecantTable tab = secant_classification(C);
  detail::smoke_claims(rep, C, tab);
  if (cfg.level == "full") detail::full_claims(rep, C, tab, cfg);
  return rep;
}

inline VerificationReport verify_suite(std::uint32_t q, const std::string& level,
                                       std::uint64_t seed = 0) {
  RunConfig cfg;
  cfg.q = q;
  cfg.level = level;
  cfg.seed = seed;
  return verify_suite(cfg);
}

// ---------------------------------------------------------------------------
// Subcommand drivers

namespace detail {

inline nlohmann::json certificate_to_json(const DistanceCertificate& cert) {
  nlohmann::json j;
  j["lower_bound"] = cert.lower_bound;
  j["lower_tag"] = bound_tag_name(cert.lower_tag);
  j["conic_exhaustive"] = cert.conic_exhaustive;
  if (cert.upper_bound) j["upper_bound"] = *cert.upper_bound;
  j["witness"] = cert.witness;
  j["witness_channel"] = cert.witness_channel;
  j["witness_minimal"] = cert.witness_minimal;
  j["exact"] = cert.exact;
  j["notes"] = cert.notes;
  return j;
}

inline void print_code_summary(const EvaluationCode& code) {
  std::printf("family=%s q=%u m=%u d=%u n=%zu k=%zu\n",
              family_name(code.tag.family), code.curve->params().q, code.tag.m,
              code.d, code.B.size(), code.k);
  std::printf("dimension: predicted=%lld computed=%zu match=%d h1=%llu\n",
              static_cast<long long>(code.dim_log.predicted), code.k,
              code.dim_log.match ? 1 : 0,
              static_cast<unsigned long long>(code.dim_log.h1));
  for (const std::string& w : code.warnings)
    std::printf("warning: %s\n", w.c_str());
}

inline int run_points(const RunConfig& cfg) {
  Curve C(cfg.q);
  std::uint64_t subfield = 0;
  for (const Point& P : C.points())
    if (C.classify(P) != PointClass::generic) ++subfield;
  std::printf("q=%u points=%zu subfield=%llu generic=%llu\n", cfg.q,
              C.points().size(), static_cast<unsigned long long>(subfield),
              static_cast<unsigned long long>(C.points().size() - subfield));
  if (!cfg.out.empty()) write_points_csv(resolve_out_path(cfg.out), C);
  return 0;
}

inline int run_secants(const RunConfig& cfg) {
  Curve C(cfg.q);
  const SecantTable tab = secant_classification(C);
  std::printf("q=%u max_secants=%zu order=%u subfield_pair_lines=%zu\n", cfg.q,
              tab.max_secants.size(), C.params().m,
              tab.subfield_pair_lines.size());
  if (!cfg.out.empty()) write_max_secant_csv(resolve_out_path(cfg.out), tab);
  return 0;
}

inline int run_tangents(const RunConfig& cfg) {
  Curve C(cfg.q);
  const TangentSurvey s = tangent_survey(C, cfg.jet_cap);
  std::printf("q=%u points=%llu orders: %s\n", cfg.q,
              static_cast<unsigned long long>(s.points),
              histogram_string(s.order_histogram).c_str());
  std::printf("in_stated_set=%llu special_at_order_m=%llu/%llu\n",
              static_cast<unsigned long long>(s.in_stated_set),
              static_cast<unsigned long long>(s.special_at_m),
              static_cast<unsigned long long>(s.special_total));
  if (!cfg.out.empty())
    write_tangent_csv(resolve_out_path(cfg.out), C, cfg.jet_cap);
  return 0;
}

inline int run_code(const RunConfig& cfg) {
  Curve C(cfg.q);
  const EvaluationCode code = build_from_config(C, cfg);
  print_code_summary(code);
  if (!cfg.out.empty()) export_code(code, resolve_out_path(cfg.out));
  return 0;
}

inline int run_mindist(const RunConfig& cfg) {
  Curve C(cfg.q);
  const EvaluationCode code = build_from_config(C, cfg);
  DistanceCertificate cert;
  if (code.tag.family == CodeFamily::three_point) {
    cert = certified_min_distance(code);
  } else {
    const LineEnvironment env =
        survey_lines(C, static_cast<std::size_t>(cfg.budget_conics), 7);
    cert = certified_min_distance(code, env);
  }
  print_code_summary(code);
  std::printf("lower=%llu tag=%s",
              static_cast<unsigned long long>(cert.lower_bound),
              bound_tag_name(cert.lower_tag));
  if (cert.upper_bound)
    std::printf(" upper=%llu channel=%s minimal=%d",
                static_cast<unsigned long long>(*cert.upper_bound),
                cert.witness_channel.c_str(), cert.witness_minimal ? 1 : 0);
  std::printf(" exact=%d\n", cert.exact ? 1 : 0);
  for (const std::string& s : cert.notes)
    std::printf("note: %s\n", s.c_str());
  if (!cfg.out.empty())
    commit_file(resolve_out_path(cfg.out),
                certificate_to_json(cert).dump(2) + "\n");
  return 0;
}

inline int run_weights(const RunConfig& cfg) {
  Curve C(cfg.q);
  const EvaluationCode code = build_from_config(C, cfg);
  const LineEnvironment env =
      survey_lines(C, static_cast<std::size_t>(cfg.budget_conics), 7);
  const DistanceCertificate cert =
      code.tag.family == CodeFamily::three_point
          ? certified_min_distance(code)
          : certified_min_distance(code, env);
  print_code_summary(code);
  if (!cert.exact || !cert.upper_bound) {
    std::printf("count=skipped reason=certificate-not-exact lower=%llu\n",
                static_cast<unsigned long long>(cert.lower_bound));
    return 0;
  }
  const WeightCount wc = count_min_weight(code, *cert.upper_bound, &env.table);
  std::printf("w=%zu supports=%llu codewords=%llu one_dimensional=%d\n",
              wc.weight, static_cast<unsigned long long>(wc.support_count),
              static_cast<unsigned long long>(wc.codeword_count),
              wc.one_dimensional_all ? 1 : 0);
  std::printf("formula: %s = %llu at %s match=%d\n", wc.formula.c_str(),
              static_cast<unsigned long long>(wc.formula_value),
              wc.substitution.c_str(), wc.formula_match ? 1 : 0);
  for (const std::string& s : wc.notes) std::printf("note: %s\n", s.c_str());
  if (!cfg.out.empty()) {
    nlohmann::json j;
    j["weight"] = wc.weight;
    j["support_count"] = wc.support_count;
    j["codeword_count"] = wc.codeword_count;
    j["one_dimensional_all"] = wc.one_dimensional_all;
    j["formula"] = wc.formula;
    j["substitution"] = wc.substitution;
    j["formula_value"] = wc.formula_value;
    j["formula_match"] = wc.formula_match;
    j["notes"] = wc.notes;
    commit_file(resolve_out_path(cfg.out), j.dump(2) + "\n");
  }
  return 0;
}

inline int run_ghw(const RunConfig& cfg) {
  Curve C(cfg.q);
  const EvaluationCode code = build_from_config(C, cfg);
  const SecantTable tab = secant_classification(C);
  const std::size_t dual_dim = code.B.size() - code.k;
  const std::size_t v_max = std::min<std::size_t>(3, dual_dim);
  const std::size_t bound = code.d + 1 + v_max;
  const std::vector<HierarchyEntry> hier =
      weight_hierarchy(code, v_max, bound, &tab, cfg.budget_subsets);
  print_code_summary(code);
  nlohmann::json arr = nlohmann::json::array();
  for (const HierarchyEntry& e : hier) {
    std::printf("v=%zu lower=%zu", e.v, e.lower_bound);
    if (e.upper_bound) std::printf(" upper=%zu", *e.upper_bound);
    if (e.value) std::printf(" value=%zu", *e.value);
    std::printf(" support_exact=%d method=%s\n", e.support_exact ? 1 : 0,
                e.method.c_str());
    nlohmann::json j;
    j["v"] = e.v;
    j["lower_bound"] = e.lower_bound;
    if (e.upper_bound) j["upper_bound"] = *e.upper_bound;
    if (e.value) j["value"] = *e.value;
    j["support_exact"] = e.support_exact;
    j["method"] = e.method;
    j["notes"] = e.notes;
    arr.push_back(std::move(j));
  }
  if (!cfg.out.empty())
    commit_file(resolve_out_path(cfg.out), arr.dump(2) + "\n");
  return 0;
}

inline int run_verify(const RunConfig& cfg) {
  const VerificationReport rep = verify_suite(cfg);
  const nlohmann::json j = report_to_json(rep);
  if (cfg.out.empty()) {
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    write_report(resolve_out_path(cfg.out), rep);
    std::printf("claims=%zu match=%zu mismatch=%zu partial=%zu "
                "not-applicable=%zu\n",
                rep.claims.size(), rep.count("match"), rep.count("mismatch"),
                rep.count("partial"), rep.count("not-applicable"));
  }
  return rep.mismatches() ? 1 : 0;
}

inline int run_export(const RunConfig& cfg) {
  if (cfg.out.empty())
    throw std::invalid_argument("export needs --out");
  const std::string path = resolve_out_path(cfg.out);
  if (cfg.export_kind == "points") {
    Curve C(cfg.q);
    write_points_csv(path, C);
  } else if (cfg.export_kind == "secants") {
    Curve C(cfg.q);
    write_max_secant_csv(path, secant_classification(C));
  } else if (cfg.export_kind == "matrix") {
    Curve C(cfg.q);
    const EvaluationCode code = build_from_config(C, cfg);
    if (!code.gen)
      throw std::invalid_argument(
          "matrix export needs the dense generator; the code is too long");
    write_matrix_file(path, *code.gen);
  } else if (cfg.export_kind == "report") {
    write_report(path, verify_suite(cfg));
  } else {
    throw std::invalid_argument("unknown export kind: " + cfg.export_kind);
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Argument parsing

inline int run(std::vector<std::string> args) {
  RunConfig cfg;
  CLI::App app{"toolkit for evaluation codes on the GK curve"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"points", "enumerate and classify the rational points"},
      {"secants", "classify the maximal-secant lines"},
      {"tangents", "survey tangent-line intersection orders"},
      {"code", "build an evaluation code and print its dimension"},
      {"mindist", "certify the minimum distance of a code"},
      {"weights", "count minimum-weight codewords"},
      {"ghw", "compute generalized Hamming weights of the dual"},
      {"verify", "run a verification suite and report claims"},
      {"export", "write points, secants, a generator matrix, or a report"}};
  std::map<std::string, CLI::App*> sub;
  for (const auto& [name, desc] : subs) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->add_option("--q", cfg.q, "base field order")
        ->check(CLI::IsMember({2, 3, 4, 7}));
    s->add_option("--seed", cfg.seed, "seed for sampled checks");
    s->add_option("--workers", cfg.workers, "worker count (kernels are serial)");
    s->add_option("--out", cfg.out, "output file; relative paths resolve "
                                    "under GK_OUT_DIR");
    s->add_option("--budget-subsets", cfg.budget_subsets,
                  "row-operation cap for exhaustive subset scans");
    s->add_option("--budget-conics", cfg.budget_conics,
                  "conic samples per line survey");
    if (name == "code" || name == "mindist" || name == "weights" ||
        name == "ghw" || name == "export") {
      s->add_option("--family", cfg.family, "one-point or three-point");
      s->add_option("--m", cfg.m, "degree of the one-point family");
      s->add_option("--d", cfg.d, "degree of the three-point family");
      s->add_option("--a1", cfg.a[0], "first base multiplicity");
      s->add_option("--a2", cfg.a[1], "second base multiplicity");
      s->add_option("--a3", cfg.a[2], "third base multiplicity");
    }
    if (name == "verify" || name == "export")
      s->add_option("--level", cfg.level, "smoke, full, or heavy")
          ->check(CLI::IsMember({"smoke", "full", "heavy"}));
    if (name == "export")
      s->add_option("kind", cfg.export_kind,
                    "points, secants, matrix, or report")
          ->required();
    sub[name] = s;
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n%s", e.what(), app.help().c_str());
    return 2;
  }

  for (const auto& [name, s] : sub)
    if (s->parsed()) cfg.subcommand = name;

  try {
    if (cfg.subcommand == "points") return detail::run_points(cfg);
    if (cfg.subcommand == "secants") return detail::run_secants(cfg);
    if (cfg.subcommand == "tangents") return detail::run_tangents(cfg);
    if (cfg.subcommand == "code") return detail::run_code(cfg);
    if (cfg.subcommand == "mindist") return detail::run_mindist(cfg);
    if (cfg.subcommand == "weights") return detail::run_weights(cfg);
    if (cfg.subcommand == "ghw") return detail::run_ghw(cfg);
    if (cfg.subcommand == "verify") return detail::run_verify(cfg);
    if (cfg.subcommand == "export") return detail::run_export(cfg);
  } catch (const std::invalid_argument& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 2;
}

}  // namespace gk
