#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gk/codes.hpp"

namespace gk {

// ---------------------------------------------------------------------------
// Designed distance by degree case

struct DesignedDistance {
  int case_id = 0;                           // 1..5
  std::optional<std::uint64_t> value;        // cases 1-3: exact
  std::optional<std::uint64_t> lower_bound;  // case 4
  std::string label;                         // case 5
};

inline DesignedDistance designed_distance(std::uint64_t m, std::uint64_t q) {
  if (m < 2) throw std::invalid_argument("degree must be at least 2");
  if (q < 2) throw std::invalid_argument("base order must be at least 2");
  const std::uint64_t q2 = q * q;
  DesignedDistance out;
  if (m + q + 1 <= q2) {  // m <= q^2 - q - 1
    out.case_id = 1;
    out.value = m + 2;
  } else if (m == q2 - q) {
    out.case_id = 2;
    out.value = 2 * m + 2;
  } else if (m == q2 - q + 1) {
    out.case_id = 3;
    out.value = 3 * m;
  } else if (m <= q2 - 1) {
    out.case_id = 4;
    out.lower_bound = 3 * m + 1;
  } else {
    out.case_id = 5;
    out.label = "bound not evaluated";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared line data: secant table plus the exhaustive line-section maximum

struct LineEnvironment {
  SecantTable table;
  std::size_t max_line_section = 0;  // exhaustive maximum over all lines
  std::size_t conic_sample_max = 0;  // largest sampled conic section
  std::uint64_t conic_samples = 0;
};

inline LineEnvironment survey_lines(const Curve& C,
                                    std::uint64_t conic_samples = 200,
                                    std::uint64_t seed = 7) {
  LineEnvironment env;
  env.table = secant_classification(C);
  env.max_line_section = plane_section_bound_check(C, 1).max_section;
  if (conic_samples > 0) {
    const PlaneSectionReport conics =
        plane_section_bound_check(C, 2, conic_samples, seed);
    env.conic_sample_max = conics.max_section;
    env.conic_samples = conic_samples;
  }
  return env;
}

namespace detail {

inline std::optional<std::uint32_t> column_of(const EvaluationCode& code,
                                              std::uint32_t point_idx) {
  const auto it = std::lower_bound(code.B.begin(), code.B.end(), point_idx);
  if (it == code.B.end() || *it != point_idx) return std::nullopt;
  return static_cast<std::uint32_t>(it - code.B.begin());
}

// columns of the code hit by a line record, ascending
inline std::vector<std::uint32_t> record_columns(const EvaluationCode& code,
                                                 const SecantRecord& rec) {
  std::vector<std::uint32_t> cols;
  for (const std::uint32_t p : rec.point_idx)
    if (const auto c = column_of(code, p)) cols.push_back(*c);
  return cols;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > static_cast<unsigned __int128>(UINT64_MAX)) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

// advances idx to the next k-subset of {0..n-1}; false when exhausted
inline bool next_combination(std::vector<std::uint32_t>& idx, std::uint32_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] + static_cast<std::uint32_t>(k - i) < n) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::size_t subset_rank(const EvaluationCode& code,
                               const std::vector<std::uint32_t>& cols) {
  const Field& F = code.curve->field();
  Mat M(F, code.k, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const std::vector<felt> col = code.column(cols[j]);
    for (std::size_t i = 0; i < code.k; ++i) M.at(i, j) = col[i];
  }
  return rank_of(std::move(M));
}

struct ChannelCandidate {
  std::size_t size = 0;
  std::vector<std::uint32_t> cols;
  std::string channel;
};

inline bool candidate_precedes(const ChannelCandidate& a,
                               const ChannelCandidate& b) {
  if (a.size != b.size) return a.size < b.size;
  return a.cols < b.cols;
}

// smallest target-subset on a single classified line
inline std::optional<ChannelCandidate> line_candidate(
    const EvaluationCode& code, const SecantTable& tab, std::size_t target) {
  std::optional<ChannelCandidate> best;
  const auto scan = [&](const std::vector<SecantRecord>& recs) {
    for (const SecantRecord& rec : recs) {
      std::vector<std::uint32_t> cols = record_columns(code, rec);
      if (cols.size() < target) continue;
      cols.resize(target);
      ChannelCandidate cand{target, std::move(cols), "line"};
      if (!best || candidate_precedes(cand, *best)) best = std::move(cand);
    }
  };
  scan(tab.max_secants);
  scan(tab.subfield_pair_lines);
  return best;
}

// smallest target-subset on a coplanar line pair (a reducible conic)
inline std::optional<ChannelCandidate> pair_candidate(
    const EvaluationCode& code, const SecantTable& tab, std::size_t target,
    const std::string& channel) {
  const Field& F = code.curve->field();
  std::vector<const SecantRecord*> recs;
  for (const SecantRecord& r : tab.max_secants) recs.push_back(&r);
  for (const SecantRecord& r : tab.subfield_pair_lines) recs.push_back(&r);
  std::vector<std::vector<std::uint32_t>> cols(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i)
    cols[i] = record_columns(code, *recs[i]);
  std::optional<ChannelCandidate> best;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (cols[i].empty()) continue;
    for (std::size_t j = i + 1; j < recs.size(); ++j) {
      if (cols[i].size() + cols[j].size() < target) continue;
      if (!plane_of_lines(F, recs[i]->line, recs[j]->line)) continue;
      std::vector<std::uint32_t> u;
      std::set_union(cols[i].begin(), cols[i].end(), cols[j].begin(),
                     cols[j].end(), std::back_inserter(u));
      if (u.size() < target) continue;
      u.resize(target);
      ChannelCandidate cand{target, std::move(u), channel};
      if (!best || candidate_precedes(cand, *best)) best = std::move(cand);
    }
  }
  return best;
}

// smallest target-subset on three maximal secants over collinear bases
// (a plane cubic split into z-parallel lines)
inline std::optional<ChannelCandidate> triple_candidate(
    const EvaluationCode& code, const SecantTable& tab, std::size_t target) {
  const Curve& C = *code.curve;
  const Field& F = C.field();
  const std::vector<Point>& pts = C.points();
  const std::size_t nsec = tab.max_secants.size();
  if (nsec < 3) return std::nullopt;
  std::vector<std::vector<std::uint32_t>> cols(nsec);
  std::vector<std::pair<felt, felt>> base(nsec);
  for (std::size_t i = 0; i < nsec; ++i) {
    cols[i] = record_columns(code, tab.max_secants[i]);
    const Point& P = pts[tab.max_secants[i].point_idx.front()];
    base[i] = {P.x, P.y};
  }
  // bucket secants by the affine base line; a bucket of three or more
  // z-parallel lines lies in one plane
  std::map<std::array<felt, 3>, std::vector<std::uint32_t>> buckets;
  for (std::uint32_t i = 0; i < nsec; ++i)
    for (std::uint32_t j = i + 1; j < nsec; ++j) {
      const felt dx = F.sub(base[j].first, base[i].first);
      std::array<felt, 3> key;
      if (dx == 0) {
        key = {1, base[i].first, 0};
      } else {
        const felt s = F.mul(F.sub(base[j].second, base[i].second), F.inv(dx));
        key = {0, s, F.sub(base[i].second, F.mul(s, base[i].first))};
      }
      std::vector<std::uint32_t>& b = buckets[key];
      b.push_back(i);
      b.push_back(j);
    }
  std::optional<ChannelCandidate> best;
  for (auto& [key, members] : buckets) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.size() < 3) continue;
    std::vector<std::uint32_t> pick = {0, 1, 2};
    do {
      const std::uint32_t a = members[pick[0]];
      const std::uint32_t b = members[pick[1]];
      const std::uint32_t c = members[pick[2]];
      std::vector<std::uint32_t> u;
      std::merge(cols[a].begin(), cols[a].end(), cols[b].begin(),
                 cols[b].end(), std::back_inserter(u));
      std::vector<std::uint32_t> u2;
      std::merge(u.begin(), u.end(), cols[c].begin(), cols[c].end(),
                 std::back_inserter(u2));
      if (u2.size() < target) continue;
      u2.resize(target);
      ChannelCandidate cand{target, std::move(u2), "cubic-triple"};
      if (!best || candidate_precedes(cand, *best)) best = std::move(cand);
    } while (next_combination(pick, static_cast<std::uint32_t>(members.size())));
  }
  return best;
}

// the connecting lines meet the vanishing scheme in two reduced points, so a
// dependent section needs d further evaluation points
inline std::optional<ChannelCandidate> base_line_candidate(
    const EvaluationCode& code) {
  const Curve& C = *code.curve;
  const Field& F = C.field();
  std::optional<ChannelCandidate> best;
  for (const std::optional<Line>& L : code.lines) {
    if (!L) continue;
    std::size_t e_contact = 0;
    for (const SchemePoint& sp : code.E.pts)
      if (on_line(F, *L, sp.P)) ++e_contact;
    if (code.d + 2 < e_contact + 1) continue;
    const std::size_t target = code.d + 2 - e_contact;
    std::vector<std::uint32_t> cols;
    for (const std::uint32_t p : line_section(F, *L, C.points()))
      if (const auto c = column_of(code, p)) cols.push_back(*c);
    if (cols.size() < target) continue;
    cols.resize(target);
    ChannelCandidate cand{target, std::move(cols), "base-line"};
    if (!best || candidate_precedes(cand, *best)) best = std::move(cand);
  }
  return best;
}

inline std::optional<ChannelCandidate> structured_upper(
    const EvaluationCode& code, const SecantTable& tab) {
  const std::size_t d = code.d;
  if (auto c = line_candidate(code, tab, d + 2)) return c;
  if (auto c = pair_candidate(code, tab, 2 * d + 2, "conic-pair")) return c;
  if (auto c = triple_candidate(code, tab, 3 * d)) return c;
  return std::nullopt;
}

inline bool witness_is_minimal(const EvaluationCode& code,
                               const std::vector<std::uint32_t>& S,
                               std::uint64_t h1_full) {
  for (std::size_t i = 0; i < S.size(); ++i) {
    std::vector<std::uint32_t> sub;
    sub.reserve(S.size() - 1);
    for (std::size_t j = 0; j < S.size(); ++j)
      if (j != i) sub.push_back(S[j]);
    if (dual_support_space(code, sub).h1_with >= h1_full) return false;
  }
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Certified minimum distance

enum class BoundTag { none, lemma_a2, lemma_x1, exhaustive, sampled };

inline const char* bound_tag_name(BoundTag t) {
  switch (t) {
    case BoundTag::lemma_a2: return "lemma-a2";
    case BoundTag::lemma_x1: return "lemma-x1";
    case BoundTag::exhaustive: return "exhaustive";
    case BoundTag::sampled: return "sampled";
    default: return "none";
  }
}

struct DistanceCertificate {
  std::size_t lower_bound = 1;
  BoundTag lower_tag = BoundTag::none;
  bool conic_exhaustive = true;
  std::optional<std::size_t> upper_bound;
  std::vector<std::uint32_t> witness;  // column indices, ascending
  std::string witness_channel;
  bool witness_minimal = false;
  bool exact = false;
  std::vector<std::string> notes;
};

// count of dependent subsets among random draws of a fixed size
struct SampleReport {
  std::uint64_t trials = 0;
  std::uint64_t dependent = 0;
  std::optional<std::vector<std::uint32_t>> first_dependent;
};

inline SampleReport random_dependence_trials(const EvaluationCode& code,
                                             std::size_t size,
                                             std::uint64_t trials,
                                             std::uint64_t seed) {
  if (size == 0 || size > code.B.size())
    throw std::invalid_argument("sample size outside the column range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(
      0, static_cast<std::uint32_t>(code.B.size() - 1));
  SampleReport rep;
  rep.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::set<std::uint32_t> chosen;
    while (chosen.size() < size) chosen.insert(pick(rng));
    const std::vector<std::uint32_t> S(chosen.begin(), chosen.end());
    if (detail::subset_rank(code, S) < size) {
      ++rep.dependent;
      if (!rep.first_dependent) rep.first_dependent = S;
    }
  }
  return rep;
}

inline DistanceCertificate certified_min_distance(const EvaluationCode& code,
                                                  const LineEnvironment& env) {
  DistanceCertificate cert;
  const std::size_t d = code.d;
  const bool three_point = code.tag.family == CodeFamily::three_point;

  std::optional<detail::ChannelCandidate> cand =
      three_point ? detail::base_line_candidate(code)
                  : detail::structured_upper(code, env.table);
  if (cand) {
    const DualSupportSpace dual = dual_support_space(code, cand->cols);
    if (dual.dimension >= 1) {
      cert.upper_bound = cand->size;
      cert.witness = cand->cols;
      cert.witness_channel = cand->channel;
      cert.witness_minimal =
          detail::witness_is_minimal(code, cand->cols, dual.h1_with);
      if (!cert.witness_minimal)
        cert.notes.push_back("witness is not support-minimal");
    } else {
      cert.notes.push_back("structured candidate of size " +
                           std::to_string(cand->size) + " is independent");
      cand.reset();
    }
  }
  if (!cand) cert.notes.push_back("no structured witness found");

  if (three_point) {
    // no exhaustive line data at this scale; sampled evidence only
    cert.conic_exhaustive = false;
    if (!cert.upper_bound) return cert;
    const std::size_t s_max = *cert.upper_bound - 1;
    const std::uint64_t trials = 400;
    std::uint64_t checked = 0;
    std::optional<std::vector<std::uint32_t>> hit;
    for (std::size_t s = 2; s <= s_max && !hit; ++s) {
      const SampleReport rep =
          random_dependence_trials(code, s, trials, 0x5eed + s);
      checked += rep.trials;
      if (rep.dependent > 0) hit = rep.first_dependent;
    }
    cert.lower_tag = BoundTag::sampled;
    if (!hit) {
      cert.lower_bound = *cert.upper_bound;
      cert.exact = true;
      cert.notes.push_back(std::to_string(checked) +
                           " random subsets of sizes 2.." +
                           std::to_string(s_max) + " are all independent");
    } else {
      cert.lower_bound = 1;
      cert.notes.push_back("sampling found a dependent subset of size " +
                           std::to_string(hit->size()));
    }
    return cert;
  }

  // sizes below the reported lower bound admit no dependent subset: a
  // dependent subset inside the plane window needs d+2 points on a line or
  // 2d+2 on a conic, and the classified sections fall short
  const std::size_t window_end = 3 * d - 1;
  const std::size_t s_max =
      cert.upper_bound ? *cert.upper_bound - 1 : window_end;
  std::size_t clear = std::min(s_max, window_end);
  if (s_max > window_end)
    cert.notes.push_back("sizes " + std::to_string(window_end + 1) + ".." +
                         std::to_string(s_max) +
                         " fall outside the plane window and are not excluded");
  const std::size_t line_floor = d + 2;
  cert.notes.push_back(
      "line witnesses need " + std::to_string(line_floor) +
      " collinear points; the largest line section is " +
      std::to_string(env.max_line_section) + " (exhaustive)");
  if (env.max_line_section >= line_floor && line_floor <= clear)
    clear = line_floor - 1;
  const std::size_t conic_floor = 2 * d + 2;
  cert.conic_exhaustive = conic_floor > s_max;
  if (2 * env.max_line_section < conic_floor)
    cert.notes.push_back("line pairs reach at most " +
                         std::to_string(2 * env.max_line_section) +
                         " points, below the conic threshold " +
                         std::to_string(conic_floor));
  if (env.conic_samples > 0)
    cert.notes.push_back("sampled " + std::to_string(env.conic_samples) +
                         " conics; largest section " +
                         std::to_string(env.conic_sample_max));
  if (conic_floor <= clear) {
    clear = conic_floor - 1;
    cert.notes.push_back(
        "sizes " + std::to_string(conic_floor) + ".." + std::to_string(s_max) +
        " could host irreducible-conic sections, which are only sampled");
  }
  cert.lower_bound = clear + 1;
  cert.lower_tag = clear >= 1 ? BoundTag::lemma_a2 : BoundTag::none;
  cert.exact = cert.upper_bound && cert.lower_bound == *cert.upper_bound;
  return cert;
}

inline DistanceCertificate certified_min_distance(const EvaluationCode& code) {
  if (code.tag.family == CodeFamily::three_point) {
    LineEnvironment empty;
    return certified_min_distance(code, empty);
  }
  return certified_min_distance(code, survey_lines(*code.curve));
}

// ---------------------------------------------------------------------------
// Exhaustive dependence search (independent oracle for the certificates)

struct DependenceResult {
  std::optional<std::vector<std::uint32_t>> support;
  bool complete = true;
  std::uint64_t reductions = 0;
};

inline DependenceResult exhaustive_dependence_search(
    const EvaluationCode& code, std::size_t w_max,
    std::uint64_t budget = 6'000'000'000ULL) {
  const Field& F = code.curve->field();
  const std::size_t n = code.B.size();
  const std::size_t k = code.k;
  DependenceResult out;

  std::vector<std::vector<felt>> cols(n);
  for (std::size_t j = 0; j < n; ++j) cols[j] = code.column(j);
  for (std::size_t j = 0; j < n && w_max >= 1; ++j) {
    ++out.reductions;
    if (std::all_of(cols[j].begin(), cols[j].end(),
                    [](felt v) { return v == 0; })) {
      out.support = std::vector<std::uint32_t>{static_cast<std::uint32_t>(j)};
      return out;
    }
  }

  std::vector<std::vector<felt>> rows(w_max, std::vector<felt>(k));
  std::vector<std::size_t> piv(w_max, 0);
  std::vector<std::uint32_t> pick(w_max, 0);
  std::vector<felt> buf(k);

  for (std::size_t w = 2; w <= w_max && w <= n; ++w) {
    std::size_t depth = 0;
    std::uint32_t start = 0;
    for (;;) {
      bool descended = false;
      const std::uint32_t limit =
          static_cast<std::uint32_t>(n - (w - 1 - depth));
      for (std::uint32_t c = start; c < limit; ++c) {
        if (++out.reductions > budget) {
          out.complete = false;
          return out;
        }
        std::copy(cols[c].begin(), cols[c].end(), buf.begin());
        for (std::size_t t = 0; t < depth; ++t) {
          const felt f = buf[piv[t]];
          if (f == 0) continue;
          const std::vector<felt>& row = rows[t];
          for (std::size_t i = 0; i < k; ++i)
            buf[i] = F.sub(buf[i], F.mul(f, row[i]));
        }
        std::size_t p = 0;
        while (p < k && buf[p] == 0) ++p;
        if (p == k) {
          std::vector<std::uint32_t> sup(pick.begin(), pick.begin() + depth);
          sup.push_back(c);
          out.support = std::move(sup);
          return out;
        }
        if (depth + 1 == w) continue;  // independent w-subset
        const felt inv = F.inv(buf[p]);
        for (std::size_t i = 0; i < k; ++i)
          rows[depth][i] = F.mul(buf[i], inv);
        piv[depth] = p;
        pick[depth] = c;
        ++depth;
        start = c + 1;
        descended = true;
        break;
      }
      if (descended) continue;
      if (depth == 0) break;
      --depth;
      start = pick[depth] + 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimum-weight codeword counting

struct WeightCount {
  std::size_t weight = 0;
  std::uint64_t support_count = 0;
  std::uint64_t codeword_count = 0;
  bool one_dimensional_all = true;
  std::uint64_t formula_value = 0;
  std::string formula;
  std::string substitution;
  bool formula_match = false;
  std::uint64_t candidates_checked = 0;
  std::vector<std::string> notes;
};

inline WeightCount count_min_weight(const EvaluationCode& code, std::size_t w,
                                    const SecantTable* tab = nullptr) {
  if (w < 2) throw std::invalid_argument("weight must be at least 2");
  const Curve& C = *code.curve;
  const Field& F = C.field();
  const std::uint64_t q = C.params().q;
  WeightCount out;
  out.weight = w;

  std::vector<std::vector<std::uint32_t>> sections;
  if (code.tag.family == CodeFamily::three_point) {
    for (const std::optional<Line>& L : code.lines) {
      if (!L) continue;
      std::vector<std::uint32_t> cols;
      for (const std::uint32_t p : line_section(F, *L, C.points()))
        if (const auto c = detail::column_of(code, p)) cols.push_back(*c);
      if (cols.size() >= w) sections.push_back(std::move(cols));
    }
  } else {
    SecantTable local;
    if (!tab) {
      local = secant_classification(C);
      tab = &local;
    }
    const auto scan = [&](const std::vector<SecantRecord>& recs) {
      for (const SecantRecord& rec : recs) {
        std::vector<std::uint32_t> cols = detail::record_columns(code, rec);
        if (cols.size() >= w) sections.push_back(std::move(cols));
      }
    };
    scan(tab->max_secants);
    scan(tab->subfield_pair_lines);
  }

  for (const std::vector<std::uint32_t>& sec : sections) {
    std::vector<std::uint32_t> pick(w);
    for (std::size_t i = 0; i < w; ++i) pick[i] = static_cast<std::uint32_t>(i);
    do {
      std::vector<std::uint32_t> S(w);
      for (std::size_t i = 0; i < w; ++i) S[i] = sec[pick[i]];
      ++out.candidates_checked;
      const DualSupportSpace dual = dual_support_space(code, S);
      if (!dual.identity_holds)
        throw std::runtime_error("defect identity failed on a support");
      if (dual.dimension != 1) {
        out.one_dimensional_all = false;
        throw std::runtime_error(
            "candidate support of weight " + std::to_string(w) +
            " spans dimension " + std::to_string(dual.dimension) +
            "; the counting argument breaks");
      }
      ++out.support_count;
    } while (detail::next_combination(pick, static_cast<std::uint32_t>(sec.size())));
  }
  out.codeword_count = out.support_count * (F.size() - 1);

  if (code.tag.family == CodeFamily::three_point) {
    out.formula = "(q^6-1) * sum_i C(|section of L_i|, w)";
    out.substitution = "q = " + std::to_string(q);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < 3; ++i)
      total += detail::binomial(code.line_sections[i], w);
    out.formula_value = (F.size() - 1) * total;
  } else {
    out.formula = "(l+1)*(l^5-l^3)*(l^6-1)*C(l^2-l+1, w)";
    out.substitution = "l = q = " + std::to_string(q);
    const std::uint64_t q5 = q * q * q * q * q;
    out.formula_value = (q + 1) * (q5 - q * q * q) * (F.size() - 1) *
                        detail::binomial(q * q - q + 1, w);
  }
  out.formula_match = out.formula_value == out.codeword_count;
  if (!out.formula_match)
    out.notes.push_back("enumerated count " +
                        std::to_string(out.codeword_count) +
                        " differs from the closed form " +
                        std::to_string(out.formula_value));
  out.notes.push_back("candidate supports drawn from classified line sections");
  return out;
}

// ---------------------------------------------------------------------------
// Full weight distribution for tiny codes

struct WeightDistribution {
  std::map<std::size_t, std::uint64_t> primal;
  std::uint64_t primal_words = 0;
  std::optional<std::map<std::size_t, std::uint64_t>> dual;
  std::uint64_t dual_words = 0;
};

namespace detail {

inline std::optional<std::uint64_t> checked_pow(std::uint64_t base,
                                                std::size_t exp,
                                                std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > cap / base) return std::nullopt;
    r *= base;
  }
  return r;
}

inline std::map<std::size_t, std::uint64_t> enumerate_weights(
    const Field& F, const std::vector<std::vector<felt>>& rows,
    std::size_t n) {
  const std::uint64_t Q = F.size();
  const std::size_t k = rows.size();
  std::map<std::size_t, std::uint64_t> hist;
  std::vector<felt> word(n, 0);
  std::vector<felt> digit(k, 0);
  for (;;) {
    std::size_t weight = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (word[j] != 0) ++weight;
    ++hist[weight];
    std::size_t i = k;
    bool carried_out = true;
    while (i-- > 0) {
      const felt old = digit[i];
      const felt next = old + 1 < Q ? old + 1 : 0;
      const felt delta = F.sub(next, old);
      for (std::size_t j = 0; j < n; ++j)
        word[j] = F.add(word[j], F.mul(delta, rows[i][j]));
      digit[i] = next;
      if (next != 0) {
        carried_out = false;
        break;
      }
    }
    if (carried_out) break;
  }
  return hist;
}

}  // namespace detail

inline WeightDistribution weight_distribution_tiny(
    const EvaluationCode& code, std::uint64_t budget = 10'000'000) {
  const Field& F = code.curve->field();
  const std::size_t n = code.B.size();
  const auto primal_total = detail::checked_pow(F.size(), code.k, budget);
  if (!primal_total)
    throw std::runtime_error("codeword enumeration exceeds the budget of " +
                             std::to_string(budget) + " words");
  std::vector<std::vector<felt>> rows(code.k, std::vector<felt>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<felt> col = code.column(j);
    for (std::size_t i = 0; i < code.k; ++i) rows[i][j] = col[i];
  }
  WeightDistribution out;
  out.primal = detail::enumerate_weights(F, rows, n);
  out.primal_words = *primal_total;

  const std::size_t dual_dim = n - code.k;
  if (const auto dual_total = detail::checked_pow(F.size(), dual_dim, budget)) {
    Mat G(F, code.k, n);
    for (std::size_t i = 0; i < code.k; ++i)
      for (std::size_t j = 0; j < n; ++j) G.at(i, j) = rows[i][j];
    const std::vector<std::vector<felt>> dual_rows = nullspace(std::move(G));
    out.dual = detail::enumerate_weights(F, dual_rows, n);
    out.dual_words = *dual_total;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generalized Hamming weights of the dual code

struct HierarchyEntry {
  std::size_t v = 0;
  std::size_t lower_bound = 0;
  std::optional<std::size_t> upper_bound;
  std::optional<std::size_t> value;  // set when the bounds meet
  std::vector<std::uint32_t> witness;
  bool support_exact = false;
  std::string method;
  std::vector<std::string> notes;
};

inline HierarchyEntry ghw(const EvaluationCode& code, std::size_t v,
                          std::size_t search_bound,
                          const SecantTable* tab = nullptr,
                          std::uint64_t budget = 50'000'000) {
  if (v < 1) throw std::invalid_argument("hierarchy index must be positive");
  const std::size_t n = code.B.size();
  if (v > n - code.k)
    throw std::invalid_argument("hierarchy index exceeds the dual dimension");
  const std::size_t d = code.d;
  HierarchyEntry e;
  e.v = v;
  e.lower_bound = v + 1;  // nonzero columns: v independent words need v+1 spots

  SecantTable local;
  if (!tab) {
    local = secant_classification(*code.curve);
    tab = &local;
  }
  // structured candidates: line sections give dimension size-(d+1), coplanar
  // pairs give size-(2d+1)
  std::optional<detail::ChannelCandidate> structured =
      detail::line_candidate(code, *tab, d + 1 + v);
  if (!structured)
    structured = detail::pair_candidate(code, *tab, 2 * d + 1 + v,
                                        "coplanar-pair");
  if (structured) {
    const DualSupportSpace dual = dual_support_space(code, structured->cols);
    if (dual.dimension >= v) {
      e.upper_bound = structured->size;
      e.witness = structured->cols;
      e.method = structured->channel;
    } else {
      e.notes.push_back("structured candidate spans only dimension " +
                        std::to_string(dual.dimension));
    }
  }

  // exhaustive scan by size, smallest first
  std::vector<std::vector<felt>> cols(n);
  for (std::size_t j = 0; j < n; ++j) cols[j] = code.column(j);
  const Field& F = code.curve->field();
  const std::size_t scan_end =
      std::min(search_bound, e.upper_bound ? *e.upper_bound - 1 : search_bound);
  std::uint64_t used = 0;
  bool truncated = false;
  for (std::size_t s = e.lower_bound; s <= scan_end && s <= n; ++s) {
    const std::uint64_t count = detail::binomial(n, s);
    if (used + count > budget) {
      truncated = true;
      e.notes.push_back("exhaustive scan stopped before size " +
                        std::to_string(s) + ": budget exceeded");
      e.lower_bound = s;
      break;
    }
    used += count;
    std::vector<std::uint32_t> pick(s);
    for (std::size_t i = 0; i < s; ++i) pick[i] = static_cast<std::uint32_t>(i);
    bool found = false;
    do {
      Mat M(F, code.k, s);
      for (std::size_t j = 0; j < s; ++j)
        for (std::size_t i = 0; i < code.k; ++i)
          M.at(i, j) = cols[pick[j]][i];
      const std::size_t r = rank_of(std::move(M));
      if (s - r < v) continue;
      const std::vector<std::uint32_t> S(pick.begin(), pick.end());
      const DualSupportSpace dual = dual_support_space(code, S);
      std::set<std::uint32_t> support_union;
      for (const auto& wvec : dual.basis)
        for (const auto& [col, val] : wvec) support_union.insert(col);
      if (support_union.size() != S.size()) continue;  // not support-exact
      e.value = s;
      e.upper_bound = s;
      e.lower_bound = s;
      e.witness = S;
      e.support_exact = true;
      e.method = "exhaustive";
      found = true;
      break;
    } while (detail::next_combination(pick, static_cast<std::uint32_t>(n)));
    if (found) return e;
    e.lower_bound = s + 1;
  }

  if (!truncated && e.upper_bound && e.lower_bound >= *e.upper_bound) {
    // every smaller size was scanned; the structured witness is minimal
    e.value = *e.upper_bound;
    e.lower_bound = *e.upper_bound;
    const DualSupportSpace dual = dual_support_space(code, e.witness);
    std::set<std::uint32_t> support_union;
    for (const auto& wvec : dual.basis)
      for (const auto& [col, val] : wvec) support_union.insert(col);
    e.support_exact = support_union.size() == e.witness.size();
  } else if (!e.upper_bound) {
    e.notes.push_back("no witness within the search bound");
  }
  return e;
}

inline std::vector<HierarchyEntry> weight_hierarchy(
    const EvaluationCode& code, std::size_t v_max, std::size_t search_bound,
    const SecantTable* tab = nullptr, std::uint64_t budget = 50'000'000) {
  std::vector<HierarchyEntry> out;
  for (std::size_t v = 1; v <= v_max; ++v)
    out.push_back(ghw(code, v, search_bound, tab, budget));
  return out;
}

// ---------------------------------------------------------------------------
// Conic-supported subspaces on a distinguished reducible conic

struct ConicSupportReport {
  bool found = false;
  Line line_a, line_b;
  std::size_t deg_d_cap_e = 0;
  std::size_t b_cap_d = 0;
  std::size_t h_target = 0;
  std::size_t threshold = 0;  // 2d + h - 1 + deg(D cap E)
  std::optional<std::size_t> minimal_size;
  std::vector<std::uint32_t> witness;
  std::vector<std::string> notes;
};

inline ConicSupportReport conic_support_report(const EvaluationCode& code,
                                               std::size_t h,
                                               const SecantTable* tab = nullptr) {
  const Curve& C = *code.curve;
  const Field& F = C.field();
  ConicSupportReport rep;
  rep.h_target = h;

  SecantTable local;
  if (!tab) {
    local = secant_classification(C);
    tab = &local;
  }
  // distinguished conic: the coplanar secant pair with the largest section
  std::optional<std::pair<std::size_t, std::size_t>> best;
  std::size_t best_size = 0;
  std::vector<std::vector<std::uint32_t>> cols(tab->max_secants.size());
  for (std::size_t i = 0; i < tab->max_secants.size(); ++i)
    cols[i] = detail::record_columns(code, tab->max_secants[i]);
  for (std::size_t i = 0; i < tab->max_secants.size(); ++i)
    for (std::size_t j = i + 1; j < tab->max_secants.size(); ++j) {
      const std::size_t size = cols[i].size() + cols[j].size();
      if (size <= best_size) continue;
      if (!plane_of_lines(F, tab->max_secants[i].line,
                          tab->max_secants[j].line))
        continue;
      best = {i, j};
      best_size = size;
    }
  if (!best) {
    rep.notes.push_back("no coplanar secant pair available");
    return rep;
  }
  rep.found = true;
  rep.line_a = tab->max_secants[best->first].line;
  rep.line_b = tab->max_secants[best->second].line;
  for (const SchemePoint& sp : code.E.pts)
    if (on_line(F, rep.line_a, sp.P) || on_line(F, rep.line_b, sp.P))
      ++rep.deg_d_cap_e;
  std::vector<std::uint32_t> conic_cols;
  std::set_union(cols[best->first].begin(), cols[best->first].end(),
                 cols[best->second].begin(), cols[best->second].end(),
                 std::back_inserter(conic_cols));
  rep.b_cap_d = conic_cols.size();
  rep.threshold = 2 * code.d + h - 1 + rep.deg_d_cap_e;

  if (h == 0) {
    rep.minimal_size = 0;
    return rep;
  }
  for (std::size_t s = h; s <= conic_cols.size(); ++s) {
    std::vector<std::uint32_t> pick(s);
    for (std::size_t i = 0; i < s; ++i) pick[i] = static_cast<std::uint32_t>(i);
    do {
      std::vector<std::uint32_t> S(s);
      for (std::size_t i = 0; i < s; ++i) S[i] = conic_cols[pick[i]];
      if (dual_support_space(code, S).dimension >= h) {
        rep.minimal_size = s;
        rep.witness = std::move(S);
        return rep;
      }
    } while (detail::next_combination(pick,
                                      static_cast<std::uint32_t>(conic_cols.size())));
  }
  rep.notes.push_back("no conic-supported subspace of dimension " +
                      std::to_string(h) + " within the section");
  return rep;
}

}  // namespace gk
