#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "gk/weights.hpp"

using namespace gk;

namespace {

const Curve& curve2() {
  static const Curve C(2);
  return C;
}

const Curve& curve3() {
  static const Curve C(3);
  return C;
}

const LineEnvironment& env2() {
  static const LineEnvironment env = survey_lines(curve2());
  return env;
}

const LineEnvironment& env3() {
  static const LineEnvironment env = survey_lines(curve3());
  return env;
}

// nine points on the first three maximal secants, degree one
EvaluationCode tiny_code() {
  std::vector<std::uint32_t> B;
  for (int s = 0; s < 3; ++s)
    for (const std::uint32_t p : env2().table.max_secants[s].point_idx)
      B.push_back(p);
  std::sort(B.begin(), B.end());
  return build_code_at(curve2(), B, 1, ZeroDimScheme{});
}

void check_support_characterization(const EvaluationCode& code,
                                    const std::vector<std::uint32_t>& S) {
  const DualSupportSpace full = dual_support_space(code, S);
  REQUIRE(full.dimension >= 1);
  REQUIRE(full.identity_holds);
  REQUIRE(full.h1_with > full.h1_without);
  for (std::size_t i = 0; i < S.size(); ++i) {
    std::vector<std::uint32_t> sub;
    for (std::size_t j = 0; j < S.size(); ++j)
      if (j != i) sub.push_back(S[j]);
    REQUIRE(dual_support_space(code, sub).h1_with < full.h1_with);
  }
}

}  // namespace

TEST_CASE("designed distance cases split at the secant order") {
  const DesignedDistance d4 = designed_distance(4, 3);
  REQUIRE(d4.case_id == 1);
  REQUIRE(d4.value == 6);
  REQUIRE(designed_distance(2, 3).value == 4);
  REQUIRE(designed_distance(5, 3).value == 7);

  const DesignedDistance d6 = designed_distance(6, 3);
  REQUIRE(d6.case_id == 2);
  REQUIRE(d6.value == 14);

  const DesignedDistance d7 = designed_distance(7, 3);
  REQUIRE(d7.case_id == 3);
  REQUIRE(d7.value == 21);

  const DesignedDistance d8 = designed_distance(8, 3);
  REQUIRE(d8.case_id == 4);
  REQUIRE_FALSE(d8.value.has_value());
  REQUIRE(d8.lower_bound == 25);

  const DesignedDistance d9 = designed_distance(9, 3);
  REQUIRE(d9.case_id == 5);
  REQUIRE(d9.label == "bound not evaluated");

  REQUIRE(designed_distance(2, 2).case_id == 2);
  REQUIRE(designed_distance(2, 2).value == 6);
  REQUIRE(designed_distance(3, 2).case_id == 3);
  REQUIRE(designed_distance(3, 2).value == 9);
  REQUIRE(designed_distance(4, 2).case_id == 5);

  REQUIRE_THROWS_AS(designed_distance(1, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(designed_distance(2, 1), std::invalid_argument);
}

TEST_CASE("line surveys capture the exhaustive section maxima") {
  const LineEnvironment& e2 = env2();
  REQUIRE(e2.max_line_section == 3);
  REQUIRE(e2.table.max_secants.size() == 72);
  REQUIRE(e2.table.subfield_pair_lines.size() == 12);
  REQUIRE(e2.conic_samples == 200);
  REQUIRE(e2.conic_sample_max == 4);  // below the alpha=2 bound of 2m = 6

  const LineEnvironment& e3 = env3();
  REQUIRE(e3.max_line_section == 7);
  REQUIRE(e3.table.max_secants.size() == 864);
}

TEST_CASE("q=2 certificates cover the conic and cubic channels") {
  const EvaluationCode c22 = one_point_dual(curve2(), 2);
  const DistanceCertificate cert = certified_min_distance(c22, env2());
  REQUIRE(cert.exact);
  REQUIRE(cert.lower_bound == 6);
  REQUIRE(cert.upper_bound == 6);
  REQUIRE(cert.lower_tag == BoundTag::lemma_a2);
  REQUIRE(cert.conic_exhaustive);
  REQUIRE(cert.witness_channel == "conic-pair");
  REQUIRE(cert.witness_minimal);
  REQUIRE(cert.witness == std::vector<std::uint32_t>{0, 1, 218, 219, 221, 222});
  check_support_characterization(c22, cert.witness);

  // two lines short of a conic section: the cubic channel takes over and the
  // conic gap keeps the bounds apart
  const EvaluationCode c23 = one_point_dual(curve2(), 3);
  const DistanceCertificate cert3 = certified_min_distance(c23, env2());
  REQUIRE_FALSE(cert3.exact);
  REQUIRE(cert3.lower_bound == 8);
  REQUIRE(cert3.upper_bound == 9);
  REQUIRE(cert3.witness_channel == "cubic-triple");
  REQUIRE(cert3.witness_minimal);
  REQUIRE_FALSE(cert3.conic_exhaustive);
  check_support_characterization(c23, cert3.witness);
}

TEST_CASE("q=3 one-point certificates match the designed values") {
  for (std::uint32_t m = 2; m <= 5; ++m) {
    const EvaluationCode code = one_point_dual(curve3(), m);
    const DistanceCertificate cert = certified_min_distance(code, env3());
    INFO("m = " << m);
    REQUIRE(cert.exact);
    REQUIRE(cert.lower_bound == m + 2);
    REQUIRE(cert.upper_bound == m + 2);
    REQUIRE(cert.lower_tag == BoundTag::lemma_a2);
    REQUIRE(cert.conic_exhaustive);
    REQUIRE(cert.witness_channel == "line");
    REQUIRE(cert.witness_minimal);
    REQUIRE(*cert.upper_bound == *designed_distance(m, 3).value);
  }

  const EvaluationCode c36 = one_point_dual(curve3(), 6);
  const DistanceCertificate cert6 = certified_min_distance(c36, env3());
  REQUIRE(cert6.exact);
  REQUIRE(cert6.lower_bound == 14);
  REQUIRE(cert6.witness_channel == "conic-pair");
  REQUIRE(cert6.witness_minimal);
  REQUIRE(cert6.conic_exhaustive);
  check_support_characterization(c36, cert6.witness);
  // the witness is the union of two full secant sections
  std::set<std::uint32_t> w6(cert6.witness.begin(), cert6.witness.end());
  REQUIRE(w6.size() == 14);

  const EvaluationCode c37 = one_point_dual(curve3(), 7);
  const DistanceCertificate cert7 = certified_min_distance(c37, env3());
  REQUIRE_FALSE(cert7.exact);
  REQUIRE(cert7.lower_bound == 16);  // conic sizes 16..20 are only sampled
  REQUIRE(cert7.upper_bound == 21);
  REQUIRE(cert7.witness_channel == "cubic-triple");
  REQUIRE(cert7.witness_minimal);
  REQUIRE_FALSE(cert7.conic_exhaustive);
  REQUIRE(*designed_distance(7, 3).value == 21);
  check_support_characterization(c37, cert7.witness);
}

TEST_CASE("exhaustive search agrees with the certificates") {
  const EvaluationCode c22 = one_point_dual(curve2(), 2);
  const DependenceResult d3 = exhaustive_dependence_search(c22, 3);
  REQUIRE(d3.complete);
  REQUIRE_FALSE(d3.support.has_value());
  REQUIRE(d3.reductions == 1898622);

  const DependenceResult d1 = exhaustive_dependence_search(c22, 1);
  REQUIRE(d1.complete);
  REQUIRE_FALSE(d1.support.has_value());

  const EvaluationCode tiny = tiny_code();
  REQUIRE(tiny.length() == 9);
  REQUIRE(tiny.k == 3);
  const DependenceResult td = exhaustive_dependence_search(tiny, 3);
  REQUIRE(td.complete);
  REQUIRE(td.support == std::vector<std::uint32_t>{0, 1, 2});

  const DependenceResult cut = exhaustive_dependence_search(tiny, 3, 10);
  REQUIRE_FALSE(cut.complete);
  REQUIRE_FALSE(cut.support.has_value());
  REQUIRE(cut.reductions == 11);

  // certificate on the same restricted instance, confirmed by the search
  const DistanceCertificate cert = certified_min_distance(tiny, env2());
  REQUIRE(cert.exact);
  REQUIRE(cert.lower_bound == 3);
  REQUIRE(cert.witness_channel == "line");
  const DependenceResult below =
      exhaustive_dependence_search(tiny, cert.lower_bound - 1);
  REQUIRE(below.complete);
  REQUIRE_FALSE(below.support.has_value());
}

TEST_CASE("minimum-weight counts match the closed forms") {
  const EvaluationCode c34 = one_point_dual(curve3(), 4);
  const WeightCount w6 = count_min_weight(c34, 6, &env3().table);
  REQUIRE(w6.support_count == 6048);
  REQUIRE(w6.codeword_count == 4402944);
  REQUIRE(w6.formula_value == 4402944);
  REQUIRE(w6.formula_match);
  REQUIRE(w6.one_dimensional_all);
  REQUIRE(w6.candidates_checked == 6048);
  REQUIRE(w6.codeword_count % (728) == 0);

  const EvaluationCode c35 = one_point_dual(curve3(), 5);
  const WeightCount w7 = count_min_weight(c35, 7, &env3().table);
  REQUIRE(w7.support_count == 864);
  REQUIRE(w7.codeword_count == 628992);
  REQUIRE(w7.formula_match);

  // below the secant order the subfield four-point lines add supports the
  // closed form does not count; the mismatch is reported, not asserted away
  const EvaluationCode c32 = one_point_dual(curve3(), 2);
  const WeightCount w4 = count_min_weight(c32, 4, &env3().table);
  REQUIRE(w4.support_count == 30294);
  REQUIRE(w4.formula_value == 22014720);
  REQUIRE(w4.codeword_count == 22054032);
  REQUIRE_FALSE(w4.formula_match);
  REQUIRE_FALSE(w4.notes.empty());

  REQUIRE_THROWS_AS(count_min_weight(c34, 1, &env3().table),
                    std::invalid_argument);
}

TEST_CASE("tiny weight distributions enumerate every codeword") {
  const std::vector<std::uint32_t> B3(
      env2().table.max_secants[0].point_idx.begin(),
      env2().table.max_secants[0].point_idx.end());
  const EvaluationCode sec3 = build_code_at(curve2(), B3, 1, ZeroDimScheme{});
  REQUIRE(sec3.k == 2);
  const WeightDistribution wd = weight_distribution_tiny(sec3);
  REQUIRE(wd.primal_words == 4096);
  REQUIRE(wd.primal.at(0) == 1);
  REQUIRE(wd.primal.at(2) == 189);
  REQUIRE(wd.primal.at(3) == 3906);
  std::uint64_t total = 0;
  for (const auto& [w, c] : wd.primal) total += c;
  REQUIRE(total == 4096);
  REQUIRE(wd.dual.has_value());
  REQUIRE(wd.dual_words == 64);
  REQUIRE(wd.dual->at(0) == 1);
  REQUIRE(wd.dual->at(3) == 63);

  // one basis form: all nonzero words share the support of that form
  const EvaluationCode flat = build_code_at(
      curve2(), std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5, 6, 7, 8}, 0,
      ZeroDimScheme{});
  REQUIRE(flat.k == 1);
  const WeightDistribution fd = weight_distribution_tiny(flat);
  REQUIRE(fd.primal.at(0) == 1);
  REQUIRE(fd.primal.at(9) == 63);

  const EvaluationCode c34 = one_point_dual(curve3(), 4);
  REQUIRE_THROWS_AS(weight_distribution_tiny(c34), std::runtime_error);
}

TEST_CASE("generalized weights rise within the Singleton bound") {
  const EvaluationCode tiny = tiny_code();
  const std::size_t n = tiny.length();
  const std::size_t dual_dim = n - tiny.k;
  REQUIRE(dual_dim == 6);

  std::vector<std::size_t> values;
  for (std::size_t v = 1; v <= 3; ++v) {
    const HierarchyEntry e = ghw(tiny, v, n, &env2().table);
    INFO("v = " << v);
    REQUIRE(e.value.has_value());
    REQUIRE(e.support_exact);
    REQUIRE(*e.value <= tiny.k + v);  // Singleton bound for the dual code
    values.push_back(*e.value);

    // brute-force oracle: smallest support with dimension >= v
    std::optional<std::size_t> oracle;
    for (std::size_t s = 1; s <= n && !oracle; ++s) {
      std::vector<std::uint32_t> pick(s);
      for (std::size_t i = 0; i < s; ++i)
        pick[i] = static_cast<std::uint32_t>(i);
      do {
        if (dual_support_space(tiny, pick).dimension >= v) {
          oracle = s;
          break;
        }
      } while (detail::next_combination(pick, static_cast<std::uint32_t>(n)));
    }
    REQUIRE(oracle == e.value);

    const DualSupportSpace dual = dual_support_space(tiny, e.witness);
    REQUIRE(dual.dimension >= v);
  }
  REQUIRE(values == std::vector<std::size_t>{3, 5, 6});
  REQUIRE(std::is_sorted(values.begin(), values.end()));
  REQUIRE(std::adjacent_find(values.begin(), values.end()) == values.end());

  // d_1 of the one-point instance equals the certified minimum distance
  const HierarchyEntry h1 = ghw(tiny, 1, n, &env2().table);
  const DistanceCertificate cert = certified_min_distance(tiny, env2());
  REQUIRE(h1.value == cert.lower_bound);

  // a large code cannot be scanned: upper bound only, with a budget note
  const EvaluationCode c32 = one_point_dual(curve3(), 2);
  const HierarchyEntry big = ghw(c32, 2, 6, &env3().table, 1000);
  REQUIRE(big.upper_bound == 5);  // five points of one secant span dimension 2
  REQUIRE_FALSE(big.value.has_value());
  REQUIRE_FALSE(big.notes.empty());

  REQUIRE_THROWS_AS(ghw(tiny, 0, n, &env2().table), std::invalid_argument);
  REQUIRE_THROWS_AS(ghw(tiny, 7, n, &env2().table), std::invalid_argument);

  const std::vector<HierarchyEntry> chain =
      weight_hierarchy(tiny, 3, n, &env2().table);
  REQUIRE(chain.size() == 3);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    REQUIRE(*chain[i].value < *chain[i + 1].value);
}

TEST_CASE("conic support reports quote the threshold") {
  const EvaluationCode c36 = one_point_dual(curve3(), 6);

  const ConicSupportReport h0 = conic_support_report(c36, 0, &env3().table);
  REQUIRE(h0.found);
  REQUIRE(h0.b_cap_d == 14);
  REQUIRE(h0.deg_d_cap_e == 0);
  REQUIRE(h0.threshold == 11);  // 2d + h - 1 with an empty vanishing scheme
  REQUIRE(h0.minimal_size == 0);

  const ConicSupportReport h1 = conic_support_report(c36, 1, &env3().table);
  REQUIRE(h1.found);
  REQUIRE(h1.b_cap_d == 14);
  REQUIRE(h1.threshold == 12);
  REQUIRE(h1.minimal_size == 14);  // the full union of the two secants
  REQUIRE(h1.witness.size() == 14);
  const DualSupportSpace dual = dual_support_space(c36, h1.witness);
  REQUIRE(dual.dimension >= 1);
}
