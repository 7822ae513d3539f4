#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "gk/gf.hpp"

using gk::felt;
using gk::Field;

namespace {

// Independent irreducibility oracle: f is irreducible over GF(p) iff
// t^(p^k) == t (mod f) and gcd(t^(p^(k/r)) - t, f) = 1 for every prime r | k.
// Deliberately separate from the trial-division route inside Field.
using opoly = std::vector<long long>;

opoly omul(const opoly& a, const opoly& b, long long p, const opoly& mod) {
  if (a.empty() || b.empty()) return {};
  opoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  // reduce by monic mod, top degree down
  const size_t dm = mod.size() - 1;
  for (size_t i = r.size(); i-- > dm;) {
    long long c = r[i];
    if (c == 0) continue;
    size_t shift = i - dm;
    for (size_t j = 0; j < mod.size(); ++j) r[shift + j] = ((r[shift + j] - c * mod[j]) % p + p) % p;
  }
  if (r.size() > dm) r.resize(dm);
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

opoly opow_t(long long p, long long e_base, int e_exp, const opoly& mod) {
  // t^(e_base^e_exp) mod `mod` via repeated e_base-th powering
  opoly x = {0, 1};
  for (int i = 0; i < e_exp; ++i) {
    opoly acc = {1};
    long long e = e_base;
    opoly base = x;
    while (e) {
      if (e & 1) acc = omul(acc, base, p, mod);
      base = omul(base, base, p, mod);
      e >>= 1;
    }
    x = acc;
  }
  return x;
}

opoly ogcd(opoly a, opoly b, long long p) {
  auto trim = [](opoly& v) { while (!v.empty() && v.back() == 0) v.pop_back(); };
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b with b made monic
    long long lead = b.back();
    long long inv = 1;
    for (long long x = 1; x < p; ++x)
      if (lead * x % p == 1) inv = x;
    opoly bm(b.size());
    for (size_t i = 0; i < b.size(); ++i) bm[i] = b[i] * inv % p;
    while (a.size() >= bm.size()) {
      long long c = a.back();
      size_t shift = a.size() - bm.size();
      for (size_t j = 0; j < bm.size(); ++j) a[shift + j] = ((a[shift + j] - c * bm[j]) % p + p) % p;
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a;
}

bool oracle_irreducible(long long p, const opoly& f) {
  int k = static_cast<int>(f.size()) - 1;
  if (k == 1) return true;
  opoly tpk = opow_t(p, p, k, f);
  opoly t_only = omul({0, 1}, {1}, p, f);
  if (tpk != t_only) return false;
  std::vector<int> primes;
  int n = k;
  for (int d = 2; d <= n; ++d)
    while (n % d == 0) {
      if (primes.empty() || primes.back() != d) primes.push_back(d);
      n /= d;
    }
  for (int r : primes) {
    opoly x = opow_t(p, p, k / r, f);
    // x - t
    opoly diff = x;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    while (!diff.empty() && diff.back() == 0) diff.pop_back();
    opoly g = ogcd(diff, f, p);
    if (g.size() > 1) return false;
  }
  return true;
}

felt oracle_first_irreducible_encoding(long long p, int k) {
  long long count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  for (long long c = 0; c < count; ++c) {
    opoly f(k + 1, 0);
    long long v = c;
    for (int i = 0; i < k; ++i) {
      f[i] = v % p;
      v /= p;
    }
    f[k] = 1;
    if (oracle_irreducible(p, f)) {
      felt e = 0;
      for (size_t i = f.size(); i-- > 0;) e = e * p + f[i];
      return e;
    }
  }
  return 0;
}

}  // namespace

TEST_CASE("deterministic modulus choice") {
  CHECK(Field(2, 2).modulus_encoded() == 7);
  CHECK(Field(2, 6).modulus_encoded() == 67);
  CHECK(Field(3, 1).modulus_encoded() == 3);
  CHECK(Field(3, 2).modulus_encoded() == 10);
  CHECK(Field(2, 6).header() == "2 6 67");

  // full independent re-derivation of the sieve for the small cases
  CHECK(oracle_first_irreducible_encoding(2, 2) == 7);
  CHECK(oracle_first_irreducible_encoding(2, 6) == 67);
  CHECK(oracle_first_irreducible_encoding(3, 2) == 10);

  for (auto [p, k] : std::vector<std::pair<long long, int>>{{2, 6}, {3, 6}, {7, 6}, {2, 12}, {3, 3}}) {
    Field F(static_cast<std::uint64_t>(p), static_cast<std::uint32_t>(k));
    opoly f(F.modulus().begin(), F.modulus().end());
    CHECK(oracle_irreducible(p, f));
    CHECK(F.modulus_encoded() == oracle_first_irreducible_encoding(p, k));
  }
}

TEST_CASE("GF(4) multiplication table") {
  Field F(2, 2);
  CHECK(F.mul(2, 2) == 3);
  CHECK(F.mul(2, 3) == 1);
  CHECK(F.mul(3, 3) == 2);
  CHECK(F.add(2, 3) == 1);
  for (felt a = 0; a < 4; ++a) CHECK(F.add(a, a) == 0);
  CHECK(F.inv(2) == 3);
  CHECK(F.inv(3) == 2);
}

TEST_CASE("encode decode round trip") {
  Field F9(3, 2);
  CHECK(F9.encode({1, 2}) == 7);
  CHECK(F9.decode(7) == std::vector<std::uint32_t>{1, 2});
  for (auto pk : std::vector<std::pair<int, int>>{{3, 2}, {2, 6}, {2, 12}}) {
    Field F(pk.first, pk.second);
    for (felt a = 0; a < F.size(); ++a) CHECK(F.encode(F.decode(a)) == a);
  }
  CHECK_THROWS_AS(F9.decode(9), std::invalid_argument);
  CHECK_THROWS_AS(F9.encode({1}), std::invalid_argument);
  CHECK_THROWS_AS(F9.encode({1, 3}), std::invalid_argument);
}

TEST_CASE("field axioms sampled") {
  std::mt19937_64 rng(0);
  for (auto pk : std::vector<std::pair<int, int>>{{2, 6}, {3, 6}, {7, 6}}) {
    Field F(pk.first, pk.second);
    std::uniform_int_distribution<felt> d(0, F.size() - 1);
    for (int i = 0; i < 10000; ++i) {
      felt a = d(rng), b = d(rng), c = d(rng);
      CHECK(F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c));
      CHECK(F.add(a, F.add(b, c)) == F.add(F.add(a, b), c));
      CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      CHECK(F.mul(a, b) == F.mul(b, a));
      CHECK(F.add(a, b) == F.add(b, a));
      CHECK(F.add(a, F.neg(a)) == 0);
      CHECK(F.mul(a, 1) == a);
      if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
    }
  }
}

TEST_CASE("inverse exhaustive on mid-size fields") {
  for (auto pk : std::vector<std::pair<int, int>>{{3, 6}, {2, 12}}) {
    Field F(pk.first, pk.second);
    for (felt a = 1; a < F.size(); ++a) {
      felt b = F.inv(a);
      REQUIRE(F.mul(a, b) == 1);
    }
  }
  CHECK_THROWS_AS(Field(2, 2).inv(0), std::invalid_argument);
  CHECK_THROWS_AS(Field(2, 2).div(1, 0), std::invalid_argument);
}

TEST_CASE("frobenius") {
  Field F4(2, 2);
  CHECK(F4.frobenius(2, 1) == 3);
  CHECK(F4.frobenius(3, 1) == 2);

  Field F(2, 6);
  int fixed1 = 0, fixed2 = 0, fixed3 = 0;
  for (felt a = 0; a < F.size(); ++a) {
    CHECK(F.frobenius(a, 6) == a);
    CHECK(F.frobenius(F.frobenius(a, 1), -1) == a);
    if (F.frobenius(a, 1) == a) ++fixed1;
    if (F.frobenius(a, 2) == a) ++fixed2;
    if (F.frobenius(a, 3) == a) ++fixed3;
  }
  CHECK(fixed1 == 2);
  CHECK(fixed2 == 4);
  CHECK(fixed3 == 8);

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<felt> d(0, F.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    felt a = d(rng), b = d(rng);
    CHECK(F.frobenius(F.add(a, b), 1) == F.add(F.frobenius(a, 1), F.frobenius(b, 1)));
    CHECK(F.frobenius(F.mul(a, b), 1) == F.mul(F.frobenius(a, 1), F.frobenius(b, 1)));
  }
}

TEST_CASE("subfield membership") {
  Field F(2, 6);
  int c1 = 0, c2 = 0, c3 = 0, c6 = 0;
  for (felt a = 0; a < F.size(); ++a) {
    if (F.in_subfield(1, a)) ++c1;
    if (F.in_subfield(2, a)) ++c2;
    if (F.in_subfield(3, a)) ++c3;
    if (F.in_subfield(6, a)) ++c6;
  }
  CHECK(c1 == 2);
  CHECK(c2 == 4);
  CHECK(c3 == 8);
  CHECK(c6 == 64);
  CHECK_THROWS_AS(F.in_subfield(4, 0), std::invalid_argument);

  Field F729(3, 6);
  int c = 0;
  for (felt a = 0; a < F729.size(); ++a)
    if (F729.in_subfield(2, a)) ++c;
  CHECK(c == 9);
}

TEST_CASE("embedding is a ring homomorphism") {
  Field F4(2, 2), F64(2, 6);
  gk::Embedding e(F4, F64);
  felt r = e.root();
  // r is a root of t^2 + t + 1 and the smallest encoded one
  CHECK(F64.add(F64.add(F64.mul(r, r), r), 1) == 0);
  for (felt x = 0; x < r; ++x) CHECK(F64.add(F64.add(F64.mul(x, x), x), 1) != 0);
  std::set<felt> images;
  for (felt a = 0; a < 4; ++a) {
    images.insert(e(a));
    CHECK(F64.in_subfield(2, e(a)));
    for (felt b = 0; b < 4; ++b) {
      CHECK(e(F4.mul(a, b)) == F64.mul(e(a), e(b)));
      CHECK(e(F4.add(a, b)) == F64.add(e(a), e(b)));
    }
  }
  CHECK(images.size() == 4);
  CHECK(e(0) == 0);
  CHECK(e(1) == 1);

  Field F9(3, 2), F729(3, 6);
  gk::Embedding e9(F9, F729);
  for (felt a = 0; a < 9; ++a)
    for (felt b = 0; b < 9; ++b) {
      CHECK(e9(F9.mul(a, b)) == F729.mul(e9(a), e9(b)));
      CHECK(e9(F9.add(a, b)) == F729.add(e9(a), e9(b)));
    }
  CHECK_THROWS_AS(gk::Embedding(F4, F729), std::invalid_argument);
  Field F8(2, 3);
  CHECK_THROWS_AS(gk::Embedding(F8, F4), std::invalid_argument);
}

TEST_CASE("primitive element") {
  Field F(2, 6);
  felt g = F.primitive_element();
  std::set<felt> seen;
  felt acc = 1;
  for (int i = 0; i < 63; ++i) {
    seen.insert(acc);
    acc = F.mul(acc, g);
  }
  CHECK(acc == 1);
  CHECK(seen.size() == 63);
  CHECK(!F.in_subfield(1, g));
  CHECK(!F.in_subfield(2, g));
  CHECK(!F.in_subfield(3, g));
}

TEST_CASE("construction rejects bad parameters") {
  CHECK_THROWS_AS(Field(4, 2), std::invalid_argument);
  CHECK_THROWS_AS(Field(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(Field(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Field(2, 64), std::invalid_argument);
  CHECK_THROWS_AS(Field(2, 0), std::invalid_argument);
  // explicit reducible modulus
  CHECK_THROWS_AS(Field(2, 2, {1, 0, 1}), std::invalid_argument);  // (t+1)^2
  CHECK_THROWS_AS(Field(2, 2, {0, 1, 1}), std::invalid_argument);  // t(t+1)
  CHECK_THROWS_AS(Field(2, 2, {1, 1}), std::invalid_argument);     // wrong degree
}
