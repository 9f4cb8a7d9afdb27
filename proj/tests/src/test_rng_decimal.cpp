#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "cartelscreen/decimal.hpp"
#include "cartelscreen/errors.hpp"
#include "cartelscreen/parallel.hpp"
#include "cartelscreen/rng.hpp"

using namespace cartelscreen;

TEST_CASE("splitmix64 matches the reference stream") {
  // first outputs of the published reference implementation seeded with 0
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(splitmix64(0)) != splitmix64(0));
}

TEST_CASE("seed_tag is FNV-1a") {
  CHECK(seed_tag("") == 0xcbf29ce484222325ULL);
  CHECK(seed_tag("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(seed_tag("rep") != seed_tag("cv"));
}

TEST_CASE("derive_seed composes left to right") {
  const std::uint64_t s = 42;
  CHECK(derive_seed(s, 1, 2) == derive_seed(derive_seed(s, 1), 2));
  CHECK(derive_seed(s, 1, 2) != derive_seed(s, 2, 1));
  CHECK(derive_seed(s, seed_tag("rep"), 0) != derive_seed(s, seed_tag("rep"), 1));
}

TEST_CASE("uniform stays in [0,1) and is deterministic") {
  Rng a(7), b(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
  }
}

TEST_CASE("uniform_int is bounded and hits every value") {
  Rng rng(11);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t v = rng.uniform_int(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("bernoulli(1) is always true, bernoulli(0) always false") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) CHECK(rng.bernoulli(1.0));
  for (int i = 0; i < 100; ++i) CHECK(!rng.bernoulli(0.0));
}

TEST_CASE("normal draws have roughly the right first two moments") {
  Rng rng(5);
  const int n = 20000;
  double sum = 0, ss = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    ss += x * x;
  }
  const double mean = sum / n;
  const double var = ss / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("shuffle permutes, preserving the multiset") {
  Rng rng(9);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  rng.shuffle(w);
  CHECK(w != v);  // 50! permutations; identity would be astonishing
  std::sort(w.begin(), w.end());
  CHECK(w == v);
}

TEST_CASE("sample_without_replacement returns k sorted distinct indices") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = rng.sample_without_replacement(10, 4);
    REQUIRE(s.size() == 4);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i] < 10);
      if (i) CHECK(s[i] > s[i - 1]);
    }
  }
  const auto all = rng.sample_without_replacement(5, 5);
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("decimal sum is exact and order independent") {
  DecimalSum a;
  a.add("0.1");
  a.add("0.2");
  CHECK(a.value() == 0.3);  // exact decimal 0.3, then one rounding to double

  DecimalSum fwd, rev;
  const std::vector<std::string> qs = {"10.55", "3.1", "0.001", "7", "2.499"};
  for (const auto& q : qs) fwd.add(q);
  for (auto it = qs.rbegin(); it != qs.rend(); ++it) rev.add(*it);
  CHECK(fwd.value() == rev.value());
  CHECK(fwd.value() == doctest::Approx(23.15).epsilon(1e-15));
}

TEST_CASE("decimal sum handles exponents and signs") {
  DecimalSum s;
  s.add("1.2e3");
  s.add("-2e2");
  CHECK(s.value() == 1000.0);
  DecimalSum t;
  t.add("2.5e-1");
  t.add("0.75");
  CHECK(t.value() == 1.0);
}

TEST_CASE("decimal parse rejects malformed input") {
  __int128 v;
  int scale;
  CHECK_THROWS_AS(parse_decimal("", v, scale), InputError);
  CHECK_THROWS_AS(parse_decimal("abc", v, scale), InputError);
  CHECK_THROWS_AS(parse_decimal("1.2.3", v, scale), InputError);
  CHECK_THROWS_AS(parse_decimal("1e", v, scale), InputError);
  CHECK_NOTHROW(parse_decimal("-0.5", v, scale));
}

TEST_CASE("format_double round-trips") {
  for (const double x : {0.1, 1.0 / 3.0, 123456.789, -2.5e-8, 0.0, 42.0}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("parallel_for covers every index once, any job count") {
  const std::size_t n = 200;
  for (const int jobs : {1, 2, 5}) {
    std::vector<std::atomic<int>> hits(n);
    parallel_for(n, jobs, [&](std::size_t i) { hits[i]++; });
    for (std::size_t i = 0; i < n; ++i) CHECK(hits[i].load() == 1);
  }
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(
      parallel_for(10, 3,
                   [](std::size_t i) {
                     if (i == 4) throw InputError("boom");
                   }),
      InputError);
}
