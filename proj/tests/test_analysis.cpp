#include <doctest.h>

#include "test_util.hpp"

using namespace epm;
using namespace testutil;

TEST_CASE("random patterns decompose into breaks") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 20; ++it) {
    const Index k = 1 + static_cast<Index>(rng() % 3);
    Str p = random_str(rng, 64 * k + static_cast<Index>(rng() % 200), 4);
    Decomposition d = analyze(p, k);
    CHECK(d.kind == Decomposition::Kind::Breaks);
    CHECK(static_cast<Index>(d.breaks.size()) == 2 * k);
    CHECK(d.regions.empty());
    CHECK(verify_decomposition(p, k, d));
  }
}

TEST_CASE("a perturbed power is approximately periodic") {
  std::mt19937_64 rng(37);
  for (int it = 0; it < 20; ++it) {
    const Index k = 1 + static_cast<Index>(rng() % 3);
    Str p = apply_random_edits(power_prefix(from_bytes("abc"), 400 * k), static_cast<Index>(rng() % (2 * k + 1)), 3, rng);
    Decomposition d = analyze(p, k);
    CHECK(d.kind == Decomposition::Kind::ApproxPeriod);
    CHECK(per(d.q) == 3);
    CHECK(verify_decomposition(p, k, d));
  }
}

TEST_CASE("bursty periodic patterns give regions") {
  std::mt19937_64 rng(41);
  int regions = 0;
  for (int it = 0; it < 400 && regions < 20; ++it) {
    const Index k = 1 + static_cast<Index>(rng() % 3);
    Str p = region_pattern(rng, 64 * k * (2 + static_cast<Index>(rng() % 4)), k);
    Decomposition d = analyze(p, k);
    CHECK(verify_decomposition(p, k, d));
    if (d.kind != Decomposition::Kind::Regions) continue;
    ++regions;
    CHECK(d.breaks.empty());
    Decomposition bad = d;
    bad.regions[0].k += 1;
    CHECK_FALSE(verify_decomposition(p, k, bad));
  }
  CHECK(regions >= 5);
}

TEST_CASE("tampered decompositions are rejected") {
  std::mt19937_64 rng(43);
  Str p = random_str(rng, 256, 4);
  Decomposition d = analyze(p, 2);
  REQUIRE(d.kind == Decomposition::Kind::Breaks);
  Decomposition fewer = d;
  fewer.breaks.pop_back();
  CHECK_FALSE(verify_decomposition(p, 2, fewer));
  Decomposition overlap = d;
  overlap.breaks[1] = overlap.breaks[0];
  CHECK_FALSE(verify_decomposition(p, 2, overlap));
  Decomposition wrongKind = d;
  wrongKind.kind = Decomposition::Kind::ApproxPeriod;
  wrongKind.q = from_bytes("ab");
  CHECK_FALSE(verify_decomposition(p, 2, wrongKind));
  CHECK_THROWS_AS(analyze(p, 40), Error);
}

TEST_CASE("delta sign and region search agree with brute force") {
  std::mt19937_64 rng(47);
  const Index k = 1, m = 16, block = 2;
  for (int it = 0; it < 60; ++it) {
    Str q = random_str(rng, 1 + static_cast<Index>(rng() % 2), 2);
    if (!is_primitive(q)) continue;
    Str p = apply_random_edits(power_prefix(q, m), static_cast<Index>(rng() % 5), 2, rng);
    p.resize(static_cast<std::size_t>(m), 0);
    const Index j = static_cast<Index>(rng() % 4);
    std::optional<Index> want;
    for (Index j2 = j + block + 1; j2 <= m; ++j2) {
      const Index dist = naive_ed_periodic(View(p).subspan(j, j2 - j), q, false);
      const Index budget = region_budget(k, j2 - j, m);
      const int sign = dist < budget ? -1 : (dist == budget ? 0 : 1);
      CHECK(delta_sign(p, j, j2, q, k) == sign);
      if (!want && sign == 0) want = j2;
    }
    CHECK(find_region_prefix(p, j, q, k) == want);
  }
}

TEST_CASE("prefix profile equals per-prefix distances") {
  std::mt19937_64 rng(53);
  for (int it = 0; it < 40; ++it) {
    Str q = random_str(rng, 1 + static_cast<Index>(rng() % 3), 2);
    Str s = apply_random_edits(power_prefix(q, 12), static_cast<Index>(rng() % 4), 2, rng);
    const Index K = 3;
    auto prof = periodic_prefix_profile(s, q, K);
    for (Index len = 0; len <= static_cast<Index>(s.size()); ++len)
      CHECK(prof[len] == std::min(naive_ed_periodic(View(s).subspan(0, len), q, false), K + 1));
  }
}
