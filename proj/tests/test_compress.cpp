#include <doctest.h>

#include "test_util.hpp"

using namespace epm;
using namespace testutil;

namespace {

// Fewest phrases of any left-to-right parse into literals and previous factors.
Index min_parse(View x) {
  const Index n = static_cast<Index>(x.size());
  std::vector<Index> best(static_cast<std::size_t>(n + 1), std::numeric_limits<Index>::max() / 2);
  best[0] = 0;
  for (Index i = 0; i < n; ++i) {
    best[i + 1] = std::min(best[i + 1], best[i] + 1);
    for (Index len = 1; i + len <= n; ++len) {
      bool found = false;
      for (Index s = 0; s < i && !found; ++s) {
        bool ok = true;
        for (Index q = 0; q < len && ok; ++q) ok = x[s + q] == x[i + q];
        found = ok;
      }
      if (!found) break;
      best[i + len] = std::min(best[i + len], best[i] + 1);
    }
  }
  return best[n];
}

}  // namespace

TEST_CASE("greedy parse of the worked example") {
  auto f = lz77(from_bytes("abacabcabcaaaab"));
  REQUIRE(f.size() == 8);
  std::vector<LZPhrase> want = {{true, 'a', 0, 0}, {true, 'b', 0, 0}, {false, 0, 0, 1}, {true, 'c', 0, 0},
                                {false, 0, 0, 2},  {false, 0, 3, 5}, {false, 0, 10, 3}, {false, 0, 8, 1}};
  CHECK(f == LZFactorization(want.begin(), want.end()));
  CHECK(to_bytes(lz_expand(f)) == "abacabcabcaaaab");
}

TEST_CASE("greedy parse is minimal and expands back") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 300; ++it) {
    Str x = random_str(rng, static_cast<Index>(rng() % 24), 1 + static_cast<Symbol>(rng() % 3));
    auto f = lz77(x);
    CHECK(lz_expand(f) == x);
    CHECK(static_cast<Index>(f.size()) == min_parse(x));
  }
  LZFactorization bad{{false, 0, 0, 2}};
  CHECK_THROWS_AS(lz_expand(bad), Error);
}

TEST_CASE("bounded prefixes") {
  std::mt19937_64 rng(19);
  for (int it = 0; it < 300; ++it) {
    Str x = random_str(rng, 1 + static_cast<Index>(rng() % 40), 1 + static_cast<Symbol>(rng() % 3));
    const Index start = static_cast<Index>(rng() % x.size());
    const Index z = 1 + static_cast<Index>(rng() % 6);
    for (Direction dir : {Direction::Forward, Direction::Reversed}) {
      Str y = dir == Direction::Forward ? Str(x.begin() + start, x.end()) : reversed(View(x).subspan(0, start + 1));
      Index want = 0;
      for (Index len = 0; len <= static_cast<Index>(y.size()); ++len)
        if (static_cast<Index>(lz77(View(y).subspan(0, len)).size()) <= z) want = len;
      LZBounded got = lz_bounded_prefix(x, start, z, dir);
      CHECK(got.extent == want);
      CHECK(lz_expand(got.phrases) == Str(y.begin(), y.begin() + want));
    }
  }
  CHECK_THROWS_AS(lz_bounded_prefix(from_bytes("ab"), 0, 0, Direction::Forward), Error);
}

TEST_CASE("self edit distance") {
  CHECK(selfed(from_bytes("aa")).cost == 2);
  CHECK(selfed(from_bytes("")).cost == 0);
  for (Index len = 0; len <= 8; ++len)
    for (const Str& s : all_binary(len)) {
      SelfEdResult r = selfed(s);
      CHECK(r.cost == naive_selfed(s));
      CHECK(alignment_cost(r.witness, s, s) == r.cost);
      for (std::size_t i = 1; i < r.witness.points.size(); ++i) {
        const Point& a = r.witness.points[i - 1];
        const Point& b = r.witness.points[i];
        CHECK_FALSE((a.x == a.y && b.x == a.x + 1 && b.y == a.y + 1));
      }
      for (Index bound = 0; bound <= 6; ++bound) CHECK(selfed_bounded(s, bound) == std::min(r.cost, bound + 1));
    }
}

TEST_CASE("prefix profile of the self edit distance") {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 600; ++it) {
    Str x = random_str(rng, static_cast<Index>(rng() % 40), 1 + static_cast<Symbol>(rng() % 4));
    const Index bound = static_cast<Index>(rng() % 12);
    std::int64_t cells = 0;
    auto prof = selfed_prefix_profile(x, bound, &cells);
    CHECK((cells > 0) == (prof.size() > 1));
    for (Index len = 0; len < static_cast<Index>(prof.size()); ++len) {
      CHECK(prof[len] == selfed_bounded(View(x).subspan(0, len), bound));
      if (len + 1 < static_cast<Index>(prof.size())) CHECK(prof[len] <= bound);
    }
    if (static_cast<Index>(prof.size()) <= static_cast<Index>(x.size())) CHECK(prof.back() == bound + 1);
  }
}
