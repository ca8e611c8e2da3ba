#include <doctest.h>

#include "test_util.hpp"

using namespace epm;
using namespace testutil;

TEST_CASE("banded matcher equals the oracle") {
  std::mt19937_64 rng(59);
  for (int it = 0; it < 400; ++it) {
    Str p = random_str(rng, static_cast<Index>(rng() % 8), 2 + static_cast<Symbol>(rng() % 2));
    Str t = random_str(rng, static_cast<Index>(rng() % 20), 2 + static_cast<Symbol>(rng() % 2));
    const Index k = static_cast<Index>(rng() % 4);
    auto want = naive_occurrences(p, t, k);
    CHECK(same_occurrences(match_banded(p, t, k), want));
    CHECK(same_occurrences(match(p, t, k), want));
    CHECK(same_occurrences(match(p, t, k, MatchOptions{true, 3}), want));
    CHECK(same_occurrences(match(p, t, k, MatchOptions{false, 1}), want, false));
  }
}

TEST_CASE("match on the two letter fixture") {
  auto occ = match(from_bytes("ab"), from_bytes("axb"), 1);
  bool found = false;
  for (auto& o : occ) found |= o.t == 0 && o.t2 == 3 && o.cost == 1;
  CHECK(found);
  CHECK_THROWS_AS(match(from_bytes("ab"), from_bytes("ab"), -1), Error);
}

TEST_CASE("candidate sets cover every occurrence") {
  std::mt19937_64 rng(61);
  for (int it = 0; it < 120; ++it) {
    Instance in = pipeline_instance(rng, 200, 800);
    Decomposition d = analyze(in.p, in.k);
    CandidateSet h = candidates(in.p, in.t, in.k, d);
    auto want = match_banded(in.p, in.t, in.k);
    for (auto& o : want) CHECK(h.contains(o.t));
    CHECK(same_occurrences(verify_candidates(in.p, in.t, in.k, h), want));
    CHECK(same_occurrences(match(in.p, in.t, in.k), want));
  }
}

TEST_CASE("masked verification equals direct verification") {
  std::mt19937_64 rng(67);
  for (int it = 0; it < 60; ++it) {
    Instance in = pipeline_instance(rng, 200, 600);
    Decomposition d = analyze(in.p, in.k);
    CandidateSet h = candidates(in.p, in.t, in.k, d);
    CHECK(same_occurrences(verify_candidates_masked(in.p, in.t, in.k, h), verify_candidates(in.p, in.t, in.k, h)));
  }
  Str p = random_str(rng, 64, 3), t = random_str(rng, 300, 3);
  CHECK(verify_candidates_masked(p, t, 2, CandidateSet(300)).empty());
  CHECK(verify_candidates(p, t, 2, CandidateSet(300)).empty());
}

TEST_CASE("candidate set bookkeeping") {
  CandidateSet h(100);
  h.add(-5, 3, {Provenance::Break, 0});
  h.add(2, 10, {Provenance::Break, 0});
  h.add(50, 200, {Provenance::Region, 1});
  h.add(11, 12, {Provenance::Periodic, 0});
  CHECK(h.items.size() == 3);
  CHECK(h.ranges() == std::vector<std::pair<Index, Index>>{{0, 12}, {50, 100}});
  CHECK(h.size() == 13 + 51);
  CHECK(h.contains(0));
  CHECK(h.contains(100));
  CHECK_FALSE(h.contains(13));
  CHECK(h.buckets(50) == std::vector<Index>{0, 1, 2});
  CHECK(CandidateSet::all(9).size() == 10);
}

TEST_CASE("periodic candidates are empty without q in the text") {
  Str q = from_bytes("ab");
  Str r = power_prefix(q, 400);
  Str t(1000, 'z');
  CandidateSet h = candidates_periodic(r, t, 1, q, 0, 8);
  CHECK(h.size() == 0);
}

TEST_CASE("threaded output is deterministic") {
  std::mt19937_64 rng(71);
  Instance in = pipeline_instance(rng, 300, 3000);
  auto a = match(in.p, in.t, in.k, MatchOptions{true, 1});
  auto b = match(in.p, in.t, in.k, MatchOptions{true, 4});
  CHECK(same_occurrences(a, b));
}
