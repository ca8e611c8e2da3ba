// Acceptance checks. Each criterion prints exactly one [PASS]/[FAIL] line
// followed by optional indented detail lines.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "test_util.hpp"

using namespace epm;
using namespace testutil;

namespace {

#ifndef EPM_BUILD_TYPE
#define EPM_BUILD_TYPE "unknown"
#endif

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << v;
  return os.str();
}

// Instances of the exhaustive and randomized equivalence checks, shared with
// the structural audit which replays the same encodings.
struct Case {
  Str p, t;
  Index k;
};

void for_each_exhaustive(const std::function<void(const Case&)>& f) {
  for (Index lp = 1; lp <= 6; ++lp)
    for (const Str& p : all_binary(lp))
      for (Index lt = 0; lt <= 9; ++lt)
        for (const Str& t : all_binary(lt))
          for (Index k : {1, 2}) f({p, t, k});
}

std::vector<Case> randomized_cases() {
  std::mt19937_64 rng(20240601);
  std::vector<Case> out;
  for (int it = 0; it < 1000; ++it) {
    const Index m = 1 + static_cast<Index>(rng() % 64);
    const Index n = static_cast<Index>(rng() % 97);
    const Symbol sigma = 1 + static_cast<Symbol>(rng() % 4);
    const Index k = 1 + static_cast<Index>(rng() % 8);
    Case c{{}, {}, k};
    if (rng() % 2) {
      c.p = random_str(rng, m, sigma);
      c.t = random_str(rng, n, sigma);
    } else {
      // Approximately periodic pair, which exercises structured windows.
      Str q = random_str(rng, 1 + static_cast<Index>(rng() % 4), sigma);
      c.p = apply_random_edits(power_prefix(q, m), static_cast<Index>(rng() % (k + 1)), sigma, rng);
      if (c.p.empty() || c.p.size() > 64) c.p = power_prefix(q, m);
      c.t = apply_random_edits(power_prefix(q, n), static_cast<Index>(rng() % (2 * k + 1)), sigma, rng);
      if (c.t.size() > 96) c.t.resize(96);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Checks one instance of the oracle equivalence in both alphabet modes.
bool equivalent(const Case& c, std::string* why) {
  auto want = naive_occurrences(c.p, c.t, c.k);
  if (!same_occurrences(match_banded(c.p, c.t, c.k), want)) {
    *why = "match_banded differs";
    return false;
  }
  if (!same_occurrences(occ_edits_oracle(c.p, c.t, c.k), want)) {
    *why = "occ_edits_oracle differs from the independent oracle";
    return false;
  }
  EncodeOptions chars;
  chars.chars = true;
  Sketch sk = deserialize(serialize(encode(c.p, c.t, c.k, chars)));
  auto got = decode(sk);
  if (!same_occurrences(got, want)) {
    *why = "decode(encode) differs with raw characters";
    return false;
  }
  for (const auto& o : got) {
    Alignment a = reconstruct_alignment(o.edits, Span{0, static_cast<Index>(c.p.size())}, Span{o.t, o.t2});
    if (edit_info(a, c.p, c.t) != o.edits || alignment_cost(a, c.p, c.t) != o.cost) {
      *why = "edit information does not round-trip";
      return false;
    }
  }
  if (!same_occurrences(decode(deserialize(serialize(encode(c.p, c.t, c.k)))), reduced_oracle(c.p, c.t, c.k))) {
    *why = "decode(encode) differs with the reduced alphabet";
    return false;
  }
  return true;
}

std::string show(const Case& c) {
  std::string s = "p=";
  for (Symbol x : c.p) s += std::to_string(x);
  s += " t=";
  for (Symbol x : c.t) s += std::to_string(x);
  return s + " k=" + std::to_string(c.k);
}

Outcome criterion1() {
  Outcome o;
  Index count = 0, bad = 0;
  std::string first;
  for_each_exhaustive([&](const Case& c) {
    ++count;
    std::string why;
    if (!equivalent(c, &why)) {
      if (bad++ == 0) first = show(c) + ": " + why;
    }
  });
  o.pass = bad == 0;
  o.summary = "exhaustive binary equivalence, " + std::to_string(count) + " instances, " + std::to_string(bad) + " mismatches";
  if (bad) o.details.push_back(first);
  return o;
}

Outcome criterion2() {
  Outcome o;
  Index bad = 0;
  std::string first;
  auto cases = randomized_cases();
  for (const Case& c : cases) {
    std::string why;
    if (!equivalent(c, &why) && bad++ == 0) first = show(c) + ": " + why;
  }
  o.pass = bad == 0;
  o.summary = "randomized equivalence, " + std::to_string(cases.size()) + " instances, " + std::to_string(bad) + " mismatches";
  if (bad) o.details.push_back(first);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const Str x = from_bytes("abacabcabcaaaab");
  LZFactorization f = lz77(x);
  const LZFactorization want = {{true, 'a', 0, 0}, {true, 'b', 0, 0}, {false, 0, 0, 1}, {true, 'c', 0, 0},
                                {false, 0, 0, 2},  {false, 0, 3, 5}, {false, 0, 10, 3}, {false, 0, 8, 1}};
  std::string got;
  for (const LZPhrase& ph : f)
    got += ph.literal ? "(" + std::string(1, static_cast<char>(ph.sym)) + ",0) "
                      : "(" + std::to_string(ph.src) + "," + std::to_string(ph.len) + ") ";
  o.pass = f == want && lz_expand(f) == x;
  o.summary = "LZ77 of abacabcabcaaaab has " + std::to_string(f.size()) + " phrases";
  o.details.push_back(got);
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(4242);
  Index lz = 0, mono = 0, sub = 0, tri = 0, oracle = 0, checks = 0;
  for (int it = 0; it < 500; ++it) {
    const Symbol sigma = 1 + static_cast<Symbol>(rng() % 4);
    Str x = rng() % 2 ? random_str(rng, static_cast<Index>(rng() % 65), sigma)
                      : apply_random_edits(power_prefix(random_str(rng, 1 + static_cast<Index>(rng() % 5), sigma), static_cast<Index>(rng() % 60)),
                                           static_cast<Index>(rng() % 4), sigma, rng);
    if (x.size() > 64) x.resize(64);
    const Index n = static_cast<Index>(x.size());
    const Index s = selfed(x).cost;
    if (s != naive_selfed(x)) ++oracle;
    ++checks;
    if (static_cast<Index>(lz77(x).size()) > 2 * s) ++lz;
    if (static_cast<Index>(lz77(reversed(x)).size()) > 2 * s) ++lz;
    for (Index cut = 0; cut <= n; ++cut) {
      ++checks;
      if (s > selfed(View(x).subspan(0, cut)).cost + selfed(View(x).subspan(cut)).cost) ++sub;
    }
    for (int r = 0; r < 10; ++r) {
      Index a = static_cast<Index>(rng() % (n + 1)), b = static_cast<Index>(rng() % (n + 1));
      if (a > b) std::swap(a, b);
      Index c = static_cast<Index>(rng() % (a + 1)), d = b + static_cast<Index>(rng() % (n - b + 1));
      ++checks;
      if (selfed(View(x).subspan(a, b - a)).cost > selfed(View(x).subspan(c, d - c)).cost) ++mono;
    }
    for (int r = 0; r < 3; ++r) {
      Str y = apply_random_edits(x, static_cast<Index>(rng() % 6), std::max<Symbol>(sigma, 2), rng);
      ++checks;
      if (selfed(y).cost > s + 2 * naive_ed(x, y)) ++tri;
    }
  }
  const Index total = lz + mono + sub + tri + oracle;
  o.pass = total == 0;
  o.summary = "compressibility laws on 500 strings, " + std::to_string(checks) + " checks, " + std::to_string(total) + " violations";
  o.details.push_back("lz=" + std::to_string(lz) + " monotonicity=" + std::to_string(mono) + " subadditivity=" +
                      std::to_string(sub) + " triangle=" + std::to_string(tri) + " selfed_vs_bruteforce=" + std::to_string(oracle));
  return o;
}

Outcome criterion5() {
  Outcome o;
  Index windows = 0, structured = 0, failed = 0, fallbacks = 0, instances = 0;
  Index v[6] = {0, 0, 0, 0, 0, 0};
  std::string first;
  auto audit_case = [&](const Case& c) {
    ++instances;
    for (bool chars : {true, false}) {
      std::vector<WindowAudit> audit;
      InvariantLog log;
      EncodeOptions opt;
      opt.chars = chars;
      opt.audit = &audit;
      opt.log = &log;
      Sketch sk = encode(c.p, c.t, c.k, opt);
      windows += static_cast<Index>(sk.windows.size());
      fallbacks += static_cast<Index>(log.entries.size());
      for (const WindowAudit& a : audit) {
        ++structured;
        v[0] += !a.congruence;
        v[1] += !a.weightBound;
        v[2] += !a.halving;
        v[3] += !a.sizeBound;
        v[4] += !(a.coverRecursive && a.coverMinimal);
        v[5] += !a.masked;
        if (!a.ok() || !a.failure.empty()) {
          if (failed++ == 0) first = show(c) + " window " + std::to_string(a.window) + ": " + a.failure;
        }
      }
    }
  };
  for_each_exhaustive(audit_case);
  for (const Case& c : randomized_cases()) audit_case(c);
  o.pass = failed == 0 && fallbacks == 0 && structured > 0;
  o.summary = "structural invariants over " + std::to_string(structured) + " structured windows (" +
              std::to_string(windows) + " windows, " + std::to_string(instances) + " instances), " +
              std::to_string(failed) + " violations";
  o.details.push_back("congruence=" + std::to_string(v[0]) + " weight=" + std::to_string(v[1]) + " halving=" +
                      std::to_string(v[2]) + " size=" + std::to_string(v[3]) + " cover=" + std::to_string(v[4]) +
                      " masked=" + std::to_string(v[5]) + " fallbacks=" + std::to_string(fallbacks));
  if (failed) o.details.push_back(first);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const Index m = 64, k = 4, N = 4096;
  Index recovered = 0, belowBound = 0;
  std::map<Index, double> ratio;
  for (Index n : {N, 2 * N, 4 * N}) {
    double sum = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      LowerBoundInstance inst = gen_lower_bound(n, m, k, seed);
      Sketch sk = encode(inst.p, inst.t, k);
      const std::string bytes = serialize(sk);
      auto occ = decode(deserialize(bytes));
      try {
        if (recover_planted(occ, n, m, k) == inst.planted) ++recovered;
      } catch (const Error&) {
      }
      const double bits = static_cast<double>(bytes.size()) * 8;
      if (bits < lower_bound_bits(n, m, k)) ++belowBound;
      sum += bits / size_floor(n, m, k);
    }
    ratio[n] = sum / 100;
  }
  double mean = 0;
  for (auto& [n, r] : ratio) mean += r / 3;
  bool flat = true;
  for (auto& [n, r] : ratio) flat = flat && std::abs(r - mean) <= 0.25 * mean;
  o.pass = recovered == 300 && belowBound == 0 && flat;
  o.summary = "lower-bound family, " + std::to_string(recovered) + "/300 recovered, size/floor ratio " +
              (flat ? "within" : "outside") + " 25% across n";
  for (auto& [n, r] : ratio)
    o.details.push_back("n=" + std::to_string(n) + " m=" + std::to_string(m) + " k=" + std::to_string(k) +
                        " bits/((n/m) k log2(m/k)) = " + fmt(r) + " lower_bound_bits=" + fmt(lower_bound_bits(n, m, k), 1));
  o.details.push_back("instances below the counting bound: " + std::to_string(belowBound));
  return o;
}

Outcome criterion7() {
  Outcome o;
  double C = 0;
  Index wrong = 0, runs = 0;
  std::map<std::string, std::map<Index, double>> worst;
  for (const std::string family : {"random", "periodic", "lb"})
    for (Index m : {256, 1024, 4096})
      for (Index k : {4, 16, 64}) {
        const Index n = 4 * m;
        BenchInstance inst = bench_instance(family, n, m, k, 4, 7 + static_cast<std::uint64_t>(m + k));
        auto occ = match(inst.p, inst.t, k, MatchOptions{false, 4});
        EncodeOptions eo;
        eo.threads = 4;
        const std::string bytes = serialize(encode(inst.p, inst.t, k, eo));
        auto dec = decode(deserialize(bytes), MatchOptions{false, 4});
        ++runs;
        if (!same_occurrences(dec, occ, false)) ++wrong;
        const double r = static_cast<double>(bytes.size()) * 8 / size_envelope(n, m, k);
        C = std::max(C, r);
        worst[family][m] = std::max(worst[family][m], r);
      }
  // The bound is asymptotic, so the fitted constant must not grow with m.
  bool steady = true;
  for (auto& [family, byM] : worst) {
    std::string line = family + ":";
    for (auto& [m, r] : byM) line += " m=" + std::to_string(m) + " " + fmt(r, 4);
    o.details.push_back(line);
    steady = steady && byM[4096] <= 1.5 * byM[256] + 0.05;
  }
  o.pass = wrong == 0 && steady;
  o.summary = "size envelope bits <= C (n/m) k log2^2 m with fitted C = " + fmt(C, 4) + " over " + std::to_string(runs) +
              " runs, " + std::to_string(wrong) + " decode mismatches";
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(8080);
  Index bad = 0;
  Index kinds[3] = {0, 0, 0};
  std::string first;
  for (int it = 0; it < 1000; ++it) {
    const Index k = 1 + static_cast<Index>(rng() % 3);
    const Index m = 64 * k * (2 + static_cast<Index>(rng() % 4));
    Str p;
    switch (it % 4) {
      case 0: p = random_str(rng, m, 2 + static_cast<Symbol>(rng() % 4)); break;
      case 1: p = region_pattern(rng, m, k); break;
      case 2: {
        // Blocks of a short period with one aperiodic block forced in.
        Str q = random_str(rng, 1 + static_cast<Index>(rng() % 2), 3);
        p = power_prefix(q, m);
        Str noise = random_str(rng, m / (8 * k), 4);
        std::copy(noise.begin(), noise.end(), p.begin() + static_cast<Index>(rng() % (m - noise.size())));
        break;
      }
      default: {
        Str q = random_str(rng, 1 + static_cast<Index>(rng() % std::max<Index>(1, m / (128 * k))), 3);
        p = apply_random_edits(power_prefix(q, m), static_cast<Index>(rng() % (6 * k + 1)), 3, rng);
        if (static_cast<Index>(p.size()) < 8 * k) p = power_prefix(q, m);
      }
    }
    Decomposition d = analyze(p, k);
    ++kinds[static_cast<int>(d.kind)];
    if (!verify_decomposition(p, k, d) && bad++ == 0)
      first = "m=" + std::to_string(p.size()) + " k=" + std::to_string(k) + " kind=" + kind_name(d.kind);
  }
  o.pass = bad == 0 && kinds[0] > 0 && kinds[1] > 0 && kinds[2] > 0;
  o.summary = "decomposition soundness on 1000 patterns, " + std::to_string(bad) + " unsound";
  o.details.push_back("breaks=" + std::to_string(kinds[0]) + " regions=" + std::to_string(kinds[1]) +
                      " approx_period=" + std::to_string(kinds[2]));
  if (bad) o.details.push_back(first);
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(9090);
  Index bad = 0, occurrences = 0;
  Index kinds[3] = {0, 0, 0};
  double candidateFraction = 0;
  std::string first;
  for (int it = 0; it < 500; ++it) {
    Instance in = pipeline_instance(rng);
    Decomposition d = analyze(in.p, in.k);
    ++kinds[static_cast<int>(d.kind)];
    CandidateSet h = candidates(in.p, in.t, in.k, d);
    candidateFraction += static_cast<double>(h.size()) / static_cast<double>(in.t.size() + 1) / 500;
    auto want = match_banded(in.p, in.t, in.k);
    occurrences += static_cast<Index>(want.size());
    auto got = verify_candidates(in.p, in.t, in.k, h);
    auto masked = verify_candidates_masked(in.p, in.t, in.k, h);
    if ((!same_occurrences(got, want) || !same_occurrences(masked, want) || !same_occurrences(match(in.p, in.t, in.k), want)) &&
        bad++ == 0)
      first = "instance " + std::to_string(it) + " kind=" + kind_name(d.kind);
  }
  o.pass = bad == 0;
  o.summary = "pipeline agreement on 500 instances, " + std::to_string(bad) + " mismatches";
  o.details.push_back("breaks=" + std::to_string(kinds[0]) + " regions=" + std::to_string(kinds[1]) + " approx_period=" +
                      std::to_string(kinds[2]) + " occurrences=" + std::to_string(occurrences) +
                      " mean candidate fraction=" + fmt(candidateFraction));
  if (bad) o.details.push_back(first);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const Index n = 1'000'000, m = 100'000, k = 32;
  std::mt19937_64 rng(1010);
  Str t = random_str(rng, n, 256);
  Str p = random_str(rng, m, 256);
  for (int c = 0; c < 5; ++c) {
    Str noisy = apply_random_edits(p, static_cast<Index>(rng() % (k + 1)), 256, rng);
    const Index pos = static_cast<Index>(rng() % static_cast<std::uint64_t>(n - static_cast<Index>(noisy.size())));
    std::copy(noisy.begin(), noisy.end(), t.begin() + pos);
  }
  auto t0 = std::chrono::steady_clock::now();
  auto occ = match(p, t, k);
  const double matchSec = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const std::string bytes = serialize(encode(p, t, k));
  const double encSec = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  auto dec = decode(deserialize(bytes));
  const double decSec = seconds_since(t0);
  const bool agree = same_occurrences(dec, occ, false);
  const std::string build = EPM_BUILD_TYPE;
  o.pass = matchSec < 10 && encSec + decSec < 30 && agree && !occ.empty() && build == "Release";
  o.summary = "n=1e6 m=1e5 k=32 bytes: match " + fmt(matchSec, 2) + " s, encode+decode " + fmt(encSec + decSec, 2) + " s";
  o.details.push_back("occurrences=" + std::to_string(occ.size()) + " sketch_bytes=" + std::to_string(bytes.size()) +
                      " decoded_agrees=" + (agree ? "yes" : "no") + " build=" + build);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);
  const std::vector<std::function<Outcome()>> all = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                     criterion6, criterion7, criterion8, criterion9, criterion10};
  bool ok = true;
  for (int c = 1; c <= 10; ++c) {
    if (only && c != only) continue;
    Outcome r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r = all[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      r.pass = false;
      r.summary = std::string("threw: ") + e.what();
    }
    std::cout << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << c << ": " << r.summary << " (" << fmt(seconds_since(t0), 1)
              << " s)\n";
    for (const std::string& d : r.details) std::cout << "    " << d << "\n";
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
