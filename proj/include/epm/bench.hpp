#pragma once

#include <cmath>
#include <random>
#include <string>

#include "sketch.hpp"

namespace epm {

struct BenchInstance {
  Str p, t;
};

// Synthetic families for size and speed measurements. "random" draws both
// strings uniformly, "periodic" builds both from a short q with sparse noise,
// "lb" is the lower-bound family. The first two get noisy planted copies of P.
inline BenchInstance bench_instance(const std::string& family, Index n, Index m, Index k, Index sigma, std::uint64_t seed) {
  if (sigma < 1) throw Error(Errc::BadParams, "alphabet size must be positive");
  if (family == "lb") {
    LowerBoundInstance inst = gen_lower_bound(n, m, k, seed);
    return {inst.p, inst.t};
  }
  if (family != "random" && family != "periodic") throw Error(Errc::BadParams, "unknown family " + family);
  std::mt19937_64 rng(seed);
  const auto sig = static_cast<std::uint64_t>(sigma);
  BenchInstance b{Str(static_cast<std::size_t>(m)), Str(static_cast<std::size_t>(n))};
  if (family == "random") {
    for (auto& c : b.p) c = static_cast<Symbol>(rng() % sig);
    for (auto& c : b.t) c = static_cast<Symbol>(rng() % sig);
  } else {
    Str q(1 + rng() % 4);
    for (auto& c : q) c = static_cast<Symbol>(rng() % sig);
    for (Index i = 0; i < m; ++i) b.p[i] = q[i % q.size()];
    for (Index i = 0; i < n; ++i) b.t[i] = q[i % q.size()];
    for (Index e = 0; m > 0 && e < n / m; ++e) b.t[rng() % b.t.size()] = static_cast<Symbol>(rng() % sig);
  }
  for (Index c = 0; m > 0 && m <= n && c < std::max<Index>(1, n / (4 * m)); ++c) {
    const Index pos = static_cast<Index>(rng() % static_cast<std::uint64_t>(n - m + 1));
    for (Index i = 0; i < m; ++i) b.t[pos + i] = b.p[i];
    for (Index e = 0; e < k / 2; ++e) b.t[pos + static_cast<Index>(rng() % static_cast<std::uint64_t>(m))] = static_cast<Symbol>(rng() % sig);
  }
  return b;
}

// (n/m) k log^2 m, the shape of the sketch size upper bound.
inline double size_envelope(Index n, Index m, Index k) {
  const double lg = std::log2(static_cast<double>(m));
  return static_cast<double>(n) / static_cast<double>(m) * static_cast<double>(k) * lg * lg;
}

// (n/m) k log(m/k), the shape of the lower bound.
inline double size_floor(Index n, Index m, Index k) {
  return static_cast<double>(n) / static_cast<double>(m) * static_cast<double>(k) *
         std::log2(static_cast<double>(m) / static_cast<double>(k));
}

}  // namespace epm
