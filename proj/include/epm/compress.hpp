#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "edit.hpp"
#include "strings.hpp"

namespace epm {

// Either a literal (literal == true, sym) or a copy of len symbols starting at
// src, with src strictly before the phrase's own position (overlap allowed).
struct LZPhrase {
  bool literal = true;
  Symbol sym = 0;
  Index src = 0;
  Index len = 0;

  Index length() const { return literal ? 1 : len; }
  friend bool operator==(const LZPhrase&, const LZPhrase&) = default;
};

using LZFactorization = std::vector<LZPhrase>;

inline Str lz_expand(const LZFactorization& f) {
  Str out;
  for (const LZPhrase& p : f) {
    if (p.literal) {
      out.push_back(p.sym);
      continue;
    }
    if (p.src < 0 || p.src >= static_cast<Index>(out.size()) || p.len < 1)
      throw Error(Errc::Corrupt, "LZ phrase source out of range");
    for (Index i = 0; i < p.len; ++i) out.push_back(out[static_cast<std::size_t>(p.src + i)]);
  }
  return out;
}

namespace detail {

inline void z_function(const Str& s, std::vector<Index>& z) {
  const Index n = static_cast<Index>(s.size());
  z.assign(static_cast<std::size_t>(n), 0);
  if (n == 0) return;
  z[0] = n;
  for (Index i = 1, l = 0, r = 0; i < n; ++i) {
    if (i < r) z[i] = std::min(r - i, z[i - l]);
    while (i + z[i] < n && s[z[i]] == s[i + z[i]]) ++z[i];
    if (i + z[i] > r) {
      l = i;
      r = i + z[i];
    }
  }
}

// Longest previous factor at position i of x. Among equally long sources the
// rightmost one is taken.
inline LZPhrase longest_previous_factor(View x, Index i) {
  const Index n = static_cast<Index>(x.size());
  if (i == 0) return LZPhrase{true, x[0], 0, 0};
  Index cap = std::min<Index>(n - i, 64);
  Str buf;
  std::vector<Index> z;
  for (;;) {
    buf.assign(x.begin() + i, x.begin() + i + cap);
    buf.push_back(kSeparator);
    buf.insert(buf.end(), x.begin(), x.begin() + std::min(n, i + cap - 1));
    z_function(buf, z);
    Index best = 0, bestSrc = 0;
    for (Index s = 0; s < i; ++s) {
      Index v = std::min(z[static_cast<std::size_t>(cap + 1 + s)], cap);
      if (v > 0 && v >= best) {
        best = v;
        bestSrc = s;
      }
    }
    if (best == cap && i + cap < n) {
      cap = std::min(n - i, cap * 2);
      continue;
    }
    if (best == 0) return LZPhrase{true, x[i], 0, 0};
    return LZPhrase{false, 0, bestSrc, best};
  }
}

}  // namespace detail

// Greedy left-to-right parse; stops after maxPhrases phrases when given.
inline LZFactorization lz77(View x, Index maxPhrases = std::numeric_limits<Index>::max()) {
  LZFactorization f;
  const Index n = static_cast<Index>(x.size());
  for (Index i = 0; i < n && static_cast<Index>(f.size()) < maxPhrases;) {
    LZPhrase p = detail::longest_previous_factor(x, i);
    i += p.length();
    f.push_back(p);
  }
  return f;
}

enum class Direction { Forward, Reversed };

struct LZBounded {
  Index extent = 0;
  LZFactorization phrases;
};

// Longest prefix of x[startPos..) (Forward) or of reverse(x[0..startPos]) (Reversed)
// whose greedy parse has at most z phrases. The greedy parse of a prefix is the
// truncated parse of the whole string, so the answer is the end of phrase z.
inline LZBounded lz_bounded_prefix(View x, Index startPos, Index z, Direction dir) {
  if (z < 1) throw Error(Errc::PreconditionFailed, "z must be positive");
  const Index avail = dir == Direction::Forward ? static_cast<Index>(x.size()) - startPos : startPos + 1;
  // Parse growing prefixes of the target. A parse of a prefix agrees with the
  // parse of the whole string on every phrase that ends before the cut.
  for (Index cap = std::min<Index>(avail, 4 * z + 64);; cap = std::min(avail, cap * 2)) {
    Str y;
    if (dir == Direction::Forward) {
      y.assign(x.begin() + startPos, x.begin() + startPos + cap);
    } else {
      y.assign(x.rend() - startPos - 1, x.rend() - startPos - 1 + cap);
    }
    LZBounded out;
    out.phrases = lz77(y, z);
    for (const LZPhrase& p : out.phrases) out.extent += p.length();
    if (cap == avail || out.extent < cap) return out;
  }
}

// ---------------------------------------------------------------------------
// Self edit distance: cheapest alignment of x onto itself that never aligns a
// character with its own occurrence, i.e. no diagonal step out of a cell (i, i).

struct SelfEdResult {
  Index cost = 0;
  Alignment witness;
};

inline SelfEdResult selfed(View x) {
  const Index n = static_cast<Index>(x.size());
  const Index w = n + 1;
  const Index INF = std::numeric_limits<Index>::max() / 4;
  std::vector<Index> D(static_cast<std::size_t>(w * w), INF);
  D[0] = 0;
  for (Index i = 0; i <= n; ++i) {
    for (Index j = 0; j <= n; ++j) {
      Index& v = D[i * w + j];
      if (i == 0 && j == 0) continue;
      if (i > 0 && j > 0 && i - 1 != j - 1) v = std::min(v, D[(i - 1) * w + j - 1] + (x[i - 1] != x[j - 1] ? 1 : 0));
      if (i > 0) v = std::min(v, D[(i - 1) * w + j] + 1);
      if (j > 0) v = std::min(v, D[i * w + j - 1] + 1);
    }
  }
  SelfEdResult r;
  r.cost = D[n * w + n];
  std::vector<Point> rev{{n, n}};
  Index i = n, j = n;
  while (i > 0 || j > 0) {
    const Index v = D[i * w + j];
    if (i > 0 && j > 0 && i != j && D[(i - 1) * w + j - 1] + (x[i - 1] != x[j - 1] ? 1 : 0) == v) {
      --i;
      --j;
    } else if (i > 0 && D[(i - 1) * w + j] + 1 == v) {
      --i;
    } else {
      --j;
    }
    rev.push_back({i, j});
  }
  r.witness.points.assign(rev.rbegin(), rev.rend());
  return r;
}

// Exact selfed(x) when it is at most bound, otherwise bound + 1. Cells with
// |i - j| > bound are never on a path of cost <= bound.
inline Index selfed_bounded(View x, Index bound) {
  const Index n = static_cast<Index>(x.size());
  if (bound < 0) return 0;
  const Index INF = std::numeric_limits<Index>::max() / 4;
  const Index W = 2 * bound + 1;
  std::vector<Index> prev(static_cast<std::size_t>(W), INF), cur(static_cast<std::size_t>(W), INF);
  // band offset b = j - i + bound
  for (Index b = bound; b < W && b - bound <= n; ++b) prev[b] = b - bound;
  for (Index i = 1; i <= n; ++i) {
    for (Index b = 0; b < W; ++b) {
      const Index j = i + b - bound;
      Index v = INF;
      if (j >= 0 && j <= n) {
        if (j > 0 && i - 1 != j - 1 && prev[b] < INF) v = std::min(v, prev[b] + (x[i - 1] != x[j - 1] ? 1 : 0));
        if (b + 1 < W && prev[b + 1] < INF) v = std::min(v, prev[b + 1] + 1);
        if (b > 0 && j > 0 && cur[b - 1] < INF) v = std::min(v, cur[b - 1] + 1);
      }
      cur[b] = v;
    }
    std::swap(prev, cur);
  }
  Index v = prev[bound];
  return std::min(v, bound + 1);
}

// Values of selfed_bounded for every prefix of x, in one banded pass. Prefix
// values never decrease, so the pass stops at the first prefix above bound;
// the returned vector ends with that bound + 1 entry (or covers all of x).
// Cells above bound can only feed cells above bound, so each row visits just
// the diagonals still at or below it. `cells` accumulates the cells visited.
inline std::vector<Index> selfed_prefix_profile(View x, Index bound, std::int64_t* cells = nullptr) {
  const Index n = static_cast<Index>(x.size());
  std::vector<Index> out{0};
  if (bound < 0) return out;
  const Index INF = std::numeric_limits<Index>::max() / 4;
  const Index W = 2 * bound + 1;
  std::vector<Index> prev(static_cast<std::size_t>(W), INF), cur(static_cast<std::size_t>(W), INF);
  // [lo, hi] is the live range of prev; entries outside it count as INF.
  Index lo = bound, hi = std::min(W - 1, bound + n);
  for (Index b = lo; b <= hi; ++b) prev[b] = b - bound;
  auto at = [&](Index b) { return b >= lo && b <= hi ? prev[b] : INF; };
  std::int64_t visited = 0;
  for (Index i = 1; i <= n; ++i) {
    const Index from = std::max<Index>(0, lo - 1);
    Index nlo = -1, nhi = -1, left = INF;
    for (Index b = from; b < W; ++b) {
      if (b > hi && left >= bound) break;
      const Index j = i + b - bound;
      Index v = INF;
      if (j >= 0 && j <= n) {
        const Index d = at(b);
        if (j > 0 && i != j && d < INF) v = std::min(v, d + (x[i - 1] != x[j - 1] ? 1 : 0));
        const Index up = at(b + 1);
        if (up < INF) v = std::min(v, up + 1);
        if (b > from && j > 0 && left < INF) v = std::min(v, left + 1);
      }
      if (v > bound) v = INF;
      cur[b] = v;
      left = v;
      ++visited;
      if (v < INF) {
        if (nlo < 0) nlo = b;
        nhi = b;
      }
    }
    std::swap(prev, cur);
    if (nlo < 0) {
      out.push_back(bound + 1);
      break;
    }
    lo = nlo;
    hi = nhi;
    out.push_back(std::min(at(bound), bound + 1));
    if (out.back() > bound) break;
  }
  if (cells) *cells += visited;
  return out;
}

}  // namespace epm
