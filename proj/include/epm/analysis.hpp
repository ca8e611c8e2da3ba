#pragma once

#include <optional>
#include <vector>

#include "edit.hpp"
#include "strings.hpp"

namespace epm {

struct Region {
  Index start = 0;
  Index end = 0;
  Str q;
  Index k = 0;  // distance of the region to q^inf
};

struct Decomposition {
  enum class Kind { Breaks, Regions, ApproxPeriod };
  Kind kind = Kind::Breaks;
  std::vector<Span> breaks;
  std::vector<Region> regions;
  Str q;
};

inline const char* kind_name(Decomposition::Kind k) {
  switch (k) {
    case Decomposition::Kind::Breaks: return "breaks";
    case Decomposition::Kind::Regions: return "regions";
    case Decomposition::Kind::ApproxPeriod: return "approx_period";
  }
  return "?";
}

// ceil(8k * len / m)
inline Index region_budget(Index k, Index len, Index m) { return (8 * k * len + m - 1) / m; }

// dist[x] = distance of s[0..x) to the nearest substring of q^inf, capped at
// K + 1. One banded pass yields every prefix at once because the substring
// variant leaves the end free: row x's minimum is the value for s[0..x).
inline std::vector<Index> periodic_prefix_profile(View s, View q, Index K) {
  const Index ls = static_cast<Index>(s.size());
  const Index lq = static_cast<Index>(q.size());
  const Index lo = -K, hi = lq - 1 + K;
  const Index W = hi - lo + 1;
  const Index INF = std::numeric_limits<Index>::max() / 4;
  std::vector<Index> prev(static_cast<std::size_t>(W), INF), cur(prev);
  for (Index j = 0; j <= hi; ++j) prev[j - lo] = j < lq ? 0 : j - lq + 1;
  std::vector<Index> out(static_cast<std::size_t>(ls + 1), 0);
  for (Index x = 1; x <= ls; ++x) {
    Index best = INF;
    for (Index b = 0; b < W; ++b) {
      const Index j = x + lo + b;
      Index v = INF;
      if (j >= 0) {
        if (j >= 1 && prev[b] < INF) v = prev[b] + (s[x - 1] != q[static_cast<std::size_t>((j - 1) % lq)] ? 1 : 0);
        if (b + 1 < W && prev[b + 1] < INF) v = std::min(v, prev[b + 1] + 1);
        if (b >= 1 && cur[b - 1] < INF) v = std::min(v, cur[b - 1] + 1);
      }
      cur[b] = v;
      best = std::min(best, v);
    }
    out[x] = std::min(best, K + 1);
    std::swap(prev, cur);
  }
  return out;
}

// Sign of ed(p[j..j2), q^inf) - ceil(8k/m * (j2 - j)).
inline int delta_sign(View p, Index j, Index j2, View q, Index k) {
  const Index m = static_cast<Index>(p.size());
  if (k < 1 || m < 8 * k) throw Error(Errc::PreconditionFailed, "analysis needs m >= 8k");
  const Index block = m / (8 * k);
  if (j < 0 || j2 <= j + block || j2 > m) throw Error(Errc::OutOfRange, "delta_sign range");
  const Index budget = region_budget(k, j2 - j, m);
  const Index d = ed_periodic_bounded(p.subspan(j, j2 - j), q, PeriodicMode::Substring, budget + 1);
  return d < budget ? -1 : (d == budget ? 0 : 1);
}

// Smallest j2 in (j + block, m] with ed(p[j..j2), q^inf) = ceil(8k/m * (j2 - j)).
// When none exists the distance stays below the budget all the way to m.
inline std::optional<Index> find_region_prefix(View p, Index j, View q, Index k) {
  const Index m = static_cast<Index>(p.size());
  const Index block = m / (8 * k);
  auto prof = periodic_prefix_profile(p.subspan(j), q, 8 * k + 1);
  for (Index len = block + 1; j + len <= m; ++len)
    if (prof[len] == region_budget(k, len, m)) return j + len;
  return std::nullopt;
}

// Backward variant: smallest suffix p[s..m) with length >= minLen meeting the
// budget with equality. Distance to q^inf is invariant under reversing both.
inline std::optional<Index> find_region_suffix(View p, Index minLen, View q, Index k) {
  const Index m = static_cast<Index>(p.size());
  Str rp = reversed(p), rq = reversed(q);
  auto prof = periodic_prefix_profile(rp, rq, 8 * k + 1);
  for (Index len = std::max<Index>(minLen, 1); len <= m; ++len)
    if (prof[len] == region_budget(k, len, m)) return m - len;
  return std::nullopt;
}

inline Decomposition analyze(View p, Index k) {
  const Index m = static_cast<Index>(p.size());
  if (k < 1 || m < 8 * k) throw Error(Errc::PreconditionFailed, "analysis needs 1 <= k and m >= 8k");
  const Index block = m / (8 * k);
  Decomposition d;
  Index j = 0, regionTotal = 0;
  for (;;) {
    if (j + block > m) throw Error(Errc::InternalInvariantBroken, "analysis ran past the pattern");
    View piece = p.subspan(j, block);
    const Index per_ = per(piece);
    if (128 * k * per_ > m) {
      d.breaks.push_back({j, j + block});
      j += block;
      if (static_cast<Index>(d.breaks.size()) == 2 * k) {
        d.kind = Decomposition::Kind::Breaks;
        d.regions.clear();
        return d;
      }
      continue;
    }
    Str q = slice(p, j, j + per_);
    if (auto j2 = find_region_prefix(p, j, q, k)) {
      Region r{j, *j2, q, region_budget(k, *j2 - j, m)};
      regionTotal += *j2 - j;
      j = *j2;
      d.regions.push_back(std::move(r));
      if (8 * regionTotal >= 3 * m) {
        d.kind = Decomposition::Kind::Regions;
        d.breaks.clear();
        return d;
      }
      continue;
    }
    if (auto s = find_region_suffix(p, m - j, q, k)) {
      d.kind = Decomposition::Kind::Regions;
      d.breaks.clear();
      d.regions.assign(1, Region{*s, m, q, region_budget(k, m - *s, m)});
      return d;
    }
    d.kind = Decomposition::Kind::ApproxPeriod;
    d.breaks.clear();
    d.regions.clear();
    d.q = q;
    return d;
  }
}

inline bool verify_decomposition(View p, Index k, const Decomposition& d) {
  const Index m = static_cast<Index>(p.size());
  if (k < 1 || m < 8 * k) return false;
  const Index block = m / (8 * k);
  auto small_primitive = [&](const Str& q) { return !q.empty() && 128 * k * static_cast<Index>(q.size()) <= m && is_primitive(q); };
  auto disjoint = [](std::vector<Span> v) {
    std::sort(v.begin(), v.end(), [](const Span& a, const Span& b) { return a.start < b.start; });
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i].start < v[i - 1].end) return false;
    return true;
  };
  switch (d.kind) {
    case Decomposition::Kind::Breaks: {
      if (static_cast<Index>(d.breaks.size()) != 2 * k) return false;
      for (const Span& b : d.breaks) {
        if (b.start < 0 || b.end > m || b.size() != block) return false;
        if (128 * k * per(p.subspan(b.start, b.size())) <= m) return false;
      }
      return disjoint(d.breaks);
    }
    case Decomposition::Kind::Regions: {
      Index total = 0;
      std::vector<Span> spans;
      for (const Region& r : d.regions) {
        if (r.start < 0 || r.end > m || r.start >= r.end) return false;
        const Index len = r.end - r.start;
        if (8 * k * len < m) return false;
        if (!small_primitive(r.q)) return false;
        const Index budget = region_budget(k, len, m);
        if (r.k != budget) return false;
        if (ed_periodic_bounded(p.subspan(r.start, len), r.q, PeriodicMode::Substring, budget + 1) != budget) return false;
        total += len;
        spans.push_back({r.start, r.end});
      }
      return 8 * total >= 3 * m && disjoint(spans);
    }
    case Decomposition::Kind::ApproxPeriod:
      return small_primitive(d.q) && ed_periodic_bounded(p, d.q, PeriodicMode::Substring, 8 * k) < 8 * k;
  }
  return false;
}

}  // namespace epm
