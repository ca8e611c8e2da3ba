#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

#include "analysis.hpp"
#include "edit.hpp"
#include "strings.hpp"

namespace epm {

struct MatchOptions {
  bool withEdits = true;
  int threads = 1;
};

namespace detail {

// Runs f(lo, hi, out) over [0, count) split into contiguous chunks and
// concatenates the outputs in chunk order, so the result does not depend on
// the thread count.
template <class T, class F>
std::vector<T> chunked(Index count, int threads, F&& f) {
  std::vector<T> out;
  if (count <= 0) return out;
  const Index parts = std::max<Index>(1, std::min<Index>(threads, count));
  if (parts == 1) {
    f(Index{0}, count, out);
    return out;
  }
  std::vector<std::vector<T>> partial(static_cast<std::size_t>(parts));
  std::vector<std::thread> pool;
  for (Index i = 0; i < parts; ++i) {
    const Index lo = count * i / parts, hi = count * (i + 1) / parts;
    pool.emplace_back([&, i, lo, hi] { f(lo, hi, partial[static_cast<std::size_t>(i)]); });
  }
  for (auto& th : pool) th.join();
  for (auto& v : partial) out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return out;
}

}  // namespace detail

inline void sort_occurrences(std::vector<CostedOccurrence>& v) {
  std::sort(v.begin(), v.end(), pair_less);
  v.erase(std::unique(v.begin(), v.end(), same_pair), v.end());
}

// Reference matcher: one banded table per start position.
inline std::vector<CostedOccurrence> match_banded(View p, View t, Index k, const MatchOptions& opt = {}) {
  const Index n = static_cast<Index>(t.size());
  return detail::chunked<CostedOccurrence>(n + 1, opt.threads, [&](Index lo, Index hi, std::vector<CostedOccurrence>& out) {
    for (Index s = lo; s < hi; ++s) occurrences_at_start(p, t, s, k, opt.withEdits, out);
  });
}

// ---------------------------------------------------------------------------
// Candidate sets

struct Provenance {
  enum Kind : std::uint8_t { Break, Region, Periodic, Fallback, All };
  Kind kind = All;
  std::int32_t id = 0;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

inline const char* provenance_name(Provenance::Kind k) {
  switch (k) {
    case Provenance::Break: return "break";
    case Provenance::Region: return "region";
    case Provenance::Periodic: return "periodic";
    case Provenance::Fallback: return "fallback";
    case Provenance::All: return "all";
  }
  return "?";
}

// Closed ranges of candidate start positions, each tagged with its origin.
struct CandidateSet {
  struct Item {
    Index lo = 0;
    Index hi = 0;
    Provenance tag;
  };
  Index limit = 0;  // starts live in [0, limit]
  std::vector<Item> items;

  explicit CandidateSet(Index lim = 0) : limit(lim) {}

  void add(Index lo, Index hi, Provenance tag) {
    lo = std::max<Index>(lo, 0);
    hi = std::min(hi, limit);
    if (lo > hi) return;
    if (!items.empty()) {
      Item& b = items.back();
      if (b.tag == tag && lo >= b.lo && lo <= b.hi + 1) {
        b.hi = std::max(b.hi, hi);
        return;
      }
    }
    items.push_back({lo, hi, tag});
  }

  void merge(const CandidateSet& o) {
    for (const Item& it : o.items) add(it.lo, it.hi, it.tag);
  }

  std::vector<std::pair<Index, Index>> ranges() const {
    std::vector<std::pair<Index, Index>> r;
    r.reserve(items.size());
    for (const Item& it : items) r.push_back({it.lo, it.hi});
    std::sort(r.begin(), r.end());
    std::vector<std::pair<Index, Index>> out;
    for (auto& iv : r) {
      if (!out.empty() && iv.first <= out.back().second + 1) out.back().second = std::max(out.back().second, iv.second);
      else out.push_back(iv);
    }
    return out;
  }

  std::vector<Index> starts() const {
    std::vector<Index> s;
    for (auto& [lo, hi] : ranges())
      for (Index x = lo; x <= hi; ++x) s.push_back(x);
    return s;
  }

  Index size() const {
    Index c = 0;
    for (auto& [lo, hi] : ranges()) c += hi - lo + 1;
    return c;
  }

  bool contains(Index x) const {
    auto r = ranges();
    auto it = std::upper_bound(r.begin(), r.end(), std::pair<Index, Index>{x, std::numeric_limits<Index>::max()});
    return it != r.begin() && std::prev(it)->second >= x;
  }

  // floor(x / width) for every candidate x, sorted and distinct.
  std::vector<Index> buckets(Index width) const {
    width = std::max<Index>(width, 1);
    std::vector<Index> b;
    for (auto& [lo, hi] : ranges())
      for (Index q = lo / width; q <= hi / width; ++q)
        if (b.empty() || b.back() != q) b.push_back(q);
    return b;
  }

  static CandidateSet all(Index limit) {
    CandidateSet c(limit);
    c.add(0, limit, {Provenance::All, 0});
    return c;
  }
};

inline CandidateSet candidates_breaks(View p, View t, Index k, const Decomposition& d) {
  const Index n = static_cast<Index>(t.size());
  CandidateSet h(n);
  std::vector<std::pair<Index, std::int32_t>> centres;
  for (std::size_t b = 0; b < d.breaks.size(); ++b) {
    const Span& br = d.breaks[b];
    for (Index x : exact_occurrences(p.subspan(br.start, br.size()), t))
      centres.push_back({x - br.start, static_cast<std::int32_t>(b)});
  }
  std::sort(centres.begin(), centres.end());
  for (auto& [c, id] : centres) h.add(c - k, c + k, {Provenance::Break, id});
  return h;
}

// Candidate starts for every occurrence of r with at most kappa errors. The
// window of text around each block is aligned to q^inf through an exact q
// occurrence in its middle part; starts are then confined to an arithmetic
// progression of step |q| widened by 6K. K bounds the distance of r to q^inf
// and ellR is the offset of r's best alignment into q^inf.
inline CandidateSet candidates_periodic(View r, View t, Index kappa, View q, Index ellR, Index K,
                                        std::int32_t id = 0, const std::vector<Index>* qOcc = nullptr) {
  const Index n = static_cast<Index>(t.size());
  const Index R = static_cast<Index>(r.size());
  const Index lq = static_cast<Index>(q.size());
  CandidateSet h(n);
  const Index lastStart = n - (R - kappa);
  if (lastStart < 0) return h;
  const Index B = R / 2 - kappa;
  if (B < 1) {
    h.add(0, lastStart, {Provenance::Fallback, id});
    return h;
  }
  std::vector<Index> own;
  if (qOcc == nullptr) {
    own = exact_occurrences(q, t);
    qOcc = &own;
  }
  // Part of the text that every occurrence starting in the block covers.
  const Index midLen = R - kappa - B;
  const Index segments = midLen / (2 * lq);
  const bool guaranteed = segments > 2 * (kappa + K);
  const Index radius = 6 * K;
  std::vector<char> seen(static_cast<std::size_t>(lq));
  std::vector<Index> residues;
  for (Index b = 0; b <= lastStart; b += B) {
    const Index bEnd = std::min(b + B - 1, lastStart);
    if (!guaranteed) {
      h.add(b, bEnd, {Provenance::Fallback, id});
      continue;
    }
    const Index midLo = b + B, midHi = b + R - kappa;
    residues.clear();
    std::fill(seen.begin(), seen.end(), 0);
    auto it = std::lower_bound(qOcc->begin(), qOcc->end(), midLo);
    for (; it != qOcc->end() && *it + lq <= midHi; ++it) {
      const Index c = (*it + ellR) % lq;
      if (!seen[c]) {
        seen[c] = 1;
        residues.push_back(c);
      }
    }
    if (residues.empty()) continue;
    if (2 * radius + 1 >= lq) {
      h.add(b, bEnd, {Provenance::Periodic, id});
      continue;
    }
    std::sort(residues.begin(), residues.end());
    // Walk the progressions c + j*lq in increasing order of centre.
    const Index firstBase = ((b - radius) / lq - 1) * lq;
    for (Index base = firstBase; base - radius <= bEnd; base += lq)
      for (Index c : residues) {
        const Index centre = base + c;
        if (centre + radius < b || centre - radius > bEnd) continue;
        h.add(std::max(b, centre - radius), std::min(bEnd, centre + radius), {Provenance::Periodic, id});
      }
  }
  return h;
}

// Starts s for which some t[s..e) is within kappa of r.
inline std::vector<Index> verified_starts(View r, View t, Index kappa, const CandidateSet& h) {
  const Index R = static_cast<Index>(r.size());
  const Index n = static_cast<Index>(t.size());
  std::vector<Index> out;
  for (auto& [lo, hi] : h.ranges())
    for (Index s = lo; s <= hi; ++s) {
      const Index yend = std::min(n, s + R + kappa);
      BandedDistance bd(r, t.subspan(static_cast<std::size_t>(s), static_cast<std::size_t>(yend - s)), kappa);
      for (Index len = std::max<Index>(0, R - kappa); len <= yend - s; ++len)
        if (bd.at(R, len) <= kappa) {
          out.push_back(s);
          break;
        }
    }
  return out;
}

inline CandidateSet candidates_regions(View p, View t, Index k, const Decomposition& d) {
  const Index m = static_cast<Index>(p.size());
  const Index n = static_cast<Index>(t.size());
  CandidateSet h(n);
  for (std::size_t ri = 0; ri < d.regions.size(); ++ri) {
    const Region& reg = d.regions[ri];
    const Index len = reg.end - reg.start;
    View r = p.subspan(reg.start, len);
    const Index kappa = 4 * k * len / m;
    const Index bucket = region_budget(k, len, m);
    const Index K = bucket;
    const Index ellR = ed_periodic_witness(r, reg.q, PeriodicMode::Substring, K).start;
    CandidateSet hr = candidates_periodic(r, t, kappa, reg.q, ellR, K, static_cast<std::int32_t>(ri));
    for (Index tr : verified_starts(r, t, kappa, hr)) {
      const Index x = bucket * (tr / bucket) - reg.start;
      h.add(x - 10 * k, x + 10 * k, {Provenance::Region, static_cast<std::int32_t>(ri)});
    }
  }
  return h;
}

inline CandidateSet candidates_approx_period(View p, View t, Index k, const Decomposition& d) {
  const Index K = 8 * k;
  const Index ellR = ed_periodic_witness(p, d.q, PeriodicMode::Substring, K).start;
  return candidates_periodic(p, t, k, d.q, ellR, K);
}

inline std::vector<CostedOccurrence> verify_candidates(View p, View t, Index k, const CandidateSet& h,
                                                       const MatchOptions& opt = {}) {
  std::vector<Index> starts = h.starts();
  return detail::chunked<CostedOccurrence>(static_cast<Index>(starts.size()), opt.threads,
                                           [&](Index lo, Index hi, std::vector<CostedOccurrence>& out) {
                                             for (Index i = lo; i < hi; ++i)
                                               occurrences_at_start(p, t, starts[i], k, opt.withEdits, out);
                                           });
}

// Whether the structural pipeline applies; below this ratio every start is
// verified directly.
inline bool pipeline_applies(Index m, Index k) { return k >= 1 && 32 * k <= m; }

inline CandidateSet candidates(View p, View t, Index k, const Decomposition& d) {
  switch (d.kind) {
    case Decomposition::Kind::Breaks: return candidates_breaks(p, t, k, d);
    case Decomposition::Kind::Regions: return candidates_regions(p, t, k, d);
    case Decomposition::Kind::ApproxPeriod: return candidates_approx_period(p, t, k, d);
  }
  return CandidateSet::all(static_cast<Index>(t.size()));
}

inline std::vector<CostedOccurrence> match(View p, View t, Index k, const MatchOptions& opt = {}) {
  const Index m = static_cast<Index>(p.size());
  if (k < 0) throw Error(Errc::PreconditionFailed, "negative threshold");
  if (k == 0 && m > 0) {
    std::vector<CostedOccurrence> out;
    for (Index x : exact_occurrences(p, t)) {
      CostedOccurrence o{x, x + m, 0, {}, opt.withEdits};
      o.edits.identity = true;
      out.push_back(std::move(o));
    }
    return out;
  }
  if (!pipeline_applies(m, k)) return match_banded(p, t, k, opt);
  Decomposition d = analyze(p, k);
  return verify_candidates(p, t, k, candidates(p, t, k, d), opt);
}

}  // namespace epm
