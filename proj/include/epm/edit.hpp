#pragma once

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "strings.hpp"

namespace epm {

struct Point {
  Index x = 0;
  Index y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Span {
  Index start = 0;
  Index end = 0;
  Index size() const { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

// A monotone path of points from (src.start, dst.start) to (src.end, dst.end).
struct Alignment {
  std::vector<Point> points;

  Span src() const { return {points.front().x, points.back().x}; }
  Span dst() const { return {points.front().y, points.back().y}; }
  friend bool operator==(const Alignment&, const Alignment&) = default;
};

struct EditRecord {
  Index x = 0;
  Symbol cx = kEpsilon;
  Index y = 0;
  Symbol cy = kEpsilon;
  friend auto operator<=>(const EditRecord&, const EditRecord&) = default;
};

// Records are ordered along the path. `identity` marks a cost-0 alignment, whose
// position cannot be recovered from an empty record list.
struct EditInfo {
  std::vector<EditRecord> records;
  bool identity = false;
  Index cost() const { return static_cast<Index>(records.size()); }
  friend bool operator==(const EditInfo&, const EditInfo&) = default;
};

struct CostedOccurrence {
  Index t = 0;
  Index t2 = 0;
  Index cost = 0;
  EditInfo edits;
  bool has_edits = false;
};

inline bool same_pair(const CostedOccurrence& a, const CostedOccurrence& b) {
  return a.t == b.t && a.t2 == b.t2;
}
inline bool pair_less(const CostedOccurrence& a, const CostedOccurrence& b) {
  return a.t != b.t ? a.t < b.t : a.t2 < b.t2;
}

// ---------------------------------------------------------------------------
// Alignment primitives

inline bool validate(const Alignment& a) {
  if (a.points.empty()) return false;
  for (std::size_t i = 1; i < a.points.size(); ++i) {
    Index dx = a.points[i].x - a.points[i - 1].x;
    Index dy = a.points[i].y - a.points[i - 1].y;
    if (dx < 0 || dy < 0 || dx > 1 || dy > 1 || dx + dy == 0) return false;
  }
  return true;
}

inline Alignment identity_alignment(Span src, Index dstStart) {
  Alignment a;
  a.points.reserve(static_cast<std::size_t>(src.size() + 1));
  for (Index i = 0; i <= src.size(); ++i) a.points.push_back({src.start + i, dstStart + i});
  return a;
}

// x and y are the parent strings the point coordinates index into.
inline Index alignment_cost(const Alignment& a, View x, View y) {
  if (!validate(a)) throw Error(Errc::Invalid, "alignment path");
  Index cost = 0;
  for (std::size_t i = 1; i < a.points.size(); ++i) {
    const Point& p = a.points[i - 1];
    const Point& q = a.points[i];
    if (q.x > p.x && q.y > p.y) {
      if (x[p.x] != y[p.y]) ++cost;
    } else {
      ++cost;
    }
  }
  return cost;
}

inline Alignment inverse(const Alignment& a) {
  Alignment r;
  r.points.reserve(a.points.size());
  for (const Point& p : a.points) r.points.push_back({p.y, p.x});
  return r;
}

// Product of a: X -> Y and b: Y -> Z. Every emitted (x, z) has a witness y with
// (x, y) in a and (y, z) in b.
inline Alignment compose(const Alignment& a, const Alignment& b) {
  if (!(a.dst() == b.src())) throw Error(Errc::DomainMismatch, "compose: a.dst != b.src");
  Alignment c;
  std::size_t i = 0, j = 0;
  const std::size_t na = a.points.size(), nb = b.points.size();
  Index x = a.points[0].x, z = b.points[0].y;
  c.points.push_back({x, z});
  while (i + 1 < na || j + 1 < nb) {
    if (i + 1 < na && a.points[i + 1].y == a.points[i].y) {
      ++i;
      x = a.points[i].x;
      c.points.push_back({x, z});
    } else if (j + 1 < nb && b.points[j + 1].x == b.points[j].x) {
      ++j;
      z = b.points[j].y;
      c.points.push_back({x, z});
    } else {
      if (i + 1 >= na || j + 1 >= nb) throw Error(Errc::Invalid, "compose: path mismatch");
      ++i;
      ++j;
      Index nx = a.points[i].x, nz = b.points[j].y;
      if (nx != x || nz != z) {
        x = nx;
        z = nz;
        c.points.push_back({x, z});
      }
    }
  }
  return c;
}

inline Span align_image(const Alignment& a, Span f) {
  const Span src = a.src();
  if (f.start < src.start || f.end > src.end || f.start > f.end)
    throw Error(Errc::OutOfRange, "align_image: fragment outside source");
  auto first_y = [&](Index xv) {
    auto it = std::lower_bound(a.points.begin(), a.points.end(), xv,
                               [](const Point& p, Index v) { return p.x < v; });
    return it->y;
  };
  Index ys = first_y(f.start);
  Index ye = (f.end == src.end) ? a.dst().end : first_y(f.end);
  return {ys, ye};
}

// ---------------------------------------------------------------------------
// Edit information

enum class StepKind { Match, Sub, Del, Ins };

inline EditInfo edit_info(const Alignment& a, View x, View y) {
  if (!validate(a)) throw Error(Errc::Invalid, "alignment path");
  EditInfo e;
  for (std::size_t i = 1; i < a.points.size(); ++i) {
    const Point& p = a.points[i - 1];
    const Point& q = a.points[i];
    if (q.x > p.x && q.y > p.y) {
      if (x[p.x] != y[p.y]) e.records.push_back({p.x, x[p.x], p.y, y[p.y]});
    } else if (q.x > p.x) {
      e.records.push_back({p.x, x[p.x], p.y, kEpsilon});
    } else {
      e.records.push_back({p.x, kEpsilon, p.y, y[p.y]});
    }
  }
  e.identity = e.records.empty();
  return e;
}

// Walks the path encoded by `e` between the given fragments, calling
// f(kind, x, y, record*) for every step (record is null for matches).
template <class F>
void for_each_step(const EditInfo& e, Span src, Span dst, F&& f) {
  if (e.records.empty()) {
    if (!e.identity) throw Error(Errc::Corrupt, "edit info without records or identity flag");
    if (src.size() != dst.size()) throw Error(Errc::Corrupt, "identity between unequal lengths");
    for (Index i = 0; i < src.size(); ++i)
      f(StepKind::Match, src.start + i, dst.start + i, static_cast<const EditRecord*>(nullptr));
    return;
  }
  const EditRecord& r0 = e.records.front();
  Index cx = src.start;
  Index cy = r0.y - (r0.x - src.start);
  if (cy != dst.start) throw Error(Errc::Corrupt, "edit info does not start at fragment");
  auto diag_to = [&](Index tx, Index ty) {
    if (tx - cx != ty - cy || tx < cx) throw Error(Errc::Corrupt, "records not diagonal-consistent");
    while (cx < tx) {
      f(StepKind::Match, cx, cy, static_cast<const EditRecord*>(nullptr));
      ++cx;
      ++cy;
    }
  };
  for (const EditRecord& r : e.records) {
    diag_to(r.x, r.y);
    if (r.cx == r.cy) throw Error(Errc::Corrupt, "record with equal characters");
    if (r.cx != kEpsilon && r.cy != kEpsilon) {
      f(StepKind::Sub, cx, cy, &r);
      ++cx;
      ++cy;
    } else if (r.cx != kEpsilon) {
      f(StepKind::Del, cx, cy, &r);
      ++cx;
    } else {
      f(StepKind::Ins, cx, cy, &r);
      ++cy;
    }
    if (cx > src.end || cy > dst.end) throw Error(Errc::Corrupt, "record outside fragments");
  }
  diag_to(src.end, dst.end);
}

inline Alignment reconstruct_alignment(const EditInfo& e, Span src, Span dst) {
  Alignment a;
  a.points.push_back({src.start, dst.start});
  for_each_step(e, src, dst, [&](StepKind k, Index x, Index y, const EditRecord*) {
    switch (k) {
      case StepKind::Match:
      case StepKind::Sub: a.points.push_back({x + 1, y + 1}); break;
      case StepKind::Del: a.points.push_back({x + 1, y}); break;
      case StepKind::Ins: a.points.push_back({x, y + 1}); break;
    }
  });
  return a;
}

inline Alignment reconstruct_alignment(const EditInfo& e, Index srcLen, Index dstLen) {
  return reconstruct_alignment(e, Span{0, srcLen}, Span{0, dstLen});
}

// ---------------------------------------------------------------------------
// Full dynamic programming oracle

struct Distance {
  Index cost = 0;
  Alignment alignment;
};

// Backtrace tie-break: diagonal, then deletion, then insertion.
inline Distance edit_distance_full(View x, View y, Index xOff = 0, Index yOff = 0) {
  const Index m = static_cast<Index>(x.size());
  const Index n = static_cast<Index>(y.size());
  const Index w = n + 1;
  std::vector<std::int32_t> D(static_cast<std::size_t>((m + 1) * w));
  for (Index j = 0; j <= n; ++j) D[j] = static_cast<std::int32_t>(j);
  for (Index i = 1; i <= m; ++i) {
    D[i * w] = static_cast<std::int32_t>(i);
    for (Index j = 1; j <= n; ++j) {
      std::int32_t v = D[(i - 1) * w + j - 1] + (x[i - 1] != y[j - 1] ? 1 : 0);
      v = std::min(v, D[(i - 1) * w + j] + 1);
      v = std::min(v, D[i * w + j - 1] + 1);
      D[i * w + j] = v;
    }
  }
  Distance out;
  out.cost = D[m * w + n];
  std::vector<Point> rev;
  Index i = m, j = n;
  rev.push_back({i + xOff, j + yOff});
  while (i > 0 || j > 0) {
    const std::int32_t v = D[i * w + j];
    if (i > 0 && j > 0 && D[(i - 1) * w + j - 1] + (x[i - 1] != y[j - 1] ? 1 : 0) == v) {
      --i;
      --j;
    } else if (i > 0 && D[(i - 1) * w + j] + 1 == v) {
      --i;
    } else {
      --j;
    }
    rev.push_back({i + xOff, j + yOff});
  }
  out.alignment.points.assign(rev.rbegin(), rev.rend());
  return out;
}

inline Index edit_distance(View x, View y) {
  const std::size_t n = y.size();
  std::vector<Index> row(n + 1);
  for (std::size_t j = 0; j <= n; ++j) row[j] = static_cast<Index>(j);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    Index diag = row[0];
    row[0] = static_cast<Index>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      Index up = row[j];
      row[j] = std::min({diag + (x[i - 1] != y[j - 1] ? 1 : 0), up + 1, row[j - 1] + 1});
      diag = up;
    }
  }
  return row[n];
}

// ---------------------------------------------------------------------------
// Banded computation (diagonal waves).
//
// L(e, d) is the largest row i such that cell (i, i + d) of the distance table
// has value at most e. Any cell's value is then found by a binary search over e,
// and the backtrace reproduces the oracle's tie-break exactly.

class BandedDistance {
 public:
  BandedDistance(View x, View y, Index k)
      : x_(x), y_(y), m_(static_cast<Index>(x.size())), n_(static_cast<Index>(y.size())) {
    if (k < 0) throw Error(Errc::PreconditionFailed, "negative threshold");
    k_ = std::min(k, m_ + n_);
    dlo_ = -std::min(k_, m_);
    dhi_ = std::min(k_, n_);
    width_ = dhi_ - dlo_ + 1;
    L_.assign(static_cast<std::size_t>((k_ + 1) * width_), kNone);
    compute();
  }

  Index threshold() const { return k_; }

  // Value of cell (i, j), or threshold()+1 if it exceeds the threshold.
  Index at(Index i, Index j) const {
    const Index d = j - i;
    if (d < dlo_ || d > dhi_) return k_ + 1;
    Index lo = d < 0 ? -d : d, hi = k_ + 1;
    while (lo < hi) {
      Index mid = (lo + hi) / 2;
      if (get(mid, d) >= i) hi = mid;
      else lo = mid + 1;
    }
    return lo;
  }

  Index distance() const { return at(m_, n_); }

  // Optimal path from (0, 0) to (i, j); requires at(i, j) <= threshold().
  EditInfo backtrace(Index i, Index j, Index xOff, Index yOff, std::vector<Point>* points = nullptr) const {
    Index v = at(i, j);
    if (v > k_) throw Error(Errc::PreconditionFailed, "backtrace beyond threshold");
    EditInfo e;
    std::vector<Point> rev;
    if (points) rev.push_back({i + xOff, j + yOff});
    while (i > 0 || j > 0) {
      if (i > 0 && j > 0 && x_[i - 1] == y_[j - 1]) {
        Index run = 1;
        while (run < i && run < j && x_[i - 1 - run] == y_[j - 1 - run]) ++run;
        if (points)
          for (Index s = 1; s <= run; ++s) rev.push_back({i - s + xOff, j - s + yOff});
        i -= run;
        j -= run;
        continue;
      }
      if (i > 0 && j > 0 && at(i - 1, j - 1) == v - 1) {
        e.records.push_back({i - 1 + xOff, x_[i - 1], j - 1 + yOff, y_[j - 1]});
        --i;
        --j;
      } else if (i > 0 && at(i - 1, j) == v - 1) {
        e.records.push_back({i - 1 + xOff, x_[i - 1], j + yOff, kEpsilon});
        --i;
      } else {
        if (j == 0 || at(i, j - 1) != v - 1) throw Error(Errc::InternalInvariantBroken, "banded backtrace");
        e.records.push_back({i + xOff, kEpsilon, j - 1 + yOff, y_[j - 1]});
        --j;
      }
      --v;
      if (points) rev.push_back({i + xOff, j + yOff});
    }
    std::reverse(e.records.begin(), e.records.end());
    e.identity = e.records.empty();
    if (points) points->assign(rev.rbegin(), rev.rend());
    return e;
  }

 private:
  static constexpr Index kNone = std::numeric_limits<Index>::min() / 4;

  Index get(Index e, Index d) const { return L_[static_cast<std::size_t>(e * width_ + (d - dlo_))]; }
  Index& ref(Index e, Index d) { return L_[static_cast<std::size_t>(e * width_ + (d - dlo_))]; }

  Index slide(Index i, Index d, Index hi) const {
    auto xs = x_.begin() + i;
    auto r = std::mismatch(xs, x_.begin() + hi, y_.begin() + (i + d));
    return i + (r.first - xs);
  }

  void compute() {
    for (Index e = 0; e <= k_; ++e) {
      bool any = false;
      for (Index d = dlo_; d <= dhi_; ++d) {
        if (d < -e || d > e) continue;
        const Index hi = std::min(m_, n_ - d);
        Index best = kNone;
        if (e == 0) {
          if (d == 0) best = 0;
        } else {
          Index v = get(e - 1, d);
          if (v != kNone) best = std::max(best, std::min(v + 1, hi));
          if (d - 1 >= dlo_ && (v = get(e - 1, d - 1)) != kNone) best = std::max(best, std::min(v, hi));
          if (d + 1 <= dhi_ && (v = get(e - 1, d + 1)) != kNone) best = std::max(best, std::min(v + 1, hi));
        }
        if (best != kNone) {
          best = slide(best, d, hi);
          any = true;
        }
        ref(e, d) = best;
      }
      if (!any) break;
    }
  }

  View x_, y_;
  Index m_, n_, k_ = 0, dlo_ = 0, dhi_ = 0, width_ = 0;
  std::vector<Index> L_;
};

inline std::optional<Distance> edit_distance_bounded(View x, View y, Index k, Index xOff = 0, Index yOff = 0) {
  BandedDistance bd(x, y, k);
  Index d = bd.distance();
  if (d > k) return std::nullopt;
  Distance out;
  out.cost = d;
  bd.backtrace(static_cast<Index>(x.size()), static_cast<Index>(y.size()), xOff, yOff, &out.alignment.points);
  return out;
}

// Exact value if at most k, otherwise k + 1.
inline Index edit_distance_at_most(View x, View y, Index k) {
  const Index lx = static_cast<Index>(x.size()), ly = static_cast<Index>(y.size());
  if (std::abs(lx - ly) > k) return k + 1;
  BandedDistance bd(x, y, k);
  return std::min(bd.distance(), k + 1);
}

// All (s, e) with cost(p, t[s..e)) <= k for one start position s.
inline void occurrences_at_start(View p, View t, Index s, Index k, bool withEdits,
                                 std::vector<CostedOccurrence>& out) {
  const Index m = static_cast<Index>(p.size());
  const Index n = static_cast<Index>(t.size());
  const Index yend = std::min(n, s + m + k);
  View y = t.subspan(static_cast<std::size_t>(s), static_cast<std::size_t>(yend - s));
  BandedDistance bd(p, y, k);
  const Index ly = yend - s;
  for (Index len = std::max<Index>(0, m - k); len <= std::min(ly, m + k); ++len) {
    Index c = bd.at(m, len);
    if (c > k) continue;
    CostedOccurrence o;
    o.t = s;
    o.t2 = s + len;
    o.cost = c;
    if (withEdits) {
      o.edits = bd.backtrace(m, len, 0, s);
      o.has_edits = true;
    }
    out.push_back(std::move(o));
  }
}

// Optimal edit info of p onto t[s..e), same tie-break as the oracle.
inline EditInfo occurrence_edits(View p, View t, Index s, Index e, Index k) {
  View y = t.subspan(static_cast<std::size_t>(s), static_cast<std::size_t>(e - s));
  BandedDistance bd(p, y, k);
  return bd.backtrace(static_cast<Index>(p.size()), e - s, 0, s);
}

// Fills in the edit information of occurrences sorted by start, computing one
// banded table per distinct start.
inline void attach_edits(View p, View t, Index k, std::vector<CostedOccurrence>& occ) {
  const Index m = static_cast<Index>(p.size());
  const Index n = static_cast<Index>(t.size());
  for (std::size_t i = 0; i < occ.size();) {
    const Index s = occ[i].t;
    const Index yend = std::min(n, s + m + k);
    BandedDistance bd(p, t.subspan(static_cast<std::size_t>(s), static_cast<std::size_t>(yend - s)), k);
    for (; i < occ.size() && occ[i].t == s; ++i) {
      occ[i].edits = bd.backtrace(m, occ[i].t2 - s, 0, s);
      occ[i].has_edits = true;
    }
  }
}

// Exhaustive oracle: one full table per start position.
inline std::vector<CostedOccurrence> occ_edits_oracle(View p, View t, Index k) {
  std::vector<CostedOccurrence> out;
  const Index m = static_cast<Index>(p.size());
  const Index n = static_cast<Index>(t.size());
  for (Index s = 0; s <= n; ++s) {
    for (Index e = s; e <= n; ++e) {
      if (std::abs((e - s) - m) > k) continue;
      View y = t.subspan(static_cast<std::size_t>(s), static_cast<std::size_t>(e - s));
      Distance d = edit_distance_full(p, y, 0, s);
      if (d.cost > k) continue;
      CostedOccurrence o;
      o.t = s;
      o.t2 = e;
      o.cost = d.cost;
      o.edits = edit_info(d.alignment, p, t);
      o.has_edits = true;
      out.push_back(std::move(o));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimisation over suffixes / prefixes via the sentinel construction:
// cost($^{2k} p, t') = 2k + min_y cost(p, t'[y..)) whenever the minimum is <= k,
// where t' is the last |p| + k characters of t.

struct SuffixMin {
  Index d = 0;
  Index pos = 0;
};

inline std::optional<SuffixMin> suffix_min_edit(View p, View t, Index k) {
  const Index m = static_cast<Index>(p.size());
  const Index n = static_cast<Index>(t.size());
  const Index off = std::max<Index>(0, n - m - k);
  View tt = t.subspan(static_cast<std::size_t>(off));
  Str xs(static_cast<std::size_t>(2 * k), kSentinel);
  xs.insert(xs.end(), p.begin(), p.end());
  BandedDistance bd(xs, tt, 3 * k);
  const Index lx = static_cast<Index>(xs.size()), ly = static_cast<Index>(tt.size());
  Index delta = bd.at(lx, ly);
  if (delta > 3 * k) return std::nullopt;
  std::vector<Point> pts;
  bd.backtrace(lx, ly, 0, 0, &pts);
  auto it = std::find_if(pts.begin(), pts.end(), [&](const Point& q) { return q.x == 2 * k; });
  return SuffixMin{delta - 2 * k, off + it->y};
}

// Returns (d, end) with d = min over prefixes t[0..end).
inline std::optional<SuffixMin> prefix_min_edit(View p, View t, Index k) {
  Str rp = reversed(p), rt = reversed(t);
  auto r = suffix_min_edit(rp, rt, k);
  if (!r) return std::nullopt;
  return SuffixMin{r->d, static_cast<Index>(t.size()) - r->pos};
}

// ---------------------------------------------------------------------------
// Distance to the infinite power of q.

enum class PeriodicMode { Substring, Prefix };

struct PeriodicWitness {
  Index cost = 0;
  Index start = 0;  // offset into q^inf, in [0, |q|)
  Index end = 0;    // end offset in the unrolled q^inf
};

// Banded table over s versus q^inf with the start restricted to [0, |q|)
// (or fixed at 0 in prefix mode). Values above K are reported as K + 1.
inline PeriodicWitness ed_periodic_witness(View s, View q, PeriodicMode mode, Index K) {
  if (q.empty()) throw Error(Errc::PreconditionFailed, "empty period");
  const Index ls = static_cast<Index>(s.size());
  const Index lq = static_cast<Index>(q.size());
  K = std::min(K, ls);
  const Index startSpan = mode == PeriodicMode::Substring ? lq : 1;
  const Index lo = -K, hi = startSpan - 1 + K;  // band on j - x
  const Index W = hi - lo + 1;
  const Index INF = std::numeric_limits<Index>::max() / 4;
  struct Cell {
    Index c, o;
  };
  auto better = [](const Cell& a, const Cell& b) { return a.c != b.c ? a.c < b.c : a.o < b.o; };
  std::vector<Cell> prev(static_cast<std::size_t>(W), {INF, 0}), cur(prev);
  auto qch = [&](Index j) { return q[static_cast<std::size_t>(j % lq)]; };
  for (Index j = 0; j <= hi; ++j) {
    Index idx = j - lo;
    if (j < startSpan) prev[idx] = {0, j};
    else prev[idx] = {j - startSpan + 1, startSpan - 1};
  }
  for (Index x = 1; x <= ls; ++x) {
    for (Index b = 0; b < W; ++b) {
      Index j = x + lo + b;
      Cell best{INF, 0};
      if (j >= 0) {
        // diagonal from (x-1, j-1): same band offset b
        if (j >= 1 && prev[b].c < INF) {
          Cell c{prev[b].c + (s[x - 1] != qch(j - 1) ? 1 : 0), prev[b].o};
          if (better(c, best)) best = c;
        }
        // deletion from (x-1, j): offset b+1
        if (b + 1 < W && prev[b + 1].c < INF) {
          Cell c{prev[b + 1].c + 1, prev[b + 1].o};
          if (better(c, best)) best = c;
        }
        // insertion from (x, j-1): offset b-1
        if (b >= 1 && cur[b - 1].c < INF) {
          Cell c{cur[b - 1].c + 1, cur[b - 1].o};
          if (better(c, best)) best = c;
        }
      }
      cur[b] = best;
    }
    std::swap(prev, cur);
  }
  PeriodicWitness w{INF, 0, 0};
  for (Index b = 0; b < W; ++b) {
    Index j = ls + lo + b;
    if (j < 0 || prev[b].c >= INF) continue;
    if (prev[b].c < w.cost || (prev[b].c == w.cost && prev[b].o < w.start)) w = {prev[b].c, prev[b].o, j};
  }
  if (w.cost > K) w.cost = K + 1;
  return w;
}

inline Index ed_periodic_bounded(View s, View q, PeriodicMode mode, Index K) {
  return ed_periodic_witness(s, q, mode, K).cost;
}

inline Index ed_periodic(View s, View q, PeriodicMode mode) {
  return ed_periodic_witness(s, q, mode, static_cast<Index>(s.size())).cost;
}

}  // namespace epm
