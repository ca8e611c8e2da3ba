#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "compress.hpp"
#include "edit.hpp"
#include "strings.hpp"

namespace epm {

// Alignment of the whole pattern onto T[t..t2) of a window of length L.
struct WindowAlignment {
  Index t = 0;
  Index t2 = 0;
  EditInfo edits;
};

// S together with which members start at 0 and end at L. pref and suf may name
// the same alignment when one occurrence spans the whole window.
struct AlignmentSet {
  Index m = 0;
  Index L = 0;
  Index k = 0;
  std::vector<WindowAlignment> items;
  std::size_t pref = 0;
  std::size_t suf = 0;

  bool encloses() const {
    return !items.empty() && items[pref].t == 0 && items[suf].t2 == L;
  }
};

// Per-alignment lookups: the T position aligned to each P position (or -1
// when deleted) and the number of edits strictly before that point.
struct AlignedView {
  std::vector<Index> y;
  std::vector<Index> before;
  Index total = 0;
};

inline AlignedView aligned_view(const WindowAlignment& a, Index m) {
  AlignedView v;
  v.y.assign(static_cast<std::size_t>(m), -1);
  v.before.assign(static_cast<std::size_t>(m), 0);
  Index cost = 0;
  for_each_step(a.edits, Span{0, m}, Span{a.t, a.t2}, [&](StepKind kind, Index x, Index y, const EditRecord*) {
    if (kind == StepKind::Match || kind == StepKind::Sub) {
      v.y[x] = y;
      v.before[x] = cost;
    } else if (kind == StepKind::Del) {
      v.before[x] = cost;
    }
    if (kind != StepKind::Match) ++cost;
  });
  v.total = cost;
  return v;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Vertices: P positions [0, m), window positions m + [0, L), and the special
// vertex m + L. Components are numbered by their smallest vertex.
struct AlignmentGraph {
  Index m = 0;
  Index L = 0;
  std::vector<Index> comp;     // vertex -> component representative
  std::vector<char> red;       // representative -> has a red edge
  std::vector<Index> blackId;  // representative -> black index, or -1
  Index bc = 0;
  Index red_edges = 0;

  Index pvertex(Index x) const { return x; }
  Index tvertex(Index y) const { return m + y; }
  Index bottom() const { return m + L; }
  Index black_of_p(Index x) const { return blackId[comp[x]]; }
  Index black_of_t(Index y) const { return blackId[comp[m + y]]; }
};

inline AlignmentGraph build_graph(const AlignmentSet& s) {
  AlignmentGraph g;
  g.m = s.m;
  g.L = s.L;
  const std::size_t V = static_cast<std::size_t>(s.m + s.L + 1);
  DisjointSets ds(V);
  std::vector<std::size_t> redVertices;
  for (const WindowAlignment& a : s.items) {
    if (a.edits.cost() > s.k) throw Error(Errc::Invalid, "alignment above threshold");
    if (a.t < 0 || a.t2 > s.L || a.t > a.t2) throw Error(Errc::Invalid, "alignment outside window");
    for_each_step(a.edits, Span{0, s.m}, Span{a.t, a.t2}, [&](StepKind kind, Index x, Index y, const EditRecord*) {
      const std::size_t px = static_cast<std::size_t>(x), ty = static_cast<std::size_t>(s.m + y);
      const std::size_t bot = V - 1;
      switch (kind) {
        case StepKind::Match: ds.unite(px, ty); break;
        case StepKind::Sub:
          ds.unite(px, ty);
          redVertices.push_back(px);
          break;
        case StepKind::Del:
          ds.unite(px, bot);
          redVertices.push_back(px);
          break;
        case StepKind::Ins:
          ds.unite(ty, bot);
          redVertices.push_back(ty);
          break;
      }
    });
  }
  g.red_edges = static_cast<Index>(redVertices.size());
  g.comp.resize(V);
  for (std::size_t v = 0; v < V; ++v) g.comp[v] = static_cast<Index>(ds.find(v));
  g.red.assign(V, 0);
  for (std::size_t v : redVertices) g.red[g.comp[v]] = 1;
  // The special vertex never belongs to a black component, even when isolated.
  g.red[g.comp[V - 1]] = 1;
  g.blackId.assign(V, -1);
  return g;
}

// pS / tS list the P and window positions lying in black components, in order.
// The c-th black component holds exactly the entries with index = c (mod bc).
struct BlackIndexing {
  Index bc = 0;
  Index cLast = 0;
  std::vector<Index> pS, tS;
  std::vector<Index> pIdx, tIdx;  // position -> index in pS / tS, or -1

  Index pi(Index c, Index j) const { return pS[static_cast<std::size_t>(c + j * bc)]; }
  Index tau(Index c, Index i) const { return tS[static_cast<std::size_t>(c + i * bc)]; }
  Index m_c(Index c) const { return (static_cast<Index>(pS.size()) - c + bc - 1) / bc; }
  Index n_c(Index c) const { return (static_cast<Index>(tS.size()) - c + bc - 1) / bc; }
  Index m0() const { return m_c(0); }
  Index n0() const { return n_c(0); }
};

inline BlackIndexing black_indexing(AlignmentGraph& g) {
  BlackIndexing idx;
  idx.pIdx.assign(static_cast<std::size_t>(g.m), -1);
  idx.tIdx.assign(static_cast<std::size_t>(g.L), -1);
  Index blackComponents = 0;
  for (std::size_t v = 0; v < g.comp.size(); ++v)
    if (g.comp[v] == static_cast<Index>(v) && !g.red[v]) ++blackComponents;
  std::fill(g.blackId.begin(), g.blackId.end(), -1);
  if (blackComponents == 0) throw Error(Errc::NoBlackComponents, "no black components");
  for (Index x = 0; x < g.m; ++x)
    if (!g.red[g.comp[x]]) {
      idx.pIdx[x] = static_cast<Index>(idx.pS.size());
      idx.pS.push_back(x);
    }
  for (Index y = 0; y < g.L; ++y)
    if (!g.red[g.comp[g.m + y]]) {
      idx.tIdx[y] = static_cast<Index>(idx.tS.size());
      idx.tS.push_back(y);
    }
  const Index bc = blackComponents;
  idx.bc = bc;
  g.bc = bc;
  if (static_cast<Index>(idx.pS.size()) < bc) throw Error(Errc::InternalInvariantBroken, "black component without pattern position");
  for (Index c = 0; c < bc; ++c) {
    Index rep = g.comp[idx.pS[c]];
    if (g.blackId[rep] != -1) throw Error(Errc::InternalInvariantBroken, "black components not interleaved");
    g.blackId[rep] = c;
  }
  for (std::size_t i = 0; i < idx.pS.size(); ++i)
    if (g.blackId[g.comp[idx.pS[i]]] != static_cast<Index>(i) % bc)
      throw Error(Errc::InternalInvariantBroken, "pattern positions break congruence");
  for (std::size_t i = 0; i < idx.tS.size(); ++i)
    if (g.blackId[g.comp[g.m + idx.tS[i]]] != static_cast<Index>(i) % bc)
      throw Error(Errc::InternalInvariantBroken, "text positions break congruence");
  const Index lp = static_cast<Index>(idx.pS.size()), lt = static_cast<Index>(idx.tS.size());
  if ((lt - lp) % bc != 0) throw Error(Errc::InternalInvariantBroken, "|T_S| and |P_S| not congruent");
  idx.cLast = (lp - 1) % bc;
  return idx;
}

// Every alignment in S matches P_S[p] with T_S[p + shift] for one fixed shift.
inline void check_induced_occurrences(const AlignmentSet& s, const BlackIndexing& idx) {
  for (const WindowAlignment& a : s.items) {
    AlignedView v = aligned_view(a, s.m);
    Index y0 = v.y[idx.pS[0]];
    if (y0 < 0 || idx.tIdx[y0] < 0) throw Error(Errc::InternalInvariantBroken, "alignment misses a black position");
    Index shift = idx.tIdx[y0];
    for (std::size_t p = 0; p < idx.pS.size(); ++p) {
      Index y = v.y[idx.pS[p]];
      Index q = static_cast<Index>(p) + shift;
      if (y < 0 || q >= static_cast<Index>(idx.tS.size()) || idx.tS[q] != y)
        throw Error(Errc::InternalInvariantBroken, "alignment does not induce an occurrence of P_S");
    }
  }
}

// ---------------------------------------------------------------------------
// Weight function

struct WeightFunction {
  std::vector<Index> w;
  Index total = 0;
  Index alpha = 0;
  Index alphaPrime = 0;

  // w(-1) stands for w(bc - 1).
  Index at(Index c) const { return c < 0 ? w.back() : w[static_cast<std::size_t>(c)]; }
  Index range(Index from, Index to) const {
    Index s = 0;
    for (Index c = from; c <= to; ++c) s += at(c);
    return s;
  }
};

inline WeightFunction weight_function(const AlignmentSet& s, const BlackIndexing& idx) {
  if (!s.encloses()) throw Error(Errc::PreconditionFailed, "S must enclose the window");
  check_induced_occurrences(s, idx);
  const Index bc = idx.bc;
  const Index lp = static_cast<Index>(idx.pS.size()), lt = static_cast<Index>(idx.tS.size());
  std::vector<AlignedView> views;
  views.reserve(s.items.size());
  for (const WindowAlignment& a : s.items) views.push_back(aligned_view(a, s.m));

  // Distinct edges (x, y) of the reduced graph, keeping the smallest partial cost.
  std::unordered_map<Index, Index> edgeWeight;
  const Index key = s.L + 1;
  for (const AlignedView& v : views) {
    for (Index p = 0; p + 1 < lp; ++p) {
      Index x = idx.pS[p];
      Index y = v.y[x];
      Index q = idx.tIdx[y];
      if (q + 1 >= lt) continue;
      Index cost = v.before[idx.pS[p + 1]] - v.before[x];
      auto [it, fresh] = edgeWeight.try_emplace(x * key + y, cost);
      if (!fresh) it->second = std::min(it->second, cost);
    }
  }
  WeightFunction wf;
  wf.w.assign(static_cast<std::size_t>(bc), 0);
  for (const auto& [k, cost] : edgeWeight) {
    Index x = k / key;
    wf.w[static_cast<std::size_t>(idx.pIdx[x] % bc)] += cost;
  }
  const AlignedView& vp = views[s.pref];
  const AlignedView& vs = views[s.suf];
  const Index first = idx.pS.front(), last = idx.pS.back();
  wf.alpha = vp.before[first] + vs.before[first];
  wf.alphaPrime = (vs.total - vs.before[last]) + (vp.total - vp.before[last]);
  wf.w[static_cast<std::size_t>(bc - 1)] += wf.alpha;
  wf.w[static_cast<std::size_t>(idx.cLast)] += wf.alphaPrime;
  wf.total = std::accumulate(wf.w.begin(), wf.w.end(), Index{0});
  return wf;
}

// Checks every covering condition by enumeration; the existential conditions
// (3) and (5) are decided by scanning the whole admissible range of t / t'.
inline bool weight_covers(View p, View t, const BlackIndexing& idx, const WeightFunction& wf) {
  const Index bc = idx.bc;
  const Index lp = static_cast<Index>(idx.pS.size()), lt = static_cast<Index>(idx.tS.size());
  auto d = [&](Index a, Index b, Index c, Index e, Index bound) {
    return edit_distance_at_most(p.subspan(a, b - a), t.subspan(c, e - c), bound);
  };
  for (Index c = 0; c < bc; ++c) {
    const Index wc = wf.at(c);
    for (Index j = 0; c + 1 + j * bc < lp; ++j)
      for (Index i = 0; c + 1 + i * bc < lt; ++i)
        if (d(idx.pi(c, j), idx.pS[c + 1 + j * bc], idx.tau(c, i), idx.tS[c + 1 + i * bc], wc) > wc) return false;
  }
  const Index wl = wf.at(bc - 1), wc = wf.at(idx.cLast);
  const Index pi00 = idx.pS.front();
  if (d(0, pi00, 0, idx.tS.front(), wl) > wl) return false;
  for (Index i = 1; i < idx.n0(); ++i) {
    bool ok = false;
    for (Index tt = idx.tS[bc - 1 + (i - 1) * bc]; tt <= idx.tau(0, i) && !ok; ++tt)
      ok = d(0, pi00, tt, idx.tau(0, i), wl) <= wl;
    if (!ok) return false;
  }
  const Index piLast = idx.pS.back();
  const Index m = static_cast<Index>(p.size()), L = static_cast<Index>(t.size());
  if (d(piLast, m, idx.tS.back(), L, wc) > wc) return false;
  for (Index i = 0; i + 1 < idx.n0(); ++i) {
    const Index from = idx.tau(idx.cLast, i);
    const Index to = idx.tS[idx.cLast + 1 + i * bc];
    bool ok = false;
    for (Index tt = from; tt <= to && !ok; ++tt) ok = d(piLast, m, from, tt, wc) <= wc;
    if (!ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Period covers

struct CoverPiece {
  Index pos = 0;          // window position where the expansion starts
  bool reversed = false;  // reversed pieces expand leftwards from pos
  LZFactorization lz;
  friend bool operator==(const CoverPiece&, const CoverPiece&) = default;
};

struct PeriodCover {
  std::vector<char> in;  // per black component
  std::vector<std::pair<Index, Index>> intervals;
  std::vector<CoverPiece> pieces;

  Index count() const { return std::count(in.begin(), in.end(), 1); }
};

struct CoverParams {
  Index k = 0;
  Index w = 0;
};

inline View first_tau_span(View t, const BlackIndexing& idx, Index a, Index b) {
  const Index from = idx.tS[a], to = idx.tS[b] + 1;
  return t.subspan(static_cast<std::size_t>(from), static_cast<std::size_t>(to - from));
}

// Enumerates every interval [a, b] meeting one of the five conditions and calls
// f(a, b). For a fixed a the self edit distance is monotone in b, so the scan
// stops once it exceeds the largest threshold that could apply.
// A nonnegative budget bounds the number of DP cells evaluated. The scan gives
// up and returns false once it has spent the budget, or once 64 starts in the
// cells spent so far extrapolate to more than twice the budget.
template <class F>
bool for_each_cover_interval(View t, const BlackIndexing& idx, const WeightFunction& wf, Index k, F&& f,
                             std::int64_t budget = -1) {
  const Index bc = idx.bc;
  const Index base = 6 * wf.total + 11 * k;
  const Index cap = std::max(base, 6 * (wf.total + wf.at(bc - 1)));
  std::int64_t spent = 0;
  for (Index a = 0; a < bc; ++a) {
    Index wsum = wf.at(a - 1);
    if (budget >= 0 && (spent > budget || (a >= 64 && static_cast<double>(spent) / a * bc > 2.0 * budget)))
      return false;
    const auto prof = selfed_prefix_profile(first_tau_span(t, idx, a, bc - 1), cap, &spent);
    for (Index b = a; b < bc; ++b) {
      wsum += wf.at(b);
      const Index len = idx.tS[b] + 1 - idx.tS[a];
      if (len >= static_cast<Index>(prof.size())) break;
      const Index se = prof[len];
      if (se > cap) break;
      bool boundary = a == 0 || b == bc - 1 || b == idx.cLast || a == idx.cLast + 1;
      bool qualifies = (boundary && se <= base) || se <= 6 * wsum;
      if (qualifies) f(a, b, boundary && se <= base);
    }
  }
  return true;
}

inline bool is_period_cover(const PeriodCover& cover, View t, const BlackIndexing& idx, const WeightFunction& wf, Index k) {
  bool ok = true;
  for_each_cover_interval(t, idx, wf, k, [&](Index a, Index b, bool) {
    for (Index c = a; c <= b && ok; ++c) ok = cover.in[static_cast<std::size_t>(c)] != 0;
  });
  return ok;
}

inline CoverPiece forward_piece(View t, Index from, Index to) {
  CoverPiece pc;
  pc.pos = from;
  pc.reversed = false;
  pc.lz = lz77(t.subspan(static_cast<std::size_t>(from), static_cast<std::size_t>(to - from)));
  return pc;
}

// Union of all qualifying intervals, encoded through the greedy selection that
// keeps every component in at most two selected intervals. Returns nothing when
// the interval scan exceeds a nonnegative cell budget.
inline std::optional<PeriodCover> cover_minimal_within(View t, const BlackIndexing& idx, const WeightFunction& wf,
                                                       Index k, std::int64_t budget) {
  const Index bc = idx.bc;
  PeriodCover cover;
  cover.in.assign(static_cast<std::size_t>(bc), 0);
  std::vector<std::pair<Index, Index>> general;
  std::vector<std::pair<Index, Index>> best(4, {-1, -1});
  const bool complete = for_each_cover_interval(t, idx, wf, k, [&](Index a, Index b, bool boundary) {
    for (Index c = a; c <= b; ++c) cover.in[static_cast<std::size_t>(c)] = 1;
    if (boundary) {
      // Keep the widest interval per boundary condition.
      if (a == 0 && (best[0].first < 0 || b > best[0].second)) best[0] = {a, b};
      if (b == bc - 1 && (best[1].first < 0 || a < best[1].first)) best[1] = {a, b};
      if (b == idx.cLast && (best[2].first < 0 || a < best[2].first)) best[2] = {a, b};
      if (a == idx.cLast + 1 && (best[3].first < 0 || b > best[3].second)) best[3] = {a, b};
    }
    general.push_back({a, b});
  }, budget);
  if (!complete) return std::nullopt;
  std::vector<std::pair<Index, Index>> chosen;
  for (auto& iv : best)
    if (iv.first >= 0) chosen.push_back(iv);
  // Greedy chain over the remaining intervals, skipping those already inside a
  // chosen boundary interval.
  auto inside = [&](const std::pair<Index, Index>& iv) {
    for (auto& c : chosen)
      if (c.first <= iv.first && iv.second <= c.second) return true;
    return false;
  };
  std::vector<std::pair<Index, Index>> rest;
  for (auto& iv : general)
    if (!inside(iv)) rest.push_back(iv);
  if (!rest.empty()) {
    auto cur = *std::min_element(rest.begin(), rest.end());
    for (auto& iv : rest)
      if (iv.first == cur.first) cur.second = std::max(cur.second, iv.second);
    chosen.push_back(cur);
    for (;;) {
      std::optional<std::pair<Index, Index>> next;
      for (auto& iv : rest)
        if (cur.first < iv.first && iv.first <= cur.second && cur.second < iv.second)
          if (!next || iv.second > next->second) next = iv;
      if (!next)
        for (auto& iv : rest)
          if (iv.first > cur.second && (!next || iv.first < next->first || (iv.first == next->first && iv.second > next->second)))
            next = iv;
      if (!next) break;
      cur = *next;
      chosen.push_back(cur);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  cover.intervals = chosen;
  for (auto& [a, b] : chosen) cover.pieces.push_back(forward_piece(t, idx.tS[a], idx.tS[b] + 1));
  return cover;
}

inline PeriodCover cover_minimal(View t, const BlackIndexing& idx, const WeightFunction& wf, Index k) {
  return *cover_minimal_within(t, idx, wf, k, -1);
}

namespace detail {

// Phrases of a parse needed to reach `need` symbols.
inline LZFactorization lz_prefix_phrases(const LZFactorization& f, Index need) {
  LZFactorization out;
  Index len = 0;
  for (const LZPhrase& p : f) {
    if (len >= need) break;
    out.push_back(p);
    len += p.length();
  }
  return out;
}

struct RecursiveCoverBuilder {
  View t;
  const BlackIndexing& idx;
  const WeightFunction& wf;
  PeriodCover& cover;

  Index tau0(Index c) const { return idx.tS[static_cast<std::size_t>(c)]; }

  void mark(Index a, Index b) {
    if (a > b) return;
    for (Index c = a; c <= b; ++c) cover.in[static_cast<std::size_t>(c)] = 1;
    cover.intervals.push_back({a, b});
  }

  // Smallest c in [lo, anchor] with |LZ(rev T[tau0(c)..tau0(anchor)])| <= z.
  Index extend_left(Index lo, Index anchor, Index z) {
    if (z <= 0) return anchor + 1;
    LZBounded r = lz_bounded_prefix(t, tau0(anchor), z, Direction::Reversed);
    Index c = anchor;
    while (c > lo && tau0(c - 1) > tau0(anchor) - r.extent) --c;
    Index need = tau0(anchor) - tau0(c) + 1;
    cover.pieces.push_back({tau0(anchor), true, lz_prefix_phrases(r.phrases, need)});
    return c;
  }

  // Largest c in [from, hi] with |LZ(T[start..tau0(c)])| <= z.
  Index extend_right(Index start, Index from, Index hi, Index z) {
    if (z <= 0) return from - 1;
    if (start >= static_cast<Index>(t.size())) return from - 1;
    LZBounded r = lz_bounded_prefix(t, start, z, Direction::Forward);
    Index c = from - 1;
    while (c < hi && tau0(c + 1) < start + r.extent) ++c;
    if (c >= from) {
      Index need = tau0(c) - start + 1;
      cover.pieces.push_back({start, false, lz_prefix_phrases(r.phrases, need)});
    }
    return c;
  }

  void recurse(Index i, Index j) {
    const Index W = wf.range(i - 1, j);
    if (W == 0) return;
    if (i == j) {
      mark(i, i);
      // The component's first character is learned from a one-symbol piece.
      cover.pieces.push_back({tau0(i), false, {LZPhrase{true, t[static_cast<std::size_t>(tau0(i))], 0, 0}}});
      return;
    }
    const Index h = (i + j) / 2;
    Index ip = extend_left(i, h, 12 * W);
    Index jp = extend_right(tau0(h) + 1, h + 1, j, 12 * W);
    mark(std::min(ip, h), std::max(jp, h));
    recurse(i, h);
    recurse(h + 1, j);
  }
};

}  // namespace detail

inline PeriodCover cover_recursive(View t, const BlackIndexing& idx, const WeightFunction& wf, Index k) {
  const Index bc = idx.bc;
  PeriodCover cover;
  cover.in.assign(static_cast<std::size_t>(bc), 0);
  detail::RecursiveCoverBuilder b{t, idx, wf, cover};
  const Index Z = 12 * wf.total + 22 * k;
  if (Z > 0) {
    Index cpref = b.extend_right(b.tau0(0), 0, bc - 1, Z);
    b.mark(0, cpref);
    Index csuff = b.extend_left(0, bc - 1, Z);
    b.mark(csuff, bc - 1);
    Index clsuff = b.extend_left(0, idx.cLast, Z);
    Index clpref = idx.cLast;
    if (idx.cLast + 1 < bc) clpref = std::max(idx.cLast, b.extend_right(b.tau0(idx.cLast + 1), idx.cLast + 1, bc - 1, Z));
    b.mark(clsuff, clpref);
  }
  b.recurse(0, bc - 1);
  std::sort(cover.intervals.begin(), cover.intervals.end());
  cover.intervals.erase(std::unique(cover.intervals.begin(), cover.intervals.end()), cover.intervals.end());
  return cover;
}

// ---------------------------------------------------------------------------
// Capture test and masking

inline bool captures(const BlackIndexing* idx, const WeightFunction* wf, Index k, Index t) {
  if (idx == nullptr || idx->bc == 0) return true;
  const Index target = t + idx->pS.front();
  const Index slack = wf->total + 3 * k;
  // tau(0, i) is increasing in i; find the one closest to target.
  Index lo = 0, hi = idx->n0();
  while (lo < hi) {
    Index mid = (lo + hi) / 2;
    if (idx->tau(0, mid) < target) lo = mid + 1;
    else hi = mid;
  }
  for (Index i : {lo - 1, lo})
    if (i >= 0 && i < idx->n0() && std::abs(idx->tau(0, i) - target) <= slack) return true;
  return false;
}

// Hypothesis of the halving step: the new start is far from every tau(0, i) with
// i in [0, n0 - m0].
inline bool far_from_captured(const BlackIndexing& idx, const WeightFunction& wf, Index k, Index t) {
  const Index target = t + idx.pS.front();
  for (Index i = 0; i <= idx.n0() - idx.m0(); ++i)
    if (std::abs(idx.tau(0, i) - target) <= wf.total + 2 * k) return false;
  return true;
}

struct MaskedPair {
  Str p;
  Str t;
};

inline MaskedPair mask(View p, View t, const AlignmentGraph& g, const PeriodCover& cover, Symbol maskBase) {
  MaskedPair out{Str(p.begin(), p.end()), Str(t.begin(), t.end())};
  for (Index x = 0; x < g.m; ++x) {
    Index c = g.black_of_p(x);
    if (c >= 0 && !cover.in[static_cast<std::size_t>(c)]) out.p[x] = maskBase + static_cast<Symbol>(c);
  }
  for (Index y = 0; y < g.L; ++y) {
    Index c = g.black_of_t(y);
    if (c >= 0 && !cover.in[static_cast<std::size_t>(c)]) out.t[y] = maskBase + static_cast<Symbol>(c);
  }
  return out;
}

// Alignment of block j of P onto block i of the window, pieced together from
// optimal alignments between consecutive black positions.
inline Alignment block_alignment(View p, View t, const BlackIndexing& idx, const WeightFunction& wf, Index j, Index i) {
  const Index bc = idx.bc;
  if (j < 0 || j >= idx.m0() || i < 0 || i >= idx.n0()) throw Error(Errc::OutOfRange, "block index");
  if (i == idx.n0() - 1 && j != idx.m0() - 1) throw Error(Errc::PreconditionFailed, "last text block needs last pattern block");
  const Index lastC = (j == idx.m0() - 1) ? idx.cLast : bc - 1;
  Alignment a;
  a.points.push_back({idx.pi(0, j), idx.tau(0, i)});
  for (Index c = 0; c < lastC; ++c) {
    const Index pa = idx.pi(c, j), pb = idx.pS[c + 1 + j * bc];
    const Index ta = idx.tau(c, i), tb = idx.tS[c + 1 + i * bc];
    Distance d = edit_distance_full(p.subspan(pa, pb - pa), t.subspan(ta, tb - ta), pa, ta);
    a.points.insert(a.points.end(), d.alignment.points.begin() + 1, d.alignment.points.end());
  }
  if (j == idx.m0() - 1) {
    a.points.push_back({idx.pi(lastC, j) + 1, idx.tau(lastC, i) + 1});
  } else {
    const Index pa = idx.pi(lastC, j), pb = idx.pS[lastC + 1 + j * bc];
    const Index ta = idx.tau(lastC, i), tb = idx.tS[lastC + 1 + i * bc];
    Distance d = edit_distance_full(p.subspan(pa, pb - pa), t.subspan(ta, tb - ta), pa, ta);
    a.points.insert(a.points.end(), d.alignment.points.begin() + 1, d.alignment.points.end());
  }
  if (alignment_cost(a, p, t) > wf.total) throw Error(Errc::InternalInvariantBroken, "block alignment above total weight");
  return a;
}

}  // namespace epm
