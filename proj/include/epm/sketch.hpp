#pragma once

#include <cmath>
#include <cstdint>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "compress.hpp"
#include "edit.hpp"
#include "graph.hpp"
#include "matcher.hpp"
#include "strings.hpp"

namespace epm {

// ---------------------------------------------------------------------------
// Records

enum class WindowKind : std::uint8_t { Empty = 0, Raw = 1, Single = 2, Structured = 3 };

inline const char* window_kind_name(WindowKind k) {
  switch (k) {
    case WindowKind::Empty: return "EMPTY";
    case WindowKind::Raw: return "RAW";
    case WindowKind::Single: return "SINGLE";
    case WindowKind::Structured: return "STRUCTURED";
  }
  return "?";
}

struct WindowRecord {
  WindowKind kind = WindowKind::Empty;
  Index start = 0;  // window offset in the text (RAW, STRUCTURED)
  Index length = 0;
  Str symbols;  // RAW
  CostedOccurrence single;
  std::vector<WindowAlignment> items;  // STRUCTURED, window-relative
  std::size_t pref = 0, suf = 0;
  std::vector<std::pair<Index, Index>> intervals;
  std::vector<CoverPiece> pieces;
};

struct Sketch {
  static constexpr std::uint8_t kVersion = 1;
  Index n = 0, m = 0, k = 0;
  Index alphabetSize = 0;
  bool chars = false;
  Str pattern;  // present only when some window is RAW
  std::vector<WindowRecord> windows;

  bool has_raw() const {
    for (const WindowRecord& w : windows)
      if (w.kind == WindowKind::Raw) return true;
    return false;
  }
};

// ---------------------------------------------------------------------------
// Alphabet reduction. By default the pattern's distinct symbols are ranked and
// every other symbol becomes one extra code; with chars the codes are kept.

struct Reduced {
  Str p, t;
  Index alphabetSize = 0;
};

inline Reduced reduce_alphabet(View p, View t, bool chars) {
  Reduced r;
  if (chars) {
    r.p.assign(p.begin(), p.end());
    r.t.assign(t.begin(), t.end());
    Symbol mx = 0;
    for (Symbol c : p) mx = std::max(mx, c);
    for (Symbol c : t) mx = std::max(mx, c);
    r.alphabetSize = static_cast<Index>(mx) + 1;
  } else {
    Str sigma(p.begin(), p.end());
    std::sort(sigma.begin(), sigma.end());
    sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
    const Symbol other = static_cast<Symbol>(sigma.size());
    auto code = [&](Symbol c) {
      auto it = std::lower_bound(sigma.begin(), sigma.end(), c);
      return it != sigma.end() && *it == c ? static_cast<Symbol>(it - sigma.begin()) : other;
    };
    for (Symbol c : p) r.p.push_back(code(c));
    for (Symbol c : t) r.t.push_back(code(c));
    r.alphabetSize = static_cast<Index>(sigma.size()) + 1;
  }
  if (r.alphabetSize + 2 * (static_cast<Index>(p.size()) + static_cast<Index>(t.size())) >= kReservedBase)
    throw Error(Errc::InputError, "alphabet too large for mask codes");
  return r;
}

// Symbol of the reduced alphabet for a raw input symbol.
inline Symbol reduce_symbol(View p, Symbol c) {
  Str sigma(p.begin(), p.end());
  std::sort(sigma.begin(), sigma.end());
  sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
  auto it = std::lower_bound(sigma.begin(), sigma.end(), c);
  return it != sigma.end() && *it == c ? static_cast<Symbol>(it - sigma.begin()) : static_cast<Symbol>(sigma.size());
}

// ---------------------------------------------------------------------------
// Window splitting

struct WindowPlan {
  bool raw = false;
  Index block = 0;
  Index count = 0;
};

inline WindowPlan plan_windows(Index n, Index m, Index k) {
  WindowPlan w;
  if (4 * k > m) {
    w.raw = true;
    w.count = 1;
    return w;
  }
  w.block = m - 3 * k;
  w.count = std::max<Index>(1, (n + w.block - 1) / w.block);
  return w;
}

// ---------------------------------------------------------------------------
// Diagnostics

struct InvariantLog {
  std::mutex mu;
  std::vector<std::string> entries;
  void add(std::string s) {
    std::lock_guard<std::mutex> g(mu);
    entries.push_back(std::move(s));
  }
};

// Per-window structural checks collected while encoding.
struct WindowAudit {
  Index window = 0;
  Index sSize = 0;
  std::vector<Index> bcTrace;
  Index weightTotal = 0;
  bool congruence = true;
  bool weightBound = true;
  bool halving = true;
  bool sizeBound = true;
  bool coverRecursive = true;
  bool coverMinimal = true;
  bool masked = true;
  std::string failure;

  bool ok() const { return congruence && weightBound && halving && sizeBound && coverRecursive && coverMinimal && masked; }
};

// Smallest keeps whichever of the two covers encodes in fewer phrases. Its scan
// for the minimal cover gets a budget of smallestScanCells DP cells per window
// and keeps the recursive cover when the scan gives up.
enum class CoverKind { Smallest, Recursive, Minimal };

struct EncodeOptions {
  bool chars = false;
  CoverKind cover = CoverKind::Smallest;
  std::int64_t smallestScanCells = 1'500'000'000;
  int threads = 1;
  bool selfCheck = true;
  InvariantLog* log = nullptr;
  std::vector<WindowAudit>* audit = nullptr;
};

// ---------------------------------------------------------------------------
// Decoding a single window

namespace detail {

inline Index count_black(const AlignmentGraph& g) {
  Index c = 0;
  for (std::size_t v = 0; v < g.comp.size(); ++v)
    if (g.comp[v] == static_cast<Index>(v) && !g.red[v]) ++c;
  return c;
}

inline AlignmentSet to_set(const WindowRecord& w, Index m, Index k) {
  AlignmentSet s;
  s.m = m;
  s.L = w.length;
  s.k = k;
  s.items = w.items;
  s.pref = w.pref;
  s.suf = w.suf;
  return s;
}

// ceil(log2 m) + 2
inline Index max_set_size(Index m) {
  Index b = 0;
  while ((Index{1} << b) < m) ++b;
  return b + 2;
}

// Rebuilds P# and T# of a STRUCTURED window from its payload alone.
inline MaskedPair rebuild_masked(const WindowRecord& w, Index m, Index k, Index maskBase) {
  AlignmentSet s = to_set(w, m, k);
  if (!s.encloses()) throw Error(Errc::Corrupt, "structured window does not enclose its span");
  if (s.pref >= s.items.size() || s.suf >= s.items.size()) throw Error(Errc::Corrupt, "pref/suf index");
  AlignmentGraph g;
  try {
    g = build_graph(s);
  } catch (const Error& e) {
    throw Error(Errc::Corrupt, e.what());
  }
  const Index L = w.length;
  // Characters carried by edit records, propagated along matching steps.
  DisjointSets ds(static_cast<std::size_t>(m + L));
  std::vector<std::pair<Index, Symbol>> facts;
  for (const WindowAlignment& a : s.items)
    for_each_step(a.edits, Span{0, m}, Span{a.t, a.t2}, [&](StepKind kind, Index x, Index y, const EditRecord* r) {
      switch (kind) {
        case StepKind::Match: ds.unite(static_cast<std::size_t>(x), static_cast<std::size_t>(m + y)); break;
        case StepKind::Sub:
          facts.push_back({x, r->cx});
          facts.push_back({m + y, r->cy});
          break;
        case StepKind::Del: facts.push_back({x, r->cx}); break;
        case StepKind::Ins: facts.push_back({m + y, r->cy}); break;
      }
    });
  std::vector<Symbol> classChar(static_cast<std::size_t>(m + L), kEpsilon);
  for (auto& [v, c] : facts) {
    Symbol& slot = classChar[ds.find(static_cast<std::size_t>(v))];
    if (slot != kEpsilon && slot != c) throw Error(Errc::Corrupt, "conflicting characters in edit records");
    slot = c;
  }
  MaskedPair out{Str(static_cast<std::size_t>(m), kEpsilon), Str(static_cast<std::size_t>(L), kEpsilon)};
  std::vector<Symbol> learned;
  std::vector<char> in;
  Index bc = count_black(g);
  BlackIndexing idx;
  if (bc > 0) {
    try {
      idx = black_indexing(g);
    } catch (const Error& e) {
      throw Error(Errc::Corrupt, e.what());
    }
    in.assign(static_cast<std::size_t>(bc), 0);
    for (auto& [a, b] : w.intervals) {
      if (a < 0 || b >= bc || a > b) throw Error(Errc::Corrupt, "cover interval");
      for (Index c = a; c <= b; ++c) in[c] = 1;
    }
    Str known(static_cast<std::size_t>(L), kEpsilon);
    for (const CoverPiece& pc : w.pieces) {
      Str text = lz_expand(pc.lz);
      for (std::size_t i = 0; i < text.size(); ++i) {
        const Index pos = pc.reversed ? pc.pos - static_cast<Index>(i) : pc.pos + static_cast<Index>(i);
        if (pos < 0 || pos >= L) throw Error(Errc::Corrupt, "cover piece outside window");
        known[pos] = text[i];
      }
    }
    learned.assign(static_cast<std::size_t>(bc), kEpsilon);
    for (Index c = 0; c < bc; ++c)
      if (in[c]) {
        learned[c] = known[idx.tau(c, 0)];
        if (learned[c] == kEpsilon) throw Error(Errc::Corrupt, "cover component without learned character");
      }
  }
  auto value = [&](Index v) -> Symbol {
    const Index rep = g.comp[v];
    if (!g.red[rep]) {
      const Index c = g.blackId[rep];
      return in[c] ? learned[c] : static_cast<Symbol>(maskBase + c);
    }
    Symbol s = classChar[ds.find(static_cast<std::size_t>(v))];
    if (s == kEpsilon) throw Error(Errc::Corrupt, "character of a red component is not determined");
    return s;
  };
  for (Index x = 0; x < m; ++x) out.p[x] = value(x);
  for (Index y = 0; y < L; ++y) out.t[y] = value(m + y);
  return out;
}

inline void shift_occurrence(CostedOccurrence& o, Index by) {
  o.t += by;
  o.t2 += by;
  for (EditRecord& r : o.edits.records) r.y += by;
}

}  // namespace detail

inline std::vector<CostedOccurrence> decode_window(const WindowRecord& w, const Sketch& s, const MatchOptions& opt = {}) {
  std::vector<CostedOccurrence> out;
  switch (w.kind) {
    case WindowKind::Empty: break;
    case WindowKind::Single: out.push_back(w.single); break;
    case WindowKind::Raw: {
      if (s.pattern.size() != static_cast<std::size_t>(s.m)) throw Error(Errc::Corrupt, "RAW window without pattern");
      out = match_banded(s.pattern, w.symbols, s.k, opt);
      for (auto& o : out) detail::shift_occurrence(o, w.start);
      break;
    }
    case WindowKind::Structured: {
      MaskedPair mp = detail::rebuild_masked(w, s.m, s.k, s.alphabetSize);
      out = match(mp.p, mp.t, s.k, opt);
      for (auto& o : out) detail::shift_occurrence(o, w.start);
      break;
    }
  }
  return out;
}

inline std::vector<CostedOccurrence> decode(const Sketch& s, const MatchOptions& opt = {}) {
  std::vector<CostedOccurrence> all;
  for (const WindowRecord& w : s.windows) {
    auto part = decode_window(w, s, opt);
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::stable_sort(all.begin(), all.end(), pair_less);
  all.erase(std::unique(all.begin(), all.end(), same_pair), all.end());
  return all;
}

// ---------------------------------------------------------------------------
// Encoding

namespace detail {

inline bool same_occurrences(const std::vector<CostedOccurrence>& a, const std::vector<CostedOccurrence>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_pair(a[i], b[i]) || a[i].cost != b[i].cost || a[i].edits != b[i].edits) return false;
  return true;
}

// Min cost, then smallest end, among pairs starting at `start` (sorted input).
inline const CostedOccurrence* best_at_start(const std::vector<CostedOccurrence>& occ, Index start) {
  auto it = std::lower_bound(occ.begin(), occ.end(), start, [](const CostedOccurrence& o, Index s) { return o.t < s; });
  const CostedOccurrence* best = nullptr;
  for (; it != occ.end() && it->t == start; ++it)
    if (!best || it->cost < best->cost) best = &*it;
  return best;
}

inline WindowAlignment make_alignment(View p, View tw, const CostedOccurrence& o, Index k) {
  return WindowAlignment{o.t, o.t2, occurrence_edits(p, tw, o.t, o.t2, k)};
}

// Pieces of one cover may overlap. Only the characters they reveal matter to
// the decoder, so the union is re-encoded as one forward piece per maximal run.
inline std::vector<CoverPiece> merge_pieces(View tw, const std::vector<CoverPiece>& pieces) {
  const Index L = static_cast<Index>(tw.size());
  std::vector<char> known(static_cast<std::size_t>(L), 0);
  for (const CoverPiece& pc : pieces) {
    Index len = 0;
    for (const LZPhrase& ph : pc.lz) len += ph.literal ? 1 : ph.len;
    const Index a = pc.reversed ? pc.pos - len + 1 : pc.pos;
    for (Index y = std::max<Index>(a, 0); y < std::min(L, a + len); ++y) known[y] = 1;
  }
  std::vector<CoverPiece> out;
  for (Index y = 0; y < L;) {
    if (!known[y]) {
      ++y;
      continue;
    }
    Index e = y;
    while (e < L && known[e]) ++e;
    out.push_back(forward_piece(tw, y, e));
    y = e;
  }
  return out;
}

// Grows S over the window and builds the STRUCTURED record. `occ` holds the
// window-relative occurrences (sorted, costs only).
inline WindowRecord encode_structured(View p, View tw, Index k, const std::vector<CostedOccurrence>& occ,
                                      Symbol maskBase, const EncodeOptions& opt, WindowAudit* audit) {
  const Index m = static_cast<Index>(p.size());
  const Index L = static_cast<Index>(tw.size());
  AlignmentSet s;
  s.m = m;
  s.L = L;
  s.k = k;
  const CostedOccurrence* xp = best_at_start(occ, 0);
  const CostedOccurrence* xs = nullptr;
  for (const CostedOccurrence& o : occ)
    if (o.t2 == L && (!xs || o.cost < xs->cost || (o.cost == xs->cost && o.t > xs->t))) xs = &o;
  if (!xp || !xs) throw Error(Errc::InternalInvariantBroken, "window span without enclosing occurrences");
  s.items.push_back(make_alignment(p, tw, *xp, k));
  s.pref = 0;
  if (same_pair(*xp, *xs)) {
    s.suf = 0;
  } else {
    s.items.push_back(make_alignment(p, tw, *xs, k));
    s.suf = 1;
  }
  const Index maxS = max_set_size(m);
  Index prevBc = -1;
  AlignmentGraph g;
  BlackIndexing idx;
  WeightFunction wf;
  Index bc = 0;
  for (;;) {
    g = build_graph(s);
    bc = count_black(g);
    if (audit) audit->bcTrace.push_back(bc);
    if (prevBc >= 0 && 2 * bc > prevBc) {
      if (audit) audit->halving = false;
      throw Error(Errc::InternalInvariantBroken, "black components did not halve");
    }
    if (bc == 0) break;
    try {
      idx = black_indexing(g);
    } catch (const Error&) {
      if (audit) audit->congruence = false;
      throw;
    }
    wf = weight_function(s, idx);
    // A shared X_pref = X_suf counts twice, as the logical duplicate it stands for.
    const Index logicalSize = static_cast<Index>(s.items.size()) + (s.pref == s.suf ? 1 : 0);
    if (wf.total > k * logicalSize) {
      if (audit) audit->weightBound = false;
      throw Error(Errc::InternalInvariantBroken, "weight above k|S|");
    }
    const CostedOccurrence* next = nullptr;
    for (const CostedOccurrence& o : occ)
      if (!captures(&idx, &wf, k, o.t)) {
        next = best_at_start(occ, o.t);
        break;
      }
    if (!next) break;
    if (!far_from_captured(idx, wf, k, next->t)) throw Error(Errc::RejectedCaptured, "new start is too close to S");
    s.items.push_back(make_alignment(p, tw, *next, k));
    if (static_cast<Index>(s.items.size()) > maxS) {
      if (audit) audit->sizeBound = false;
      throw Error(Errc::InternalInvariantBroken, "|S| above the logarithmic bound");
    }
    prevBc = bc;
  }
  WindowRecord rec;
  rec.kind = WindowKind::Structured;
  rec.length = L;
  rec.items = s.items;
  rec.pref = s.pref;
  rec.suf = s.suf;
  if (audit) {
    audit->sSize = static_cast<Index>(s.items.size());
    audit->weightTotal = bc > 0 ? wf.total : 0;
  }
  if (bc > 0) {
    PeriodCover rc = cover_recursive(tw, idx, wf, k);
    if (audit) {
      audit->coverRecursive = is_period_cover(rc, tw, idx, wf, k);
      PeriodCover mc = cover_minimal(tw, idx, wf, k);
      audit->coverMinimal = is_period_cover(mc, tw, idx, wf, k);
      // Both covers must preserve every occurrence with its edit information.
      for (const PeriodCover* c : {&rc, &mc}) {
        MaskedPair mp = mask(p, tw, g, *c, maskBase);
        auto got = match_banded(mp.p, mp.t, k);
        std::vector<CostedOccurrence> want = occ;
        attach_edits(p, tw, k, want);
        if (!same_occurrences(got, want)) audit->masked = false;
      }
    }
    // Only the union of the intervals is needed; store it as disjoint runs.
    auto compact = [&](PeriodCover& c) {
      std::pair<std::vector<std::pair<Index, Index>>, std::vector<CoverPiece>> out;
      std::sort(c.intervals.begin(), c.intervals.end());
      for (auto [a, b] : c.intervals) {
        if (!out.first.empty() && a <= out.first.back().second + 1)
          out.first.back().second = std::max(out.first.back().second, b);
        else
          out.first.push_back({a, b});
      }
      out.second = merge_pieces(tw, c.pieces);
      return out;
    };
    auto weight = [](const auto& c) {
      std::size_t w = 2 * c.first.size();
      for (const CoverPiece& pc : c.second) w += 2 + pc.lz.size();
      return w;
    };
    auto chosen = compact(rc);
    if (opt.cover != CoverKind::Recursive) {
      const std::int64_t budget = opt.cover == CoverKind::Minimal ? -1 : opt.smallestScanCells;
      if (std::optional<PeriodCover> mc = cover_minimal_within(tw, idx, wf, k, budget)) {
        auto alt = compact(*mc);
        if (opt.cover == CoverKind::Minimal || weight(alt) < weight(chosen)) chosen = std::move(alt);
      }
    }
    rec.intervals = std::move(chosen.first);
    rec.pieces = std::move(chosen.second);
  }
  return rec;
}

}  // namespace detail

// Encodes with a precomputed occurrence list (sorted by (t, t2), costs only).
inline Sketch encode_with_occurrences(View p, View t, Index k, Index alphabetSize, bool chars,
                                      const std::vector<CostedOccurrence>& occ, const EncodeOptions& opt = {}) {
  const Index n = static_cast<Index>(t.size());
  const Index m = static_cast<Index>(p.size());
  Sketch sk;
  sk.n = n;
  sk.m = m;
  sk.k = k;
  sk.alphabetSize = alphabetSize;
  sk.chars = chars;
  WindowPlan plan = plan_windows(n, m, k);
  if (plan.raw) {
    WindowRecord w;
    w.kind = WindowKind::Raw;
    w.start = 0;
    w.length = n;
    w.symbols.assign(t.begin(), t.end());
    sk.windows.push_back(std::move(w));
    sk.pattern.assign(p.begin(), p.end());
    return sk;
  }
  sk.windows.resize(static_cast<std::size_t>(plan.count));
  std::vector<WindowAudit> audits(opt.audit ? static_cast<std::size_t>(plan.count) : 0);
  auto encode_one = [&](Index i) {
    WindowRecord& rec = sk.windows[static_cast<std::size_t>(i)];
    const Index b = i * plan.block, bEnd = std::min(n, b + plan.block);
    auto lo = std::lower_bound(occ.begin(), occ.end(), b, [](const CostedOccurrence& o, Index s) { return o.t < s; });
    auto hi = std::lower_bound(lo, occ.end(), bEnd, [](const CostedOccurrence& o, Index s) { return o.t < s; });
    if (lo == hi) return;
    if (hi - lo == 1) {
      rec.kind = WindowKind::Single;
      rec.single = *lo;
      rec.single.edits = occurrence_edits(p, t, lo->t, lo->t2, k);
      rec.single.has_edits = true;
      return;
    }
    const Index ell = lo->t;
    Index r = ell;
    for (auto it = lo; it != hi; ++it) r = std::max(r, it->t2);
    View tw = t.subspan(static_cast<std::size_t>(ell), static_cast<std::size_t>(r - ell));
    // Every occurrence inside the cropped span, window-relative.
    std::vector<CostedOccurrence> rel;
    for (auto it = lo; it != occ.end() && it->t < r; ++it)
      if (it->t2 <= r) {
        CostedOccurrence o{it->t - ell, it->t2 - ell, it->cost, {}, false};
        rel.push_back(o);
      }
    WindowAudit* audit = opt.audit ? &audits[static_cast<std::size_t>(i)] : nullptr;
    if (audit) audit->window = i;
    try {
      rec = detail::encode_structured(p, tw, k, rel, static_cast<Symbol>(alphabetSize), opt, audit);
      rec.start = ell;
      if (opt.selfCheck) {
        Sketch probe;
        probe.m = m;
        probe.k = k;
        probe.alphabetSize = alphabetSize;
        auto got = decode_window(rec, probe);
        std::vector<CostedOccurrence> want = rel;
        attach_edits(p, tw, k, want);
        for (CostedOccurrence& o : want) detail::shift_occurrence(o, ell);
        if (!detail::same_occurrences(got, want))
          throw Error(Errc::InternalInvariantBroken, "structured window does not decode to its occurrences");
      }
    } catch (const Error& e) {
      if (e.code() != Errc::InternalInvariantBroken && e.code() != Errc::RejectedCaptured && e.code() != Errc::Corrupt) throw;
      if (opt.log) opt.log->add("window " + std::to_string(i) + ": " + e.what());
      if (audit && audit->failure.empty()) audit->failure = e.what();
      rec = WindowRecord{};
      rec.kind = WindowKind::Raw;
      rec.start = ell;
      rec.length = r - ell;
      rec.symbols.assign(tw.begin(), tw.end());
    }
  };
  detail::chunked<char>(plan.count, opt.threads, [&](Index a, Index b, std::vector<char>&) {
    for (Index i = a; i < b; ++i) encode_one(i);
  });
  if (sk.has_raw()) sk.pattern.assign(p.begin(), p.end());
  if (opt.audit)
    for (auto& a : audits)
      if (!a.bcTrace.empty() || !a.failure.empty()) opt.audit->push_back(std::move(a));
  return sk;
}

inline Sketch encode(View p, View t, Index k, const EncodeOptions& opt = {}) {
  if (k < 1) throw Error(Errc::PreconditionFailed, "encoding needs k >= 1");
  Reduced r = reduce_alphabet(p, t, opt.chars);
  std::vector<CostedOccurrence> occ;
  if (!plan_windows(static_cast<Index>(t.size()), static_cast<Index>(p.size()), k).raw)
    occ = match(r.p, r.t, k, MatchOptions{false, opt.threads});
  return encode_with_occurrences(r.p, r.t, k, r.alphabetSize, opt.chars, occ, opt);
}

// Verification routed through the masking machinery: windows are built from
// the candidate occurrences, then every window is decoded from P#/T# alone.
inline std::vector<CostedOccurrence> verify_candidates_masked(View p, View t, Index k, const CandidateSet& h,
                                                              const MatchOptions& mo = {}) {
  if (k < 1) return verify_candidates(p, t, k, h, mo);
  Reduced r = reduce_alphabet(p, t, true);
  auto occ = verify_candidates(r.p, r.t, k, h, MatchOptions{false, mo.threads});
  EncodeOptions eo;
  eo.chars = true;
  eo.threads = mo.threads;
  Sketch sk = encode_with_occurrences(r.p, r.t, k, r.alphabetSize, true, occ, eo);
  auto all = decode(sk, mo);
  std::vector<CostedOccurrence> out;
  for (auto& o : all)
    if (h.contains(o.t)) out.push_back(std::move(o));
  return out;
}

// ---------------------------------------------------------------------------
// Binary format

namespace detail {

class ByteWriter {
 public:
  void byte(std::uint8_t b) { out_.push_back(static_cast<char>(b)); }
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      byte(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    byte(static_cast<std::uint8_t>(v));
  }
  void index(Index v) {
    if (v < 0) throw Error(Errc::Invalid, "negative value in sketch");
    varint(static_cast<std::uint64_t>(v));
  }
  void zigzag(Index v) { varint((static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63)); }
  void symbol(Symbol s) { varint(s == kEpsilon ? 0 : static_cast<std::uint64_t>(s) + 1); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}
  std::uint8_t byte() {
    if (pos_ >= in_.size()) throw Error(Errc::Corrupt, "truncated sketch");
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      std::uint8_t b = byte();
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if (!(b & 0x80)) return v;
    }
    throw Error(Errc::Corrupt, "overlong varint");
  }
  Index index(Index limit = std::numeric_limits<Index>::max()) {
    std::uint64_t v = varint();
    if (v > static_cast<std::uint64_t>(limit)) throw Error(Errc::Corrupt, "value out of range");
    return static_cast<Index>(v);
  }
  Index zigzag() {
    std::uint64_t v = varint();
    return static_cast<Index>(v >> 1) ^ -static_cast<Index>(v & 1);
  }
  Symbol symbol() {
    std::uint64_t v = varint();
    if (v == 0) return kEpsilon;
    if (v - 1 >= kReservedBase) throw Error(Errc::Corrupt, "symbol out of range");
    return static_cast<Symbol>(v - 1);
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

// Records store x as a delta from the previous record and the diagonal drift
// y - start - x, which stays within [-k, k].
inline void write_edits(ByteWriter& w, const EditInfo& e, Index start) {
  w.index(static_cast<Index>(e.records.size()));
  Index px = 0;
  for (const EditRecord& r : e.records) {
    w.index(r.x - px);
    w.zigzag(r.y - start - r.x);
    w.symbol(r.cx);
    w.symbol(r.cy);
    px = r.x;
  }
}

inline EditInfo read_edits(ByteReader& rd, Index start, Index limit) {
  EditInfo e;
  const Index cnt = rd.index(limit);
  Index px = 0;
  for (Index i = 0; i < cnt; ++i) {
    EditRecord r;
    r.x = px + rd.index(limit);
    r.y = start + r.x + rd.zigzag();
    r.cx = rd.symbol();
    r.cy = rd.symbol();
    px = r.x;
    e.records.push_back(r);
  }
  e.identity = e.records.empty();
  return e;
}

inline void write_lz(ByteWriter& w, const LZFactorization& f) {
  w.index(static_cast<Index>(f.size()));
  for (const LZPhrase& ph : f) {
    w.byte(ph.literal ? 0 : 1);
    if (ph.literal) {
      w.symbol(ph.sym);
    } else {
      w.index(ph.src);
      w.index(ph.len);
    }
  }
}

inline LZFactorization read_lz(ByteReader& rd, Index limit) {
  LZFactorization f;
  const Index cnt = rd.index(limit);
  for (Index i = 0; i < cnt; ++i) {
    LZPhrase ph;
    const std::uint8_t tag = rd.byte();
    if (tag > 1) throw Error(Errc::Corrupt, "LZ tag");
    ph.literal = tag == 0;
    if (ph.literal) {
      ph.sym = rd.symbol();
    } else {
      ph.src = rd.index(limit);
      ph.len = rd.index(limit);
    }
    f.push_back(ph);
  }
  return f;
}

}  // namespace detail

inline std::string serialize(const Sketch& s) {
  detail::ByteWriter w;
  for (char c : std::string_view("EPMS")) w.byte(static_cast<std::uint8_t>(c));
  w.byte(Sketch::kVersion);
  w.index(s.n);
  w.index(s.m);
  w.index(s.k);
  w.index(s.alphabetSize);
  w.index(static_cast<Index>(s.windows.size()));
  const bool rawP = s.has_raw();
  w.byte(static_cast<std::uint8_t>((s.chars ? 1 : 0) | (rawP ? 2 : 0)));
  if (rawP)
    for (Symbol c : s.pattern) w.symbol(c);
  for (const WindowRecord& r : s.windows) {
    w.byte(static_cast<std::uint8_t>(r.kind));
    switch (r.kind) {
      case WindowKind::Empty: break;
      case WindowKind::Raw:
        w.index(r.start);
        w.index(static_cast<Index>(r.symbols.size()));
        for (Symbol c : r.symbols) w.symbol(c);
        break;
      case WindowKind::Single:
        w.index(r.single.t);
        w.index(r.single.t2 - r.single.t);
        detail::write_edits(w, r.single.edits, r.single.t);
        break;
      case WindowKind::Structured:
        w.index(r.start);
        w.index(r.length);
        w.index(static_cast<Index>(r.items.size()));
        for (const WindowAlignment& a : r.items) {
          w.index(a.t);
          w.index(a.t2 - a.t);
          detail::write_edits(w, a.edits, a.t);
        }
        w.index(static_cast<Index>(r.pref));
        w.index(static_cast<Index>(r.suf));
        w.index(static_cast<Index>(r.intervals.size()));
        for (auto& [a, b] : r.intervals) {
          w.index(a);
          w.index(b - a);
        }
        w.index(static_cast<Index>(r.pieces.size()));
        for (const CoverPiece& pc : r.pieces) {
          w.index(pc.pos);
          w.byte(pc.reversed ? 1 : 0);
          detail::write_lz(w, pc.lz);
        }
        break;
    }
  }
  return w.take();
}

inline Sketch deserialize(std::string_view bytes) {
  detail::ByteReader rd(bytes);
  for (char c : std::string_view("EPMS"))
    if (rd.byte() != static_cast<std::uint8_t>(c)) throw Error(Errc::Corrupt, "bad magic");
  const std::uint8_t version = rd.byte();
  if (version != Sketch::kVersion) throw Error(Errc::Unsupported, "sketch version " + std::to_string(version));
  Sketch s;
  const Index big = Index{1} << 40;
  s.n = rd.index(big);
  s.m = rd.index(big);
  s.k = rd.index(big);
  s.alphabetSize = rd.index(kReservedBase);
  const Index count = rd.index(s.n + 1);
  const std::uint8_t flags = rd.byte();
  if (flags > 3) throw Error(Errc::Corrupt, "header flags");
  s.chars = flags & 1;
  const Index lim = s.n + s.m + s.k + 1;
  if (flags & 2)
    for (Index i = 0; i < s.m; ++i) s.pattern.push_back(rd.symbol());
  for (Index i = 0; i < count; ++i) {
    WindowRecord r;
    const std::uint8_t tag = rd.byte();
    if (tag > 3) throw Error(Errc::Corrupt, "window tag");
    r.kind = static_cast<WindowKind>(tag);
    switch (r.kind) {
      case WindowKind::Empty: break;
      case WindowKind::Raw: {
        r.start = rd.index(s.n);
        r.length = rd.index(s.n - r.start);
        for (Index j = 0; j < r.length; ++j) r.symbols.push_back(rd.symbol());
        break;
      }
      case WindowKind::Single: {
        CostedOccurrence& o = r.single;
        o.t = rd.index(s.n);
        o.t2 = o.t + rd.index(s.n - o.t);
        o.edits = detail::read_edits(rd, o.t, lim);
        o.cost = o.edits.cost();
        o.has_edits = true;
        break;
      }
      case WindowKind::Structured: {
        r.start = rd.index(s.n);
        r.length = rd.index(s.n - r.start);
        const Index items = rd.index(lim);
        for (Index j = 0; j < items; ++j) {
          WindowAlignment a;
          a.t = rd.index(r.length);
          a.t2 = a.t + rd.index(r.length - a.t);
          a.edits = detail::read_edits(rd, a.t, lim);
          r.items.push_back(std::move(a));
        }
        r.pref = static_cast<std::size_t>(rd.index(items));
        r.suf = static_cast<std::size_t>(rd.index(items));
        const Index ni = rd.index(lim);
        for (Index j = 0; j < ni; ++j) {
          Index a = rd.index(lim);
          r.intervals.push_back({a, a + rd.index(lim)});
        }
        const Index np = rd.index(lim);
        for (Index j = 0; j < np; ++j) {
          CoverPiece pc;
          pc.pos = rd.index(r.length);
          const std::uint8_t dir = rd.byte();
          if (dir > 1) throw Error(Errc::Corrupt, "piece direction");
          pc.reversed = dir == 1;
          pc.lz = detail::read_lz(rd, lim);
          r.pieces.push_back(std::move(pc));
        }
        break;
      }
    }
    s.windows.push_back(std::move(r));
  }
  if (!rd.done()) throw Error(Errc::Corrupt, "trailing bytes");
  return s;
}

inline Index sketch_size_bits(const Sketch& s) { return static_cast<Index>(serialize(s).size()) * 8; }

// ---------------------------------------------------------------------------
// Lower-bound family: P = 0^m and T = S_0 S_0 S_1 S_1 ... padded with zeros,
// each S_q of length m - 1 holding exactly k ones.

struct LowerBoundInstance {
  Index n = 0, m = 0, k = 0;
  std::uint64_t seed = 0;
  Str p, t;
  std::vector<Str> planted;
};

inline LowerBoundInstance gen_lower_bound(Index n, Index m, Index k, std::uint64_t seed) {
  if (!(k > 0 && m > k && 2 * m <= n)) throw Error(Errc::BadParams, "need n/2 >= m > k > 0");
  LowerBoundInstance inst{n, m, k, seed, Str(static_cast<std::size_t>(m), 0), {}, {}};
  std::mt19937_64 rng(seed);
  const Index blocks = n / (2 * m - 2);
  std::vector<Index> pos(static_cast<std::size_t>(m - 1));
  for (Index q = 0; q < blocks; ++q) {
    std::iota(pos.begin(), pos.end(), Index{0});
    // Partial Fisher-Yates: the first k entries are a uniform k-subset.
    for (Index i = 0; i < k; ++i) {
      std::uniform_int_distribution<Index> pick(i, m - 2);
      std::swap(pos[i], pos[pick(rng)]);
    }
    Str s(static_cast<std::size_t>(m - 1), 0);
    for (Index i = 0; i < k; ++i) s[pos[i]] = 1;
    inst.t.insert(inst.t.end(), s.begin(), s.end());
    inst.t.insert(inst.t.end(), s.begin(), s.end());
    inst.planted.push_back(std::move(s));
  }
  inst.t.resize(static_cast<std::size_t>(n), 0);
  return inst;
}

// S_q[i] = 0 exactly when q(2m - 2) + i starts a k-error occurrence.
inline std::vector<Str> recover_planted(const std::vector<CostedOccurrence>& occ, Index n, Index m, Index k) {
  if (!(k > 0 && m > k && 2 * m <= n)) throw Error(Errc::BadParams, "need n/2 >= m > k > 0");
  std::vector<char> starts(static_cast<std::size_t>(n + 1), 0);
  for (const CostedOccurrence& o : occ) {
    if (o.t < 0 || o.t > n) throw Error(Errc::NotFromFamily, "occurrence outside the text");
    starts[o.t] = 1;
  }
  const Index blocks = n / (2 * m - 2);
  std::vector<Str> out;
  for (Index q = 0; q < blocks; ++q) {
    Str s(static_cast<std::size_t>(m - 1), 0);
    Index ones = 0;
    for (Index i = 0; i + 1 < m; ++i)
      if (!starts[q * (2 * m - 2) + i]) {
        s[i] = 1;
        ++ones;
      }
    if (ones != k) throw Error(Errc::NotFromFamily, "block " + std::to_string(q) + " does not hold exactly k ones");
    out.push_back(std::move(s));
  }
  return out;
}

// log2 of the number of instances, p * log2 C(m - 1, k).
inline double lower_bound_bits(Index n, Index m, Index k) {
  const double blocks = static_cast<double>(n / (2 * m - 2));
  const double lc = std::lgamma(static_cast<double>(m)) - std::lgamma(static_cast<double>(k + 1)) -
                    std::lgamma(static_cast<double>(m - k));
  return blocks * lc / std::log(2.0);
}

}  // namespace epm
