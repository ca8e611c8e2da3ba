#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace epm {

using Symbol = std::uint32_t;
using Str = std::vector<Symbol>;
using View = std::span<const Symbol>;
using Index = std::int64_t;

// Codes at or above kReservedBase never come from input. Mask characters are
// allocated right above the (dense) input alphabet, which keeps them far below
// this range.
inline constexpr Symbol kEpsilon = 0xFFFFFFFFu;
inline constexpr Symbol kSentinel = 0xFFFFFFFEu;
inline constexpr Symbol kSeparator = 0xFFFFFFFDu;
inline constexpr Symbol kReservedBase = 0xF0000000u;

enum class Errc {
  EmptyString,
  PreconditionFailed,
  Invalid,
  DomainMismatch,
  OutOfRange,
  Corrupt,
  Unsupported,
  NoBlackComponents,
  InternalInvariantBroken,
  RejectedCaptured,
  BadParams,
  NotFromFamily,
  InputError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EmptyString: return "EmptyString";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::Invalid: return "Invalid";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::Corrupt: return "Corrupt";
    case Errc::Unsupported: return "Unsupported";
    case Errc::NoBlackComponents: return "NoBlackComponents";
    case Errc::InternalInvariantBroken: return "InternalInvariantBroken";
    case Errc::RejectedCaptured: return "RejectedCaptured";
    case Errc::BadParams: return "BadParams";
    case Errc::NotFromFamily: return "NotFromFamily";
    case Errc::InputError: return "InputError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool cond, Errc code, const char* what) {
  if (!cond) throw Error(code, what);
}

// Half-open window [start, end) of a parent string.
struct Fragment {
  const Str* parent = nullptr;
  Index start = 0;
  Index end = 0;

  Fragment() = default;
  Fragment(const Str& p, Index s, Index e) : parent(&p), start(s), end(e) {
    if (s < 0 || s > e || e > static_cast<Index>(p.size()))
      throw Error(Errc::OutOfRange, "fragment bounds");
  }
  explicit Fragment(const Str& p) : Fragment(p, 0, static_cast<Index>(p.size())) {}

  Index size() const { return end - start; }
  View view() const { return View(parent->data() + start, static_cast<std::size_t>(size())); }
  Str str() const { return Str(parent->begin() + start, parent->begin() + end); }
  Symbol operator[](Index i) const { return (*parent)[static_cast<std::size_t>(start + i)]; }
};

inline Str from_bytes(std::string_view s) {
  Str out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(c);
  return out;
}

inline std::string to_bytes(View s) {
  std::string out;
  out.reserve(s.size());
  for (Symbol c : s) out.push_back(static_cast<char>(c & 0xFF));
  return out;
}

inline Str slice(View s, Index from, Index to) {
  return Str(s.begin() + from, s.begin() + to);
}

inline Str reversed(View s) { return Str(s.rbegin(), s.rend()); }

// Dense remapping of arbitrary input codes onto [0, size()).
class Alphabet {
 public:
  Alphabet() = default;

  template <class... Views>
  static Alphabet of(const Views&... inputs) {
    Alphabet a;
    (a.collect(inputs), ...);
    a.finish();
    return a;
  }

  Str encode(const std::vector<std::uint64_t>& raw) const {
    Str out;
    out.reserve(raw.size());
    for (auto r : raw) {
      auto it = std::lower_bound(codes_.begin(), codes_.end(), r);
      if (it == codes_.end() || *it != r) throw Error(Errc::InputError, "symbol outside alphabet");
      out.push_back(static_cast<Symbol>(it - codes_.begin()));
    }
    return out;
  }
  std::uint64_t decode(Symbol s) const { return codes_.at(s); }
  std::size_t size() const { return codes_.size(); }
  const std::vector<std::uint64_t>& codes() const { return codes_; }

 private:
  void collect(const std::vector<std::uint64_t>& v) { codes_.insert(codes_.end(), v.begin(), v.end()); }
  void finish() {
    std::sort(codes_.begin(), codes_.end());
    codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
    if (codes_.size() >= kReservedBase) throw Error(Errc::InputError, "alphabet too large");
  }
  std::vector<std::uint64_t> codes_;
};

// Knuth-Morris-Pratt border table: fail[i] is the longest proper border of s[0..i).
inline std::vector<Index> border_table(View s) {
  const Index n = static_cast<Index>(s.size());
  std::vector<Index> fail(n + 1, 0);
  if (n == 0) return fail;
  fail[0] = -1;
  Index k = -1;
  for (Index i = 0; i < n; ++i) {
    while (k >= 0 && s[k] != s[i]) k = fail[k];
    ++k;
    fail[i + 1] = k;
  }
  fail[0] = 0;
  return fail;
}

inline Index per(View s) {
  if (s.empty()) throw Error(Errc::EmptyString, "per of empty string");
  auto fail = border_table(s);
  return static_cast<Index>(s.size()) - fail.back();
}

inline bool is_primitive(View s) {
  if (s.empty()) throw Error(Errc::EmptyString, "is_primitive of empty string");
  const Index n = static_cast<Index>(s.size());
  const Index p = per(s);
  return p == n || n % p != 0;
}

inline bool has_period(View s, Index p) {
  for (std::size_t i = 0; i + p < s.size(); ++i)
    if (s[i] != s[i + p]) return false;
  return true;
}

inline std::vector<Index> exact_occurrences(View p, View t) {
  if (p.empty()) throw Error(Errc::PreconditionFailed, "empty pattern");
  std::vector<Index> out;
  const Index m = static_cast<Index>(p.size());
  const Index n = static_cast<Index>(t.size());
  if (m > n) return out;
  std::vector<Index> fail(m + 1);
  fail[0] = -1;
  for (Index i = 0, k = -1; i < m; ++i) {
    while (k >= 0 && p[k] != p[i]) k = fail[k];
    fail[i + 1] = ++k;
  }
  for (Index i = 0, k = 0; i < n; ++i) {
    while (k >= 0 && p[k] != t[i]) k = fail[k];
    if (++k == m) {
      out.push_back(i - m + 1);
      k = fail[m];
    }
  }
  return out;
}

// gcd of the occurrence set of p in a short text that starts and ends with p.
// With the single occurrence {0} (t = p) the gcd is taken to be |t|.
inline Index occ_gcd_period(View p, View t) {
  const Index m = static_cast<Index>(p.size());
  const Index n = static_cast<Index>(t.size());
  if (m == 0 || n < m || n > 2 * m + 1) throw Error(Errc::PreconditionFailed, "occ_gcd_period lengths");
  auto occ = exact_occurrences(p, t);
  if (occ.empty() || occ.front() != 0 || occ.back() != n - m)
    throw Error(Errc::PreconditionFailed, "t must start and end with p");
  Index g = 0;
  for (Index o : occ) g = std::gcd(g, o);
  if (g == 0) g = n;
  if (g < n && !has_period(t, g)) throw Error(Errc::InternalInvariantBroken, "gcd is not a period");
  return g;
}

}  // namespace epm
