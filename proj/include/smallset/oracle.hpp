#pragma once

// Brute-force ground truth over 2^N. Everything here walks every word of the
// truncation and re-derives hits from raw bits; it deliberately shares no code
// path with rep_hits or the block calculus it is used to certify.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "smallset/dyadic.hpp"
#include "smallset/error.hpp"
#include "smallset/parallel.hpp"
#include "smallset/rep.hpp"
#include "smallset/word.hpp"

namespace smallset {

inline constexpr std::size_t kDefaultTruncationCap = 24;
inline constexpr std::size_t kHardTruncationCap = 28;

/// Cap on N: 24 unless SMALLSET_MAX_TRUNC raises it, and never above 28.
inline std::size_t truncation_cap() {
  if (const char* env = std::getenv("SMALLSET_MAX_TRUNC")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') return std::min<std::size_t>(v, kHardTruncationCap);
  }
  return kDefaultTruncationCap;
}

/// The ambient length N of 2^N.
struct Truncation {
  std::size_t n = 0;
  unsigned jobs = 1;

  explicit Truncation(std::size_t length, unsigned workers = 1) : n(length), jobs(workers) {
    if (n > truncation_cap()) {
      throw Error(ErrorKind::TruncationExceeded,
                  "N = " + std::to_string(n) + " exceeds the oracle cap of " + std::to_string(truncation_cap()));
    }
  }

  std::uint64_t words() const { return std::uint64_t{1} << n; }
};

namespace oracle_detail {

// One test "x restricted to these coordinates lies in this set", with x packed
// so that coordinate c is bit (N-1-c).
struct Test {
  std::vector<unsigned> shifts;
  std::vector<std::uint64_t> accepted;  // sorted codes

  bool hit(std::uint64_t x) const {
    std::uint64_t code = 0;
    for (unsigned s : shifts) code = (code << 1) | ((x >> s) & 1U);
    return std::binary_search(accepted.begin(), accepted.end(), code);
  }
};

inline Test make_test(const CoordSet& coords, const std::vector<Word>& words, std::size_t n) {
  Test t;
  for (Coord c : coords) {
    if (c >= n) {
      throw Error(ErrorKind::DomainTooSmall,
                  "coordinate " + std::to_string(c) + " lies outside the truncation N = " + std::to_string(n));
    }
    t.shifts.push_back(static_cast<unsigned>(n - 1 - c));
  }
  for (const auto& w : words) {
    std::uint64_t code = 0;
    for (auto b : w.bits()) code = (code << 1) | b;
    t.accepted.push_back(code);
  }
  std::sort(t.accepted.begin(), t.accepted.end());
  return t;
}

inline std::vector<Test> compile(const SmallRep& r, std::size_t n) {
  std::vector<Test> tests;
  for (const auto& e : r.entries()) tests.push_back(make_test(e.block().coords(), e.words(), n));
  return tests;
}

inline std::vector<Test> compile(const PrefixRep& f, std::size_t n) {
  std::vector<Test> tests;
  for (std::size_t k = 0; k < f.families().size(); ++k) {
    if (!f.family(k).empty()) tests.push_back(make_test(interval(0, static_cast<Coord>(k)), f.family(k), n));
  }
  return tests;
}

inline std::size_t count_hits(const std::vector<Test>& tests, std::uint64_t x, std::size_t stop_at) {
  std::size_t hits = 0;
  for (const auto& t : tests) {
    if (t.hit(x) && ++hits >= stop_at) break;
  }
  return hits;
}

inline bool any_hit(const std::vector<Test>& tests, std::uint64_t x) { return count_hits(tests, x, 1) >= 1; }

}  // namespace oracle_detail

/// Words of 2^N as packed codes: lexicographic order is numeric order.
inline Word truncated_word(std::uint64_t x, std::size_t n) { return Word::from_code(interval(0, static_cast<Coord>(n)), x); }

struct Members {
  std::uint64_t count = 0;
  std::optional<CodeTable> bitmap;  // indexed by packed code of x
};

template <class Rep>
Members enumerate_members(const Rep& rep, const Truncation& t, std::size_t threshold = 1, bool want_bitmap = false) {
  const auto tests = oracle_detail::compile(rep, t.n);
  Members out;
  if (threshold == 0) {
    out.count = t.words();
    if (want_bitmap) out.bitmap = CodeTable(t.words()).set();
    return out;
  }
  if (want_bitmap) {
    CodeTable bitmap(t.words());
    for (std::uint64_t x = 0; x < t.words(); ++x) {
      if (oracle_detail::count_hits(tests, x, threshold) >= threshold) bitmap.set(x);
    }
    out.count = bitmap.count();
    out.bitmap = std::move(bitmap);
    return out;
  }
  const auto counts = map_chunks(t.words(), t.jobs, [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t c = 0;
    for (std::uint64_t x = lo; x < hi; ++x) c += oracle_detail::count_hits(tests, x, threshold) >= threshold;
    return c;
  });
  for (auto c : counts) out.count += c;
  return out;
}

/// Member count / 2^N at threshold 1.
template <class Rep>
Dyadic exact_measure(const Rep& rep, const Truncation& t) {
  return Dyadic::ratio(enumerate_members(rep, t).count, t.n);
}

/// Outcome of an exhaustive inclusion check; the counterexample is the
/// lexicographically least offending word of 2^N.
struct OracleVerdict {
  bool holds = true;
  std::optional<Word> counterexample;
};

namespace oracle_detail {

template <class Pred>
OracleVerdict first_violation(const Truncation& t, Pred violates) {
  const auto firsts = map_chunks(t.words(), t.jobs, [&](std::uint64_t lo, std::uint64_t hi) -> std::optional<std::uint64_t> {
    for (std::uint64_t x = lo; x < hi; ++x) {
      if (violates(x)) return x;
    }
    return std::nullopt;
  });
  for (const auto& f : firsts) {
    if (f) return OracleVerdict{false, truncated_word(*f, t.n)};
  }
  return {};
}

}  // namespace oracle_detail

/// Every word with a hit in `a` has a hit in `b`.
inline OracleVerdict subset_oracle(const SmallRep& a, const SmallRep& b, const Truncation& t) {
  const auto ta = oracle_detail::compile(a, t.n);
  const auto tb = oracle_detail::compile(b, t.n);
  return oracle_detail::first_violation(
      t, [&](std::uint64_t x) { return oracle_detail::any_hit(ta, x) && !oracle_detail::any_hit(tb, x); });
}

/// Every word with a hit in F has a hit in `a` or in `b`.
inline OracleVerdict cover_oracle(const PrefixRep& f, const SmallRep& a, const SmallRep& b, const Truncation& t) {
  const auto tf = oracle_detail::compile(f, t.n);
  const auto ta = oracle_detail::compile(a, t.n);
  const auto tb = oracle_detail::compile(b, t.n);
  return oracle_detail::first_violation(t, [&](std::uint64_t x) {
    return oracle_detail::any_hit(tf, x) && !oracle_detail::any_hit(ta, x) && !oracle_detail::any_hit(tb, x);
  });
}

/// Membership sets of two reps agree on every word of 2^N (threshold 1).
inline OracleVerdict equal_oracle(const SmallRep& a, const SmallRep& b, const Truncation& t) {
  const auto ta = oracle_detail::compile(a, t.n);
  const auto tb = oracle_detail::compile(b, t.n);
  return oracle_detail::first_violation(
      t, [&](std::uint64_t x) { return oracle_detail::any_hit(ta, x) != oracle_detail::any_hit(tb, x); });
}

/// Membership of `c` is exactly the union of memberships of `a` and `b`.
inline OracleVerdict union_oracle(const SmallRep& a, const SmallRep& b, const SmallRep& c, const Truncation& t) {
  const auto ta = oracle_detail::compile(a, t.n);
  const auto tb = oracle_detail::compile(b, t.n);
  const auto tc = oracle_detail::compile(c, t.n);
  return oracle_detail::first_violation(t, [&](std::uint64_t x) {
    return (oracle_detail::any_hit(ta, x) || oracle_detail::any_hit(tb, x)) != oracle_detail::any_hit(tc, x);
  });
}

/// Number of hits of the single word x (on [0,N)) against a rep, recomputed naively.
template <class Rep>
std::size_t oracle_hit_count(const Word& x, const Rep& rep) {
  const std::size_t n = x.size();
  if (x.domain() != interval(0, static_cast<Coord>(n)) || n > 64) {
    throw Error(ErrorKind::InvalidInput, "oracle words must live on an initial segment [0,N) with N <= 64");
  }
  std::uint64_t code = 0;
  for (auto b : x.bits()) code = (code << 1) | b;
  return oracle_detail::count_hits(oracle_detail::compile(rep, n), code, static_cast<std::size_t>(-1));
}

}  // namespace smallset
