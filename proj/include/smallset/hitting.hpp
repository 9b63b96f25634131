#pragma once

// Random hitting sets A ⊆ 2^n: sets of small density that meet every
// rectangle B0 × B1 whose sides are at least half of 2^u and 2^(n\u), for every
// split u with n/4 ≤ |u| ≤ 3n/4.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smallset/dyadic.hpp"
#include "smallset/error.hpp"
#include "smallset/parallel.hpp"
#include "smallset/rep.hpp"
#include "smallset/splitmix.hpp"
#include "smallset/word.hpp"

namespace smallset {

inline constexpr std::size_t kMaxHittingLength = 24;
inline constexpr std::uint64_t kDefaultSplitBudget = 12870;  // C(16, 8)

/// A candidate A ⊆ 2^n. Words are kept as packed codes over [0, n), sorted.
struct HittingCandidate {
  std::size_t n = 0;
  std::vector<std::uint32_t> codes;
  Dyadic epsilon;
  std::uint64_t seed = 0;

  std::vector<Word> words() const {
    std::vector<Word> out;
    out.reserve(codes.size());
    for (auto c : codes) out.push_back(Word::from_code(interval(0, static_cast<Coord>(n)), c));
    return out;
  }

  Dyadic density() const { return Dyadic::ratio(codes.size(), n); }

  bool contains(std::uint64_t code) const { return std::binary_search(codes.begin(), codes.end(), code); }

  static HittingCandidate from_words(std::size_t n, const std::vector<Word>& words, Dyadic epsilon = Dyadic(1),
                                     std::uint64_t seed = 0) {
    HittingCandidate c{n, {}, std::move(epsilon), seed};
    const CoordSet domain = interval(0, static_cast<Coord>(n));
    for (const auto& w : words) {
      if (w.domain() != domain) throw Error(ErrorKind::InvalidInput, "candidate words must lie on [0,n)");
      c.codes.push_back(static_cast<std::uint32_t>(w.code()));
    }
    std::sort(c.codes.begin(), c.codes.end());
    c.codes.erase(std::unique(c.codes.begin(), c.codes.end()), c.codes.end());
    return c;
  }
};

/// Include each s ∈ 2^n, in lexicographic order, iff the next SplitMix64
/// output z satisfies z / 2^64 < ε.
inline HittingCandidate sample_candidate(std::size_t n, const Dyadic& epsilon, std::uint64_t seed) {
  if (n > kMaxHittingLength) throw Error(ErrorKind::TooLarge, "n must be at most 24");
  if (epsilon.sign() <= 0 || epsilon > Dyadic(1)) throw Error(ErrorKind::InvalidInput, "epsilon must lie in (0, 1]");
  // z < ε·2^64  ⟺  z < ceil(ε·2^64), computed exactly.
  const BigInt scaled = epsilon.mantissa() << 64;
  BigInt limit = scaled >> static_cast<unsigned>(epsilon.exponent());
  if ((limit << static_cast<unsigned>(epsilon.exponent())) != scaled) limit += 1;
  const bool always = limit > BigInt(~std::uint64_t{0});
  const auto bound = always ? std::uint64_t{0} : limit.convert_to<std::uint64_t>();

  HittingCandidate c{n, {}, epsilon, seed};
  SplitMix64 rng(seed);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < total; ++s) {
    const std::uint64_t z = rng.next();
    if (always || z < bound) c.codes.push_back(static_cast<std::uint32_t>(s));
  }
  return c;
}

enum class HitVerdict { Verified, Refuted, BudgetExceeded };

constexpr std::string_view verdict_name(HitVerdict v) {
  switch (v) {
    case HitVerdict::Verified: return "Verified";
    case HitVerdict::Refuted: return "Refuted";
    case HitVerdict::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

struct SplitCount {
  CoordSet u;
  std::uint64_t enumerated = 0;
};

/// Verdict of a hitting check. For Refuted, (u, b0, b1) is a concrete
/// rectangle with b0 ⊆ 2^u, b1 ⊆ 2^([0,n) \ u), both at least half, missing A.
/// Splits u are visited in lexicographic order of their sorted coordinate lists.
struct SplitReport {
  HitVerdict verdict = HitVerdict::Verified;
  std::optional<CoordSet> u;
  std::vector<Word> b0;
  std::vector<Word> b1;
  std::vector<SplitCount> counts;
};

namespace hitting_detail {

inline bool balanced(std::size_t n, std::size_t size) { return 4 * size >= n && 4 * size <= 3 * n; }

inline CoordSet mask_coords(std::uint64_t mask, std::size_t n) {
  CoordSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if ((mask >> i) & 1U) out.push_back(static_cast<Coord>(i));
  }
  return out;
}

// Balanced splits of [0,n) as bitmasks (coordinate i is bit i), in
// lexicographic order of their sorted coordinate lists.
inline std::vector<std::uint64_t> split_order(std::size_t n) {
  std::vector<std::pair<CoordSet, std::uint64_t>> splits;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (balanced(n, static_cast<std::size_t>(std::popcount(mask)))) splits.emplace_back(mask_coords(mask, n), mask);
  }
  std::sort(splits.begin(), splits.end());
  std::vector<std::uint64_t> out;
  out.reserve(splits.size());
  for (const auto& s : splits) out.push_back(s.second);
  return out;
}

// Number of k-subsets of an s-set, saturating at 2^64-1.
inline std::uint64_t binomial(std::uint64_t s, std::uint64_t k) {
  if (k > s) return 0;
  k = std::min(k, s - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (s - k + i) / i;
    if (r > ~std::uint64_t{0}) return ~std::uint64_t{0};
  }
  return static_cast<std::uint64_t>(r);
}

// ceil(2^dim / 2): the least size of a half-dense subset of 2^dim.
inline std::uint64_t half(std::size_t dim) { return dim == 0 ? 1 : std::uint64_t{1} << (dim - 1); }

struct SplitOutcome {
  HitVerdict verdict = HitVerdict::Verified;
  std::uint64_t enumerated = 0;
  std::vector<Word> b0;
  std::vector<Word> b1;
};

// A dynamic bitset over 2^dim codes, stored in 64-bit limbs.
struct Limbs {
  std::vector<std::uint64_t> v;
  explicit Limbs(std::size_t dim) : v(dim >= 6 ? (std::size_t{1} << (dim - 6)) : 1, 0) {}
  void set(std::uint64_t i) { v[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::uint64_t i) const { return (v[i >> 6] >> (i & 63)) & 1U; }
};

inline SplitOutcome check_split(const HittingCandidate& a, std::uint64_t u_mask, std::uint64_t budget) {
  const std::size_t n = a.n;
  const CoordSet u = mask_coords(u_mask, n);
  const CoordSet v = set_difference(interval(0, static_cast<Coord>(n)), u);
  const bool u_small = u.size() <= v.size();
  const CoordSet& small = u_small ? u : v;
  const CoordSet& large = u_small ? v : u;
  const std::size_t m = small.size();
  const std::size_t big = large.size();
  const CoordSet all = interval(0, static_cast<Coord>(n));
  const std::uint64_t small_mask = position_mask(all, small);
  const std::uint64_t large_mask = position_mask(all, large);

  SplitOutcome out;
  const std::uint64_t points = std::uint64_t{1} << m;
  const std::uint64_t k = half(m);
  const std::uint64_t combos = m <= 5 ? binomial(points, k) : ~std::uint64_t{0};
  if (combos > budget) {
    out.verdict = HitVerdict::BudgetExceeded;
    return out;
  }

  // neighbours[b] = { w ∈ 2^large : (b, w) ∈ A }
  std::vector<Limbs> neighbours(points, Limbs(big));
  for (auto code : a.codes) neighbours[extract_bits(code, small_mask)].set(extract_bits(code, large_mask));

  const std::uint64_t need = half(big);
  const std::size_t limbs = neighbours[0].v.size();
  const std::uint64_t large_points = std::uint64_t{1} << big;
  std::vector<std::uint64_t> covered(limbs);
  // Gosper's hack over k-subsets of `points` elements.
  std::uint64_t subset = (k >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  const std::uint64_t stop = points >= 64 ? 0 : std::uint64_t{1} << points;
  while (true) {
    ++out.enumerated;
    std::fill(covered.begin(), covered.end(), 0);
    for (std::uint64_t s = subset; s != 0; s &= s - 1) {
      const auto& nb = neighbours[std::countr_zero(s)].v;
      for (std::size_t i = 0; i < limbs; ++i) covered[i] |= nb[i];
    }
    std::uint64_t hit = 0;
    for (auto w : covered) hit += static_cast<std::uint64_t>(std::popcount(w));
    // Refuted iff the uncovered part of 2^large is itself half-dense.
    if (large_points - hit >= need) {
      out.verdict = HitVerdict::Refuted;
      std::vector<Word> chosen;
      std::vector<Word> avoided;
      for (std::uint64_t b = 0; b < points; ++b) {
        if ((subset >> b) & 1U) chosen.push_back(Word::from_code(small, b));
      }
      Limbs cov(big);
      cov.v = covered;
      for (std::uint64_t w = 0; w < large_points; ++w) {
        if (!cov.test(w)) avoided.push_back(Word::from_code(large, w));
      }
      out.b0 = u_small ? chosen : avoided;
      out.b1 = u_small ? avoided : chosen;
      return out;
    }
    if (subset == 0) break;
    const std::uint64_t c = subset & (~subset + 1);
    const std::uint64_t r = subset + c;
    if (r == 0) break;
    subset = (((r ^ subset) >> 2) / c) | r;
    if (stop != 0 && subset >= stop) break;
  }
  return out;
}

}  // namespace hitting_detail

/// Exact check of the hitting property. For each balanced split u only the
/// smaller side is enumerated, and only at exactly half size: enlarging B
/// enlarges its neighbourhood C(B), so a refuting rectangle exists iff some
/// half-size B leaves at least half of the other side uncovered.
inline SplitReport verify_hitting(const HittingCandidate& a, std::uint64_t budget = kDefaultSplitBudget,
                                  unsigned jobs = 1) {
  if (a.n > kMaxHittingLength) throw Error(ErrorKind::TooLarge, "n must be at most 24");
  const std::size_t n = a.n;
  const auto splits = hitting_detail::split_order(n);
  struct Partial {
    std::vector<SplitCount> counts;
    std::optional<std::uint64_t> refuted;
    std::optional<std::uint64_t> exceeded;
    hitting_detail::SplitOutcome outcome;
  };
  const auto partials = map_chunks(splits.size(), jobs, [&](std::uint64_t lo, std::uint64_t hi) {
    Partial p;
    for (std::uint64_t i = lo; i < hi; ++i) {
      auto r = hitting_detail::check_split(a, splits[i], budget);
      p.counts.push_back({hitting_detail::mask_coords(splits[i], n), r.enumerated});
      if (r.verdict == HitVerdict::BudgetExceeded && !p.exceeded) p.exceeded = splits[i];
      if (r.verdict == HitVerdict::Refuted) {
        p.refuted = splits[i];
        p.outcome = std::move(r);
        break;
      }
    }
    return p;
  });

  SplitReport report;
  for (const auto& p : partials) {
    report.counts.insert(report.counts.end(), p.counts.begin(), p.counts.end());
    if (p.refuted) {
      report.verdict = HitVerdict::Refuted;
      report.u = hitting_detail::mask_coords(*p.refuted, n);
      report.b0 = p.outcome.b0;
      report.b1 = p.outcome.b1;
      return report;
    }
  }
  for (const auto& p : partials) {
    if (p.exceeded) {
      report.verdict = HitVerdict::BudgetExceeded;
      report.u = hitting_detail::mask_coords(*p.exceeded, n);
      return report;
    }
  }
  return report;
}

/// Re-check a Refuted triple directly against A.
inline bool recheck_refutation(const HittingCandidate& a, const SplitReport& r) {
  if (r.verdict != HitVerdict::Refuted || !r.u) return false;
  const std::size_t n = a.n;
  const CoordSet& u = *r.u;
  const CoordSet v = set_difference(interval(0, static_cast<Coord>(n)), u);
  if (!hitting_detail::balanced(n, u.size())) return false;
  if (normalize_words(r.b0).size() != r.b0.size() || normalize_words(r.b1).size() != r.b1.size()) return false;
  if (2 * r.b0.size() < (std::uint64_t{1} << u.size())) return false;
  if (2 * r.b1.size() < (std::uint64_t{1} << v.size())) return false;
  for (const auto& x : r.b0) {
    if (x.domain() != u) return false;
    for (const auto& y : r.b1) {
      if (y.domain() != v) return false;
      if (a.contains(word_join(x, y).code())) return false;
    }
  }
  return true;
}

/// Independent brute force for n ≤ 5: every half-dense B0 ⊆ 2^u and every
/// half-dense B1 ⊆ 2^(n\u), no monotonicity or smaller-side shortcut.
inline SplitReport hitting_oracle_naive(const HittingCandidate& a) {
  const std::size_t n = a.n;
  if (n > 5) throw Error(ErrorKind::TooLarge, "the naive hitting oracle is limited to n <= 5");
  const CoordSet all = interval(0, static_cast<Coord>(n));
  SplitReport report;
  for (std::uint64_t mask : hitting_detail::split_order(n)) {
    const CoordSet u = hitting_detail::mask_coords(mask, n);
    const CoordSet v = set_difference(all, u);
    const std::uint64_t pu = std::uint64_t{1} << u.size();
    const std::uint64_t pv = std::uint64_t{1} << v.size();
    // row[x] = set of y with x⌢y ∈ A, as a bitmask over pv ≤ 16 points
    std::vector<std::uint32_t> row(pu, 0);
    for (std::uint64_t x = 0; x < pu; ++x) {
      for (std::uint64_t y = 0; y < pv; ++y) {
        const Word s = word_join(Word::from_code(u, x), Word::from_code(v, y));
        if (a.contains(s.code())) row[x] |= std::uint32_t{1} << y;
      }
    }
    std::uint64_t tried = 0;
    for (std::uint64_t b0 = 0; b0 < (std::uint64_t{1} << pu); ++b0) {
      if (2 * static_cast<std::uint64_t>(std::popcount(b0)) < pu) continue;
      for (std::uint64_t b1 = 0; b1 < (std::uint64_t{1} << pv); ++b1) {
        if (2 * static_cast<std::uint64_t>(std::popcount(b1)) < pv) continue;
        ++tried;
        bool misses = true;
        for (std::uint64_t x = 0; x < pu && misses; ++x) {
          if (((b0 >> x) & 1U) && (row[x] & b1)) misses = false;
        }
        if (misses) {
          report.verdict = HitVerdict::Refuted;
          report.u = u;
          for (std::uint64_t x = 0; x < pu; ++x) {
            if ((b0 >> x) & 1U) report.b0.push_back(Word::from_code(u, x));
          }
          for (std::uint64_t y = 0; y < pv; ++y) {
            if ((b1 >> y) & 1U) report.b1.push_back(Word::from_code(v, y));
          }
          report.counts.push_back({u, tried});
          return report;
        }
      }
    }
    report.counts.push_back({u, tried});
  }
  return report;
}

struct FindResult {
  std::optional<HittingCandidate> found;
  std::size_t tries = 0;
  std::vector<HitVerdict> outcomes;  // one per try
};

/// Try i (1-based) samples with the i-th output of SplitMix64(seed) as its seed.
inline FindResult find_hitting(std::size_t n, const Dyadic& epsilon, std::size_t max_tries, std::uint64_t seed,
                               std::uint64_t budget = kDefaultSplitBudget, unsigned jobs = 1) {
  FindResult result;
  SplitMix64 seeds(seed);
  for (std::size_t t = 1; t <= max_tries; ++t) {
    auto candidate = sample_candidate(n, epsilon, seeds.next());
    const auto report = verify_hitting(candidate, budget, jobs);
    result.tries = t;
    result.outcomes.push_back(report.verdict);
    if (report.verdict == HitVerdict::Verified) {
      result.found = std::move(candidate);
      return result;
    }
  }
  return result;
}

/// Map a candidate on [0,n) onto a block of n coordinates (j-th bit to j-th coordinate).
inline Entry candidate_entry(const HittingCandidate& a, const Block& block) {
  if (block.size() != a.n) throw Error(ErrorKind::InvalidInput, "block size differs from candidate length");
  std::vector<Word> words;
  words.reserve(a.codes.size());
  for (auto c : a.codes) words.push_back(Word::from_code(block.coords(), c));
  return Entry(block, std::move(words));
}

}  // namespace smallset
