#pragma once

// Seeded generators shared by the unit suites and the acceptance binary.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "smallset/smallset.hpp"

namespace smallset::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  std::uint64_t next() { return g_.next(); }
  std::uint64_t below(std::uint64_t bound) { return g_.below(bound); }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + g_.below(hi - lo + 1); }
  bool chance(std::uint64_t num, std::uint64_t den) { return g_.below(den) < num; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[g_.below(i)]);
  }

 private:
  SplitMix64 g_;
};

// Each code of 2^|block| independently with probability num/den; a full set
// loses one word so that the result stays proper.
inline std::vector<Word> random_words(Rng& rng, const Block& block, std::uint64_t num, std::uint64_t den,
                                      bool proper = true) {
  std::vector<Word> out;
  const std::uint64_t total = std::uint64_t{1} << block.size();
  for (std::uint64_t c = 0; c < total; ++c) {
    if (rng.chance(num, den)) out.push_back(Word::from_code(block.coords(), c));
  }
  if (proper && out.size() == total) out.erase(out.begin() + static_cast<std::ptrdiff_t>(rng.below(total)));
  return out;
}

// Disjoint blocks over a shuffled [0, n), sizes in [1, max_block]; each block
// survives with probability keep/4.
inline std::vector<Block> random_blocks(Rng& rng, Coord n, std::size_t max_block, std::uint64_t keep = 3) {
  std::vector<Coord> coords(n);
  for (Coord c = 0; c < n; ++c) coords[c] = c;
  rng.shuffle(coords);
  std::vector<Block> out;
  std::size_t i = 0;
  while (i < coords.size()) {
    const std::size_t len = std::min<std::size_t>(rng.between(1, max_block), coords.size() - i);
    std::vector<Coord> part(coords.begin() + static_cast<std::ptrdiff_t>(i),
                            coords.begin() + static_cast<std::ptrdiff_t>(i + len));
    i += len;
    if (rng.chance(keep, 4)) out.emplace_back(std::move(part));
  }
  return out;
}

inline SmallRep random_small_rep(Rng& rng, Coord n, std::size_t max_block, std::uint64_t num, std::uint64_t den) {
  std::vector<Entry> entries;
  for (auto& b : random_blocks(rng, n, max_block)) {
    auto words = random_words(rng, b, num, den);
    entries.emplace_back(std::move(b), std::move(words));
  }
  return SmallRep(std::move(entries));
}

// Words of a block that depend only on a few of its coordinates, plus noise.
// Such sets have many full fibers, which makes containment likely.
inline std::vector<Word> cylinder_words(Rng& rng, const Block& block) {
  const std::size_t k = block.size();
  std::uint64_t mask = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (rng.chance(1, 2)) mask |= std::uint64_t{1} << j;
  }
  const std::size_t free_bits = static_cast<std::size_t>(std::popcount(mask));
  std::vector<std::uint64_t> patterns;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << free_bits); ++p) {
    if (rng.chance(1, 2)) patterns.push_back(p);
  }
  std::vector<Word> out;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t c = 0; c < total; ++c) {
    const bool in = std::binary_search(patterns.begin(), patterns.end(), extract_bits(c, mask));
    if (in || rng.chance(1, 16)) out.push_back(Word::from_code(block.coords(), c));
  }
  if (out.size() == total) out.erase(out.begin() + static_cast<std::ptrdiff_t>(rng.below(total)));
  return out;
}

// A pair (a, b) over [0, n). With `aim_contained`, b has cylinder-shaped word
// sets and each J_n of a is drawn from the words absorbed by some meeting
// block of b, so the blockwise criterion tends to hold.
inline std::pair<SmallRep, SmallRep> random_pair(Rng& rng, Coord n, bool aim_contained) {
  std::vector<Entry> be;
  for (auto& blk : random_blocks(rng, n, 4)) {
    auto words = aim_contained ? cylinder_words(rng, blk) : random_words(rng, blk, 1, 3);
    be.emplace_back(std::move(blk), std::move(words));
  }
  SmallRep b(std::move(be));
  std::vector<Entry> ae;
  for (auto& blk : random_blocks(rng, n, 4)) {
    std::vector<Word> words;
    if (aim_contained) {
      const std::uint64_t total = std::uint64_t{1} << blk.size();
      std::vector<calculus_detail::Fibers> meeting;
      std::vector<std::uint64_t> masks;
      for (const auto& e : b.entries()) {
        if (!intersects(blk.coords(), e.block().coords())) continue;
        meeting.push_back(calculus_detail::fibers(blk, e));
        masks.push_back(position_mask(blk.coords(), meeting.back().overlap));
      }
      for (std::uint64_t c = 0; c < total; ++c) {
        bool absorbed = false;
        for (std::size_t i = 0; i < meeting.size() && !absorbed; ++i) absorbed = meeting[i].full(extract_bits(c, masks[i]));
        // an occasional stray word makes some of these pairs fail
        if ((absorbed && rng.chance(2, 3)) || rng.chance(1, 64)) words.push_back(Word::from_code(blk.coords(), c));
      }
      if (words.size() == total) words.pop_back();
    } else {
      words = random_words(rng, blk, 1, 3);
    }
    ae.emplace_back(std::move(blk), std::move(words));
  }
  return {SmallRep(std::move(ae)), std::move(b)};
}

// Families F_1..F_max_len with Σ|F_n|/2^n ≤ 1/2.
inline PrefixRep random_prefix(Rng& rng, std::size_t max_len) {
  std::vector<std::vector<Word>> families(max_len + 1);
  Dyadic budget = Dyadic::pow2(-1);
  for (std::size_t n = 1; n <= max_len; ++n) {
    if (!rng.chance(1, 2)) continue;
    const CoordSet dom = interval(0, static_cast<Coord>(n));
    const std::uint64_t want = rng.between(1, 3);
    for (std::uint64_t i = 0; i < want; ++i) {
      const Dyadic w = Dyadic::pow2(-static_cast<std::int64_t>(n));
      if (budget < w) break;
      families[n].push_back(Word::from_code(dom, rng.below(std::uint64_t{1} << n)));
      budget -= w;
    }
  }
  return PrefixRep(std::move(families));
}

// Cut list 0 = c_0 < ... < c_k = n with gaps in [1, max_gap].
inline std::vector<Coord> random_cuts(Rng& rng, Coord n, Coord max_gap) {
  std::vector<Coord> cuts{0};
  while (cuts.back() < n) cuts.push_back(std::min<Coord>(n, cuts.back() + static_cast<Coord>(rng.between(1, max_gap))));
  return cuts;
}

inline IntervalRep random_interval_rep(Rng& rng, Coord n, Coord max_gap, std::uint64_t num, std::uint64_t den) {
  auto cuts = random_cuts(rng, n, max_gap);
  std::vector<std::vector<Word>> words;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) words.push_back(random_words(rng, Block::range(cuts[i], cuts[i + 1]), num, den));
  return IntervalRep(std::move(cuts), std::move(words));
}

// A grouping of entries into sets whose union of blocks stays under `cap` coordinates.
inline Grouping random_grouping(Rng& rng, const SmallRep& r, std::size_t cap) {
  std::vector<std::size_t> order(r.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> groups;
  std::size_t width = 0;
  for (auto i : order) {
    const std::size_t w = r[i].block().size();
    if (groups.empty() || width + w > cap || rng.chance(1, 3)) {
      groups.push_back({i});
      width = w;
    } else {
      groups.back().push_back(i);
      width += w;
    }
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end());
  return Grouping(std::move(groups));
}

inline Word word(std::initializer_list<Coord> domain, const char* bits) {
  return Word::from_string(CoordSet(domain), bits);
}

}  // namespace smallset::testing
