#pragma once

// Seeded desk-scale instances for the counterexample engine.

#include <optional>
#include <vector>

#include "smallset/smallset.hpp"
#include "support.hpp"

namespace smallset::testing {

inline constexpr std::uint64_t kTargetSeed = 2024;

struct EpsilonSearch {
  Dyadic epsilon;
  HittingCandidate found;
  std::size_t tries = 0;
};

// Least ε = k/16 for which find_hitting(n, ε, 200, seed) succeeds.
inline EpsilonSearch search_epsilon(std::size_t n, std::uint64_t seed) {
  for (std::uint64_t k = 1; k <= 16; ++k) {
    const Dyadic eps = Dyadic::ratio(k, 4);
    const auto r = find_hitting(n, eps, 200, seed);
    if (r.found) return {eps, *r.found, r.tries};
  }
  throw Error(ErrorKind::NotFound, "no epsilon k/16 yields a hitting set");
}

// Each block gets either no words or one random word, with probability 1/den.
inline SmallRep sparse_rep(Rng& rng, const std::vector<Block>& blocks, std::uint64_t den) {
  std::vector<Entry> entries;
  for (const auto& b : blocks) {
    std::vector<Word> words;
    if (rng.chance(1, den)) words.push_back(Word::from_code(b.coords(), rng.below(std::uint64_t{1} << b.size())));
    entries.emplace_back(b, std::move(words));
  }
  return SmallRep(std::move(entries));
}

struct DeskCase {
  EpsilonSearch search;
  SmallRep targets;      // kind-0 rep holding the single hitting block
  TargetSystems systems;
  SmallRep candidate;
  std::size_t length = 0;
};

// Target [12,20) met by candidate blocks [10,14) and [14,21): shares 2/8 and 6/8.
inline DeskCase case1_instance() {
  DeskCase d{search_epsilon(8, kTargetSeed), {}, TargetSystems(), {}, 22};
  const Block target = Block::range(12, 20);
  d.targets = SmallRep({candidate_entry(d.search.found, target)});
  d.systems = TargetSystems::from_reps(d.targets, SmallRep());
  Rng rng(71);
  std::vector<Block> blocks{Block::range(0, 5), Block::range(5, 10), Block::range(10, 14), Block::range(14, 21),
                            Block::range(21, 22)};
  std::vector<Entry> entries;
  for (const auto& b : blocks) entries.emplace_back(b, random_words(rng, b, 1, 16));
  d.candidate = SmallRep(std::move(entries));
  return d;
}

// Target [4,12) cut into singletons, every share 1/8; the rest in blocks of 4.
inline DeskCase case2_instance() {
  DeskCase d{search_epsilon(8, kTargetSeed + 1), {}, TargetSystems(), {}, 16};
  const Block target = Block::range(4, 12);
  d.targets = SmallRep({candidate_entry(d.search.found, target)});
  d.systems = TargetSystems::from_reps(d.targets, SmallRep());
  std::vector<Block> blocks{Block::range(0, 4)};
  for (Coord c = 4; c < 12; ++c) blocks.push_back(Block({c}));
  blocks.push_back(Block::range(12, 16));
  Rng rng(72);
  d.candidate = sparse_rep(rng, blocks, 4);
  return d;
}

struct EmbedCase {
  SmallRep rep0;
  SmallRep rep1;
  SmallRep embedded;
  TargetSystems systems;
  IntervalRep candidate;
  std::size_t length = 24;
};

// rep0 on [0,8) and rep1 on [4,12), interleaved onto [0,24); candidate cut every 4.
inline EmbedCase embed_instance() {
  const auto e0 = search_epsilon(8, kTargetSeed + 2);
  const auto e1 = search_epsilon(8, kTargetSeed + 3);
  EmbedCase c{SmallRep({candidate_entry(e0.found, Block::range(0, 8))}),
              SmallRep({candidate_entry(e1.found, Block::range(4, 12))}),
              {},
              TargetSystems(),
              {},
              24};
  c.embedded = even_odd_embed(c.rep0, c.rep1);
  c.systems = embed_targets(TargetSystems::from_reps(c.rep0, c.rep1));
  Rng rng(73);
  std::vector<Coord> cuts{0, 4, 8, 12, 16, 20, 24};
  std::vector<std::vector<Word>> words;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    words.push_back(random_words(rng, Block::range(cuts[i], cuts[i + 1]), 1, 16));
  }
  c.candidate = IntervalRep(std::move(cuts), std::move(words));
  return c;
}

}  // namespace smallset::testing
