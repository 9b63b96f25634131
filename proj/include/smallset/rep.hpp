#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "smallset/dyadic.hpp"
#include "smallset/error.hpp"
#include "smallset/word.hpp"

namespace smallset {

/// Blocks wider than this are never materialized as full 2^|I| tables.
inline constexpr std::size_t kDefaultBlockCap = 20;

/// One (I_n, J_n) pair: a block and a set of words on exactly that block.
class Entry {
 public:
  Entry(Block block, std::vector<Word> words) : block_(std::move(block)), words_(normalize_words(std::move(words))) {
    for (const auto& w : words_) {
      if (w.domain() != block_.coords()) throw Error(ErrorKind::InvalidInput, "word '" + w.str() + "' is not on its block");
    }
  }

  const Block& block() const noexcept { return block_; }
  const std::vector<Word>& words() const noexcept { return words_; }

  bool contains(const Word& w) const { return std::binary_search(words_.begin(), words_.end(), w); }

  /// |J| / 2^|I|
  Dyadic density() const { return Dyadic::ratio(words_.size(), block_.size()); }

  /// Whether J = 2^I (such a block is hit by every real).
  bool is_full() const {
    return block_.size() < 64 && words_.size() == (std::uint64_t{1} << block_.size());
  }

  friend bool operator==(const Entry&, const Entry&) = default;

 private:
  Block block_;
  std::vector<Word> words_;
};

/// A finite representation (I_n, J_n)_n with pairwise-disjoint blocks.
class SmallRep {
 public:
  SmallRep() = default;
  explicit SmallRep(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::vector<std::pair<Coord, std::size_t>> owner;
    for (std::size_t n = 0; n < entries_.size(); ++n) {
      for (Coord c : entries_[n].block().coords()) owner.emplace_back(c, n);
    }
    std::sort(owner.begin(), owner.end());
    for (std::size_t i = 1; i < owner.size(); ++i) {
      if (owner[i].first == owner[i - 1].first) {
        throw Error(ErrorKind::InvalidInput, "blocks " + std::to_string(owner[i - 1].second) + " and " +
                                                 std::to_string(owner[i].second) + " share coordinate " +
                                                 std::to_string(owner[i].first));
      }
    }
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Entry& operator[](std::size_t n) const { return entries_[n]; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::vector<Block> blocks() const {
    std::vector<Block> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.block());
    return out;
  }

  /// One past the largest coordinate used by any block (0 when empty).
  Coord span() const {
    Coord top = 0;
    for (const auto& e : entries_) top = std::max<Coord>(top, e.block().back() + 1);
    return top;
  }

  friend bool operator==(const SmallRep&, const SmallRep&) = default;

 private:
  std::vector<Entry> entries_;
};

/// A SmallRep whose blocks are the consecutive intervals [k_n, k_{n+1}).
class IntervalRep {
 public:
  IntervalRep() = default;
  IntervalRep(std::vector<Coord> cuts, std::vector<std::vector<Word>> words) : cuts_(std::move(cuts)) {
    for (std::size_t i = 1; i < cuts_.size(); ++i) {
      if (cuts_[i - 1] >= cuts_[i]) throw Error(ErrorKind::InvalidInput, "interval cuts must be strictly increasing");
    }
    const std::size_t blocks = cuts_.empty() ? 0 : cuts_.size() - 1;
    if (words.size() != blocks) {
      throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(blocks) + " word sets for the given cuts");
    }
    std::vector<Entry> entries;
    for (std::size_t n = 0; n < blocks; ++n) {
      entries.emplace_back(Block::range(cuts_[n], cuts_[n + 1]), std::move(words[n]));
    }
    rep_ = SmallRep(std::move(entries));
  }

  const std::vector<Coord>& cuts() const noexcept { return cuts_; }
  const SmallRep& rep() const noexcept { return rep_; }
  std::size_t size() const noexcept { return rep_.size(); }

  friend bool operator==(const IntervalRep&, const IntervalRep&) = default;

 private:
  std::vector<Coord> cuts_;
  SmallRep rep_;
};

/// A finite prefix family F_0, ..., F_N with F_n ⊆ 2^[0,n).
class PrefixRep {
 public:
  PrefixRep() = default;
  explicit PrefixRep(std::vector<std::vector<Word>> families) {
    families_.reserve(families.size());
    for (std::size_t n = 0; n < families.size(); ++n) {
      const CoordSet domain = interval(0, static_cast<Coord>(n));
      for (const auto& w : families[n]) {
        if (w.domain() != domain) {
          throw Error(ErrorKind::InvalidInput, "family " + std::to_string(n) + " holds a word of length " +
                                                   std::to_string(w.size()));
        }
      }
      families_.push_back(normalize_words(std::move(families[n])));
    }
  }

  const std::vector<std::vector<Word>>& families() const noexcept { return families_; }

  /// F_n, empty beyond the stored list.
  const std::vector<Word>& family(std::size_t n) const {
    static const std::vector<Word> none;
    return n < families_.size() ? families_[n] : none;
  }

  /// One past the largest n with F_n nonempty (0 when all are empty).
  std::size_t support_end() const {
    for (std::size_t n = families_.size(); n > 0; --n) {
      if (!families_[n - 1].empty()) return n;
    }
    return 0;
  }

  friend bool operator==(const PrefixRep&, const PrefixRep&) = default;

 private:
  std::vector<std::vector<Word>> families_;
};

/// Σ_n |J_n| / 2^|I_n|, exactly.
inline Dyadic rep_weight(const SmallRep& r) {
  Dyadic total;
  for (const auto& e : r.entries()) total += e.density();
  return total;
}

/// Indices n with x↾I_n ∈ J_n.
inline std::vector<std::size_t> rep_hits(const Word& x, const SmallRep& r) {
  std::vector<std::size_t> hits;
  for (std::size_t n = 0; n < r.size(); ++n) {
    const auto& block = r[n].block().coords();
    if (!is_subset(block, x.domain())) {
      throw Error(ErrorKind::DomainTooSmall, "block " + std::to_string(n) + " exceeds the domain of x");
    }
    if (r[n].contains(word_restrict(x, block))) hits.push_back(n);
  }
  return hits;
}

/// Truncated membership: x is in the represented set when it has at least `threshold` hits.
inline bool rep_member(const Word& x, const SmallRep& r, std::size_t threshold = 1) {
  return rep_hits(x, r).size() >= threshold;
}

/// Every block of `fine` lies inside some block of `coarse`.
inline bool partition_refines(const std::vector<Block>& fine, const std::vector<Block>& coarse) {
  for (const auto& f : fine) {
    bool inside = false;
    for (const auto& c : coarse) {
      if (is_subset(f.coords(), c.coords())) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

// Dense tables over 2^|I| indexed by packed code, used wherever a block's word
// set has to be materialized.

using CodeTable = boost::dynamic_bitset<std::uint64_t>;

inline void require_materializable(std::size_t width, std::size_t cap) {
  if (width > cap || width > kMaxCodeBits) {
    throw Error(ErrorKind::BlockTooLarge,
                "block of " + std::to_string(width) + " coordinates exceeds the cap of " + std::to_string(cap));
  }
}

inline CodeTable entry_table(const Entry& e, std::size_t cap = kDefaultBlockCap) {
  require_materializable(e.block().size(), cap);
  CodeTable table(std::size_t{1} << e.block().size());
  for (const auto& w : e.words()) table.set(w.code());
  return table;
}

inline std::vector<Word> table_words(const CoordSet& domain, const CodeTable& table) {
  std::vector<Word> out;
  out.reserve(table.count());
  for (auto i = table.find_first(); i != CodeTable::npos; i = table.find_next(i)) out.push_back(Word::from_code(domain, i));
  return out;
}

/// Lexicographically least word on the block that is not in J, if any.
inline std::optional<Word> least_outside(const Entry& e) {
  if (e.is_full()) return std::nullopt;
  // Words are sorted, so the first gap in 0, 1, 2, ... is the answer.
  std::uint64_t expect = 0;
  for (const auto& w : e.words()) {
    if (w != Word::from_code(e.block().coords(), expect)) break;
    ++expect;
  }
  return Word::from_code(e.block().coords(), expect);
}

}  // namespace smallset
