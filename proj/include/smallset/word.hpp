#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <iterator>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smallset/error.hpp"

namespace smallset {

using Coord = std::uint32_t;

/// Sorted, duplicate-free list of coordinates.
using CoordSet = std::vector<Coord>;

/// Widest domain whose words can be packed into a std::uint64_t code.
inline constexpr std::size_t kMaxCodeBits = 63;

inline CoordSet make_coord_set(std::vector<Coord> coords) {
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  return coords;
}

/// [lo, hi) as a coordinate set.
inline CoordSet interval(Coord lo, Coord hi) {
  CoordSet out;
  for (Coord c = lo; c < hi; ++c) out.push_back(c);
  return out;
}

inline CoordSet set_intersection(const CoordSet& a, const CoordSet& b) {
  CoordSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline CoordSet set_difference(const CoordSet& a, const CoordSet& b) {
  CoordSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline CoordSet set_union(const CoordSet& a, const CoordSet& b) {
  CoordSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const CoordSet& sub, const CoordSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

inline bool intersects(const CoordSet& a, const CoordSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

inline std::size_t intersection_size(const CoordSet& a, const CoordSet& b) {
  return set_intersection(a, b).size();
}

/// A nonempty finite set of coordinates (one I_n).
class Block {
 public:
  Block() = delete;
  explicit Block(std::vector<Coord> coords) : coords_(make_coord_set(std::move(coords))) {
    if (coords_.empty()) throw Error(ErrorKind::InvalidInput, "block must be nonempty");
  }
  static Block range(Coord lo, Coord hi) { return Block(interval(lo, hi)); }

  const CoordSet& coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }
  Coord front() const noexcept { return coords_.front(); }
  Coord back() const noexcept { return coords_.back(); }
  bool contains(Coord c) const { return std::binary_search(coords_.begin(), coords_.end(), c); }

  friend auto operator<=>(const Block&, const Block&) = default;
  friend bool operator==(const Block&, const Block&) = default;

 private:
  CoordSet coords_;
};

// Packed codes: a word on a sorted domain of length L maps to an integer whose
// bit (L-1-j) is the j-th coordinate's bit, so numeric order on codes equals
// lexicographic order on the 0/1 strings.

/// Code positions occupied by `sub` inside the code of `super`. Requires sub ⊆ super.
inline std::uint64_t position_mask(const CoordSet& super, const CoordSet& sub) {
  std::uint64_t mask = 0;
  const std::size_t len = super.size();
  std::size_t j = 0;
  for (Coord c : sub) {
    while (j < len && super[j] < c) ++j;
    if (j == len || super[j] != c) {
      throw Error(ErrorKind::InvalidInput, "coordinate " + std::to_string(c) + " is outside the domain");
    }
    mask |= std::uint64_t{1} << (len - 1 - j);
  }
  return mask;
}

/// Collect the bits of `code` selected by `mask` into a dense code (parallel bit extract).
inline std::uint64_t extract_bits(std::uint64_t code, std::uint64_t mask) {
  std::uint64_t out = 0;
  std::uint64_t bit = 1;
  for (std::uint64_t m = mask; m != 0; m &= m - 1) {
    const std::uint64_t low = m & (~m + 1);
    if (code & low) out |= bit;
    bit <<= 1;
  }
  return out;
}

/// Spread a dense code over the positions selected by `mask` (parallel bit deposit).
inline std::uint64_t deposit_bits(std::uint64_t dense, std::uint64_t mask) {
  std::uint64_t out = 0;
  std::uint64_t bit = 1;
  for (std::uint64_t m = mask; m != 0; m &= m - 1) {
    const std::uint64_t low = m & (~m + 1);
    if (dense & bit) out |= low;
    bit <<= 1;
  }
  return out;
}

/// A 0/1 assignment on a finite set of coordinates.
class Word {
 public:
  Word() = default;

  Word(CoordSet domain, std::vector<std::uint8_t> bits) : domain_(std::move(domain)), bits_(std::move(bits)) {
    if (domain_.size() != bits_.size()) {
      throw Error(ErrorKind::InvalidInput, "word has " + std::to_string(bits_.size()) + " bits for " +
                                               std::to_string(domain_.size()) + " coordinates");
    }
    for (std::size_t i = 1; i < domain_.size(); ++i) {
      if (domain_[i - 1] >= domain_[i]) throw Error(ErrorKind::InvalidInput, "word domain must be strictly increasing");
    }
    for (auto b : bits_) {
      if (b > 1) throw Error(ErrorKind::InvalidInput, "word bits must be 0 or 1");
    }
  }

  /// Parse a 0/1 string laid out over `domain` in increasing coordinate order.
  static Word from_string(CoordSet domain, std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char ch : text) {
      if (ch != '0' && ch != '1') {
        throw Error(ErrorKind::InvalidInput, "word string may only contain 0 and 1: '" + std::string(text) + "'");
      }
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return Word(std::move(domain), std::move(bits));
  }

  static Word from_code(CoordSet domain, std::uint64_t code) {
    const std::size_t len = domain.size();
    std::vector<std::uint8_t> bits(len);
    for (std::size_t j = 0; j < len; ++j) {
      const std::size_t shift = len - 1 - j;
      bits[j] = shift < 64 ? static_cast<std::uint8_t>((code >> shift) & 1U) : 0;
    }
    return Word(std::move(domain), std::move(bits));
  }

  /// All-zero word on `domain`.
  static Word zeros(CoordSet domain) {
    std::vector<std::uint8_t> bits(domain.size(), 0);
    return Word(std::move(domain), std::move(bits));
  }

  const CoordSet& domain() const noexcept { return domain_; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  bool has(Coord c) const { return std::binary_search(domain_.begin(), domain_.end(), c); }

  std::uint8_t at(Coord c) const {
    const auto it = std::lower_bound(domain_.begin(), domain_.end(), c);
    if (it == domain_.end() || *it != c) {
      throw Error(ErrorKind::DomainTooSmall, "coordinate " + std::to_string(c) + " not in word domain");
    }
    return bits_[static_cast<std::size_t>(it - domain_.begin())];
  }

  std::uint64_t code() const {
    if (bits_.size() > kMaxCodeBits) throw Error(ErrorKind::BlockTooLarge, "word too wide for a packed code");
    std::uint64_t c = 0;
    for (auto b : bits_) c = (c << 1) | b;
    return c;
  }

  std::string str() const {
    std::string out;
    out.reserve(bits_.size());
    for (auto b : bits_) out.push_back(static_cast<char>('0' + b));
    return out;
  }

  friend auto operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;

 private:
  CoordSet domain_;
  std::vector<std::uint8_t> bits_;
};

/// w restricted to domain(w) ∩ s.
inline Word word_restrict(const Word& w, const CoordSet& s) {
  CoordSet domain;
  std::vector<std::uint8_t> bits;
  const auto& wd = w.domain();
  std::size_t j = 0;
  for (std::size_t i = 0; i < wd.size(); ++i) {
    while (j < s.size() && s[j] < wd[i]) ++j;
    if (j < s.size() && s[j] == wd[i]) {
      domain.push_back(wd[i]);
      bits.push_back(w.bits()[i]);
    }
  }
  return Word(std::move(domain), std::move(bits));
}

/// Union of two words with disjoint domains.
inline Word word_join(const Word& a, const Word& b) {
  if (intersects(a.domain(), b.domain())) {
    throw Error(ErrorKind::OverlappingDomains, "cannot join words with intersecting domains");
  }
  CoordSet domain;
  std::vector<std::uint8_t> bits;
  domain.reserve(a.size() + b.size());
  bits.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a.domain()[i] < b.domain()[j])) {
      domain.push_back(a.domain()[i]);
      bits.push_back(a.bits()[i++]);
    } else {
      domain.push_back(b.domain()[j]);
      bits.push_back(b.bits()[j++]);
    }
  }
  return Word(std::move(domain), std::move(bits));
}

/// Sort and deduplicate a list of words.
inline std::vector<Word> normalize_words(std::vector<Word> words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

}  // namespace smallset
