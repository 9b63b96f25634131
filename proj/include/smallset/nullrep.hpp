#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "smallset/dyadic.hpp"
#include "smallset/error.hpp"
#include "smallset/rep.hpp"
#include "smallset/word.hpp"

namespace smallset {

/// All n with x↾[0,n) ∈ F_n.
inline std::vector<std::size_t> prefix_hits(const Word& x, const PrefixRep& f) {
  const std::size_t end = f.support_end();
  if (end > 0 && !is_subset(interval(0, static_cast<Coord>(end - 1)), x.domain())) {
    throw Error(ErrorKind::DomainTooSmall, "x must cover [0," + std::to_string(end - 1) + ")");
  }
  std::vector<std::size_t> hits;
  for (std::size_t n = 0; n < end; ++n) {
    const auto& family = f.family(n);
    if (family.empty()) continue;
    const Word prefix = word_restrict(x, interval(0, static_cast<Coord>(n)));
    if (std::binary_search(family.begin(), family.end(), prefix)) hits.push_back(n);
  }
  return hits;
}

/// Σ_{i ≥ j} |F_i| / 2^i.
inline Dyadic tail_weight(const PrefixRep& f, std::size_t j) {
  Dyadic total;
  for (std::size_t i = j; i < f.families().size(); ++i) total += Dyadic::ratio(f.family(i).size(), i);
  return total;
}

/// Σ_n |F_n| / 2^n.
inline Dyadic prefix_weight(const PrefixRep& f) { return tail_weight(f, 0); }

/// A sequence of open covers U_0, U_1, ..., each a list of basic cylinders [s]
/// with s a word on an initial segment.
class CylinderCover {
 public:
  CylinderCover() = default;

  /// Rejects a level in which one word extends another (cylinders must be disjoint).
  explicit CylinderCover(std::vector<std::vector<Word>> levels) : levels_(std::move(levels)) {
    for (std::size_t n = 0; n < levels_.size(); ++n) {
      auto& level = levels_[n];
      for (const auto& w : level) {
        if (w.domain() != interval(0, static_cast<Coord>(w.size()))) {
          throw Error(ErrorKind::MalformedCover, "cover words must live on initial segments");
        }
      }
      std::sort(level.begin(), level.end(), [](const Word& a, const Word& b) { return a.str() < b.str(); });
      // In string order any prefix sorts right before its first extension.
      for (std::size_t i = 1; i < level.size(); ++i) {
        const std::string a = level[i - 1].str();
        const std::string b = level[i].str();
        if (b.compare(0, a.size(), a) == 0) {
          throw Error(ErrorKind::MalformedCover, "level " + std::to_string(n) + ": '" + a + "' and '" + b +
                                                     "' are not incompatible");
        }
      }
    }
  }

  const std::vector<std::vector<Word>>& levels() const noexcept { return levels_; }

  /// μ(U_n) = Σ_{s ∈ U_n} 2^{-|s|}.
  Dyadic level_measure(std::size_t n) const {
    Dyadic total;
    for (const auto& w : levels_.at(n)) total += Dyadic::pow2(-static_cast<std::int64_t>(w.size()));
    return total;
  }

  Dyadic total_measure() const {
    Dyadic total;
    for (std::size_t n = 0; n < levels_.size(); ++n) total += level_measure(n);
    return total;
  }

  /// The measure-zero hypothesis μ(U_n) ≤ 2^{-n} for every level.
  bool satisfies_null_hypothesis() const {
    for (std::size_t n = 0; n < levels_.size(); ++n) {
      if (level_measure(n) > Dyadic::pow2(-static_cast<std::int64_t>(n))) return false;
    }
    return true;
  }

 private:
  std::vector<std::vector<Word>> levels_;
};

/// F_k = every cover word of length exactly k, over all levels, deduplicated.
/// With `check_hypothesis`, first insists on μ(U_n) ≤ 2^{-n}.
inline PrefixRep cylinders_to_prefix(const CylinderCover& cover, bool check_hypothesis = false) {
  if (check_hypothesis && !cover.satisfies_null_hypothesis()) {
    throw Error(ErrorKind::MalformedCover, "some level has measure above 2^-n");
  }
  std::size_t longest = 0;
  bool any = false;
  for (const auto& level : cover.levels()) {
    for (const auto& w : level) {
      longest = std::max(longest, w.size());
      any = true;
    }
  }
  if (!any) return PrefixRep();
  std::vector<std::vector<Word>> families(longest + 1);
  for (const auto& level : cover.levels()) {
    for (const auto& w : level) families[w.size()].push_back(w);
  }
  return PrefixRep(std::move(families));
}

}  // namespace smallset
