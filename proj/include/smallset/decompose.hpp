#pragma once

#include <cstdint>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "smallset/dyadic.hpp"
#include "smallset/error.hpp"
#include "smallset/nullrep.hpp"
#include "smallset/rep.hpp"
#include "smallset/word.hpp"

namespace smallset {

/// Positive dyadic schedule ε_0, ε_1, ...: an optional explicit prefix, then
/// the rule ε_k = coefficient · 2^-(slope·k + offset).
class EpsSchedule {
 public:
  /// ε_k = 2^{-k-1}.
  EpsSchedule() = default;

  EpsSchedule(Dyadic coefficient, std::int64_t slope, std::int64_t offset, std::vector<Dyadic> prefix = {})
      : prefix_(std::move(prefix)), coefficient_(std::move(coefficient)), slope_(slope), offset_(offset) {
    if (coefficient_.sign() <= 0) throw Error(ErrorKind::InvalidInput, "epsilon coefficient must be positive");
    for (const auto& e : prefix_) {
      if (e.sign() <= 0) throw Error(ErrorKind::InvalidInput, "every epsilon must be positive");
    }
  }

  static EpsSchedule constant(Dyadic value) { return EpsSchedule(std::move(value), 0, 0); }

  Dyadic operator()(std::size_t k) const {
    if (k < prefix_.size()) return prefix_[k];
    return coefficient_ * Dyadic::pow2(-(slope_ * static_cast<std::int64_t>(k) + offset_));
  }

  /// Parses "2^-k", "2^-k-3", "2^-(k+3)", "3/4*2^-k", a constant dyadic such
  /// as "2^10" or "1/2", or a comma list "1/2,1/4,1/8" (the last value repeats).
  static EpsSchedule parse(const std::string& text) {
    static const std::regex rule(R"(\s*(?:([-0-9/^]+)\s*\*\s*)?2\^-\(?k\s*(?:([+-])\s*(\d+))?\)?\s*)");
    std::smatch m;
    if (std::regex_match(text, m, rule)) {
      const Dyadic coefficient = m[1].matched ? Dyadic::parse(m[1].str()) : Dyadic(1);
      std::int64_t offset = 0;
      if (m[3].matched) offset = std::stoll(m[3].str());
      // "2^-k-3" and "2^-(k+3)" both mean 2^-(k+3).
      const bool parenthesized = text.find('(') != std::string::npos;
      if (m[2].matched && ((m[2].str() == "+") != parenthesized)) offset = -offset;
      return EpsSchedule(coefficient, 1, offset);
    }
    if (text.find(',') != std::string::npos) {
      std::vector<Dyadic> values;
      std::stringstream in(text);
      std::string item;
      while (std::getline(in, item, ',')) values.push_back(Dyadic::parse(item));
      const Dyadic last = values.back();
      return EpsSchedule(last, 0, 0, std::move(values));
    }
    return constant(Dyadic::parse(text));
  }

 private:
  std::vector<Dyadic> prefix_;
  Dyadic coefficient_{1};
  std::int64_t slope_ = 1;
  std::int64_t offset_ = 1;
};

/// Interleaved cut points n_0 = 0 < m_0 < n_1 < m_1 < ... < n_K.
class CutPair {
 public:
  CutPair() = default;
  explicit CutPair(std::vector<Coord> interleaved) : cuts_(std::move(interleaved)) {
    if (cuts_.empty() || cuts_.front() != 0 || cuts_.size() % 2 == 0) {
      throw Error(ErrorKind::InvalidInput, "cuts must start at 0 and end with an n-cut");
    }
    for (std::size_t i = 1; i < cuts_.size(); ++i) {
      if (cuts_[i - 1] >= cuts_[i]) throw Error(ErrorKind::InvalidInput, "cuts must be strictly increasing");
    }
  }

  const std::vector<Coord>& interleaved() const noexcept { return cuts_; }
  /// K, the number of [n_k, n_{k+1}) blocks.
  std::size_t pairs() const noexcept { return cuts_.size() / 2; }
  Coord n(std::size_t k) const { return cuts_.at(2 * k); }
  Coord m(std::size_t k) const { return cuts_.at(2 * k + 1); }

 private:
  std::vector<Coord> cuts_;
};

namespace decompose_detail {

// tails[j] = Σ_{i ≥ j} |F_i| / 2^i for j ≤ support_end, zero beyond.
inline std::vector<Dyadic> tails(const PrefixRep& f) {
  const std::size_t end = f.support_end();
  std::vector<Dyadic> out(end + 1);
  for (std::size_t j = end; j > 0; --j) out[j - 1] = out[j] + Dyadic::ratio(f.family(j - 1).size(), j - 1);
  return out;
}

inline const Dyadic& tail_at(const std::vector<Dyadic>& t, std::size_t j) { return j < t.size() ? t[j] : t.back(); }

// min { j > from : 2^scale · tail(j) < eps }
inline Coord first_below(const std::vector<Dyadic>& t, Coord from, Coord scale, const Dyadic& eps) {
  for (std::size_t j = from + 1;; ++j) {
    if (tail_at(t, j).scaled(scale) < eps) return static_cast<Coord>(j);
  }
}

}  // namespace decompose_detail

/// The greedy minima m_k, n_{k+1}. Stops after the first n-cut whose tail is
/// zero, i.e. as soon as every F_i lies below the last cut.
inline CutPair compute_cuts(const PrefixRep& f, const EpsSchedule& eps) {
  const auto t = decompose_detail::tails(f);
  std::vector<Coord> cuts{0};
  Coord n = 0;
  for (std::size_t k = 0;; ++k) {
    const Dyadic e = eps(k);
    const Coord m = decompose_detail::first_below(t, n, n, e);
    const Coord next = decompose_detail::first_below(t, m, m, e);
    cuts.push_back(m);
    cuts.push_back(next);
    if (decompose_detail::tail_at(t, next).is_zero()) break;
    n = next;
  }
  return CutPair(std::move(cuts));
}

/// Per-block certificate for |J|/2^|I| ≤ 2^lo · Σ_{i ∈ range} |F_i|/2^i ≤ ε.
struct BlockBound {
  Coord lo = 0;
  Coord hi = 0;
  Dyadic density;
  Dyadic mass;
  std::optional<Dyadic> eps;  // absent for the leading block of B

  bool holds() const { return density <= mass && (!eps || mass <= *eps); }
};

struct Decomposition {
  CutPair cuts;
  IntervalRep a;  // blocks [n_k, n_{k+1})
  IntervalRep b;  // blocks [0, m_0), then [m_k, m_{k+1})
  std::vector<BlockBound> a_bounds;
  std::vector<BlockBound> b_bounds;  // b_bounds[0] is the leading block
};

namespace decompose_detail {

// Words s on [lo, hi) agreeing with some t ∈ F_i, i ∈ [i_lo, i_hi), on [lo, i).
inline std::vector<Word> agreeing_words(const PrefixRep& f, Coord lo, Coord hi, Coord i_lo, Coord i_hi,
                                        std::size_t cap) {
  const std::size_t width = hi - lo;
  bool any = false;
  for (Coord i = i_lo; i < i_hi; ++i) any = any || !f.family(i).empty();
  const CoordSet domain = interval(lo, hi);
  if (!any) return {};
  require_materializable(width, cap);
  CodeTable table(std::size_t{1} << width);
  const std::uint64_t all = (std::uint64_t{1} << width) - 1;
  for (Coord i = i_lo; i < i_hi; ++i) {
    const std::size_t fixed = i > lo ? i - lo : 0;
    // The first `fixed` coordinates of the block are the top bits of its code.
    const std::uint64_t free_mask = all >> fixed;
    for (const auto& t : f.family(i)) {
      std::uint64_t value = 0;
      for (std::size_t j = 0; j < fixed; ++j) value = (value << 1) | t.bits()[lo + j];
      value <<= width - fixed;
      for (std::uint64_t sub = free_mask;; sub = (sub - 1) & free_mask) {
        table.set(value | sub);
        if (sub == 0) break;
      }
    }
  }
  return table_words(domain, table);
}

inline Dyadic range_mass(const PrefixRep& f, Coord scale, Coord i_lo, Coord i_hi) {
  Dyadic total;
  for (Coord i = i_lo; i < i_hi; ++i) total += Dyadic::ratio(f.family(i).size(), i);
  return total.scaled(scale);
}

}  // namespace decompose_detail

/// Materialize J_k over [n_k, n_{k+1}) from F_i with i ∈ [m_k, n_{k+1}), and
/// J'_k over [m_k, m_{k+1}) from F_i with i ∈ [n_{k+1}, m_{k+1}). B also gets
/// a leading block [0, m_0) fed by i ∈ [0, m_0) so that no hit of F is lost
/// at truncation.
inline Decomposition build_block_sets(const PrefixRep& f, const CutPair& cuts, const EpsSchedule& eps,
                                      std::size_t cap = kDefaultBlockCap) {
  using decompose_detail::agreeing_words;
  using decompose_detail::range_mass;
  const std::size_t pairs = cuts.pairs();
  Decomposition out;
  out.cuts = cuts;

  std::vector<Coord> a_cuts;
  std::vector<std::vector<Word>> a_words;
  for (std::size_t k = 0; k < pairs; ++k) {
    const Coord lo = cuts.n(k);
    const Coord hi = cuts.n(k + 1);
    a_cuts.push_back(lo);
    a_words.push_back(agreeing_words(f, lo, hi, cuts.m(k), hi, cap));
    out.a_bounds.push_back({lo, hi, Dyadic::ratio(a_words.back().size(), hi - lo), range_mass(f, lo, cuts.m(k), hi),
                            eps(k)});
  }
  a_cuts.push_back(cuts.n(pairs));
  out.a = IntervalRep(std::move(a_cuts), std::move(a_words));

  std::vector<Coord> b_cuts{0};
  std::vector<std::vector<Word>> b_words;
  b_words.push_back(agreeing_words(f, 0, cuts.m(0), 0, cuts.m(0), cap));
  out.b_bounds.push_back({0, cuts.m(0), Dyadic::ratio(b_words.back().size(), cuts.m(0)),
                          range_mass(f, 0, 0, cuts.m(0)), std::nullopt});
  for (std::size_t k = 0; k + 1 < pairs; ++k) {
    const Coord lo = cuts.m(k);
    const Coord hi = cuts.m(k + 1);
    b_cuts.push_back(lo);
    b_words.push_back(agreeing_words(f, lo, hi, cuts.n(k + 1), hi, cap));
    out.b_bounds.push_back({lo, hi, Dyadic::ratio(b_words.back().size(), hi - lo),
                            range_mass(f, lo, cuts.n(k + 1), hi), eps(k)});
  }
  b_cuts.push_back(cuts.m(pairs - 1));
  out.b = IntervalRep(std::move(b_cuts), std::move(b_words));
  return out;
}

/// Split the null set coded by F into two small★ representations whose union covers it.
inline Decomposition decompose(const PrefixRep& f, const EpsSchedule& eps = {}, std::size_t cap = kDefaultBlockCap) {
  return build_block_sets(f, compute_cuts(f, eps), eps, cap);
}

}  // namespace smallset
