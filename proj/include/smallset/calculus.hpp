#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smallset/dyadic.hpp"
#include "smallset/error.hpp"
#include "smallset/rep.hpp"
#include "smallset/word.hpp"

namespace smallset {

/// A partition {a_k} of the entry indices 0..K-1 into nonempty groups.
class Grouping {
 public:
  Grouping() = default;
  explicit Grouping(std::vector<std::vector<std::size_t>> groups) : groups_(std::move(groups)) {}

  /// One singleton group per entry.
  static Grouping identity(std::size_t entries) {
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < entries; ++i) groups.push_back({i});
    return Grouping(std::move(groups));
  }

  const std::vector<std::vector<std::size_t>>& groups() const noexcept { return groups_; }

  void validate(std::size_t entries) const {
    std::vector<int> seen(entries, 0);
    for (const auto& g : groups_) {
      if (g.empty()) throw Error(ErrorKind::InvalidGrouping, "groups must be nonempty");
      for (auto i : g) {
        if (i >= entries) throw Error(ErrorKind::InvalidGrouping, "index " + std::to_string(i) + " out of range");
        if (seen[i]++) throw Error(ErrorKind::InvalidGrouping, "index " + std::to_string(i) + " appears twice");
      }
    }
    for (std::size_t i = 0; i < entries; ++i) {
      if (!seen[i]) throw Error(ErrorKind::InvalidGrouping, "index " + std::to_string(i) + " is in no group");
    }
  }

 private:
  std::vector<std::vector<std::size_t>> groups_;
};

namespace calculus_detail {

// Words s on `big` with s↾I ∈ J for at least one of the given entries (each I ⊆ big).
inline std::vector<Word> cylinder_union(const CoordSet& big, const std::vector<const Entry*>& parts,
                                        std::size_t cap) {
  bool any = false;
  for (const auto* e : parts) any = any || !e->words().empty();
  if (!any) return {};
  require_materializable(big.size(), cap);
  const std::uint64_t all = (std::uint64_t{1} << big.size()) - 1;
  CodeTable table(std::size_t{1} << big.size());
  for (const auto* e : parts) {
    const std::uint64_t mask = position_mask(big, e->block().coords());
    const std::uint64_t free_mask = all & ~mask;
    for (const auto& t : e->words()) {
      const std::uint64_t value = deposit_bits(t.code(), mask);
      for (std::uint64_t sub = free_mask;; sub = (sub - 1) & free_mask) {
        table.set(value | sub);
        if (sub == 0) break;
      }
    }
  }
  return table_words(big, table);
}

// For a target entry (I'_m, J'_m) and a source block I_n: the words of J'_m
// grouped by their restriction to I_n ∩ I'_m, each group holding the codes of
// the remaining coordinates I'_m \ I_n in sorted order.
struct Fibers {
  CoordSet overlap;
  CoordSet rest;
  std::uint64_t source_mask = 0;  // overlap positions inside the source block code
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_overlap;

  std::uint64_t fiber_size() const { return std::uint64_t{1} << rest.size(); }

  bool full(std::uint64_t overlap_code) const {
    const auto it = by_overlap.find(overlap_code);
    return it != by_overlap.end() && it->second.size() == fiber_size();
  }
};

inline Fibers fibers(const Block& source, const Entry& target) {
  Fibers f;
  f.overlap = set_intersection(source.coords(), target.block().coords());
  f.rest = set_difference(target.block().coords(), source.coords());
  if (source.size() > kMaxCodeBits || target.block().size() > kMaxCodeBits) {
    throw Error(ErrorKind::BlockTooLarge, "blocks wider than 63 coordinates are not supported here");
  }
  f.source_mask = position_mask(source.coords(), f.overlap);
  const std::uint64_t o_mask = position_mask(target.block().coords(), f.overlap);
  const std::uint64_t r_mask = position_mask(target.block().coords(), f.rest);
  for (const auto& t : target.words()) {
    const std::uint64_t code = t.code();
    f.by_overlap[extract_bits(code, o_mask)].push_back(extract_bits(code, r_mask));
  }
  for (auto& [_, rest] : f.by_overlap) std::sort(rest.begin(), rest.end());
  return f;
}

}  // namespace calculus_detail

/// Regroup blocks: I'_n = ⋃_{l ∈ a_n} I_l and J'_n = {s : ∃ l ∈ a_n, s↾I_l ∈ J_l}.
inline SmallRep coarsen(const SmallRep& r, const Grouping& g, std::size_t cap = kDefaultBlockCap) {
  g.validate(r.size());
  std::vector<Entry> out;
  for (const auto& group : g.groups()) {
    CoordSet coords;
    std::vector<const Entry*> parts;
    for (auto l : group) {
      coords = set_union(coords, r[l].block().coords());
      parts.push_back(&r[l]);
    }
    auto words = calculus_detail::cylinder_union(coords, parts, cap);
    out.emplace_back(Block(std::move(coords)), std::move(words));
  }
  return SmallRep(std::move(out));
}

/// Union of two reps when `fine`'s partition refines `coarse`'s, expressed on the coarse blocks.
inline SmallRep union_finer(const SmallRep& fine, const SmallRep& coarse, std::size_t cap = kDefaultBlockCap) {
  const auto coarse_blocks = coarse.blocks();
  if (!partition_refines(fine.blocks(), coarse_blocks)) {
    throw Error(ErrorKind::NotARefinement, "some fine block lies in no coarse block");
  }
  std::vector<Entry> out;
  for (const auto& target : coarse.entries()) {
    std::vector<const Entry*> parts;
    for (const auto& e : fine.entries()) {
      if (!e.words().empty() && is_subset(e.block().coords(), target.block().coords())) parts.push_back(&e);
    }
    if (parts.empty()) {
      out.push_back(target);
      continue;
    }
    parts.push_back(&target);
    out.emplace_back(target.block(), calculus_detail::cylinder_union(target.block().coords(), parts, cap));
  }
  return SmallRep(std::move(out));
}

/// Why (n, s) is not absorbed by target entry m.
struct FailureAt {
  std::size_t m = 0;
  /// Set when some t ∈ J'_m agrees with s on the overlap: then this u on
  /// I'_m \ I_n completes the overlap word to a word outside J'_m. Unset
  /// means no t agrees at all.
  std::optional<Word> spoiler;

  bool mismatch() const { return !spoiler.has_value(); }
};

struct Failure {
  std::size_t n = 0;
  Word s;
  std::vector<FailureAt> at;  // one per target block meeting I_n, by increasing m
};

struct Choice {
  std::size_t n = 0;
  Word s;
  std::size_t m = 0;
};

/// Outcome of the blockwise containment test. When `contained`, every
/// (n, s ∈ J_n) with n ≥ ignore has a chosen m whose fiber over s↾(I_n∩I'_m)
/// lies entirely in J'_m; otherwise `failures` lists every pair with no such m.
struct ContainmentCertificate {
  bool contained = true;
  std::size_t ignore = 0;
  std::vector<Choice> choices;
  std::vector<Failure> failures;
};

/// Blockwise criterion for (I_n,J_n) ⊆ (I'_m,J'_m): every s ∈ J_n (n ≥ ignore)
/// must, for some m meeting I_n, agree on the overlap with a word of J'_m all
/// of whose completions over I'_m \ I_n stay in J'_m.
inline ContainmentCertificate subset_blockwise(const SmallRep& a, const SmallRep& b, std::size_t ignore = 0) {
  ContainmentCertificate cert;
  cert.ignore = ignore;
  for (std::size_t n = ignore; n < a.size(); ++n) {
    const auto& source = a[n];
    if (source.words().empty()) continue;
    std::vector<std::pair<std::size_t, calculus_detail::Fibers>> meeting;
    for (std::size_t m = 0; m < b.size(); ++m) {
      if (intersects(source.block().coords(), b[m].block().coords())) {
        meeting.emplace_back(m, calculus_detail::fibers(source.block(), b[m]));
      }
    }
    for (const auto& s : source.words()) {
      const std::uint64_t code = s.code();
      std::optional<std::size_t> chosen;
      for (const auto& [m, f] : meeting) {
        if (f.full(extract_bits(code, f.source_mask))) {
          chosen = m;
          break;
        }
      }
      if (chosen) {
        cert.choices.push_back({n, s, *chosen});
        continue;
      }
      Failure failure{n, s, {}};
      for (const auto& [m, f] : meeting) {
        const auto it = f.by_overlap.find(extract_bits(code, f.source_mask));
        FailureAt at{m, std::nullopt};
        if (it != f.by_overlap.end()) {
          std::uint64_t gap = 0;
          for (auto u : it->second) {
            if (u != gap) break;
            ++gap;
          }
          at.spoiler = Word::from_code(f.rest, gap);
        }
        failure.at.push_back(std::move(at));
      }
      cert.failures.push_back(std::move(failure));
    }
  }
  cert.contained = cert.failures.empty();
  return cert;
}

/// A real on [0, N) that hits `a` at the first failing entry of `cert` and
/// hits no block of `b`. N defaults to the span of both reps.
inline Word witness_not_subset(const SmallRep& a, const SmallRep& b, const ContainmentCertificate& cert,
                               std::size_t length = 0) {
  if (cert.contained) throw Error(ErrorKind::InvalidInput, "the certificate reports containment; nothing to witness");
  for (std::size_t m = 0; m < b.size(); ++m) {
    if (b[m].is_full()) {
      throw Error(ErrorKind::ImproperTarget, "target block " + std::to_string(m) + " carries every word");
    }
  }
  const std::size_t n_len = std::max<std::size_t>({length, a.span(), b.span()});
  std::vector<std::uint8_t> bits(n_len, 0);
  auto write = [&](const Word& w) {
    for (std::size_t j = 0; j < w.size(); ++j) bits[w.domain()[j]] = w.bits()[j];
  };
  const Failure& failure = cert.failures.front();
  const auto& source = a[failure.n].block();
  write(failure.s);
  for (std::size_t m = 0; m < b.size(); ++m) {
    if (intersects(source.coords(), b[m].block().coords())) {
      const auto it = std::find_if(failure.at.begin(), failure.at.end(), [&](const FailureAt& f) { return f.m == m; });
      if (it == failure.at.end()) throw Error(ErrorKind::InvalidInput, "certificate does not cover target block " + std::to_string(m));
      if (it->spoiler) write(*it->spoiler);
    } else {
      write(*least_outside(b[m]));
    }
  }
  return Word(interval(0, static_cast<Coord>(n_len)), std::move(bits));
}

struct Interpolant {
  SmallRep rep;  // blocks I_n ∩ I'_m, ordered by (n, m)
  Dyadic weight;
  Dyadic target_weight;
  /// Σ_m c_m |J'_m|/2^|I'_m| with c_m the number of source blocks meeting I'_m;
  /// always an upper bound for `weight`.
  Dyadic multiplicity_bound;

  bool weight_at_most_target() const { return weight <= target_weight; }
};

/// Common refinement sandwiched between a and b: on each nonempty I_n ∩ I'_m,
/// J''_{n,m} holds the overlap words whose whole fiber lies in J'_m.
inline Interpolant refine_interpolant(const SmallRep& a, const SmallRep& b) {
  if (!subset_blockwise(a, b, 0).contained) {
    throw Error(ErrorKind::NotContained, "the blockwise containment criterion fails");
  }
  Interpolant out;
  std::vector<Entry> entries;
  std::vector<std::size_t> meets(b.size(), 0);
  for (std::size_t n = 0; n < a.size(); ++n) {
    for (std::size_t m = 0; m < b.size(); ++m) {
      if (!intersects(a[n].block().coords(), b[m].block().coords())) continue;
      ++meets[m];
      const auto f = calculus_detail::fibers(a[n].block(), b[m]);
      std::vector<Word> words;
      for (const auto& [code, rest] : f.by_overlap) {
        if (rest.size() == f.fiber_size()) words.push_back(Word::from_code(f.overlap, code));
      }
      entries.emplace_back(Block(f.overlap), std::move(words));
    }
  }
  out.rep = SmallRep(std::move(entries));
  out.weight = rep_weight(out.rep);
  out.target_weight = rep_weight(b);
  for (std::size_t m = 0; m < b.size(); ++m) out.multiplicity_bound += b[m].density() * Dyadic(static_cast<long long>(meets[m]));
  return out;
}

}  // namespace smallset
