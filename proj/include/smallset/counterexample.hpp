#pragma once

// The interval systems I⁰_n = [n(n+1), (n+1)(n+2)) and I¹_n = [n², (n+1)²),
// classification of a candidate partition against them, regrouping, and the
// refutation that produces a word inside the target set but outside the
// regrouped candidate.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smallset/bound.hpp"
#include "smallset/calculus.hpp"
#include "smallset/dyadic.hpp"
#include "smallset/error.hpp"
#include "smallset/hitting.hpp"
#include "smallset/rep.hpp"
#include "smallset/splitmix.hpp"
#include "smallset/word.hpp"

namespace smallset {

// ---------------------------------------------------------------------------
// Interval systems

inline std::uint64_t interval_cut(int kind, std::uint64_t n) { return kind == 0 ? n * (n + 1) : n * n; }

inline void check_interval_index(int kind, std::uint64_t n) {
  if (kind != 0 && kind != 1) throw Error(ErrorKind::InvalidInput, "kind must be 0 or 1");
  if (kind == 1 && n == 0) throw Error(ErrorKind::InvalidInput, "kind 1 intervals start at n = 1");
  if (n > 60000) throw Error(ErrorKind::TooLarge, "interval index beyond the coordinate range");
}

/// [k_n, k_{n+1}) as a half-open pair.
inline std::pair<std::uint64_t, std::uint64_t> interval_span(int kind, std::uint64_t n) {
  check_interval_index(kind, n);
  return {interval_cut(kind, n), interval_cut(kind, n + 1)};
}

inline Block interval_block(int kind, std::uint64_t n) {
  const auto [lo, hi] = interval_span(kind, n);
  return Block::range(static_cast<Coord>(lo), static_cast<Coord>(hi));
}

struct IntervalCheck {
  std::uint64_t n = 0;
  std::uint64_t size0 = 0;
  std::uint64_t size1 = 0;
  bool sizes = true;   // |I⁰_n| = 2n+2, |I¹_n| = 2n+1
  bool cover0 = true;  // I⁰_n ⊆ I¹_n ∪ I¹_{n+1}
  bool cover1 = true;  // I¹_n ⊆ I⁰_{n-1} ∪ I⁰_n, for n > 1
  std::uint64_t zero_one = 0;       // |I⁰_n ∩ I¹_n|
  std::uint64_t one_zero_prev = 0;  // |I¹_n ∩ I⁰_{n-1}|
  std::uint64_t zero_one_next = 0;  // |I⁰_n ∩ I¹_{n+1}|
  std::uint64_t one_zero = 0;       // |I¹_n ∩ I⁰_n|
  bool closed_forms = true;
  bool fractions = true;         // every split fraction in [1/4, 3/4], for n ≥ 2
  bool meet_is_n = true;         // |I⁰_n ∩ I¹_n| = n, for n > 1

  bool ok() const { return sizes && cover0 && cover1 && closed_forms && fractions; }
};

struct IntervalReport {
  std::uint64_t n_max = 0;
  std::vector<IntervalCheck> rows;
  bool properties = true;
  bool closed_forms = true;
  bool fractions = true;
  std::uint64_t meet_n_mismatches = 0;
  std::optional<std::uint64_t> first_failure;
};

namespace cex_detail {

inline std::uint64_t meet(std::pair<std::uint64_t, std::uint64_t> a, std::pair<std::uint64_t, std::uint64_t> b) {
  const auto lo = std::max(a.first, b.first);
  const auto hi = std::min(a.second, b.second);
  return hi > lo ? hi - lo : 0;
}

inline bool quarter_split(std::uint64_t part, std::uint64_t whole) { return 4 * part >= whole && 4 * part <= 3 * whole; }

}  // namespace cex_detail

/// Checks the structural properties for 1 ≤ n ≤ n_max by endpoint arithmetic.
inline IntervalReport interval_report(std::uint64_t n_max) {
  using cex_detail::meet;
  using cex_detail::quarter_split;
  if (n_max < 3) throw Error(ErrorKind::InvalidInput, "n_max must be at least 3");
  IntervalReport report;
  report.n_max = n_max;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    IntervalCheck c;
    c.n = n;
    const auto z = interval_span(0, n);
    const auto o = interval_span(1, n);
    const auto z_prev = interval_span(0, n - 1);
    const auto o_next = interval_span(1, n + 1);
    c.size0 = z.second - z.first;
    c.size1 = o.second - o.first;
    c.sizes = c.size0 == 2 * n + 2 && c.size1 == 2 * n + 1;
    // consecutive intervals of one kind are contiguous, so unions are spans
    c.cover0 = o.first <= z.first && z.second <= o_next.second && o.second == o_next.first;
    if (n > 1) c.cover1 = z_prev.first <= o.first && o.second <= z.second && z_prev.second == z.first;
    c.zero_one = meet(z, o);
    c.one_zero_prev = meet(o, z_prev);
    c.zero_one_next = meet(z, o_next);
    c.one_zero = meet(o, z);
    c.closed_forms = c.zero_one == n + 1 && c.one_zero_prev == n && c.zero_one_next == n + 1 && c.one_zero == n + 1;
    if (n >= 2) {
      c.fractions = quarter_split(c.zero_one, c.size0) && quarter_split(c.zero_one_next, c.size0) &&
                    quarter_split(c.one_zero_prev, c.size1) && quarter_split(c.one_zero, c.size1);
      c.meet_is_n = c.zero_one == n && c.one_zero_prev == n;
      if (!c.meet_is_n) ++report.meet_n_mismatches;
    }
    report.properties = report.properties && c.sizes && c.cover0 && c.cover1;
    report.closed_forms = report.closed_forms && c.closed_forms;
    report.fractions = report.fractions && c.fractions;
    if (!c.ok() && !report.first_failure) report.first_failure = n;
    report.rows.push_back(c);
  }
  return report;
}

/// One target block: I^kind_index.
struct TargetBlock {
  int kind = 0;
  std::uint64_t index = 0;
  Block block;
};

/// The target intervals inspected by the case analysis (a finite window).
class TargetSystems {
 public:
  TargetSystems() = default;
  explicit TargetSystems(std::vector<TargetBlock> blocks) : blocks_(std::move(blocks)) {
    std::sort(blocks_.begin(), blocks_.end(), [](const TargetBlock& a, const TargetBlock& b) {
      return std::pair(a.kind, a.index) < std::pair(b.kind, b.index);
    });
    for (std::size_t i = 1; i < blocks_.size(); ++i) {
      if (blocks_[i].kind == blocks_[i - 1].kind && blocks_[i].index == blocks_[i - 1].index) {
        throw Error(ErrorKind::InvalidInput, "duplicate target index");
      }
    }
  }

  /// I⁰_m for m ∈ [lo, hi] and I¹_m for m ∈ [max(lo,1), hi].
  static TargetSystems window(std::uint64_t lo, std::uint64_t hi) {
    std::vector<TargetBlock> blocks;
    for (std::uint64_t m = lo; m <= hi; ++m) blocks.push_back({0, m, interval_block(0, m)});
    for (std::uint64_t m = std::max<std::uint64_t>(lo, 1); m <= hi; ++m) blocks.push_back({1, m, interval_block(1, m)});
    return TargetSystems(std::move(blocks));
  }

  /// Entry k of rep0 becomes (0, k), entry k of rep1 becomes (1, k).
  static TargetSystems from_reps(const SmallRep& rep0, const SmallRep& rep1) {
    std::vector<TargetBlock> blocks;
    for (std::size_t k = 0; k < rep0.size(); ++k) blocks.push_back({0, k, rep0[k].block()});
    for (std::size_t k = 0; k < rep1.size(); ++k) blocks.push_back({1, k, rep1[k].block()});
    return TargetSystems(std::move(blocks));
  }

  const std::vector<TargetBlock>& blocks() const noexcept { return blocks_; }

  std::vector<const TargetBlock*> of_kind(int kind) const {
    std::vector<const TargetBlock*> out;
    for (const auto& b : blocks_) {
      if (b.kind == kind) out.push_back(&b);
    }
    return out;
  }

 private:
  std::vector<TargetBlock> blocks_;
};

// ---------------------------------------------------------------------------
// Instances

struct BlockSearch {
  int kind = 0;
  std::size_t pair = 0;
  Dyadic epsilon;
  std::uint64_t seed = 0;
  std::size_t tries = 0;
  HittingCandidate candidate;
};

struct Instance {
  SmallRep rep0;
  SmallRep rep1;
  std::vector<BlockSearch> searches;
};

/// For each pair (I⁰, I¹), fill both blocks with hitting sets from
/// find_hitting. Seeds are consecutive outputs of SplitMix64(seed), one per block.
inline Instance build_instance(const std::vector<std::pair<Block, Block>>& pairs, const std::vector<Dyadic>& eps,
                               std::uint64_t seed, std::size_t max_tries = 200,
                               std::uint64_t budget = kDefaultSplitBudget, unsigned jobs = 1) {
  if (eps.empty() && !pairs.empty()) throw Error(ErrorKind::InvalidInput, "at least one epsilon is required");
  SplitMix64 seeds(seed);
  std::vector<Entry> e0;
  std::vector<Entry> e1;
  Instance out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Dyadic& epsilon = eps[std::min(k, eps.size() - 1)];
    for (int kind = 0; kind < 2; ++kind) {
      const Block& block = kind == 0 ? pairs[k].first : pairs[k].second;
      if (block.size() > 9) throw Error(ErrorKind::TooLarge, "materialized blocks must have length at most 9");
      const std::uint64_t s = seeds.next();
      auto found = find_hitting(block.size(), epsilon, max_tries, s, budget, jobs);
      if (!found.found) {
        throw Error(ErrorKind::NotFound, "no hitting set found for block " + std::to_string(2 * k + kind) + " (pair " +
                                             std::to_string(k) + ", kind " + std::to_string(kind) + ")");
      }
      (kind == 0 ? e0 : e1).push_back(candidate_entry(*found.found, block));
      out.searches.push_back({kind, k, epsilon, s, found.tries, *found.found});
    }
  }
  out.rep0 = SmallRep(std::move(e0));
  out.rep1 = SmallRep(std::move(e1));
  return out;
}

/// Parameter records only: ε_m = 1/m² with the existence check for m ∈ [lo, hi].
inline std::vector<DefinedCheck> symbolic_instance(std::uint64_t lo, std::uint64_t hi) {
  std::vector<DefinedCheck> out;
  for (std::uint64_t m = lo; m <= hi; ++m) out.push_back(check_defined(m));
  return out;
}

// ---------------------------------------------------------------------------
// Case analysis

enum class CaseTag { Case1, Case2, Escalated };

constexpr std::string_view case_name(CaseTag t) {
  switch (t) {
    case CaseTag::Case1: return "Case1";
    case CaseTag::Case2: return "Case2";
    case CaseTag::Escalated: return "Escalated";
  }
  return "?";
}

/// |T ∩ C| for target (kind, index) and candidate block number `candidate`.
struct Overlap {
  int kind = 0;
  std::uint64_t index = 0;
  std::size_t candidate = 0;
  std::size_t size = 0;
  std::size_t target_size = 0;

  bool quarter() const { return cex_detail::quarter_split(size, target_size); }
  bool above() const { return 4 * size > 3 * target_size; }
};

struct CaseVerdict {
  CaseTag tag = CaseTag::Case2;
  int kind = 0;                 // i of Case 1 (the kind the chain ends on when escalated)
  std::vector<Overlap> pairs;   // every quarter-split overlap of that kind
  std::vector<Overlap> chain;   // escalation path, starting at the > 3/4 overlap
};

namespace cex_detail {

class Owners {
 public:
  explicit Owners(const std::vector<Block>& candidate) {
    for (std::size_t l = 0; l < candidate.size(); ++l) {
      for (Coord c : candidate[l].coords()) {
        if (!owner_.emplace(c, l).second) {
          throw Error(ErrorKind::OverlappingDomains,
                      "candidate blocks overlap at coordinate " + std::to_string(c));
        }
      }
    }
  }

  std::optional<std::size_t> owner(Coord c) const {
    const auto it = owner_.find(c);
    if (it == owner_.end()) return std::nullopt;
    return it->second;
  }

  // (candidate, |T ∩ candidate|) in candidate order; throws if T is not covered.
  std::vector<std::pair<std::size_t, std::size_t>> split(const Block& target) const {
    std::map<std::size_t, std::size_t> counts;
    for (Coord c : target.coords()) {
      const auto o = owner(c);
      if (!o) throw Error(ErrorKind::InvalidInput, "candidate does not cover coordinate " + std::to_string(c));
      ++counts[*o];
    }
    return {counts.begin(), counts.end()};
  }

 private:
  std::map<Coord, std::size_t> owner_;
};

inline std::size_t overlap_with(const Owners& owners, const Block& target, std::size_t candidate) {
  std::size_t n = 0;
  for (Coord c : target.coords()) n += owners.owner(c) == candidate;
  return n;
}

inline std::vector<Overlap> quarter_pairs(const TargetSystems& targets, const Owners& owners, int kind) {
  std::vector<Overlap> out;
  for (const auto* t : targets.of_kind(kind)) {
    for (const auto& [l, size] : owners.split(t->block)) {
      Overlap o{kind, t->index, l, size, t->block.size()};
      if (o.quarter()) out.push_back(o);
    }
  }
  return out;
}

// Breadth-first search over targets covered > 3/4 by one candidate block,
// moving to other-kind targets that meet the current one, until one of them
// is split in [1/4, 3/4] by the same block.
struct Escalation {
  std::vector<Overlap> chain;
  bool open_frontier = false;
};

inline Escalation escalate(const TargetSystems& targets, const Owners& owners, const TargetBlock& start,
                           std::size_t candidate) {
  const auto& all = targets.blocks();
  auto id = [&](const TargetBlock* t) { return static_cast<std::size_t>(t - all.data()); };
  auto make = [&](const TargetBlock& t) {
    return Overlap{t.kind, t.index, candidate, overlap_with(owners, t.block, candidate), t.block.size()};
  };
  Escalation out;
  std::vector<std::optional<std::size_t>> parent(all.size());
  std::vector<bool> seen(all.size(), false);
  std::deque<std::size_t> queue{id(&start)};
  seen[id(&start)] = true;
  auto path_to = [&](std::size_t end) {
    std::vector<Overlap> chain;
    for (std::optional<std::size_t> v = end; v; v = parent[*v]) chain.push_back(make(all[*v]));
    std::reverse(chain.begin(), chain.end());
    return chain;
  };
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    const TargetBlock& t = all[cur];
    // other-kind targets meeting t, the one holding min(t) first
    std::vector<const TargetBlock*> next;
    CoordSet covered;
    for (const auto* nb : targets.of_kind(1 - t.kind)) {
      if (intersects(nb->block.coords(), t.block.coords())) {
        next.push_back(nb);
        covered = set_union(covered, nb->block.coords());
      }
    }
    std::stable_sort(next.begin(), next.end(), [&](const TargetBlock* a, const TargetBlock* b) {
      return a->block.contains(t.block.front()) > b->block.contains(t.block.front());
    });
    if (!is_subset(t.block.coords(), covered)) out.open_frontier = true;
    for (const auto* nb : next) {
      if (make(*nb).quarter()) {
        parent[id(nb)] = cur;
        out.chain = path_to(id(nb));
        return out;
      }
    }
    for (const auto* nb : next) {
      if (!seen[id(nb)] && make(*nb).above()) {
        seen[id(nb)] = true;
        parent[id(nb)] = cur;
        queue.push_back(id(nb));
      }
    }
  }
  return out;
}

}  // namespace cex_detail

/// Case 1 if some target of kind 0 (then kind 1) is split in [1/4, 3/4] by a
/// candidate block; a > 3/4 overlap is escalated through neighbouring targets
/// of alternating kind; Case 2 when every overlap is below 1/4.
inline CaseVerdict classify_case(const TargetSystems& targets, const std::vector<Block>& candidate) {
  const cex_detail::Owners owners(candidate);
  bool any_above = false;
  bool open = false;
  for (int kind = 0; kind < 2; ++kind) {
    auto pairs = cex_detail::quarter_pairs(targets, owners, kind);
    if (!pairs.empty()) return CaseVerdict{CaseTag::Case1, kind, std::move(pairs), {}};
    for (const auto* t : targets.of_kind(kind)) {
      for (const auto& [l, size] : owners.split(t->block)) {
        if (4 * size <= 3 * t->block.size()) continue;
        any_above = true;
        auto esc = cex_detail::escalate(targets, owners, *t, l);
        if (esc.chain.empty()) {
          open = open || esc.open_frontier;
          continue;
        }
        const int j = esc.chain.back().kind;
        return CaseVerdict{CaseTag::Escalated, j, cex_detail::quarter_pairs(targets, owners, j), std::move(esc.chain)};
      }
    }
  }
  if (!any_above) return CaseVerdict{CaseTag::Case2, 0, {}, {}};
  if (open) throw Error(ErrorKind::WindowTooSmall, "escalation leaves the target window");
  throw Error(ErrorKind::InternalInconsistency, "escalation ended without a quarter split inside the window");
}

// ---------------------------------------------------------------------------
// Regrouping

/// A target T = I^kind_index with T ⊆ I'_a ∪ I'_b, each side holding a quarter
/// to three quarters of T. Group numbers index the regrouped representation.
struct PlanItem {
  int kind = 0;
  std::uint64_t index = 0;
  Block target;
  std::size_t group_a = 0;
  std::size_t group_b = 0;
};

struct Regrouping {
  Grouping grouping;
  SmallRep regrouped;
  std::vector<PlanItem> plan;  // one item per member of Z
};

namespace cex_detail {

struct Selected {
  int kind;
  std::uint64_t index;
  Block target;
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
};

inline Regrouping assemble(const SmallRep& candidate, const std::vector<Selected>& chosen, std::size_t cap) {
  std::vector<bool> used(candidate.size(), false);
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::pair<std::size_t, std::size_t>> item_groups;
  for (const auto& s : chosen) {
    for (auto l : s.a) used[l] = true;
    for (auto l : s.b) used[l] = true;
  }
  for (std::size_t l = 0; l < candidate.size(); ++l) {
    if (!used[l]) groups.push_back({l});
  }
  for (const auto& s : chosen) {
    groups.push_back(s.a);
    groups.push_back(s.b);
  }
  std::sort(groups.begin(), groups.end());
  auto position = [&](const std::vector<std::size_t>& g) {
    return static_cast<std::size_t>(std::lower_bound(groups.begin(), groups.end(), g) - groups.begin());
  };
  Regrouping out;
  for (const auto& s : chosen) out.plan.push_back({s.kind, s.index, s.target, position(s.a), position(s.b)});
  out.grouping = Grouping(std::move(groups));
  out.regrouped = coarsen(candidate, out.grouping, cap);
  return out;
}

inline bool disjoint_from(const std::vector<bool>& used, const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b) {
  for (auto l : a) {
    if (used[l]) return false;
  }
  for (auto l : b) {
    if (used[l]) return false;
  }
  return true;
}

}  // namespace cex_detail

/// Regroup the candidate blocks so that `want` targets each straddle two
/// consecutive groups with quarter-to-three-quarter shares, no group meeting
/// two selected targets. Case 1 pairs a_n = {l} with every other block meeting
/// the target; Case 2 splits the pieces of each kind-0 target left to right,
/// closing the first group once it holds more than a quarter.
inline Regrouping regroup_candidate(const SmallRep& candidate, const CaseVerdict& verdict,
                                    const TargetSystems& targets, std::size_t want,
                                    std::size_t cap = kDefaultBlockCap) {
  if (want == 0) return Regrouping{Grouping::identity(candidate.size()), candidate, {}};
  const auto blocks = candidate.blocks();
  const cex_detail::Owners owners(blocks);
  std::vector<cex_detail::Selected> chosen;
  std::vector<bool> used(candidate.size(), false);
  std::vector<std::pair<int, std::uint64_t>> taken;
  auto accept = [&](cex_detail::Selected s) {
    if (!cex_detail::disjoint_from(used, s.a, s.b)) return;
    for (auto l : s.a) used[l] = true;
    for (auto l : s.b) used[l] = true;
    taken.emplace_back(s.kind, s.index);
    chosen.push_back(std::move(s));
  };

  if (verdict.tag == CaseTag::Case2) {
    for (const auto* t : targets.of_kind(0)) {
      if (chosen.size() == want) break;
      // pieces ordered by their first coordinate inside T
      std::vector<std::pair<Coord, std::size_t>> pieces;
      std::map<std::size_t, std::size_t> sizes;
      for (Coord c : t->block.coords()) {
        const auto o = owners.owner(c);
        if (!o) throw Error(ErrorKind::InvalidInput, "candidate does not cover coordinate " + std::to_string(c));
        if (sizes[*o]++ == 0) pieces.emplace_back(c, *o);
      }
      const std::size_t whole = t->block.size();
      cex_detail::Selected s{0, t->index, t->block, {}, {}};
      std::size_t captured = 0;
      for (const auto& [_, l] : pieces) {
        if (4 * captured <= whole) {
          s.a.push_back(l);
          captured += sizes[l];
        } else {
          s.b.push_back(l);
        }
      }
      std::sort(s.a.begin(), s.a.end());
      std::sort(s.b.begin(), s.b.end());
      if (s.b.empty() || !cex_detail::quarter_split(captured, whole) ||
          !cex_detail::quarter_split(whole - captured, whole)) {
        continue;
      }
      accept(std::move(s));
    }
  } else {
    for (const auto& p : verdict.pairs) {
      if (chosen.size() == want) break;
      if (std::find(taken.begin(), taken.end(), std::pair(p.kind, p.index)) != taken.end()) continue;
      const TargetBlock* t = nullptr;
      for (const auto* c : targets.of_kind(p.kind)) {
        if (c->index == p.index) t = c;
      }
      if (t == nullptr) throw Error(ErrorKind::InvalidInput, "verdict names a target outside the systems");
      cex_detail::Selected s{p.kind, p.index, t->block, {p.candidate}, {}};
      for (const auto& [l, size] : owners.split(t->block)) {
        if (l != p.candidate) s.b.push_back(l);
      }
      if (s.b.empty()) continue;
      accept(std::move(s));
    }
  }
  if (chosen.size() < want) {
    throw Error(ErrorKind::CannotRegroup, "only " + std::to_string(chosen.size()) + " of " + std::to_string(want) +
                                              " targets could be regrouped inside the window");
  }
  return cex_detail::assemble(candidate, chosen, cap);
}

/// Interval check of a plan against the blocks it refers to: T ⊆ I'_a ∪ I'_b,
/// both shares in [1/4, 3/4], and no block meets two planned targets.
inline bool check_plan(const std::vector<Block>& blocks, const std::vector<PlanItem>& plan) {
  for (const auto& p : plan) {
    if (p.group_a >= blocks.size() || p.group_b >= blocks.size() || p.group_a == p.group_b) return false;
    const auto& a = blocks[p.group_a].coords();
    const auto& b = blocks[p.group_b].coords();
    const auto& t = p.target.coords();
    if (!is_subset(t, set_union(a, b))) return false;
    if (!cex_detail::quarter_split(intersection_size(t, a), t.size())) return false;
    if (!cex_detail::quarter_split(intersection_size(t, b), t.size())) return false;
  }
  for (const auto& blk : blocks) {
    std::size_t met = 0;
    for (const auto& p : plan) met += intersects(blk.coords(), p.target.coords());
    if (met > 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Refutation

struct RefuteStep {
  std::uint64_t index = 0;
  Word s;    // s_m on the target block
  Word t_a;  // completion on I'_a
  Word t_b;  // completion on I'_b
};

struct Refutation {
  Word x;
  std::vector<RefuteStep> steps;
};

namespace cex_detail {

// Codes (over the overlap, in target-block coordinate order) whose whole
// fiber lies in J'; plus the fibers themselves for the completion step.
struct Side {
  const Entry* entry = nullptr;
  calculus_detail::Fibers fibers;
  std::uint64_t overlap_mask_in_target = 0;
};

inline Side side(const Block& target, const Entry& e) {
  Side s;
  s.entry = &e;
  s.fibers = calculus_detail::fibers(target, e);
  s.overlap_mask_in_target = position_mask(target.coords(), s.fibers.overlap);
  std::size_t full = 0;
  for (const auto& [code, rest] : s.fibers.by_overlap) full += rest.size() == s.fibers.fiber_size();
  if (2 * full > (std::uint64_t{1} << s.fibers.overlap.size())) {
    throw Error(ErrorKind::DenseTarget, "the full-fiber set on a target overlap has relative size above 1/2");
  }
  return s;
}

// Least completion u of the overlap word with code `o` such that the joined
// word lies outside J'.
inline Word complete(const Side& s, std::uint64_t o) {
  std::uint64_t u = 0;
  const auto it = s.fibers.by_overlap.find(o);
  if (it != s.fibers.by_overlap.end()) {
    for (auto r : it->second) {
      if (r != u) break;
      ++u;
    }
  }
  return word_join(Word::from_code(s.fibers.overlap, o), Word::from_code(s.fibers.rest, u));
}

}  // namespace cex_detail

/// Build x on [0, N) with x↾T ∈ J_T for every planned target T and
/// x↾I'_n ∉ J'_n for every regrouped block.
inline Refutation case1_refute(const SmallRep& targets, const SmallRep& regrouped, const std::vector<PlanItem>& plan,
                               std::size_t length) {
  if (!check_plan(regrouped.blocks(), plan)) {
    throw Error(ErrorKind::InvalidInput, "plan does not satisfy the regrouping conditions");
  }
  const CoordSet all = interval(0, static_cast<Coord>(length));
  for (const auto& e : regrouped.entries()) {
    if (!is_subset(e.block().coords(), all)) throw Error(ErrorKind::DomainTooSmall, "a regrouped block reaches past N");
  }
  std::vector<std::uint8_t> bits(length, 0);
  auto write = [&](const Word& w) {
    for (std::size_t i = 0; i < w.size(); ++i) bits[w.domain()[i]] = w.bits()[i];
  };
  std::vector<bool> settled(regrouped.size(), false);
  Refutation out;
  for (const auto& p : plan) {
    const Entry* target = nullptr;
    for (const auto& e : targets.entries()) {
      if (e.block() == p.target) target = &e;
    }
    if (target == nullptr) throw Error(ErrorKind::InvalidInput, "planned target block is missing from the target rep");
    if (p.target.size() > kMaxCodeBits) throw Error(ErrorKind::BlockTooLarge, "target block too wide");
    const auto a = cex_detail::side(p.target, regrouped[p.group_a]);
    const auto b = cex_detail::side(p.target, regrouped[p.group_b]);
    std::optional<Word> s;
    for (const auto& w : target->words()) {
      const std::uint64_t code = w.code();
      if (a.fibers.full(extract_bits(code, a.overlap_mask_in_target))) continue;
      if (b.fibers.full(extract_bits(code, b.overlap_mask_in_target))) continue;
      s = w;
      break;
    }
    if (!s) {
      throw Error(ErrorKind::HittingFailure, "no word of the target on block starting at " +
                                                 std::to_string(p.target.front()) + " avoids both full-fiber sets");
    }
    const std::uint64_t code = s->code();
    RefuteStep step{p.index, *s, cex_detail::complete(a, extract_bits(code, a.overlap_mask_in_target)),
                    cex_detail::complete(b, extract_bits(code, b.overlap_mask_in_target))};
    write(step.t_a);
    write(step.t_b);
    settled[p.group_a] = settled[p.group_b] = true;
    out.steps.push_back(std::move(step));
  }
  for (std::size_t n = 0; n < regrouped.size(); ++n) {
    if (settled[n]) continue;
    const auto r = least_outside(regrouped[n]);
    if (!r) throw Error(ErrorKind::ImproperTarget, "regrouped block " + std::to_string(n) + " is full");
    write(*r);
  }
  out.x = Word(all, std::move(bits));
  return out;
}

// ---------------------------------------------------------------------------
// Even/odd interleaving and small★ normalization

namespace cex_detail {

inline Block map_block(const Block& b, int parity) {
  std::vector<Coord> coords;
  for (Coord c : b.coords()) coords.push_back(2 * c + static_cast<Coord>(parity));
  return Block(std::move(coords));
}

inline Entry map_entry(const Entry& e, int parity) {
  const Block block = map_block(e.block(), parity);
  std::vector<Word> words;
  for (const auto& w : e.words()) words.emplace_back(block.coords(), w.bits());
  return Entry(block, std::move(words));
}

}  // namespace cex_detail

/// rep0 through k ↦ 2k and rep1 through k ↦ 2k+1, entries interleaved.
inline SmallRep even_odd_embed(const SmallRep& rep0, const SmallRep& rep1) {
  std::vector<Entry> out;
  for (std::size_t k = 0; k < std::max(rep0.size(), rep1.size()); ++k) {
    if (k < rep0.size()) out.push_back(cex_detail::map_entry(rep0[k], 0));
    if (k < rep1.size()) out.push_back(cex_detail::map_entry(rep1[k], 1));
  }
  return SmallRep(std::move(out));
}

inline TargetSystems embed_targets(const TargetSystems& t) {
  std::vector<TargetBlock> out;
  for (const auto& b : t.blocks()) out.push_back({b.kind, b.index, cex_detail::map_block(b.block, b.kind)});
  return TargetSystems(std::move(out));
}

struct Normalization {
  IntervalRep rep;
  Grouping grouping;
  std::vector<std::optional<TargetBlock>> splits;  // splits[n]: target across the cut between n and n+1
  std::vector<PlanItem> plan;                      // thinned, ready for case1_refute
};

namespace cex_detail {

inline std::size_t below(const Block& t, Coord cut) {
  return static_cast<std::size_t>(std::lower_bound(t.coords().begin(), t.coords().end(), cut) - t.coords().begin());
}

}  // namespace cex_detail

/// Merge consecutive intervals so that every produced cut splits some target
/// T in [1/4, 3/4] with T inside the two intervals around the cut. Cuts are
/// chosen greedily: the next one is the least original cut past the previous
/// target that splits a target starting at or after the current cut, taking
/// the target that ends first.
inline Normalization smallstar_normalize(const IntervalRep& candidate, const TargetSystems& targets,
                                         std::size_t cap = kDefaultBlockCap) {
  const auto& cuts = candidate.cuts();
  std::vector<std::size_t> chosen{0};  // indices into cuts
  std::vector<std::optional<TargetBlock>> split_by;
  std::optional<Coord> reach;          // max of the last chosen target
  for (;;) {
    const Coord current = cuts[chosen.back()];
    std::optional<std::size_t> pick;
    std::optional<TargetBlock> pick_target;
    for (std::size_t i = chosen.back() + 1; i + 1 < cuts.size() && !pick; ++i) {
      const Coord c = cuts[i];
      if (reach && c <= *reach) continue;
      for (const auto& t : targets.blocks()) {
        if (t.block.front() < current || t.block.front() >= c || t.block.back() < c) continue;
        if (!cex_detail::quarter_split(cex_detail::below(t.block, c), t.block.size())) continue;
        if (!pick_target || t.block.back() < pick_target->block.back()) pick_target = t;
      }
      if (pick_target) pick = i;
    }
    if (!pick) break;
    chosen.push_back(*pick);
    split_by.push_back(pick_target);
    reach = pick_target->block.back();
  }
  if (!split_by.empty() && split_by.back()->block.back() >= cuts.back()) {
    chosen.pop_back();
    split_by.pop_back();
  }
  if (split_by.empty()) throw Error(ErrorKind::WindowTooSmall, "no cut splits a target inside the window");
  chosen.push_back(cuts.size() - 1);

  std::vector<std::vector<std::size_t>> groups;
  std::vector<Coord> new_cuts;
  for (std::size_t j = 0; j + 1 < chosen.size(); ++j) {
    std::vector<std::size_t> g;
    for (std::size_t i = chosen[j]; i < chosen[j + 1]; ++i) g.push_back(i);
    groups.push_back(std::move(g));
    new_cuts.push_back(cuts[chosen[j]]);
  }
  new_cuts.push_back(cuts.back());
  Normalization out;
  out.grouping = Grouping(groups);
  const SmallRep merged = coarsen(candidate.rep(), out.grouping, cap);
  std::vector<std::vector<Word>> words;
  for (const auto& e : merged.entries()) words.push_back(e.words());
  out.rep = IntervalRep(std::move(new_cuts), std::move(words));
  out.splits = split_by;
  // thinning: a cut is used when neither neighbouring interval is used yet
  std::vector<bool> used(groups.size(), false);
  for (std::size_t n = 0; n < split_by.size(); ++n) {
    if (used[n] || used[n + 1]) continue;
    used[n] = used[n + 1] = true;
    out.plan.push_back({split_by[n]->kind, split_by[n]->index, split_by[n]->block, n, n + 1});
  }
  return out;
}

/// The split conditions for every produced cut, by interval arithmetic.
inline bool check_normalized(const IntervalRep& rep, const std::vector<std::optional<TargetBlock>>& splits) {
  const auto& cuts = rep.cuts();
  if (splits.size() + 2 != cuts.size()) return false;
  for (std::size_t n = 0; n < splits.size(); ++n) {
    if (!splits[n]) return false;
    const Block& t = splits[n]->block;
    const Coord lo = cuts[n];
    const Coord mid = cuts[n + 1];
    const Coord hi = cuts[n + 2];
    if (t.front() < lo || t.back() >= hi) return false;
    const std::size_t left = cex_detail::below(t, mid) - cex_detail::below(t, lo);
    if (!cex_detail::quarter_split(left, t.size()) || !cex_detail::quarter_split(t.size() - left, t.size())) {
      return false;
    }
  }
  return true;
}

}  // namespace smallset
