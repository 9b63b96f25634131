#pragma once

// JSON reading and writing for every structured input and output. Words are
// 0/1 strings, blocks are coordinate arrays, dyadics are "m/2^e" strings.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smallset/calculus.hpp"
#include "smallset/counterexample.hpp"
#include "smallset/dyadic.hpp"
#include "smallset/error.hpp"
#include "smallset/hitting.hpp"
#include "smallset/nullrep.hpp"
#include "smallset/rep.hpp"
#include "smallset/word.hpp"

namespace smallset::io {

using json = nlohmann::ordered_json;

/// 64-bit FNV-1a, as 16 hex digits.
inline std::string fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline json parse(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, origin + ": " + e.what());
  }
}

namespace detail {

template <class T>
T get(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed ") + what);
  }
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::InvalidInput, std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace detail

inline json to_json(const Dyadic& d) { return d.str(); }

inline Dyadic dyadic_from(const json& j) {
  if (j.is_number_integer()) return Dyadic(j.get<long long>());
  return Dyadic::parse(detail::get<std::string>(j, "dyadic"));
}

inline json to_json(const Block& b) { return b.coords(); }

inline Block block_from(const json& j) {
  const auto coords = detail::get<std::vector<Coord>>(j, "block");
  if (coords.empty()) throw Error(ErrorKind::InvalidInput, "blocks must be nonempty");
  return Block(coords);
}

inline json to_json(const std::vector<Word>& words) {
  json out = json::array();
  for (const auto& w : words) out.push_back(w.str());
  return out;
}

inline std::vector<Word> words_from(const json& j, const CoordSet& domain) {
  std::vector<Word> out;
  for (const auto& w : detail::get<std::vector<std::string>>(j, "word list")) out.push_back(Word::from_string(domain, w));
  return out;
}

inline json to_json(const Entry& e) { return json{{"block", to_json(e.block())}, {"words", to_json(e.words())}}; }

inline json to_json(const SmallRep& r) {
  json entries = json::array();
  for (const auto& e : r.entries()) entries.push_back(to_json(e));
  return json{{"entries", entries}};
}

inline SmallRep small_rep_from(const json& j) {
  std::vector<Entry> entries;
  for (const auto& e : detail::field(j, "entries")) {
    Block block = block_from(detail::field(e, "block"));
    auto words = e.contains("words") ? words_from(e.at("words"), block.coords()) : std::vector<Word>{};
    entries.emplace_back(std::move(block), std::move(words));
  }
  return SmallRep(std::move(entries));
}

inline json to_json(const IntervalRep& r) {
  json out = to_json(r.rep());
  return json{{"cuts", r.cuts()}, {"entries", out.at("entries")}};
}

/// {"cuts": [...], "entries": [...]} with entries optional (empty word sets).
inline IntervalRep interval_rep_from(const json& j) {
  const auto cuts = detail::get<std::vector<Coord>>(detail::field(j, "cuts"), "cuts");
  std::vector<std::vector<Word>> words(cuts.empty() ? 0 : cuts.size() - 1);
  if (j.contains("entries")) {
    const auto& entries = j.at("entries");
    if (entries.size() != words.size()) throw Error(ErrorKind::InvalidInput, "entries do not match the cuts");
    for (std::size_t n = 0; n < words.size(); ++n) {
      const CoordSet domain = interval(cuts[n], cuts[n + 1]);
      if (entries[n].contains("block") && block_from(entries[n].at("block")).coords() != domain) {
        throw Error(ErrorKind::InvalidInput, "entry " + std::to_string(n) + " does not lie on its interval");
      }
      if (entries[n].contains("words")) words[n] = words_from(entries[n].at("words"), domain);
    }
  }
  return IntervalRep(cuts, std::move(words));
}

/// A SmallRep from either form (an IntervalRep file is also a SmallRep file).
inline SmallRep any_rep_from(const json& j) {
  if (j.contains("cuts") && !j.contains("entries")) return interval_rep_from(j).rep();
  return small_rep_from(j);
}

inline json to_json(const PrefixRep& f) {
  json families = json::array();
  for (const auto& fam : f.families()) families.push_back(to_json(fam));
  return json{{"families", families}};
}

inline PrefixRep prefix_rep_from(const json& j) {
  std::vector<std::vector<Word>> families;
  const auto& fams = detail::field(j, "families");
  for (std::size_t n = 0; n < fams.size(); ++n) families.push_back(words_from(fams[n], interval(0, static_cast<Coord>(n))));
  return PrefixRep(std::move(families));
}

inline CylinderCover cover_from(const json& j) {
  std::vector<std::vector<Word>> levels;
  for (const auto& level : detail::field(j, "levels")) {
    std::vector<Word> words;
    for (const auto& w : detail::get<std::vector<std::string>>(level, "level")) {
      words.push_back(Word::from_string(interval(0, static_cast<Coord>(w.size())), w));
    }
    levels.push_back(std::move(words));
  }
  return CylinderCover(std::move(levels));
}

inline json to_json(const CylinderCover& c) {
  json levels = json::array();
  for (const auto& l : c.levels()) levels.push_back(to_json(l));
  return json{{"levels", levels}};
}

inline json to_json(const Grouping& g) { return json{{"groups", g.groups()}}; }

inline Grouping grouping_from(const json& j) {
  return Grouping(detail::get<std::vector<std::vector<std::size_t>>>(detail::field(j, "groups"), "groups"));
}

inline json to_json(const HittingCandidate& c) {
  std::vector<Word> words = c.words();
  return json{{"n", c.n},
              {"epsilon", c.epsilon.str()},
              {"seed", c.seed},
              {"size", c.codes.size()},
              {"density", c.density().str()},
              {"words", to_json(words)}};
}

inline HittingCandidate candidate_from(const json& j) {
  const auto n = detail::get<std::size_t>(detail::field(j, "n"), "n");
  if (n > kMaxHittingLength) throw Error(ErrorKind::TooLarge, "n must be at most 24");
  const Dyadic eps = j.contains("epsilon") ? dyadic_from(j.at("epsilon")) : Dyadic(1);
  const std::uint64_t seed = j.contains("seed") ? detail::get<std::uint64_t>(j.at("seed"), "seed") : 0;
  return HittingCandidate::from_words(n, words_from(detail::field(j, "words"), interval(0, static_cast<Coord>(n))), eps,
                                      seed);
}

inline json to_json(const SplitReport& r, bool with_counts = false) {
  json out{{"verdict", verdict_name(r.verdict)}};
  if (r.u) out["u"] = *r.u;
  if (r.verdict == HitVerdict::Refuted) {
    out["b0"] = to_json(r.b0);
    out["b1"] = to_json(r.b1);
  }
  out["splits_checked"] = r.counts.size();
  if (with_counts) {
    json counts = json::array();
    for (const auto& c : r.counts) counts.push_back(json{{"u", c.u}, {"enumerated", c.enumerated}});
    out["counts"] = counts;
  }
  return out;
}

inline json to_json(const Enclosure& e) {
  return json{{"lower", e.lower}, {"upper", e.upper}, {"sign", e.sign}, {"precision", e.precision}};
}

inline json to_json(const TargetBlock& t) {
  return json{{"kind", t.kind}, {"index", t.index}, {"block", to_json(t.block)}};
}

inline json to_json(const TargetSystems& t) {
  json out = json::array();
  for (const auto& b : t.blocks()) out.push_back(to_json(b));
  return json{{"targets", out}};
}

/// {"targets":[{"kind","index","block"}]} or {"window":[lo,hi]} for the standard systems.
inline TargetSystems targets_from(const json& j) {
  if (j.contains("window")) {
    const auto w = detail::get<std::vector<std::uint64_t>>(j.at("window"), "window");
    if (w.size() != 2 || w[0] > w[1]) throw Error(ErrorKind::InvalidInput, "window must be [lo, hi]");
    return TargetSystems::window(w[0], w[1]);
  }
  std::vector<TargetBlock> blocks;
  for (const auto& t : detail::field(j, "targets")) {
    const int kind = detail::get<int>(detail::field(t, "kind"), "kind");
    if (kind != 0 && kind != 1) throw Error(ErrorKind::InvalidInput, "kind must be 0 or 1");
    blocks.push_back({kind, detail::get<std::uint64_t>(detail::field(t, "index"), "index"),
                      block_from(detail::field(t, "block"))});
  }
  return TargetSystems(std::move(blocks));
}

inline json to_json(const Overlap& o) {
  return json{{"kind", o.kind},
              {"index", o.index},
              {"candidate", o.candidate},
              {"overlap", o.size},
              {"target_size", o.target_size}};
}

inline json to_json(const CaseVerdict& v) {
  json pairs = json::array();
  for (const auto& p : v.pairs) pairs.push_back(to_json(p));
  json out{{"case", case_name(v.tag)}, {"i", v.kind}, {"pairs", pairs}};
  if (v.tag == CaseTag::Escalated) {
    json chain = json::array();
    for (const auto& c : v.chain) chain.push_back(to_json(c));
    out["chain"] = chain;
  }
  return out;
}

inline CaseVerdict verdict_from(const json& j) {
  CaseVerdict v;
  const auto tag = detail::get<std::string>(detail::field(j, "case"), "case");
  if (tag == "Case1") {
    v.tag = CaseTag::Case1;
  } else if (tag == "Case2") {
    v.tag = CaseTag::Case2;
  } else if (tag == "Escalated") {
    v.tag = CaseTag::Escalated;
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown case '" + tag + "'");
  }
  v.kind = j.contains("i") ? detail::get<int>(j.at("i"), "i") : 0;
  if (j.contains("pairs")) {
    for (const auto& p : j.at("pairs")) {
      v.pairs.push_back({detail::get<int>(detail::field(p, "kind"), "kind"),
                         detail::get<std::uint64_t>(detail::field(p, "index"), "index"),
                         detail::get<std::size_t>(detail::field(p, "candidate"), "candidate"),
                         detail::get<std::size_t>(detail::field(p, "overlap"), "overlap"),
                         detail::get<std::size_t>(detail::field(p, "target_size"), "target_size")});
    }
  }
  return v;
}

inline json to_json(const PlanItem& p) {
  return json{{"kind", p.kind},
              {"index", p.index},
              {"target", to_json(p.target)},
              {"group_a", p.group_a},
              {"group_b", p.group_b}};
}

inline json to_json(const std::vector<PlanItem>& plan) {
  json out = json::array();
  for (const auto& p : plan) out.push_back(to_json(p));
  return out;
}

inline std::vector<PlanItem> plan_from(const json& j) {
  std::vector<PlanItem> out;
  for (const auto& p : j) {
    out.push_back({detail::get<int>(detail::field(p, "kind"), "kind"),
                   detail::get<std::uint64_t>(detail::field(p, "index"), "index"),
                   block_from(detail::field(p, "target")),
                   detail::get<std::size_t>(detail::field(p, "group_a"), "group_a"),
                   detail::get<std::size_t>(detail::field(p, "group_b"), "group_b")});
  }
  return out;
}

}  // namespace smallset::io
