// smallset: command-line front end. Every command prints a JSON transcript
// (to stdout, or to --out) and exits 0 for true/verified, 1 for
// false/refuted, 2 for usage and input errors.

#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "smallset/io.hpp"
#include "smallset/smallset.hpp"

namespace {

using namespace smallset;
using io::json;

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;

struct Session {
  json transcript = json::object();
  std::string out;
  unsigned jobs = 1;
  bool timing = false;

  json load(const std::string& path) {
    const std::string text = io::read_file(path);
    transcript["inputs"][path] = io::fnv1a(text);
    return io::parse(text, path);
  }

  void inconsistent(const std::string& what) const { throw Error(ErrorKind::InternalInconsistency, what); }
};

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const auto v = std::stoull(text);
      return {v, v};
    }
    return {std::stoull(text.substr(0, dots)), std::stoull(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "expected a range lo..hi, got '" + text + "'");
  }
}

json hits_json(const std::vector<std::size_t>& hits) { return hits; }

// Targets proper: no entry carries every word of its block.
bool proper(const SmallRep& r) {
  for (const auto& e : r.entries()) {
    if (e.is_full()) return false;
  }
  return true;
}

json oracle_verdict(const OracleVerdict& v) {
  json out{{"holds", v.holds}};
  if (v.counterexample) out["counterexample"] = v.counterexample->str();
  return out;
}

json bound_json(const BlockBound& b) {
  json out{{"block", json::array({b.lo, b.hi})}, {"density", b.density.str()}, {"mass", b.mass.str()}};
  out["epsilon"] = b.eps ? json(b.eps->str()) : json(nullptr);
  out["holds"] = b.holds();
  return out;
}

json certificate_json(const ContainmentCertificate& cert) {
  json failures = json::array();
  for (const auto& f : cert.failures) {
    json at = json::array();
    for (const auto& a : f.at) {
      json item{{"m", a.m}};
      item["spoiler"] = a.spoiler ? json(a.spoiler->str()) : json(nullptr);
      at.push_back(item);
    }
    failures.push_back(json{{"n", f.n}, {"s", f.s.str()}, {"at", at}});
  }
  json choices = json::array();
  for (const auto& c : cert.choices) choices.push_back(json{{"n", c.n}, {"s", c.s.str()}, {"m", c.m}});
  return json{{"contained", cert.contained}, {"ignore", cert.ignore}, {"choices", choices}, {"failures", failures}};
}

PrefixRep load_prefix(Session& s, const std::string& path) {
  const json j = s.load(path);
  if (j.contains("levels")) return cylinders_to_prefix(io::cover_from(j));
  return io::prefix_rep_from(j);
}

// ---------------------------------------------------------------------------

int cmd_validate(Session& s, const std::string& path) {
  const json j = s.load(path);
  json& t = s.transcript;
  if (j.contains("families")) {
    const auto f = io::prefix_rep_from(j);
    t["type"] = "prefix";
    t["weight"] = prefix_weight(f).str();
    t["support_end"] = f.support_end();
  } else if (j.contains("levels")) {
    const auto c = io::cover_from(j);
    t["type"] = "cover";
    t["measure"] = c.total_measure().str();
    t["null_hypothesis"] = c.satisfies_null_hypothesis();
  } else if (j.contains("cuts")) {
    const auto r = io::interval_rep_from(j);
    t["type"] = "interval";
    t["blocks"] = r.size();
    t["weight"] = rep_weight(r.rep()).str();
  } else if (j.contains("entries")) {
    const auto r = io::small_rep_from(j);
    t["type"] = "small";
    t["blocks"] = r.size();
    t["weight"] = rep_weight(r).str();
    t["proper"] = proper(r);
  } else if (j.contains("n") && j.contains("words")) {
    const auto c = io::candidate_from(j);
    t["type"] = "candidate";
    t["size"] = c.codes.size();
    t["density"] = c.density().str();
  } else if (j.contains("targets") || j.contains("window")) {
    t["type"] = "targets";
    t["blocks"] = io::targets_from(j).blocks().size();
  } else if (j.contains("groups")) {
    t["type"] = "grouping";
    t["groups"] = io::grouping_from(j).groups().size();
  } else {
    throw Error(ErrorKind::InvalidInput, "unrecognized document");
  }
  t["valid"] = true;
  return kTrue;
}

int cmd_weight(Session& s, const std::string& path) {
  const json j = s.load(path);
  if (j.contains("families")) {
    s.transcript["weight"] = prefix_weight(io::prefix_rep_from(j)).str();
  } else if (j.contains("levels")) {
    s.transcript["weight"] = io::cover_from(j).total_measure().str();
  } else {
    s.transcript["weight"] = rep_weight(io::any_rep_from(j)).str();
  }
  return kTrue;
}

template <class Rep>
json members_json(const Rep& rep, const Truncation& t, std::size_t threshold, bool list) {
  const auto m = enumerate_members(rep, t, threshold, list);
  json out{{"trunc", t.n}, {"threshold", threshold}, {"count", m.count}, {"measure", Dyadic::ratio(m.count, t.n).str()}};
  if (list) {
    json words = json::array();
    for (auto x = m.bitmap->find_first(); x != CodeTable::npos; x = m.bitmap->find_next(x)) {
      words.push_back(truncated_word(x, t.n).str());
    }
    out["members"] = words;
  }
  return out;
}

int cmd_members(Session& s, const std::string& path, std::size_t trunc, std::size_t threshold, bool list) {
  const json j = s.load(path);
  const Truncation t(trunc, s.jobs);
  if (list && trunc > 16) throw Error(ErrorKind::TooLarge, "--list is limited to N <= 16");
  json r = j.contains("families") || j.contains("levels")
               ? members_json(j.contains("levels") ? cylinders_to_prefix(io::cover_from(j)) : io::prefix_rep_from(j), t,
                              threshold, list)
               : members_json(io::any_rep_from(j), t, threshold, list);
  s.transcript["members"] = r;
  return kTrue;
}

int cmd_measure(Session& s, const std::string& path, std::size_t trunc) {
  const json j = s.load(path);
  const Truncation t(trunc, s.jobs);
  Dyadic measure;
  Dyadic weight;
  if (j.contains("families") || j.contains("levels")) {
    const auto f = j.contains("levels") ? cylinders_to_prefix(io::cover_from(j)) : io::prefix_rep_from(j);
    measure = exact_measure(f, t);
    weight = prefix_weight(f);
  } else {
    const auto r = io::any_rep_from(j);
    measure = exact_measure(r, t);
    weight = rep_weight(r);
  }
  const Dyadic cap = std::min(weight, Dyadic(1));
  s.transcript["trunc"] = trunc;
  s.transcript["measure"] = measure.str();
  s.transcript["weight"] = weight.str();
  s.transcript["union_bound_holds"] = measure <= cap;
  if (!(measure <= cap)) s.inconsistent("truncated measure exceeds the union bound");
  return kTrue;
}

int cmd_subset(Session& s, const std::string& pa, const std::string& pb, std::size_t ignore,
               std::optional<std::size_t> oracle, std::size_t trunc) {
  const SmallRep a = io::any_rep_from(s.load(pa));
  const SmallRep b = io::any_rep_from(s.load(pb));
  const auto cert = subset_blockwise(a, b, ignore);
  json& t = s.transcript;
  t["contained"] = cert.contained;
  t["certificate"] = certificate_json(cert);
  std::optional<Word> witness;
  if (!cert.contained && proper(b)) {
    witness = witness_not_subset(a, b, cert, trunc);
    t["witness"] = witness->str();
    t["witness_hits_a"] = hits_json(rep_hits(*witness, a));
    t["witness_hits_b"] = hits_json(rep_hits(*witness, b));
  }
  if (oracle) {
    const Truncation tr(*oracle, s.jobs);
    const auto v = subset_oracle(a, b, tr);
    t["oracle"] = oracle_verdict(v);
    if (ignore == 0 && proper(b)) {
      t["oracle"]["compared"] = true;
      if (v.holds != cert.contained) s.inconsistent("blockwise verdict disagrees with the oracle");
      if (witness && witness->size() <= 64) {
        if (oracle_hit_count(*witness, a) == 0 || oracle_hit_count(*witness, b) != 0) {
          s.inconsistent("the witness does not separate a from b");
        }
      }
    } else {
      t["oracle"]["compared"] = false;
    }
  }
  return cert.contained ? kTrue : kFalse;
}

int cmd_witness(Session& s, const std::string& pa, const std::string& pb, std::size_t ignore, std::size_t trunc) {
  const SmallRep a = io::any_rep_from(s.load(pa));
  const SmallRep b = io::any_rep_from(s.load(pb));
  const auto cert = subset_blockwise(a, b, ignore);
  if (cert.contained) {
    s.transcript["contained"] = true;
    return kFalse;
  }
  const Word x = witness_not_subset(a, b, cert, trunc);
  s.transcript["contained"] = false;
  s.transcript["witness"] = x.str();
  s.transcript["hits_a"] = hits_json(rep_hits(x, a));
  s.transcript["hits_b"] = hits_json(rep_hits(x, b));
  return kTrue;
}

int cmd_cover(Session& s, const std::string& pf, const std::string& pa, const std::string& pb, std::size_t trunc) {
  const PrefixRep f = load_prefix(s, pf);
  const SmallRep a = io::any_rep_from(s.load(pa));
  const SmallRep b = io::any_rep_from(s.load(pb));
  const auto v = cover_oracle(f, a, b, Truncation(trunc, s.jobs));
  s.transcript["trunc"] = trunc;
  s.transcript["covered"] = oracle_verdict(v);
  return v.holds ? kTrue : kFalse;
}

int cmd_decompose(Session& s, const std::string& pf, const std::string& eps_text, std::size_t cap,
                  std::optional<std::size_t> oracle) {
  const PrefixRep f = load_prefix(s, pf);
  const EpsSchedule eps = eps_text.empty() ? EpsSchedule() : EpsSchedule::parse(eps_text);
  const auto d = decompose(f, eps, cap);
  json& t = s.transcript;
  t["epsilon"] = eps_text.empty() ? "2^-(k+1)" : eps_text;
  t["cuts"] = d.cuts.interleaved();
  t["a"] = io::to_json(d.a);
  t["b"] = io::to_json(d.b);
  json ab = json::array();
  json bb = json::array();
  bool all = true;
  for (const auto& x : d.a_bounds) {
    ab.push_back(bound_json(x));
    all = all && x.holds();
  }
  for (const auto& x : d.b_bounds) {
    bb.push_back(bound_json(x));
    all = all && x.holds();
  }
  t["a_bounds"] = ab;
  t["b_bounds"] = bb;
  t["bounds_hold"] = all;
  if (oracle) {
    const auto v = cover_oracle(f, d.a.rep(), d.b.rep(), Truncation(*oracle, s.jobs));
    t["oracle"] = oracle_verdict(v);
    if (!v.holds) s.inconsistent("decomposition does not cover F at the truncation");
  }
  if (!all) s.inconsistent("a per-block bound fails");
  return kTrue;
}

int cmd_coarsen(Session& s, const std::string& pr, const std::string& pg, std::size_t cap,
                std::optional<std::size_t> oracle) {
  const SmallRep r = io::any_rep_from(s.load(pr));
  const Grouping g = io::grouping_from(s.load(pg));
  const SmallRep c = coarsen(r, g, cap);
  s.transcript["result"] = io::to_json(c);
  s.transcript["weight"] = rep_weight(c).str();
  if (oracle) {
    const auto v = equal_oracle(r, c, Truncation(*oracle, s.jobs));
    s.transcript["oracle"] = oracle_verdict(v);
    if (!v.holds) s.inconsistent("coarsening changed the truncated membership set");
  }
  return kTrue;
}

int cmd_union(Session& s, const std::string& pfine, const std::string& pcoarse, std::size_t cap,
              std::optional<std::size_t> oracle) {
  const SmallRep fine = io::any_rep_from(s.load(pfine));
  const SmallRep coarse = io::any_rep_from(s.load(pcoarse));
  const SmallRep u = union_finer(fine, coarse, cap);
  s.transcript["result"] = io::to_json(u);
  if (oracle) {
    const auto v = union_oracle(fine, coarse, u, Truncation(*oracle, s.jobs));
    s.transcript["oracle"] = oracle_verdict(v);
    if (!v.holds) s.inconsistent("union differs from the membership union");
  }
  return kTrue;
}

int cmd_refine(Session& s, const std::string& pa, const std::string& pb, std::optional<std::size_t> oracle) {
  const SmallRep a = io::any_rep_from(s.load(pa));
  const SmallRep b = io::any_rep_from(s.load(pb));
  const auto c = refine_interpolant(a, b);
  json& t = s.transcript;
  t["result"] = io::to_json(c.rep);
  t["weight"] = c.weight.str();
  t["target_weight"] = c.target_weight.str();
  t["multiplicity_bound"] = c.multiplicity_bound.str();
  t["weight_at_most_target"] = c.weight_at_most_target();
  if (oracle) {
    const Truncation tr(*oracle, s.jobs);
    const auto lo = subset_oracle(a, c.rep, tr);
    const auto hi = subset_oracle(c.rep, b, tr);
    t["oracle"] = json{{"a_in_c", oracle_verdict(lo)}, {"c_in_b", oracle_verdict(hi)}};
    if (!lo.holds || !hi.holds) s.inconsistent("interpolant is not sandwiched between a and b");
  }
  return kTrue;
}

int cmd_contains(Session& s, const std::string& word, const std::string& pr, std::size_t threshold) {
  const json j = s.load(pr);
  const Word x = Word::from_string(interval(0, static_cast<Coord>(word.size())), word);
  std::vector<std::size_t> hits;
  if (j.contains("families") || j.contains("levels")) {
    hits = prefix_hits(x, j.contains("levels") ? cylinders_to_prefix(io::cover_from(j)) : io::prefix_rep_from(j));
  } else {
    hits = rep_hits(x, io::any_rep_from(j));
  }
  s.transcript["hits"] = hits;
  s.transcript["member"] = hits.size() >= threshold;
  return hits.size() >= threshold ? kTrue : kFalse;
}

// ---------------------------------------------------------------------------
// hitting

int cmd_hit_sample(Session& s, std::size_t n, const std::string& eps, std::uint64_t seed) {
  const auto c = sample_candidate(n, Dyadic::parse(eps), seed);
  s.transcript["candidate"] = io::to_json(c);
  return kTrue;
}

int cmd_hit_verify(Session& s, const std::string& path, std::uint64_t budget, bool naive, bool counts) {
  const auto c = io::candidate_from(s.load(path));
  const auto r = verify_hitting(c, budget, s.jobs);
  s.transcript["n"] = c.n;
  s.transcript["density"] = c.density().str();
  s.transcript["report"] = io::to_json(r, counts);
  if (r.verdict == HitVerdict::Refuted) {
    s.transcript["recheck"] = recheck_refutation(c, r);
    if (!recheck_refutation(c, r)) s.inconsistent("refuting rectangle does not re-check against A");
  }
  if (naive) {
    const auto o = hitting_oracle_naive(c);
    s.transcript["naive"] = io::to_json(o);
    if (o.verdict != r.verdict || o.u != r.u) s.inconsistent("verifier disagrees with the naive oracle");
  }
  return r.verdict == HitVerdict::Verified ? kTrue : kFalse;
}

int cmd_hit_find(Session& s, std::size_t n, const std::string& eps, std::size_t tries, std::uint64_t seed,
                 std::uint64_t budget) {
  const auto r = find_hitting(n, Dyadic::parse(eps), tries, seed, budget, s.jobs);
  json outcomes = json::array();
  for (auto v : r.outcomes) outcomes.push_back(verdict_name(v));
  s.transcript["tries"] = r.tries;
  s.transcript["outcomes"] = outcomes;
  if (!r.found) {
    s.transcript["found"] = false;
    s.transcript["error"] = json{{"kind", "NotFound"}, {"message", "no verified candidate within the try limit"}};
    return kFalse;
  }
  s.transcript["found"] = true;
  s.transcript["candidate"] = io::to_json(*r.found);
  return kTrue;
}

BoundForm parse_form(const std::string& f) {
  if (f == "tight") return BoundForm::Tight;
  if (f == "seven_eighths") return BoundForm::SevenEighths;
  if (f == "final") return BoundForm::Final;
  throw Error(ErrorKind::InvalidInput, "unknown bound form '" + f + "'");
}

int cmd_hit_bound(Session& s, std::uint64_t n, const std::string& eps, const std::string& form) {
  const Rational e = parse_rational(eps);
  const auto enc = log2_failure_bound(n, e, parse_form(form));
  const auto simp = simplification_holds(n);
  s.transcript["n"] = n;
  s.transcript["epsilon"] = rational_str(e);
  s.transcript["form"] = form;
  s.transcript["log2_bound"] = io::to_json(enc);
  s.transcript["simplification"] = json{{"short_form", simp.short_form}, {"full_form", simp.full_form}};
  if (enc.sign == 0) throw Error(ErrorKind::Inconclusive, "enclosure straddles 0 at maximum precision");
  s.transcript["certifies_existence"] = enc.sign < 0;
  return enc.sign < 0 ? kTrue : kFalse;
}

json defined_json(const DefinedCheck& d) {
  return json{{"m", d.m},
              {"epsilon", rational_str(d.eps)},
              {"length_even", 2 * d.m + 2},
              {"bound_even", io::to_json(d.even)},
              {"length_odd", 2 * d.m + 1},
              {"bound_odd", io::to_json(d.odd)},
              {"defined", d.defined}};
}

int cmd_hit_defined(Session& s, std::uint64_t m, const std::string& scan, const std::string& form) {
  const auto f = parse_form(form);
  const auto d = check_defined(m, f);
  s.transcript["form"] = form;
  s.transcript["check"] = defined_json(d);
  if (!scan.empty()) {
    const auto [lo, hi] = parse_range(scan);
    const auto sc = scan_defined(std::max<std::uint64_t>(lo, 2), hi, f);
    json out{{"range", json::array({lo, hi})}, {"count", sc.defined.size()}};
    out["least"] = sc.least ? json(*sc.least) : json(nullptr);
    out["stable_from"] = sc.stable ? json(*sc.stable) : json(nullptr);
    s.transcript["scan"] = out;
  }
  return d.defined ? kTrue : kFalse;
}

// ---------------------------------------------------------------------------
// cex

TargetSystems load_targets(Session& s, const std::string& path, const std::string& window) {
  if (!window.empty()) {
    const auto [lo, hi] = parse_range(window);
    return TargetSystems::window(lo, hi);
  }
  if (path.empty()) throw Error(ErrorKind::InvalidInput, "give --targets or --window");
  return io::targets_from(s.load(path));
}

int cmd_cex_report(Session& s, std::uint64_t n_max, bool rows) {
  const auto r = interval_report(n_max);
  json& t = s.transcript;
  t["n_max"] = n_max;
  t["properties_1_to_3"] = r.properties;
  t["closed_forms"] = r.closed_forms;
  t["quarter_fractions"] = r.fractions;
  t["meet_n_mismatches"] = r.meet_n_mismatches;
  t["meet_n_note"] = "|I0_n ∩ I1_n| measures n+1, not n";
  t["first_failure"] = r.first_failure ? json(*r.first_failure) : json(nullptr);
  if (rows) {
    json out = json::array();
    for (const auto& c : r.rows) {
      out.push_back(json{{"n", c.n},
                         {"size0", c.size0},
                         {"size1", c.size1},
                         {"i0n_i1n", c.zero_one},
                         {"i1n_i0prev", c.one_zero_prev},
                         {"i0n_i1next", c.zero_one_next},
                         {"i1n_i0n", c.one_zero},
                         {"ok", c.ok()}});
    }
    t["rows"] = out;
  }
  return r.properties && r.closed_forms && r.fractions ? kTrue : kFalse;
}

int cmd_cex_classify(Session& s, const std::string& cand, const std::string& targets, const std::string& window) {
  const SmallRep c = io::any_rep_from(s.load(cand));
  const TargetSystems ts = load_targets(s, targets, window);
  s.transcript["verdict"] = io::to_json(classify_case(ts, c.blocks()));
  return kTrue;
}

int cmd_cex_regroup(Session& s, const std::string& cand, const std::string& targets, const std::string& window,
                    const std::string& verdict_path, std::size_t want, std::size_t cap) {
  const SmallRep c = io::any_rep_from(s.load(cand));
  const TargetSystems ts = load_targets(s, targets, window);
  CaseVerdict v;
  if (verdict_path.empty()) {
    v = classify_case(ts, c.blocks());
  } else {
    const json j = s.load(verdict_path);
    v = io::verdict_from(j.contains("verdict") ? j.at("verdict") : j);
  }
  const auto r = regroup_candidate(c, v, ts, want, cap);
  s.transcript["verdict"] = io::to_json(v);
  s.transcript["grouping"] = io::to_json(r.grouping);
  s.transcript["regrouped"] = io::to_json(r.regrouped);
  s.transcript["plan"] = io::to_json(r.plan);
  s.transcript["plan_checks"] = check_plan(r.regrouped.blocks(), r.plan);
  return kTrue;
}

int cmd_cex_refute(Session& s, const std::string& target_path, const std::string& regroup_path, std::size_t trunc) {
  const SmallRep target = io::any_rep_from(s.load(target_path));
  const json g = s.load(regroup_path);
  const json& rep_json = g.contains("regrouped") ? g.at("regrouped") : g.at("normalized");
  const SmallRep regrouped = io::any_rep_from(rep_json);
  const auto plan = io::plan_from(io::detail::field(g, "plan"));
  const auto r = case1_refute(target, regrouped, plan, trunc);
  json steps = json::array();
  for (const auto& st : r.steps) {
    steps.push_back(json{{"index", st.index}, {"s", st.s.str()}, {"t_a", st.t_a.str()}, {"t_b", st.t_b.str()}});
  }
  json& t = s.transcript;
  t["x"] = r.x.str();
  t["steps"] = steps;
  const auto hits_target = rep_hits(r.x, target);
  const auto hits_regrouped = rep_hits(r.x, regrouped);
  t["hits_target"] = hits_target;
  t["hits_regrouped"] = hits_regrouped;
  // independent recount on the raw bits
  const std::size_t in_target = r.x.size() <= 64 ? oracle_hit_count(r.x, target) : hits_target.size();
  const std::size_t in_regrouped = r.x.size() <= 64 ? oracle_hit_count(r.x, regrouped) : hits_regrouped.size();
  t["oracle"] = json{{"target_hits", in_target}, {"regrouped_hits", in_regrouped}};
  if (in_target < plan.size() || in_regrouped != 0 || hits_target.size() != in_target ||
      hits_regrouped.size() != in_regrouped) {
    s.inconsistent("refuting word fails the membership checks");
  }
  return kTrue;
}

int cmd_cex_embed(Session& s, const std::string& p0, const std::string& p1) {
  const SmallRep r0 = io::any_rep_from(s.load(p0));
  const SmallRep r1 = io::any_rep_from(s.load(p1));
  const SmallRep e = even_odd_embed(r0, r1);
  s.transcript["result"] = io::to_json(e);
  s.transcript["weight"] = rep_weight(e).str();
  const bool additive = rep_weight(e) == rep_weight(r0) + rep_weight(r1);
  s.transcript["weights_add"] = additive;
  if (!additive) s.inconsistent("embedding changed the total weight");
  return kTrue;
}

int cmd_cex_normalize(Session& s, const std::string& cand, const std::string& p0, const std::string& p1,
                      const std::string& window, std::size_t cap) {
  const IntervalRep c = io::interval_rep_from(s.load(cand));
  TargetSystems ts;
  json& t = s.transcript;
  if (!window.empty()) {
    const auto [lo, hi] = parse_range(window);
    ts = embed_targets(TargetSystems::window(lo, hi));
  } else {
    if (p0.empty() || p1.empty()) throw Error(ErrorKind::InvalidInput, "give --rep0 and --rep1, or --window");
    const SmallRep r0 = io::any_rep_from(s.load(p0));
    const SmallRep r1 = io::any_rep_from(s.load(p1));
    ts = embed_targets(TargetSystems::from_reps(r0, r1));
    t["embedded"] = io::to_json(even_odd_embed(r0, r1));
  }
  const auto n = smallstar_normalize(c, ts, cap);
  json splits = json::array();
  for (const auto& sp : n.splits) splits.push_back(io::to_json(*sp));
  t["grouping"] = io::to_json(n.grouping);
  t["normalized"] = io::to_json(n.rep);
  t["splits"] = splits;
  t["conditions_hold"] = check_normalized(n.rep, n.splits);
  t["plan"] = io::to_json(n.plan);
  if (!check_normalized(n.rep, n.splits)) s.inconsistent("normalized cuts violate the straddling conditions");
  return kTrue;
}

// ---------------------------------------------------------------------------

std::string join_args(int argc, char** argv) {
  std::string out = "smallset";
  for (int i = 1; i < argc; ++i) out += std::string(" ") + argv[i];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-truncation computations with null, small and small* sets of 2^omega"};
  app.require_subcommand(1);
  Session s;
  std::function<int()> run;
  app.add_option("--out", s.out, "write the transcript to FILE instead of stdout");
  app.add_option("--jobs", s.jobs, "worker threads for enumeration")->check(CLI::Range(1u, 256u));
  app.add_flag("--timing", s.timing, "record wall time in the transcript");

  // shared option storage
  std::string p1, p2, p3, eps, window, targets, scan, verdict, form = "tight";
  std::size_t trunc = 0, threshold = 1, ignore = 0, cap = kDefaultBlockCap, n = 0, tries = 200, want = 1;
  std::uint64_t seed = 0, budget = kDefaultSplitBudget, m = 0, nmax = 10000;
  std::optional<std::size_t> oracle;
  bool list = false, naive = false, counts = false, rows = false;

  auto* validate = app.add_subcommand("validate", "parse and summarize a JSON document");
  validate->add_option("file", p1)->required();
  validate->callback([&] { run = [&] { return cmd_validate(s, p1); }; });

  auto* weight = app.add_subcommand("weight", "exact weight of a representation");
  weight->add_option("file", p1)->required();
  weight->callback([&] { run = [&] { return cmd_weight(s, p1); }; });

  auto* members = app.add_subcommand("members", "count words of 2^N with enough hits");
  members->add_option("file", p1)->required();
  members->add_option("--trunc", trunc)->required();
  members->add_option("--threshold", threshold);
  members->add_flag("--list", list);
  members->callback([&] { run = [&] { return cmd_members(s, p1, trunc, threshold, list); }; });

  auto* measure = app.add_subcommand("measure", "exact truncated measure");
  measure->add_option("file", p1)->required();
  measure->add_option("--trunc", trunc)->required();
  measure->callback([&] { run = [&] { return cmd_measure(s, p1, trunc); }; });

  auto* subset = app.add_subcommand("subset", "blockwise containment of a in b");
  subset->add_option("a", p1)->required();
  subset->add_option("b", p2)->required();
  subset->add_option("--ignore", ignore);
  subset->add_option("--oracle", oracle, "cross-check against exhaustive enumeration of 2^N");
  subset->add_option("--trunc", trunc, "minimum length of the witness word");
  subset->callback([&] { run = [&] { return cmd_subset(s, p1, p2, ignore, oracle, trunc); }; });

  auto* witness = app.add_subcommand("witness", "a word in a but not in b");
  witness->add_option("a", p1)->required();
  witness->add_option("b", p2)->required();
  witness->add_option("--ignore", ignore);
  witness->add_option("--trunc", trunc);
  witness->callback([&] { run = [&] { return cmd_witness(s, p1, p2, ignore, trunc); }; });

  auto* cover = app.add_subcommand("cover", "every word hitting F hits a or b");
  cover->add_option("F", p1)->required();
  cover->add_option("a", p2)->required();
  cover->add_option("b", p3)->required();
  cover->add_option("--trunc", trunc)->required();
  cover->callback([&] { run = [&] { return cmd_cover(s, p1, p2, p3, trunc); }; });

  auto* decomp = app.add_subcommand("decompose", "split a null set into two interval representations");
  decomp->add_option("F", p1)->required();
  decomp->add_option("--eps", eps, "schedule such as 2^-k, 2^-(k+3), 1/2,1/4");
  decomp->add_option("--cap", cap);
  decomp->add_option("--oracle", oracle);
  decomp->callback([&] { run = [&] { return cmd_decompose(s, p1, eps, cap, oracle); }; });

  auto* coarsen_cmd = app.add_subcommand("coarsen", "merge blocks along a grouping");
  coarsen_cmd->add_option("rep", p1)->required();
  coarsen_cmd->add_option("grouping", p2)->required();
  coarsen_cmd->add_option("--cap", cap);
  coarsen_cmd->add_option("--oracle", oracle);
  coarsen_cmd->callback([&] { run = [&] { return cmd_coarsen(s, p1, p2, cap, oracle); }; });

  auto* union_cmd = app.add_subcommand("union", "union of a finer and a coarser representation");
  union_cmd->add_option("fine", p1)->required();
  union_cmd->add_option("coarse", p2)->required();
  union_cmd->add_option("--cap", cap);
  union_cmd->add_option("--oracle", oracle);
  union_cmd->callback([&] { run = [&] { return cmd_union(s, p1, p2, cap, oracle); }; });

  auto* refine = app.add_subcommand("refine", "interpolant on the common refinement");
  refine->add_option("a", p1)->required();
  refine->add_option("b", p2)->required();
  refine->add_option("--oracle", oracle);
  refine->callback([&] { run = [&] { return cmd_refine(s, p1, p2, oracle); }; });

  auto* contains = app.add_subcommand("contains", "hits of a single word");
  contains->add_option("word", p1)->required();
  contains->add_option("rep", p2)->required();
  contains->add_option("--threshold", threshold);
  contains->callback([&] { run = [&] { return cmd_contains(s, p1, p2, threshold); }; });

  auto* orc = app.add_subcommand("oracle", "exhaustive ground truth over 2^N");
  orc->require_subcommand(1);
  auto* o_members = orc->add_subcommand("members", "");
  o_members->add_option("file", p1)->required();
  o_members->add_option("--trunc", trunc)->required();
  o_members->add_option("--threshold", threshold);
  o_members->add_flag("--list", list);
  o_members->callback([&] { run = [&] { return cmd_members(s, p1, trunc, threshold, list); }; });
  auto* o_measure = orc->add_subcommand("measure", "");
  o_measure->add_option("file", p1)->required();
  o_measure->add_option("--trunc", trunc)->required();
  o_measure->callback([&] { run = [&] { return cmd_measure(s, p1, trunc); }; });
  auto* o_subset = orc->add_subcommand("subset", "");
  o_subset->add_option("a", p1)->required();
  o_subset->add_option("b", p2)->required();
  o_subset->add_option("--trunc", trunc)->required();
  o_subset->callback([&] {
    run = [&] {
      const auto v = subset_oracle(io::any_rep_from(s.load(p1)), io::any_rep_from(s.load(p2)), Truncation(trunc, s.jobs));
      s.transcript["trunc"] = trunc;
      s.transcript["subset"] = oracle_verdict(v);
      return v.holds ? kTrue : kFalse;
    };
  });
  auto* o_cover = orc->add_subcommand("cover", "");
  o_cover->add_option("F", p1)->required();
  o_cover->add_option("a", p2)->required();
  o_cover->add_option("b", p3)->required();
  o_cover->add_option("--trunc", trunc)->required();
  o_cover->callback([&] { run = [&] { return cmd_cover(s, p1, p2, p3, trunc); }; });

  auto* hit = app.add_subcommand("hitting", "random hitting sets and their verification");
  hit->require_subcommand(1);
  auto* h_sample = hit->add_subcommand("sample", "draw a seeded candidate A ⊆ 2^n");
  h_sample->add_option("--n", n)->required();
  h_sample->add_option("--eps", eps)->required();
  h_sample->add_option("--seed", seed);
  h_sample->callback([&] { run = [&] { return cmd_hit_sample(s, n, eps, seed); }; });
  auto* h_verify = hit->add_subcommand("verify", "check every balanced split rectangle meets A");
  h_verify->add_option("candidate", p1)->required();
  h_verify->add_option("--budget", budget);
  h_verify->add_flag("--naive", naive, "cross-check against the brute-force oracle (n <= 5)");
  h_verify->add_flag("--counts", counts, "include per-split enumeration counts");
  h_verify->callback([&] { run = [&] { return cmd_hit_verify(s, p1, budget, naive, counts); }; });
  auto* h_find = hit->add_subcommand("find", "sample until a candidate verifies");
  h_find->add_option("--n", n)->required();
  h_find->add_option("--eps", eps)->required();
  h_find->add_option("--tries", tries);
  h_find->add_option("--seed", seed);
  h_find->add_option("--budget", budget);
  h_find->callback([&] { run = [&] { return cmd_hit_find(s, n, eps, tries, seed, budget); }; });
  auto* h_bound = hit->add_subcommand("bound", "enclosure of log2 of the failure bound");
  h_bound->add_option("--n", m)->required();
  h_bound->add_option("--eps", eps)->required();
  h_bound->add_option("--form", form, "tight, seven_eighths or final");
  h_bound->callback([&] { run = [&] { return cmd_hit_bound(s, m, eps, form); }; });
  auto* h_defined = hit->add_subcommand("defined", "whether the hitting construction is certified for m");
  h_defined->add_option("m", m)->required();
  h_defined->add_option("--scan", scan, "also scan a range lo..hi");
  h_defined->add_option("--form", form, "tight, seven_eighths or final");
  h_defined->callback([&] { run = [&] { return cmd_hit_defined(s, m, scan, form); }; });

  auto* cex = app.add_subcommand("cex", "interval systems and the counterexample engine");
  cex->require_subcommand(1);
  auto* c_report = cex->add_subcommand("report", "sizes, covers and overlaps of the interval systems");
  c_report->add_option("--nmax", nmax);
  c_report->add_flag("--rows", rows);
  c_report->callback([&] { run = [&] { return cmd_cex_report(s, nmax, rows); }; });
  auto* c_classify = cex->add_subcommand("classify", "Case1 / Case2 verdict for a candidate partition");
  c_classify->add_option("--candidate", p1)->required();
  c_classify->add_option("--targets", targets);
  c_classify->add_option("--window", window);
  c_classify->callback([&] { run = [&] { return cmd_cex_classify(s, p1, targets, window); }; });
  auto* c_regroup = cex->add_subcommand("regroup", "coarsen a candidate along its verdict");
  c_regroup->add_option("--candidate", p1)->required();
  c_regroup->add_option("--targets", targets);
  c_regroup->add_option("--window", window);
  c_regroup->add_option("--verdict", verdict);
  c_regroup->add_option("--z", want);
  c_regroup->add_option("--cap", cap);
  c_regroup->callback([&] { run = [&] { return cmd_cex_regroup(s, p1, targets, window, verdict, want, cap); }; });
  auto* c_refute = cex->add_subcommand("refute", "a word hitting the targets and missing the regrouped rep");
  c_refute->add_option("--target", p1)->required();
  c_refute->add_option("--plan", p2, "a regroup or normalize transcript")->required();
  c_refute->add_option("--trunc", trunc)->required();
  c_refute->callback([&] { run = [&] { return cmd_cex_refute(s, p1, p2, trunc); }; });
  auto* c_embed = cex->add_subcommand("embed", "interleave two reps on even and odd coordinates");
  c_embed->add_option("rep0", p1)->required();
  c_embed->add_option("rep1", p2)->required();
  c_embed->callback([&] { run = [&] { return cmd_cex_embed(s, p1, p2); }; });
  auto* c_norm = cex->add_subcommand("normalize", "cut an interval rep so every cut splits a target");
  c_norm->add_option("--candidate", p1)->required();
  c_norm->add_option("--rep0", p2);
  c_norm->add_option("--rep1", p3);
  c_norm->add_option("--window", window);
  c_norm->add_option("--cap", cap);
  c_norm->callback([&] { run = [&] { return cmd_cex_normalize(s, p1, p2, p3, window, cap); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  s.transcript["command"] = join_args(argc, argv);
  const auto start = std::chrono::steady_clock::now();
  int code = kError;
  try {
    code = run();
  } catch (const Error& e) {
    s.transcript["error"] = json{{"kind", kind_name(e.kind())}, {"message", e.what()}};
    std::cerr << "smallset: " << e.what() << "\n";
    code = kError;
  } catch (const std::exception& e) {
    s.transcript["error"] = json{{"kind", "InvalidInput"}, {"message", e.what()}};
    std::cerr << "smallset: " << e.what() << "\n";
    code = kError;
  }
  s.transcript["exit"] = code;
  if (s.timing) {
    s.transcript["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  const std::string text = s.transcript.dump(2) + "\n";
  if (s.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(s.out, std::ios::binary);
    if (!out) {
      std::cerr << "smallset: cannot write '" << s.out << "'\n";
      return kError;
    }
    out << text;
  }
  return code;
}
