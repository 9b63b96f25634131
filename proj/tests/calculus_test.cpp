#include <gtest/gtest.h>

#include "smallset/smallset.hpp"
#include "support.hpp"

using namespace smallset;
using smallset::testing::word;

namespace {

std::vector<Word> words01(std::initializer_list<const char*> bits) {
  std::vector<Word> out;
  for (const char* b : bits) out.push_back(word({0, 1}, b));
  return out;
}

}  // namespace

TEST(Coarsen, TwoOneBitBlocks) {
  const SmallRep r({Entry(Block({0}), {word({0}, "1")}), Entry(Block({1}), {word({1}, "0")})});
  const auto c = coarsen(r, Grouping({{0, 1}}));
  ASSERT_EQ(c.size(), 1U);
  EXPECT_EQ(c[0].block(), Block({0, 1}));
  EXPECT_EQ(c[0].words(), words01({"00", "10", "11"}));
}

TEST(Coarsen, IdentityAndEmpty) {
  smallset::testing::Rng rng(3);
  const auto r = smallset::testing::random_small_rep(rng, 9, 3, 1, 2);
  EXPECT_EQ(coarsen(r, Grouping::identity(r.size())), r);
  const SmallRep empty({Entry(Block({0}), {}), Entry(Block({2, 3}), {})});
  for (const auto& e : coarsen(empty, Grouping({{0, 1}})).entries()) EXPECT_TRUE(e.words().empty());
  EXPECT_THROW(coarsen(empty, Grouping(std::vector<std::vector<std::size_t>>{{0}})), Error);
  EXPECT_THROW(coarsen(empty, Grouping({{0, 0}, {1}})), Error);
}

TEST(Coarsen, PreservesMembership) {
  smallset::testing::Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const auto r = smallset::testing::random_small_rep(rng, 11, 3, 1, 3);
    const auto g = smallset::testing::random_grouping(rng, r, 8);
    EXPECT_TRUE(equal_oracle(r, coarsen(r, g), Truncation(11)).holds);
  }
}

TEST(UnionFiner, Examples) {
  const SmallRep fine({Entry(Block({0}), {word({0}, "1")})});
  const SmallRep coarse({Entry(Block({0, 1}), words01({"00"}))});
  const auto u = union_finer(fine, coarse);
  ASSERT_EQ(u.size(), 1U);
  EXPECT_EQ(u[0].words(), words01({"00", "10", "11"}));
  EXPECT_EQ(union_finer(SmallRep(), coarse), coarse);
  const SmallRep full({Entry(Block({0, 1}), words01({"00", "01", "10", "11"}))});
  EXPECT_TRUE(union_finer(fine, full)[0].is_full());
  EXPECT_THROW(union_finer(coarse, fine), Error);
}

TEST(UnionFiner, RealizesUnion) {
  smallset::testing::Rng rng(202);
  for (int trial = 0; trial < 30; ++trial) {
    const auto fine = smallset::testing::random_small_rep(rng, 10, 2, 1, 3);
    // coarse blocks are unions of fine blocks
    const auto g = smallset::testing::random_grouping(rng, fine, 6);
    auto grouped = coarsen(fine, g);
    std::vector<Entry> ce;
    for (const auto& e : grouped.entries()) ce.emplace_back(e.block(), smallset::testing::random_words(rng, e.block(), 1, 4));
    const SmallRep c(std::move(ce));
    EXPECT_TRUE(union_oracle(fine, c, union_finer(fine, c), Truncation(10)).holds);
  }
}

TEST(Subset, Examples) {
  smallset::testing::Rng rng(9);
  const auto r = smallset::testing::random_small_rep(rng, 8, 3, 1, 2);
  const auto self = subset_blockwise(r, r);
  EXPECT_TRUE(self.contained);
  for (const auto& c : self.choices) EXPECT_EQ(c.m, c.n);

  const SmallRep none({Entry(Block({0, 1}), {})});
  EXPECT_TRUE(subset_blockwise(none, r).contained);

  const SmallRep a({Entry(Block({0}), {word({0}, "1")})});
  const SmallRep b({Entry(Block({0, 1}), words01({"10"}))});
  const auto cert = subset_blockwise(a, b);
  ASSERT_FALSE(cert.contained);
  ASSERT_EQ(cert.failures.size(), 1U);
  EXPECT_EQ(cert.failures[0].n, 0U);
  EXPECT_EQ(cert.failures[0].s, word({0}, "1"));
  ASSERT_EQ(cert.failures[0].at.size(), 1U);
  EXPECT_EQ(*cert.failures[0].at[0].spoiler, word({1}, "1"));

  const Word x = witness_not_subset(a, b, cert, 4);
  EXPECT_EQ(x.str(), "1100");
  EXPECT_EQ(rep_hits(x, a), std::vector<std::size_t>{0});
  EXPECT_TRUE(rep_hits(x, b).empty());
  const auto o = subset_oracle(a, b, Truncation(4));
  EXPECT_FALSE(o.holds);
  EXPECT_EQ(o.counterexample->str(), "1100");
}

TEST(Subset, DisjointBlocksWitness) {
  const SmallRep a({Entry(Block({2}), {word({2}, "1")})});
  const SmallRep b({Entry(Block({0}), {word({0}, "0")})});
  const auto cert = subset_blockwise(a, b);
  ASSERT_FALSE(cert.contained);
  EXPECT_TRUE(cert.failures[0].at.empty());
  const Word x = witness_not_subset(a, b, cert);
  EXPECT_EQ(x.str(), "101");
  EXPECT_EQ(oracle_hit_count(x, a), 1U);
  EXPECT_EQ(oracle_hit_count(x, b), 0U);
}

TEST(Subset, FullTargetIsImproper) {
  const SmallRep a({Entry(Block({0}), {word({0}, "1")})});
  const SmallRep b({Entry(Block({1}), {word({1}, "0"), word({1}, "1")})});
  const auto cert = subset_blockwise(a, b);
  ASSERT_FALSE(cert.contained);
  try {
    witness_not_subset(a, b, cert);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ImproperTarget);
  }
}

TEST(Subset, IgnoreSkipsLeadingEntries) {
  const SmallRep a({Entry(Block({0}), {word({0}, "1")}), Entry(Block({1}), {word({1}, "1")})});
  const SmallRep b({Entry(Block({1}), {word({1}, "1")})});
  EXPECT_FALSE(subset_blockwise(a, b, 0).contained);
  EXPECT_TRUE(subset_blockwise(a, b, 1).contained);
}

TEST(Subset, AgreesWithOracle) {
  smallset::testing::Rng rng(303);
  int yes = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto [a, b] = smallset::testing::random_pair(rng, 10, trial % 2 == 0);
    const auto cert = subset_blockwise(a, b);
    EXPECT_EQ(cert.contained, subset_oracle(a, b, Truncation(10)).holds);
    if (cert.contained) {
      ++yes;
    } else {
      const Word x = witness_not_subset(a, b, cert, 10);
      EXPECT_GE(oracle_hit_count(x, a), 1U);
      EXPECT_EQ(oracle_hit_count(x, b), 0U);
    }
  }
  EXPECT_GT(yes, 5);
}

TEST(Interpolant, SelfIsIdentity) {
  const SmallRep r({Entry(Block({0, 1}), words01({"01", "10"})), Entry(Block({3}), {word({3}, "1")})});
  const auto c = refine_interpolant(r, r);
  EXPECT_EQ(c.rep, r);
  EXPECT_TRUE(c.weight_at_most_target());
}

TEST(Interpolant, EmptyTargetGivesEmptySets) {
  const SmallRep a({Entry(Block({0}), {})});
  const SmallRep b({Entry(Block({0, 1}), {})});
  const auto c = refine_interpolant(a, b);
  for (const auto& e : c.rep.entries()) EXPECT_TRUE(e.words().empty());
}

TEST(Interpolant, Sandwich) {
  smallset::testing::Rng rng(404);
  int checked = 0;
  for (int trial = 0; trial < 80 && checked < 20; ++trial) {
    const auto [a, b] = smallset::testing::random_pair(rng, 10, true);
    if (!subset_blockwise(a, b).contained) continue;
    ++checked;
    const auto c = refine_interpolant(a, b);
    EXPECT_TRUE(subset_oracle(a, c.rep, Truncation(10)).holds);
    EXPECT_TRUE(subset_oracle(c.rep, b, Truncation(10)).holds);
    EXPECT_TRUE(partition_refines(c.rep.blocks(), b.blocks()));
    EXPECT_TRUE(partition_refines(c.rep.blocks(), a.blocks()));
    EXPECT_LE(c.weight, c.multiplicity_bound);
  }
  EXPECT_GT(checked, 5);
}

// A target block met by two source blocks counts its full-fiber words twice,
// so the interpolant can outweigh the target.
TEST(Interpolant, WeightCanExceedTarget) {
  const SmallRep a({Entry(Block({0}), {word({0}, "0")}), Entry(Block({1}), {word({1}, "0")})});
  const SmallRep b({Entry(Block({0, 1}), words01({"00", "01", "10"}))});
  const auto c = refine_interpolant(a, b);
  EXPECT_EQ(c.weight, Dyadic(1));
  EXPECT_EQ(c.target_weight, Dyadic::ratio(3, 2));
  EXPECT_FALSE(c.weight_at_most_target());
  EXPECT_EQ(c.multiplicity_bound, Dyadic::ratio(3, 1));
  EXPECT_TRUE(subset_oracle(a, c.rep, Truncation(2)).holds);
  EXPECT_TRUE(subset_oracle(c.rep, b, Truncation(2)).holds);
}

TEST(Interpolant, RejectsNonContainment) {
  const SmallRep a({Entry(Block({0}), {word({0}, "1")})});
  const SmallRep b({Entry(Block({0, 1}), words01({"10"}))});
  EXPECT_THROW(refine_interpolant(a, b), Error);
}
