#include <gtest/gtest.h>

#include "smallset/smallset.hpp"
#include "support.hpp"

using namespace smallset;
using smallset::testing::word;

namespace {

Word on(std::size_t n, const char* bits) { return Word::from_string(interval(0, static_cast<Coord>(n)), bits); }

PrefixRep family_at(std::size_t n, std::vector<Word> words) {
  std::vector<std::vector<Word>> f(n + 1);
  f[n] = std::move(words);
  return PrefixRep(std::move(f));
}

}  // namespace

TEST(NullRep, PrefixHits) {
  EXPECT_EQ(prefix_hits(on(3, "010"), family_at(2, {on(2, "01")})), std::vector<std::size_t>{2});
  EXPECT_TRUE(prefix_hits(on(3, "010"), PrefixRep()).empty());
  const PrefixRep f({{}, {on(1, "0")}, {}, {on(3, "000")}});
  EXPECT_EQ(prefix_hits(on(3, "000"), f), (std::vector<std::size_t>{1, 3}));
}

TEST(NullRep, Weights) {
  const auto f4 = family_at(4, {on(4, "0110")});
  EXPECT_EQ(prefix_weight(f4), Dyadic::ratio(1, 4));
  EXPECT_EQ(tail_weight(f4, 5), Dyadic(0));
  EXPECT_EQ(tail_weight(f4, 0), prefix_weight(f4));
  const PrefixRep g({{}, {}, {on(2, "00"), on(2, "01")}, {on(3, "111")}});
  EXPECT_EQ(prefix_weight(g), Dyadic::ratio(5, 3));
}

TEST(NullRep, CylindersToPrefix) {
  const auto single = cylinders_to_prefix(CylinderCover({{on(1, "0")}}));
  EXPECT_EQ(single.family(1), std::vector<Word>{on(1, "0")});
  EXPECT_EQ(prefix_weight(single), Dyadic::ratio(1, 1));
  EXPECT_EQ(cylinders_to_prefix(CylinderCover()).support_end(), 0U);
  const auto two = cylinders_to_prefix(CylinderCover({{on(2, "00"), on(2, "11")}, {on(3, "000")}}));
  EXPECT_EQ(two.family(2), (std::vector<Word>{on(2, "00"), on(2, "11")}));
  EXPECT_EQ(two.family(3), std::vector<Word>{on(3, "000")});
  EXPECT_EQ(prefix_weight(two), Dyadic::ratio(5, 3));
}

TEST(NullRep, CoverRejectsNestedWords) {
  EXPECT_THROW(CylinderCover({{on(1, "0"), on(2, "01")}}), Error);
  EXPECT_THROW(cylinders_to_prefix(CylinderCover({{on(1, "0")}, {on(1, "0"), on(1, "1")}}), true), Error);
}

TEST(Decompose, EmptyFamily) {
  const auto d = decompose(PrefixRep());
  EXPECT_EQ(d.cuts.interleaved(), (std::vector<Coord>{0, 1, 2}));
  for (const auto& e : d.a.rep().entries()) EXPECT_TRUE(e.words().empty());
  for (const auto& e : d.b.rep().entries()) EXPECT_TRUE(e.words().empty());
}

TEST(Decompose, SingleWordOfLengthFour) {
  const auto f = family_at(4, {on(4, "0000")});
  const auto eps = EpsSchedule::parse("2^-k");
  EXPECT_EQ(compute_cuts(f, eps).interleaved(), (std::vector<Coord>{0, 1, 2, 3, 5}));
  const auto d = decompose(f, eps);
  EXPECT_EQ(d.a.cuts(), (std::vector<Coord>{0, 2, 5}));
  const auto& j1 = d.a.rep()[1];
  ASSERT_EQ(j1.words().size(), 2U);
  for (const auto& w : j1.words()) {
    EXPECT_EQ(w.at(2), 0);
    EXPECT_EQ(w.at(3), 0);
  }
  EXPECT_EQ(j1.density(), Dyadic::ratio(1, 2));
  for (const auto& b : d.a_bounds) EXPECT_TRUE(b.holds());
  for (const auto& b : d.b_bounds) EXPECT_TRUE(b.holds());
  EXPECT_TRUE(cover_oracle(f, d.a.rep(), d.b.rep(), Truncation(5)).holds);
}

// Reference minima computed straight from the definition with exact dyadics.
TEST(Decompose, CutsMatchDirectMinimisation) {
  smallset::testing::Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = smallset::testing::random_prefix(rng, 10);
    const EpsSchedule eps;
    auto tail = [&](std::size_t j) {
      Dyadic t;
      for (std::size_t i = j; i < f.families().size(); ++i) t += Dyadic::ratio(f.family(i).size(), i);
      return t;
    };
    auto first = [&](Coord from, const Dyadic& e) {
      Coord j = from + 1;
      while (!(tail(j).scaled(from) < e)) ++j;
      return j;
    };
    std::vector<Coord> expect{0};
    for (std::size_t k = 0;; ++k) {
      const Coord m = first(expect.back(), eps(k));
      const Coord n = first(m, eps(k));
      expect.push_back(m);
      expect.push_back(n);
      if (tail(n).is_zero()) break;
    }
    EXPECT_EQ(compute_cuts(f, eps).interleaved(), expect);
  }
}

TEST(Decompose, RandomCoverCertified) {
  smallset::testing::Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const auto f = smallset::testing::random_prefix(rng, 8);
    const auto d = decompose(f);
    for (const auto& b : d.a_bounds) EXPECT_TRUE(b.holds());
    for (const auto& b : d.b_bounds) EXPECT_TRUE(b.holds());
    EXPECT_TRUE(cover_oracle(f, d.a.rep(), d.b.rep(), Truncation(10)).holds);
  }
}

TEST(Decompose, DroppingOneSideBreaksCover) {
  const PrefixRep f({{}, {}, {on(2, "11")}, {}, {}, {on(5, "00000")}});
  const auto d = decompose(f);
  ASSERT_TRUE(cover_oracle(f, d.a.rep(), d.b.rep(), Truncation(8)).holds);
  const bool a_alone = cover_oracle(f, d.a.rep(), SmallRep(), Truncation(8)).holds;
  const bool b_alone = cover_oracle(f, SmallRep(), d.b.rep(), Truncation(8)).holds;
  EXPECT_FALSE(a_alone);
  EXPECT_FALSE(b_alone);
}

TEST(Decompose, ScheduleParsing) {
  EXPECT_EQ(EpsSchedule::parse("2^-k")(3), Dyadic::ratio(1, 3));
  EXPECT_EQ(EpsSchedule::parse("2^-(k+3)")(1), Dyadic::ratio(1, 4));
  EXPECT_EQ(EpsSchedule::parse("1/2,1/4")(5), Dyadic::ratio(1, 2));
  EXPECT_EQ(EpsSchedule()(0), Dyadic::ratio(1, 1));
}
