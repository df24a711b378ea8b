#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "forestfact/enumeration.hpp"

using namespace forestfact;

namespace {

// Independent oracle: walk diagonals a+b = 0, 1, 2, ... with b ascending and
// number the pairs in visiting order.
std::map<std::pair<Nat, Nat>, Nat> diagonal_enumeration(Nat diagonals) {
  std::map<std::pair<Nat, Nat>, Nat> index;
  Nat next = 0;
  for (Nat s = 0; s < diagonals; ++s)
    for (Nat b = 0; b <= s; ++b) index[{s - b, b}] = next++;
  return index;
}

}  // namespace

TEST(Pairing, MatchesDiagonalEnumeration) {
  auto oracle = diagonal_enumeration(60);
  EXPECT_EQ(oracle.at({1, 1}), 4u);
  EXPECT_EQ(oracle.at({0, 2}), 5u);
  for (auto [ab, n] : oracle) {
    EXPECT_EQ(pair(ab.first, ab.second), n);
    EXPECT_EQ(unpair(n), ab);
  }
}

TEST(Pairing, FrozenExamples) {
  EXPECT_EQ(pair(0, 0), 0u);
  EXPECT_EQ(pair(1, 1), 4u);
  EXPECT_EQ(pair(0, 2), 5u);
  EXPECT_EQ(unpair(0), std::make_pair(Nat{0}, Nat{0}));
  EXPECT_EQ(unpair(4), std::make_pair(Nat{1}, Nat{1}));
  EXPECT_EQ(unpair(5), std::make_pair(Nat{0}, Nat{2}));
}

TEST(Pairing, StrictlyMonotoneAlongDiagonals) {
  for (Nat s = 0; s < 200; ++s)
    for (Nat b = 0; b < s; ++b) EXPECT_LT(pair(s - b, b), pair(s - b - 1, b + 1));
}

TEST(Pairing, OverflowIsReportedNotWrapped) {
  EXPECT_THROW(pair(UINT64_MAX, 1), OverflowError);
  EXPECT_THROW(pair(Nat{1} << 33, Nat{1} << 33), OverflowError);
  // Largest codes still invert exactly.
  for (Nat n : {UINT64_MAX, UINT64_MAX - 1, Nat{1} << 63}) {
    auto [a, b] = unpair(n);
    EXPECT_EQ(pair(a, b), n);
  }
}

TEST(Pairing, RandomRoundTrips) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Nat> big(0, Nat{1} << 31);
  for (int t = 0; t < 20000; ++t) {
    Nat a = big(rng), b = big(rng);
    EXPECT_EQ(unpair(pair(a, b)), std::make_pair(a, b));
    Nat n = rng();
    auto [x, y] = unpair(n);
    EXPECT_EQ(pair(x, y), n);
  }
}

TEST(LexOrder, Examples) {
  EXPECT_EQ(lex_cmp({0, 0, 0}, {0, 0, 1}), std::strong_ordering::less);
  EXPECT_EQ(lex_cmp({0, 5, 9}, {1, 0, 0}), std::strong_ordering::less);
  EXPECT_EQ(lex_cmp({2, 3, 4}, {2, 3, 4}), std::strong_ordering::equal);
}

TEST(LexOrder, TotalOrderOnRandomTriples) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<Nat> small(0, 3);
  std::vector<LexTriple> ts;
  for (int i = 0; i < 60; ++i) ts.push_back({small(rng), small(rng), small(rng)});
  for (const auto& a : ts)
    for (const auto& b : ts) {
      auto ab = lex_cmp(a, b), ba = lex_cmp(b, a);
      if (ab == std::strong_ordering::less) EXPECT_EQ(ba, std::strong_ordering::greater);
      if (ab == std::strong_ordering::equal) EXPECT_TRUE(a.m == b.m && a.tau == b.tau && a.i == b.i);
      for (const auto& c : ts)
        if (ab == std::strong_ordering::less && lex_cmp(b, c) == std::strong_ordering::less)
          EXPECT_EQ(lex_cmp(a, c), std::strong_ordering::less);
    }
}

TEST(LevelRank, Examples) {
  EXPECT_EQ(level_rank(std::vector<Nat>{7}), 7u);
  EXPECT_EQ(level_rank(std::vector<Nat>{1, 1}), 4u);
  EXPECT_EQ(level_unrank(2, 5), (std::vector<Nat>{0, 2}));
  EXPECT_EQ(level_unrank(0, 0), std::vector<Nat>{});
  EXPECT_THROW(level_unrank(0, 3), RangeError);
}

TEST(LevelRank, RoundTripDepthsOneToFive) {
  for (Nat d = 1; d <= 5; ++d)
    for (Nat r = 0; r < 2000; ++r) {
      auto slots = level_unrank(d, r);
      ASSERT_EQ(slots.size(), d);
      EXPECT_EQ(level_rank(slots), r);
    }
}

TEST(XPartition, Examples) {
  EXPECT_EQ(x_partition_decode(0), (XClass{0, 0, 0}));
  // Brute scan for the slot whose decoded class is (2, 3, 1).
  Nat found = UINT64_MAX;
  for (Nat s = 0; s < 200000 && found == UINT64_MAX; ++s)
    if (x_partition_decode(s) == XClass{2, 3, 1}) found = s;
  EXPECT_EQ(found, pair(2, pair(3, 1)));
  int in_class = 0;
  for (Nat s = 0; s < 64; ++s) {
    auto c = x_partition_decode(s);
    if (c.m == 0 && c.t == 0) ++in_class;
  }
  EXPECT_GE(in_class, 3);
}

TEST(XPartition, InjectiveAndCoversSmallClasses) {
  std::set<std::tuple<Nat, Nat, Nat>> seen;
  for (Nat s = 0; s < 100000; ++s) {
    auto c = x_partition_decode(s);
    EXPECT_TRUE(seen.insert({c.m, c.t, c.r}).second);
    EXPECT_EQ(x_partition_encode(c), s);
  }
  std::set<std::pair<Nat, Nat>> classes;
  for (Nat s = 0; s < 10000; ++s) {
    auto c = x_partition_decode(s);
    classes.insert({c.m, c.t});
  }
  for (Nat m = 0; m < 4; ++m)
    for (Nat t = 0; t < 4; ++t) EXPECT_TRUE(classes.count({m, t})) << m << "," << t;
}
