#include <set>

#include <gtest/gtest.h>

#include "forestfact/tree_address.hpp"

using namespace forestfact;

TEST(TreeAddress, ParentSonDepth) {
  EXPECT_EQ(TreeAddress::root().son(3), TreeAddress({3}));
  EXPECT_EQ(TreeAddress({3, 1}).parent(), TreeAddress({3}));
  EXPECT_EQ(TreeAddress({0, 0, 0}).depth(), 3u);
  EXPECT_THROW(TreeAddress::root().parent(), RangeError);
  auto w = TreeAddress({4, 9});
  EXPECT_EQ(w.son(123456789).parent(), w);
}

TEST(TreeAddress, TextForm) {
  EXPECT_EQ(TreeAddress::root().str(), "/");
  EXPECT_EQ(TreeAddress({3, 1}).str(), "/3/1");
  EXPECT_EQ(TreeAddress::parse("/"), TreeAddress::root());
  EXPECT_EQ(TreeAddress::parse("/3/1"), TreeAddress({3, 1}));
  for (const char* bad : {"", "3/1", "/3//1", "/3/", "/x", "/-1"})
    EXPECT_THROW(TreeAddress::parse(bad), ValidationError) << bad;
}

TEST(Sphere, CountsMatchClosedForms) {
  EXPECT_EQ(sphere(0, 5).size(), 1u);
  EXPECT_EQ(sphere(0, 5).front(), TreeAddress::root());
  EXPECT_EQ(sphere(2, 5).size(), 25u);
  EXPECT_EQ(ball(3, 4).size(), 85u);
  for (Nat d = 0; d <= 5; ++d)
    for (Nat k = 1; k <= 5; ++k) {
      auto s = sphere(d, k);
      EXPECT_EQ(s.size(), sphere_size(d, k));
      std::set<TreeAddress> distinct(s.begin(), s.end());
      EXPECT_EQ(distinct.size(), s.size());
      for (const auto& w : s) {
        EXPECT_EQ(w.depth(), d);
        for (auto slot : w.slots()) EXPECT_LT(slot, k);
      }
      if (k >= 2) {
        Nat pow = 1;
        for (Nat i = 0; i <= d; ++i) pow *= k;
        EXPECT_EQ(ball_size(d, k), (pow - 1) / (k - 1));
      }
    }
}

TEST(Sphere, AscendingLevelRankOrder) {
  auto s = sphere(3, 4);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1].level_rank(), s[i].level_rank());
}

TEST(Ball, PrefixClosed) {
  auto b = ball(4, 3);
  std::set<TreeAddress> seen;
  for (const auto& w : b) {
    if (!w.is_root()) EXPECT_TRUE(seen.count(w.parent())) << w.str();
    seen.insert(w);
  }
}
