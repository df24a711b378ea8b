#include <map>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "forestfact/engine.hpp"
#include "forestfact/enumeration.hpp"

using namespace forestfact;

namespace {

std::shared_ptr<const Family> family(const std::string& name) {
  return std::make_shared<SpecFamily>(*builtin_family(name));
}

// Forest distance from the component root, walking smallest neighbors
// (the parent has the least index among a vertex's neighbors).
Nat depth_in_component(const Family& fam, Nat m, Nat i) {
  Nat root = fam.root_of(fam.component_of(m, i));
  Nat dist = 0;
  while (i != root) {
    i = fam.kth_neighbor(m, i, 0);
    ++dist;
  }
  return dist;
}

}  // namespace

TEST(Engine, RootCarriesIndexZero) {
  for (const char* name : {"k2-family", "lambda:3", "mixed-trees"}) {
    Engine e(family(name));
    for (Nat m = 0; m < 10; ++m) {
      EXPECT_EQ(e.label_of(TreeAddress::root(), m), 0u);
      EXPECT_EQ(e.vertex_of(m, 0), TreeAddress::root());
    }
  }
}

TEST(Engine, K2RootDemandsListEveryFactorOnce) {
  auto fam = family("k2-family");
  Engine e(fam);
  // Valid codes at the root are exactly pair(m, 0); ascending in m.
  auto ds = e.demands(TreeAddress::root(), 12);
  for (Nat n = 0; n < ds.size(); ++n) {
    EXPECT_EQ(ds[n].m, n);
    EXPECT_EQ(ds[n].k, 0u);
    EXPECT_EQ(ds[n].target, fam->kth_neighbor(n, 0, 0));
    TreeAddress son = TreeAddress::root().son(n);
    EXPECT_EQ(e.label_of(son, n), fam->kth_neighbor(n, 0, 0));
    for (Nat m = 0; m < 6; ++m)
      if (m != n) EXPECT_EQ(fam->component_of(m, e.label_of(son, m)).d, 1u);
  }
  EXPECT_EQ(e.factor_of_edge(TreeAddress::root(), 0), (EdgeAssignment{0, 0, fam->kth_neighbor(0, 0, 0)}));
}

TEST(Engine, FirstSonContinuesFactorZero) {
  for (const char* name : {"k2-family", "lambda:3", "star-mix", "mixed-trees"}) {
    auto fam = family(name);
    Engine e(fam);
    TreeAddress s0 = TreeAddress({0});
    EXPECT_EQ(e.label_of(s0, 0), fam->kth_neighbor(0, 0, 0)) << name;
    for (Nat m = 1; m < 5; ++m) {
      Nat i = e.label_of(s0, m);
      EXPECT_EQ(fam->root_of(fam->component_of(m, i)), i);
      EXPECT_EQ(fam->component_of(m, i).d, 1u);
    }
  }
}

TEST(Engine, FactorOfEdgeIsDeterministicAndOrdered) {
  Engine e(family("mixed-trees"));
  for (const auto& w : ball(2, 3))
    for (Nat s = 0; s < 5; ++s) {
      auto a = e.factor_of_edge(w, s);
      EXPECT_LT(a.i, a.j);
      EXPECT_EQ(a, e.factor_of_edge(w, s));
    }
}

TEST(Engine, VertexOfInvertsLabelOf) {
  for (const char* name : {"k2-family", "lambda:2", "lambda:3", "star-mix", "mixed-trees", "omega-regular"}) {
    Engine e(family(name));
    for (const auto& w : ball(3, 3))
      for (Nat m = 0; m < 4; ++m) ASSERT_EQ(e.vertex_of(m, e.label_of(w, m)), w) << name << " " << w.str() << " " << m;
  }
}

TEST(Engine, FirstPoolOneRootSitsAtFirstDepthOneGap) {
  for (const char* name : {"k2-family", "lambda:3", "mixed-trees"}) {
    auto fam = family(name);
    Engine e(fam);
    for (Nat m = 0; m < 5; ++m) {
      // Oracle: scan depth-1 slots, a slot is an m-continuation iff the
      // demand it serves names factor m.
      Nat gap = 0;
      while (e.demand_at(TreeAddress::root(), gap).m == m) ++gap;
      Nat i = fam->root_of(fam->pool_component(m, 1, 0));
      EXPECT_EQ(e.vertex_of(m, i), TreeAddress({gap})) << name << " " << m;
    }
  }
}

TEST(Engine, DepthLaw) {
  for (const char* name : {"k2-family", "lambda:3", "star-mix", "mixed-trees"}) {
    auto fam = family(name);
    Engine e(fam);
    for (const auto& w : ball(3, 3))
      for (Nat m = 0; m < 4; ++m) {
        Nat i = e.label_of(w, m);
        Nat pool = fam->component_of(m, i).d;
        ASSERT_LE(pool, w.depth());
        EXPECT_EQ(depth_in_component(*fam, m, i), w.depth() - pool) << name << " " << w.str() << " " << m;
      }
  }
}

TEST(Engine, DemandsNeverStall) {
  for (const char* name : {"k2-family", "lambda:2", "star-mix", "mixed-trees"}) {
    Engine e(family(name));
    for (const auto& w : ball(2, 3)) {
      auto ds = e.demands(w, 50);
      ASSERT_EQ(ds.size(), 50u);
      for (std::size_t n = 1; n < ds.size(); ++n) EXPECT_LT(pair(ds[n - 1].m, ds[n - 1].k), pair(ds[n].m, ds[n].k));
    }
  }
}

TEST(Engine, SlotOfDemandInvertsDemandAt) {
  Engine e(family("star-mix"));
  for (const auto& w : ball(2, 3))
    for (Nat s = 0; s < 30; ++s) {
      Demand d = e.demand_at(w, s);
      EXPECT_EQ(e.slot_of_demand(w, d.m, d.k), s);
    }
  Engine k2(family("k2-family"));
  EXPECT_FALSE(k2.slot_of_demand(TreeAddress::root(), 3, 1).has_value());
  // A K2 continuation has no further neighbor to place.
  EXPECT_EQ(k2.continuation_count(TreeAddress({0}), 0), Count(0));
}

TEST(Engine, ConcurrentQueriesMatchSerialAnswers) {
  auto fam = family("mixed-trees");
  auto addrs = ball(3, 3);
  Engine serial(fam);
  std::vector<Nat> expected;
  for (const auto& w : addrs)
    for (Nat m = 0; m < 4; ++m) expected.push_back(serial.label_of(w, m));

  Engine shared(fam);
  std::vector<Nat> got(expected.size());
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t] {
      // Each thread walks the window from a different offset.
      for (std::size_t n = 0; n < addrs.size(); ++n) {
        std::size_t a = (n + t * 5) % addrs.size();
        for (Nat m = 0; m < 4; ++m) got[a * 4 + m] = shared.label_of(addrs[a], m);
      }
    });
  for (auto& th : pool) th.join();
  EXPECT_EQ(got, expected);
}

TEST(Engine, QueryOrderDoesNotMatter) {
  auto fam = family("star-mix");
  Engine a(fam), b(fam);
  auto addrs = ball(2, 4);
  std::map<std::pair<TreeAddress, Nat>, Nat> fwd;
  for (const auto& w : addrs)
    for (Nat m = 0; m < 3; ++m) fwd[{w, m}] = a.label_of(w, m);
  for (auto it = addrs.rbegin(); it != addrs.rend(); ++it)
    for (Nat m = 3; m-- > 0;) EXPECT_EQ(b.label_of(*it, m), (fwd[{*it, m}]));
}

TEST(Engine, MemoBudgetIsEnforced) {
  EngineOptions opts;
  opts.memo_budget = 50;
  Engine e(family("mixed-trees"), opts);
  EXPECT_THROW(
      {
        for (const auto& w : ball(3, 4)) e.label_of(w, 2);
      },
      ResourceLimitError);
}
