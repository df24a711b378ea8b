#include <set>

#include <gtest/gtest.h>

#include "forestfact/enumeration.hpp"
#include "forestfact/verify.hpp"
#include "forestfact/window.hpp"

using namespace forestfact;

namespace {

std::shared_ptr<const Family> family(const std::string& name) {
  return std::make_shared<SpecFamily>(*builtin_family(name));
}

const VerificationReport& report(const std::vector<VerificationReport>& rs, const std::string& prefix) {
  for (const auto& r : rs)
    if (r.check.starts_with(prefix)) return r;
  throw std::runtime_error("no report " + prefix);
}

}  // namespace

TEST(Materialize, RadiusZeroIsTheRoot) {
  Engine e(family("mixed-trees"));
  auto b = materialize_ball(e, 0, 5, 7);
  ASSERT_EQ(b.vertices.size(), 1u);
  EXPECT_TRUE(b.edges.empty());
  EXPECT_EQ(b.vertices[0].labels, std::vector<Nat>(7, 0));
}

TEST(Materialize, CountsAndOneOwnerPerEdge) {
  Engine e(family("k2-family"));
  auto b = materialize_ball(e, 3, 4, 6);
  EXPECT_EQ(b.vertices.size(), 85u);
  EXPECT_EQ(b.edges.size(), 84u);
  std::set<std::tuple<Nat, Nat, Nat>> owners;
  for (const auto& edge : b.edges) EXPECT_TRUE(owners.insert({edge.owner.m, edge.owner.i, edge.owner.j}).second);
}

TEST(Materialize, ParallelMatchesSerialReference) {
  for (const char* name : {"k2-family", "star-mix", "mixed-trees"}) {
    auto fam = family(name);
    Engine a(fam), b(fam);
    EXPECT_EQ(export_json(materialize_ball(a, 3, 4, 6)), export_json(materialize_ball_serial(b, 3, 4, 6)));
  }
}

TEST(Materialize, ExportsAreByteStable) {
  auto fam = family("lambda:3");
  Engine a(fam), b(fam);
  auto x = materialize_ball(a, 2, 3, 4), y = materialize_ball(b, 2, 3, 4);
  EXPECT_EQ(export_json(x), export_json(y));
  EXPECT_EQ(export_dot(x), export_dot(y));
  auto j = nlohmann::json::parse(export_json(x));
  EXPECT_EQ(j["vertices"].size(), 13u);
  EXPECT_EQ(j["edges"][0]["parent"], "/");
  EXPECT_NE(export_dot(x).find("factor="), std::string::npos);
}

TEST(Materialize, RadiusCap) {
  EngineOptions opts;
  opts.max_depth = 2;
  Engine e(family("k2-family"), opts);
  EXPECT_THROW(materialize_ball(e, 3, 2, 2), RangeError);
}

TEST(Materialize, K2FactorsAreMatchings) {
  Engine e(family("k2-family"));
  auto b = materialize_ball(e, 3, 4, 6);
  for (Nat m = 0; m < 8; ++m) {
    std::set<Nat> touched;
    for (Nat idx : b.edges_of_factor(m)) {
      EXPECT_TRUE(touched.insert(b.edges[idx].parent).second);
      EXPECT_TRUE(touched.insert(b.edges[idx].child).second);
    }
  }
}

TEST(Oracle, AllocationMatchesEngineDemands) {
  for (const char* name : {"k2-family", "star-mix", "mixed-trees", "lambda:3"}) {
    Engine e(family(name));
    for (const auto& w : ball(2, 3)) {
      auto oracle = brute_force_allocation(e, w, 10);
      EXPECT_EQ(oracle, e.demands(w, 10)) << name << " " << w.str();
      // Prefix n, then n + 5, agrees with n + 5 directly.
      auto longer = brute_force_allocation(e, w, 15);
      EXPECT_TRUE(std::equal(oracle.begin(), oracle.end(), longer.begin()));
    }
  }
}

TEST(Oracle, K2RootAllocation) {
  auto fam = family("k2-family");
  Engine e(fam);
  auto oracle = brute_force_allocation(e, TreeAddress::root(), 3);
  for (Nat n = 0; n < 3; ++n) EXPECT_EQ(oracle[n], (DemandTarget{n, 0, fam->kth_neighbor(n, 0, 0)}));
}

TEST(VerifyWindow, BuiltinFamiliesPass) {
  for (const char* name : {"k2-family", "lambda:2", "lambda:3", "star-mix", "mixed-trees"}) {
    Engine e(family(name));
    auto reports = verify_window(materialize_ball(e, 2, 3, 4), e);
    for (const auto& r : reports) EXPECT_TRUE(r.pass) << name << ": " << r.to_json().dump();
  }
}

TEST(VerifyWindow, LambdaThreeDepthLaw) {
  auto fam = family("lambda:3");
  Engine e(fam);
  auto b = materialize_ball(e, 3, 3, 4);
  EXPECT_TRUE(report(verify_window(b, e), "F4").pass);
  for (const auto& v : b.vertices)
    for (Nat m = 0; m < 4; ++m) {
      Nat i = v.labels[m];
      auto c = fam->component_of(m, i);
      if (fam->root_of(c) == i) EXPECT_EQ(c.d, v.address.depth());
    }
}

TEST(VerifyWindow, OverwrittenLabelIsReportedAtItsVertex) {
  Engine e(family("k2-family"));
  auto b = materialize_ball(e, 2, 3, 4);
  Nat victim = b.find(TreeAddress({2, 1}));
  b.vertices[victim].labels[1] = b.vertices[3].labels[1];
  auto reports = verify_window(b, e);
  const auto& f1 = report(reports, "F1");
  ASSERT_FALSE(f1.pass);
  EXPECT_EQ((*f1.counterexample)["vertex"], "/2/1");
  EXPECT_EQ((*f1.counterexample)["factor"], 1);
  // Minimal scope: depth 2, sons 3, factors 2.
  EXPECT_EQ(f1.scope["radius"], 2);
  EXPECT_EQ(f1.scope["sons"], 3);
  EXPECT_EQ(f1.scope["factors"], 2);
}

TEST(VerifyWindow, CorruptedOwnerIsCaught) {
  Engine e(family("mixed-trees"));
  auto b = materialize_ball(e, 2, 3, 4);
  b.edges[4].owner.m += 1;
  auto reports = verify_window(b, e);
  EXPECT_FALSE(report(reports, "F3").pass);
  EXPECT_FALSE(report(reports, "F2").pass);
  EXPECT_EQ(verify_adjacency(b, e.family()), verify_adjacency_serial(b, e.family()));
}

TEST(VerifyWindow, MisplacedRootBreaksDepthLaw) {
  auto fam = family("lambda:3");
  Engine e(fam);
  auto b = materialize_ball(e, 2, 3, 2);
  Nat victim = b.find(TreeAddress({1, 1}));
  b.vertices[victim].labels[0] = fam->root_of(fam->pool_component(0, 1, 40));
  auto reports = verify_window(b, e);
  const auto& f4 = report(reports, "F4");
  ASSERT_FALSE(f4.pass);
  EXPECT_EQ((*f4.counterexample)["vertex"], "/1/1");
}

TEST(VerifyWindow, SubWindowKeepsStructure) {
  Engine e(family("star-mix"));
  auto b = materialize_ball(e, 3, 4, 5);
  auto sub = sub_window(b, 2, 3, 4);
  auto direct = materialize_ball(e, 2, 3, 4);
  EXPECT_EQ(export_json(sub), export_json(direct));
}
