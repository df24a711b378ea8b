// One PASS/FAIL line per acceptance criterion. Every criterion also emits a
// JSON evidence document; criterion 8 reruns 1-7 and compares the bytes.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "forestfact/compose.hpp"
#include "forestfact/enumeration.hpp"
#include "forestfact/sim.hpp"
#include "forestfact/verify.hpp"

using namespace forestfact;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
  json evidence = json::object();

  void fail(const std::string& why) {
    if (pass) note = why;
    pass = false;
  }
};

struct Window {
  Nat d, k, M;
};
const std::vector<Window> kWindows{{2, 3, 4}, {3, 4, 6}, {4, 3, 4}};

std::shared_ptr<const Family> family(const std::string& name) {
  return std::make_shared<SpecFamily>(*builtin_family(name));
}

std::string window_str(const Window& w) {
  return "(" + std::to_string(w.d) + "," + std::to_string(w.k) + "," + std::to_string(w.M) + ")";
}

Outcome enumeration_round_trips() {
  Outcome o;
  Nat checked = 0;
  for (Nat a = 0; a < 1000; ++a)
    for (Nat b = 0; b < 1000; ++b, ++checked)
      if (unpair(pair(a, b)) != std::pair{a, b}) o.fail("unpair(pair(" + std::to_string(a) + "," + std::to_string(b) + "))");
  for (Nat n = 0; n < 1'000'000; ++n, ++checked) {
    auto [a, b] = unpair(n);
    if (pair(a, b) != n) o.fail("pair(unpair(" + std::to_string(n) + "))");
  }
  for (Nat d = 1; d <= 5; ++d)
    for (Nat r = 0; r < 10'000; ++r, ++checked) {
      auto slots = level_unrank(d, r);
      if (slots.size() != d || level_rank(slots) != r) o.fail("level rank depth " + std::to_string(d));
    }
  o.evidence["checked"] = checked;
  return o;
}

Outcome window_suite() {
  Outcome o;
  for (const char* name : {"k2-family", "lambda:2", "lambda:3", "star-mix", "mixed-trees"})
    for (const auto& w : kWindows) {
      Engine e(family(name));
      auto b = materialize_ball(e, w.d, w.k, w.M);
      Nat expected_edges = ball_size(w.d, w.k) - 1;
      if (b.edges.size() != expected_edges) o.fail(std::string(name) + " edge count");
      auto reports = verify_window(b, e);
      if (!all_pass(reports)) o.fail(std::string(name) + " " + window_str(w));
      o.evidence[std::string(name) + " " + window_str(w)] = {{"reports", to_json(reports)}, {"export", export_json(b)}};
    }
  return o;
}

Outcome matching_corollary() {
  Outcome o;
  auto fam = family("lambda:1");
  for (const auto& w : kWindows) {
    Engine e(fam);
    auto b = materialize_ball(e, w.d, w.k, w.M);
    // Matchings: no two edges of one factor share an endpoint.
    std::map<Nat, std::set<Nat>> touched;
    for (const auto& edge : b.edges)
      for (Nat v : {edge.parent, edge.child})
        if (!touched[edge.owner.m].insert(v).second) o.fail("factor " + std::to_string(edge.owner.m) + " not a matching");
    // Exact-slot probe: each vertex above the boundary is matched in every
    // factor m < M, either through its parent edge or through slot pair(m, 0).
    Nat probes = 0, via_parent = 0, via_slot = 0;
    for (const auto& v : b.vertices) {
      const TreeAddress& u = v.address;
      if (u.depth() >= w.d) continue;
      for (Nat m = 0; m < w.M; ++m, ++probes) {
        Nat l = v.labels[m];
        Nat partner = fam->kth_neighbor(m, l, 0);
        bool up = !u.is_root() && e.factor_of_edge(u.parent(), u.last_slot()).m == m;
        auto slot = e.slot_of_demand(u, m, 0);
        bool down = slot && e.factor_of_edge(u, *slot).m == m;
        if (up == down) {
          o.fail("vertex " + u.str() + " factor " + std::to_string(m) + " matched " + (up ? "twice" : "never"));
          continue;
        }
        Nat other = up ? e.label_of(u.parent(), m) : e.label_of(u.son(*slot), m);
        if (other != partner) o.fail("vertex " + u.str() + " factor " + std::to_string(m) + " wrong partner");
        if (slot && e.demand_at(u, *slot) != Demand{m, 0}) o.fail("slot_of_demand mismatch at " + u.str());
        (up ? via_parent : via_slot)++;
      }
    }
    o.evidence[window_str(w)] = {{"probes", probes}, {"via_parent", via_parent}, {"via_slot", via_slot}};
  }
  return o;
}

Outcome lambda_degrees() {
  Outcome o;
  auto fam = family("lambda:3");
  Engine e(fam);
  Nat interior = 0, other = 0;
  for (const auto& u : ball(2, 3))
    for (Nat m = 0; m < 4; ++m) {
      Nat degree = 0;
      for (Nat k = 0; k < 3; ++k)
        if (auto s = e.slot_of_demand(u, m, k); s && e.factor_of_edge(u, *s).m == m) ++degree;
      if (!u.is_root() && e.factor_of_edge(u.parent(), u.last_slot()).m == m) ++degree;
      Nat l = e.label_of(u, m);
      Count want = fam->degree(m, l);
      bool is_interior = want.is_finite() && want.finite() == 3;
      (is_interior ? interior : other)++;
      if (!want.is_finite() || degree != want.finite())
        o.fail(u.str() + " factor " + std::to_string(m) + " degree " + std::to_string(degree) + " want " + want.str());
    }
  o.evidence = {{"interior", interior}, {"other", other}};
  return o;
}

Outcome oracle_differential() {
  Outcome o;
  auto addrs = ball(4, 4);
  for (const char* name : {"k2-family", "star-mix", "mixed-trees"}) {
    Engine e(family(name));
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, addrs.size() - 1);
    json sampled = json::array();
    for (int n = 0; n < 100; ++n) {
      const auto& w = addrs[pick(rng)];
      sampled.push_back(w.str());
      if (brute_force_allocation(e, w, 10) != e.demands(w, 10)) o.fail(std::string(name) + " demands at " + w.str());
      for (Nat m = 0; m < 4; ++m)
        if (e.vertex_of(m, e.label_of(w, m)) != w) o.fail(std::string(name) + " vertex_of at " + w.str());
    }
    o.evidence[name] = sampled;
  }
  return o;
}

Outcome simulator_suite() {
  Outcome o;
  std::mt19937_64 rng(2024);
  json fuzz = json::array();
  for (int n = 0; n < 50; ++n) {
    auto c = fuzz_config(rng, 200, 4, 6);
    auto trace = run(c);
    auto reports = verify_trace(parse_trace(export_trace(trace)));
    auto rep = check_C(trace);
    if (!all_pass(reports)) o.fail("fuzz config " + std::to_string(n) + " trace check");
    if (!rep.c1 || !rep.c2 || !rep.c3) o.fail("fuzz config " + std::to_string(n) + " C1-C3");
    fuzz.push_back({{"vertices", c.vertices}, {"steps", trace.steps.size()}, {"C", rep.to_json()}, {"checks", to_json(reports)}});
  }
  o.evidence["fuzz"] = fuzz;

  json seeded = json::array();
  for (auto [hubs, factors, passes] : {std::tuple<Nat, Nat, Nat>{6, 2, 4}, {5, 1, 5}, {4, 3, 4}}) {
    auto base = adequate_config(hubs, factors, passes);
    auto trace = run(base);
    for (const auto& p : sigma_progress(trace)) {
      if (!p.increasing) o.fail("sigma stalls on an adequate pass, hubs " + std::to_string(hubs));
      if (std::count(p.adequate.begin(), p.adequate.end(), true) < 2) o.fail("too few adequate passes, hubs " + std::to_string(hubs));
      json starts = json::array();
      for (const auto& s : p.at_pass_start) starts.push_back(sigma_str(s));
      seeded.push_back({{"hubs", hubs}, {"m", p.m}, {"sigma", starts}, {"end", sigma_str(p.after_last_pass)}});
    }
    double prev = -1;
    for (Nat T = 1; T <= 6; ++T) {
      auto c = base;
      c.passes = T;
      double cov = check_C(run(c)).c5_coverage;
      if (cov < prev) o.fail("coverage drops at T=" + std::to_string(T));
      prev = cov;
    }
  }
  o.evidence["seeded"] = seeded;
  return o;
}

Outcome pipeline_suite() {
  Outcome o;
  Pipeline p(*builtin_family("mixed-infinite"));
  auto b = materialize_ball(p, 2, 3, 4);
  WindowChecks checks;
  checks.depth_law = false;
  auto reports = verify_window(b, p, checks);
  for (const auto& r : reports)
    if (!r.pass) o.fail("pipeline " + r.check);
  o.evidence["pipeline"] = to_json(reports);
  auto s1 = materialize_ball(p.stage1(), 2, 3, 4);
  auto stage1 = verify_window(s1, p.stage1());
  if (!all_pass(stage1)) o.fail("stage 1");
  o.evidence["stage1"] = to_json(stage1);
  return o;
}

struct Criterion {
  int id;
  std::string what;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "enumeration round trips", 5, enumeration_round_trips},
      {2, "window suite F1-F4 on built-in families", 60, window_suite},
      {3, "lambda=1 factors are matchings, exact-slot probe", 60, matching_corollary},
      {4, "lambda=3 factor degrees", 60, lambda_degrees},
      {5, "allocation oracle and vertex_of on sampled addresses", 60, oracle_differential},
      {6, "simulator C1-C3, acyclicity, D-vectors, sigma, coverage", 120, simulator_suite},
      {7, "two-stage pipeline F1-F3 and stage-1 spanning", 60, pipeline_suite},
  };

  bool all = true;
  std::vector<std::string> first_run;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > c.limit_s) o.fail("took " + std::to_string(s) + " s");
    first_run.push_back(o.evidence.dump());
    all = all && o.pass;
    std::printf("criterion %d: %s  %s (%.2fs)%s%s\n", c.id, o.pass ? "PASS" : "FAIL", c.what.c_str(), s,
                o.note.empty() ? "" : ": ", o.note.c_str());
    std::fflush(stdout);
  }

  Outcome det;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    std::string again;
    try {
      again = criteria[n].run().evidence.dump();
    } catch (const std::exception& e) {
      again = e.what();
    }
    if (again != first_run[n]) det.fail("criterion " + std::to_string(criteria[n].id) + " evidence differs");
  }
  all = all && det.pass;
  std::printf("criterion 8: %s  byte-identical JSON evidence across two runs%s%s\n", det.pass ? "PASS" : "FAIL",
              det.note.empty() ? "" : ": ", det.note.c_str());
  return all ? 0 : 1;
}
