#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "forestfact/enumeration.hpp"
#include "forestfact/verify.hpp"

namespace forestfact {

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j{{"check", check}, {"scope", scope}, {"verdict", pass ? "pass" : "fail"}};
  if (counterexample) j["counterexample"] = *counterexample;
  return j;
}

bool all_pass(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

nlohmann::json to_json(const std::vector<VerificationReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) out.push_back(r.to_json());
  return out;
}

// ---------------------------------------------------------------------------
// Allocation oracle

std::vector<DemandTarget> brute_force_allocation(const Factorization& f, const TreeAddress& w, Nat n) {
  const Family& fam = f.family();
  // Per factor: label of w, and the neighbor already placed at w's parent.
  struct Row {
    Nat label;
    std::optional<Nat> placed;
    Count degree;
  };
  std::vector<Row> rows;
  auto row = [&](Nat m) -> const Row& {
    while (rows.size() <= m) {
      Nat k = rows.size();
      Nat i = f.label_of(w, k);
      std::optional<Nat> placed;
      if (!w.is_root()) {
        Nat up = f.label_of(w.parent(), k);
        if (fam.factor(k).adjacent(i, up)) placed = up;
      }
      rows.push_back({i, placed, fam.degree(k, i)});
    }
    return rows[m];
  };

  std::vector<DemandTarget> out;
  for (Nat code = 0; out.size() < n; ++code) {
    auto [m, k] = unpair(code);
    const Row& r = row(m);
    const Count avail = r.degree.is_omega() ? r.degree : Count(r.degree.finite() - (r.placed ? 1 : 0));
    if (!avail.exceeds(k)) continue;
    // k-th neighbor in ascending index order, skipping the placed one.
    Nat seen = 0;
    for (Nat t = 0;; ++t) {
      Nat v = fam.kth_neighbor(m, r.label, t);
      if (r.placed && v == *r.placed) continue;
      if (seen++ == k) {
        out.push_back({m, k, v});
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Window checks

BallMaterialization sub_window(const BallMaterialization& b, Nat radius, Nat sons, Nat factors) {
  BallMaterialization out;
  out.radius = radius;
  out.sons = sons;
  out.factors = std::min(factors, b.factors);
  out.family = b.family;
  std::vector<Nat> remap(b.vertices.size(), BallMaterialization::npos);
  for (Nat v = 0; v < b.vertices.size(); ++v) {
    const auto& w = b.vertices[v].address;
    const auto& s = w.slots();
    if (w.depth() > radius || std::any_of(s.begin(), s.end(), [&](Nat x) { return x >= sons; })) continue;
    remap[v] = out.vertices.size();
    auto labels = b.vertices[v].labels;
    labels.resize(std::min<Nat>(labels.size(), out.factors));
    out.vertices.push_back({w, std::move(labels)});
  }
  for (const auto& e : b.edges)
    if (remap[e.parent] != BallMaterialization::npos && remap[e.child] != BallMaterialization::npos)
      out.edges.push_back({remap[e.parent], remap[e.child], e.slot, e.owner});
  return out;
}

namespace {

using Finding = std::optional<nlohmann::json>;
using Check = std::function<Finding(const BallMaterialization&)>;

nlohmann::json scope_of(const BallMaterialization& b) {
  return {{"radius", b.radius}, {"sons", b.sons}, {"factors", b.factors}};
}

VerificationReport run_check(const std::string& name, const BallMaterialization& b, const Check& check) {
  VerificationReport r{name, scope_of(b), true, std::nullopt};
  if (!check(b)) return r;
  r.pass = false;
  // Shrink: the first failing sub-window in (radius, sons, factors) order.
  for (Nat d = 0; d <= b.radius; ++d)
    for (Nat k = 1; k <= std::max<Nat>(b.sons, 1); ++k)
      for (Nat m = 1; m <= std::max<Nat>(b.factors, 1); ++m) {
        auto sub = sub_window(b, d, k, m);
        if (auto found = check(sub)) {
          r.scope = scope_of(sub);
          r.counterexample = *found;
          return r;
        }
      }
  r.counterexample = *check(b);
  return r;
}

Finding check_labels(const BallMaterialization& b, const Factorization& f) {
  for (const auto& v : b.vertices) {
    if (v.labels.size() != b.factors)
      return nlohmann::json{{"condition", "F1"}, {"vertex", v.address.str()}, {"detail", "missing labels"}};
    for (Nat m = 0; m < b.factors; ++m) {
      auto back = f.vertex_of(m, v.labels[m]);
      if (back != v.address)
        return nlohmann::json{{"condition", "F1"},
                              {"vertex", v.address.str()},
                              {"factor", m},
                              {"label", v.labels[m]},
                              {"detail", "label is assigned to " + back.str()}};
    }
  }
  std::map<std::pair<Nat, Nat>, Nat> owner;
  for (Nat v = 0; v < b.vertices.size(); ++v)
    for (Nat m = 0; m < b.factors; ++m) {
      auto [it, fresh] = owner.try_emplace({m, b.vertices[v].labels[m]}, v);
      if (!fresh)
        return nlohmann::json{{"condition", "F1"},
                              {"vertex", b.vertices[v].address.str()},
                              {"factor", m},
                              {"label", b.vertices[v].labels[m]},
                              {"detail", "label shared with " + b.vertices[it->second].address.str()}};
    }
  return std::nullopt;
}

Finding check_ownership(const BallMaterialization& b, const Factorization& f) {
  const Family& fam = f.family();
  std::set<std::tuple<Nat, Nat, Nat>> seen;
  for (const auto& e : b.edges) {
    const auto& pa = b.vertices[e.parent];
    const auto& ch = b.vertices[e.child];
    auto fail = [&](const std::string& detail) {
      return nlohmann::json{{"condition", "F3"},
                            {"edge", {pa.address.str(), ch.address.str()}},
                            {"owner", {e.owner.m, e.owner.i, e.owner.j}},
                            {"detail", detail}};
    };
    const auto& o = e.owner;
    if (!(o.i < o.j)) return fail("owner indices not ordered");
    if (f.factor_of_edge(pa.address, e.slot) != o) return fail("re-query returns a different owner");
    if (!seen.insert({o.m, o.i, o.j}).second) return fail("owner repeated on another edge");
    Nat li, lj;
    if (o.m < b.factors) {
      li = pa.labels[o.m];
      lj = ch.labels[o.m];
    } else {
      li = f.label_of(pa.address, o.m);
      lj = f.label_of(ch.address, o.m);
    }
    if (std::minmax(li, lj) != std::minmax(o.i, o.j)) return fail("owner indices differ from endpoint labels");
    if (!fam.factor(o.m).adjacent(o.i, o.j)) return fail("owner indices are not adjacent in their forest");
    for (Nat m = 0; m < b.factors; ++m)
      if (m != o.m && fam.factor(m).adjacent(pa.labels[m], ch.labels[m]))
        return fail("factor " + std::to_string(m) + " also realizes this edge");
  }
  return std::nullopt;
}

Finding check_depth_law(const BallMaterialization& b, const Family& fam) {
  for (const auto& v : b.vertices)
    for (Nat m = 0; m < b.factors; ++m) {
      Nat i = v.labels[m];
      ComponentRef c = fam.component_of(m, i);
      Nat root = fam.root_of(c);
      Nat dist = 0;
      while (i != root && dist <= v.address.depth()) {
        i = fam.kth_neighbor(m, i, 0);
        ++dist;
      }
      if (c.d > v.address.depth() || dist != v.address.depth() - c.d)
        return nlohmann::json{{"condition", "F4"},
                              {"vertex", v.address.str()},
                              {"factor", m},
                              {"label", v.labels[m]},
                              {"pool", c.d},
                              {"distance_from_root", dist}};
    }
  return std::nullopt;
}

// Indices whose address does not fit in 64-bit naturals are counted in
// `unrepresentable` and skipped.
Finding check_spanning(const BallMaterialization& b, const Factorization& f, Nat indices, Nat& unrepresentable) {
  for (Nat m = 0; m < b.factors; ++m)
    for (Nat i = 0; i < indices; ++i) {
      TreeAddress w;
      try {
        w = f.vertex_of(m, i);
      } catch (const OverflowError&) {
        ++unrepresentable;
        continue;
      }
      if (f.label_of(w, m) != i)
        return nlohmann::json{{"condition", "E3"}, {"factor", m}, {"index", i}, {"vertex", w.str()}};
    }
  return std::nullopt;
}

}  // namespace

namespace {

std::vector<Nat> parent_edges(const BallMaterialization& b) {
  std::vector<Nat> out(b.vertices.size(), BallMaterialization::npos);
  for (Nat e = 0; e < b.edges.size(); ++e) out[b.edges[e].child] = e;
  return out;
}

// Pairs (u, v > u) of factor m: forest adjacency of the labels must match
// "the tree edge u-v exists and factor m owns it".
Finding adjacency_row(const BallMaterialization& b, const Forest& forest, const std::vector<Nat>& parent_edge, Nat m,
                      Nat u) {
  auto edge_between = [&](Nat a, Nat c) {
    Nat e = parent_edge[c];
    return e != BallMaterialization::npos && b.edges[e].parent == a ? e : BallMaterialization::npos;
  };
  for (Nat v = u + 1; v < b.vertices.size(); ++v) {
    Nat lu = b.vertices[u].labels[m], lv = b.vertices[v].labels[m];
    bool forest_edge = forest.adjacent(lu, lv);
    Nat e = edge_between(u, v);
    if (e == BallMaterialization::npos) e = edge_between(v, u);
    bool claimed = e != BallMaterialization::npos && b.edges[e].owner.m == m;
    if (forest_edge != claimed)
      return nlohmann::json{{"condition", "F2"},
                            {"factor", m},
                            {"vertices", {b.vertices[u].address.str(), b.vertices[v].address.str()}},
                            {"labels", {lu, lv}},
                            {"forest_adjacent", forest_edge},
                            {"tree_edge_claimed", claimed}};
  }
  return std::nullopt;
}

}  // namespace

std::optional<nlohmann::json> verify_adjacency_serial(const BallMaterialization& b, const Family& fam) {
  const auto parent_edge = parent_edges(b);
  for (Nat m = 0; m < b.factors; ++m)
    for (Nat u = 0; u < b.vertices.size(); ++u)
      if (auto found = adjacency_row(b, fam.factor(m), parent_edge, m, u)) return found;
  return std::nullopt;
}

std::optional<nlohmann::json> verify_adjacency(const BallMaterialization& b, const Family& fam) {
  const auto parent_edge = parent_edges(b);
  const Nat n = b.vertices.size();
  // Rows (m, u) run in parallel; the first failing row in serial order is
  // reported, so the answer matches the reference.
  const auto rows = static_cast<long long>(b.factors * n);
  std::vector<Finding> found(rows);
#pragma omp parallel for schedule(dynamic, 8)
  for (long long row = 0; row < rows; ++row) {
    Nat m = static_cast<Nat>(row) / n;
    found[row] = adjacency_row(b, fam.factor(m), parent_edge, m, static_cast<Nat>(row) % n);
  }
  for (auto& f : found)
    if (f) return f;
  return std::nullopt;
}

std::vector<VerificationReport> verify_window(const BallMaterialization& b, const Factorization& f,
                                              const WindowChecks& checks) {
  const Family& fam = f.family();
  std::vector<VerificationReport> out;
  out.push_back(run_check("F1 exactly-once labeling", b, [&](const auto& w) { return check_labels(w, f); }));
  out.push_back(run_check("F2 adjacency iff forest adjacency", b,
                          [&](const auto& w) { return verify_adjacency(w, fam); }));
  out.push_back(run_check("F3 unique edge ownership", b, [&](const auto& w) { return check_ownership(w, f); }));
  if (checks.depth_law)
    out.push_back(run_check("F4 depth law", b, [&](const auto& w) { return check_depth_law(w, fam); }));
  if (checks.spanning_indices > 0) {
    VerificationReport r{"E3 spanning", scope_of(b), true, std::nullopt};
    Nat skipped = 0;
    auto found = check_spanning(b, f, checks.spanning_indices, skipped);
    r.scope["indices"] = checks.spanning_indices;
    r.scope["unrepresentable"] = skipped;
    if (found) {
      r.pass = false;
      r.counterexample = *found;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace forestfact
