#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "forestfact/verify.hpp"

namespace forestfact {

namespace {

// The rules, restated over plain maps: slots[(m, j)] is the column a_j^m,
// b[(m, j)] the set B_j^m.
struct Replay {
  Nat n = 0, factors = 0, passes = 0;
  std::set<std::pair<Nat, Nat>> edges;  // (low, high) scheduling indices
  std::vector<Nat> parent;
  std::vector<std::pair<Nat, Nat>> cls;
  std::map<std::pair<Nat, Nat>, std::vector<Nat>> slots;
  std::map<std::pair<Nat, Nat>, std::set<Nat>> b;

  Nat len(Nat m, Nat j) const {
    auto it = slots.find({m, j});
    return it == slots.end() ? 0 : it->second.size();
  }
  bool in_a(Nat m, Nat j, Nat i) const {
    auto it = slots.find({m, j});
    return it != slots.end() && std::find(it->second.begin(), it->second.end(), i) != it->second.end();
  }
  bool in_b(Nat m, Nat j, Nat i) const {
    auto it = b.find({m, j});
    return it != b.end() && it->second.count(i);
  }
  bool placed(Nat m, Nat i) const {
    for (Nat j = 0; j < n; ++j)
      if (in_a(m, j, i) || in_b(m, j, i)) return true;
    return false;
  }
  Sigma sigma(Nat m) const {
    bool any = false;
    for (Nat j = 0; j < n; ++j) any = any || len(m, j) > 0;
    if (!any) return 0;
    for (Nat s = 0; s < n; ++s)
      for (Nat j = 0; j <= s; ++j)
        if (len(m, j) <= s) return s;  // a_j(y) undefined for y = len <= s
    return std::nullopt;
  }
};

Replay load(const SimConfig& c) {
  Replay r;
  r.n = c.vertices;
  r.factors = c.factors;
  r.passes = c.passes;
  if (r.n == 0 || r.factors == 0 || r.passes == 0) throw ValidationError("empty configuration");
  std::vector<Nat> order(r.n), pos(r.n);
  std::iota(order.begin(), order.end(), 0);
  if (c.enumeration) order = *c.enumeration;
  if (order.size() != r.n) throw ValidationError("bad enumeration");
  for (Nat i = 0; i < r.n; ++i) {
    if (order[i] >= r.n) throw ValidationError("bad enumeration");
    pos[order[i]] = i;
  }
  for (auto [a, b2] : c.edges) {
    if (a >= r.n || b2 >= r.n) throw ValidationError("bad edge");
    r.edges.insert(std::minmax(pos[a], pos[b2]));
  }
  if (c.parent.size() != r.n) throw ValidationError("bad parent map");
  r.parent.assign(r.n, 0);
  r.cls.assign(r.n, {0, 0});
  std::vector<Nat> rank(r.n, 0);
  for (Nat i = 1; i < r.n; ++i) {
    const auto& p = c.parent[order[i]];
    if (!p || *p >= r.n || pos[*p] >= i) throw ValidationError("parent map does not respect the enumeration");
    r.parent[i] = pos[*p];
    if (c.x_classes) {
      if (c.x_classes->size() != r.n || !(*c.x_classes)[order[i]]) throw ValidationError("incomplete partition");
      r.cls[i] = *(*c.x_classes)[order[i]];
    } else {
      XClass x = x_partition_decode(rank[r.parent[i]]++);
      r.cls[i] = {x.m, x.t};
    }
  }
  return r;
}

struct Expected {
  Sigma sigma;
  std::vector<Candidate> candidates;
  SimAction action = SimAction::Skip;
  std::optional<Nat> j, y;
  std::array<bool, 8> d{};
};

Expected expect(const Replay& r, Nat m, Nat tau, Nat i) {
  Expected e;
  e.sigma = r.sigma(m);
  const bool d1 = !r.placed(m, i);
  std::optional<Nat> assign_j, b_j;
  for (Nat j = 0; j < i; ++j) {
    if (!r.edges.count({j, i})) continue;
    Candidate c;
    c.j = j;
    c.y = r.len(m, j);
    bool d4 = true, d5 = true;
    for (Nat mp = 0; mp < m; ++mp) {
      if (r.in_a(mp, j, i)) d4 = false;
      if (r.in_b(mp, j, i)) d5 = false;
    }
    // v_i lies in X_{parent}^{cls.m}(cls.t).
    bool d6 = true;
    if (r.parent[i] == j && (r.cls[i].first > m || (r.cls[i].first == m && r.cls[i].second > tau))) d6 = false;
    if (r.cls[i] == std::pair<Nat, Nat>{m, tau} && r.parent[i] != j) d6 = false;
    bool d7 = !e.sigma || (j <= *e.sigma && c.y <= *e.sigma);
    c.d = {true, true, d4, d5, d6, d7};
    if (!assign_j && d4 && d5 && d6 && d7) assign_j = j;
    if (!b_j && d4 && d5 && d6) b_j = j;
    e.candidates.push_back(c);
  }
  std::optional<Nat> decisive;
  if (d1 && assign_j) {
    e.action = SimAction::Assign;
    decisive = assign_j;
    e.y = r.len(m, *assign_j);
  } else if (d1 && b_j) {
    e.action = SimAction::PutB;
    decisive = b_j;
  } else if (!e.candidates.empty()) {
    decisive = e.candidates.front().j;
  }
  e.d[0] = d1;
  if (decisive) {
    e.j = decisive;
    for (const auto& c : e.candidates)
      if (c.j == *decisive) std::copy(c.d.begin(), c.d.end(), e.d.begin() + 1);
    e.d[7] = assign_j == decisive;
  }
  return e;
}

nlohmann::json step_json(const LexTriple& s) { return {s.m, s.tau, s.i}; }

nlohmann::json bits(const std::array<bool, 8>& d) {
  nlohmann::json out = nlohmann::json::array();
  for (bool x : d) out.push_back(x ? 1 : 0);
  return out;
}

struct UnionFind {
  std::vector<Nat> up;
  explicit UnionFind(Nat n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  Nat find(Nat x) { return up[x] == x ? x : up[x] = find(up[x]); }
  bool unite(Nat a, Nat b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    up[a] = b;
    return true;
  }
};

}  // namespace

std::vector<VerificationReport> verify_trace(const ParsedTrace& parsed) {
  const SimTrace& trace = parsed.trace;
  const nlohmann::json scope{{"vertices", trace.config.vertices},
                             {"M", trace.config.factors},
                             {"T", trace.config.passes},
                             {"steps", trace.steps.size()}};
  std::vector<VerificationReport> out;
  auto report = [&](const std::string& name, std::optional<nlohmann::json> cx) {
    out.push_back({name, scope, !cx, std::move(cx)});
  };

  Replay r;
  try {
    r = load(trace.config);
  } catch (const ValidationError& e) {
    report("configuration", nlohmann::json{{"detail", e.what()}});
    return out;
  }
  report("configuration", std::nullopt);

  // Order and completeness.
  std::optional<nlohmann::json> order_cx;
  for (Nat k = 1; k < trace.steps.size() && !order_cx; ++k)
    if (!(trace.steps[k - 1].step < trace.steps[k].step))
      order_cx = nlohmann::json{{"step", step_json(trace.steps[k].step)}, {"detail", "not after the previous step"}};
  report("step order", order_cx);
  const Nat total = r.factors * r.passes * r.n;
  std::optional<nlohmann::json> complete_cx;
  if (!parsed.has_summary) complete_cx = nlohmann::json{{"detail", "summary line missing (truncated trace)"}};
  else if (parsed.summary_steps != trace.steps.size())
    complete_cx = nlohmann::json{{"detail", "summary step count differs from the steps present"}};
  else if (trace.steps.size() != total)
    complete_cx = nlohmann::json{{"detail", "expected " + std::to_string(total) + " steps"}};
  report("completeness", complete_cx);

  // Step-by-step re-evaluation.
  std::optional<nlohmann::json> d_cx, sigma_cx, c_cx;
  Nat expected_index = 0;
  for (const auto& s : trace.steps) {
    const LexTriple want{expected_index / (r.passes * r.n), expected_index / r.n % r.passes, expected_index % r.n};
    ++expected_index;
    if (s.step != want) {
      if (!d_cx) d_cx = nlohmann::json{{"step", step_json(s.step)}, {"detail", "expected step"}, {"expected", step_json(want)}};
      break;
    }
    Expected e = expect(r, s.step.m, s.step.tau, s.step.i);
    auto mismatch = [&](const char* field, const nlohmann::json& logged, const nlohmann::json& expected) {
      return nlohmann::json{{"step", step_json(s.step)}, {"field", field}, {"logged", logged}, {"expected", expected}};
    };
    if (s.sigma_before != e.sigma && !sigma_cx)
      sigma_cx = mismatch("sigma_before", sigma_str(s.sigma_before), sigma_str(e.sigma));
    if (!d_cx) {
      if (s.candidates != e.candidates) d_cx = mismatch("candidates", s.to_json()["candidates"], "recomputed differs");
      else if (s.d != e.d) d_cx = mismatch("d", s.to_json()["d"], bits(e.d));
      else if (s.action != e.action) d_cx = mismatch("action", to_string(s.action), to_string(e.action));
      else if (s.j != e.j || s.y != e.y) d_cx = mismatch("j/y", s.to_json()["j"], e.j ? nlohmann::json(*e.j) : nlohmann::json());
    }
    if (d_cx || sigma_cx) break;

    // Apply, checking C1-C3 for the new member.
    if (e.action != SimAction::Skip) {
      const Nat m = s.step.m, j = *e.j, i = s.step.i;
      if (!c_cx && !(i > j && r.edges.count({j, i})))
        c_cx = nlohmann::json{{"step", step_json(s.step)}, {"condition", "C1"}};
      if (!c_cx && r.placed(m, i)) c_cx = nlohmann::json{{"step", step_json(s.step)}, {"condition", "C2"}};
      for (Nat mp = 0; mp < r.factors && !c_cx; ++mp)
        if (mp != m && (r.in_a(mp, j, i) || r.in_b(mp, j, i)))
          c_cx = nlohmann::json{{"step", step_json(s.step)}, {"condition", "C3"}};
      if (e.action == SimAction::Assign) r.slots[{m, j}].push_back(i);
      else r.b[{m, j}].insert(i);
    }
    Sigma after = r.sigma(s.step.m);
    if (s.sigma_after != after && !sigma_cx) {
      sigma_cx = mismatch("sigma_after", sigma_str(s.sigma_after), sigma_str(after));
      break;
    }
  }
  report("D-vector re-evaluation", d_cx);
  report("sigma bookkeeping", sigma_cx);
  report("C1-C3 after every step", c_cx);

  std::optional<nlohmann::json> cycle_cx;
  for (Nat m = 0; m < r.factors && !cycle_cx; ++m) {
    UnionFind uf(r.n);
    std::vector<std::pair<Nat, Nat>> edges;
    for (const auto& [key, col] : r.slots)
      if (key.first == m)
        for (Nat i : col) edges.push_back({key.second, i});
    for (const auto& [key, set] : r.b)
      if (key.first == m)
        for (Nat i : set) edges.push_back({key.second, i});
    for (auto [j, i] : edges)
      if (!uf.unite(j, i)) {
        cycle_cx = nlohmann::json{{"factor", m}, {"edge", {j, i}}, {"condition", "acyclic"}};
        break;
      }
  }
  report("F_m acyclic", cycle_cx);
  return out;
}

}  // namespace forestfact
