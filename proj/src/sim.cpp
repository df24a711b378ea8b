#include "forestfact/sim.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace forestfact {

namespace {

nlohmann::json sigma_json(const Sigma& s) { return s ? nlohmann::json(*s) : nlohmann::json("exhausted"); }

Sigma sigma_from(const nlohmann::json& j) {
  if (j.is_string() && j == "exhausted") return std::nullopt;
  if (!j.is_number_unsigned()) throw ValidationError("sigma must be a natural or \"exhausted\"");
  return j.get<Nat>();
}

Nat nat_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) throw ValidationError(std::string("expected natural field '") + key + "'");
  return j[key].get<Nat>();
}

}  // namespace

std::string sigma_str(const Sigma& s) { return s ? std::to_string(*s) : "exhausted"; }

// ---------------------------------------------------------------------------
// Config

nlohmann::json SimConfig::to_json() const {
  nlohmann::json j;
  j["vertices"] = vertices;
  j["edges"] = nlohmann::json::array();
  for (auto [a, b] : edges) j["edges"].push_back({a, b});
  j["parent"] = nlohmann::json::array();
  for (const auto& p : parent) j["parent"].push_back(p ? nlohmann::json(*p) : nlohmann::json());
  if (x_classes) {
    j["x_partition"] = nlohmann::json::array();
    for (const auto& c : *x_classes) j["x_partition"].push_back(c ? nlohmann::json{c->first, c->second} : nlohmann::json());
  } else {
    j["x_partition"] = "auto";
  }
  j["M"] = factors;
  j["T"] = passes;
  if (enumeration) j["enumeration"] = *enumeration;
  return j;
}

SimConfig SimConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  SimConfig c;
  try {
    c.vertices = nat_field(j, "vertices");
    c.factors = nat_field(j, "M");
    c.passes = nat_field(j, "T");
    for (const auto& e : j.at("edges")) c.edges.emplace_back(e.at(0).get<Nat>(), e.at(1).get<Nat>());
    for (const auto& p : j.at("parent")) c.parent.push_back(p.is_null() ? std::nullopt : std::optional<Nat>(p.get<Nat>()));
    const auto& x = j.contains("x_partition") ? j["x_partition"] : nlohmann::json("auto");
    if (x.is_string()) {
      if (x != "auto") throw ValidationError("x_partition must be \"auto\" or a list");
    } else {
      c.x_classes.emplace();
      for (const auto& e : x)
        c.x_classes->push_back(e.is_null() ? std::nullopt
                                           : std::optional<std::pair<Nat, Nat>>({e.at(0).get<Nat>(), e.at(1).get<Nat>()}));
    }
    if (j.contains("enumeration")) c.enumeration = j["enumeration"].get<std::vector<Nat>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  return c;
}

bool SimInstance::adjacent(Nat a, Nat b) const {
  const auto& row = neighbors[a];
  return std::binary_search(row.begin(), row.end(), b);
}

SimInstance prepare(const SimConfig& c) {
  const Nat n = c.vertices;
  if (n == 0) throw ValidationError("config has no vertices");
  if (c.factors == 0 || c.passes == 0) throw ValidationError("M and T must be positive");
  // host id -> scheduling index
  std::vector<Nat> index(n), host(n);
  std::iota(host.begin(), host.end(), 0);
  if (c.enumeration) {
    if (c.enumeration->size() != n) throw ValidationError("enumeration must list every vertex once");
    host = *c.enumeration;
    std::vector<bool> seen(n);
    for (Nat h : host) {
      if (h >= n || seen[h]) throw ValidationError("enumeration must list every vertex once");
      seen[h] = true;
    }
  }
  for (Nat i = 0; i < n; ++i) index[host[i]] = i;

  SimInstance inst;
  inst.n = n;
  inst.factors = c.factors;
  inst.passes = c.passes;
  inst.host_id = host;
  inst.neighbors.assign(n, {});
  std::set<std::pair<Nat, Nat>> edge_set;
  for (auto [a, b] : c.edges) {
    if (a >= n || b >= n) throw ValidationError("edge endpoint out of range");
    if (a == b) throw ValidationError("self-loop at vertex " + std::to_string(a));
    Nat x = index[a], y = index[b];
    if (!edge_set.insert(std::minmax(x, y)).second) throw ValidationError("duplicate edge");
    inst.neighbors[x].push_back(y);
    inst.neighbors[y].push_back(x);
  }
  for (auto& row : inst.neighbors) std::sort(row.begin(), row.end());

  if (c.parent.size() != n) throw ValidationError("parent map must have one entry per vertex");
  inst.parent.assign(n, 0);
  for (Nat h = 0; h < n; ++h) {
    Nat i = index[h];
    if (i == 0) {
      if (c.parent[h]) throw ValidationError("v_0 must be the root");
      continue;
    }
    if (!c.parent[h]) throw ValidationError("vertex " + std::to_string(h) + " has no parent but is not v_0");
    if (*c.parent[h] >= n) throw ValidationError("parent out of range");
    Nat p = index[*c.parent[h]];
    if (p >= i)
      throw ValidationError("enumeration order violated: vertex " + std::to_string(h) + " precedes its parent");
    if (!inst.adjacent(i, p)) throw ValidationError("tree edge " + std::to_string(h) + " is not a host edge");
    inst.parent[i] = p;
  }

  inst.x_class.assign(n, {0, 0});
  if (c.x_classes) {
    if (c.x_classes->size() != n) throw ValidationError("x_partition must have one entry per vertex");
    for (Nat h = 0; h < n; ++h) {
      Nat i = index[h];
      const auto& cls = (*c.x_classes)[h];
      if (i == 0) continue;
      if (!cls) throw ValidationError("x_partition incomplete: vertex " + std::to_string(h) + " has no class");
      inst.x_class[i] = *cls;
    }
  } else {
    std::vector<Nat> son_rank(n, 0);
    for (Nat i = 1; i < n; ++i) {
      XClass x = x_partition_decode(son_rank[inst.parent[i]]++);
      inst.x_class[i] = {x.m, x.t};
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Tables

SlotTable::SlotTable(Nat n, Nat factors)
    : n_(n),
      columns_(factors, std::vector<std::vector<Nat>>(n)),
      b_(factors, std::vector<std::set<Nat>>(n)),
      a_of_(factors, std::vector<std::optional<Nat>>(n)),
      b_of_(factors, std::vector<std::optional<Nat>>(n)) {}

Nat SlotTable::assign(Nat m, Nat j, Nat i) {
  columns_[m][j].push_back(i);
  a_of_[m][i] = j;
  return columns_[m][j].size() - 1;
}

void SlotTable::put_b(Nat m, Nat j, Nat i) {
  b_[m][j].insert(i);
  b_of_[m][i] = j;
}

std::vector<Nat> SlotTable::c_set(Nat m, Nat j) const {
  std::vector<Nat> out(columns_[m][j].begin(), columns_[m][j].end());
  out.insert(out.end(), b_[m][j].begin(), b_[m][j].end());
  std::sort(out.begin(), out.end());
  return out;
}

Sigma sigma(const SlotTable& t, Nat m) {
  // Least s such that some column j <= s has fewer than s + 1 slots.
  Nat best = t.n();
  bool any = false;
  for (Nat j = 0; j < t.n(); ++j) {
    any = any || !t.column(m, j).empty();
    best = std::min(best, std::max<Nat>(j, t.column(m, j).size()));
  }
  if (!any) return 0;
  if (best >= t.n()) return std::nullopt;
  return best;
}

std::string to_string(SimAction a) {
  switch (a) {
    case SimAction::Assign: return "assign";
    case SimAction::PutB: return "put-in-B";
    case SimAction::Skip: return "skip";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Run

namespace {

StepRecord evaluate(const SimInstance& inst, const SlotTable& t, Nat m, Nat tau, Nat i) {
  StepRecord r;
  r.step = {m, tau, i};
  r.sigma_before = sigma(t, m);
  const bool d1 = !t.placed(m, i);
  const std::pair<Nat, Nat> now{m, tau};
  for (Nat j : inst.neighbors[i]) {
    if (j >= i) break;
    Candidate c{j, t.column(m, j).size(), {}};
    bool d4 = true, d5 = true;
    for (Nat mp = 0; mp < m; ++mp) {
      d4 = d4 && t.a_owner(mp, i) != j;
      d5 = d5 && t.b_owner(mp, i) != j;
    }
    const auto cls = inst.x_class[i];
    const bool d6 = !(inst.parent[i] == j && cls > now) && !(cls == now && inst.parent[i] != j);
    const bool d7 = !r.sigma_before || (j <= *r.sigma_before && c.y <= *r.sigma_before);
    c.d = {true, true, d4, d5, d6, d7};
    r.candidates.push_back(c);
  }
  auto all_d2_d7 = [](const Candidate& c) { return std::all_of(c.d.begin(), c.d.end(), [](bool b) { return b; }); };
  auto b_ok = [](const Candidate& c) { return c.d[0] && c.d[2] && c.d[3] && c.d[4]; };
  auto least = std::find_if(r.candidates.begin(), r.candidates.end(), all_d2_d7);
  auto least_b = std::find_if(r.candidates.begin(), r.candidates.end(), b_ok);

  const Candidate* decisive = nullptr;
  if (d1 && least != r.candidates.end()) {
    r.action = SimAction::Assign;
    decisive = &*least;
    r.y = least->y;
  } else if (d1 && least_b != r.candidates.end()) {
    r.action = SimAction::PutB;
    decisive = &*least_b;
  } else if (!r.candidates.empty()) {
    decisive = &r.candidates.front();
  }
  r.d[0] = d1;
  if (decisive) {
    r.j = decisive->j;
    std::copy(decisive->d.begin(), decisive->d.end(), r.d.begin() + 1);
    r.d[7] = least != r.candidates.end() && least->j == decisive->j;
  }
  return r;
}

void apply(SlotTable& t, const StepRecord& r) {
  if (r.action == SimAction::Assign) {
    Nat y = t.assign(r.step.m, *r.j, r.step.i);
    if (r.y != y) throw ValidationError("step assigns slot " + std::to_string(*r.y) + " but column has " + std::to_string(y));
  } else if (r.action == SimAction::PutB) {
    t.put_b(r.step.m, *r.j, r.step.i);
  }
}

}  // namespace

SimTrace run(const SimConfig& config) {
  const SimInstance inst = prepare(config);
  SimTrace trace{config, {}};
  SlotTable t(inst.n, inst.factors);
  trace.steps.reserve(inst.factors * inst.passes * inst.n);
  for (Nat m = 0; m < inst.factors; ++m)
    for (Nat tau = 0; tau < inst.passes; ++tau)
      for (Nat i = 0; i < inst.n; ++i) {
        StepRecord r = evaluate(inst, t, m, tau, i);
        apply(t, r);
        r.sigma_after = sigma(t, m);
        trace.steps.push_back(std::move(r));
      }
  return trace;
}

SlotTable tables_of(const SimInstance& inst, const SimTrace& trace) {
  SlotTable t(inst.n, inst.factors);
  for (const auto& r : trace.steps) {
    if (r.step.m >= inst.factors || r.step.i >= inst.n) throw ValidationError("step out of range");
    if (r.action != SimAction::Skip && (!r.j || *r.j >= inst.n)) throw ValidationError("step without a column");
    apply(t, r);
  }
  return t;
}

std::vector<std::vector<std::pair<Nat, Nat>>> build_factors(const SimTrace& trace) {
  const SimInstance inst = prepare(trace.config);
  const SlotTable t = tables_of(inst, trace);
  std::vector<std::vector<std::pair<Nat, Nat>>> out(inst.factors);
  for (Nat m = 0; m < inst.factors; ++m)
    for (Nat j = 0; j < inst.n; ++j)
      for (Nat i : t.c_set(m, j)) out[m].push_back({j, i});
  return out;
}

nlohmann::json CReport::to_json() const {
  return {{"C1", c1},
          {"C2", c2},
          {"C3", c3},
          {"C4", {{"min", c4_min}, {"max", c4_max}}},
          {"C5_coverage", c5_coverage},
          {"D1_failures", d1_failures},
          {"violations", violations}};
}

CReport check_C(const SimTrace& trace) {
  const SimInstance inst = prepare(trace.config);
  const SlotTable t = tables_of(inst, trace);
  CReport rep;
  rep.c4_min = UINT64_MAX;
  std::vector<std::vector<Nat>> owners(inst.factors, std::vector<Nat>(inst.n, 0));
  for (Nat m = 0; m < inst.factors; ++m)
    for (Nat j = 0; j < inst.n; ++j) {
      auto c = t.c_set(m, j);
      rep.c4_min = std::min<Nat>(rep.c4_min, c.size());
      rep.c4_max = std::max<Nat>(rep.c4_max, c.size());
      for (Nat i : c) {
        if (!(i > j && inst.adjacent(i, j))) {
          rep.c1 = false;
          rep.violations.push_back("C1: v" + std::to_string(i) + " in C_" + std::to_string(j) + "^" + std::to_string(m));
        }
        if (++owners[m][i] > 1) {
          rep.c2 = false;
          rep.violations.push_back("C2: v" + std::to_string(i) + " in two sets of factor " + std::to_string(m));
        }
      }
    }
  for (Nat j = 0; j < inst.n; ++j) {
    std::set<Nat> seen;
    for (Nat m = 0; m < inst.factors; ++m)
      for (Nat i : t.c_set(m, j))
        if (!seen.insert(i).second) {
          rep.c3 = false;
          rep.violations.push_back("C3: v" + std::to_string(i) + " in C_" + std::to_string(j) + " of two factors");
        }
  }
  Nat edges = 0, covered = 0;
  for (Nat i = 0; i < inst.n; ++i)
    for (Nat j : inst.neighbors[i]) {
      if (j >= i) break;
      ++edges;
      for (Nat m = 0; m < inst.factors; ++m)
        if (t.a_owner(m, i) == j || t.b_owner(m, i) == j) {
          ++covered;
          break;
        }
    }
  rep.c5_coverage = edges ? static_cast<double>(covered) / static_cast<double>(edges) : 1.0;
  for (const auto& r : trace.steps) rep.d1_failures += r.d[0] ? 0 : 1;
  return rep;
}

std::vector<SigmaProgress> sigma_progress(const SimTrace& trace) {
  const SimInstance inst = prepare(trace.config);
  const Nat n = inst.n;
  std::vector<SigmaProgress> out;
  SlotTable t(n, inst.factors);
  std::size_t pos = 0;
  for (Nat m = 0; m < inst.factors; ++m) {
    SigmaProgress p;
    p.m = m;
    for (Nat tau = 0; tau < inst.passes; ++tau) {
      const Sigma s = sigma(t, m);
      p.at_pass_start.push_back(s);
      bool adequate = true;
      if (s) {
        for (Nat j = 0; j <= *s && j < n; ++j) {
          Nat have_len = t.column(m, j).size();
          if (have_len > *s) continue;
          Nat need = *s + 1 - have_len, have = 0;
          for (Nat v = j + 1; v < n; ++v) {
            if (inst.parent[v] != j || inst.x_class[v] != std::pair<Nat, Nat>{m, tau} || t.placed(m, v)) continue;
            bool blocked = false;
            for (Nat mp = 0; mp < m; ++mp) blocked = blocked || t.a_owner(mp, v) == j || t.b_owner(mp, v) == j;
            if (!blocked) ++have;
          }
          adequate = adequate && have >= need;
        }
      }
      p.adequate.push_back(adequate);
      for (Nat i = 0; i < n && pos < trace.steps.size(); ++i) apply(t, trace.steps[pos++]);
    }
    p.after_last_pass = sigma(t, m);
    for (Nat tau = 0; tau < inst.passes; ++tau) {
      const Sigma s = p.at_pass_start[tau];
      if (!s || !p.adequate[tau]) continue;
      const Sigma next = tau + 1 < inst.passes ? p.at_pass_start[tau + 1] : p.after_last_pass;
      if (next && *next <= *s) p.increasing = false;
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trace files

nlohmann::json StepRecord::to_json() const {
  auto bits = [](auto const& a) {
    nlohmann::json out = nlohmann::json::array();
    for (bool b : a) out.push_back(b ? 1 : 0);
    return out;
  };
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : candidates) cands.push_back({{"j", c.j}, {"y", c.y}, {"d", bits(c.d)}});
  return {{"type", "step"},
          {"m", step.m},
          {"tau", step.tau},
          {"i", step.i},
          {"sigma_before", sigma_json(sigma_before)},
          {"sigma_after", sigma_json(sigma_after)},
          {"action", forestfact::to_string(action)},
          {"j", j ? nlohmann::json(*j) : nlohmann::json()},
          {"y", y ? nlohmann::json(*y) : nlohmann::json()},
          {"d", bits(d)},
          {"candidates", cands}};
}

StepRecord StepRecord::from_json(const nlohmann::json& j) {
  StepRecord r;
  try {
    r.step = {j.at("m").get<Nat>(), j.at("tau").get<Nat>(), j.at("i").get<Nat>()};
    r.sigma_before = sigma_from(j.at("sigma_before"));
    r.sigma_after = sigma_from(j.at("sigma_after"));
    const auto action = j.at("action").get<std::string>();
    if (action == "assign") r.action = SimAction::Assign;
    else if (action == "put-in-B") r.action = SimAction::PutB;
    else if (action == "skip") r.action = SimAction::Skip;
    else throw ValidationError("unknown action " + action);
    if (!j.at("j").is_null()) r.j = j["j"].get<Nat>();
    if (!j.at("y").is_null()) r.y = j["y"].get<Nat>();
    const auto& d = j.at("d");
    if (d.size() != 8) throw ValidationError("D-vector must have 8 entries");
    for (Nat k = 0; k < 8; ++k) r.d[k] = d[k].get<int>() != 0;
    for (const auto& c : j.at("candidates")) {
      Candidate cand{c.at("j").get<Nat>(), c.at("y").get<Nat>(), {}};
      if (c.at("d").size() != 6) throw ValidationError("candidate D-vector must have 6 entries");
      for (Nat k = 0; k < 6; ++k) cand.d[k] = c["d"][k].get<int>() != 0;
      r.candidates.push_back(cand);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed step: ") + e.what());
  }
  return r;
}

std::string export_trace(const SimTrace& trace) {
  std::ostringstream out;
  out << nlohmann::json{{"type", "header"}, {"config", trace.config.to_json()}}.dump() << "\n";
  for (const auto& r : trace.steps) out << r.to_json().dump() << "\n";
  out << nlohmann::json{{"type", "summary"}, {"steps", trace.steps.size()}}.dump() << "\n";
  return out.str();
}

ParsedTrace parse_trace(const std::string& text) {
  ParsedTrace out;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  Nat lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw ValidationError("line " + std::to_string(lineno) + " is not JSON");
    }
    const auto type = j.value("type", std::string());
    if (!header) {
      if (type != "header") throw ValidationError("trace must start with a header line");
      out.trace.config = SimConfig::from_json(j.at("config"));
      header = true;
    } else if (type == "step") {
      if (out.has_summary) throw ValidationError("step after summary at line " + std::to_string(lineno));
      out.trace.steps.push_back(StepRecord::from_json(j));
    } else if (type == "summary") {
      out.has_summary = true;
      if (j.contains("steps") && j["steps"].is_number_unsigned()) out.summary_steps = j["steps"].get<Nat>();
    } else {
      throw ValidationError("unknown line type at line " + std::to_string(lineno));
    }
  }
  if (!header) throw ValidationError("empty trace");
  return out;
}

std::string export_factors_dot(const SimTrace& trace) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
  const SimInstance inst = prepare(trace.config);
  auto factors = build_factors(trace);
  std::ostringstream out;
  out << "graph factors {\n";
  for (Nat i = 0; i < inst.n; ++i) out << "  v" << i << " [label=\"" << inst.host_id[i] << "\"];\n";
  for (Nat m = 0; m < factors.size(); ++m)
    for (auto [j, i] : factors[m])
      out << "  v" << j << " -- v" << i << " [factor=" << m << ", color=\"" << palette[m % 6] << "\"];\n";
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Instances

SimConfig fuzz_config(std::mt19937_64& rng, Nat max_vertices, Nat max_factors, Nat max_passes) {
  auto uniform = [&](Nat lo, Nat hi) { return std::uniform_int_distribution<Nat>(lo, hi)(rng); };
  const Nat n = uniform(2, max_vertices);
  SimConfig c;
  c.vertices = n;
  c.factors = uniform(1, max_factors);
  c.passes = uniform(1, max_passes);
  // Built in scheduling order, then relabeled by a random permutation.
  std::vector<Nat> parent(n, 0);
  std::set<std::pair<Nat, Nat>> edges;
  for (Nat i = 1; i < n; ++i) {
    parent[i] = uniform(0, i - 1);
    edges.insert({parent[i], i});
  }
  for (Nat extra = uniform(0, n / 3); extra > 0; --extra) {
    Nat a = uniform(0, n - 1), b = uniform(0, n - 1);
    if (a != b) edges.insert(std::minmax(a, b));
  }
  std::vector<Nat> host(n);
  std::iota(host.begin(), host.end(), 0);
  if (uniform(0, 2) == 0) {
    std::shuffle(host.begin(), host.end(), rng);
    c.enumeration = host;
  }
  for (auto [a, b] : edges) c.edges.push_back({host[a], host[b]});
  c.parent.assign(n, std::nullopt);
  for (Nat i = 1; i < n; ++i) c.parent[host[i]] = host[parent[i]];
  if (uniform(0, 1) == 0) {
    c.x_classes.emplace(n);
    for (Nat i = 1; i < n; ++i) (*c.x_classes)[host[i]] = std::pair<Nat, Nat>{uniform(0, c.factors), uniform(0, c.passes)};
  }
  return c;
}

SimConfig adequate_config(Nat hubs, Nat factors, Nat passes) {
  SimConfig c;
  c.factors = factors;
  c.passes = passes;
  c.x_classes.emplace();
  auto add = [&](std::optional<Nat> parent, std::pair<Nat, Nat> cls) {
    Nat v = c.vertices++;
    c.parent.push_back(parent);
    c.x_classes->push_back(parent ? std::optional(cls) : std::nullopt);
    if (parent) c.edges.push_back({*parent, v});
  };
  add(std::nullopt, {0, 0});
  for (Nat h = 1; h < hubs; ++h) add(h - 1, {0, 0});
  for (Nat j = 0; j < hubs; ++j)
    for (Nat m = 0; m < factors; ++m)
      for (Nat t = 0; t < passes; ++t)
        for (Nat k = 0; k < t + 2; ++k) add(j, {m, t});
  return c;
}

}  // namespace forestfact
