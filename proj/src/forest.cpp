#include "forestfact/forest.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "forestfact/enumeration.hpp"

namespace forestfact {

using U128 = unsigned __int128;
using nlohmann::json;

namespace {

constexpr Nat kMaxFiniteMultiplicity = 100000;
constexpr Nat kMaxFiniteRepeat = 100000;

json count_to_json(Count c) { return c.is_omega() ? json("omega") : json(c.finite()); }

Count count_from_json(const json& j, const std::string& what) {
  if (j.is_string() && j.get<std::string>() == "omega") return Count::omega();
  if (j.is_number_unsigned()) return Count(j.get<Nat>());
  if (j.is_number_integer() && j.get<long long>() >= 0) return Count(static_cast<Nat>(j.get<long long>()));
  throw ValidationError(what + " must be a non-negative integer or \"omega\"");
}

}  // namespace

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::FiniteEdgeList: return "finite-edge-list";
    case ShapeKind::Path: return "path";
    case ShapeKind::Ray: return "ray";
    case ShapeKind::Star: return "star";
    case ShapeKind::RegularTree: return "regular-tree";
    case ShapeKind::CompleteBinaryTree: return "complete-binary-tree";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// ComponentShape

ComponentShape ComponentShape::path(Nat vertices) {
  ComponentShape s;
  s.kind_ = ShapeKind::Path;
  s.param_ = Count(vertices);
  return s;
}

ComponentShape ComponentShape::ray() {
  ComponentShape s;
  s.kind_ = ShapeKind::Ray;
  s.param_ = Count::omega();
  return s;
}

ComponentShape ComponentShape::star(Count leaves) {
  ComponentShape s;
  s.kind_ = ShapeKind::Star;
  s.param_ = leaves;
  return s;
}

ComponentShape ComponentShape::regular_tree(Count degree) {
  ComponentShape s;
  s.kind_ = ShapeKind::RegularTree;
  s.param_ = degree;
  return s;
}

ComponentShape ComponentShape::complete_binary_tree() {
  ComponentShape s;
  s.kind_ = ShapeKind::CompleteBinaryTree;
  s.param_ = Count(2);
  return s;
}

ComponentShape ComponentShape::finite_tree(const std::vector<std::pair<Nat, Nat>>& edges) {
  ComponentShape s;
  s.kind_ = ShapeKind::FiniteEdgeList;
  auto tree = std::make_shared<FiniteTree>();
  for (auto [a, b] : edges) tree->source_edges.emplace_back(std::min(a, b), std::max(a, b));
  std::sort(tree->source_edges.begin(), tree->source_edges.end());

  Nat n = 0;
  for (auto [a, b] : tree->source_edges) n = std::max(n, b + 1);
  s.param_ = Count(n);
  if (n == 0 || n > kMaxFiniteMultiplicity) {
    s.tree_ = std::move(tree);
    return s;
  }

  std::vector<std::vector<Nat>> adj(n);
  for (auto [a, b] : tree->source_edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());

  // Breadth-first relabeling from source vertex 0.
  std::vector<Nat> label(n, UINT64_MAX);
  std::vector<Nat> order;
  std::queue<Nat> queue;
  label[0] = 0;
  order.push_back(0);
  queue.push(0);
  tree->parent.push_back(0);
  tree->child_rank.push_back(0);
  tree->children.emplace_back();
  while (!queue.empty()) {
    Nat u = queue.front();
    queue.pop();
    for (Nat v : adj[u]) {
      if (label[v] != UINT64_MAX) continue;
      label[v] = order.size();
      order.push_back(v);
      tree->parent.push_back(label[u]);
      tree->child_rank.push_back(tree->children[label[u]].size());
      tree->children[label[u]].push_back(label[v]);
      tree->children.emplace_back();
      queue.push(v);
    }
  }
  s.tree_ = std::move(tree);
  return s;
}

std::optional<std::string> ComponentShape::defect() const {
  switch (kind_) {
    case ShapeKind::Path:
      if (param_.finite() == 0) return "yields an empty component";
      if (param_.finite() == 1) return "yields a single-vertex component (isolated vertex)";
      return std::nullopt;
    case ShapeKind::Star:
    case ShapeKind::RegularTree:
      if (param_ == Count(0)) return "yields a single-vertex component (isolated vertex)";
      return std::nullopt;
    case ShapeKind::FiniteEdgeList: {
      if (tree_->source_edges.empty()) return "yields a single-vertex component (isolated vertex)";
      Nat n = param_.finite();
      if (n > kMaxFiniteMultiplicity) return "has more vertices than the supported finite bound";
      for (auto [a, b] : tree_->source_edges)
        if (a == b) return "contains a self-loop";
      for (std::size_t e = 1; e < tree_->source_edges.size(); ++e)
        if (tree_->source_edges[e] == tree_->source_edges[e - 1]) return "contains a repeated edge (cycle)";
      if (tree_->children.size() != n) return "is disconnected (isolated or unreachable vertex labels)";
      if (tree_->source_edges.size() != n - 1) return "contains a cycle";
      return std::nullopt;
    }
    case ShapeKind::Ray:
    case ShapeKind::CompleteBinaryTree: return std::nullopt;
  }
  return std::nullopt;
}

void ComponentShape::require_sound() const {
  if (auto d = defect()) throw ValidationError("component " + to_json().dump() + " " + *d);
}

Count ComponentShape::order() const {
  switch (kind_) {
    case ShapeKind::Path: return param_;
    case ShapeKind::Ray:
    case ShapeKind::CompleteBinaryTree: return Count::omega();
    case ShapeKind::Star: return param_.is_omega() ? param_ : Count(param_.finite() + 1);
    case ShapeKind::RegularTree:
      if (param_.is_omega()) return param_;
      return param_.finite() <= 1 ? Count(param_.finite() + 1) : Count::omega();
    case ShapeKind::FiniteEdgeList: return Count(tree_->children.size());
  }
  return Count(0);
}

Count ComponentShape::child_count(Nat q) const {
  if (!contains(q)) throw RangeError("local vertex " + std::to_string(q) + " outside component");
  switch (kind_) {
    case ShapeKind::Path: return Count(q + 1 < param_.finite() ? 1 : 0);
    case ShapeKind::Ray: return Count(1);
    case ShapeKind::CompleteBinaryTree: return Count(2);
    case ShapeKind::Star: return q == 0 ? param_ : Count(0);
    case ShapeKind::RegularTree:
      if (param_.is_omega()) return param_;
      if (q == 0) return param_;
      return Count(param_.finite() - 1);
    case ShapeKind::FiniteEdgeList: return Count(tree_->children[q].size());
  }
  return Count(0);
}

Nat ComponentShape::child(Nat q, Nat k) const {
  if (!child_count(q).exceeds(k))
    throw RangeError("child " + std::to_string(k) + " of local vertex " + std::to_string(q) + " out of range");
  switch (kind_) {
    case ShapeKind::Path:
    case ShapeKind::Ray: return q + 1;
    case ShapeKind::CompleteBinaryTree: return checked::add(checked::mul(q, 2), 1 + k);
    case ShapeKind::Star: return checked::add(k, 1);
    case ShapeKind::RegularTree: {
      if (param_.is_omega()) return checked::add(pair(q, k), 1);
      Nat lambda = param_.finite();
      if (q == 0) return k + 1;
      return checked::add(checked::add(lambda + 1, checked::mul(q - 1, lambda - 1)), k);
    }
    case ShapeKind::FiniteEdgeList: return tree_->children[q][k];
  }
  return 0;
}

Nat ComponentShape::parent(Nat q) const {
  if (q == 0) throw RangeError("component root has no parent");
  if (!contains(q)) throw RangeError("local vertex " + std::to_string(q) + " outside component");
  switch (kind_) {
    case ShapeKind::Path:
    case ShapeKind::Ray: return q - 1;
    case ShapeKind::CompleteBinaryTree: return (q - 1) / 2;
    case ShapeKind::Star: return 0;
    case ShapeKind::RegularTree: {
      if (param_.is_omega()) return unpair(q - 1).first;
      Nat lambda = param_.finite();
      if (q <= lambda) return 0;
      return (q - lambda - 1) / (lambda - 1) + 1;
    }
    case ShapeKind::FiniteEdgeList: return tree_->parent[q];
  }
  return 0;
}

Nat ComponentShape::child_rank(Nat q) const {
  if (q == 0) throw RangeError("component root has no child rank");
  if (!contains(q)) throw RangeError("local vertex " + std::to_string(q) + " outside component");
  switch (kind_) {
    case ShapeKind::Path:
    case ShapeKind::Ray: return 0;
    case ShapeKind::CompleteBinaryTree: return (q - 1) % 2;
    case ShapeKind::Star: return q - 1;
    case ShapeKind::RegularTree: {
      if (param_.is_omega()) return unpair(q - 1).second;
      Nat lambda = param_.finite();
      if (q <= lambda) return q - 1;
      return (q - lambda - 1) % (lambda - 1);
    }
    case ShapeKind::FiniteEdgeList: return tree_->child_rank[q];
  }
  return 0;
}

Count ComponentShape::degree(Nat q) const {
  Count c = child_count(q);
  if (q == 0 || c.is_omega()) return c;
  return Count(c.finite() + 1);
}

json ComponentShape::to_json() const {
  json params = json::object();
  switch (kind_) {
    case ShapeKind::Path: params["vertices"] = param_.finite(); break;
    case ShapeKind::Star: params["leaves"] = count_to_json(param_); break;
    case ShapeKind::RegularTree: params["degree"] = count_to_json(param_); break;
    case ShapeKind::FiniteEdgeList: {
      json edges = json::array();
      for (auto [a, b] : tree_->source_edges) edges.push_back(json::array({a, b}));
      params["edges"] = std::move(edges);
      break;
    }
    case ShapeKind::Ray:
    case ShapeKind::CompleteBinaryTree: break;
  }
  return json{{"kind", to_string(kind_)}, {"params", std::move(params)}};
}

ComponentShape ComponentShape::from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ValidationError("component must be an object with a string \"kind\"");
  auto kind = j["kind"].get<std::string>();
  json params = j.value("params", json::object());
  if (!params.is_object()) throw ValidationError("component params must be an object");
  auto need = [&](const char* key) -> const json& {
    if (!params.contains(key)) throw ValidationError("component " + kind + " needs params." + key);
    return params[key];
  };
  if (kind == "path") {
    Count n = count_from_json(need("vertices"), "path vertices");
    if (n.is_omega()) throw ValidationError("path vertices must be finite; use kind \"ray\"");
    return path(n.finite());
  }
  if (kind == "ray") return ray();
  if (kind == "star") return star(count_from_json(need("leaves"), "star leaves"));
  if (kind == "regular-tree") return regular_tree(count_from_json(need("degree"), "regular-tree degree"));
  if (kind == "complete-binary-tree") return complete_binary_tree();
  if (kind == "finite-edge-list") {
    const json& e = need("edges");
    if (!e.is_array()) throw ValidationError("finite-edge-list edges must be an array");
    std::vector<std::pair<Nat, Nat>> edges;
    for (const auto& pair_j : e) {
      if (!pair_j.is_array() || pair_j.size() != 2) throw ValidationError("each edge must be a pair");
      Count a = count_from_json(pair_j[0], "edge endpoint");
      Count b = count_from_json(pair_j[1], "edge endpoint");
      if (a.is_omega() || b.is_omega()) throw ValidationError("edge endpoints must be finite");
      edges.emplace_back(a.finite(), b.finite());
    }
    return finite_tree(edges);
  }
  throw ValidationError("unknown component kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// FamilySpec

json FamilySpec::to_json() const {
  json factors_j = json::array();
  for (const auto& f : factors) {
    json comps = json::array();
    for (const auto& g : f.components) {
      json c = g.shape.to_json();
      c["multiplicity"] = count_to_json(g.multiplicity);
      comps.push_back(std::move(c));
    }
    factors_j.push_back(json{{"components", std::move(comps)}, {"repeat", count_to_json(f.repeat)}});
  }
  return json{{"factors", std::move(factors_j)}};
}

FamilySpec FamilySpec::from_json(const json& j) {
  if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array())
    throw ValidationError("spec must be an object with a \"factors\" array");
  FamilySpec spec;
  for (const auto& fj : j["factors"]) {
    if (!fj.is_object() || !fj.contains("components") || !fj["components"].is_array())
      throw ValidationError("each factor needs a \"components\" array");
    FactorSpec f;
    f.repeat = fj.contains("repeat") ? count_from_json(fj["repeat"], "repeat") : Count(1);
    for (const auto& cj : fj["components"]) {
      ComponentGenerator g{ComponentShape::from_json(cj), Count(1)};
      if (cj.contains("multiplicity")) g.multiplicity = count_from_json(cj["multiplicity"], "multiplicity");
      f.components.push_back(std::move(g));
    }
    spec.factors.push_back(std::move(f));
  }
  return spec;
}

ValidationReport validate(const FamilySpec& spec) {
  ValidationReport report;
  auto& v = report.violations;
  if (spec.factors.empty()) v.push_back("family has no factors");
  bool has_omega = false;
  Nat finite_factors = 0;
  for (std::size_t e = 0; e < spec.factors.size(); ++e) {
    const auto& f = spec.factors[e];
    const std::string name = "factor " + std::to_string(e);
    if (f.repeat.is_omega()) {
      has_omega = true;
    } else {
      if (f.repeat.finite() == 0) v.push_back(name + " has repeat 0");
      finite_factors += f.repeat.finite();
    }
    bool omega_components = false;
    Nat finite_components = 0;
    for (std::size_t g = 0; g < f.components.size(); ++g) {
      const auto& gen = f.components[g];
      const std::string gname = name + " generator " + std::to_string(g);
      if (auto d = gen.shape.defect()) v.push_back(gname + " " + *d);
      if (gen.multiplicity.is_omega()) {
        omega_components = true;
      } else if (gen.multiplicity.finite() == 0) {
        v.push_back(gname + " has multiplicity 0");
      } else {
        finite_components += gen.multiplicity.finite();
      }
    }
    if (!omega_components)
      v.push_back(name + " has finite component count (" + std::to_string(finite_components) + ")");
    else if (finite_components > kMaxFiniteMultiplicity)
      v.push_back(name + " has more finitely-listed components than the supported bound");
  }
  if (!spec.factors.empty() && !has_omega)
    v.push_back("family has finite factor count (" + std::to_string(finite_factors) + ")");
  if (finite_factors > kMaxFiniteRepeat) v.push_back("family repeats more factors than the supported bound");
  return report;
}

FamilySpec lambda_family(Count lambda) {
  if (lambda == Count(0)) throw ValidationError("lambda must be non-zero");
  FactorSpec f;
  f.components.push_back({ComponentShape::regular_tree(lambda), Count::omega()});
  f.repeat = Count::omega();
  return FamilySpec{{std::move(f)}};
}

namespace {

FactorSpec factor_of(std::vector<ComponentGenerator> comps, Count repeat) {
  return FactorSpec{std::move(comps), repeat};
}

}  // namespace

std::vector<std::string> builtin_family_names() {
  return {"k2-family", "lambda:<n>", "lambda:omega", "omega-regular", "star-mix", "mixed-trees", "mixed-infinite"};
}

std::optional<FamilySpec> builtin_family(const std::string& name) {
  const Count w = Count::omega();
  if (name == "k2-family") return lambda_family(Count(1));
  if (name == "omega-regular" || name == "lambda:omega") return lambda_family(w);
  if (name.starts_with("lambda:")) {
    auto digits = name.substr(7);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 9) return std::nullopt;
    Nat lambda = std::stoull(digits);
    if (lambda == 0) return std::nullopt;
    return lambda_family(Count(lambda));
  }
  if (name == "star-mix") {
    FamilySpec s;
    s.factors.push_back(factor_of({{ComponentShape::star(w), w}}, w));
    s.factors.push_back(factor_of({{ComponentShape::star(Count(2)), Count(3)},
                                   {ComponentShape::star(Count(5)), w},
                                   {ComponentShape::star(w), w}},
                                  w));
    return s;
  }
  if (name == "mixed-trees") {
    FamilySpec s;
    const std::vector<std::pair<Nat, Nat>> spider{{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}};
    const std::vector<std::pair<Nat, Nat>> chair{{0, 1}, {0, 2}, {2, 3}};
    s.factors.push_back(factor_of({{ComponentShape::path(2), Count(1)},
                                   {ComponentShape::path(4), w},
                                   {ComponentShape::finite_tree(spider), w},
                                   {ComponentShape::star(Count(3)), w}},
                                  w));
    s.factors.push_back(factor_of({{ComponentShape::finite_tree(chair), Count(2)},
                                   {ComponentShape::path(3), w},
                                   {ComponentShape::regular_tree(Count(1)), w}},
                                  w));
    return s;
  }
  if (name == "mixed-infinite") {
    FamilySpec s;
    s.factors.push_back(factor_of({{ComponentShape::regular_tree(Count(2)), Count(1)},
                                   {ComponentShape::star(w), w},
                                   {ComponentShape::path(5), w}},
                                  Count(2)));
    s.factors.push_back(factor_of({{ComponentShape::ray(), w}, {ComponentShape::complete_binary_tree(), w}}, w));
    s.factors.push_back(factor_of({{ComponentShape::regular_tree(Count(3)), w}, {ComponentShape::star(Count(1)), w}}, w));
    return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Forest

Forest::Forest(std::vector<Slot> prefix, std::vector<Slot> cycle) : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw ValidationError("forest needs infinitely many components");
  for (const auto& s : prefix_) s.shape->require_sound();
  for (const auto& s : cycle_) s.shape->require_sound();
  std::optional<Count> uniform;
  bool ok = true;
  auto visit = [&](const Slot& s) {
    Count c = s.shape->child_count(0);
    if (!uniform) uniform = c;
    else if (!(*uniform == c)) ok = false;
  };
  for (std::size_t p = 1; p < prefix_.size(); ++p) visit(prefix_[p]);
  for (const auto& s : cycle_) visit(s);
  if (ok) uniform_root_children_ = uniform;
}

Forest Forest::from_factor(const FactorSpec& spec) {
  std::vector<Slot> prefix, cycle;
  for (std::size_t g = 0; g < spec.components.size(); ++g) {
    const auto& gen = spec.components[g];
    auto shape = std::make_shared<const ComponentShape>(gen.shape);
    if (gen.multiplicity.is_omega()) {
      cycle.push_back({shape, g});
    } else {
      if (gen.multiplicity.finite() > kMaxFiniteMultiplicity) throw ValidationError("finite multiplicity too large");
      for (Nat c = 0; c < gen.multiplicity.finite(); ++c) prefix.push_back({shape, g});
    }
  }
  return Forest(std::move(prefix), std::move(cycle));
}

const Forest::Slot& Forest::slot(Nat position) const {
  if (position < prefix_.size()) return prefix_[position];
  return cycle_[(position - prefix_.size()) % cycle_.size()];
}

const ComponentShape& Forest::shape_at(Nat position) const { return *slot(position).shape; }
Nat Forest::generator_at(Nat position) const { return slot(position).generator; }

U128 Forest::count_before_diagonal(Nat s) const {
  U128 total = 0;
  const Nat prefix_len = prefix_.size();
  for (Nat p = 0; p < prefix_len && p < s; ++p) {
    Count c = prefix_[p].shape->order();
    Nat room = s - p;
    total += c.exceeds(room) ? room : c.finite();
  }
  const U128 period = cycle_.size();
  for (Nat r = 0; r < cycle_.size(); ++r) {
    U128 first = static_cast<U128>(prefix_len) + r;
    if (first >= s) continue;
    U128 room = s - first;
    U128 n = (room - 1) / period + 1;
    U128 tri = n * (n - 1) / 2;
    Count c = cycle_[r].shape->order();
    if (c.is_omega()) {
      total += n * room - period * tri;
    } else {
      U128 size = c.finite();
      U128 full = room >= size ? std::min(n, (room - size) / period + 1) : 0;
      U128 full_tri = full == 0 ? 0 : full * (full - 1) / 2;
      total += full * size + (n - full) * room - period * (tri - full_tri);
    }
  }
  return total;
}

U128 Forest::count_on_diagonal_below(Nat s, Nat x) const {
  if (x == 0) return 0;
  const Nat lo = s - (x - 1);
  U128 total = 0;
  const Nat prefix_len = prefix_.size();
  for (Nat p = lo; p < prefix_len && p <= s; ++p)
    if (prefix_[p].shape->order().exceeds(s - p)) ++total;
  const Nat period = cycle_.size();
  for (Nat r = 0; r < period; ++r) {
    U128 first = static_cast<U128>(prefix_len) + r;
    if (first > s) continue;
    U128 lower = lo;
    Count c = cycle_[r].shape->order();
    if (c.is_finite() && c.finite() <= s) lower = std::max<U128>(lower, s - c.finite() + 1);
    U128 u_max = (s - first) / period;
    U128 u_min = lower <= first ? 0 : (lower - first + period - 1) / period;
    if (u_max >= u_min) total += u_max - u_min + 1;
  }
  return total;
}

Nat Forest::index_of(LocalVertex v) const {
  if (!order_at(v.position).exceeds(v.local))
    throw RangeError("local vertex " + std::to_string(v.local) + " outside component " + std::to_string(v.position));
  Nat s = checked::add(v.position, v.local);
  return checked::narrow(count_before_diagonal(s) + count_on_diagonal_below(s, v.local));
}

LocalVertex Forest::locate(Nat index) const {
  // Every diagonal holds at least (s, 0), so the diagonal of `index` is <= index.
  Nat lo = 0, hi = index;
  while (lo < hi) {
    Nat mid = lo + (hi - lo + 1) / 2;
    if (count_before_diagonal(mid) <= index) lo = mid;
    else hi = mid - 1;
  }
  const Nat s = lo;
  const U128 offset = index - count_before_diagonal(s);
  Nat a = 1, b = s + 1;
  while (a < b) {
    Nat mid = a + (b - a) / 2;
    if (count_on_diagonal_below(s, mid) > offset) b = mid;
    else a = mid + 1;
  }
  Nat local = a - 1;
  return {s - local, local};
}

Count Forest::degree(Nat index) const {
  auto v = locate(index);
  return shape_at(v.position).degree(v.local);
}

Nat Forest::kth_neighbor(Nat index, Nat k) const {
  auto v = locate(index);
  const auto& shape = shape_at(v.position);
  if (!shape.degree(v.local).exceeds(k))
    throw RangeError("neighbor " + std::to_string(k) + " of vertex " + std::to_string(index) + " out of range");
  if (v.local > 0) {
    if (k == 0) return index_of({v.position, shape.parent(v.local)});
    return index_of({v.position, shape.child(v.local, k - 1)});
  }
  return index_of({v.position, shape.child(v.local, k)});
}

bool Forest::adjacent(Nat a, Nat b) const {
  if (a == b) return false;
  auto va = locate(a), vb = locate(b);
  if (va.position != vb.position) return false;
  if (va.local > vb.local) std::swap(va, vb);
  return shape_at(vb.position).parent(vb.local) == va.local;
}

ComponentRef Forest::pool_of(Nat position) {
  if (position == 0) return {0, 0, 0};
  auto [a, b] = unpair(position - 1);
  return {0, a + 1, b};
}

Nat Forest::position_of(Nat d, Nat r) {
  if (d == 0) {
    if (r != 0) throw RangeError("pool 0 holds a single component");
    return 0;
  }
  return checked::add(pair(d - 1, r), 1);
}

Forest part_forest(const Forest& base, Nat part) {
  const Nat prefix_len = base.prefix_length();
  const Nat period = checked::mul(2, base.cycle_length());
  std::vector<Forest::Slot> prefix, cycle;
  for (Nat p = 0; p < prefix_len; ++p) prefix.push_back(base.slot(pair(part, p)));
  for (Nat t = 0; t < period; ++t) cycle.push_back(base.slot(pair(part, prefix_len + t)));
  return Forest(std::move(prefix), std::move(cycle));
}

// ---------------------------------------------------------------------------
// Family

Count Family::vertex_count(Nat m) const {
  factor(m);
  return Count::omega();
}

ComponentRef Family::component_of(Nat m, Nat i) const {
  auto ref = Forest::pool_of(factor(m).locate(i).position);
  ref.m = m;
  return ref;
}

Nat Family::root_of(const ComponentRef& c) const {
  return factor(c.m).index_of({Forest::position_of(c.d, c.r), 0});
}

ComponentRef Family::pool_component(Nat m, Nat d, Nat r) const {
  Forest::position_of(d, r);
  factor(m);
  return {m, d, r};
}

SpecFamily::SpecFamily(FamilySpec spec) : spec_(std::move(spec)) {
  auto report = validate(spec_);
  if (!report.ok()) {
    std::string msg = "invalid family:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw ValidationError(msg);
  }
  for (std::size_t e = 0; e < spec_.factors.size(); ++e) {
    const auto& f = spec_.factors[e];
    forests_.push_back(Forest::from_factor(f));
    if (f.repeat.is_omega()) omega_entries_.push_back(e);
    else
      for (Nat r = 0; r < f.repeat.finite(); ++r) finite_entries_.push_back(e);
  }
}

Nat SpecFamily::entry_of(Nat m) const {
  if (m < finite_entries_.size()) return finite_entries_[m];
  return omega_entries_[(m - finite_entries_.size()) % omega_entries_.size()];
}

const Forest& SpecFamily::factor(Nat m) const { return forests_[entry_of(m)]; }

}  // namespace forestfact
