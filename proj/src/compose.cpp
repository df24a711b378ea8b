#include "forestfact/compose.hpp"

#include "forestfact/enumeration.hpp"

namespace forestfact {

FamilySpec lambda_factorization(Count lambda) { return lambda_family(lambda); }

// ---------------------------------------------------------------------------
// Packing

PackedFamily pack_family(const std::vector<FactorSpec>& forests) {
  PackedFamily out;
  const ComponentGenerator filler{ComponentShape::path(2), Count::omega()};
  for (Nat f = 0; f < forests.size(); ++f) {
    const FactorSpec& req = forests[f];
    if (req.components.empty()) throw ValidationError("forest " + std::to_string(f) + " is empty");
    FactorSpec padded = req;
    for (Nat g = 0; g < req.components.size(); ++g) {
      if (req.components[g].multiplicity == Count(0))
        throw ValidationError("forest " + std::to_string(f) + " generator " + std::to_string(g) + " has multiplicity 0");
      if (auto defect = req.components[g].shape.defect())
        throw ValidationError("forest " + std::to_string(f) + " generator " + std::to_string(g) + ": " + *defect);
    }
    padded.components.push_back(filler);
    out.spec.factors.push_back(std::move(padded));
    out.real_generators.push_back(req.components.size());
  }
  out.spec.factors.push_back({{filler}, Count::omega()});
  out.real_generators.push_back(0);
  return out;
}

bool PackedFamily::in_packing(const SpecFamily& family, Nat m, Nat i) const {
  const Forest& f = family.factor(m);
  return f.generator_at(f.locate(i).position) < real_generators.at(family.entry_of(m));
}

BallMaterialization restrict(const BallMaterialization& b, const SpecFamily& family, const PackedFamily& packing) {
  BallMaterialization out = b;
  out.edges.clear();
  for (const auto& e : b.edges)
    if (packing.in_packing(family, e.owner.m, e.owner.i)) out.edges.push_back(e);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical omega-regular addressing

Nat omega_local_of(const TreeAddress& u) {
  Nat q = 0;
  for (Nat s : u.slots()) q = checked::add(pair(q, s), 1);
  return q;
}

TreeAddress omega_address_of(Nat local) {
  std::vector<Nat> rev;
  while (local != 0) {
    auto [parent, slot] = unpair(local - 1);
    rev.push_back(slot);
    local = parent;
  }
  return TreeAddress(std::vector<Nat>(rev.rbegin(), rev.rend()));
}

// ---------------------------------------------------------------------------
// Part families

PartFamily::PartFamily(std::shared_ptr<const SpecFamily> base, Nat batch, Nat part)
    : base_(std::move(base)), batch_(batch), part_(part) {}

const Forest& PartFamily::factor(Nat n) const {
  const Nat q = pair(batch_, n);
  const Nat entry = base_->entry_of(q);
  std::lock_guard lock(mutex_);
  auto& slot = cache_[entry];
  if (!slot) slot = std::make_unique<Forest>(part_forest(base_->factor(q), part_));
  return *slot;
}

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(FamilySpec spec, EngineOptions options)
    : family_(std::make_shared<SpecFamily>(std::move(spec))), options_(options) {
  stage1_ = std::make_unique<Engine>(std::make_shared<SpecFamily>(lambda_family(Count::omega())), options_);
}

const Engine& Pipeline::stage2(Nat a, Nat p) const {
  std::lock_guard lock(mutex_);
  auto& slot = stage2_[{a, p}];
  if (!slot) slot = std::make_unique<Engine>(std::make_shared<PartFamily>(family_, a, p), options_);
  return *slot;
}

std::pair<Nat, TreeAddress> Pipeline::component_iso(Nat a, const TreeAddress& w) const {
  LocalVertex l = stage1_->local_label(w, a);
  return {l.position, omega_address_of(l.local)};
}

Nat Pipeline::label_of(const TreeAddress& w, Nat q) const {
  auto [a, n] = unpair(q);
  auto [p, u] = component_iso(a, w);
  LocalVertex inner = stage2(a, p).local_label(u, n);
  return family_->factor(q).index_of({pair(p, inner.position), inner.local});
}

EdgeAssignment Pipeline::factor_of_edge(const TreeAddress& w, Nat slot) const {
  Demand outer = stage1_->demand_at(w, slot);
  auto [p, u] = component_iso(outer.m, w);
  Demand inner = stage2(outer.m, p).demand_at(u, outer.k);
  const Nat q = pair(outer.m, inner.m);
  Nat i = label_of(w, q);
  Nat j = label_of(w.son(slot), q);
  return {q, std::min(i, j), std::max(i, j)};
}

TreeAddress Pipeline::vertex_of(Nat q, Nat i) const {
  auto [a, n] = unpair(q);
  LocalVertex v = family_->factor(q).locate(i);
  auto [p, p_inner] = unpair(v.position);
  const Engine& inner = stage2(a, p);
  TreeAddress u = inner.vertex_of(n, inner.family().factor(n).index_of({p_inner, v.local}));
  const Forest& y = stage1_->family().factor(a);
  return stage1_->vertex_of(a, y.index_of({p, omega_local_of(u)}));
}

}  // namespace forestfact
