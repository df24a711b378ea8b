#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "forestfact/engine.hpp"
#include "forestfact/window.hpp"

namespace forestfact {

/// Omega factors, each omega copies of the lambda-regular tree (lambda = 1: K2).
FamilySpec lambda_factorization(Count lambda);

/// A packing request padded into a full family. Entry e of `spec` keeps its
/// first `real_generators[e]` generators from the request; the rest is K2 filler.
struct PackedFamily {
  FamilySpec spec;
  std::vector<Nat> real_generators;

  /// True when forest vertex i of factor m lies in a requested component.
  bool in_packing(const SpecFamily& family, Nat m, Nat i) const;
};

/// Each requested forest (repeat n or omega) becomes n or omega factors of
/// its own, padded with omega K2 components; one more entry of pure K2 filler
/// supplies the remaining factors. Throws ValidationError on an empty forest
/// or an isolated-vertex component.
PackedFamily pack_family(const std::vector<FactorSpec>& forests);

/// The window with only the edges that realize the packing.
BallMaterialization restrict(const BallMaterialization& b, const SpecFamily& family, const PackedFamily& packing);

/// Local index of an address inside the canonical omega-regular component
/// (root 0, son s of q is 1 + pair(q, s)), and its inverse.
Nat omega_local_of(const TreeAddress& u);
TreeAddress omega_address_of(Nat local);

/// Factors of part `part` of every factor pair(batch, n) of a base family.
class PartFamily : public Family {
 public:
  PartFamily(std::shared_ptr<const SpecFamily> base, Nat batch, Nat part);
  const Forest& factor(Nat n) const override;

 private:
  std::shared_ptr<const SpecFamily> base_;
  Nat batch_;
  Nat part_;
  mutable std::mutex mutex_;
  mutable std::map<Nat, std::unique_ptr<Forest>> cache_;  // by base entry
};

/// Two-stage factorization. Stage 1 splits the tree into omega-regular
/// forests Y^a; component p of Y^a is then factorized into part p of the
/// batch {T^pair(a, n) : n}. Factor q = pair(a, n) of the result is the union
/// of those copies over all components p.
class Pipeline : public Factorization {
 public:
  explicit Pipeline(FamilySpec spec, EngineOptions options = {});

  const Family& family() const override { return *family_; }
  Nat max_depth() const override { return options_.max_depth; }
  Nat label_of(const TreeAddress& w, Nat q) const override;
  EdgeAssignment factor_of_edge(const TreeAddress& w, Nat slot) const override;
  TreeAddress vertex_of(Nat q, Nat i) const override;

  const Engine& stage1() const { return *stage1_; }
  const Engine& stage2(Nat a, Nat p) const;
  /// Component position of w in Y^a and w's canonical address inside it.
  std::pair<Nat, TreeAddress> component_iso(Nat a, const TreeAddress& w) const;

 private:
  std::shared_ptr<const SpecFamily> family_;
  EngineOptions options_;
  std::unique_ptr<Engine> stage1_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<Nat, Nat>, std::unique_ptr<Engine>> stage2_;
};

}  // namespace forestfact
