#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "forestfact/core.hpp"

namespace forestfact {

enum class ShapeKind { FiniteEdgeList, Path, Ray, Star, RegularTree, CompleteBinaryTree };

std::string to_string(ShapeKind kind);

/// A rooted tree with its vertices numbered breadth-first (or, for
/// infinitely branching trees, by 1 + pair(parent, slot)). Local index 0 is
/// the designated root; a parent always has a smaller index than its
/// children, and children of one vertex are numbered in increasing order.
class ComponentShape {
 public:
  static ComponentShape path(Nat vertices);
  static ComponentShape ray();
  static ComponentShape star(Count leaves);
  static ComponentShape regular_tree(Count degree);
  static ComponentShape complete_binary_tree();
  /// Edges over labels 0..n-1; label 0 becomes the root.
  static ComponentShape finite_tree(const std::vector<std::pair<Nat, Nat>>& edges);

  ShapeKind kind() const { return kind_; }
  /// Why this shape is not a valid component (isolated vertex, cycle, ...).
  std::optional<std::string> defect() const;
  void require_sound() const;

  Count order() const;
  bool contains(Nat q) const { return order().exceeds(q); }

  Count child_count(Nat q) const;
  Nat child(Nat q, Nat k) const;
  Nat parent(Nat q) const;
  Count degree(Nat q) const;
  /// Position of q among its parent's children.
  Nat child_rank(Nat q) const;

  /// {"kind": ..., "params": {...}} in normalized form.
  nlohmann::json to_json() const;
  static ComponentShape from_json(const nlohmann::json& j);

  bool operator==(const ComponentShape& o) const { return to_json() == o.to_json(); }

 private:
  struct FiniteTree {
    std::vector<std::vector<Nat>> children;
    std::vector<Nat> parent;
    std::vector<Nat> child_rank;
    std::vector<std::pair<Nat, Nat>> source_edges;
  };

  ShapeKind kind_ = ShapeKind::Path;
  Count param_{2};
  std::shared_ptr<const FiniteTree> tree_;
};

/// A generator of components inside one factor description.
struct ComponentGenerator {
  ComponentShape shape;
  Count multiplicity = Count::omega();
};

struct FactorSpec {
  std::vector<ComponentGenerator> components;
  Count repeat = Count::omega();
};

/// The indexed family {T^m : m < omega} as written in a spec file.
struct FamilySpec {
  std::vector<FactorSpec> factors;

  nlohmann::json to_json() const;
  /// Throws ValidationError on malformed structure (wrong types, unknown kinds).
  static FamilySpec from_json(const nlohmann::json& j);
  /// Normalized, byte-stable text.
  std::string normalized() const { return to_json().dump(); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const FamilySpec& spec);

/// Built-in families: "k2-family", "lambda:<n>", "lambda:omega",
/// "omega-regular", "star-mix", "mixed-trees", "mixed-infinite".
std::optional<FamilySpec> builtin_family(const std::string& name);
std::vector<std::string> builtin_family_names();

/// Canonical family of omega factors, each omega copies of the lambda-regular tree.
FamilySpec lambda_family(Count lambda);

/// The pool partition index of a component: pool d, rank r within the pool.
struct ComponentRef {
  Nat m = 0;
  Nat d = 0;
  Nat r = 0;

  bool operator==(const ComponentRef&) const = default;
};

/// Local coordinates of a forest vertex: component position and local index.
struct LocalVertex {
  Nat position = 0;
  Nat local = 0;

  bool operator==(const LocalVertex&) const = default;
};

/// One factor T^m. Components sit at positions 0, 1, 2, ...: a finite
/// prefix followed by a periodic cycle. Global vertex indices dovetail
/// (position, local) pairs in Cantor order, skipping pairs past the end of
/// finite components.
class Forest {
 public:
  struct Slot {
    std::shared_ptr<const ComponentShape> shape;
    Nat generator = 0;
  };

  Forest(std::vector<Slot> prefix, std::vector<Slot> cycle);
  /// Finite-multiplicity generators first in listed order, then the
  /// omega-multiplicity generators round-robin.
  static Forest from_factor(const FactorSpec& spec);

  const Slot& slot(Nat position) const;
  const ComponentShape& shape_at(Nat position) const;
  Nat generator_at(Nat position) const;
  Count order_at(Nat position) const { return shape_at(position).order(); }

  Nat index_of(LocalVertex v) const;
  LocalVertex locate(Nat index) const;

  Count degree(Nat index) const;
  /// Neighbors in ascending index order.
  Nat kth_neighbor(Nat index, Nat k) const;
  bool adjacent(Nat a, Nat b) const;

  static ComponentRef pool_of(Nat position);
  static Nat position_of(Nat d, Nat r);

  /// Child count shared by every component root at position >= 1, if uniform.
  std::optional<Count> uniform_root_children() const { return uniform_root_children_; }

  Nat prefix_length() const { return prefix_.size(); }
  Nat cycle_length() const { return cycle_.size(); }

 private:
  unsigned __int128 count_before_diagonal(Nat s) const;
  unsigned __int128 count_on_diagonal_below(Nat s, Nat x) const;

  std::vector<Slot> prefix_;
  std::vector<Slot> cycle_;
  std::optional<Count> uniform_root_children_;
};

/// Oracle surface over the family: factor m -> T^m.
class Family {
 public:
  virtual ~Family() = default;
  virtual const Forest& factor(Nat m) const = 0;

  Count vertex_count(Nat m) const;
  Count degree(Nat m, Nat i) const { return factor(m).degree(i); }
  Nat kth_neighbor(Nat m, Nat i, Nat k) const { return factor(m).kth_neighbor(i, k); }
  ComponentRef component_of(Nat m, Nat i) const;
  Nat root_of(const ComponentRef& c) const;
  ComponentRef pool_component(Nat m, Nat d, Nat r) const;
};

/// Family expanded from a validated FamilySpec. Entries with a finite repeat
/// take the first factor indices in listed order; the omega-repeat entries
/// then take the remaining indices round-robin.
class SpecFamily : public Family {
 public:
  explicit SpecFamily(FamilySpec spec);
  const Forest& factor(Nat m) const override;
  /// Index into spec().factors of the entry realizing factor m.
  Nat entry_of(Nat m) const;
  const FamilySpec& spec() const { return spec_; }

 private:
  FamilySpec spec_;
  std::vector<Forest> forests_;
  std::vector<Nat> finite_entries_;  // one per finitely repeated factor index
  std::vector<Nat> omega_entries_;
};

/// Part c of a forest: the components at base positions pair(c, p'), p' = 0, 1, ...
Forest part_forest(const Forest& base, Nat part);

}  // namespace forestfact
