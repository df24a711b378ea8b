#pragma once

#include "forestfact/forest.hpp"
#include "forestfact/tree_address.hpp"

namespace forestfact {

/// The unique (m, i, j) with i < j owning one tree edge.
struct EdgeAssignment {
  Nat m = 0;
  Nat i = 0;
  Nat j = 0;

  bool operator==(const EdgeAssignment&) const = default;
};

/// A factorization of the omega-regular tree into the factors of a family,
/// seen through its three queries.
class Factorization {
 public:
  virtual ~Factorization() = default;

  virtual const Family& family() const = 0;
  virtual Nat label_of(const TreeAddress& w, Nat m) const = 0;
  virtual EdgeAssignment factor_of_edge(const TreeAddress& w, Nat slot) const = 0;
  virtual TreeAddress vertex_of(Nat m, Nat i) const = 0;
  /// Deepest window radius this factorization agrees to materialize.
  virtual Nat max_depth() const = 0;
};

}  // namespace forestfact
