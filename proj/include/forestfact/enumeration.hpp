#pragma once

#include <compare>
#include <span>
#include <utility>
#include <vector>

#include "forestfact/core.hpp"

namespace forestfact {

/// Cantor pairing (a+b)(a+b+1)/2 + b. Throws OverflowError past 2^64.
Nat pair(Nat a, Nat b);

/// Inverse of pair().
std::pair<Nat, Nat> unpair(Nat n);

/// A step index (m, tau, i) of the scheduler, ordered lexicographically.
struct LexTriple {
  Nat m = 0;
  Nat tau = 0;
  Nat i = 0;

  auto operator<=>(const LexTriple&) const = default;
};

std::strong_ordering lex_cmp(const LexTriple& a, const LexTriple& b);

/// Rank of a tree address among all addresses of the same depth.
/// Depth 1 is the raw slot; deeper addresses fold left with pair().
Nat level_rank(std::span<const Nat> slots);

/// Inverse of level_rank at depth `depth`. Depth 0 admits only rank 0.
std::vector<Nat> level_unrank(Nat depth, Nat rank);

/// Son-slot partition class: slot s lies in X^m(t) with intra-class rank r.
struct XClass {
  Nat m = 0;
  Nat t = 0;
  Nat r = 0;

  bool operator==(const XClass&) const = default;
};

XClass x_partition_decode(Nat slot);
Nat x_partition_encode(const XClass& c);

}  // namespace forestfact
