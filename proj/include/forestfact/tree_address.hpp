#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "forestfact/core.hpp"

namespace forestfact {

/// A vertex of the omega-regular tree: the path of son slots from the root.
class TreeAddress {
 public:
  TreeAddress() = default;
  explicit TreeAddress(std::vector<Nat> slots) : slots_(std::move(slots)) {}

  static TreeAddress root() { return {}; }

  bool is_root() const { return slots_.empty(); }
  Nat depth() const { return slots_.size(); }
  const std::vector<Nat>& slots() const { return slots_; }
  Nat last_slot() const;

  TreeAddress parent() const;
  TreeAddress son(Nat slot) const;

  Nat level_rank() const;

  /// Slash-separated text form, root = "/".
  std::string str() const;
  static TreeAddress parse(std::string_view text);

  auto operator<=>(const TreeAddress&) const = default;

 private:
  std::vector<Nat> slots_;
};

/// All depth-d addresses with every slot < k, in ascending level-rank order.
std::vector<TreeAddress> sphere(Nat d, Nat k);

/// Spheres 0..d concatenated; every address appears after its parent.
std::vector<TreeAddress> ball(Nat d, Nat k);

Nat sphere_size(Nat d, Nat k);
Nat ball_size(Nat d, Nat k);

}  // namespace forestfact
