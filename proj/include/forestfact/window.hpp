#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "forestfact/factorization.hpp"

namespace forestfact {

struct WindowVertex {
  TreeAddress address;
  std::vector<Nat> labels;  // labels[m] for m < factors
};

struct WindowEdge {
  Nat parent = 0;  // vertex positions in BallMaterialization::vertices
  Nat child = 0;
  Nat slot = 0;
  EdgeAssignment owner;
};

/// A fully labeled ball(radius, sons) of the omega-regular tree. Edge owners
/// are exact: an edge of a factor >= `factors` keeps its true factor index.
struct BallMaterialization {
  Nat radius = 0;
  Nat sons = 0;
  Nat factors = 0;
  std::string family;  // free-form description carried into exports
  std::vector<WindowVertex> vertices;
  std::vector<WindowEdge> edges;

  /// Edge positions owned by factor m.
  std::vector<Nat> edges_of_factor(Nat m) const;
  /// Position of an address, or npos.
  Nat find(const TreeAddress& w) const;
  static constexpr Nat npos = UINT64_MAX;
};

/// Parallel over window vertices. Throws RangeError past f.max_depth().
BallMaterialization materialize_ball(const Factorization& f, Nat radius, Nat sons, Nat factors);
/// Single-threaded reference of materialize_ball.
BallMaterialization materialize_ball_serial(const Factorization& f, Nat radius, Nat sons, Nat factors);

nlohmann::json to_json(const BallMaterialization& b);
/// Byte-stable JSON text.
std::string export_json(const BallMaterialization& b);
/// Byte-stable DOT text; edges carry factor, i, j attributes.
std::string export_dot(const BallMaterialization& b);

}  // namespace forestfact
