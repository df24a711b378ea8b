#include "forestfact/window.hpp"

#include <exception>
#include <map>
#include <mutex>
#include <sstream>

namespace forestfact {

Nat BallMaterialization::find(const TreeAddress& w) const {
  for (Nat v = 0; v < vertices.size(); ++v)
    if (vertices[v].address == w) return v;
  return npos;
}

std::vector<Nat> BallMaterialization::edges_of_factor(Nat m) const {
  std::vector<Nat> out;
  for (Nat e = 0; e < edges.size(); ++e)
    if (edges[e].owner.m == m) out.push_back(e);
  return out;
}

namespace {

BallMaterialization skeleton(const Factorization& f, Nat radius, Nat sons, Nat factors) {
  if (radius > f.max_depth())
    throw RangeError("radius " + std::to_string(radius) + " exceeds the configured maximum depth " +
                     std::to_string(f.max_depth()));
  if (sons == 0 && radius > 0) throw RangeError("a window of positive radius needs at least one son per vertex");
  BallMaterialization b;
  b.radius = radius;
  b.sons = sons;
  b.factors = factors;
  std::map<TreeAddress, Nat> index;
  for (auto& w : ball(radius, sons)) {
    index.emplace(w, b.vertices.size());
    b.vertices.push_back({std::move(w), std::vector<Nat>(factors)});
  }
  for (Nat v = 1; v < b.vertices.size(); ++v) {
    const TreeAddress& w = b.vertices[v].address;
    b.edges.push_back({index.at(w.parent()), v, w.last_slot(), {}});
  }
  return b;
}

void fill_vertex(const Factorization& f, BallMaterialization& b, Nat v) {
  auto& vx = b.vertices[v];
  for (Nat m = 0; m < b.factors; ++m) vx.labels[m] = f.label_of(vx.address, m);
  if (v > 0) {
    auto& e = b.edges[v - 1];
    e.owner = f.factor_of_edge(b.vertices[e.parent].address, e.slot);
  }
}

}  // namespace

BallMaterialization materialize_ball_serial(const Factorization& f, Nat radius, Nat sons, Nat factors) {
  BallMaterialization b = skeleton(f, radius, sons, factors);
  for (Nat v = 0; v < b.vertices.size(); ++v) fill_vertex(f, b, v);
  return b;
}

BallMaterialization materialize_ball(const Factorization& f, Nat radius, Nat sons, Nat factors) {
  BallMaterialization b = skeleton(f, radius, sons, factors);
  const auto n = static_cast<long long>(b.vertices.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 4)
  for (long long v = 0; v < n; ++v) {
    try {
      fill_vertex(f, b, static_cast<Nat>(v));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return b;
}

nlohmann::json to_json(const BallMaterialization& b) {
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& v : b.vertices) vertices.push_back({{"address", v.address.str()}, {"labels", v.labels}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : b.edges)
    edges.push_back({{"parent", b.vertices[e.parent].address.str()},
                     {"child", b.vertices[e.child].address.str()},
                     {"slot", e.slot},
                     {"factor", e.owner.m},
                     {"i", e.owner.i},
                     {"j", e.owner.j}});
  return {{"radius", b.radius}, {"sons", b.sons},         {"factors", b.factors},
          {"family", b.family}, {"vertices", vertices}, {"edges", edges}};
}

std::string export_json(const BallMaterialization& b) { return to_json(b).dump(1) + "\n"; }

std::string export_dot(const BallMaterialization& b) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream out;
  out << "graph window {\n";
  out << "  graph [radius=" << b.radius << ", sons=" << b.sons << ", factors=" << b.factors << "];\n";
  for (Nat v = 0; v < b.vertices.size(); ++v) {
    const auto& vx = b.vertices[v];
    out << "  v" << v << " [label=\"" << vx.address.str() << "\"";
    for (Nat m = 0; m < vx.labels.size(); ++m) out << ", y" << m << "=" << vx.labels[m];
    out << "];\n";
  }
  for (const auto& e : b.edges)
    out << "  v" << e.parent << " -- v" << e.child << " [factor=" << e.owner.m << ", i=" << e.owner.i
        << ", j=" << e.owner.j << ", slot=" << e.slot << ", color=\"" << palette[e.owner.m % 10] << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace forestfact
