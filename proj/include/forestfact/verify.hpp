#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "forestfact/engine.hpp"
#include "forestfact/sim.hpp"
#include "forestfact/window.hpp"

namespace forestfact {

struct VerificationReport {
  std::string check;
  nlohmann::json scope;  // window (radius, sons, factors) or trace parameters
  bool pass = true;
  /// Offending vertex / edge / step and the violated condition; set iff !pass.
  std::optional<nlohmann::json> counterexample;

  nlohmann::json to_json() const;
};

bool all_pass(const std::vector<VerificationReport>& reports);
nlohmann::json to_json(const std::vector<VerificationReport>& reports);

/// First n son-slot allocations of w, rederived by scanning demand codes
/// 0, 1, 2, ... against forest adjacency and the labels of w and its parent.
std::vector<DemandTarget> brute_force_allocation(const Factorization& f, const TreeAddress& w, Nat n);

struct WindowChecks {
  bool depth_law = true;     // F4
  Nat spanning_indices = 32;  // E3 probes vertex_of(m, i) for i below this
};

/// F1-F4 and E3 on a materialized window; `f` answers the inverse queries.
/// Failing reports carry a counterexample from the smallest failing sub-window.
std::vector<VerificationReport> verify_window(const BallMaterialization& b, const Factorization& f,
                                              const WindowChecks& checks = {});

/// The sub-window of depth <= radius, slots < sons, labels m < factors.
BallMaterialization sub_window(const BallMaterialization& b, Nat radius, Nat sons, Nat factors);

/// First violation of the F2 iff over all vertex pairs, or nullopt.
/// Parallel; verify_adjacency_serial is its reference.
std::optional<nlohmann::json> verify_adjacency(const BallMaterialization& b, const Family& family);
std::optional<nlohmann::json> verify_adjacency_serial(const BallMaterialization& b, const Family& family);

}  // namespace forestfact

namespace forestfact {

/// Replays a trace with an independent implementation of the scheduler
/// rules: step order and completeness, sigma before/after, every candidate
/// and decisive D-vector, actions, C1-C3 after each step, and acyclicity of
/// every F_m (union-find).
std::vector<VerificationReport> verify_trace(const ParsedTrace& parsed);

}  // namespace forestfact
