#pragma once

#include <array>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "forestfact/enumeration.hpp"

namespace forestfact {

/// Host graph, spanning tree and son partition of one simulator run. Vertex
/// ids are host ids; `enumeration` (if given) lists them in scheduling order,
/// otherwise host id i is v_i.
struct SimConfig {
  Nat vertices = 0;
  std::vector<std::pair<Nat, Nat>> edges;
  std::vector<std::optional<Nat>> parent;  // spanning-tree parent; only v_0 has none
  /// Class (m, t) of each non-root vertex inside its parent's sons; nullopt = auto.
  std::optional<std::vector<std::optional<std::pair<Nat, Nat>>>> x_classes;
  Nat factors = 1;  // M
  Nat passes = 1;   // T
  std::optional<std::vector<Nat>> enumeration;

  nlohmann::json to_json() const;
  /// Throws ValidationError on malformed JSON.
  static SimConfig from_json(const nlohmann::json& j);
};

/// A validated config relabeled to scheduling order: vertex i is v_i.
struct SimInstance {
  Nat n = 0;
  Nat factors = 0;
  Nat passes = 0;
  std::vector<std::vector<Nat>> neighbors;  // ascending
  std::vector<Nat> parent;                  // parent[0] unused
  std::vector<std::pair<Nat, Nat>> x_class;  // (m, t) of v_i's class under its parent; [0] unused
  std::vector<Nat> host_id;                  // scheduling index -> host id

  bool adjacent(Nat a, Nat b) const;
};

/// Checks enumeration order, spanning-tree consistency and the partition
/// before any step runs. Throws ValidationError.
SimInstance prepare(const SimConfig& config);

/// nullopt stands for "exhausted": every scanned slot a_j(y), j, y < n, is defined.
using Sigma = std::optional<Nat>;
std::string sigma_str(const Sigma& s);

/// Slots a_j^m(y), sets B_j^m, and per-vertex membership.
class SlotTable {
 public:
  SlotTable(Nat n, Nat factors);

  Nat n() const { return n_; }
  const std::vector<Nat>& column(Nat m, Nat j) const { return columns_[m][j]; }
  const std::set<Nat>& b_set(Nat m, Nat j) const { return b_[m][j]; }
  /// Column j of A^m holding v_i, if any.
  std::optional<Nat> a_owner(Nat m, Nat i) const { return a_of_[m][i]; }
  std::optional<Nat> b_owner(Nat m, Nat i) const { return b_of_[m][i]; }
  bool placed(Nat m, Nat i) const { return a_of_[m][i] || b_of_[m][i]; }

  /// Appends v_i to column j of A^m; returns its slot y.
  Nat assign(Nat m, Nat j, Nat i);
  void put_b(Nat m, Nat j, Nat i);
  /// C_j^m = A_j^m u B_j^m, ascending.
  std::vector<Nat> c_set(Nat m, Nat j) const;

 private:
  Nat n_;
  std::vector<std::vector<std::vector<Nat>>> columns_;
  std::vector<std::vector<std::set<Nat>>> b_;
  std::vector<std::vector<std::optional<Nat>>> a_of_;
  std::vector<std::vector<std::optional<Nat>>> b_of_;
};

/// 0 when no slot of factor m is defined; otherwise the least s with some
/// undefined a_j^m(y), j, y <= s; exhausted when no such s < n.
Sigma sigma(const SlotTable& table, Nat m);

enum class SimAction { Assign, PutB, Skip };
std::string to_string(SimAction a);

struct Candidate {
  Nat j = 0;
  Nat y = 0;
  std::array<bool, 6> d{};  // D2..D7

  bool operator==(const Candidate&) const = default;
};

struct StepRecord {
  LexTriple step;
  Sigma sigma_before;
  Sigma sigma_after;
  SimAction action = SimAction::Skip;
  std::optional<Nat> j;  // assigned / B column, or the first candidate on skip
  std::optional<Nat> y;  // slot, for Assign
  std::array<bool, 8> d{};  // D1..D8 at column j (all but D1 false without one)
  std::vector<Candidate> candidates;  // neighbors j < i, ascending

  bool operator==(const StepRecord&) const = default;
  nlohmann::json to_json() const;
  static StepRecord from_json(const nlohmann::json& j);
};

struct SimTrace {
  SimConfig config;
  std::vector<StepRecord> steps;
};

SimTrace run(const SimConfig& config);

/// Rebuilds the final tables from the logged actions.
SlotTable tables_of(const SimInstance& inst, const SimTrace& trace);

/// Edge lists of F_m, m < M, as scheduling-index pairs (j, i), j < i.
std::vector<std::vector<std::pair<Nat, Nat>>> build_factors(const SimTrace& trace);

struct CReport {
  bool c1 = true;
  bool c2 = true;
  bool c3 = true;
  Nat c4_min = 0;
  Nat c4_max = 0;
  double c5_coverage = 1.0;
  Nat d1_failures = 0;  // steps where D1 failed (statistic only)
  std::vector<std::string> violations;

  nlohmann::json to_json() const;
};
CReport check_C(const SimTrace& trace);

struct SigmaProgress {
  Nat m = 0;
  std::vector<Sigma> at_pass_start;  // sigma^m_tau(0)
  Sigma after_last_pass;
  std::vector<bool> adequate;  // per pass: every needed X_j^m(tau) is populated
  /// Strict increase across every adequate, non-exhausted pass.
  bool increasing = true;
};
std::vector<SigmaProgress> sigma_progress(const SimTrace& trace);

/// JSON lines: header (with config), one line per step, summary.
std::string export_trace(const SimTrace& trace);
/// Throws ValidationError on lines that do not parse; a missing summary is
/// reported by `complete`.
struct ParsedTrace {
  SimTrace trace;
  bool has_summary = false;
  std::optional<Nat> summary_steps;
};
ParsedTrace parse_trace(const std::string& text);
std::string export_factors_dot(const SimTrace& trace);

/// Random tree host with extra chords, auto or random partition.
SimConfig fuzz_config(std::mt19937_64& rng, Nat max_vertices, Nat max_factors, Nat max_passes);
/// Hubs 0..hubs-1 on a path; hub j has t + 2 leaf sons in X_j^m(t) for
/// every m < factors, t < passes.
SimConfig adequate_config(Nat hubs, Nat factors, Nat passes);

}  // namespace forestfact
