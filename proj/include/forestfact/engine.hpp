#pragma once

#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "forestfact/factorization.hpp"
#include "forestfact/forest.hpp"
#include "forestfact/tree_address.hpp"

namespace forestfact {

/// Continuation k of factor m, i.e. demand code pair(m, k).
struct Demand {
  Nat m = 0;
  Nat k = 0;

  bool operator==(const Demand&) const = default;
};

/// A demand together with the forest vertex it places.
struct DemandTarget {
  Nat m = 0;
  Nat k = 0;
  Nat target = 0;

  bool operator==(const DemandTarget&) const = default;
};

struct EngineOptions {
  Nat max_depth = 6;
  /// Upper bound on memoized entries (labels, demand codes, gap ranks).
  Nat memo_budget = 200'000'000;
};

struct MemoStats {
  Nat labels = 0;
  Nat demand_codes = 0;
  Nat gap_entries = 0;
  Nat total() const { return labels + demand_codes + gap_entries; }
};

/// Lazy factorization of the omega-regular tree into copies of a family of
/// forests. Every tree vertex carries one label per factor; son slot n of a
/// vertex w extends the n-th valid demand of w, ordered by pair(m, k); a
/// vertex that is not an m-continuation receives the root of a fresh
/// component of factor m, taken from the pool of its depth in gap-rank order.
///
/// Queries are pure. Memo tables are shared between threads.
class Engine : public Factorization {
 public:
  explicit Engine(std::shared_ptr<const Family> family, EngineOptions options = {});
  ~Engine() override;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const Family& family() const override { return *family_; }
  Nat max_depth() const override { return options_.max_depth; }
  const EngineOptions& options() const { return options_; }

  /// Global index i with y^m_i = w.
  Nat label_of(const TreeAddress& w, Nat m) const override;
  LocalVertex local_label(const TreeAddress& w, Nat m) const;

  /// The demand served by son slot `slot` of w.
  Demand demand_at(const TreeAddress& w, Nat slot) const;
  /// First n demands of w with the forest vertices they place.
  std::vector<DemandTarget> demands(const TreeAddress& w, Nat n) const;
  /// Son slot serving demand (m, k) at w, or nullopt when k is past the
  /// continuation list of w's factor-m label.
  std::optional<Nat> slot_of_demand(const TreeAddress& w, Nat m, Nat k) const;
  /// Number of continuations of w's factor-m label (children of the label
  /// not already placed at w's parent).
  Count continuation_count(const TreeAddress& w, Nat m) const;
  /// True when w extends its parent's factor-m label.
  bool is_continuation(const TreeAddress& w, Nat m) const;

  EdgeAssignment factor_of_edge(const TreeAddress& w, Nat slot) const override;

  /// The unique address w with label_of(w, m) = i.
  TreeAddress vertex_of(Nat m, Nat i) const override;

  MemoStats memo_stats() const;

 private:
  struct Key {
    Nat depth;
    Nat rank;
    bool operator==(const Key&) const = default;
  };
  struct LabelKey {
    Nat depth;
    Nat rank;
    Nat m;
    bool operator==(const LabelKey&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
    std::size_t operator()(const LabelKey& k) const;
  };
  struct DemandEntry;
  struct GapTable;

  template <class K, class V>
  struct Shard {
    std::mutex mutex;
    std::unordered_map<K, V, KeyHash> map;
  };
  static constexpr std::size_t kShards = 64;

  LocalVertex label_impl(const Key& key, Nat m) const;
  Count continuation_count_impl(const Key& key, Nat m) const;
  DemandEntry& demand_entry(const Key& key) const;
  void extend_demands(DemandEntry& e, const Key& key, Nat min_codes, Nat min_scanned) const;
  Demand demand_at_impl(const Key& key, Nat slot) const;

  GapTable& gap_table(Nat m, Nat depth) const;
  /// Number of level-d addresses with rank < rank that are not m-continuations.
  Nat gap_rank(Nat m, Nat depth, Nat rank) const;
  /// Level rank of the r-th level-d address that is not an m-continuation.
  Nat gap_select(Nat m, Nat depth, Nat r) const;
  void extend_gaps(GapTable& t, Nat m, Nat depth, Nat upto) const;
  bool is_continuation_at(Nat depth, Nat rank, Nat m) const;

  void charge(std::atomic<Nat>& counter, Nat n) const;

  std::shared_ptr<const Family> family_;
  EngineOptions options_;

  mutable std::array<Shard<LabelKey, LocalVertex>, kShards> labels_;
  mutable std::array<Shard<Key, std::unique_ptr<DemandEntry>>, kShards> demands_;
  mutable std::mutex gap_mutex_;
  mutable std::unordered_map<Key, std::unique_ptr<GapTable>, KeyHash> gaps_;

  mutable std::atomic<Nat> label_count_{0};
  mutable std::atomic<Nat> code_count_{0};
  mutable std::atomic<Nat> gap_count_{0};
};

}  // namespace forestfact
