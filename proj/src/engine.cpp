#include "forestfact/engine.hpp"

#include <algorithm>

#include "forestfact/enumeration.hpp"

namespace forestfact {

namespace {

Nat mix(Nat h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

}  // namespace

struct Engine::DemandEntry {
  std::mutex mutex;
  std::vector<Nat> codes;  // valid demand codes, ascending
  Nat next_code = 0;       // every code below this has been classified
  std::vector<Count> cont;  // continuation count per factor, dense from 0
};

struct Engine::GapTable {
  std::mutex mutex;
  std::vector<Nat> prefix{0};  // prefix[n] = gaps among level ranks < n
};

std::size_t Engine::KeyHash::operator()(const Key& k) const { return mix(k.depth * 0x9e3779b97f4a7c15ULL ^ k.rank); }

std::size_t Engine::KeyHash::operator()(const LabelKey& k) const {
  return mix(mix(k.depth * 0x9e3779b97f4a7c15ULL ^ k.rank) ^ (k.m + 0x632be59bd9b4e019ULL));
}

Engine::Engine(std::shared_ptr<const Family> family, EngineOptions options)
    : family_(std::move(family)), options_(options) {
  if (!family_) throw ValidationError("engine needs a family");
}

Engine::~Engine() = default;

void Engine::charge(std::atomic<Nat>& counter, Nat n) const {
  counter.fetch_add(n, std::memory_order_relaxed);
  if (label_count_.load() + code_count_.load() + gap_count_.load() > options_.memo_budget)
    throw ResourceLimitError("memo budget of " + std::to_string(options_.memo_budget) + " entries exceeded");
}

MemoStats Engine::memo_stats() const { return {label_count_.load(), code_count_.load(), gap_count_.load()}; }

namespace {

struct VertexKey {
  Nat depth;
  Nat rank;
};

VertexKey parent_key(Nat depth, Nat rank) {
  if (depth == 1) return {0, 0};
  return {depth - 1, unpair(rank).first};
}

Nat slot_in_parent(Nat depth, Nat rank) { return depth == 1 ? rank : unpair(rank).second; }

}  // namespace

// ---------------------------------------------------------------------------
// Labels

LocalVertex Engine::local_label(const TreeAddress& w, Nat m) const {
  return label_impl({w.depth(), w.level_rank()}, m);
}

Nat Engine::label_of(const TreeAddress& w, Nat m) const {
  return family_->factor(m).index_of(local_label(w, m));
}

LocalVertex Engine::label_impl(const Key& key, Nat m) const {
  if (key.depth == 0) return {0, 0};
  LabelKey lk{key.depth, key.rank, m};
  auto& shard = labels_[KeyHash{}(lk) % kShards];
  {
    std::lock_guard lock(shard.mutex);
    if (auto it = shard.map.find(lk); it != shard.map.end()) return it->second;
  }

  auto [pd, pr] = parent_key(key.depth, key.rank);
  const Key pkey{pd, pr};
  const Demand served = demand_at_impl(pkey, slot_in_parent(key.depth, key.rank));
  LocalVertex result;
  if (served.m == m) {
    LocalVertex up = label_impl(pkey, m);
    result = {up.position, family_->factor(m).shape_at(up.position).child(up.local, served.k)};
  } else {
    result = {Forest::position_of(key.depth, gap_rank(m, key.depth, key.rank)), 0};
  }

  {
    std::lock_guard lock(shard.mutex);
    if (shard.map.try_emplace(lk, result).second) charge(label_count_, 1);
  }
  return result;
}

Count Engine::continuation_count(const TreeAddress& w, Nat m) const {
  return continuation_count_impl({w.depth(), w.level_rank()}, m);
}

Count Engine::continuation_count_impl(const Key& key, Nat m) const {
  const Forest& forest = family_->factor(m);
  if (key.depth > 0) {
    auto [pd, pr] = parent_key(key.depth, key.rank);
    const Demand served = demand_at_impl({pd, pr}, slot_in_parent(key.depth, key.rank));
    if (served.m != m) {
      // A fresh component root: no neighbor of it is placed yet.
      if (auto uniform = forest.uniform_root_children()) return *uniform;
    }
  }
  LocalVertex l = label_impl(key, m);
  return forest.shape_at(l.position).child_count(l.local);
}

bool Engine::is_continuation(const TreeAddress& w, Nat m) const {
  if (w.is_root()) return false;
  return is_continuation_at(w.depth(), w.level_rank(), m);
}

bool Engine::is_continuation_at(Nat depth, Nat rank, Nat m) const {
  if (depth == 0) return false;
  auto [pd, pr] = parent_key(depth, rank);
  return demand_at_impl({pd, pr}, slot_in_parent(depth, rank)).m == m;
}

// ---------------------------------------------------------------------------
// Demands

Engine::DemandEntry& Engine::demand_entry(const Key& key) const {
  auto& shard = demands_[KeyHash{}(key) % kShards];
  std::lock_guard lock(shard.mutex);
  auto& slot = shard.map[key];
  if (!slot) slot = std::make_unique<DemandEntry>();
  return *slot;
}

void Engine::extend_demands(DemandEntry& e, const Key& key, Nat min_codes, Nat min_scanned) const {
  Nat added = 0;
  while (e.codes.size() < min_codes || e.next_code <= min_scanned) {
    const Nat code = e.next_code;
    auto [m, k] = unpair(code);
    while (e.cont.size() <= m) e.cont.push_back(continuation_count_impl(key, e.cont.size()));
    if (e.cont[m].exceeds(k)) {
      e.codes.push_back(code);
      ++added;
    }
    e.next_code = checked::add(code, 1);
  }
  if (added) charge(code_count_, added);
}

Demand Engine::demand_at_impl(const Key& key, Nat slot) const {
  DemandEntry& e = demand_entry(key);
  std::lock_guard lock(e.mutex);
  if (e.codes.size() <= slot) extend_demands(e, key, checked::add(slot, 1), 0);
  auto [m, k] = unpair(e.codes[slot]);
  return {m, k};
}

Demand Engine::demand_at(const TreeAddress& w, Nat slot) const {
  return demand_at_impl({w.depth(), w.level_rank()}, slot);
}

std::vector<DemandTarget> Engine::demands(const TreeAddress& w, Nat n) const {
  std::vector<DemandTarget> out;
  out.reserve(n);
  const Key key{w.depth(), w.level_rank()};
  for (Nat s = 0; s < n; ++s) {
    Demand d = demand_at_impl(key, s);
    LocalVertex l = label_impl(key, d.m);
    const Forest& forest = family_->factor(d.m);
    Nat target = forest.index_of({l.position, forest.shape_at(l.position).child(l.local, d.k)});
    out.push_back({d.m, d.k, target});
  }
  return out;
}

std::optional<Nat> Engine::slot_of_demand(const TreeAddress& w, Nat m, Nat k) const {
  const Key key{w.depth(), w.level_rank()};
  if (!continuation_count_impl(key, m).exceeds(k)) return std::nullopt;
  const Nat code = pair(m, k);
  DemandEntry& e = demand_entry(key);
  std::lock_guard lock(e.mutex);
  if (e.next_code <= code) extend_demands(e, key, 0, code);
  auto it = std::lower_bound(e.codes.begin(), e.codes.end(), code);
  return static_cast<Nat>(it - e.codes.begin());
}

EdgeAssignment Engine::factor_of_edge(const TreeAddress& w, Nat slot) const {
  const Key key{w.depth(), w.level_rank()};
  Demand d = demand_at_impl(key, slot);
  LocalVertex l = label_impl(key, d.m);
  const Forest& forest = family_->factor(d.m);
  Nat i = forest.index_of(l);
  Nat j = forest.index_of({l.position, forest.shape_at(l.position).child(l.local, d.k)});
  return {d.m, std::min(i, j), std::max(i, j)};
}

// ---------------------------------------------------------------------------
// Root placement

Engine::GapTable& Engine::gap_table(Nat m, Nat depth) const {
  std::lock_guard lock(gap_mutex_);
  auto& slot = gaps_[Key{depth, m}];
  if (!slot) slot = std::make_unique<GapTable>();
  return *slot;
}

void Engine::extend_gaps(GapTable& t, Nat m, Nat depth, Nat upto) const {
  const Nat before = t.prefix.size();
  while (t.prefix.size() <= upto) {
    Nat n = t.prefix.size() - 1;
    t.prefix.push_back(t.prefix.back() + (is_continuation_at(depth, n, m) ? 0 : 1));
  }
  if (t.prefix.size() > before) charge(gap_count_, t.prefix.size() - before);
}

Nat Engine::gap_rank(Nat m, Nat depth, Nat rank) const {
  GapTable& t = gap_table(m, depth);
  std::lock_guard lock(t.mutex);
  extend_gaps(t, m, depth, rank);
  return t.prefix[rank];
}

Nat Engine::gap_select(Nat m, Nat depth, Nat r) const {
  GapTable& t = gap_table(m, depth);
  std::lock_guard lock(t.mutex);
  while (t.prefix.back() <= r) extend_gaps(t, m, depth, t.prefix.size() + t.prefix.size() / 2 + 16);
  auto it = std::lower_bound(t.prefix.begin(), t.prefix.end(), checked::add(r, 1));
  return static_cast<Nat>(it - t.prefix.begin()) - 1;
}

TreeAddress Engine::vertex_of(Nat m, Nat i) const {
  const Forest& forest = family_->factor(m);
  const LocalVertex v = forest.locate(i);
  const ComponentRef pool = Forest::pool_of(v.position);
  TreeAddress w = pool.d == 0 ? TreeAddress::root() : TreeAddress(level_unrank(pool.d, gap_select(m, pool.d, pool.r)));

  const ComponentShape& shape = forest.shape_at(v.position);
  std::vector<Nat> chain;
  for (Nat q = v.local; q != 0; q = shape.parent(q)) chain.push_back(q);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    auto slot = slot_of_demand(w, m, shape.child_rank(*it));
    if (!slot) throw Error("vertex_of: continuation missing at " + w.str());
    w = w.son(*slot);
  }
  return w;
}

}  // namespace forestfact
