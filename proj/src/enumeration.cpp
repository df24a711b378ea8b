#include "forestfact/enumeration.hpp"

#include <cmath>
#include <string>

namespace forestfact {

namespace {

// floor((sqrt(8n+1)-1)/2): the diagonal containing code n.
Nat diagonal_of(Nat n) {
  using U = unsigned __int128;
  auto w = static_cast<Nat>((std::sqrt(8.0L * static_cast<long double>(n) + 1.0L) - 1.0L) / 2.0L);
  auto tri = [](Nat x) { return static_cast<U>(x) * (x + 1) / 2; };
  while (w > 0 && tri(w) > n) --w;
  while (tri(w + 1) <= n) ++w;
  return w;
}

}  // namespace

Nat pair(Nat a, Nat b) {
  using U = unsigned __int128;
  U s = static_cast<U>(a) + b;
  if (s >> 34) throw OverflowError("pair(" + std::to_string(a) + ", " + std::to_string(b) + ") exceeds 64 bits");
  return checked::narrow(s * (s + 1) / 2 + b);
}

std::pair<Nat, Nat> unpair(Nat n) {
  using U = unsigned __int128;
  Nat w = diagonal_of(n);
  auto t = static_cast<Nat>(static_cast<U>(w) * (w + 1) / 2);
  Nat b = n - t;
  return {w - b, b};
}

std::strong_ordering lex_cmp(const LexTriple& a, const LexTriple& b) { return a <=> b; }

Nat level_rank(std::span<const Nat> slots) {
  if (slots.empty()) return 0;
  Nat r = slots.front();
  for (auto s : slots.subspan(1)) r = pair(r, s);
  return r;
}

std::vector<Nat> level_unrank(Nat depth, Nat rank) {
  if (depth == 0) {
    if (rank != 0) throw RangeError("level_unrank: the root is the only depth-0 address");
    return {};
  }
  std::vector<Nat> slots(depth);
  for (Nat d = depth; d > 1; --d) {
    auto [prefix, last] = unpair(rank);
    slots[d - 1] = last;
    rank = prefix;
  }
  slots[0] = rank;
  return slots;
}

XClass x_partition_decode(Nat slot) {
  auto [m, rest] = unpair(slot);
  auto [t, r] = unpair(rest);
  return {m, t, r};
}

Nat x_partition_encode(const XClass& c) { return pair(c.m, pair(c.t, c.r)); }

}  // namespace forestfact
