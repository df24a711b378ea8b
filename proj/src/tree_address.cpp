#include "forestfact/tree_address.hpp"

#include <algorithm>
#include <charconv>

#include "forestfact/enumeration.hpp"

namespace forestfact {

Nat TreeAddress::last_slot() const {
  if (slots_.empty()) throw RangeError("the root has no slot");
  return slots_.back();
}

TreeAddress TreeAddress::parent() const {
  if (slots_.empty()) throw RangeError("the root has no parent");
  return TreeAddress({slots_.begin(), slots_.end() - 1});
}

TreeAddress TreeAddress::son(Nat slot) const {
  auto s = slots_;
  s.push_back(slot);
  return TreeAddress(std::move(s));
}

Nat TreeAddress::level_rank() const { return forestfact::level_rank(slots_); }

std::string TreeAddress::str() const {
  if (slots_.empty()) return "/";
  std::string out;
  for (auto s : slots_) {
    out += '/';
    out += std::to_string(s);
  }
  return out;
}

TreeAddress TreeAddress::parse(std::string_view text) {
  if (text.empty() || text.front() != '/') throw ValidationError("address must start with '/': " + std::string(text));
  if (text == "/") return {};
  std::vector<Nat> slots;
  std::size_t pos = 1;
  while (pos <= text.size()) {
    auto next = text.find('/', pos);
    if (next == std::string_view::npos) next = text.size();
    auto part = text.substr(pos, next - pos);
    Nat v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size())
      throw ValidationError("malformed address: " + std::string(text));
    slots.push_back(v);
    pos = next + 1;
  }
  return TreeAddress(std::move(slots));
}

Nat sphere_size(Nat d, Nat k) {
  Nat n = 1;
  for (Nat i = 0; i < d; ++i) n = checked::mul(n, k);
  return n;
}

Nat ball_size(Nat d, Nat k) {
  Nat n = 0;
  for (Nat i = 0; i <= d; ++i) n = checked::add(n, sphere_size(i, k));
  return n;
}

std::vector<TreeAddress> sphere(Nat d, Nat k) {
  std::vector<TreeAddress> out;
  if (d == 0) {
    out.emplace_back();
    return out;
  }
  if (k == 0) return out;
  out.reserve(sphere_size(d, k));
  std::vector<Nat> slots(d, 0);
  for (;;) {
    out.emplace_back(slots);
    std::size_t pos = d;
    while (pos > 0 && ++slots[pos - 1] == k) slots[--pos] = 0;
    if (pos == 0) break;
  }
  std::vector<std::pair<Nat, std::size_t>> keyed;
  keyed.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) keyed.emplace_back(out[i].level_rank(), i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<TreeAddress> sorted;
  sorted.reserve(out.size());
  for (auto& [rank, idx] : keyed) sorted.push_back(std::move(out[idx]));
  return sorted;
}

std::vector<TreeAddress> ball(Nat d, Nat k) {
  std::vector<TreeAddress> out;
  for (Nat i = 0; i <= d; ++i) {
    auto s = sphere(i, k);
    out.insert(out.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  }
  return out;
}

}  // namespace forestfact
