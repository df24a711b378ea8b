#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace forestfact {

using Nat = std::uint64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a natural-number computation would leave the 64-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Thrown when a memo table grows past its configured budget.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// A countable cardinal: either a natural number or omega.
class Count {
 public:
  constexpr Count() = default;
  constexpr explicit Count(Nat n) : value_(n) {}
  static constexpr Count omega() {
    Count c;
    c.value_.reset();
    return c;
  }

  constexpr bool is_omega() const { return !value_.has_value(); }
  constexpr bool is_finite() const { return value_.has_value(); }

  /// The finite value; throws on omega.
  Nat finite() const {
    if (!value_) throw RangeError("Count: omega has no finite value");
    return *value_;
  }

  /// k < *this, with every natural below omega.
  constexpr bool exceeds(Nat k) const { return !value_ || k < *value_; }

  constexpr bool operator==(const Count&) const = default;

  std::string str() const { return value_ ? std::to_string(*value_) : "omega"; }

 private:
  std::optional<Nat> value_ = Nat{0};
};

namespace checked {

inline Nat add(Nat a, Nat b) {
  Nat r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("natural overflow in addition");
  return r;
}

inline Nat mul(Nat a, Nat b) {
  Nat r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("natural overflow in multiplication");
  return r;
}

inline Nat narrow(unsigned __int128 v) {
  if (v > static_cast<unsigned __int128>(UINT64_MAX)) throw OverflowError("natural exceeds 64 bits");
  return static_cast<Nat>(v);
}

}  // namespace checked

}  // namespace forestfact
