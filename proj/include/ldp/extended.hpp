#pragma once

#include <limits>
#include <ostream>

#include "ldp/errors.hpp"

namespace ldp {

/// A value in [-inf, +inf] restricted to "finite or +infinity", the range of
/// rate functions and relative entropies. Infinity is a tag, never a float.
class Extended {
 public:
  constexpr Extended() = default;
  constexpr Extended(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr Extended infinity() {
    Extended e;
    e.infinite_ = true;
    return e;
  }

  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }

  /// The finite value. Throws DomainError for +infinity.
  double value() const {
    if (infinite_) throw DomainError("Extended::value() called on +infinity");
    return value_;
  }

  /// Lossy conversion for printing and plotting.
  constexpr double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr bool operator==(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Extended& e) {
    if (e.infinite_) return os << "+inf";
    return os << e.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace ldp
