#pragma once

#include <boost/rational.hpp>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace ffba {

/// An absolute value q^e carried as its exponent, or zero.
/// Ordered as Zero < Exp(e) < Exp(e') for e < e'; products add exponents.
class QVal {
 public:
  constexpr QVal() = default;
  static constexpr QVal zero() { return QVal(); }
  static constexpr QVal exp(std::int64_t e) { return QVal(e); }

  constexpr bool is_zero() const noexcept { return zero_; }
  /// Exponent of a nonzero value.
  constexpr std::int64_t exponent() const noexcept { return e_; }

  friend constexpr bool operator==(QVal a, QVal b) noexcept {
    return a.zero_ == b.zero_ && (a.zero_ || a.e_ == b.e_);
  }
  friend constexpr std::strong_ordering operator<=>(QVal a, QVal b) noexcept {
    if (a.zero_ || b.zero_) return b.zero_ <=> a.zero_;
    return a.e_ <=> b.e_;
  }
  friend constexpr QVal operator*(QVal a, QVal b) noexcept {
    if (a.zero_ || b.zero_) return zero();
    return exp(a.e_ + b.e_);
  }

  std::string to_string() const {
    return zero_ ? std::string("0") : "q^" + std::to_string(e_);
  }

 private:
  constexpr explicit QVal(std::int64_t e) : zero_(false), e_(e) {}
  bool zero_ = true;
  std::int64_t e_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, QVal v) { return os << v.to_string(); }

using Rational = boost::rational<std::int64_t>;

/// q^e with an exact rational exponent (real-weight comparisons), or zero.
class RatQVal {
 public:
  RatQVal() = default;
  static RatQVal zero() { return RatQVal(); }
  static RatQVal exp(Rational e) {
    RatQVal v;
    v.zero_ = false;
    v.e_ = e;
    return v;
  }

  bool is_zero() const noexcept { return zero_; }
  Rational exponent() const noexcept { return e_; }

  friend bool operator==(const RatQVal& a, const RatQVal& b) {
    return a.zero_ == b.zero_ && (a.zero_ || a.e_ == b.e_);
  }
  friend bool operator<(const RatQVal& a, const RatQVal& b) {
    if (a.zero_ || b.zero_) return a.zero_ && !b.zero_;
    return a.e_ < b.e_;
  }

  std::string to_string() const {
    if (zero_) return "0";
    return "q^" + std::to_string(e_.numerator()) +
           (e_.denominator() == 1 ? std::string{} : "/" + std::to_string(e_.denominator()));
  }

 private:
  bool zero_ = true;
  Rational e_{0};
};

}  // namespace ffba
