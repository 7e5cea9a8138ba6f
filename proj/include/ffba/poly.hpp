#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ffba/field.hpp"
#include "ffba/qval.hpp"

namespace ffba {

/// A polynomial in F_q[t]. coeffs()[s] is the coefficient of t^s; the stored
/// vector never ends in a zero, so the zero polynomial has no coefficients.
class Poly {
 public:
  explicit Poly(Field field) : field_(std::move(field)) {}
  Poly(Field field, std::vector<Elem> coeffs);

  static Poly constant(Field field, Elem c);
  static Poly monomial(Field field, Elem c, std::size_t degree);
  /// Coefficient codes, constant term first.
  static Poly from_codes(Field field, const std::vector<unsigned>& codes);

  const Field& field() const noexcept { return field_; }
  const std::vector<Elem>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree, or -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  /// Coefficient of t^s (zero past the degree).
  Elem coeff(std::size_t s) const noexcept { return s < coeffs_.size() ? coeffs_[s] : Elem{}; }
  Elem leading() const noexcept { return is_zero() ? Elem{} : coeffs_.back(); }
  /// |N| = q^{deg N}, and |0| = 0.
  QVal abs() const noexcept { return is_zero() ? QVal::zero() : QVal::exp(degree()); }

  std::vector<unsigned> codes() const;
  std::string to_string() const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  Field field_;
  std::vector<Elem> coeffs_;
};

/// (Q, R) with a = Q*b + R and |R| < |b|. Throws Error(DivisionByZero).
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);

}  // namespace ffba
