#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ffba {

/// An element of F_q, stored as its code: the coordinates (c_0, ..., c_{k-1})
/// over F_p in the polynomial basis read as the base-p integer sum c_i p^i.
/// Code 0 is zero and code 1 is one; the code order is the element order used
/// wherever a canonical ("lexicographically smallest") choice is made.
struct Elem {
  std::uint16_t code = 0;

  constexpr bool is_zero() const noexcept { return code == 0; }
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

inline std::ostream& operator<<(std::ostream& os, Elem e) { return os << e.code; }

/// The finite field F_q, q = p^k, with arithmetic through precomputed tables.
/// A Field is a cheap, immutable handle; copies share the same tables and may
/// be used concurrently.
class Field {
 public:
  /// Largest field order supported by the table representation.
  static constexpr unsigned kMaxOrder = 1024;

  /// F_p for a prime p.
  static Field prime(unsigned p);
  /// F_{p^k} = F_p[x]/(modulus). `modulus` lists coefficients constant term
  /// first and must have degree exactly k; it is normalized to be monic.
  /// For k > 1 without a modulus, a built-in default is used when one exists.
  static Field make(unsigned p, unsigned k, std::optional<std::vector<unsigned>> modulus = {});
  /// The field of order q with the default modulus.
  static Field of_order(unsigned q);

  unsigned p() const noexcept;
  unsigned k() const noexcept;
  unsigned q() const noexcept;
  /// Monic modulus, constant term first; {0, 1} (i.e. x) when k == 1.
  const std::vector<unsigned>& modulus() const noexcept;

  Elem zero() const noexcept { return Elem{0}; }
  Elem one() const noexcept { return Elem{1}; }

  Elem add(Elem a, Elem b) const noexcept;
  Elem sub(Elem a, Elem b) const noexcept;
  Elem mul(Elem a, Elem b) const noexcept;
  Elem neg(Elem a) const noexcept;
  /// Throws Error(DivisionByZero) for a == 0.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const;
  Elem pow(Elem a, unsigned e) const noexcept;

  /// Element with the given code; throws Error(InvalidArgument) when code >= q.
  Elem elem(unsigned code) const;
  /// Image of an integer under Z -> F_p -> F_q.
  Elem from_int(long long n) const noexcept;
  /// All q elements in code order.
  std::vector<Elem> elements() const;

  /// Human-readable polynomial-basis rendering, e.g. "x+1".
  std::string to_string(Elem a) const;

  friend bool operator==(const Field& a, const Field& b) noexcept;

 private:
  struct Tables;
  explicit Field(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}
  std::shared_ptr<const Tables> t_;
};

bool is_prime(unsigned n) noexcept;
/// Default irreducible modulus for q = p^k, if one ships with the library.
std::optional<std::vector<unsigned>> default_modulus(unsigned p, unsigned k);

}  // namespace ffba
