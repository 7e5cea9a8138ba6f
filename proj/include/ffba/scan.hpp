#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ffba/field.hpp"
#include "ffba/series.hpp"

namespace ffba {

/// Calls fn(coeffs) for every polynomial of degree exactly h, in the odometer
/// order of (n_0, ..., n_{h-1}) with the leading coefficient n_h outermost.
/// `coeffs` holds n_0..n_h.
template <class Fn>
void for_each_poly_of_degree(const Field& f, std::size_t h, Fn&& fn) {
  const unsigned q = f.q();
  std::vector<Elem> c(h + 1);
  for (unsigned lead = 1; lead < q; ++lead) {
    c[h] = Elem{static_cast<std::uint16_t>(lead)};
    std::fill(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(h), Elem{});
    while (true) {
      fn(static_cast<const std::vector<Elem>&>(c));
      std::size_t pos = 0;
      while (pos < h && c[pos].code + 1U == q) c[pos++] = Elem{};
      if (pos == h) break;
      c[pos].code = static_cast<std::uint16_t>(c[pos].code + 1U);
    }
  }
}

/// Calls fn(coeffs) for every nonzero polynomial of degree <= max_degree, by
/// increasing degree.
template <class Fn>
void for_each_nonzero_poly(const Field& f, std::size_t max_degree, Fn&& fn) {
  for (std::size_t h = 0; h <= max_degree; ++h) for_each_poly_of_degree(f, h, fn);
}

/// Evaluates |<N theta - gamma>| for many N of degree <= max_degree against a
/// precomputed window of `precision` coefficients.
class AffineScanner {
 public:
  /// Throws InsufficientPrecision when theta lacks precision + max_degree
  /// coefficients or gamma lacks precision coefficients.
  AffineScanner(const LaurentSeries& theta, const LaurentSeries& gamma, std::size_t max_degree,
                std::size_t precision);

  /// coeffs = n_0..n_h, h <= max_degree.
  FracAbs eval(const std::vector<Elem>& coeffs) const;

 private:
  const LaurentSeries* theta_;
  const LaurentSeries* gamma_;
  Field field_;
  std::size_t precision_;
  std::vector<Elem> theta_digits_;  // [i] = theta_{i+1}
  std::vector<Elem> gamma_digits_;
};

}  // namespace ffba
