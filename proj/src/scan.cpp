#include "ffba/scan.hpp"

namespace ffba {

AffineScanner::AffineScanner(const LaurentSeries& theta, const LaurentSeries& gamma, std::size_t max_degree,
                             std::size_t precision)
    : theta_(&theta), gamma_(&gamma), field_(theta.field()), precision_(precision),
      theta_digits_(theta.frac().prefix(precision + max_degree)), gamma_digits_(gamma.frac().prefix(precision)) {}

FracAbs AffineScanner::eval(const std::vector<Elem>& coeffs) const {
  const Field& f = field_;
  for (std::size_t i = 0; i < precision_; ++i) {
    Elem acc = f.neg(gamma_digits_[i]);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (!coeffs[k].is_zero()) acc = f.add(acc, f.mul(coeffs[k], theta_digits_[i + k]));
    }
    if (!acc.is_zero()) return {FracAbs::Kind::Exact, QVal::exp(-static_cast<std::int64_t>(i + 1)), precision_};
  }
  // Every scanned digit vanished; let the exact route settle it if it can.
  return frac_abs_affine(Poly(f, coeffs), *theta_, *gamma_, precision_);
}

}  // namespace ffba
