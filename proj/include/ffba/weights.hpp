#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ffba/qval.hpp"
#include "ffba/series.hpp"

namespace ffba {

/// A weight r in Q^d: nonnegative coordinates summing to one.
class RealWeight {
 public:
  /// Throws Error(InvalidArgument) unless every r^s >= 0 and sum r^s = 1.
  explicit RealWeight(std::vector<Rational> r);
  static RealWeight equal(std::size_t d);

  std::size_t dim() const noexcept { return r_.size(); }
  const Rational& operator[](std::size_t s) const { return r_[s]; }
  const std::vector<Rational>& coords() const noexcept { return r_; }

 private:
  std::vector<Rational> r_;
};

/// A generalized weight g: N -> N^d with sum_s g^s(h) = h and each g^s
/// nondecreasing. Exactly one coordinate grows at each step, so g is stored as
/// the sequence of incremented coordinates (0-based), generated on demand and
/// memoized. Instances are cheap handles and safe to share across threads.
class GeneralizedWeight {
 public:
  /// d = 1: g(h) = (h).
  static GeneralizedWeight trivial();
  /// `prefix` then `cycle` repeated forever; coordinates are 0-based.
  static GeneralizedWeight cyclic(std::size_t d, std::vector<std::size_t> prefix, std::vector<std::size_t> cycle);
  /// g_r: g(h+1) = g(h) + e_s for the lowest s maximizing r^s (h+1) - g^s(h).
  static GeneralizedWeight induced(const RealWeight& r);
  /// Parses `equal`, `r:1/2,1/2`, `assign:1,2` (1-based, cyclic) or
  /// `assign:1,1|1,2` (prefix|cycle).
  static GeneralizedWeight parse(std::size_t d, std::string_view spec);

  std::size_t dim() const noexcept;
  /// 0-based coordinate incremented from h-1 to h (h >= 1).
  std::size_t step(std::size_t h) const;
  /// g(h).
  std::vector<std::size_t> eval(std::size_t h) const;
  /// g^s(h).
  std::size_t eval(std::size_t h, std::size_t s) const;
  /// Canonical spec string accepted by parse().
  std::string describe() const;
  /// The real weight r when g = g_r (the trivial weight is g_(1)).
  std::optional<RealWeight> real_weight() const;

 private:
  struct Impl;
  explicit GeneralizedWeight(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

/// Exact bounds of r^s h - g_r^s(h) over h <= h_max and all s.
struct DeviationReport {
  Rational min_deviation{0};
  Rational max_deviation{0};
  Rational lower_bound{0};  // -(1 - 1/d)
  Rational upper_bound{0};  // (d - 1)(1 - 1/d)
  bool within_bounds = true;
};

DeviationReport induced_weight_deviation(const RealWeight& r, std::size_t h_max);

/// Depth-H truncations of c_r(theta, gamma) (rational exponents) and
/// c_{g_r}(theta, gamma), each the minimum over nonzero N with deg N <= H.
struct ConstantComparison {
  RatQVal real_weight;
  QVal generalized;
  bool precision_limited = false;
};

ConstantComparison compare_constants(const SeriesVector& theta, const SeriesVector& gamma, const RealWeight& r,
                                     std::size_t max_degree, std::size_t precision);

}  // namespace ffba
