#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ffba/field.hpp"

namespace ffba {

using BigRational = boost::multiprecision::cpp_rational;

/// Stage k of a Cantor construction fixes ell_k^s further digits in
/// coordinate s and removes q^{ell'_k} of the q^{ellbar_k} extensions of each
/// retained cylinder, where ellbar_k = sum_s ell_k^s.
class ConstructionSchedule {
 public:
  /// The (q^{ellbar}, q^{ell'}) schedule repeated forever.
  static ConstructionSchedule constant(std::vector<std::size_t> ell, std::size_t ell_prime);
  /// A finite list of stages.
  static ConstructionSchedule explicit_stages(std::vector<std::vector<std::size_t>> ell,
                                              std::vector<std::size_t> ell_prime);

  std::size_t dim() const noexcept { return d_; }
  bool is_constant() const noexcept { return constant_; }
  /// Stages available (unbounded for constant schedules).
  std::optional<std::size_t> length() const noexcept;
  const std::vector<std::size_t>& ell(std::size_t k) const;
  std::size_t ell_prime(std::size_t k) const;
  std::size_t ell_bar(std::size_t k) const;

 private:
  ConstructionSchedule() = default;
  void validate() const;

  std::size_t d_ = 1;
  bool constant_ = false;
  std::vector<std::vector<std::size_t>> ell_;
  std::vector<std::size_t> ell_prime_;
};

/// 1 - q^{ell'_k - ellbar_k}, the fraction of measure stage k keeps.
BigRational survival_factor(const ConstructionSchedule& s, unsigned q, std::size_t k);

struct MeasureReport {
  BigRational measure{1};
  /// Set for constant schedules: ellbar - ell' is bounded, so the measure of
  /// the limit set is zero.
  std::optional<bool> tends_to_zero;
};

/// prod_{k<m} (q^{ellbar_k} - q^{ell'_k}) / q^{ellbar_k}. Throws
/// Error(InvalidSchedule) when ell' >= ellbar at a used stage or m exceeds an
/// explicit schedule.
MeasureReport measure_after_stages(const ConstructionSchedule& s, unsigned q, std::size_t m);

struct DimensionBound {
  double at_m = 0;
  std::optional<double> limit;
};

/// log(q/(q-1)) / log q.
double kappa(unsigned q);

/// d - (m+1) / (min_s sum_{k<m} ell_k^s) * kappa(q), and for constant
/// schedules the limit d - kappa(q) / min_s ell^s. Throws
/// Error(DegenerateSchedule) when the minimum sum vanishes.
DimensionBound dimension_lower_bound(const ConstructionSchedule& s, unsigned q, std::size_t m);

/// The cylinders retained at one stage. Each block lists the fixed digits in
/// coordinate order: ell[0] digits of coordinate 1, then ell[1] of coordinate 2.
struct CylinderSet {
  std::vector<std::size_t> ell;
  std::vector<std::vector<Elem>> blocks;

  std::size_t ell_bar() const noexcept;
  /// Measure of the union: |blocks| q^{-ellbar}.
  BigRational measure(unsigned q) const;
};

struct TreeLikeViolation {
  int condition = 0;
  std::size_t stage = 0;
  std::string detail;
};

struct TreeLikeReport {
  std::vector<TreeLikeViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Finite-prefix checks of the tree-like conditions:
///  1 stage 0 is the whole cube,
///  2 every stage is nonempty and its blocks are well formed,
///  3 cylinders of one stage are distinct (hence disjoint),
///  4 every cylinder refines one of the previous stage,
///  5 every cylinder has a refinement at the next stage,
///  6 diameters q^{-min_s ell^s} never grow and end below the first.
TreeLikeReport validate_tree_like(const std::vector<CylinderSet>& stages, unsigned q);

}  // namespace ffba
