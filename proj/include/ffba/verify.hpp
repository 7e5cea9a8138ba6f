#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ffba/poly.hpp"
#include "ffba/qval.hpp"
#include "ffba/series.hpp"
#include "ffba/weights.hpp"

namespace ffba {

/// Minimum of a per-N quantity over nonzero N in a degree range. When a
/// fractional part vanished to the scanned precision without certification,
/// precision_limited is set and the value used for that N is its upper bound,
/// so the reported minimum may sit above the true one.
struct DepthBoundedConstant {
  QVal value;
  Poly witness = Poly(Field::prime(2));
  std::size_t depth = 0;
  bool precision_limited = false;
};

/// min over nonzero N with deg N <= H of |N| |<N theta - gamma>|.
/// `threads` > 1 splits the scan by degree; the result does not depend on it.
DepthBoundedConstant c_depth(const LaurentSeries& theta, const LaurentSeries& gamma, std::size_t max_degree,
                             std::size_t precision, unsigned threads = 1);

/// min over N of max_s q^{g^s(deg N)} |<N theta^s - gamma^s>|, with the
/// factor taken as 1 for deg N = 0.
DepthBoundedConstant c_depth_weighted(const SeriesVector& theta, const SeriesVector& gamma,
                                      const GeneralizedWeight& g, std::size_t max_degree, std::size_t precision,
                                      unsigned threads = 1);

/// min of |N| |<N theta - gamma>| over lo <= deg N <= hi.
DepthBoundedConstant c_liminf_depth(const LaurentSeries& theta, const LaurentSeries& gamma, std::size_t lo,
                                    std::size_t hi, std::size_t precision);

/// (LHS, RHS) with LHS = [max_s q^{g^s(h+1+ell)} |<N theta^s - gamma^s>| < 1]
/// evaluated through absolute values, and RHS = [Delta[h+1+ell, h+1] n =
/// pi_{g(h+1+ell)}(gamma)] evaluated through the matrix, h = deg N.
std::pair<bool, bool> matrix_condition_check(const SeriesVector& theta, const SeriesVector& gamma,
                                             const GeneralizedWeight& g, const Poly& n, std::size_t ell);

struct Witness {
  Poly n = Poly(Field::prime(2));
  /// The system Delta[m, m] n = pi_m(gamma) that produced it, and the
  /// truncated size m' = deg N + 1.
  std::size_t m = 0;
  std::size_t m_truncated = 0;
  /// Upper bound on |N| |<N theta - gamma>| by direct evaluation.
  QVal value;
};

/// The first m <= max_m for which Delta[m, m] n = pi_m(gamma) has a nonzero
/// solution, reduced to its top nonzero coordinate; nullopt when none exists.
std::optional<Witness> find_witness_small(const LaurentSeries& theta, const LaurentSeries& gamma,
                                          std::size_t max_m);

struct M0Structure {
  /// First m with Delta[m, m] singular; nullopt when all m <= depth are invertible.
  std::optional<std::size_t> m0;
  std::size_t depth = 0;
  bool pattern_consistent = true;
  /// First singular m1 followed by an invertible m2 > m1.
  std::optional<std::pair<std::size_t, std::size_t>> violation;
};

M0Structure m0_structure(const LaurentSeries& theta, std::size_t depth);

struct LiminfStructure {
  std::vector<bool> spectrum;
  /// Pairs (m, m+1) with Delta[m, m] singular and Delta[m+1, m+1] invertible.
  std::vector<std::pair<std::size_t, std::size_t>> alternations;
  bool reaches_k = false;
};

LiminfStructure liminf_structure(const LaurentSeries& theta, std::size_t depth, std::size_t k);

}  // namespace ffba
