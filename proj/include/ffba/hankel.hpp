#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ffba/linalg.hpp"
#include "ffba/series.hpp"
#include "ffba/weights.hpp"

namespace ffba {

/// The block Hankel matrix Delta[i, j] of a vector theta under a weight g.
/// Block s has g^s(i) rows; row r (1-based) of block s, column c (1-based)
/// holds theta^s_{r-1+c}. Blocks are stacked in coordinate order, so for
/// d = 1 this is the plain Hankel matrix with entry (r, c) = theta_{r-1+c}.
class HankelView {
 public:
  HankelView(const SeriesVector& theta, GeneralizedWeight g);

  const Field& field() const noexcept { return theta_->front().field(); }
  std::size_t dim() const noexcept { return theta_->size(); }
  const SeriesVector& theta() const noexcept { return *theta_; }
  const GeneralizedWeight& weight() const noexcept { return g_; }

  /// theta^s_{r-1+c}; s is 0-based, r and c are 1-based.
  Elem entry(std::size_t s, std::size_t r, std::size_t c) const;
  /// Column c of Delta[i, .] in stacked block order.
  std::vector<Elem> column(std::size_t i, std::size_t c) const;
  /// Row h (1-based, stacked order) of Delta[i, j].
  std::vector<Elem> row(std::size_t i, std::size_t h, std::size_t j) const;
  /// The row added when going from i-1 to i rows: block step(i), its last row.
  std::vector<Elem> new_row(std::size_t i, std::size_t j) const;
  Matrix matrix(std::size_t i, std::size_t j) const;

  /// Largest column index c such that every entry of column c of Delta[i, .]
  /// is available from the sources (nullopt when unbounded).
  std::optional<std::size_t> column_guarantee(std::size_t i) const;

 private:
  const SeriesVector* theta_;
  GeneralizedWeight g_;
};

/// delta_entry: theta^s_{r-1+c}.
Elem delta_entry(const SeriesVector& theta, std::size_t s, std::size_t r, std::size_t c);

/// rank(Delta[i, j]) for j = 1..j_max via column-append elimination.
std::vector<std::size_t> rank_profile(const SeriesVector& theta, const GeneralizedWeight& g, std::size_t i,
                                      std::size_t j_max);

/// The lexicographically smallest nonzero b with b^t Delta[i, j] = 0, or
/// nullopt when Delta[i, j] has full row rank. j = 0 means no constraint.
std::optional<std::vector<Elem>> left_null_vector(const SeriesVector& theta, const GeneralizedWeight& g,
                                                  std::size_t i, std::size_t j);

/// Entry m-1 is true iff det Delta[m, m] != 0, m = 1..m_max.
std::vector<bool> square_invertibility_spectrum(const LaurentSeries& theta, std::size_t m_max);

}  // namespace ffba
