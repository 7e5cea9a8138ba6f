#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ffba/field.hpp"

namespace ffba {

/// Dense row-major matrix over F_q.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Elem& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  Elem at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const Elem> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  std::vector<Elem> column(std::size_t c) const;
  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Incremental span of vectors of fixed length over F_q, kept in row echelon
/// form with one basis vector per pivot. insert() returns whether the rank
/// grew; a vector never decreases the rank and raises it by at most one.
/// Over F_2 vectors are packed into 64-bit words.
class EchelonState {
 public:
  EchelonState(Field field, std::size_t length);

  bool insert(std::span<const Elem> v);
  bool in_span(std::span<const Elem> v) const;
  std::size_t rank() const noexcept { return pivots_.size(); }
  std::size_t length() const noexcept { return length_; }
  /// Pivot positions in increasing order.
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
  /// Basis vector with the given pivot rank-order index, normalized to a
  /// leading one.
  std::vector<Elem> basis_vector(std::size_t index) const;

 private:
  using Words = std::vector<std::uint64_t>;
  Words pack(std::span<const Elem> v) const;
  /// Reduces v in place; returns its first nonzero position, or length_.
  std::size_t reduce(std::vector<Elem>& v) const;
  std::size_t reduce(Words& v) const;

  Field field_;
  std::size_t length_;
  bool binary_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<Elem>> rows_;
  std::vector<Words> bits_;
};

std::size_t rank(const Field& f, const Matrix& a);
/// Basis of {x : A x = 0}.
std::vector<std::vector<Elem>> right_kernel(const Field& f, const Matrix& a);
/// Some x with A x = rhs (free variables set to zero), or nullopt.
std::optional<std::vector<Elem>> solve(const Field& f, const Matrix& a, std::span<const Elem> rhs);
std::vector<Elem> mat_vec(const Field& f, const Matrix& a, std::span<const Elem> x);
/// b^T A.
std::vector<Elem> vec_mat(const Field& f, std::span<const Elem> b, const Matrix& a);
Elem dot(const Field& f, std::span<const Elem> a, std::span<const Elem> b);
/// The lexicographically smallest nonzero vector (in the element code order)
/// of the span of `basis`, or nullopt if the span is trivial.
std::optional<std::vector<Elem>> lex_min_nonzero(const Field& f, std::size_t length,
                                                 const std::vector<std::vector<Elem>>& basis);

}  // namespace ffba
