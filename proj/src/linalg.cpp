#include "ffba/linalg.hpp"

#include <algorithm>

#include "ffba/error.hpp"

namespace ffba {

std::vector<Elem> Matrix::column(std::size_t c) const {
  std::vector<Elem> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  }
  return t;
}

// --- EchelonState -----------------------------------------------------------

EchelonState::EchelonState(Field field, std::size_t length)
    : field_(std::move(field)), length_(length), binary_(field_.q() == 2) {}

EchelonState::Words EchelonState::pack(std::span<const Elem> v) const {
  Words w((length_ + 63) / 64, 0);
  for (std::size_t i = 0; i < length_; ++i) {
    if (!v[i].is_zero()) w[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return w;
}

std::size_t EchelonState::reduce(Words& v) const {
  for (std::size_t k = 0; k < pivots_.size(); ++k) {
    const std::size_t p = pivots_[k];
    if ((v[p / 64] >> (p % 64)) & 1U) {
      const Words& b = bits_[k];
      for (std::size_t w = p / 64; w < v.size(); ++w) v[w] ^= b[w];
    }
  }
  for (std::size_t w = 0; w < v.size(); ++w) {
    if (v[w]) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(v[w]));
  }
  return length_;
}

std::size_t EchelonState::reduce(std::vector<Elem>& v) const {
  const Field& f = field_;
  for (std::size_t k = 0; k < pivots_.size(); ++k) {
    const std::size_t p = pivots_[k];
    const Elem c = v[p];
    if (c.is_zero()) continue;
    const auto& b = rows_[k];
    for (std::size_t i = p; i < length_; ++i) {
      if (!b[i].is_zero()) v[i] = f.sub(v[i], f.mul(c, b[i]));
    }
  }
  for (std::size_t i = 0; i < length_; ++i) {
    if (!v[i].is_zero()) return i;
  }
  return length_;
}

bool EchelonState::insert(std::span<const Elem> v) {
  if (v.size() != length_) throw Error(Errc::InvalidArgument, "vector length does not match the echelon state");
  if (binary_) {
    Words w = pack(v);
    const std::size_t p = reduce(w);
    if (p == length_) return false;
    const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, p);
    bits_.insert(bits_.begin() + pos, std::move(w));
    return true;
  }
  std::vector<Elem> w(v.begin(), v.end());
  const std::size_t p = reduce(w);
  if (p == length_) return false;
  const Elem inv = field_.inv(w[p]);
  for (std::size_t i = p; i < length_; ++i) w[i] = field_.mul(w[i], inv);
  const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, p);
  rows_.insert(rows_.begin() + pos, std::move(w));
  return true;
}

bool EchelonState::in_span(std::span<const Elem> v) const {
  if (v.size() != length_) throw Error(Errc::InvalidArgument, "vector length does not match the echelon state");
  if (binary_) {
    Words w = pack(v);
    return reduce(w) == length_;
  }
  std::vector<Elem> w(v.begin(), v.end());
  return reduce(w) == length_;
}

std::vector<Elem> EchelonState::basis_vector(std::size_t index) const {
  if (!binary_) return rows_.at(index);
  std::vector<Elem> out(length_);
  const Words& w = bits_.at(index);
  for (std::size_t i = 0; i < length_; ++i) {
    if ((w[i / 64] >> (i % 64)) & 1U) out[i] = field_.one();
  }
  return out;
}

// --- Dense helpers ----------------------------------------------------------

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(const Field& f, Matrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols && row < a.rows; ++col) {
    std::size_t sel = row;
    while (sel < a.rows && a.at(sel, col).is_zero()) ++sel;
    if (sel == a.rows) continue;
    for (std::size_t c = 0; c < a.cols; ++c) std::swap(a.at(sel, c), a.at(row, c));
    const Elem inv = f.inv(a.at(row, col));
    for (std::size_t c = 0; c < a.cols; ++c) a.at(row, c) = f.mul(a.at(row, c), inv);
    for (std::size_t r = 0; r < a.rows; ++r) {
      if (r == row) continue;
      const Elem factor = a.at(r, col);
      if (factor.is_zero()) continue;
      for (std::size_t c = 0; c < a.cols; ++c) a.at(r, c) = f.sub(a.at(r, c), f.mul(factor, a.at(row, c)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const Field& f, const Matrix& a) {
  // Rank via the incremental engine, inserting rows.
  EchelonState e(f, a.cols);
  for (std::size_t r = 0; r < a.rows; ++r) e.insert(a.row(r));
  return e.rank();
}

std::vector<std::vector<Elem>> right_kernel(const Field& f, const Matrix& a) {
  Matrix m = a;
  const auto pivots = rref(f, m);
  std::vector<bool> is_pivot(a.cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Elem>> basis;
  for (std::size_t free = 0; free < a.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Elem> x(a.cols);
    x[free] = f.one();
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = f.neg(m.at(k, free));
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<std::vector<Elem>> solve(const Field& f, const Matrix& a, std::span<const Elem> rhs) {
  if (rhs.size() != a.rows) throw Error(Errc::InvalidArgument, "right-hand side has the wrong length");
  Matrix aug(a.rows, a.cols + 1);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t c = 0; c < a.cols; ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols) = rhs[r];
  }
  const auto pivots = rref(f, aug);
  if (!pivots.empty() && pivots.back() == a.cols) return std::nullopt;
  std::vector<Elem> x(a.cols);
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.at(k, a.cols);
  return x;
}

std::vector<Elem> mat_vec(const Field& f, const Matrix& a, std::span<const Elem> x) {
  std::vector<Elem> out(a.rows);
  for (std::size_t r = 0; r < a.rows; ++r) out[r] = dot(f, a.row(r), x);
  return out;
}

std::vector<Elem> vec_mat(const Field& f, std::span<const Elem> b, const Matrix& a) {
  std::vector<Elem> out(a.cols);
  for (std::size_t r = 0; r < a.rows; ++r) {
    if (b[r].is_zero()) continue;
    for (std::size_t c = 0; c < a.cols; ++c) out[c] = f.add(out[c], f.mul(b[r], a.at(r, c)));
  }
  return out;
}

Elem dot(const Field& f, std::span<const Elem> a, std::span<const Elem> b) {
  Elem acc{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) acc = f.add(acc, f.mul(a[i], b[i]));
  }
  return acc;
}

std::optional<std::vector<Elem>> lex_min_nonzero(const Field& f, std::size_t length,
                                                 const std::vector<std::vector<Elem>>& basis) {
  // The nonzero vectors with the most leading zeros form a line spanned by the
  // echelon vector with the largest pivot; its multiple with leading one is
  // the minimum.
  EchelonState e(f, length);
  for (const auto& v : basis) e.insert(v);
  if (e.rank() == 0) return std::nullopt;
  return e.basis_vector(e.rank() - 1);
}

}  // namespace ffba
