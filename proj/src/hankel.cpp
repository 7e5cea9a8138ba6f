#include "ffba/hankel.hpp"

#include <algorithm>

#include "ffba/error.hpp"

namespace ffba {

HankelView::HankelView(const SeriesVector& theta, GeneralizedWeight g) : theta_(&theta), g_(std::move(g)) {
  if (theta.empty()) throw Error(Errc::InvalidArgument, "theta must have at least one coordinate");
  if (theta.size() != g_.dim()) {
    throw Error(Errc::InvalidArgument, "theta has " + std::to_string(theta.size()) +
                                           " coordinates but the weight has dimension " + std::to_string(g_.dim()));
  }
  for (const auto& s : theta) {
    if (!(s.field() == theta.front().field())) throw Error(Errc::InvalidArgument, "theta coordinates over different fields");
  }
}

Elem HankelView::entry(std::size_t s, std::size_t r, std::size_t c) const { return (*theta_)[s].coeff(r - 1 + c); }

std::vector<Elem> HankelView::column(std::size_t i, std::size_t c) const {
  const auto gi = g_.eval(i);
  std::vector<Elem> out;
  out.reserve(i);
  for (std::size_t s = 0; s < dim(); ++s) {
    for (std::size_t r = 1; r <= gi[s]; ++r) out.push_back(entry(s, r, c));
  }
  return out;
}

std::vector<Elem> HankelView::row(std::size_t i, std::size_t h, std::size_t j) const {
  const auto gi = g_.eval(i);
  std::size_t s = 0;
  std::size_t r = h;
  while (s < dim() && r > gi[s]) r -= gi[s++];
  if (s == dim() || h == 0) throw Error(Errc::InvalidArgument, "row index outside Delta[i, j]");
  std::vector<Elem> out(j);
  for (std::size_t c = 1; c <= j; ++c) out[c - 1] = entry(s, r, c);
  return out;
}

std::vector<Elem> HankelView::new_row(std::size_t i, std::size_t j) const {
  const std::size_t s = g_.step(i);
  const std::size_t r = g_.eval(i, s);
  std::vector<Elem> out(j);
  for (std::size_t c = 1; c <= j; ++c) out[c - 1] = entry(s, r, c);
  return out;
}

Matrix HankelView::matrix(std::size_t i, std::size_t j) const {
  Matrix m(i, j);
  for (std::size_t c = 1; c <= j; ++c) {
    const auto col = column(i, c);
    for (std::size_t r = 0; r < i; ++r) m.at(r, c - 1) = col[r];
  }
  return m;
}

std::optional<std::size_t> HankelView::column_guarantee(std::size_t i) const {
  const auto gi = g_.eval(i);
  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < dim(); ++s) {
    if (gi[s] == 0) continue;
    const auto g = (*theta_)[s].frac().guarantee();
    if (!g) continue;
    // column c needs theta^s_{g^s(i) - 1 + c}
    const std::size_t limit = *g + 1 >= gi[s] ? *g + 1 - gi[s] : 0;
    best = best ? std::min(*best, limit) : limit;
  }
  return best;
}

Elem delta_entry(const SeriesVector& theta, std::size_t s, std::size_t r, std::size_t c) {
  if (s >= theta.size() || r == 0 || c == 0) throw Error(Errc::InvalidArgument, "Delta entry index out of range");
  return theta[s].coeff(r - 1 + c);
}

std::vector<std::size_t> rank_profile(const SeriesVector& theta, const GeneralizedWeight& g, std::size_t i,
                                      std::size_t j_max) {
  const HankelView view(theta, g);
  EchelonState echelon(view.field(), i);
  std::vector<std::size_t> out;
  out.reserve(j_max);
  for (std::size_t c = 1; c <= j_max; ++c) {
    if (echelon.rank() < i) echelon.insert(view.column(i, c));
    out.push_back(echelon.rank());
  }
  return out;
}

std::optional<std::vector<Elem>> left_null_vector(const SeriesVector& theta, const GeneralizedWeight& g,
                                                  std::size_t i, std::size_t j) {
  const HankelView view(theta, g);
  const Field& f = view.field();
  if (i == 0) return std::nullopt;
  if (j == 0) {
    std::vector<Elem> e(i);
    e[i - 1] = f.one();
    return e;
  }
  const Matrix at = view.matrix(i, j).transposed();
  return lex_min_nonzero(f, i, right_kernel(f, at));
}

std::vector<bool> square_invertibility_spectrum(const LaurentSeries& theta, std::size_t m_max) {
  if (auto g = theta.frac().guarantee(); g && *g + 1 < 2 * m_max) {
    throw InsufficientPrecision(*g + 1, "spectrum to depth " + std::to_string(m_max) + " needs " +
                                            std::to_string(2 * m_max - 1) + " coefficients");
  }
  const SeriesVector v{theta};
  const HankelView view(v, GeneralizedWeight::trivial());
  std::vector<bool> out;
  out.reserve(m_max);
  for (std::size_t m = 1; m <= m_max; ++m) {
    EchelonState e(view.field(), m);
    for (std::size_t c = 1; c <= m && e.rank() + (m - c + 1) >= m; ++c) e.insert(view.column(m, c));
    out.push_back(e.rank() == m);
  }
  return out;
}

}  // namespace ffba
