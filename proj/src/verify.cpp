#include "ffba/verify.hpp"

#include <algorithm>
#include <future>

#include "ffba/error.hpp"
#include "ffba/hankel.hpp"
#include "ffba/linalg.hpp"
#include "ffba/scan.hpp"

namespace ffba {

namespace {

struct Partial {
  bool have = false;
  QVal value;
  std::vector<Elem> witness;
  bool precision_limited = false;
};

// Scans one degree; weight == nullptr means the one-dimensional |N| factor.
Partial scan_degree(const std::vector<AffineScanner>& scanners, const GeneralizedWeight* weight, const Field& f,
                    std::size_t h) {
  Partial best;
  std::vector<std::int64_t> factor(scanners.size(), static_cast<std::int64_t>(h));
  if (weight) {
    for (std::size_t s = 0; s < scanners.size(); ++s) {
      factor[s] = h == 0 ? 0 : static_cast<std::int64_t>(weight->eval(h, s));
    }
  }
  for_each_poly_of_degree(f, h, [&](const std::vector<Elem>& n) {
    QVal worst = QVal::zero();
    for (std::size_t s = 0; s < scanners.size(); ++s) {
      const FracAbs fa = scanners[s].eval(n);
      if (!fa.exact()) best.precision_limited = true;
      if (fa.value.is_zero()) continue;
      worst = std::max(worst, QVal::exp(factor[s] + fa.value.exponent()));
    }
    if (!best.have || worst < best.value) {
      best.have = true;
      best.value = worst;
      best.witness = n;
    }
  });
  return best;
}

DepthBoundedConstant scan_range(const SeriesVector& theta, const SeriesVector& gamma, const GeneralizedWeight* g,
                                std::size_t lo, std::size_t hi, std::size_t precision, unsigned threads) {
  if (theta.empty() || theta.size() != gamma.size()) {
    throw Error(Errc::InvalidArgument, "theta and gamma must have the same positive dimension");
  }
  if (g && g->dim() != theta.size()) throw Error(Errc::InvalidArgument, "weight dimension differs from theta");
  if (lo > hi) throw Error(Errc::InvalidArgument, "empty degree window");
  const Field& f = theta.front().field();
  std::vector<AffineScanner> scanners;
  scanners.reserve(theta.size());
  for (std::size_t s = 0; s < theta.size(); ++s) scanners.emplace_back(theta[s], gamma[s], hi, precision);

  std::vector<Partial> parts(hi - lo + 1);
  if (threads <= 1) {
    for (std::size_t h = lo; h <= hi; ++h) parts[h - lo] = scan_degree(scanners, g, f, h);
  } else {
    for (std::size_t start = lo; start <= hi; start += threads) {
      const std::size_t end = std::min<std::size_t>(hi, start + threads - 1);
      std::vector<std::future<Partial>> jobs;
      for (std::size_t h = start; h <= end; ++h) {
        jobs.push_back(std::async(std::launch::async, [&, h] { return scan_degree(scanners, g, f, h); }));
      }
      for (std::size_t k = 0; k < jobs.size(); ++k) parts[start - lo + k] = jobs[k].get();
    }
  }

  DepthBoundedConstant out;
  out.depth = hi;
  bool have = false;
  for (const auto& p : parts) {
    out.precision_limited = out.precision_limited || p.precision_limited;
    if (p.have && (!have || p.value < out.value)) {
      have = true;
      out.value = p.value;
      out.witness = Poly(f, p.witness);
    }
  }
  return out;
}

}  // namespace

DepthBoundedConstant c_depth(const LaurentSeries& theta, const LaurentSeries& gamma, std::size_t max_degree,
                             std::size_t precision, unsigned threads) {
  return scan_range({theta}, {gamma}, nullptr, 0, max_degree, precision, threads);
}

DepthBoundedConstant c_depth_weighted(const SeriesVector& theta, const SeriesVector& gamma,
                                      const GeneralizedWeight& g, std::size_t max_degree, std::size_t precision,
                                      unsigned threads) {
  return scan_range(theta, gamma, &g, 0, max_degree, precision, threads);
}

DepthBoundedConstant c_liminf_depth(const LaurentSeries& theta, const LaurentSeries& gamma, std::size_t lo,
                                    std::size_t hi, std::size_t precision) {
  return scan_range({theta}, {gamma}, nullptr, lo, hi, precision, 1);
}

std::pair<bool, bool> matrix_condition_check(const SeriesVector& theta, const SeriesVector& gamma,
                                             const GeneralizedWeight& g, const Poly& n, std::size_t ell) {
  if (n.is_zero()) throw Error(Errc::InvalidArgument, "N must be nonzero");
  if (theta.size() != gamma.size() || theta.size() != g.dim()) {
    throw Error(Errc::InvalidArgument, "theta, gamma and the weight must share the dimension");
  }
  const std::size_t h = static_cast<std::size_t>(n.degree());
  const std::size_t rows = h + 1 + ell;
  const auto budget = g.eval(rows);

  bool lhs = true;
  for (std::size_t s = 0; s < theta.size() && lhs; ++s) {
    if (budget[s] == 0) continue;
    const FracAbs fa = frac_abs_affine(n, theta[s], gamma[s], budget[s]);
    lhs = fa.value.is_zero() || fa.value.exponent() + static_cast<std::int64_t>(budget[s]) < 0;
  }

  const HankelView view(theta, g);
  const Matrix delta = view.matrix(rows, h + 1);
  std::vector<Elem> coeffs(h + 1);
  for (std::size_t c = 0; c <= h; ++c) coeffs[c] = n.coeff(c);
  const auto lhs_vec = mat_vec(view.field(), delta, coeffs);
  std::vector<Elem> target;
  for (std::size_t s = 0; s < theta.size(); ++s) {
    for (std::size_t r = 1; r <= budget[s]; ++r) target.push_back(gamma[s].coeff(r));
  }
  return {lhs, lhs_vec == target};
}

std::optional<Witness> find_witness_small(const LaurentSeries& theta, const LaurentSeries& gamma,
                                          std::size_t max_m) {
  const Field& f = theta.field();
  const SeriesVector tv{theta};
  const HankelView view(tv, GeneralizedWeight::trivial());
  for (std::size_t m = 1; m <= max_m; ++m) {
    const Matrix a = view.matrix(m, m);
    const auto pi = gamma.frac().prefix(m);
    std::optional<std::vector<Elem>> n = solve(f, a, pi);
    if (!n) continue;
    if (std::all_of(n->begin(), n->end(), [](Elem e) { return e.is_zero(); })) {
      n = lex_min_nonzero(f, m, right_kernel(f, a));
      if (!n) continue;
    }
    std::size_t top = m;
    while ((*n)[top - 1].is_zero()) --top;
    Witness w;
    w.n = Poly(f, std::vector<Elem>(n->begin(), n->begin() + static_cast<std::ptrdiff_t>(top)));
    w.m = m;
    w.m_truncated = top;
    const FracAbs fa = frac_abs_affine(w.n, theta, gamma, m + 1);
    w.value = w.n.abs() * fa.value;
    return w;
  }
  return std::nullopt;
}

M0Structure m0_structure(const LaurentSeries& theta, std::size_t depth) {
  const auto spec = square_invertibility_spectrum(theta, depth);
  M0Structure out;
  out.depth = depth;
  for (std::size_t m = 1; m <= depth; ++m) {
    if (!spec[m - 1]) {
      if (!out.m0) out.m0 = m;
    } else if (out.m0) {
      out.violation = std::make_pair(*out.m0, m);
      out.pattern_consistent = false;
      break;
    }
  }
  return out;
}

LiminfStructure liminf_structure(const LaurentSeries& theta, std::size_t depth, std::size_t k) {
  LiminfStructure out;
  out.spectrum = square_invertibility_spectrum(theta, depth);
  for (std::size_t m = 1; m < depth; ++m) {
    if (!out.spectrum[m - 1] && out.spectrum[m]) out.alternations.emplace_back(m, m + 1);
  }
  out.reaches_k = out.alternations.size() >= k;
  return out;
}

}  // namespace ffba
