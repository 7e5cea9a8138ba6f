#include "ffba/poly.hpp"

#include <algorithm>

#include "ffba/error.hpp"

namespace ffba {

Poly::Poly(Field field, std::vector<Elem> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  trim();
}

Poly Poly::constant(Field field, Elem c) { return Poly(std::move(field), {c}); }

Poly Poly::monomial(Field field, Elem c, std::size_t degree) {
  std::vector<Elem> v(degree + 1);
  v[degree] = c;
  return Poly(std::move(field), std::move(v));
}

Poly Poly::from_codes(Field field, const std::vector<unsigned>& codes) {
  std::vector<Elem> v;
  v.reserve(codes.size());
  for (unsigned c : codes) v.push_back(field.elem(c));
  return Poly(std::move(field), std::move(v));
}

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

std::vector<unsigned> Poly::codes() const {
  std::vector<unsigned> out;
  out.reserve(coeffs_.size());
  for (Elem e : coeffs_) out.push_back(e.code);
  return out;
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t s = coeffs_.size(); s-- > 0;) {
    const Elem c = coeffs_[s];
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    const std::string cs = field_.to_string(c);
    const bool compound = cs.find('+') != std::string::npos;
    if (s == 0) {
      out += cs;
      continue;
    }
    if (c != field_.one()) out += compound ? "(" + cs + ")" : cs;
    out += "t";
    if (s > 1) out += "^" + std::to_string(s);
  }
  return out;
}

Poly Poly::operator-() const {
  std::vector<Elem> v(coeffs_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = field_.neg(coeffs_[i]);
  return Poly(field_, std::move(v));
}

Poly operator+(const Poly& a, const Poly& b) {
  const Field& f = a.field_;
  std::vector<Elem> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.add(a.coeff(i), b.coeff(i));
  return Poly(f, std::move(v));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  const Field& f = a.field_;
  if (a.is_zero() || b.is_zero()) return Poly(f);
  std::vector<Elem> v(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      v[i + j] = f.add(v[i + j], f.mul(a.coeffs_[i], b.coeffs_[j]));
    }
  }
  return Poly(f, std::move(v));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  const Field& f = a.field();
  if (b.is_zero()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
  std::vector<Elem> rem = a.coeffs();
  const std::size_t db = static_cast<std::size_t>(b.degree());
  if (rem.size() <= db) return {Poly(f), a};
  std::vector<Elem> quot(rem.size() - db);
  const Elem lead_inv = f.inv(b.leading());
  for (std::size_t top = rem.size(); top-- > db;) {
    const Elem c = f.mul(rem[top], lead_inv);
    if (c.is_zero()) continue;
    const std::size_t shift = top - db;
    quot[shift] = c;
    for (std::size_t i = 0; i <= db; ++i) {
      rem[i + shift] = f.sub(rem[i + shift], f.mul(c, b.coeff(i)));
    }
  }
  rem.resize(db);
  return {Poly(f, std::move(quot)), Poly(f, std::move(rem))};
}

}  // namespace ffba
