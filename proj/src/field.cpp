#include "ffba/field.hpp"

#include <map>
#include <utility>

#include "ffba/error.hpp"

namespace ffba {

struct Field::Tables {
  unsigned p = 0;
  unsigned k = 0;
  unsigned q = 0;
  std::vector<unsigned> modulus;
  std::vector<std::uint16_t> add;
  std::vector<std::uint16_t> mul;
  std::vector<std::uint16_t> neg;
  std::vector<std::uint16_t> inv;
};

namespace {

using Coeffs = std::vector<unsigned>;

Coeffs decode(unsigned code, unsigned p, unsigned k) {
  Coeffs c(k);
  for (unsigned i = 0; i < k; ++i) {
    c[i] = code % p;
    code /= p;
  }
  return c;
}

unsigned encode(const Coeffs& c, unsigned p) {
  unsigned code = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) code = code * p + *it;
  return code;
}

unsigned inv_mod(unsigned a, unsigned p) {
  // p is prime and small; Fermat is plenty.
  unsigned r = 1;
  unsigned b = a % p;
  unsigned e = p - 2;
  while (e) {
    if (e & 1U) r = r * b % p;
    b = b * b % p;
    e >>= 1U;
  }
  return r;
}

// Remainder of a modulo a monic b over F_p; both constant-term first.
Coeffs poly_mod(Coeffs a, const Coeffs& b, unsigned p) {
  const std::size_t db = b.size() - 1;
  while (!a.empty() && a.back() == 0) a.pop_back();
  while (a.size() > db) {
    const std::size_t shift = a.size() - 1 - db;
    const unsigned lead = a.back();
    for (std::size_t i = 0; i <= db; ++i) {
      a[i + shift] = (a[i + shift] + p - lead * b[i] % p) % p;
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

bool is_irreducible(const Coeffs& monic, unsigned p) {
  const unsigned k = static_cast<unsigned>(monic.size() - 1);
  // Trial division by every monic polynomial of degree 1..k/2.
  for (unsigned deg = 1; deg <= k / 2; ++deg) {
    unsigned count = 1;
    for (unsigned i = 0; i < deg; ++i) count *= p;
    for (unsigned code = 0; code < count; ++code) {
      Coeffs d = decode(code, p, deg);
      d.push_back(1);
      if (poly_mod(monic, d, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

bool is_prime(unsigned n) noexcept {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::optional<std::vector<unsigned>> default_modulus(unsigned p, unsigned k) {
  static const std::map<std::pair<unsigned, unsigned>, std::vector<unsigned>> table = {
      {{2, 2}, {1, 1, 1}},     // x^2 + x + 1
      {{2, 3}, {1, 1, 0, 1}},  // x^3 + x + 1
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{3, 2}, {1, 0, 1}},  // x^2 + 1
      {{3, 3}, {1, 2, 0, 1}},
      {{5, 2}, {2, 0, 1}},
      {{7, 2}, {1, 0, 1}},
  };
  if (k == 1) return std::vector<unsigned>{0, 1};
  auto it = table.find({p, k});
  if (it == table.end()) return std::nullopt;
  return it->second;
}

Field Field::prime(unsigned p) { return make(p, 1); }

Field Field::of_order(unsigned q) {
  if (q < 2) throw Error(Errc::InvalidArgument, "field order must be at least 2");
  unsigned p = 0;
  for (unsigned d = 2; d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  unsigned k = 0;
  unsigned rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++k;
  }
  if (rest != 1) throw Error(Errc::NonPrimeP, "q = " + std::to_string(q) + " is not a prime power");
  return make(p, k);
}

Field Field::make(unsigned p, unsigned k, std::optional<std::vector<unsigned>> modulus) {
  if (!is_prime(p)) throw Error(Errc::NonPrimeP, "p = " + std::to_string(p) + " is not prime");
  if (k < 1) throw Error(Errc::InvalidArgument, "extension degree k must be >= 1");
  unsigned q = 1;
  for (unsigned i = 0; i < k; ++i) {
    q *= p;
    if (q > kMaxOrder) {
      throw Error(Errc::FieldTooLarge, "fields larger than " + std::to_string(kMaxOrder) +
                                           " elements are not supported");
    }
  }

  Coeffs mod;
  if (k == 1 && !modulus) {
    mod = {0, 1};
  } else if (modulus) {
    mod = *modulus;
    for (auto& c : mod) c %= p;
    while (!mod.empty() && mod.back() == 0) mod.pop_back();
    if (mod.size() != k + 1) {
      throw Error(Errc::InvalidArgument, "modulus must have degree exactly k = " + std::to_string(k));
    }
    const unsigned lead_inv = inv_mod(mod.back(), p);
    for (auto& c : mod) c = c * lead_inv % p;
    if (k > 1 && !is_irreducible(mod, p)) {
      throw Error(Errc::ReducibleModulus, "modulus is reducible over F_" + std::to_string(p));
    }
  } else {
    auto def = default_modulus(p, k);
    if (!def) {
      throw Error(Errc::MissingModulus, "no default modulus for q = " + std::to_string(q) +
                                            "; pass --modulus explicitly");
    }
    mod = *def;
  }

  auto t = std::make_shared<Tables>();
  t->p = p;
  t->k = k;
  t->q = q;
  t->modulus = mod;
  t->add.resize(static_cast<std::size_t>(q) * q);
  t->mul.resize(static_cast<std::size_t>(q) * q);
  t->neg.resize(q);
  t->inv.assign(q, 0);

  std::vector<Coeffs> dec(q);
  for (unsigned a = 0; a < q; ++a) dec[a] = decode(a, p, k);

  for (unsigned a = 0; a < q; ++a) {
    Coeffs n(k);
    for (unsigned i = 0; i < k; ++i) n[i] = (p - dec[a][i]) % p;
    t->neg[a] = static_cast<std::uint16_t>(encode(n, p));
    for (unsigned b = 0; b < q; ++b) {
      Coeffs s(k);
      for (unsigned i = 0; i < k; ++i) s[i] = (dec[a][i] + dec[b][i]) % p;
      t->add[a * q + b] = static_cast<std::uint16_t>(encode(s, p));

      Coeffs prod(2 * k - 1, 0);
      for (unsigned i = 0; i < k; ++i) {
        for (unsigned j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + dec[a][i] * dec[b][j]) % p;
      }
      Coeffs r = k == 1 ? prod : poly_mod(prod, mod, p);
      r.resize(k, 0);
      t->mul[a * q + b] = static_cast<std::uint16_t>(encode(r, p));
    }
  }
  for (unsigned a = 1; a < q; ++a) {
    for (unsigned b = 1; b < q; ++b) {
      if (t->mul[a * q + b] == 1) {
        t->inv[a] = static_cast<std::uint16_t>(b);
        break;
      }
    }
  }
  return Field(std::move(t));
}

unsigned Field::p() const noexcept { return t_->p; }
unsigned Field::k() const noexcept { return t_->k; }
unsigned Field::q() const noexcept { return t_->q; }
const std::vector<unsigned>& Field::modulus() const noexcept { return t_->modulus; }

Elem Field::add(Elem a, Elem b) const noexcept { return Elem{t_->add[a.code * t_->q + b.code]}; }
Elem Field::sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
Elem Field::mul(Elem a, Elem b) const noexcept { return Elem{t_->mul[a.code * t_->q + b.code]}; }
Elem Field::neg(Elem a) const noexcept { return Elem{t_->neg[a.code]}; }

Elem Field::inv(Elem a) const {
  if (a.is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero in F_" + std::to_string(q()));
  return Elem{t_->inv[a.code]};
}

Elem Field::div(Elem a, Elem b) const { return mul(a, inv(b)); }

Elem Field::pow(Elem a, unsigned e) const noexcept {
  Elem r = one();
  while (e) {
    if (e & 1U) r = mul(r, a);
    a = mul(a, a);
    e >>= 1U;
  }
  return r;
}

Elem Field::elem(unsigned code) const {
  if (code >= q()) {
    throw Error(Errc::InvalidArgument,
                "element code " + std::to_string(code) + " out of range for F_" + std::to_string(q()));
  }
  return Elem{static_cast<std::uint16_t>(code)};
}

Elem Field::from_int(long long n) const noexcept {
  const long long p = t_->p;
  return Elem{static_cast<std::uint16_t>(((n % p) + p) % p)};
}

std::vector<Elem> Field::elements() const {
  std::vector<Elem> out;
  out.reserve(q());
  for (unsigned c = 0; c < q(); ++c) out.push_back(Elem{static_cast<std::uint16_t>(c)});
  return out;
}

std::string Field::to_string(Elem a) const {
  if (k() == 1) return std::to_string(a.code);
  const Coeffs c = decode(a.code, p(), k());
  std::string out;
  for (unsigned i = k(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += "+";
    const bool show_coeff = c[i] != 1 || i == 0;
    if (show_coeff) out += std::to_string(c[i]);
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

bool operator==(const Field& a, const Field& b) noexcept {
  return a.t_ == b.t_ || (a.p() == b.p() && a.k() == b.k() && a.modulus() == b.modulus());
}

}  // namespace ffba
