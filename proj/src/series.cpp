#include "ffba/series.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "ffba/error.hpp"

namespace ffba {

std::vector<Elem> CoefficientSource::prefix(std::size_t count) const {
  std::vector<Elem> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) out.push_back(coeff(i));
  return out;
}

// --- FiniteSource -----------------------------------------------------------

FiniteSource::FiniteSource(Field f, std::vector<Elem> digits)
    : CoefficientSource(std::move(f)), digits_(std::move(digits)) {}

Elem FiniteSource::coeff(std::size_t i) const {
  if (i == 0 || i > digits_.size()) throw InsufficientPrecision(i, "finite prefix of length " + std::to_string(digits_.size()));
  return digits_[i - 1];
}

std::string FiniteSource::describe() const { return "prefix:" + format_code_list(digits_); }

// --- RationalSource ---------------------------------------------------------

namespace {

std::string state_key(const std::vector<Elem>& state) {
  std::string key;
  key.reserve(state.size() * 2);
  for (Elem e : state) {
    key.push_back(static_cast<char>(e.code & 0xFFU));
    key.push_back(static_cast<char>(e.code >> 8U));
  }
  return key;
}

}  // namespace

RationalSource::RationalSource(const Poly& num, const Poly& den)
    : CoefficientSource(num.field()), num_(num), den_(den), remainder0_(num.field()),
      cache_(std::make_unique<Cache>()) {
  if (den.is_zero()) throw Error(Errc::DivisionByZero, "rational series with zero denominator");
  remainder0_ = divmod(num, den).second;
  const std::size_t n = static_cast<std::size_t>(den_.degree());
  cache_->state.assign(n, Elem{});
  for (std::size_t s = 0; s < n; ++s) cache_->state[s] = remainder0_.coeff(s);
  cache_->seen.emplace(state_key(cache_->state), 0);
  if (n == 0 || remainder0_.is_zero()) cache_->period = Periodicity{0, 1};
}

void RationalSource::extend_locked(std::size_t count) const {
  Cache& c = *cache_;
  const Field& f = field();
  const std::size_t n = static_cast<std::size_t>(den_.degree());
  const Elem lead_inv = n == 0 ? Elem{} : f.inv(den_.leading());
  while (c.digits.size() < count) {
    if (c.period) {
      // Once periodic, further digits are read back from the cycle.
      const Periodicity p = *c.period;
      const std::size_t i = c.digits.size() + 1;
      if (n == 0 || remainder0_.is_zero()) {
        c.digits.push_back(Elem{});
        continue;
      }
      const std::size_t back = p.preperiod + 1 + (i - p.preperiod - 1) % p.period;
      c.digits.push_back(c.digits[back - 1]);
      continue;
    }
    // t*R = digit*den + R'
    const Elem top = c.state[n - 1];
    const Elem digit = f.mul(top, lead_inv);
    std::vector<Elem> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      const Elem shifted = s == 0 ? Elem{} : c.state[s - 1];
      next[s] = f.sub(shifted, f.mul(digit, den_.coeff(s)));
    }
    c.state = std::move(next);
    c.digits.push_back(digit);
    const std::size_t step = c.digits.size();
    auto [it, inserted] = c.seen.emplace(state_key(c.state), step);
    if (!inserted) {
      c.period = Periodicity{it->second, step - it->second};
      c.seen.clear();
    }
  }
}

void RationalSource::find_period_locked() const {
  while (!cache_->period) extend_locked(cache_->digits.size() + 1);
}

Elem RationalSource::coeff(std::size_t i) const {
  if (i == 0) throw InsufficientPrecision(0, "fractional coefficients are 1-based");
  std::lock_guard lock(cache_->mu);
  if (cache_->period && i > cache_->digits.size()) {
    const Periodicity p = *cache_->period;
    if (cache_->digits.empty() || p.preperiod + p.period > cache_->digits.size()) {
      extend_locked(p.preperiod + p.period);
    }
    if (i <= p.preperiod) return cache_->digits[i - 1];
    const std::size_t back = p.preperiod + 1 + (i - p.preperiod - 1) % p.period;
    return cache_->digits[back - 1];
  }
  extend_locked(i);
  return cache_->digits[i - 1];
}

std::optional<Periodicity> RationalSource::periodicity() const {
  std::lock_guard lock(cache_->mu);
  find_period_locked();
  return cache_->period;
}

std::optional<std::pair<Poly, Poly>> RationalSource::rational_form() const {
  return std::make_pair(remainder0_, den_);
}

std::string RationalSource::describe() const {
  return "rational:" + format_code_list(remainder0_.coeffs()) + "/" + format_code_list(den_.coeffs());
}

// --- PeriodicSource ---------------------------------------------------------

PeriodicSource::PeriodicSource(Field f, std::vector<Elem> pre, std::vector<Elem> per)
    : CoefficientSource(std::move(f)), pre_(std::move(pre)), per_(std::move(per)) {
  if (per_.empty()) throw Error(Errc::InvalidArgument, "periodic source needs a nonempty period");
}

Elem PeriodicSource::coeff(std::size_t i) const {
  if (i == 0) throw InsufficientPrecision(0, "fractional coefficients are 1-based");
  if (i <= pre_.size()) return pre_[i - 1];
  return per_[(i - pre_.size() - 1) % per_.size()];
}

std::optional<Periodicity> PeriodicSource::periodicity() const {
  return Periodicity{pre_.size(), per_.size()};
}

std::optional<std::pair<Poly, Poly>> PeriodicSource::rational_form() const {
  // sum pre_k t^{-k} + t^{-a} * B/(t^p - 1), with B = sum per_k t^{p-k}.
  const Field& f = field();
  const std::size_t a = pre_.size();
  const std::size_t p = per_.size();
  std::vector<Elem> av(a), bv(p);
  for (std::size_t k = 1; k <= a; ++k) av[a - k] = pre_[k - 1];
  for (std::size_t k = 1; k <= p; ++k) bv[p - k] = per_[k - 1];
  const Poly A(f, av);
  const Poly B(f, bv);
  const Poly tp_minus_1 = Poly::monomial(f, f.one(), p) - Poly::constant(f, f.one());
  const Poly num = A * tp_minus_1 + B;
  const Poly den = Poly::monomial(f, f.one(), a) * tp_minus_1;
  return std::make_pair(divmod(num, den).second, den);
}

bool PeriodicSource::certified_zero() const {
  auto zero = [](Elem e) { return e.is_zero(); };
  return std::all_of(pre_.begin(), pre_.end(), zero) && std::all_of(per_.begin(), per_.end(), zero);
}

std::string PeriodicSource::describe() const {
  if (terminating()) return format_code_list(pre_);
  return "periodic:" + format_code_list(pre_) + "|" + format_code_list(per_);
}

// --- LiminfRuleSource -------------------------------------------------------

Elem LiminfRuleSource::coeff(std::size_t i) const {
  if (i == 0) throw InsufficientPrecision(0, "fractional coefficients are 1-based");
  // i = 2^{k+1} - 2 with k >= 1  <=>  i + 2 is a power of two >= 4.
  const std::size_t v = i + 2;
  return (v & (v - 1)) == 0 && v >= 4 ? field().one() : field().zero();
}

// --- LaurentSeries ----------------------------------------------------------

LaurentSeries::LaurentSeries(Poly poly_part, SourcePtr frac) : poly_(std::move(poly_part)), frac_(std::move(frac)) {
  if (!frac_) throw Error(Errc::InvalidArgument, "series without a coefficient source");
  if (!(frac_->field() == poly_.field())) throw Error(Errc::InvalidArgument, "series parts over different fields");
}

std::string LaurentSeries::describe() const {
  std::string out;
  if (!poly_.is_zero()) out += "poly=" + format_code_list(poly_.coeffs()) + "; ";
  out += "frac=" + frac_->describe();
  return out;
}

LaurentSeries zero_series(const Field& f) { return terminating_series(f, {}); }

LaurentSeries terminating_series(const Field& f, std::vector<Elem> digits) {
  return LaurentSeries(Poly(f), std::make_shared<PeriodicSource>(f, std::move(digits), std::vector<Elem>{Elem{}}));
}

LaurentSeries finite_series(const Field& f, std::vector<Elem> digits) {
  return LaurentSeries(Poly(f), std::make_shared<FiniteSource>(f, std::move(digits)));
}

LaurentSeries expand_rational(const Poly& num, const Poly& den, std::size_t prec) {
  auto [quot, rem] = divmod(num, den);
  auto src = std::make_shared<RationalSource>(rem, den);
  if (prec > 0) (void)src->coeff(prec);
  return LaurentSeries(std::move(quot), std::move(src));
}

LaurentSeries make_liminf_theta(const Field& f) {
  return LaurentSeries(Poly(f), std::make_shared<LiminfRuleSource>(f));
}

// --- Text format ------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<Elem> to_elems(const Field& f, const std::vector<unsigned>& codes) {
  std::vector<Elem> out;
  out.reserve(codes.size());
  for (unsigned c : codes) out.push_back(f.elem(c));
  return out;
}

[[noreturn]] void parse_fail(std::string_view what, std::string_view text) {
  throw Error(Errc::Parse, std::string(what) + ": '" + std::string(text) + "'");
}

SourcePtr parse_frac(const Field& f, std::string_view v) {
  v = trim(v);
  auto starts = [&](std::string_view p) { return v.substr(0, p.size()) == p; };
  if (starts("prefix:")) {
    return std::make_shared<FiniteSource>(f, to_elems(f, parse_code_list(v.substr(7))));
  }
  if (starts("rational:")) {
    const auto body = v.substr(9);
    const auto slash = body.find('/');
    if (slash == std::string_view::npos) parse_fail("rational source needs num/den", v);
    const Poly num = Poly::from_codes(f, parse_code_list(body.substr(0, slash)));
    const Poly den = Poly::from_codes(f, parse_code_list(body.substr(slash + 1)));
    return std::make_shared<RationalSource>(num, den);
  }
  if (starts("periodic:")) {
    const auto body = v.substr(9);
    const auto bar = body.find('|');
    if (bar == std::string_view::npos) parse_fail("periodic source needs pre|per", v);
    return std::make_shared<PeriodicSource>(f, to_elems(f, parse_code_list(body.substr(0, bar))),
                                            to_elems(f, parse_code_list(body.substr(bar + 1))));
  }
  if (starts("rule:")) {
    if (trim(v.substr(5)) == "liminf") return std::make_shared<LiminfRuleSource>(f);
    parse_fail("unknown rule", v);
  }
  if (starts("[") || (!v.empty() && std::isdigit(static_cast<unsigned char>(v.front())))) {
    return std::make_shared<PeriodicSource>(f, to_elems(f, parse_code_list(v)), std::vector<Elem>{Elem{}});
  }
  parse_fail("unrecognized frac form", v);
}

}  // namespace

std::vector<unsigned> parse_code_list(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') parse_fail("unterminated list", text);
    text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<unsigned> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) parse_fail("bad list item", item);
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_code_list(const std::vector<Elem>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i].code);
  }
  return out + "]";
}

LaurentSeries parse_series(const Field& f, std::string_view text) {
  Poly poly(f);
  SourcePtr frac;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto semi = text.find(';', pos);
    const auto field_text = trim(text.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos));
    pos = semi == std::string_view::npos ? text.size() + 1 : semi + 1;
    if (field_text.empty()) continue;
    const auto eq = field_text.find('=');
    if (eq == std::string_view::npos) parse_fail("expected key=value", field_text);
    const auto key = trim(field_text.substr(0, eq));
    const auto value = trim(field_text.substr(eq + 1));
    if (key == "q") {
      unsigned q = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), q);
      if (ec != std::errc{} || ptr != value.data() + value.size()) parse_fail("bad q", value);
      if (q != f.q()) {
        throw Error(Errc::InvalidArgument, "series declares q=" + std::to_string(q) + " but the field has q=" +
                                               std::to_string(f.q()));
      }
    } else if (key == "poly") {
      poly = Poly::from_codes(f, parse_code_list(value));
    } else if (key == "frac") {
      frac = parse_frac(f, value);
    } else {
      parse_fail("unknown series field", key);
    }
  }
  if (!frac) frac = std::make_shared<PeriodicSource>(f, std::vector<Elem>{}, std::vector<Elem>{Elem{}});
  return LaurentSeries(std::move(poly), std::move(frac));
}

std::string format_series(const LaurentSeries& s) {
  return "q=" + std::to_string(s.field().q()) + "; " + s.describe();
}

// --- JSON -------------------------------------------------------------------

namespace {

std::vector<unsigned> codes_of(const std::vector<Elem>& v) {
  std::vector<unsigned> out;
  out.reserve(v.size());
  for (Elem e : v) out.push_back(e.code);
  return out;
}

}  // namespace

nlohmann::json series_to_json(const LaurentSeries& s) {
  nlohmann::json frac;
  const CoefficientSource& src = s.frac();
  if (const auto* p = dynamic_cast<const PeriodicSource*>(&src)) {
    if (p->terminating()) {
      frac = {{"kind", "terminating"}, {"digits", codes_of(p->pre())}};
    } else {
      frac = {{"kind", "periodic"}, {"pre", codes_of(p->pre())}, {"per", codes_of(p->per())}};
    }
  } else if (const auto* r = dynamic_cast<const RationalSource*>(&src)) {
    auto form = r->rational_form();
    frac = {{"kind", "rational"}, {"num", form->first.codes()}, {"den", form->second.codes()}};
  } else if (const auto* fin = dynamic_cast<const FiniteSource*>(&src)) {
    frac = {{"kind", "prefix"}, {"digits", codes_of(fin->prefix(*fin->guarantee()))}};
  } else {
    frac = {{"kind", "rule"}, {"name", "liminf"}};
  }
  return {{"q", s.field().q()}, {"poly", s.poly_part().codes()}, {"frac", frac}};
}

LaurentSeries series_from_json(const Field& f, const nlohmann::json& j) {
  try {
    if (j.is_string()) return parse_series(f, j.get<std::string>());
    if (j.contains("q") && j.at("q").get<unsigned>() != f.q()) {
      throw Error(Errc::InvalidArgument, "series JSON declares a different q");
    }
    Poly poly = j.contains("poly") ? Poly::from_codes(f, j.at("poly").get<std::vector<unsigned>>()) : Poly(f);
    const auto& fr = j.at("frac");
    const std::string kind = fr.at("kind").get<std::string>();
    SourcePtr src;
    auto elems = [&](const char* key) { return to_elems(f, fr.at(key).get<std::vector<unsigned>>()); };
    if (kind == "terminating") {
      src = std::make_shared<PeriodicSource>(f, elems("digits"), std::vector<Elem>{Elem{}});
    } else if (kind == "periodic") {
      src = std::make_shared<PeriodicSource>(f, elems("pre"), elems("per"));
    } else if (kind == "rational") {
      src = std::make_shared<RationalSource>(Poly(f, elems("num")), Poly(f, elems("den")));
    } else if (kind == "prefix") {
      src = std::make_shared<FiniteSource>(f, elems("digits"));
    } else if (kind == "rule" && fr.at("name") == "liminf") {
      src = std::make_shared<LiminfRuleSource>(f);
    } else {
      throw Error(Errc::Parse, "unknown series kind '" + kind + "'");
    }
    return LaurentSeries(std::move(poly), std::move(src));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("malformed series JSON: ") + e.what());
  }
}

// --- Absolute values --------------------------------------------------------

FracAbs frac_abs(const LaurentSeries& theta, std::size_t search_limit) {
  const CoefficientSource& src = theta.frac();
  if (auto g = src.guarantee(); g && *g < search_limit) {
    throw InsufficientPrecision(*g + 1, "frac_abs search limit " + std::to_string(search_limit));
  }
  for (std::size_t i = 1; i <= search_limit; ++i) {
    if (!src.coeff(i).is_zero()) return {FracAbs::Kind::Exact, QVal::exp(-static_cast<std::int64_t>(i)), search_limit};
  }
  if (src.certified_zero()) return {FracAbs::Kind::Exact, QVal::zero(), search_limit};
  if (auto form = src.rational_form()) {
    const auto& [num, den] = *form;
    if (num.is_zero()) return {FracAbs::Kind::Exact, QVal::zero(), search_limit};
    return {FracAbs::Kind::Exact, QVal::exp(num.degree() - den.degree()), search_limit};
  }
  return {FracAbs::Kind::BelowLimit, QVal::exp(-static_cast<std::int64_t>(search_limit) - 1), search_limit};
}

std::vector<Elem> poly_times_series_frac(const Poly& n, const LaurentSeries& theta, std::size_t count) {
  const Field& f = theta.field();
  const CoefficientSource& src = theta.frac();
  const std::size_t h = n.is_zero() ? 0 : static_cast<std::size_t>(n.degree());
  if (auto g = src.guarantee(); g && *g < count + h) {
    throw InsufficientPrecision(*g + 1, "product needs " + std::to_string(count + h) + " coefficients");
  }
  std::vector<Elem> out(count);
  for (std::size_t i = 1; i <= count; ++i) {
    Elem acc{};
    for (std::size_t k = 0; k < n.coeffs().size(); ++k) {
      const Elem nk = n.coeffs()[k];
      if (!nk.is_zero()) acc = f.add(acc, f.mul(nk, src.coeff(i + k)));
    }
    out[i - 1] = acc;
  }
  return out;
}

FracAbs frac_abs_affine(const Poly& n, const LaurentSeries& theta, const LaurentSeries& gamma,
                        std::size_t search_limit) {
  const Field& f = theta.field();
  if (auto g = gamma.frac().guarantee(); g && *g < search_limit) {
    throw InsufficientPrecision(*g + 1, "target needs " + std::to_string(search_limit) + " coefficients");
  }
  const auto l = poly_times_series_frac(n, theta, search_limit);
  for (std::size_t i = 1; i <= search_limit; ++i) {
    if (f.sub(l[i - 1], gamma.coeff(i)) != Elem{}) {
      return {FracAbs::Kind::Exact, QVal::exp(-static_cast<std::int64_t>(i)), search_limit};
    }
  }
  auto tf = theta.frac().rational_form();
  auto gf = gamma.frac().rational_form();
  if (tf && gf) {
    const Poly num = n * tf->first * gf->second - gf->first * tf->second;
    const Poly den = tf->second * gf->second;
    const Poly rem = divmod(num, den).second;
    if (rem.is_zero()) return {FracAbs::Kind::Exact, QVal::zero(), search_limit};
    return {FracAbs::Kind::Exact, QVal::exp(rem.degree() - den.degree()), search_limit};
  }
  return {FracAbs::Kind::BelowLimit, QVal::exp(-static_cast<std::int64_t>(search_limit) - 1), search_limit};
}

}  // namespace ffba
