#include "ffba/weights.hpp"

#include <mutex>
#include <numeric>
#include <optional>

#include "ffba/error.hpp"
#include "ffba/scan.hpp"

namespace ffba {

// --- RealWeight -------------------------------------------------------------

RealWeight::RealWeight(std::vector<Rational> r) : r_(std::move(r)) {
  if (r_.empty()) throw Error(Errc::InvalidArgument, "weight must have at least one coordinate");
  Rational sum{0};
  for (const auto& x : r_) {
    if (x < Rational(0)) throw Error(Errc::InvalidArgument, "weight coordinates must be nonnegative");
    sum += x;
  }
  if (sum != Rational(1)) throw Error(Errc::InvalidArgument, "weight coordinates must sum to 1");
}

RealWeight RealWeight::equal(std::size_t d) {
  return RealWeight(std::vector<Rational>(d, Rational(1, static_cast<std::int64_t>(d))));
}

// --- GeneralizedWeight ------------------------------------------------------

struct GeneralizedWeight::Impl {
  enum class Kind { Trivial, Cyclic, Induced };
  Kind kind = Kind::Trivial;
  std::size_t d = 1;
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> cycle;
  std::vector<Rational> r;
  std::vector<std::int64_t> r_num;  // r^s = r_num[s] / r_den
  std::int64_t r_den = 1;

  mutable std::mutex mu;
  mutable std::vector<std::size_t> steps;                // steps[h-1]
  mutable std::vector<std::size_t> counts;               // counts[h*d + s] = g^s(h)

  void generate_locked(std::size_t h) const {
    if (counts.empty()) counts.assign(d, 0);
    while (steps.size() < h) {
      const std::size_t cur = steps.size();  // computing step cur+1
      std::size_t s = 0;
      switch (kind) {
        case Kind::Trivial:
          s = 0;
          break;
        case Kind::Cyclic:
          s = cur < prefix.size() ? prefix[cur] : cycle[(cur - prefix.size()) % cycle.size()];
          break;
        case Kind::Induced: {
          // argmax_s r^s (cur+1) - g^s(cur), lowest index on ties; scaled by r_den.
          std::optional<std::int64_t> best;
          for (std::size_t t = 0; t < d; ++t) {
            const std::int64_t v = r_num[t] * static_cast<std::int64_t>(cur + 1) -
                                   r_den * static_cast<std::int64_t>(counts[cur * d + t]);
            if (!best || v > *best) {
              best = v;
              s = t;
            }
          }
          break;
        }
      }
      steps.push_back(s);
      for (std::size_t t = 0; t < d; ++t) counts.push_back(counts[cur * d + t] + (t == s ? 1 : 0));
    }
  }
};

GeneralizedWeight GeneralizedWeight::trivial() { return GeneralizedWeight(std::make_shared<Impl>()); }

GeneralizedWeight GeneralizedWeight::cyclic(std::size_t d, std::vector<std::size_t> prefix,
                                            std::vector<std::size_t> cycle) {
  if (d == 0) throw Error(Errc::InvalidArgument, "weight dimension must be positive");
  if (cycle.empty()) throw Error(Errc::InvalidArgument, "cyclic weight needs a nonempty cycle");
  for (auto s : prefix) {
    if (s >= d) throw Error(Errc::InvalidArgument, "weight assignment names coordinate outside 1..d");
  }
  for (auto s : cycle) {
    if (s >= d) throw Error(Errc::InvalidArgument, "weight assignment names coordinate outside 1..d");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::Cyclic;
  impl->d = d;
  impl->prefix = std::move(prefix);
  impl->cycle = std::move(cycle);
  return GeneralizedWeight(std::move(impl));
}

GeneralizedWeight GeneralizedWeight::induced(const RealWeight& r) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::Induced;
  impl->d = r.dim();
  impl->r = r.coords();
  std::int64_t den = 1;
  for (const auto& x : impl->r) den = std::lcm(den, x.denominator());
  impl->r_den = den;
  for (const auto& x : impl->r) impl->r_num.push_back(x.numerator() * (den / x.denominator()));
  return GeneralizedWeight(std::move(impl));
}

namespace {

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  auto to_int = [&](std::string_view s) {
    const auto parsed = parse_code_list(s);
    if (parsed.size() != 1) throw Error(Errc::Parse, "bad rational '" + std::string(text) + "'");
    return static_cast<std::int64_t>(parsed[0]);
  };
  if (slash == std::string_view::npos) return Rational(to_int(text));
  const auto den = to_int(text.substr(slash + 1));
  if (den == 0) throw Error(Errc::Parse, "zero denominator in '" + std::string(text) + "'");
  return Rational(to_int(text.substr(0, slash)), den);
}

std::vector<std::size_t> parse_assign(std::string_view text) {
  std::vector<std::size_t> out;
  for (unsigned v : parse_code_list(text)) {
    if (v == 0) throw Error(Errc::Parse, "weight assignments are 1-based");
    out.push_back(v - 1);
  }
  return out;
}

}  // namespace

GeneralizedWeight GeneralizedWeight::parse(std::size_t d, std::string_view spec) {
  if (spec == "equal") return d == 1 ? trivial() : induced(RealWeight::equal(d));
  if (spec.substr(0, 2) == "r:") {
    std::vector<Rational> r;
    auto body = spec.substr(2);
    std::size_t pos = 0;
    while (pos <= body.size()) {
      const auto comma = body.find(',', pos);
      r.push_back(parse_rational(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (r.size() != d) {
      throw Error(Errc::InvalidArgument, "weight has " + std::to_string(r.size()) + " coordinates but d = " +
                                             std::to_string(d));
    }
    return induced(RealWeight(std::move(r)));
  }
  if (spec.substr(0, 7) == "assign:") {
    auto body = spec.substr(7);
    const auto bar = body.find('|');
    if (bar == std::string_view::npos) return cyclic(d, {}, parse_assign(body));
    return cyclic(d, parse_assign(body.substr(0, bar)), parse_assign(body.substr(bar + 1)));
  }
  throw Error(Errc::Parse, "unknown weight spec '" + std::string(spec) + "' (use equal, r:..., or assign:...)");
}

std::size_t GeneralizedWeight::dim() const noexcept { return impl_->d; }

std::size_t GeneralizedWeight::step(std::size_t h) const {
  if (h == 0) throw Error(Errc::InvalidArgument, "weight steps start at h = 1");
  std::lock_guard lock(impl_->mu);
  impl_->generate_locked(h);
  return impl_->steps[h - 1];
}

std::vector<std::size_t> GeneralizedWeight::eval(std::size_t h) const {
  std::lock_guard lock(impl_->mu);
  impl_->generate_locked(h);
  const std::size_t d = impl_->d;
  return {impl_->counts.begin() + static_cast<std::ptrdiff_t>(h * d),
          impl_->counts.begin() + static_cast<std::ptrdiff_t>((h + 1) * d)};
}

std::size_t GeneralizedWeight::eval(std::size_t h, std::size_t s) const {
  std::lock_guard lock(impl_->mu);
  impl_->generate_locked(h);
  return impl_->counts[h * impl_->d + s];
}

std::string GeneralizedWeight::describe() const {
  const Impl& m = *impl_;
  auto list = [](const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i] + 1);
    return out;
  };
  switch (m.kind) {
    case Impl::Kind::Trivial:
      return "equal";
    case Impl::Kind::Cyclic:
      return "assign:" + (m.prefix.empty() ? list(m.cycle) : list(m.prefix) + "|" + list(m.cycle));
    case Impl::Kind::Induced: {
      std::string out = "r:";
      for (std::size_t s = 0; s < m.r.size(); ++s) {
        out += (s ? "," : "") + std::to_string(m.r[s].numerator());
        if (m.r[s].denominator() != 1) out += "/" + std::to_string(m.r[s].denominator());
      }
      return out;
    }
  }
  return "equal";
}

std::optional<RealWeight> GeneralizedWeight::real_weight() const {
  switch (impl_->kind) {
    case Impl::Kind::Trivial:
      return RealWeight::equal(1);
    case Impl::Kind::Induced:
      return RealWeight(impl_->r);
    case Impl::Kind::Cyclic:
      break;
  }
  return std::nullopt;
}

// --- Deviation bounds -------------------------------------------------------

DeviationReport induced_weight_deviation(const RealWeight& r, std::size_t h_max) {
  const auto g = GeneralizedWeight::induced(r);
  const auto d = static_cast<std::int64_t>(r.dim());
  DeviationReport rep;
  rep.lower_bound = -(Rational(1) - Rational(1, d));
  rep.upper_bound = Rational(d - 1) * (Rational(1) - Rational(1, d));
  bool first = true;
  for (std::size_t h = 0; h <= h_max; ++h) {
    const auto gh = g.eval(h);
    for (std::size_t s = 0; s < r.dim(); ++s) {
      const Rational dev = r[s] * static_cast<std::int64_t>(h) - static_cast<std::int64_t>(gh[s]);
      if (first || dev < rep.min_deviation) rep.min_deviation = dev;
      if (first || dev > rep.max_deviation) rep.max_deviation = dev;
      first = false;
    }
  }
  rep.within_bounds = rep.min_deviation >= rep.lower_bound && rep.max_deviation <= rep.upper_bound;
  return rep;
}

// --- Constant comparison ----------------------------------------------------

ConstantComparison compare_constants(const SeriesVector& theta, const SeriesVector& gamma, const RealWeight& r,
                                     std::size_t max_degree, std::size_t precision) {
  const std::size_t d = r.dim();
  if (theta.size() != d || gamma.size() != d) {
    throw Error(Errc::InvalidArgument, "theta, gamma and the weight must share the dimension");
  }
  const auto g = GeneralizedWeight::induced(r);
  std::vector<AffineScanner> scanners;
  scanners.reserve(d);
  for (std::size_t s = 0; s < d; ++s) scanners.emplace_back(theta[s], gamma[s], max_degree, precision);

  ConstantComparison out;
  bool have = false;
  for_each_nonzero_poly(theta[0].field(), max_degree, [&](const std::vector<Elem>& n) {
    const std::size_t h = n.size() - 1;
    RatQVal real_max = RatQVal::zero();
    QVal gen_max = QVal::zero();
    for (std::size_t s = 0; s < d; ++s) {
      const FracAbs fa = scanners[s].eval(n);
      if (!fa.exact()) out.precision_limited = true;
      if (fa.value.is_zero()) continue;
      const auto e = fa.value.exponent();
      const RatQVal rv = RatQVal::exp(r[s] * static_cast<std::int64_t>(h) + e);
      const QVal gv = QVal::exp(static_cast<std::int64_t>(h == 0 ? 0 : g.eval(h, s)) + e);
      if (real_max < rv) real_max = rv;
      if (gv > gen_max) gen_max = gv;
    }
    if (!have || real_max < out.real_weight) out.real_weight = real_max;
    if (!have || gen_max < out.generalized) out.generalized = gen_max;
    have = true;
  });
  return out;
}

}  // namespace ffba
