#include "ffba/badtarget.hpp"

#include <limits>
#include <random>
#include <stdexcept>

#include "ffba/error.hpp"
#include "ffba/hankel.hpp"
#include "ffba/linalg.hpp"

namespace ffba {

namespace {

// Positions (in stacked order of length i) fixed between i_prev and i.
std::vector<std::size_t> new_positions(const GeneralizedWeight& g, std::size_t i_prev, std::size_t i) {
  const auto lo = g.eval(i_prev);
  const auto hi = g.eval(i);
  std::vector<std::size_t> out;
  std::size_t offset = 0;
  for (std::size_t s = 0; s < hi.size(); ++s) {
    for (std::size_t r = lo[s]; r < hi[s]; ++r) out.push_back(offset + r);
    offset += hi[s];
  }
  return out;
}

// Places stacked digits of length i back into per-coordinate lists.
void scatter(const GeneralizedWeight& g, std::size_t i, const std::vector<Elem>& stacked,
             std::vector<std::vector<Elem>>& gamma) {
  const auto gi = g.eval(i);
  std::size_t offset = 0;
  for (std::size_t s = 0; s < gi.size(); ++s) {
    gamma[s].assign(stacked.begin() + static_cast<std::ptrdiff_t>(offset),
                    stacked.begin() + static_cast<std::ptrdiff_t>(offset + gi[s]));
    offset += gi[s];
  }
}

std::vector<unsigned> codes_of(const std::vector<Elem>& v) {
  std::vector<unsigned> out;
  out.reserve(v.size());
  for (auto e : v) out.push_back(e.code);
  return out;
}

std::vector<Elem> elems_of(const Field& f, const nlohmann::json& j) {
  std::vector<Elem> out;
  for (const auto& c : j) out.push_back(f.elem(c.get<unsigned>()));
  return out;
}

std::uint64_t checked_pow(unsigned q, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t k = 0; k < e; ++k) {
    if (r > std::numeric_limits<std::uint64_t>::max() / q) {
      throw Error(Errc::TooLargeToEnumerate, "q^" + std::to_string(e) + " does not fit in 64 bits");
    }
    r *= q;
  }
  return r;
}

// Advances u through F_q^n in odometer order; false after the last vector.
bool next_vector(std::vector<Elem>& u, unsigned q) {
  for (auto& e : u) {
    if (e.code + 1U < q) {
      ++e.code;
      return true;
    }
    e = Elem{};
  }
  return false;
}

}  // namespace

SeriesVector Certificate::gamma() const {
  SeriesVector out;
  for (const auto& digits : gamma_prefix) out.push_back(terminating_series(field, digits));
  return out;
}

std::optional<std::size_t> Certificate::covered_j() const {
  if (stages.empty()) return 0;
  const auto& last = stages.back();
  if (last.status == StageStatus::InfiniteCertified && !truncated) return std::nullopt;
  return last.width;
}

std::vector<Elem> stacked_prefix(const std::vector<std::vector<Elem>>& gamma, const GeneralizedWeight& g,
                                 std::size_t i) {
  const auto gi = g.eval(i);
  std::vector<Elem> out;
  out.reserve(i);
  for (std::size_t s = 0; s < gi.size(); ++s) {
    for (std::size_t r = 0; r < gi[s]; ++r) out.push_back(r < gamma[s].size() ? gamma[s][r] : Elem{});
  }
  return out;
}

Certificate gamma_prefix(const SeriesVector& theta, const GeneralizedWeight& g, std::size_t ell,
                         std::size_t stage_budget, std::size_t j_cutoff, DigitPolicy policy, std::uint64_t seed) {
  if (stage_budget == 0) {
    throw Error(Errc::BudgetExhaustedBeforeFirstStage, "a stage budget of 0 leaves no stage to certify");
  }
  const auto trace = indices_sequence(theta, g, ell, stage_budget, j_cutoff);
  const Field& f = theta.front().field();
  const unsigned q = f.q();
  std::mt19937_64 rng(seed);

  Certificate cert;
  cert.field = f;
  cert.theta = theta;
  cert.g = g;
  cert.ell = ell;
  cert.j_cutoff = j_cutoff;
  cert.gamma_prefix.assign(theta.size(), {});

  std::size_t i_prev = 0;
  for (std::size_t k = 0; k + 1 < trace.stages.size(); ++k) {
    const auto& here = trace.stages[k];
    const auto& next = trace.stages[k + 1];
    CertificateStage st;
    st.m = k;
    st.i = here.i;
    if (next.j) {
      st.j_next = next.j;
      st.status = StageStatus::Found;
      st.width = *next.j - 1;
    } else {
      st.status = next.status;
      st.width = next.scanned_j;
    }
    auto b = left_null_vector(theta, g, st.i, st.width);
    if (!b) throw std::logic_error("Delta[i_m, j_{m+1} - 1] has full row rank at stage " + std::to_string(k));
    st.b = std::move(*b);

    auto stacked = stacked_prefix(cert.gamma_prefix, g, st.i);
    const auto fresh = new_positions(g, i_prev, st.i);
    Elem c{};
    {
      std::vector<bool> is_new(st.i, false);
      for (auto p : fresh) is_new[p] = true;
      for (std::size_t p = 0; p < st.i; ++p) {
        if (!is_new[p]) c = f.add(c, f.mul(st.b[p], stacked[p]));
      }
    }
    std::optional<std::size_t> key;
    for (auto p : fresh) {
      if (!st.b[p].is_zero()) key = p;
    }
    if (!key) throw std::logic_error("b_m vanishes on the digits fixed at stage " + std::to_string(k));

    if (policy == DigitPolicy::LexMin) {
      if (c.is_zero()) stacked[*key] = f.one();
    } else {
      std::uniform_int_distribution<unsigned> any(0, q - 1);
      Elem partial = c;
      for (auto p : fresh) {
        if (p == *key) continue;
        stacked[p] = Elem{static_cast<std::uint16_t>(any(rng))};
        partial = f.add(partial, f.mul(st.b[p], stacked[p]));
      }
      // b_K u_K != -partial excludes exactly one value of u_K.
      const Elem forbidden = f.div(f.neg(partial), st.b[*key]);
      std::uniform_int_distribution<unsigned> pick(0, q - 2);
      unsigned v = pick(rng);
      if (v >= forbidden.code) ++v;
      stacked[*key] = Elem{static_cast<std::uint16_t>(v)};
    }
    scatter(g, st.i, stacked, cert.gamma_prefix);
    const auto lo = g.eval(i_prev);
    st.digits.resize(theta.size());
    for (std::size_t s = 0; s < theta.size(); ++s) {
      st.digits[s].assign(cert.gamma_prefix[s].begin() + static_cast<std::ptrdiff_t>(lo[s]), cert.gamma_prefix[s].end());
    }
    cert.stages.push_back(std::move(st));
    i_prev = here.i;
    if (next.status != StageStatus::Found) {
      cert.truncated = next.status != StageStatus::InfiniteCertified;
      break;
    }
  }
  if (cert.stages.empty()) {
    throw Error(Errc::BudgetExhaustedBeforeFirstStage, "the indices construction produced no stage");
  }
  if (trace.stages.back().status == StageStatus::Found) cert.truncated = true;
  return cert;
}

CertificateReport verify_certificate(const Certificate& cert) {
  CertificateReport rep;
  const Field& f = cert.field;
  auto fail = [&](std::size_t m, const std::string& what) {
    rep.failures.push_back("stage " + std::to_string(m) + ": " + what);
    if (!rep.first_failing_stage) rep.first_failing_stage = m;
  };
  if (cert.theta.empty() || cert.gamma_prefix.size() != cert.theta.size() || cert.g.dim() != cert.theta.size()) {
    rep.failures.push_back("certificate dimensions disagree");
    return rep;
  }
  if (cert.stages.empty()) {
    rep.failures.push_back("certificate has no stages");
    return rep;
  }
  const HankelView view(cert.theta, cert.g);
  const auto final_g = cert.g.eval(cert.stages.back().i);
  for (std::size_t s = 0; s < cert.dim(); ++s) {
    if (cert.gamma_prefix[s].size() != final_g[s]) {
      rep.failures.push_back("gamma prefix of coordinate " + std::to_string(s + 1) + " has the wrong length");
    }
  }

  std::size_t i_prev = 0;
  for (std::size_t k = 0; k < cert.stages.size(); ++k) {
    const auto& st = cert.stages[k];
    if (st.m != k) fail(k, "stage index out of sequence");
    if (k == 0 && st.i != cert.ell) fail(k, "i_0 differs from ell");
    if (k > 0 && st.i < i_prev + cert.ell) fail(k, "i_m grows by less than ell");
    if (st.b.size() != st.i) {
      fail(k, "b has length " + std::to_string(st.b.size()) + ", expected " + std::to_string(st.i));
      i_prev = st.i;
      continue;
    }
    bool nonzero = false;
    for (auto e : st.b) nonzero = nonzero || !e.is_zero();
    if (!nonzero) fail(k, "b is zero");
    if (st.j_next && st.width + 1 != *st.j_next) fail(k, "width is not j_{m+1} - 1");

    const auto lo = cert.g.eval(i_prev);
    const auto hi = cert.g.eval(st.i);
    bool digits_ok = st.digits.size() == cert.dim();
    for (std::size_t s = 0; digits_ok && s < cert.dim(); ++s) {
      const auto& pre = cert.gamma_prefix[s];
      digits_ok = st.digits[s].size() == hi[s] - lo[s] && hi[s] <= pre.size() &&
                  std::equal(st.digits[s].begin(), st.digits[s].end(), pre.begin() + static_cast<std::ptrdiff_t>(lo[s]));
    }
    if (!digits_ok) fail(k, "stage digits do not match the gamma prefix");
    i_prev = st.i;

    try {
      const Matrix delta = view.matrix(st.i, st.width);
      const auto prod = vec_mat(f, st.b, delta);
      for (auto e : prod) {
        if (!e.is_zero()) {
          fail(k, "b^t Delta[i_m, width] != 0");
          break;
        }
      }
      if (st.j_next && rank(f, view.matrix(st.i, *st.j_next)) != st.i) fail(k, "Delta[i_m, j_{m+1}] is not of full row rank");

      const auto pi = stacked_prefix(cert.gamma_prefix, cert.g, st.i);
      if (dot(f, st.b, pi).is_zero()) fail(k, "b . pi_{g(i_m)}(gamma) = 0");

      EchelonState cols(f, st.i);
      bool solvable = cols.in_span(pi);
      std::size_t j = 0;
      const std::size_t last = cert.j_cutoff ? std::min(st.width, cert.j_cutoff) : st.width;
      while (!solvable && j < last) {
        cols.insert(view.column(st.i, ++j));
        solvable = cols.in_span(pi);
      }
      if (solvable) fail(k, "Delta[i_m, " + std::to_string(j) + "] n = pi_{g(i_m)}(gamma) has a solution");
    } catch (const InsufficientPrecision& e) {
      fail(k, std::string("theta lacks precision: ") + e.what());
    }
  }
  return rep;
}

ExtensionCounts extension_counts(const Certificate& cert, std::size_t m) {
  if (m >= cert.stages.size()) throw Error(Errc::InvalidArgument, "certificate has no stage " + std::to_string(m));
  const Field& f = cert.field;
  const auto& st = cert.stages[m];
  const std::size_t i_prev = m == 0 ? 0 : cert.stages[m - 1].i;
  const std::size_t gap = st.i - i_prev;
  ExtensionCounts out;
  out.total = checked_pow(f.q(), gap);
  out.excluded = checked_pow(f.q(), gap - 1);
  if (out.total > (1u << 16)) return out;

  const auto fresh = new_positions(cert.g, i_prev, st.i);
  const auto pi = stacked_prefix(cert.gamma_prefix, cert.g, st.i);
  std::vector<bool> is_new(st.i, false);
  for (auto p : fresh) is_new[p] = true;
  Elem c{};
  for (std::size_t p = 0; p < st.i; ++p) {
    if (!is_new[p]) c = f.add(c, f.mul(st.b[p], pi[p]));
  }
  std::vector<Elem> u(fresh.size());
  std::uint64_t zero_count = 0;
  do {
    Elem acc = c;
    for (std::size_t t = 0; t < fresh.size(); ++t) acc = f.add(acc, f.mul(st.b[fresh[t]], u[t]));
    zero_count += acc.is_zero() ? 1 : 0;
  } while (next_vector(u, f.q()));
  out.enumerated_excluded = zero_count;
  return out;
}

ConstructionSchedule cantor_schedule(const Certificate& cert) {
  std::vector<std::vector<std::size_t>> ell;
  std::vector<std::size_t> ell_prime;
  std::size_t i_prev = 0;
  for (const auto& st : cert.stages) {
    const auto lo = cert.g.eval(i_prev);
    const auto hi = cert.g.eval(st.i);
    std::vector<std::size_t> e(lo.size());
    for (std::size_t s = 0; s < lo.size(); ++s) e[s] = hi[s] - lo[s];
    ell.push_back(std::move(e));
    ell_prime.push_back(st.i - i_prev - 1);
    i_prev = st.i;
  }
  return ConstructionSchedule::explicit_stages(std::move(ell), std::move(ell_prime));
}

std::vector<CylinderSet> survivor_cylinders(const Certificate& cert, std::size_t max_blocks) {
  const Field& f = cert.field;
  const std::size_t d = cert.dim();
  std::vector<CylinderSet> out;
  out.push_back({std::vector<std::size_t>(d, 0), {{}}});
  std::size_t i_prev = 0;
  for (const auto& st : cert.stages) {
    const auto lo = cert.g.eval(i_prev);
    const auto hi = cert.g.eval(st.i);
    const auto fresh = new_positions(cert.g, i_prev, st.i);
    CylinderSet next{hi, {}};
    for (const auto& block : out.back().blocks) {
      // Lay the parent digits into the wider stacked layout.
      std::vector<Elem> base(st.i);
      std::size_t from = 0;
      std::size_t to = 0;
      for (std::size_t s = 0; s < d; ++s) {
        for (std::size_t r = 0; r < lo[s]; ++r) base[to + r] = block[from + r];
        from += lo[s];
        to += hi[s];
      }
      std::vector<Elem> u(fresh.size());
      do {
        for (std::size_t t = 0; t < fresh.size(); ++t) base[fresh[t]] = u[t];
        if (!dot(f, st.b, base).is_zero()) {
          next.blocks.push_back(base);
          if (next.blocks.size() > max_blocks) {
            throw Error(Errc::TooLargeToEnumerate, "more than " + std::to_string(max_blocks) + " cylinders at stage " +
                                                       std::to_string(st.m));
          }
        }
      } while (next_vector(u, f.q()));
    }
    out.push_back(std::move(next));
    i_prev = st.i;
  }
  return out;
}

nlohmann::json certificate_to_json(const Certificate& cert) {
  nlohmann::json j;
  j["q"] = cert.field.q();
  j["p"] = cert.field.p();
  j["k"] = cert.field.k();
  if (cert.field.k() > 1) j["modulus"] = cert.field.modulus();
  j["d"] = cert.dim();
  j["ell"] = cert.ell;
  j["weight"] = cert.g.describe();
  j["j_cutoff"] = cert.j_cutoff;
  j["theta"] = nlohmann::json::array();
  for (const auto& s : cert.theta) j["theta"].push_back(series_to_json(s));
  j["stages"] = nlohmann::json::array();
  for (const auto& st : cert.stages) {
    nlohmann::json s;
    s["m"] = st.m;
    s["i"] = st.i;
    s["j"] = st.j_next ? nlohmann::json(*st.j_next) : nlohmann::json(nullptr);
    s["status"] = status_name(st.status);
    s["width"] = st.width;
    s["b"] = codes_of(st.b);
    s["gamma_digits"] = nlohmann::json::array();
    for (const auto& dgt : st.digits) s["gamma_digits"].push_back(codes_of(dgt));
    j["stages"].push_back(std::move(s));
  }
  j["gamma_prefix"] = nlohmann::json::array();
  for (const auto& dgt : cert.gamma_prefix) j["gamma_prefix"].push_back(codes_of(dgt));
  j["truncated"] = cert.truncated;
  return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
  try {
    Certificate cert;
    const unsigned p = j.at("p").get<unsigned>();
    const unsigned k = j.value("k", 1U);
    std::optional<std::vector<unsigned>> modulus;
    if (j.contains("modulus")) modulus = j.at("modulus").get<std::vector<unsigned>>();
    cert.field = Field::make(p, k, modulus);
    if (j.contains("q") && j.at("q").get<unsigned>() != cert.field.q()) throw Error(Errc::Parse, "q does not equal p^k");
    const std::size_t d = j.at("d").get<std::size_t>();
    cert.ell = j.at("ell").get<std::size_t>();
    cert.g = GeneralizedWeight::parse(d, j.at("weight").get<std::string>());
    cert.j_cutoff = j.value("j_cutoff", std::size_t{0});
    for (const auto& s : j.at("theta")) cert.theta.push_back(series_from_json(cert.field, s));
    if (cert.theta.size() != d) throw Error(Errc::Parse, "theta has the wrong number of coordinates");
    for (const auto& s : j.at("stages")) {
      CertificateStage st;
      st.m = s.at("m").get<std::size_t>();
      st.i = s.at("i").get<std::size_t>();
      if (!s.at("j").is_null()) st.j_next = s.at("j").get<std::size_t>();
      st.status = parse_status(s.at("status").get<std::string>());
      st.width = s.at("width").get<std::size_t>();
      st.b = elems_of(cert.field, s.at("b"));
      for (const auto& dgt : s.at("gamma_digits")) st.digits.push_back(elems_of(cert.field, dgt));
      cert.stages.push_back(std::move(st));
    }
    for (const auto& dgt : j.at("gamma_prefix")) cert.gamma_prefix.push_back(elems_of(cert.field, dgt));
    cert.truncated = j.value("truncated", false);
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace ffba
