#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ffba/field.hpp"
#include "ffba/poly.hpp"
#include "ffba/qval.hpp"

namespace ffba {

enum class SourceKind { Finite, Rational, Periodic, Rule };

/// theta_n = theta_{n + period} for every n > preperiod.
struct Periodicity {
  std::size_t preperiod = 0;
  std::size_t period = 1;
};

/// Supplier of the fractional coefficients theta_1, theta_2, ... (theta_i is
/// the coefficient of t^{-i}; indexing is 1-based). Sources are immutable from
/// the outside; those that memoize do so behind an internal lock.
class CoefficientSource {
 public:
  virtual ~CoefficientSource() = default;

  virtual SourceKind kind() const noexcept = 0;
  /// Largest index that can be requested, or nullopt when unbounded.
  virtual std::optional<std::size_t> guarantee() const noexcept = 0;
  /// theta_i for i >= 1. Throws InsufficientPrecision past the guarantee.
  virtual Elem coeff(std::size_t i) const = 0;
  /// Eventual periodicity, when the source can certify it.
  virtual std::optional<Periodicity> periodicity() const { return std::nullopt; }
  /// The source as an exact fraction M/N with deg M < deg N, when it is rational.
  virtual std::optional<std::pair<Poly, Poly>> rational_form() const { return std::nullopt; }
  /// True when the whole stream is known to vanish.
  virtual bool certified_zero() const { return false; }
  /// Text form of the `frac=` field.
  virtual std::string describe() const = 0;

  const Field& field() const noexcept { return field_; }

  /// Coefficients theta_1..theta_count.
  std::vector<Elem> prefix(std::size_t count) const;

 protected:
  explicit CoefficientSource(Field f) : field_(std::move(f)) {}

 private:
  Field field_;
};

using SourcePtr = std::shared_ptr<const CoefficientSource>;

/// A precision-limited prefix: anything past it is unknown.
class FiniteSource final : public CoefficientSource {
 public:
  FiniteSource(Field f, std::vector<Elem> digits);
  SourceKind kind() const noexcept override { return SourceKind::Finite; }
  std::optional<std::size_t> guarantee() const noexcept override { return digits_.size(); }
  Elem coeff(std::size_t i) const override;
  std::string describe() const override;

 private:
  std::vector<Elem> digits_;
};

/// The fractional part of num/den, expanded lazily by long division.
class RationalSource final : public CoefficientSource {
 public:
  /// Throws Error(DivisionByZero) when den == 0.
  RationalSource(const Poly& num, const Poly& den);
  SourceKind kind() const noexcept override { return SourceKind::Rational; }
  std::optional<std::size_t> guarantee() const noexcept override { return std::nullopt; }
  Elem coeff(std::size_t i) const override;
  std::optional<Periodicity> periodicity() const override;
  std::optional<std::pair<Poly, Poly>> rational_form() const override;
  bool certified_zero() const override { return remainder0_.is_zero(); }
  std::string describe() const override;

  const Poly& numerator() const noexcept { return num_; }
  const Poly& denominator() const noexcept { return den_; }

 private:
  struct Cache {
    std::mutex mu;
    std::vector<Elem> digits;               // digits[i-1] = theta_i
    std::vector<Elem> state;                // remainder after digits.size() steps, padded
    std::unordered_map<std::string, std::size_t> seen;  // remainder -> step index
    std::optional<Periodicity> period;
  };
  void extend_locked(std::size_t count) const;
  void find_period_locked() const;

  Poly num_;
  Poly den_;
  Poly remainder0_;
  std::unique_ptr<Cache> cache_;
};

/// pre followed by per repeated forever. A period of [0] makes the series
/// terminate after `pre`.
class PeriodicSource final : public CoefficientSource {
 public:
  PeriodicSource(Field f, std::vector<Elem> pre, std::vector<Elem> per);
  SourceKind kind() const noexcept override { return SourceKind::Periodic; }
  std::optional<std::size_t> guarantee() const noexcept override { return std::nullopt; }
  Elem coeff(std::size_t i) const override;
  std::optional<Periodicity> periodicity() const override;
  std::optional<std::pair<Poly, Poly>> rational_form() const override;
  bool certified_zero() const override;
  std::string describe() const override;

  bool terminating() const noexcept { return per_.size() == 1 && per_[0].is_zero(); }
  const std::vector<Elem>& pre() const noexcept { return pre_; }
  const std::vector<Elem>& per() const noexcept { return per_; }

 private:
  std::vector<Elem> pre_;
  std::vector<Elem> per_;
};

/// theta_i = 1 exactly at i = 2^{k+1} - 2 (k >= 1), i.e. 2, 6, 14, 30, ...
class LiminfRuleSource final : public CoefficientSource {
 public:
  explicit LiminfRuleSource(Field f) : CoefficientSource(std::move(f)) {}
  SourceKind kind() const noexcept override { return SourceKind::Rule; }
  std::optional<std::size_t> guarantee() const noexcept override { return std::nullopt; }
  Elem coeff(std::size_t i) const override;
  std::string describe() const override { return "rule:liminf"; }
};

/// theta = poly_part + <theta>, an element of F_q((1/t)).
class LaurentSeries {
 public:
  LaurentSeries(Poly poly_part, SourcePtr frac);

  const Field& field() const noexcept { return poly_.field(); }
  const Poly& poly_part() const noexcept { return poly_; }
  const CoefficientSource& frac() const noexcept { return *frac_; }
  const SourcePtr& frac_ptr() const noexcept { return frac_; }
  /// Fractional coefficient theta_i, i >= 1.
  Elem coeff(std::size_t i) const { return frac_->coeff(i); }

  /// Text form `poly=[...]; frac=...` (the q= field is added by callers that need it).
  std::string describe() const;

 private:
  Poly poly_;
  SourcePtr frac_;
};

/// A point of F_q((1/t))^d.
using SeriesVector = std::vector<LaurentSeries>;

// ---------------------------------------------------------------------------
// Construction helpers.

LaurentSeries zero_series(const Field& f);
/// The terminating series sum_i digits[i-1] t^{-i}, exact.
LaurentSeries terminating_series(const Field& f, std::vector<Elem> digits);
/// Precision-limited prefix.
LaurentSeries finite_series(const Field& f, std::vector<Elem> digits);
/// M/N as a series: polynomial part is the quotient, fractional part is
/// expanded on demand (`prec` coefficients are computed eagerly).
LaurentSeries expand_rational(const Poly& num, const Poly& den, std::size_t prec = 0);
/// The series with theta_{m_k} = 1 at m_k = 2^{k+1} - 2 and zero elsewhere.
LaurentSeries make_liminf_theta(const Field& f);

// ---------------------------------------------------------------------------
// Text and JSON formats.

/// Parses `q=2; poly=[...]; frac=...`. The q field is optional and, if given,
/// must equal f.q(). frac forms:
///   [a,b,...]             exact terminating digits
///   prefix:[a,b,...]      precision-limited prefix
///   rational:[num]/[den]  fractional part of num/den
///   periodic:[pre]|[per]
///   rule:liminf
/// Lists hold element codes; polynomial lists are constant term first.
LaurentSeries parse_series(const Field& f, std::string_view text);
/// Text form including the q= field.
std::string format_series(const LaurentSeries& s);

nlohmann::json series_to_json(const LaurentSeries& s);
LaurentSeries series_from_json(const Field& f, const nlohmann::json& j);

/// Parses "[1,0,2]" or "1,0,2" into codes.
std::vector<unsigned> parse_code_list(std::string_view text);
std::string format_code_list(const std::vector<Elem>& v);

// ---------------------------------------------------------------------------
// Absolute values and products.

/// Outcome of |<theta>|: Exact carries q^{-i0} or a certified Zero; BelowLimit
/// means every scanned coefficient vanished, i.e. |<theta>| < q^{-limit}.
struct FracAbs {
  enum class Kind { Exact, BelowLimit };
  Kind kind = Kind::Exact;
  QVal value;
  std::size_t limit = 0;

  bool exact() const noexcept { return kind == Kind::Exact; }
};

FracAbs frac_abs(const LaurentSeries& theta, std::size_t search_limit);

/// First `count` fractional coefficients L_1..L_count of N*theta, with
/// L_i = n_0 theta_i + n_1 theta_{i+1} + ... + n_h theta_{i+h}.
std::vector<Elem> poly_times_series_frac(const Poly& n, const LaurentSeries& theta, std::size_t count);

/// |<N theta - gamma>|, scanning `search_limit` coefficients; when they all
/// vanish and both sources are rational the value is settled exactly.
FracAbs frac_abs_affine(const Poly& n, const LaurentSeries& theta, const LaurentSeries& gamma,
                        std::size_t search_limit);

}  // namespace ffba
