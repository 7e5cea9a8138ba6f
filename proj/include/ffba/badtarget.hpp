#pragma once

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ffba/cantor.hpp"
#include "ffba/indices.hpp"
#include "ffba/series.hpp"
#include "ffba/weights.hpp"

namespace ffba {

/// Stage m of a certificate: b is a nonzero left null vector of
/// Delta[i, width], where width = j_next - 1 when j_{m+1} was found and the
/// scanned width otherwise; digits[s] are the gamma^s digits fixed at this
/// stage (positions g^s(i_{m-1})+1 .. g^s(i_m)).
struct CertificateStage {
  std::size_t m = 0;
  std::size_t i = 0;
  std::optional<std::size_t> j_next;
  StageStatus status = StageStatus::Found;
  std::size_t width = 0;
  std::vector<Elem> b;
  std::vector<std::vector<Elem>> digits;
};

struct Certificate {
  Field field = Field::prime(2);
  SeriesVector theta;
  GeneralizedWeight g = GeneralizedWeight::trivial();
  std::size_t ell = 1;
  std::size_t j_cutoff = 0;
  std::vector<CertificateStage> stages;
  /// gamma^s digits 1..g^s(i_last).
  std::vector<std::vector<Elem>> gamma_prefix;
  /// Set when the last stage was not certified infinite, so the guarantees
  /// only cover the scanned range.
  bool truncated = false;

  std::size_t dim() const noexcept { return theta.size(); }
  /// gamma as exact terminating series (unfixed digits are zero).
  SeriesVector gamma() const;
  /// Largest column count j for which the Gamma conditions are certified;
  /// nullopt when the last stage is certified infinite. Every N with
  /// deg N + 1 <= covered_j() then satisfies the approximation bound.
  std::optional<std::size_t> covered_j() const;
};

enum class DigitPolicy { LexMin, SeededRandom };

/// Runs the indices construction and fixes gamma digits stage by stage so
/// that b_m . pi_{g(i_m)}(gamma) != 0. Throws
/// Error(BudgetExhaustedBeforeFirstStage) when no stage can be certified.
Certificate gamma_prefix(const SeriesVector& theta, const GeneralizedWeight& g, std::size_t ell,
                         std::size_t stage_budget, std::size_t j_cutoff, DigitPolicy policy = DigitPolicy::LexMin,
                         std::uint64_t seed = 0);

/// pi_{g(i)}(gamma): gamma^s_1..gamma^s_{g^s(i)} stacked in coordinate order.
std::vector<Elem> stacked_prefix(const std::vector<std::vector<Elem>>& gamma, const GeneralizedWeight& g,
                                 std::size_t i);

struct CertificateReport {
  std::vector<std::string> failures;
  std::optional<std::size_t> first_failing_stage;
  bool ok() const noexcept { return failures.empty(); }
};

/// Re-checks a certificate by direct matrix arithmetic, including that
/// Delta[i_m, j] n = pi_{g(i_m)}(gamma) has no solution for 0 <= j <= width.
CertificateReport verify_certificate(const Certificate& cert);

struct ExtensionCounts {
  std::uint64_t total = 0;
  std::uint64_t excluded = 0;
  /// Excluded count found by listing every extension, when total <= 2^16.
  std::optional<std::uint64_t> enumerated_excluded;
};

/// total = q^{i_m - i_{m-1}} extensions of the stage m-1 prefix, of which
/// q^{i_m - i_{m-1} - 1} satisfy b_m . (prefix, u) = 0. Throws
/// Error(TooLargeToEnumerate) only when the counts overflow 64 bits.
ExtensionCounts extension_counts(const Certificate& cert, std::size_t m);

/// Stage k has ell_k = g(i_k) - g(i_{k-1}) and ell'_k = i_k - i_{k-1} - 1.
ConstructionSchedule cantor_schedule(const Certificate& cert);

/// Stage 0 (the whole cube) followed by the cylinders retained after each
/// certificate stage, found by enumeration. Throws Error(TooLargeToEnumerate)
/// past max_blocks cylinders at one stage.
std::vector<CylinderSet> survivor_cylinders(const Certificate& cert, std::size_t max_blocks = 1u << 16);

nlohmann::json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);

}  // namespace ffba
