#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ffba/series.hpp"
#include "ffba/weights.hpp"

namespace ffba {

enum class StageStatus { Initial, Found, InfiniteCertified, ExhaustedAtCutoff };

const char* status_name(StageStatus s) noexcept;
StageStatus parse_status(std::string_view name);

/// Record m of the indices construction. Stage 0 is (i_0 = ell, j_0 = 0).
/// A Found record carries (i_m, j_m). A terminal record carries i = i_{m-1}
/// (the sequence stops moving) and no j, except when the source ran out while
/// scanning rows: then j holds the found j_m and the status is
/// ExhaustedAtCutoff. scanned_j is the widest column count examined.
struct IndexStage {
  std::size_t m = 0;
  std::size_t i = 0;
  std::optional<std::size_t> j;
  StageStatus status = StageStatus::Initial;
  std::size_t scanned_j = 0;

  bool terminal() const noexcept {
    return status == StageStatus::InfiniteCertified || status == StageStatus::ExhaustedAtCutoff;
  }
};

struct IndicesTrace {
  std::size_t ell = 1;
  std::vector<IndexStage> stages;

  /// Number of Found records.
  std::size_t found() const noexcept;
  bool terminated() const noexcept { return !stages.empty() && stages.back().terminal(); }
};

/// Width W such that the columns of Delta[i, .] for c > W repeat earlier
/// ones, available when every coordinate source certifies eventual
/// periodicity.
std::optional<std::size_t> certification_width(const SeriesVector& theta);

/// The indices construction: j_{m+1} = min{j : rank Delta[i_m, j] = i_m} and
/// i_{m+1} = min{i : rank Delta[i, j_{m+1}] = i - ell}. At most stage_budget
/// records follow stage 0. Columns past j_cutoff are never examined.
/// Throws Error(InvalidEll) for ell < 1 and std::logic_error if a Found stage
/// breaks i_{m+1} <= j_{m+1} + ell, i_{m+1} >= i_m + ell or j_{m+1} >= j_m + ell.
IndicesTrace indices_sequence(const SeriesVector& theta, const GeneralizedWeight& g, std::size_t ell,
                              std::size_t stage_budget, std::size_t j_cutoff);

struct RationalityVerdict {
  enum class Kind { RationalCertified, IrrationalWitnessed, Unknown };
  Kind kind = Kind::Unknown;
  std::size_t found_stages = 0;
  IndicesTrace trace;
};

const char* verdict_name(RationalityVerdict::Kind k) noexcept;

RationalityVerdict rationality_probe(const LaurentSeries& theta, std::size_t ell, std::size_t stage_budget,
                                     std::size_t j_cutoff);

}  // namespace ffba
