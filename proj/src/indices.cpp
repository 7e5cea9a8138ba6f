#include "ffba/indices.hpp"

#include <numeric>
#include <stdexcept>

#include "ffba/error.hpp"
#include "ffba/hankel.hpp"

namespace ffba {

const char* status_name(StageStatus s) noexcept {
  switch (s) {
    case StageStatus::Initial:
      return "initial";
    case StageStatus::Found:
      return "found";
    case StageStatus::InfiniteCertified:
      return "infinite-certified";
    case StageStatus::ExhaustedAtCutoff:
      return "exhausted-at-cutoff";
  }
  return "initial";
}

StageStatus parse_status(std::string_view name) {
  for (auto s : {StageStatus::Initial, StageStatus::Found, StageStatus::InfiniteCertified,
                 StageStatus::ExhaustedAtCutoff}) {
    if (name == status_name(s)) return s;
  }
  throw Error(Errc::Parse, "unknown stage status '" + std::string(name) + "'");
}

std::size_t IndicesTrace::found() const noexcept {
  std::size_t n = 0;
  for (const auto& s : stages) n += s.status == StageStatus::Found ? 1 : 0;
  return n;
}

std::optional<std::size_t> certification_width(const SeriesVector& theta) {
  std::size_t pre = 0;
  std::size_t per = 1;
  for (const auto& s : theta) {
    const auto p = s.frac().periodicity();
    if (!p) return std::nullopt;
    pre = std::max(pre, p->preperiod);
    per = std::lcm(per, p->period);
  }
  return pre + per;
}

namespace {

void check_index_bounds(const IndexStage& prev, const IndexStage& next, std::size_t ell) {
  const std::size_t i0 = prev.i;
  const std::size_t j0 = *prev.j;
  const std::size_t i1 = next.i;
  const std::size_t j1 = *next.j;
  std::string broken;
  if (i1 > j1 + ell) broken = "i_{m+1} <= j_{m+1} + ell";
  else if (i1 < i0 + ell) broken = "i_{m+1} >= i_m + ell";
  else if (j1 < j0 + ell) broken = "j_{m+1} >= j_m + ell";
  if (!broken.empty()) {
    throw std::logic_error("index inequality " + broken + " fails at stage " + std::to_string(next.m) +
                           " (i=" + std::to_string(i1) + ", j=" + std::to_string(j1) + ")");
  }
}

}  // namespace

IndicesTrace indices_sequence(const SeriesVector& theta, const GeneralizedWeight& g, std::size_t ell,
                              std::size_t stage_budget, std::size_t j_cutoff) {
  if (ell < 1) throw Error(Errc::InvalidEll, "ell must be at least 1");
  const HankelView view(theta, g);
  const Field& f = view.field();
  const auto width = certification_width(theta);

  IndicesTrace trace;
  trace.ell = ell;
  trace.stages.push_back({0, ell, 0, StageStatus::Initial, 0});

  for (std::size_t m = 0; m < stage_budget; ++m) {
    const IndexStage& cur = trace.stages.back();
    const std::size_t im = cur.i;

    // Column scan for j_{m+1}.
    EchelonState cols(f, im);
    std::size_t j = 0;
    std::optional<StageStatus> stop;
    while (cols.rank() < im) {
      if (width && j >= *width) {
        stop = StageStatus::InfiniteCertified;
        break;
      }
      if (j >= j_cutoff) {
        stop = StageStatus::ExhaustedAtCutoff;
        break;
      }
      try {
        cols.insert(view.column(im, j + 1));
      } catch (const InsufficientPrecision&) {
        stop = StageStatus::ExhaustedAtCutoff;
        break;
      }
      ++j;
    }
    if (stop) {
      trace.stages.push_back({m + 1, im, std::nullopt, *stop, j});
      break;
    }

    // Row scan for i_{m+1}, starting from the full-rank Delta[i_m, j].
    EchelonState rows(f, j);
    for (std::size_t h = 1; h <= im; ++h) rows.insert(view.row(im, h, j));
    std::size_t i = im;
    bool exhausted = false;
    while (i - rows.rank() < ell) {
      ++i;
      if (i > j + ell) {
        throw std::logic_error("row scan passed j_{m+1} + ell at stage " + std::to_string(m + 1));
      }
      try {
        rows.insert(view.new_row(i, j));
      } catch (const InsufficientPrecision&) {
        exhausted = true;
        break;
      }
    }
    if (exhausted) {
      trace.stages.push_back({m + 1, im, j, StageStatus::ExhaustedAtCutoff, j});
      break;
    }
    IndexStage next{m + 1, i, j, StageStatus::Found, j};
    check_index_bounds(cur, next, ell);
    trace.stages.push_back(next);
  }
  return trace;
}

const char* verdict_name(RationalityVerdict::Kind k) noexcept {
  switch (k) {
    case RationalityVerdict::Kind::RationalCertified:
      return "rational-certified";
    case RationalityVerdict::Kind::IrrationalWitnessed:
      return "irrational-witnessed";
    case RationalityVerdict::Kind::Unknown:
      return "unknown";
  }
  return "unknown";
}

RationalityVerdict rationality_probe(const LaurentSeries& theta, std::size_t ell, std::size_t stage_budget,
                                     std::size_t j_cutoff) {
  RationalityVerdict v;
  v.trace = indices_sequence({theta}, GeneralizedWeight::trivial(), ell, stage_budget, j_cutoff);
  v.found_stages = v.trace.found();
  const auto& last = v.trace.stages.back();
  if (last.status == StageStatus::InfiniteCertified) {
    v.kind = RationalityVerdict::Kind::RationalCertified;
  } else if (last.status == StageStatus::ExhaustedAtCutoff) {
    v.kind = RationalityVerdict::Kind::Unknown;
  } else {
    v.kind = RationalityVerdict::Kind::IrrationalWitnessed;
  }
  return v;
}

}  // namespace ffba
