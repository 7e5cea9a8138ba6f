#include "ffba/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ffba/error.hpp"
#include "ffba/series.hpp"

namespace ffba {

namespace {

using boost::multiprecision::cpp_int;

cpp_int ipow(unsigned q, std::size_t e) {
  cpp_int r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= q;
  return r;
}

}  // namespace

ConstructionSchedule ConstructionSchedule::constant(std::vector<std::size_t> ell, std::size_t ell_prime) {
  ConstructionSchedule s;
  s.d_ = ell.size();
  s.constant_ = true;
  s.ell_ = {std::move(ell)};
  s.ell_prime_ = {ell_prime};
  s.validate();
  return s;
}

ConstructionSchedule ConstructionSchedule::explicit_stages(std::vector<std::vector<std::size_t>> ell,
                                                           std::vector<std::size_t> ell_prime) {
  if (ell.size() != ell_prime.size()) {
    throw Error(Errc::InvalidSchedule, "schedule needs one ell' per stage");
  }
  ConstructionSchedule s;
  s.d_ = ell.empty() ? 1 : ell.front().size();
  s.ell_ = std::move(ell);
  s.ell_prime_ = std::move(ell_prime);
  s.validate();
  return s;
}

void ConstructionSchedule::validate() const {
  if (d_ == 0) throw Error(Errc::InvalidSchedule, "schedule dimension must be positive");
  for (std::size_t k = 0; k < ell_.size(); ++k) {
    if (ell_[k].size() != d_) throw Error(Errc::InvalidSchedule, "stage " + std::to_string(k) + " has the wrong dimension");
    if (ell_prime_[k] >= ell_bar(k)) {
      throw Error(Errc::InvalidSchedule, "stage " + std::to_string(k) + ": ell' = " + std::to_string(ell_prime_[k]) +
                                             " must be below ellbar = " + std::to_string(ell_bar(k)));
    }
  }
}

std::optional<std::size_t> ConstructionSchedule::length() const noexcept {
  if (constant_) return std::nullopt;
  return ell_.size();
}

const std::vector<std::size_t>& ConstructionSchedule::ell(std::size_t k) const {
  if (constant_) return ell_.front();
  if (k >= ell_.size()) throw Error(Errc::InvalidSchedule, "schedule has no stage " + std::to_string(k));
  return ell_[k];
}

std::size_t ConstructionSchedule::ell_prime(std::size_t k) const {
  if (constant_) return ell_prime_.front();
  if (k >= ell_prime_.size()) throw Error(Errc::InvalidSchedule, "schedule has no stage " + std::to_string(k));
  return ell_prime_[k];
}

std::size_t ConstructionSchedule::ell_bar(std::size_t k) const {
  const auto& v = ell(k);
  std::size_t sum = 0;
  for (auto x : v) sum += x;
  return sum;
}

BigRational survival_factor(const ConstructionSchedule& s, unsigned q, std::size_t k) {
  const cpp_int whole = ipow(q, s.ell_bar(k));
  return BigRational(whole - ipow(q, s.ell_prime(k)), whole);
}

MeasureReport measure_after_stages(const ConstructionSchedule& s, unsigned q, std::size_t m) {
  MeasureReport r;
  for (std::size_t k = 0; k < m; ++k) r.measure *= survival_factor(s, q, k);
  if (s.is_constant()) r.tends_to_zero = true;
  return r;
}

double kappa(unsigned q) { return std::log(static_cast<double>(q) / (q - 1.0)) / std::log(static_cast<double>(q)); }

DimensionBound dimension_lower_bound(const ConstructionSchedule& s, unsigned q, std::size_t m) {
  const std::size_t d = s.dim();
  std::vector<std::size_t> sums(d, 0);
  if (s.is_constant()) {
    for (std::size_t t = 0; t < d; ++t) sums[t] = m * s.ell(0)[t];
  } else {
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t t = 0; t < d; ++t) sums[t] += s.ell(k)[t];
    }
  }
  const std::size_t lo = *std::min_element(sums.begin(), sums.end());
  if (lo == 0) {
    throw Error(Errc::DegenerateSchedule, "min_s sum_{k<" + std::to_string(m) +
                                              "} ell_k^s is zero; the diameters do not shrink in every coordinate");
  }
  DimensionBound b;
  b.at_m = static_cast<double>(d) - static_cast<double>(m + 1) / static_cast<double>(lo) * kappa(q);
  if (s.is_constant()) {
    const auto& e = s.ell(0);
    b.limit = static_cast<double>(d) - kappa(q) / static_cast<double>(*std::min_element(e.begin(), e.end()));
  }
  return b;
}

std::size_t CylinderSet::ell_bar() const noexcept {
  std::size_t s = 0;
  for (auto x : ell) s += x;
  return s;
}

BigRational CylinderSet::measure(unsigned q) const {
  return BigRational(cpp_int(blocks.size()), ipow(q, ell_bar()));
}

namespace {

// Digits of `block` (laid out for `from`) restricted to the prefix lengths `to`.
std::vector<Elem> restrict_block(const std::vector<Elem>& block, const std::vector<std::size_t>& from,
                                 const std::vector<std::size_t>& to) {
  std::vector<Elem> out;
  std::size_t offset = 0;
  for (std::size_t s = 0; s < from.size(); ++s) {
    out.insert(out.end(), block.begin() + static_cast<std::ptrdiff_t>(offset),
               block.begin() + static_cast<std::ptrdiff_t>(offset + to[s]));
    offset += from[s];
  }
  return out;
}

std::size_t min_ell(const std::vector<std::size_t>& e) { return e.empty() ? 0 : *std::min_element(e.begin(), e.end()); }

}  // namespace

TreeLikeReport validate_tree_like(const std::vector<CylinderSet>& stages, unsigned q) {
  TreeLikeReport rep;
  auto fail = [&](int c, std::size_t m, std::string detail) { rep.violations.push_back({c, m, std::move(detail)}); };
  if (stages.empty()) {
    fail(1, 0, "no stages given");
    return rep;
  }
  const std::size_t d = stages.front().ell.size();
  const auto& s0 = stages.front();
  if (s0.ell_bar() != 0 || s0.blocks.size() != 1) fail(1, 0, "stage 0 is not the whole cube");

  std::vector<std::set<std::vector<Elem>>> sets(stages.size());
  for (std::size_t m = 0; m < stages.size(); ++m) {
    const auto& st = stages[m];
    bool well_formed = st.ell.size() == d && !st.blocks.empty();
    for (const auto& b : st.blocks) {
      if (b.size() != st.ell_bar()) well_formed = false;
      for (auto e : b) well_formed = well_formed && e.code < q;
    }
    if (!well_formed) {
      fail(2, m, "stage is empty or has malformed cylinders");
      continue;
    }
    for (const auto& b : st.blocks) {
      if (!sets[m].insert(b).second) fail(3, m, "repeated cylinder " + format_code_list(b));
    }
  }
  if (!rep.ok()) return rep;

  for (std::size_t m = 0; m + 1 < stages.size(); ++m) {
    const auto& cur = stages[m];
    const auto& next = stages[m + 1];
    bool nested = true;
    for (std::size_t s = 0; s < d; ++s) nested = nested && next.ell[s] >= cur.ell[s];
    if (!nested) {
      fail(4, m + 1, "digit counts shrink");
      continue;
    }
    std::set<std::vector<Elem>> parents;
    for (const auto& b : next.blocks) {
      auto parent = restrict_block(b, next.ell, cur.ell);
      if (!sets[m].count(parent)) fail(4, m + 1, "cylinder " + format_code_list(b) + " has no parent");
      parents.insert(std::move(parent));
    }
    for (const auto& b : cur.blocks) {
      if (!parents.count(b)) fail(5, m, "cylinder " + format_code_list(b) + " has no refinement");
    }
    if (min_ell(next.ell) < min_ell(cur.ell)) fail(6, m + 1, "diameter grows");
  }
  if (stages.size() > 1 && min_ell(stages.back().ell) <= min_ell(stages.front().ell)) {
    fail(6, stages.size() - 1, "diameter never shrinks");
  }
  return rep;
}

}  // namespace ffba
