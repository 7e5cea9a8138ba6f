#include <gtest/gtest.h>

#include <random>

#include "ffba/badtarget.hpp"
#include "ffba/scan.hpp"
#include "ffba/verify.hpp"
#include "support/oracle.hpp"

using namespace ffba;

namespace {

LaurentSeries digits_series(const Field& f, std::initializer_list<unsigned> codes) {
  std::vector<Elem> d;
  for (auto c : codes) d.push_back(Elem{static_cast<std::uint16_t>(c)});
  return terminating_series(f, d);
}

}  // namespace

TEST(Verify, DepthConstantExamples) {
  const auto f = Field::prime(2);
  const auto r1 = c_depth(zero_series(f), digits_series(f, {1}), 5, 12);
  EXPECT_EQ(r1.value, QVal::exp(-1));
  EXPECT_EQ(r1.witness, Poly::from_codes(f, {1}));
  EXPECT_TRUE(c_depth(zero_series(f), zero_series(f), 5, 12).value.is_zero());

  const auto r3 = c_depth(digits_series(f, {0, 1}), digits_series(f, {1, 0, 1}), 8, 16);
  EXPECT_EQ(r3.value, QVal::exp(-2));
  EXPECT_EQ(r3.witness, Poly::from_codes(f, {0, 1}));
  EXPECT_FALSE(r3.precision_limited);
}

TEST(Verify, DepthConstantAgainstOracle) {
  std::mt19937_64 rng(31);
  for (unsigned q : {2u, 3u}) {
    const auto f = Field::prime(q);
    for (int trial = 0; trial < 6; ++trial) {
      const auto a = oracle::random_digits(f, 12, rng);
      const auto b = oracle::random_digits(f, 12, rng);
      const std::size_t H = q == 2 ? 6 : 4;
      std::optional<std::int64_t> best;
      bool zero = false;
      for_each_nonzero_poly(f, H, [&](const std::vector<Elem>& n) {
        const Poly N(f, n);
        const auto e = oracle::frac_exponent_terminating(f, N, a, b);
        if (!e) {
          zero = true;
          return;
        }
        const std::int64_t v = *e + static_cast<std::int64_t>(N.degree());
        if (!best || v < *best) best = v;
      });
      const auto got = c_depth(terminating_series(f, a), terminating_series(f, b), H, 40);
      if (zero) {
        EXPECT_TRUE(got.value.is_zero());
      } else {
        EXPECT_EQ(got.value, QVal::exp(*best));
      }
    }
  }
}

TEST(Verify, MonotoneAndSharded) {
  const auto f = Field::prime(3);
  std::mt19937_64 rng(9);
  const auto th = finite_series(f, oracle::random_digits(f, 40, rng));
  const auto ga = finite_series(f, oracle::random_digits(f, 40, rng));
  QVal prev = QVal::exp(1);
  for (std::size_t H = 0; H <= 5; ++H) {
    const auto r = c_depth(th, ga, H, 30);
    EXPECT_LE(r.value, prev);
    prev = r.value;
    const auto sharded = c_depth(th, ga, H, 30, 4);
    EXPECT_EQ(sharded.value, r.value);
    EXPECT_EQ(sharded.witness, r.witness);
  }
  const SeriesVector t2{th, th};
  const SeriesVector g2{ga, th};
  const auto g = GeneralizedWeight::parse(2, "equal");
  const auto w1 = c_depth_weighted(t2, g2, g, 4, 30);
  const auto w4 = c_depth_weighted(t2, g2, g, 4, 30, 3);
  EXPECT_EQ(w1.value, w4.value);
  EXPECT_EQ(w1.witness, w4.witness);
}

TEST(Verify, WeightedReducesToPlainInOneDimension) {
  const auto f = Field::prime(2);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto th = finite_series(f, oracle::random_digits(f, 40, rng));
    const auto ga = finite_series(f, oracle::random_digits(f, 40, rng));
    const auto a = c_depth(th, ga, 6, 30);
    const auto b = c_depth_weighted({th}, {ga}, GeneralizedWeight::trivial(), 6, 30);
    EXPECT_EQ(a.value, b.value);
  }
}

TEST(Verify, MatrixConditionRandom) {
  std::mt19937_64 rng(41);
  std::size_t checked = 0;
  for (unsigned q : {2u, 3u, 4u}) {
    const auto f = Field::of_order(q);
    for (std::size_t d : {1u, 2u}) {
      const auto g = d == 1 ? GeneralizedWeight::trivial() : GeneralizedWeight::parse(2, "r:1/2,1/2");
      for (int trial = 0; trial < 40; ++trial) {
        SeriesVector theta;
        SeriesVector gamma;
        for (std::size_t s = 0; s < d; ++s) {
          theta.push_back(finite_series(f, oracle::random_digits(f, 30, rng)));
          gamma.push_back(finite_series(f, oracle::random_digits(f, 30, rng)));
        }
        const std::size_t ell = 1 + rng() % 3;
        const std::size_t h = rng() % 6;
        auto coeffs = oracle::random_digits(f, h + 1, rng);
        if (coeffs.back().is_zero()) coeffs.back() = f.one();
        const auto [lhs, rhs] = matrix_condition_check(theta, gamma, g, Poly(f, coeffs), ell);
        EXPECT_EQ(lhs, rhs);
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 240u);
}

TEST(Verify, MatrixConditionSolvedCase) {
  // N = t with theta = t^-2 and gamma = t^-1 gives <N theta - gamma> = 0.
  const auto f = Field::prime(2);
  const auto [lhs, rhs] =
      matrix_condition_check({digits_series(f, {0, 1})}, {digits_series(f, {1})}, GeneralizedWeight::trivial(),
                             Poly::from_codes(f, {0, 1}), 2);
  EXPECT_TRUE(lhs);
  EXPECT_TRUE(rhs);
}

TEST(Verify, WitnessMatchesOracle) {
  std::mt19937_64 rng(55);
  for (unsigned q : {2u, 3u, 4u}) {
    const auto f = Field::of_order(q);
    const auto theta = digits_series(f, {0, 1});
    for (int trial = 0; trial < 50; ++trial) {
      const auto b = oracle::random_digits(f, 10, rng);
      const auto w = find_witness_small(theta, terminating_series(f, b), 8);
      ASSERT_TRUE(w.has_value());
      EXPECT_LE(w->value, QVal::exp(-2));
      EXPECT_EQ(w->m_truncated, w->n.degree() + 1);
      const auto e = oracle::frac_exponent_terminating(f, w->n, {Elem{0}, Elem{1}}, b);
      if (e) {
        EXPECT_EQ(w->value, QVal::exp(*e + static_cast<std::int64_t>(w->n.degree())));
      } else {
        EXPECT_TRUE(w->value.is_zero());
      }
    }
  }
}

TEST(Verify, CertifiedTargetHasNoSmallerWitness) {
  const auto f = Field::prime(2);
  const auto cert = gamma_prefix({digits_series(f, {0, 1})}, GeneralizedWeight::trivial(), 1, 8, 4096);
  const auto gamma = cert.gamma().front();
  const auto w = find_witness_small(cert.theta.front(), gamma, 8);
  if (w) EXPECT_GE(w->value, QVal::exp(-2));
  EXPECT_EQ(c_depth(cert.theta.front(), gamma, 8, 20).value, QVal::exp(-2));
}

TEST(Verify, M0Examples) {
  const auto f2 = Field::prime(2);
  const auto a = m0_structure(digits_series(f2, {0, 1}), 6);
  EXPECT_EQ(a.m0, 1u);
  EXPECT_FALSE(a.pattern_consistent);
  ASSERT_TRUE(a.violation.has_value());
  EXPECT_EQ(*a.violation, std::make_pair(std::size_t{1}, std::size_t{2}));

  const auto f3 = Field::prime(3);
  const auto b = m0_structure(expand_rational(Poly::from_codes(f3, {1}), Poly::from_codes(f3, {2, 1})), 10);
  EXPECT_EQ(b.m0, 2u);
  EXPECT_TRUE(b.pattern_consistent);

  const auto c = m0_structure(zero_series(f2), 10);
  EXPECT_EQ(c.m0, 1u);
  EXPECT_TRUE(c.pattern_consistent);
}

TEST(Verify, LiminfTheta) {
  const auto f = Field::prime(2);
  const auto theta = make_liminf_theta(f);
  const auto s = liminf_structure(theta, 15, 3);
  ASSERT_EQ(s.spectrum.size(), 15u);
  for (std::size_t m : {2u, 6u, 14u}) EXPECT_TRUE(s.spectrum[m - 1]) << m;
  for (std::size_t m : {3u, 7u, 15u}) EXPECT_FALSE(s.spectrum[m - 1]) << m;
  EXPECT_GE(s.alternations.size(), 3u);
  EXPECT_TRUE(s.reaches_k);

  const auto lo = c_liminf_depth(theta, zero_series(f), 2, 6, 40);
  const auto all = c_depth(theta, zero_series(f), 6, 40);
  EXPECT_GE(lo.value, all.value);
}
