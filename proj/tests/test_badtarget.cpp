#include <gtest/gtest.h>

#include <random>

#include "ffba/badtarget.hpp"
#include "ffba/error.hpp"
#include "ffba/scan.hpp"
#include "support/oracle.hpp"

using namespace ffba;

namespace {

std::vector<Elem> E(std::initializer_list<unsigned> codes) {
  std::vector<Elem> out;
  for (auto c : codes) out.push_back(Elem{static_cast<std::uint16_t>(c)});
  return out;
}

LaurentSeries t_minus_two(const Field& f) { return terminating_series(f, {Elem{0}, Elem{1}}); }

}  // namespace

TEST(BadTarget, WorkedExample) {
  const auto f = Field::prime(2);
  const auto cert = gamma_prefix({t_minus_two(f)}, GeneralizedWeight::trivial(), 1, 8, 4096);
  ASSERT_EQ(cert.stages.size(), 2u);
  EXPECT_EQ(cert.stages[0].i, 1u);
  EXPECT_EQ(cert.stages[0].j_next, 2u);
  EXPECT_EQ(cert.stages[0].b, E({1}));
  EXPECT_EQ(cert.stages[0].digits[0], E({1}));
  EXPECT_EQ(cert.stages[1].i, 3u);
  EXPECT_EQ(cert.stages[1].status, StageStatus::InfiniteCertified);
  EXPECT_EQ(cert.stages[1].b, E({0, 0, 1}));
  EXPECT_EQ(cert.stages[1].digits[0], E({0, 1}));
  EXPECT_EQ(cert.gamma_prefix[0], E({1, 0, 1}));
  EXPECT_FALSE(cert.truncated);
  EXPECT_FALSE(cert.covered_j().has_value());
  EXPECT_TRUE(verify_certificate(cert).ok());
}

TEST(BadTarget, ZeroTheta) {
  const auto f = Field::prime(2);
  const auto cert = gamma_prefix({zero_series(f)}, GeneralizedWeight::trivial(), 1, 4, 64);
  ASSERT_FALSE(cert.stages.empty());
  EXPECT_EQ(cert.stages[0].b, E({1}));
  EXPECT_EQ(cert.gamma_prefix[0].front(), Elem{1});
  EXPECT_TRUE(verify_certificate(cert).ok());
}

TEST(BadTarget, TwoDimensional) {
  const auto f = Field::prime(2);
  const auto one_over_t = terminating_series(f, {Elem{1}});
  const auto g = GeneralizedWeight::cyclic(2, {}, {0, 1});
  const auto cert = gamma_prefix({one_over_t, one_over_t}, g, 1, 8, 256);
  const auto rep = verify_certificate(cert);
  EXPECT_TRUE(rep.ok()) << (rep.failures.empty() ? "" : rep.failures.front());
  EXPECT_TRUE(validate_tree_like(survivor_cylinders(cert), f.q()).ok() || cert.stages.size() == 1);
}

TEST(BadTarget, BudgetErrors) {
  const auto f = Field::prime(2);
  try {
    gamma_prefix({t_minus_two(f)}, GeneralizedWeight::trivial(), 1, 0, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExhaustedBeforeFirstStage);
  }
  EXPECT_THROW(gamma_prefix({t_minus_two(f)}, GeneralizedWeight::trivial(), 0, 3, 10), Error);
}

TEST(BadTarget, TamperedCertificatesFail) {
  const auto f = Field::prime(2);
  const auto cert = gamma_prefix({t_minus_two(f)}, GeneralizedWeight::trivial(), 1, 8, 4096);

  auto flipped = cert;
  flipped.gamma_prefix[0][2] = Elem{0};
  flipped.stages[1].digits[0][1] = Elem{0};
  const auto r1 = verify_certificate(flipped);
  EXPECT_FALSE(r1.ok());
  EXPECT_EQ(r1.first_failing_stage, 1u);

  auto zero_b = cert;
  zero_b.stages[0].b = E({0});
  const auto r2 = verify_certificate(zero_b);
  EXPECT_FALSE(r2.ok());
  EXPECT_EQ(r2.first_failing_stage, 0u);

  auto short_b = cert;
  short_b.stages[1].b = E({1});
  EXPECT_FALSE(verify_certificate(short_b).ok());
}

TEST(BadTarget, ExtensionCounts) {
  std::mt19937_64 rng(8);
  for (unsigned q : {2u, 3u}) {
    const auto f = Field::prime(q);
    for (std::size_t ell : {1u, 2u}) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto theta = finite_series(f, oracle::random_digits(f, 60, rng));
        const auto cert = gamma_prefix({theta}, GeneralizedWeight::trivial(), ell, 6, 40);
        std::size_t i_prev = 0;
        for (std::size_t m = 0; m < cert.stages.size(); ++m) {
          const std::size_t gap = cert.stages[m].i - i_prev;
          i_prev = cert.stages[m].i;
          const auto c = extension_counts(cert, m);
          std::uint64_t total = 1;
          for (std::size_t k = 0; k < gap; ++k) total *= q;
          EXPECT_EQ(c.total, total);
          EXPECT_EQ(c.excluded, total / q);
          ASSERT_TRUE(c.enumerated_excluded.has_value());
          EXPECT_EQ(*c.enumerated_excluded, c.excluded);
        }
      }
    }
  }
  // Gap 2 over F_2 and gap 1 over F_3.
  const auto f2 = Field::prime(2);
  const auto c2 = gamma_prefix({t_minus_two(f2)}, GeneralizedWeight::trivial(), 1, 8, 4096);
  const auto e = extension_counts(c2, 1);
  EXPECT_EQ(e.total, 4u);
  EXPECT_EQ(e.excluded, 2u);
  const auto f3 = Field::prime(3);
  const auto c3 = gamma_prefix({terminating_series(f3, {Elem{1}})}, GeneralizedWeight::trivial(), 1, 4, 64);
  const auto e3 = extension_counts(c3, 0);
  EXPECT_EQ(e3.total, 3u);
  EXPECT_EQ(e3.excluded, 1u);
}

TEST(BadTarget, ScheduleAndCylinders) {
  const auto f = Field::prime(2);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto theta = finite_series(f, oracle::random_digits(f, 40, rng));
    const auto cert = gamma_prefix({theta}, GeneralizedWeight::trivial(), 1, 4, 20);
    const auto cyl = survivor_cylinders(cert);
    EXPECT_TRUE(validate_tree_like(cyl, 2).ok());
    const auto sched = cantor_schedule(cert);
    for (std::size_t m = 0; m < cyl.size(); ++m) {
      EXPECT_EQ(cyl[m].measure(2), measure_after_stages(sched, 2, m).measure);
    }
    bool contains_gamma = false;
    const auto& last = cyl.back();
    for (const auto& b : last.blocks) contains_gamma = contains_gamma || b == cert.gamma_prefix[0];
    EXPECT_TRUE(contains_gamma);
  }
}

TEST(BadTarget, JsonRoundTrip) {
  const auto f = Field::of_order(4);
  std::mt19937_64 rng(6);
  const SeriesVector theta{finite_series(f, oracle::random_digits(f, 40, rng)),
                           expand_rational(Poly::from_codes(f, {1}), Poly::from_codes(f, {1, 2, 1}))};
  const auto cert = gamma_prefix(theta, GeneralizedWeight::parse(2, "r:1/2,1/2"), 1, 5, 30);
  const auto back = certificate_from_json(certificate_to_json(cert));
  EXPECT_EQ(certificate_to_json(back), certificate_to_json(cert));
  EXPECT_EQ(verify_certificate(back).ok(), verify_certificate(cert).ok());
  EXPECT_TRUE(verify_certificate(back).ok());
}

TEST(BadTarget, SeededRandomPolicy) {
  std::mt19937_64 rng(10);
  for (unsigned q : {2u, 3u, 4u}) {
    const auto f = Field::of_order(q);
    const auto theta = finite_series(f, oracle::random_digits(f, 60, rng));
    const auto a = gamma_prefix({theta}, GeneralizedWeight::trivial(), 2, 6, 40, DigitPolicy::SeededRandom, 99);
    const auto b = gamma_prefix({theta}, GeneralizedWeight::trivial(), 2, 6, 40, DigitPolicy::SeededRandom, 99);
    EXPECT_EQ(a.gamma_prefix, b.gamma_prefix);
    EXPECT_TRUE(verify_certificate(a).ok());
    const auto lex1 = gamma_prefix({theta}, GeneralizedWeight::trivial(), 2, 6, 40);
    const auto lex2 = gamma_prefix({theta}, GeneralizedWeight::trivial(), 2, 6, 40);
    EXPECT_EQ(lex1.gamma_prefix, lex2.gamma_prefix);
  }
}

TEST(BadTarget, EndToEndBruteForce) {
  // Every N with deg N + 1 <= covered j satisfies the weighted bound.
  std::mt19937_64 rng(17);
  for (unsigned q : {2u, 3u}) {
    const auto f = Field::prime(q);
    for (std::size_t d : {1u, 2u}) {
      const auto g = d == 1 ? GeneralizedWeight::trivial() : GeneralizedWeight::cyclic(2, {}, {0, 1});
      for (std::size_t ell : {1u, 2u}) {
        for (int trial = 0; trial < 3; ++trial) {
          SeriesVector theta;
          for (std::size_t s = 0; s < d; ++s) theta.push_back(finite_series(f, oracle::random_digits(f, 80, rng)));
          const auto cert = gamma_prefix(theta, g, ell, 6, 30);
          ASSERT_TRUE(verify_certificate(cert).ok());
          const auto gamma = cert.gamma();
          const std::size_t cover = cert.covered_j().value_or(8);
          const std::size_t max_deg = std::min<std::size_t>(cover, q == 2 ? 9 : 6) - 1;
          for (std::size_t h = 0; h <= max_deg; ++h) {
            const auto budget = g.eval(h + 1 + ell);
            for_each_poly_of_degree(f, h, [&](const std::vector<Elem>& n) {
              bool some_far = false;
              for (std::size_t s = 0; s < d; ++s) {
                const auto e = oracle::frac_exponent_terminating(f, Poly(f, n), theta[s].frac().prefix(60),
                                                                 cert.gamma_prefix[s]);
                // The theta prefix is truncated at 60 digits; only the first
                // budget[s] + 1 digits of the product matter here.
                if (e && *e + static_cast<std::int64_t>(budget[s]) >= 0) some_far = true;
              }
              EXPECT_TRUE(some_far) << "h=" << h;
            });
          }
        }
      }
    }
  }
}
