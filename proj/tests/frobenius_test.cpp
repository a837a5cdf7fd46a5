#include <gtest/gtest.h>

#include "frobcong/frobenius.hpp"

using namespace frobcong;

TEST(Partitions, SmallValues) {
  auto P = partition_series(200);
  EXPECT_EQ(P.coeff_int(0), 1);
  EXPECT_EQ(P.coeff_int(4), 5);
  EXPECT_EQ(P.coeff_int(100), mpz_class("190569292"));
  for (i64 n = 4; n < 200; n += 5) EXPECT_EQ(mpz_mod_u32(P.coeff_int(n), 5), 0u) << n;
}

TEST(Partitions, ModMatchesExact) {
  auto P = partition_series(3000);
  auto Pm = partitions_mod(3000, 13);
  for (i64 n = 0; n < 3000; ++n) ASSERT_EQ(mpz_mod_u32(P.coeff_int(n), 13), Pm[n]);
}

TEST(RmSeries, Examples) {
  EXPECT_EQ(r_m_series(2, 5).coeff_int(1), 2);
  EXPECT_EQ(r_m_series(5, 5).coeff_int(1), 20);
  for (i64 m = 2; m <= 13; ++m) EXPECT_EQ(r_m_series(m, 3).coeff_int(0), 1);
}

TEST(RmSeries, MatchesBruteForce) {
  for (i64 m = 2; m <= 6; ++m) {
    auto dp = r_m_series(m, 31);
    auto bf = r_m_brute_force(m, 31);
    for (i64 n = 0; n <= 30; ++n) EXPECT_EQ(dp.coeff_int(n), bf[n]) << m << " " << n;
  }
}

TEST(Cphi, NineSymbolsForTwoColors) {
  EXPECT_EQ(cphi_series(2, 5).coeff_int(2), 9);
  EXPECT_EQ(brute_force_cphi(2, 2), 9);
  EXPECT_EQ(brute_force_cphi(2, 1), 4);
}

TEST(Cphi, OneColorIsPartitions) {
  auto P = partition_series(9);
  for (i64 k = 0; k <= 8; ++k) EXPECT_EQ(brute_force_cphi(1, k), P.coeff_int(k));
  EXPECT_EQ(cphi_series(1, 9), P);
}

TEST(Cphi, SeriesMatchesEnumeration) {
  for (i64 m = 1; m <= 4; ++m) {
    auto s = cphi_series(m, 9);
    for (i64 n = 0; n <= 8; ++n) EXPECT_EQ(s.coeff_int(n), brute_force_cphi(m, n)) << m << " " << n;
  }
  for (i64 m : {5, 7}) {
    auto s = cphi_series(m, 7);
    for (i64 n = 1; n <= 6; ++n) EXPECT_EQ(s.coeff_int(n), brute_force_cphi(m, n)) << m << " " << n;
  }
}

TEST(Cphi, ValueAtOneIsMSquared) {
  for (i64 m = 1; m <= 13; ++m) {
    EXPECT_EQ(cphi_series(m, 2).coeff_int(0), 1);
    EXPECT_EQ(cphi_series(m, 2).coeff_int(1), m * m) << m;
  }
  EXPECT_EQ(cphi_series(5, 2).coeff_int(1), 25);
}

TEST(Cphi, EnumerationGuard) { EXPECT_THROW(brute_force_cphi(2, 13), DomainError); }

TEST(Cphi, GridForm) {
  auto g = cphi_grid_series(5, 20);
  EXPECT_EQ(*g.leading_exponent(), Exponent24(-5));
  EXPECT_EQ(g.coeff(Exponent24(19)), 25);  // cphi_5(1)
  // eta^5 times the grid form is the theta series.
  auto theta = eta_power(1, 5, Exponent24(24 * 18)) * g;
  EXPECT_FALSE(first_difference(theta, r_m_series(5, 18)).has_value());
}

TEST(ClosedForm, MatchesSeries) {
  for (i64 m : {5, 7, 11, 13}) {
    auto a = cphi_closed_form(m, 500);
    auto b = cphi_series(m, 500);
    EXPECT_FALSE(first_difference(a, b).has_value()) << m;
  }
}

TEST(ClosedForm, ThirteenAtOne) {
  auto a = detail::cphi13_correction(5);
  EXPECT_EQ(a[1], 1);
  EXPECT_EQ(partition_series(7).coeff_int(6), 11);
  EXPECT_EQ(cphi_closed_form(13, 2).coeff_int(1), 169);
}

TEST(ClosedForm, UnsupportedM) { EXPECT_THROW(cphi_closed_form(17, 10), DomainError); }

TEST(CphiMod, SourcesAgree) {
  for (i64 m : {5, 7, 11, 13}) {
    for (i64 ell : {5, 7, 13, 29}) {
      if (ell == m) continue;
      auto a = cphi_mod(m, 400, ell, CphiSource::Series);
      auto b = cphi_mod(m, 400, ell, CphiSource::ClosedForm);
      EXPECT_EQ(a, b) << m << " " << ell;
    }
  }
}

TEST(LinearCongruences, SixRamanujanAnalogues) {
  const std::vector<std::pair<i64, i64>> pairs{{5, 7}, {5, 11}, {7, 5}, {7, 11}, {11, 5}, {11, 7}};
  for (auto [m, ell] : pairs) {
    auto c = cphi_mod(m, 2000 * ell / 24 + 2, ell, CphiSource::ClosedForm);
    for (i64 n = 0; n < 2000; ++n) {
      if ((ell * n + m) % 24) continue;
      EXPECT_EQ(c[(ell * n + m) / 24], 0u) << m << " " << ell << " " << n;
    }
  }
}

TEST(AmSeries, EqualsTheta) {
  auto A5 = A_m_series(5, 300);
  EXPECT_FALSE(first_difference(A5.series, r_m_series(5, 300)).has_value());
  EXPECT_EQ(A5.series.coeff_int(0), 1);
  EXPECT_EQ(A_m_series(7, 20).weight.k, 3);
  EXPECT_THROW(A_m_series(4, 10), DomainError);
}
