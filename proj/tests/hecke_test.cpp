#include <gtest/gtest.h>

#include <random>

#include "frobcong/eta.hpp"
#include "frobcong/hecke.hpp"

using namespace frobcong;

namespace {

ZSeries random_series(std::mt19937_64& rng, i64 start_num, size_t len) {
  std::vector<mpz_class> c(len);
  for (auto& x : c) x = static_cast<long>(rng() % 41) - 20;
  return ZSeries::dense(IntegerRing{}, start_num, c, Exponent24(start_num + 24 * static_cast<i64>(len)));
}

}  // namespace

TEST(UOperator, GeometricSeriesFixed) {
  std::vector<mpz_class> ones(60, 1);
  auto g = ZSeries::from_coeffs(IntegerRing{}, ones);
  auto u = U_p(g, 2);
  EXPECT_EQ(u, ZSeries::from_coeffs(IntegerRing{}, std::vector<mpz_class>(30, 1)));
}

TEST(UOperator, PrecisionDivides) {
  auto f = eta_power(1, 1, Exponent24(24 * 40));
  EXPECT_EQ(U_p(f, 5).prec(), Exponent24(24 * 8));
  EXPECT_EQ(U_p(f, 7).prec(), Exponent24(ceil_div(24 * 40, 7)));
}

TEST(UOperator, GridSelection) {
  // eta has exponents (6k+1)^2/24; U_5 keeps numerators divisible by 5: 25 -> 5, 625 -> 125, ...
  auto f = eta_power(1, 1, Exponent24(24 * 100));
  auto u = U_p(f, 5);
  for (auto [e, c] : u.terms()) {
    EXPECT_EQ(c, f.coeff(Exponent24(e.num * 5)));
  }
  EXPECT_EQ(*u.leading_exponent(), Exponent24(5));
  EXPECT_EQ(u.coeff(Exponent24(5)), -1);
}

TEST(UOperator, SmallPrimesNeedIntegerExponents) {
  auto f = eta_power(1, 1, Exponent24(24 * 10));
  EXPECT_THROW(U_p(f, 2), DomainError);
  EXPECT_THROW(U_p(f, 3), DomainError);
}

TEST(UVOperators, UVIsIdentity) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    i64 p = std::vector<i64>{2, 3, 5, 7, 13}[rng() % 5];
    i64 start = p <= 3 ? 24 * static_cast<i64>(rng() % 3) : static_cast<i64>(rng() % 48) - 10;
    auto f = random_series(rng, start, 10 + rng() % 20);
    EXPECT_EQ(U_p(V_p(f, p), p), f) << p;
  }
}

TEST(UVOperators, VUProjects) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    auto f = random_series(rng, 0, 40);
    auto g = V_p(U_p(f, 3), 3);
    for (i64 n = 0; 24 * n < g.prec().num; ++n) {
      EXPECT_EQ(g.coeff_int(n), n % 3 == 0 ? f.coeff_int(n) : mpz_class(0));
    }
  }
}

TEST(VOperator, Examples) {
  auto q = ZSeries::monomial(IntegerRing{}, Exponent24(24), 1, Exponent24(48));
  auto v = V_p(q, 5);
  EXPECT_EQ(v.terms().begin()->first, Exponent24(120));
  auto eta13 = V_p(eta_power(1, 1, Exponent24(24 * 10)), 13);
  EXPECT_EQ(eta13, eta_power(13, 1, Exponent24(24 * 130)));
}

TEST(UOperator, Linear) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    auto f = random_series(rng, 5, 50), g = random_series(rng, 29, 48);
    mpz_class a = static_cast<long>(rng() % 11) - 5, b = static_cast<long>(rng() % 11) - 5;
    auto lhs = U_p(scale(f, a) + scale(g, b), 7);
    auto rhs = scale(U_p(f, 7), a) + scale(U_p(g, 7), b);
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(TOperator, DeltaEigenvalue) {
  auto D = eta_power(1, 24, Exponent24::integer(40));
  auto T = T_p(D, 2, 12);
  EXPECT_EQ(T, scale(D, mpz_class(-24)).truncated(T.prec()));
  EXPECT_TRUE(T_p(ZSeries(IntegerRing{}, Exponent24(240)), 5, 4).is_zero());
}

TEST(TOperator, CongruentToUModEll) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    auto f = random_series(rng, 24, 200);
    for (i64 ell : {5, 7, 13}) {
      for (i64 k : {2, 4, 12}) {
        EXPECT_EQ(reduce_mod(T_p(f, ell, k), ell), reduce_mod(U_p(f, ell), ell));
      }
    }
  }
}

TEST(TargetWeight, KnownValues) {
  EXPECT_EQ(target_weight(73), 36);
  EXPECT_EQ(target_weight(29), 16);
  EXPECT_EQ(target_weight(97), 48);
}

TEST(TargetWeight, CongruenceAndBound) {
  for (i64 ell : primes_up_to(1000)) {
    if (ell < 5) continue;
    i64 w = target_weight(ell);
    i64 lb = ell_bar(ell);
    EXPECT_EQ(pos_mod(w - (ell * lb - 1) / 2, ell - 1), 0);
    EXPECT_LE(mpq_class(to_mpz(w)), mpq_class(to_mpz(ell)) + rational(lb, 2) - rational(3, 2 * ell));
  }
}

TEST(Filtration, UBound) {
  for (i64 ell : {13, 29, 97}) {
    i64 lb = ell_bar(ell);
    EXPECT_EQ(filtration_u_bound((ell * lb - 1) / 2, ell), mpq_class(to_mpz(ell)) + rational(lb, 2) - rational(3, 2 * ell));
  }
  EXPECT_EQ(filtration_u_bound(1, 31), 31);
  EXPECT_EQ(filtration_u_bound(84, 13), rational(252, 13));
}
