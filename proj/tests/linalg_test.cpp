#include <gtest/gtest.h>

#include <random>

#include "frobcong/linalg.hpp"

using namespace frobcong;

TEST(Rref, SmallExample) {
  PrimeField F(5);
  auto M = Matrix<PrimeField>::from_ints(F, {{2, 4}, {1, 2}});
  auto rr = rref_mod(M);
  EXPECT_EQ(rr.rref, Matrix<PrimeField>::from_ints(F, {{1, 2}, {0, 0}}));
  EXPECT_EQ(rr.rank(), 1u);
  EXPECT_EQ(rr.transform * M, rr.rref);
}

TEST(Rref, IdempotentOnRandomMatrices) {
  std::mt19937_64 rng(7);
  for (u32 p : {2u, 13u, 101u}) {
    PrimeField F(p);
    for (int t = 0; t < 20; ++t) {
      size_t r = 1 + rng() % 6, c = 1 + rng() % 7;
      Matrix<PrimeField> M(F, r, c);
      for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) M(i, j) = F.from_int(static_cast<i64>(rng() % 4 == 0 ? 0 : rng() % p));
      auto rr = rref_mod(M);
      EXPECT_EQ(rref_mod(rr.rref).rref, rr.rref);
      EXPECT_EQ(rr.transform * M, rr.rref);
    }
  }
}

TEST(Rref, IdentityIsFixed) {
  PrimeField F(7);
  auto I = Matrix<PrimeField>::identity(F, 4);
  auto rr = rref_mod(I);
  EXPECT_EQ(rr.rref, I);
  EXPECT_EQ(rr.rank(), 4u);
}

TEST(Rref, OverExtensionField) {
  ExtField K(19, {17, 4, 0, 1});
  auto a = K.gen();
  Matrix<ExtField> M(K, 2, 2);
  M(0, 0) = a;
  M(0, 1) = K.mul(a, a);
  M(1, 0) = K.one();
  M(1, 1) = a;
  auto rr = rref_mod(M);
  EXPECT_EQ(rr.rank(), 1u);
  EXPECT_TRUE(K.equal(rr.rref(0, 1), a));
  EXPECT_EQ(rref_mod(rr.rref).rref, rr.rref);
}

TEST(RowSolve, FindsCombinationOrFirstBadColumn) {
  PrimeField F(11);
  auto A = Matrix<PrimeField>::from_ints(F, {{1, 0, 3, 0}, {0, 1, 4, 0}});
  auto rr = rref_mod(A);
  auto ok = solve_row_combination(rr, {2, 5, 4, 0});
  ASSERT_TRUE(ok.x);
  EXPECT_EQ((*ok.x)[0], 2u);
  EXPECT_EQ((*ok.x)[1], 5u);
  auto bad = solve_row_combination(rr, {2, 5, 1, 3});
  EXPECT_FALSE(bad.x);
  EXPECT_EQ(*bad.first_bad_column, 2u);
}
