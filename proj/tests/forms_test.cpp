#include <gtest/gtest.h>

#include "frobcong/forms.hpp"
#include "frobcong/hecke.hpp"

using namespace frobcong;

static std::string data_path(const std::string& f) { return std::string(FROBCONG_SOURCE_DATA_DIR) + "/" + f; }

TEST(Dimensions, KnownValues) {
  EXPECT_EQ(dim_cusp_forms(12, 1), 1);
  EXPECT_EQ(dim_cusp_forms(14, 1), 0);
  EXPECT_EQ(dim_cusp_forms(24, 1), 2);
  EXPECT_EQ(dim_cusp_forms(2, 11), 1);
  EXPECT_EQ(dim_cusp_forms(2, 13), 0);
  EXPECT_EQ(dim_cusp_forms(12, 5), 5);
  EXPECT_EQ(dim_cusp_forms(4, 13), 3);
  EXPECT_EQ(dim_cusp_forms(6, 13), 5);
  EXPECT_EQ(dim_cusp_forms(16, 13), 17);
  EXPECT_EQ(dim_cusp_forms(48, 13), 55);
  EXPECT_EQ(dim_cusp_forms(36, 11), 34);
  EXPECT_EQ(dim_modular_forms(12, 1), 2);
  EXPECT_EQ(dim_modular_forms(2, 11), 2);
  EXPECT_EQ(dim_modular_forms(4, 13), 5);
}

TEST(Dimensions, LevelOneCountFormula) {
  for (i64 ell : primes_up_to(499)) {
    if (ell < 5) continue;
    i64 lb = ell_bar(ell);
    i64 star = pos_mod(ell, 12);
    i64 k = (ell + lb - 2) / 2;
    EXPECT_EQ(24 * dim_cusp_forms(k, 1), ell + lb - 2 * star) << ell;
    EXPECT_EQ(static_cast<i64>(level1_basis(k, k / 12 + 2).size()), dim_cusp_forms(k, 1)) << ell;
  }
}

TEST(Sturm, Values) {
  EXPECT_EQ(sturm_bound(12, 1), 1);
  EXPECT_EQ(sturm_bound(12, 5), 6);
  EXPECT_EQ(sturm_bound(rational(11, 2), 5), 3);
  EXPECT_EQ(sturm_bound(48, 13), 56);
}

TEST(Level1, DeltaAndEchelon) {
  auto B = level1_basis(12, 10);
  ASSERT_EQ(B.size(), 1u);
  EXPECT_EQ(B.forms[0].coeff_int(2), -24);
  EXPECT_EQ(B.forms[0].coeff_int(3), 252);
  auto B2 = level1_basis(36, 20);
  ASSERT_EQ(B2.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(*B2.forms[i].leading_exponent(), Exponent24::integer(static_cast<i64>(i) + 1));
    for (size_t j = 0; j < 3; ++j) {
      if (j != i) {
        EXPECT_EQ(B2.forms[i].coeff_int(static_cast<i64>(j) + 1), 0);
      }
    }
  }
  // Each basis form is a Hecke-stable combination: T_2 of the span stays in the span mod 13.
  auto red = B2.reduce(13);
  for (const auto& g : red) {
    auto t = T_p(g, 2, 36);
    EXPECT_TRUE(express_in_basis(t, std::vector<FpSeries>{red[0].truncated(t.prec()), red[1].truncated(t.prec()), red[2].truncated(t.prec())}, t.prec()).ok());
  }
}

TEST(EisensteinWeight2, Shape) {
  auto E = eisenstein_weight2(11, 30);
  EXPECT_EQ(E.coeff_int(0), 10);
  EXPECT_EQ(E.coeff_int(1), 24);
  EXPECT_EQ(E.coeff_int(2), 72);
  // E times the weight-2 cusp form eta^2(z) eta^2(11z) is a weight-4 form: T_2 eigen-span check mod 7.
  auto f = eta_power(1, 2, Exponent24::integer(30)) * eta_power(11, 2, Exponent24::integer(30));
  EXPECT_EQ(f.coeff_int(2), -2);
}

TEST(EtaFamily, LevelFiveWeightTwelve) {
  auto B = eta_family_basis(5, 12, Exponent24::integer(40));
  ASSERT_EQ(static_cast<i64>(B.size()), dim_cusp_forms(12, 5));
  for (size_t j = 0; j < B.size(); ++j) {
    EXPECT_EQ(B.recipes[j], (EtaQuotient{{1, 24 - 6 * static_cast<i64>(j)}, {5, 6 * static_cast<i64>(j)}}));
    EXPECT_EQ(*B.forms[j].leading_exponent(), Exponent24::integer(static_cast<i64>(j) + 1));
    EXPECT_EQ(B.forms[j].leading_coefficient(), 1);
  }
}

TEST(EtaFamily, LevelThirteenOnlyInWeightsDivisibleByTwelve) {
  EXPECT_TRUE(eta_quotients_level_m(13, 4, 1).empty());
  EXPECT_TRUE(eta_quotients_level_m(13, 6, 1).empty());
  EXPECT_FALSE(eta_quotients_level_m(13, 12, 1).empty());
}

TEST(NamedFamilies, Weight48Has55Leads) {
  auto B = eta_basis_from_spec(eta_spec_level13_weight48(), std::nullopt, 13, 48, Exponent24::integer(60), "w48");
  ASSERT_EQ(B.size(), 55u);
  EXPECT_EQ(static_cast<i64>(B.size()), dim_cusp_forms(48, 13));
  auto lead = B.leading();
  for (i64 i = 0; i < 55; ++i) {
    EXPECT_EQ(lead[static_cast<size_t>(i)].first, i + 1);
    EXPECT_EQ(lead[static_cast<size_t>(i)].second, 1);
  }
}

TEST(NamedFamilies, Weight16FromIngestedForm) {
  auto file = load_basis_file(data_path("s4_13.basis"));
  ASSERT_EQ(file.forms.size(), 3u);
  auto h = file.forms[1] - scale(file.forms[2], mpz_class(3));
  EXPECT_EQ(h.coeff_int(2), 1);
  EXPECT_EQ(h.coeff_int(3), -3);
  EXPECT_EQ(h.coeff_int(4), 1);
  auto B = eta_basis_from_spec(eta_spec_level13_weight16(), h, 13, 16, Exponent24::integer(40), "w16");
  ASSERT_EQ(B.size(), 16u);
  auto lead = B.leading();
  for (i64 i = 0; i < 16; ++i) EXPECT_EQ(lead[static_cast<size_t>(i)].first, i + 1);
  EXPECT_EQ(dim_cusp_forms(16, 13), 17);
}

TEST(NamedFamilies, LeadCollisionIsAnError) {
  std::vector<EtaQuotient> spec{{{1, 24}}, {{1, 24}}};
  EXPECT_THROW(eta_basis_from_spec(spec, std::nullopt, 1, 12, Exponent24::integer(10), "dup"), DomainError);
}

TEST(IngestedBasis, HeckeStableAndCuspidal) {
  auto file = load_basis_file(data_path("s4_13.basis"));
  EXPECT_EQ(file.level, 13);
  EXPECT_EQ(file.weight, 4);
  auto B = basis_from_file(file, "s4_13");
  for (const auto& f : B.forms) EXPECT_EQ(f.coeff_int(0), 0);
  for (i64 ell : {5, 7, 101}) {
    auto red = B.reduce(ell);
    for (i64 p : {2, 3, 5}) {
      for (const auto& g : red) {
        auto t = T_p(g, p, 4);
        std::vector<FpSeries> tr;
        for (const auto& b : red) tr.push_back(b.truncated(t.prec()));
        EXPECT_TRUE(express_in_basis(t, tr, t.prec()).ok()) << ell << " " << p;
      }
    }
  }
}

TEST(ProductBasis, LevelElevenLeadingCoefficients) {
  const i64 K = 40;
  auto E = eisenstein_weight2(11, K);
  std::vector<ZSeries> H{eta_power(1, 2, Exponent24::integer(K)) * eta_power(11, 2, Exponent24::integer(K))};
  H[0] = H[0].truncated(Exponent24::integer(K));
  const i64 k = 6;
  auto B = product_basis(E, H, k, 6, 11);
  ASSERT_EQ(B.size(), 6u);
  auto lead = B.leading();
  for (i64 n = 1; n <= 6; ++n) {
    EXPECT_EQ(lead[static_cast<size_t>(n - 1)].first, n);
    EXPECT_EQ(lead[static_cast<size_t>(n - 1)].second, mpq_class(mpz_pow(10, static_cast<unsigned long>(k - n))));
  }
  EXPECT_THROW(product_basis(E, H, k, 7, 11), DomainError);
}

TEST(ProductBasis, RecipeRule) {
  auto r = product_recipes(3, 5, 7);
  EXPECT_EQ(r[3].g_power, 1);
  EXPECT_EQ(r[3].s, 1);
  EXPECT_EQ(r[3].e_power, 3);
  EXPECT_EQ(r[5].g_power, 2);
  EXPECT_EQ(r[5].s, 0);
  EXPECT_EQ(r[5].e_power, 3);
}

TEST(Pool, SpansKnownSpaces) {
  struct Case {
    i64 m, w, ell;
  };
  for (auto c : std::vector<Case>{{5, 12, 13}, {11, 2, 7}, {11, 4, 5}, {13, 12, 7}, {11, 12, 97}}) {
    i64 d = dim_cusp_forms(c.w, c.m);
    i64 K = sturm_bound(c.w, c.m) + 10;
    auto B = cusp_form_basis(c.m, c.w, K, c.ell);
    EXPECT_EQ(static_cast<i64>(B.size()), d) << c.m << " " << c.w;
    // l-integral: reduction succeeds.
    EXPECT_NO_THROW(B.reduce(c.ell));
  }
}

TEST(Pool, IngestedSeedsFillLevelThirteen) {
  auto file = load_basis_file(data_path("s4_13.basis"));
  std::vector<SeedForm> seeds;
  for (auto& f : file.forms) seeds.push_back({4, f});
  EXPECT_THROW(cusp_form_basis(13, 4, 20, 5), InconsistencyError);
  auto B = cusp_form_basis(13, 4, 20, 5, seeds);
  EXPECT_EQ(B.size(), 3u);
}

TEST(IntegralEchelon, KeepsValuation) {
  // Rows 5q + q^2 and q^2 over Z_(5): the first pivot has valuation 1.
  std::vector<QSeries> rows{QSeries::from_coeffs(RationalRing{}, {0, 5, 1, 0}), QSeries::from_coeffs(RationalRing{}, {0, 0, 1, 0})};
  auto E = integral_echelon(rows, 4, 5);
  ASSERT_EQ(E.size(), 2u);
  EXPECT_EQ(E[0].coeff_int(1), 5);
  auto Q = integral_echelon(rows, 4, 0);
  EXPECT_EQ(Q[0].coeff_int(1), 1);
}

TEST(Express, FindsCoefficientsAndMismatch) {
  PrimeField F(13);
  auto B = eta_family_basis(5, 12, Exponent24::integer(20)).reduce(13);
  auto f = scale(B[0], 3u) + scale(B[3], 7u);
  auto r = express_in_basis(f, B, Exponent24::integer(20));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ((*r.coeffs)[0], 3u);
  EXPECT_EQ((*r.coeffs)[3], 7u);
  auto g = f + FpSeries::monomial(F, Exponent24::integer(9), 1u, Exponent24::integer(20));
  auto bad = express_in_basis(g, B, Exponent24::integer(20));
  EXPECT_FALSE(bad.ok());
  EXPECT_LE(*bad.first_mismatch, Exponent24::integer(9));
}

TEST(BasisFile, RoundTripAndValidation) {
  auto file = load_basis_file(data_path("s4_13.basis"));
  std::string text = serialize_basis(file);
  std::istringstream in(text);
  auto again = parse_basis(in);
  EXPECT_EQ(serialize_basis(again), text);
  std::istringstream dup("1 12 2 3\n0 1 2\n0 1 5\n");
  auto d = parse_basis(dup);
  EXPECT_THROW(basis_from_file(d, "dup"), DomainError);
  std::istringstream shortrow("1 12 1 3\n0 1\n");
  EXPECT_THROW(parse_basis(shortrow), ParseError);
  std::istringstream badint("1 12 1 2\n0 x\n");
  EXPECT_THROW(parse_basis(badint), ParseError);
}
