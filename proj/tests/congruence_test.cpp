#include <gtest/gtest.h>

#include "frobcong/congruence.hpp"

using namespace frobcong;

TEST(Admissible, Residue) {
  EXPECT_EQ(admissible_residue(13, 5), 7);
  for (i64 ell : {5, 7, 11, 13, 17, 19, 23, 29}) {
    for (i64 m : {1, 5, 7, 11, 13}) {
      i64 r = admissible_residue(ell, m);
      EXPECT_EQ(pos_mod(ell * r + m, 24), 0) << ell << " " << m;
    }
  }
}

TEST(HEll, LeadAndCuspZeroOrder) {
  auto h = build_h_ell(5, 13, Exponent24::integer(60));
  ASSERT_TRUE(h.leading_exponent());
  EXPECT_EQ(*h.leading_exponent(), Exponent24::integer(35));
  EXPECT_EQ(h_ell_cusp0_order(5, 13), mpq_class(6));
}

TEST(Pipeline, FiveThirteenMatchesCphi) {
  auto R = construct_f_ell(5, 13);
  ASSERT_TRUE(R.ok) << R.message;
  EXPECT_EQ(R.route, PipelineRoute::ViaHEll);
  EXPECT_EQ(*R.h_lead, Exponent24::integer(35));
  EXPECT_EQ(*R.h_cusp0_order, mpq_class(6));
  ASSERT_TRUE(R.artifact);
  const auto& A = *R.artifact;
  EXPECT_EQ(A.weight, mpq_class(11, 2));
  // F = sum cphi_5((13 n + 5)/24) q^{n/24}; compare against a direct cphi computation.
  auto c = cphi_mod(5, 13 * 200 / 24 + 2, 13, CphiSource::Series);
  auto F = expand_artifact(A, Exponent24(200));
  for (i64 n = 7; n < 200; n += 24) EXPECT_EQ(F.coeff(Exponent24(n)), c[static_cast<size_t>((13 * n + 5) / 24)]) << n;
  EXPECT_EQ(F.coeff(Exponent24(7)), 6u);
}

TEST(Pipeline, ThirteenFiveHasNoForm) {
  auto R = construct_f_ell(13, 5);
  EXPECT_FALSE(R.ok);
  ASSERT_TRUE(R.first_mismatch);
  EXPECT_NE(R.message.find("first mismatch"), std::string::npos);
}

TEST(Pipeline, SmallPairsVanish) {
  for (auto [m, ell] : {std::pair<i64, i64>{7, 5}, {5, 7}}) {
    auto R = construct_f_ell(m, ell);
    ASSERT_TRUE(R.ok) << R.message;
    EXPECT_TRUE(R.artifact->target_vanishes);
  }
}

TEST(Pipeline, RejectsEqualPrimes) { EXPECT_THROW(construct_f_ell(13, 13), DomainError); }

TEST(Eta, DivisionByItself) {
  PrimeField F(13);
  auto e = EtaQuotient{{5, 13}}.expand_mod(Exponent24(24 * 30), 13);
  auto q = divide_by_eta_power(e, 5, 13);
  EXPECT_EQ(q.coeff(Exponent24(0)), 1u);
  for (i64 n = 1; n < 20; ++n) EXPECT_EQ(q.coeff(Exponent24::integer(n)), 0u);
}

TEST(Linear, SixCongruences) {
  for (auto [m, ell] : std::vector<std::pair<i64, i64>>{{5, 7}, {5, 11}, {7, 5}, {7, 11}, {11, 5}, {11, 7}}) {
    auto C = verify_linear_congruence(m, ell, 2000);
    EXPECT_EQ(C.status, CertStatus::Verified) << m << " " << ell;
    EXPECT_GT(C.checked, 0);
  }
}

TEST(Linear, FiveThirteenIsNotLinear) {
  auto C = verify_linear_congruence(5, 13, 2000);
  EXPECT_EQ(C.status, CertStatus::Refuted);
  EXPECT_EQ(*C.counterexample, 7);
}

TEST(Legendre, Values) {
  EXPECT_EQ(legendre(2, 19), -1);
  EXPECT_EQ(legendre(5, 7), -1);
  EXPECT_EQ(legendre(19, 19), 0);
}

TEST(Scan, PredictedSign) {
  // p = 53 = 1 mod 13: (-1/p)^{33} (p/5) = (53/5) = (3/5) = -1.
  EXPECT_EQ(predicted_epsilon(5, 13, 53), -1);
  auto s = scan_signs(5, 13, 53);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE(s[0].second);
  EXPECT_EQ(scan_signs(5, 13, 7).size(), 2u);
}

TEST(Scan, RejectsBadPrimes) {
  EXPECT_THROW(scan_atkin_congruence(5, 13, {13}, 100), DomainError);
  EXPECT_THROW(scan_atkin_congruence(5, 13, {9}, 100), DomainError);
}

TEST(Scan, VacuousWithoutArguments) {
  auto c = scan_atkin_direct(5, 13, {7}, 5);
  for (const auto& x : c) EXPECT_EQ(x.status, CertStatus::Vacuous);
}

TEST(Scan, HeckeAgreesWithDirect) {
  auto R = construct_f_ell(5, 13);
  ASSERT_TRUE(R.ok);
  const std::vector<i64> ps{7, 11, 17, 53};
  const i64 N = 400;
  ScanOptions o;
  o.method = ScanMethod::Hecke;
  o.artifact = &*R.artifact;
  auto H = scan_atkin_congruence(5, 13, ps, N, o);
  auto D = scan_atkin_direct(5, 13, ps, N);
  ASSERT_EQ(H.size(), D.size());
  for (size_t i = 0; i < H.size(); ++i) {
    EXPECT_EQ(H[i].p, D[i].p);
    EXPECT_EQ(H[i].epsilon, D[i].epsilon);
    EXPECT_EQ(H[i].status, D[i].status) << H[i].p << " " << H[i].epsilon;
    EXPECT_EQ(H[i].counterexample, D[i].counterexample);
    EXPECT_EQ(H[i].checked, D[i].checked);
  }
}

TEST(Scan, HeckeCoefficientsMatchCphi) {
  auto R = construct_f_ell(5, 13);
  ASSERT_TRUE(R.ok);
  HeckeScanner S(*R.artifact, {11}, 300, 3);
  auto fits = S.fits(11);
  ASSERT_FALSE(fits.empty());
  auto c = cphi_mod(5, (13 * 121 * 300 + 5) / 24 + 1, 13, CphiSource::ClosedForm);
  for (i64 n = 7; n <= 300; n += 24) {
    EXPECT_EQ(S.hecke_coeff(fits[0], n), c[static_cast<size_t>((13 * 121 * n + 5) / 24)]) << n;
  }
}

TEST(Scan, PartitionCertificatesMatchExactPartitionNumbers) {
  // m = 1 gives p(n); every certificate is rechecked against exact partition numbers.
  const i64 N = 60;
  auto c = scan_atkin_direct(1, 13, {5, 7}, N);
  EXPECT_EQ(c.size(), 4u);
  auto P = partition_series(13 * 49 * N / 24 + 2);
  auto p_of = [&](i64 k) { return P.coeff(Exponent24::integer(k)); };
  for (const auto& x : c) {
    std::optional<i64> bad;
    i64 checked = 0;
    for (i64 n = admissible_residue(13, 1); n <= N; n += 24) {
      if (legendre(n, x.p) != x.epsilon) continue;
      ++checked;
      if (p_of((13 * x.p * x.p * n + 1) / 24) % 13 != 0) {
        bad = n;
        break;
      }
    }
    EXPECT_EQ(x.counterexample, bad) << x.p << " " << x.epsilon;
    EXPECT_EQ(x.checked, checked);
  }
}

TEST(Certificate, JsonFields) {
  auto C = verify_linear_congruence(5, 7, 100);
  auto j = C.to_json();
  EXPECT_EQ(j["family"], "linear");
  EXPECT_EQ(j["status"], "verified");
  EXPECT_TRUE(j["counterexample"].is_null());
}

TEST(Artifact, JsonRoundTrip) {
  auto R = construct_f_ell(5, 13);
  ASSERT_TRUE(R.ok);
  const auto& A = *R.artifact;
  auto B = artifact_from_json(nlohmann::json::parse(artifact_to_json(A).dump()));
  EXPECT_EQ(B.alpha, A.alpha);
  EXPECT_EQ(B.recipes, A.recipes);
  EXPECT_EQ(B.weight, A.weight);
  EXPECT_EQ(B.series, A.series);
  EXPECT_EQ(expand_artifact(B, Exponent24(24 * 40)), expand_artifact(A, Exponent24(24 * 40)));
  EXPECT_THROW(artifact_from_json(nlohmann::json{{"m", 5}}), ParseError);
}
