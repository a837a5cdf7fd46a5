#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frobcong/eta.hpp"
#include "frobcong/forms.hpp"
#include "frobcong/frobenius.hpp"
#include "frobcong/hecke.hpp"

namespace frobcong {

namespace detail {

inline void require_pipeline_primes(i64 m, i64 ell) {
  if (!is_prime(m) || m < 5) throw DomainError("m must be a prime >= 5");
  if (!is_prime(ell) || ell < 5) throw DomainError("l must be a prime >= 5");
  if (m == ell) throw DomainError("m and l must be distinct");
}

inline bool has_closed_form(i64 m) { return m == 5 || m == 7 || m == 11 || m == 13; }

}  // namespace detail

// The residue mod 24 of exponent numerators n with (l n + m)/24 integral.
inline i64 admissible_residue(i64 ell, i64 m) {
  if (std::gcd(ell, i64{24}) != 1) throw DomainError("admissible_residue: l must be coprime to 24");
  return pos_mod(-m * inv_mod(pos_mod(ell, 24), 24), 24);
}

// sum cphi_m((l n + m)/24) q^{n/24} mod l over admissible n, to precision prec.
inline FpSeries cphi_progression_mod(i64 m, i64 ell, Exponent24 prec, CphiSource src) {
  PrimeField F(ell);
  const i64 r = admissible_residue(ell, m);
  // Smallest admissible n with (l n + m)/24 >= 0.
  i64 n0 = r - 24 * floor_div(r + ceil_div(m, ell), 24);
  while (ell * n0 + m < 0) n0 += 24;
  if (n0 >= prec.num) return FpSeries(F, prec);
  const i64 count = ceil_div(prec.num - n0, 24);
  const i64 last = (ell * (n0 + 24 * (count - 1)) + m) / 24;
  auto c = cphi_mod(m, last + 1, ell, src);
  std::vector<u32> out(static_cast<size_t>(count));
  for (i64 i = 0; i < count; ++i) out[static_cast<size_t>(i)] = c[static_cast<size_t>((ell * (n0 + 24 * i) + m) / 24)];
  return FpSeries::dense(F, n0, std::move(out), prec);
}

// The progression from the closed form when one exists, compared with the theta-series source on
// every term whose cphi argument is below series_limit; from the theta series otherwise.
inline FpSeries cphi_progression_checked(i64 m, i64 ell, Exponent24 prec, i64 series_limit) {
  if (!detail::has_closed_form(m)) return cphi_progression_mod(m, ell, prec, CphiSource::Series);
  auto cf = cphi_progression_mod(m, ell, prec, CphiSource::ClosedForm);
  // Exponents n with (l n + m)/24 < series_limit.
  Exponent24 pre(std::min(prec.num, (24 * series_limit - m) / ell + 1));
  if (auto d = first_difference(cf.truncated(pre), cphi_progression_mod(m, ell, pre, CphiSource::Series))) {
    throw InconsistencyError("cphi sources disagree at q^" + d->str());
  }
  return cf;
}

// h_l = eta^{l lbar}(mz) sum cphi_m((n+m)/24) q^{n/24}, computed both as that product and as
// eta^{l lbar}(mz) eta^{-m}(z) times the theta series; the two must agree exactly.
inline ZSeries build_h_ell(i64 m, i64 ell, Exponent24 prec) {
  detail::require_pipeline_primes(m, ell);
  const i64 L = ell * ell_bar(ell);
  auto eta_part = eta_power(m, L, prec + Exponent24(m));
  const i64 Ng = std::max<i64>(1, ceil_div(prec.num - L * m + m, 24));
  auto via_cphi = (eta_part * cphi_grid_series(m, Ng)).truncated(prec);

  EtaQuotient Q{{m, L}, {1, -m}};
  const Exponent24 lead = Q.order_at_infinity();
  const i64 Nt = std::max<i64>(1, ceil_div(prec.num - lead.num, 24));
  auto via_theta = (Q.expand(prec) * r_m_series(m, Nt)).truncated(prec);
  if (via_cphi.prec() < prec || via_theta.prec() < prec) throw PrecisionError("build_h_ell: internal precision shortfall");
  if (auto d = first_difference(via_cphi, via_theta)) {
    throw InconsistencyError("build_h_ell: the two expressions for h_l differ at q^" + d->str());
  }
  return via_cphi;
}

// Order of eta^{l lbar}(mz)/eta^m(z) at the cusp 0, (l lbar - m^2)/24; the theta factor does not vanish there.
inline mpq_class h_ell_cusp0_order(i64 m, i64 ell) {
  EtaQuotient Q{{m, ell * ell_bar(ell)}, {1, -m}};
  return eta_quotient_order_at_cusp(Q, m, 0, 1);
}

// The basis used at level m and weight w: the eta quotient family when it fills the space,
// the 55-form family at (13, 48), else the generic pool (seeded with S_4(13) at level 13).
inline EchelonBasis standard_cusp_basis(i64 m, i64 w, i64 K, i64 ell, const std::string& data_dir = FROBCONG_SOURCE_DATA_DIR) {
  const i64 dim = dim_cusp_forms(w, m);
  const Exponent24 prec = Exponent24::integer(K);
  auto fam = eta_family_basis(m, w, prec);
  if (static_cast<i64>(fam.size()) == dim && fam.unit_leads_mod(ell)) return fam;
  if (m == 13 && w == 48) return eta_basis_from_spec(eta_spec_level13_weight48(), std::nullopt, 13, 48, prec, "eta(13z)^{2i-8} eta(z)^{104-2i}");
  std::vector<SeedForm> seeds;
  if (m == 13) {
    auto file = load_basis_file(data_dir + "/s4_13.basis");
    if (file.prec < K) throw PrecisionError("standard_cusp_basis: s4_13.basis has only " + std::to_string(file.prec) + " coefficients");
    for (auto& f : file.forms) seeds.push_back({4, f.truncated(prec)});
  }
  return cusp_form_basis(m, w, K, ell, seeds);
}

// Subtract multiples of the basis forms with leading exponents 1..j_max (unit leading coefficients)
// so that f vanishes there exactly; each multiplier must be 0 mod l. alpha tracks f in the basis.
inline QSeries enforce_vanishing(QSeries f, const EchelonBasis& G, i64 j_max, i64 ell, std::vector<mpq_class>* alpha = nullptr) {
  PrimeField F(ell);
  auto lead = G.leading();
  for (i64 j = 1; j <= j_max; ++j) {
    mpq_class a = f.coeff_int(j);
    if (sgn(a) == 0) continue;
    if (F.from_mpz(a.get_num()) != 0 || F.from_mpz(a.get_den()) == 0) {
      throw InconsistencyError("enforce_vanishing: coefficient of q^" + std::to_string(j) + " is not 0 mod " + std::to_string(ell));
    }
    size_t idx = lead.size();
    for (size_t i = 0; i < lead.size(); ++i) {
      if (lead[i].first == j) idx = i;
    }
    if (idx == lead.size() || F.from_mpz(lead[idx].second.get_num()) == 0) {
      throw DomainError("enforce_vanishing: no form q^" + std::to_string(j) + " + ... with unit leading coefficient");
    }
    mpq_class t = a / lead[idx].second;
    f = f - scale(G.forms[idx].truncated(f.prec()), t);
    if (alpha) (*alpha)[idx] -= t;
  }
  return f;
}

// f / eta^{lbar}(mz) mod l; negative exponents in the quotient are an error.
inline FpSeries divide_by_eta_power(const FpSeries& f, i64 m, i64 lbar) {
  const i64 ell = f.ring().characteristic();
  EtaQuotient inv{{m, -lbar}};
  Exponent24 need = f.prec() + inv.order_at_infinity() - f.order_bound();
  auto q = f * inv.expand_mod(need, ell);
  if (!q.is_zero() && *q.leading_exponent() < Exponent24(0)) {
    throw DomainError("divide_by_eta_power: quotient has the negative exponent " + q.leading_exponent()->str());
  }
  return q;
}

// The mod-l form F_l on the 1/24 grid.
struct FLArtifact {
  i64 m = 0, ell = 0, ell_bar = 0;
  FpSeries series{PrimeField(2), Exponent24(0)};
  mpq_class weight;
  Exponent24 verified_prec{0};
  std::string basis_source;
  i64 basis_weight = 0;
  size_t basis_size = 0;
  std::vector<u32> alpha;            // F = sum alpha_i B_i / eta^{lbar}(mz) mod l
  std::vector<EtaQuotient> recipes;  // B_i as eta quotients, when the basis is one
  bool target_vanishes = false;

  // F is a combination of eta quotients and can be expanded to any precision.
  bool expandable() const { return target_vanishes || (!recipes.empty() && recipes.size() == alpha.size()); }

  // Terms B_i / eta^{lbar}(mz) with nonzero coefficient.
  std::vector<std::pair<u32, EtaQuotient>> terms() const {
    std::vector<std::pair<u32, EtaQuotient>> out;
    for (size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i]) out.emplace_back(alpha[i], recipes[i] * EtaQuotient{{m, -ell_bar}});
    }
    return out;
  }
};

inline nlohmann::json artifact_to_json(const FLArtifact& A) {
  nlohmann::json recipes = nlohmann::json::array();
  for (const auto& E : A.recipes) {
    nlohmann::json f = nlohmann::json::array();
    for (auto [d, r] : E.factors) f.push_back({d, r});
    recipes.push_back(f);
  }
  return {{"m", A.m},
          {"ell", A.ell},
          {"ell_bar", A.ell_bar},
          {"weight", A.weight.get_str()},
          {"verified_prec_24", A.verified_prec.num},
          {"basis_source", A.basis_source},
          {"basis_weight", A.basis_weight},
          {"basis_size", A.basis_size},
          {"alpha", A.alpha},
          {"recipes", recipes},
          {"target_vanishes", A.target_vanishes},
          {"series", {{"start_24", A.series.start_num()}, {"prec_24", A.series.prec().num}, {"coeffs", A.series.dense_coeffs()}}}};
}

inline FLArtifact artifact_from_json(const nlohmann::json& j) {
  try {
    FLArtifact A;
    A.m = j.at("m");
    A.ell = j.at("ell");
    A.ell_bar = j.at("ell_bar");
    if (A.ell < 5 || !is_prime(A.ell) || A.ell_bar != ell_bar(A.ell)) throw ParseError("artifact: bad l");
    A.weight = mpq_class(j.at("weight").get<std::string>());
    A.verified_prec = Exponent24(j.at("verified_prec_24").get<i64>());
    A.basis_source = j.at("basis_source");
    A.basis_weight = j.at("basis_weight");
    A.basis_size = j.at("basis_size");
    A.alpha = j.at("alpha").get<std::vector<u32>>();
    for (const auto& f : j.at("recipes")) {
      std::map<i64, i64> m;
      for (const auto& dr : f) m[dr.at(0).get<i64>()] = dr.at(1).get<i64>();
      A.recipes.emplace_back(std::move(m));
    }
    A.target_vanishes = j.at("target_vanishes");
    const auto& s = j.at("series");
    PrimeField F(A.ell);
    auto c = s.at("coeffs").get<std::vector<u32>>();
    for (auto x : c) {
      if (x >= F.characteristic()) throw ParseError("artifact: coefficient out of range");
    }
    const Exponent24 prec(s.at("prec_24").get<i64>());
    A.series = c.empty() ? FpSeries(F, prec) : FpSeries::dense(F, s.at("start_24").get<i64>(), std::move(c), prec);
    return A;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("artifact: ") + e.what());
  }
}

// sum c_i E_i mod l for eta quotients whose orders at infinity lie in one class mod 1;
// euler powers are shared between terms.
inline FpSeries expand_eta_combination_mod(const std::vector<std::pair<u32, EtaQuotient>>& terms, Exponent24 prec, i64 ell) {
  PrimeField F(ell);
  if (terms.empty()) return FpSeries(F, prec);
  std::map<std::pair<i64, i64>, std::vector<u32>> cache;
  Exponent24 lo = terms[0].second.order_at_infinity();
  for (const auto& [c, E] : terms) lo = std::min(lo, E.order_at_infinity());
  if (prec <= lo) return FpSeries(F, prec);
  const i64 K = ceil_div(prec.num - lo.num, 24);
  auto power = [&](i64 d, i64 r) -> const std::vector<u32>& {
    auto key = std::make_pair(d, r);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (r < 0 && cache.count({d, -r})) {
      return cache[key] = detail::inverse_dense(F, cache[{d, -r}], static_cast<size_t>(K));
    }
    return cache[key] = euler_power_mod(d, r, K, ell);
  };
  FpSeries acc(F, prec);
  bool first = true;
  for (const auto& [c, E] : terms) {
    Exponent24 lead = E.order_at_infinity();
    if (lead >= prec) continue;
    const i64 Ki = ceil_div(prec.num - lead.num, 24);
    std::vector<u32> v;
    for (auto [d, r] : E.factors) {
      const auto& p = power(d, r);
      if (v.empty()) {
        v.assign(p.begin(), p.begin() + Ki);
      } else {
        v = ntt::mul_mod(v, std::vector<u32>(p.begin(), p.begin() + Ki), F.characteristic(), static_cast<size_t>(Ki));
      }
    }
    if (v.empty()) v.assign(1, 1);
    v.resize(static_cast<size_t>(Ki), 0);
    for (auto& x : v) x = F.mul(x, c);
    auto term = FpSeries::dense(F, lead.num, std::move(v), prec);
    acc = first ? term : acc + term;
    first = false;
  }
  return acc;
}

// Expansion of F_l from its eta-quotient description.
inline FpSeries expand_artifact(const FLArtifact& A, Exponent24 prec) {
  if (!A.expandable()) throw DomainError("expand_artifact: F_l is not stored as a combination of eta quotients");
  if (A.target_vanishes) return FpSeries(PrimeField(A.ell), prec);
  return expand_eta_combination_mod(A.terms(), prec, A.ell);
}

enum class PipelineRoute { ViaHEll, Direct };

struct PipelineReport {
  i64 m = 0, ell = 0, ell_bar = 0, weight = 0;
  bool cusp_condition = false;  // l lbar > m^2, so h_l is a cusp form
  PipelineRoute route = PipelineRoute::Direct;
  i64 horizon = 0;              // integer q-exponents checked: 0..horizon-1
  std::optional<Exponent24> h_lead;
  std::optional<mpq_class> h_cusp0_order;
  bool ok = false;
  std::optional<Exponent24> first_mismatch;
  std::string message;
  std::optional<FLArtifact> artifact;
};

struct PipelineOptions {
  std::string data_dir = FROBCONG_SOURCE_DATA_DIR;
  i64 horizon_margin = 10;
  // When F_l is an eta-quotient combination, also compare it with cphi for this many more terms.
  i64 extended_terms = 0;
  // The theta-series cphi is compared with the closed form for arguments below this.
  i64 series_check_limit = 1500;
};

// F_l through the h_l route when l lbar > m^2, else by writing the target directly in S_w(m).
inline PipelineReport construct_f_ell(i64 m, i64 ell, const PipelineOptions& opt = {}) {
  detail::require_pipeline_primes(m, ell);
  PipelineReport R;
  R.m = m;
  R.ell = ell;
  R.ell_bar = ell_bar(ell);
  R.weight = target_weight(ell);
  const i64 lb = R.ell_bar, w = R.weight;
  PrimeField F(ell);
  R.cusp_condition = ell * lb > m * m;
  R.route = R.cusp_condition ? PipelineRoute::ViaHEll : PipelineRoute::Direct;
  i64 H = sturm_bound(w, m);
  if (R.cusp_condition) H = std::max(H, sturm_bound((ell * lb - 1) / 2, m));
  H += opt.horizon_margin;
  R.horizon = H;
  const Exponent24 P = Exponent24::integer(H);

  // Target eta^{lbar}(mz) sum cphi_m((l n + m)/24) q^{n/24} mod l.
  const EtaQuotient eta_lb{{m, lb}};
  FpSeries target = (cphi_progression_checked(m, ell, P - eta_lb.order_at_infinity(), opt.series_check_limit) * eta_lb.expand_mod(P, ell)).truncated(P);

  if (R.cusp_condition) {
    auto h = build_h_ell(m, ell, Exponent24::integer(ell * H));
    R.h_lead = h.leading_exponent();
    R.h_cusp0_order = h_ell_cusp0_order(m, ell);
    auto u = U_p(reduce_mod(h, ell), ell).truncated(P);
    if (auto d = first_difference(u, target)) {
      R.first_mismatch = *d;
      R.message = "U_l(h_l) differs from the cphi target at q^" + d->str();
      return R;
    }
  }

  FLArtifact A;
  A.m = m;
  A.ell = ell;
  A.ell_bar = lb;
  A.weight = rational(ell - 2, 2);
  A.basis_weight = w;

  if (target.is_zero()) {
    A.target_vanishes = true;
    A.series = FpSeries(F, P - eta_lb.order_at_infinity());
    A.basis_source = "none (target vanishes)";
  } else {
    auto B = standard_cusp_basis(m, w, H, ell, opt.data_dir);
    A.basis_source = B.source;
    A.basis_size = B.size();
    auto red = B.reduce(ell);
    auto ex = express_in_basis(target, red, P);
    if (!ex.ok()) {
      R.first_mismatch = ex.first_mismatch;
      R.message = "no form in S_" + std::to_string(w) + "(" + std::to_string(m) + ") matches the target mod " + std::to_string(ell) +
                  "; first mismatch at q^" + ex.first_mismatch->str();
      return R;
    }
    // Integral lift with coefficients in [0, l), then clear the low coefficients exactly.
    std::vector<mpq_class> alpha(B.size());
    QSeries f(RationalRing{}, P);
    for (size_t i = 0; i < B.size(); ++i) {
      alpha[i] = mpq_class((*ex.coeffs)[i]);
      if ((*ex.coeffs)[i]) f = f + scale(B.forms[i].truncated(P), alpha[i]);
    }
    const i64 j_max = lb * m / 24;
    f = enforce_vanishing(f, B, j_max, ell, &alpha);
    A.series = divide_by_eta_power(reduce_mod(f, ell), m, lb);
    for (auto& a : alpha) A.alpha.push_back(static_cast<u32>(F.from_mpz(a.get_num()) * u64{F.inv(F.from_mpz(a.get_den()))} % F.characteristic()));
    if (B.recipes.size() == B.size() && !B.seed) A.recipes = B.recipes;
  }

  // End-to-end check of F_l against cphi below its precision.
  if (auto d = first_difference(A.series, cphi_progression_checked(m, ell, A.series.prec(), opt.series_check_limit))) {
    R.first_mismatch = *d;
    R.message = "F_l differs from cphi at q^" + d->str();
    return R;
  }
  A.verified_prec = A.series.prec();
  if (opt.extended_terms > 0 && A.expandable() && !A.target_vanishes) {
    const Exponent24 pe(A.series.order_bound().num + 24 * opt.extended_terms);
    auto Fe = expand_artifact(A, pe);
    if (auto d = first_difference(Fe.truncated(A.series.prec()), A.series)) {
      throw InconsistencyError("construct_f_ell: eta-quotient expansion of F_l disagrees with the pipeline at q^" + d->str());
    }
    if (auto d = first_difference(Fe, cphi_progression_checked(m, ell, pe, opt.series_check_limit))) {
      R.first_mismatch = *d;
      R.message = "extended F_l differs from cphi at q^" + d->str();
      return R;
    }
    A.verified_prec = pe;
  }
  R.ok = true;
  R.message = "F_l matches cphi mod l through q^" + A.verified_prec.str() + " (exclusive)";
  R.artifact = std::move(A);
  return R;
}

enum class CertStatus { Verified, Refuted, Vacuous };

inline std::string to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Verified: return "verified";
    case CertStatus::Refuted: return "refuted";
    default: return "vacuous";
  }
}

struct CongruenceCertificate {
  std::string family;  // "linear" or "atkin"
  i64 m = 0, ell = 0, p = 1;
  int epsilon = 0;     // required value of (n/p); 0 for linear congruences
  bool predicted = false;  // epsilon is the sign forced for p = 1 mod l
  i64 N = 0;
  CertStatus status = CertStatus::Vacuous;
  std::optional<i64> counterexample;
  i64 checked = 0;
  std::string method;

  nlohmann::json to_json() const {
    nlohmann::json j{{"family", family}, {"m", m}, {"ell", ell}, {"p", p}, {"epsilon", epsilon}, {"N", N},
                     {"status", to_string(status)}, {"checked", checked}, {"method", method}};
    if (family == "atkin") j["predicted_sign"] = predicted;
    j["counterexample"] = counterexample ? nlohmann::json(*counterexample) : nlohmann::json(nullptr);
    return j;
  }
};

inline std::vector<u32> cphi_mod_any(i64 m, i64 N, i64 ell) {
  return cphi_mod(m, N, ell, detail::has_closed_form(m) ? CphiSource::ClosedForm : CphiSource::Series);
}

// cphi_m((l n + m)/24) = 0 mod l for every admissible 0 <= n <= N.
inline CongruenceCertificate verify_linear_congruence(i64 m, i64 ell, i64 N) {
  if (m < 1) throw DomainError("verify_linear_congruence: m must be positive");
  if (!is_prime(ell) || ell < 5) throw DomainError("verify_linear_congruence: l must be a prime >= 5");
  CongruenceCertificate C;
  C.family = "linear";
  C.m = m;
  C.ell = ell;
  C.N = N;
  C.method = "direct";
  const i64 r = admissible_residue(ell, m);
  auto c = cphi_mod_any(m, (ell * N + m) / 24 + 1, ell);
  for (i64 n = r; n <= N; n += 24) {
    ++C.checked;
    if (c[static_cast<size_t>((ell * n + m) / 24)] != 0) {
      C.status = CertStatus::Refuted;
      C.counterexample = n;
      return C;
    }
  }
  C.status = C.checked ? CertStatus::Verified : CertStatus::Vacuous;
  return C;
}

// The sign (-1/p)^{(m l + 1)/2} (p/m) that (n/p) must take when p = 1 mod l.
inline int predicted_epsilon(i64 m, i64 ell, i64 p) {
  int s = ((m * ell + 1) / 2) % 2 ? legendre(-1, p) : 1;
  return s * (m == 1 ? 1 : legendre(p, m));
}

enum class ScanMethod { Auto, Direct, Hecke };

struct ScanOptions {
  ScanMethod method = ScanMethod::Auto;
  i64 max_direct_index = 20'000'000;  // largest cphi argument computed directly
  i64 extra_equations = 3;            // Hecke fit: equations beyond the unknowns
  const FLArtifact* artifact = nullptr;
};

// The signs tested for p: the forced one when p = 1 mod l, both otherwise.
inline std::vector<std::pair<int, bool>> scan_signs(i64 m, i64 ell, i64 p) {
  if (pos_mod(p, ell) == 1) return {{predicted_epsilon(m, ell, p), true}};
  return {{1, false}, {-1, false}};
}

namespace detail {

inline void require_scan_prime(i64 m, i64 ell, i64 p) {
  if (!is_prime(p) || (24 * ell * m) % p == 0) {
    throw DomainError("scan: p = " + std::to_string(p) + " must be a prime not dividing 24 l m");
  }
}

// Certificate from a function giving cphi_m((l p^2 n + m)/24) mod l (the F_l coefficient at p^2 n).
template <class Coeff>
CongruenceCertificate atkin_certificate(i64 m, i64 ell, i64 p, int eps, bool predicted, i64 N, const std::string& method, Coeff&& at) {
  CongruenceCertificate C;
  C.family = "atkin";
  C.m = m;
  C.ell = ell;
  C.p = p;
  C.epsilon = eps;
  C.predicted = predicted;
  C.N = N;
  C.method = method;
  const i64 r = admissible_residue(ell, m);
  for (i64 n = r; n <= N; n += 24) {
    if (legendre(n, p) != eps) continue;
    ++C.checked;
    if (at(n) != 0) {
      C.status = CertStatus::Refuted;
      C.counterexample = n;
      return C;
    }
  }
  C.status = C.checked ? CertStatus::Verified : CertStatus::Vacuous;
  return C;
}

}  // namespace detail

// Direct check: cphi_m((l p^2 n + m)/24) mod l for admissible n <= N with (n/p) = epsilon.
inline std::vector<CongruenceCertificate> scan_atkin_direct(i64 m, i64 ell, const std::vector<i64>& primes, i64 N) {
  std::vector<CongruenceCertificate> out;
  if (primes.empty()) return out;
  i64 pmax = *std::max_element(primes.begin(), primes.end());
  auto c = cphi_mod_any(m, (ell * pmax * pmax * N + m) / 24 + 1, ell);
  for (i64 p : primes) {
    detail::require_scan_prime(m, ell, p);
    for (auto [eps, pred] : scan_signs(m, ell, p)) {
      out.push_back(detail::atkin_certificate(m, ell, p, eps, pred, N, "direct", [&](i64 n) {
        return c[static_cast<size_t>((ell * p * p * n + m) / 24)];
      }));
    }
  }
  return out;
}

// Hecke data for one p: F | T(p^2) = sum t_j V_j mod l, with the middle coefficient c = +-p^{lambda-1}.
struct HeckeFit {
  i64 p = 0;
  u32 c = 0;
  u32 kappa = 0;
  std::vector<u32> t;
  size_t equations = 0;
};

// Hecke-accelerated scan. F_l is weight lambda + 1/2 with lambda = (l - 3)/2, and V is the space
// {B / eta^{lbar}(mz) : B in S_w(m) vanishing to order > lbar m/24}. For each p, the T(p^2) image
// a(p^2 n) + c (n/p) a(n) + p^{2 lambda - 1} a(n/p^2) is fitted in V from equations at small n and
// validated on extra equations; the fit then gives a(p^2 n) for every n <= N.
class HeckeScanner {
 public:
  HeckeScanner(const FLArtifact& A, const std::vector<i64>& primes, i64 N, i64 extra_equations, const std::string& data_dir = FROBCONG_SOURCE_DATA_DIR)
      : A_(A), F_(A.ell), N_(N) {
    if (!A.expandable()) throw DomainError("Hecke scan needs F_l as an eta-quotient combination");
    const i64 m = A.m, ell = A.ell, lb = A.ell_bar;
    r_ = admissible_residue(ell, m);
    lambda_ = (ell - 3) / 2;
    // V from a basis of S_w(m) long enough to read coefficients up to N and the fit equations.
    const i64 w = A.basis_weight;
    const Exponent24 lead_eta = EtaQuotient{{m, lb}}.order_at_infinity();
    const Exponent24 prec(std::max(N, r_ + 24 * (dim_cusp_forms(w, m) + 2 + extra_equations)) + 24);
    const i64 K = std::max(ceil_div(prec.num + lead_eta.num, 24) + 1, sturm_bound(w, m) + 1);
    auto B = standard_cusp_basis(m, w, K, ell, data_dir);
    Matrix<PrimeField> M(F_, B.size(), static_cast<size_t>(K));
    auto red = B.reduce(ell);
    for (size_t i = 0; i < red.size(); ++i) {
      for (i64 n = 0; n < K; ++n) M(i, static_cast<size_t>(n)) = red[i].coeff(Exponent24::integer(n));
    }
    auto rr = rref_mod(M);
    auto einv = EtaQuotient{{m, -lb}}.expand_mod(prec + lead_eta, ell);
    for (size_t k = 0; k < rr.rank(); ++k) {
      // Rows whose reduction vanishes to order > lbar m/24 span the mod-l forms divisible by eta^{lbar}(mz).
      if (Exponent24::integer(static_cast<i64>(rr.pivots[k])) <= lead_eta) continue;
      std::vector<u32> row(static_cast<size_t>(K));
      for (i64 n = 0; n < K; ++n) row[static_cast<size_t>(n)] = rr.rref(k, static_cast<size_t>(n));
      V_.push_back((FpSeries::from_coeffs(F_, std::move(row)) * einv).truncated(prec));
    }
    // Equation exponents: the first d + extra admissible n > 0.
    const size_t neq = V_.size() + 1 + static_cast<size_t>(extra_equations);
    for (i64 n = r_; eq_n_.size() < neq; n += 24) {
      if (n > 0) eq_n_.push_back(n);
    }
    i64 pmax = primes.empty() ? 1 : *std::max_element(primes.begin(), primes.end());
    const i64 top = std::max(pmax * pmax * eq_n_.back(), N) + 24;
    big_ = expand_artifact(A, Exponent24(top));
  }

  const std::vector<i64>& equation_exponents() const { return eq_n_; }
  size_t dimension() const { return V_.size(); }

  u32 a(i64 n) const {
    if (n < 0 || pos_mod(n, 24) != r_) return 0;
    return big_.coeff(Exponent24(n));
  }

  // Fits for both signs of c, using every admissible n with p^2 n inside the stored expansion and n
  // inside V (at least the base equations, at most kMaxEquations); normally exactly one sign is consistent.
  std::vector<HeckeFit> fits(i64 p) const {
    std::vector<i64> eqs;
    const i64 vprec = V_.empty() ? big_.prec().num : V_.front().prec().num;
    for (i64 n = eq_n_.front(); eqs.size() < eq_n_.size() || (eqs.size() < kMaxEquations && n < vprec && p * p * n < big_.prec().num); n += 24) {
      eqs.push_back(n);
    }
    const u32 pl = F_.from_int(p);
    const u32 base = F_.pow(pl, static_cast<u64>(lambda_ - 1));
    const u32 kappa = F_.pow(pl, static_cast<u64>(2 * lambda_ - 1));
    std::vector<HeckeFit> out;
    for (u32 c : {base, F_.neg(base)}) {
      Matrix<PrimeField> M(F_, V_.size(), eqs.size());
      std::vector<u32> rhs(eqs.size());
      for (size_t e = 0; e < eqs.size(); ++e) {
        i64 n = eqs[e];
        for (size_t j = 0; j < V_.size(); ++j) M(j, e) = V_[j].coeff(Exponent24(n));
        u32 v = a(p * p * n);
        v = F_.add(v, F_.mul(F_.mul(c, F_.from_int(legendre(n, p))), a(n)));
        if (n % (p * p) == 0) v = F_.add(v, F_.mul(kappa, a(n / (p * p))));
        rhs[e] = v;
      }
      auto sol = solve_row_combination(rref_mod(M), rhs);
      if (sol.x) out.push_back(HeckeFit{p, c, kappa, *sol.x, eqs.size()});
    }
    return out;
  }

  // a(p^2 n) from the fitted relation.
  u32 hecke_coeff(const HeckeFit& h, i64 n) const {
    u32 b = 0;
    for (size_t j = 0; j < V_.size(); ++j) b = F_.add(b, F_.mul(h.t[j], V_[j].coeff(Exponent24(n))));
    b = F_.sub(b, F_.mul(F_.mul(h.c, F_.from_int(legendre(n, h.p))), a(n)));
    if (n % (h.p * h.p) == 0) b = F_.sub(b, F_.mul(h.kappa, a(n / (h.p * h.p))));
    return b;
  }

  std::vector<CongruenceCertificate> certify(i64 p) const {
    detail::require_scan_prime(A_.m, A_.ell, p);
    auto fs = fits(p);
    if (fs.empty()) throw InconsistencyError("Hecke scan: no consistent T(p^2) relation for p = " + std::to_string(p));
    for (const auto& h : fs) {
      // Wherever p^2 n is inside the stored expansion, the relation must reproduce it.
      for (i64 n = r_; p * p * n < big_.prec().num && n <= N_; n += 24) {
        if (n > 0 && hecke_coeff(h, n) != a(p * p * n)) {
          throw InconsistencyError("Hecke scan: relation for p = " + std::to_string(p) + " fails at n = " + std::to_string(n));
        }
      }
    }
    std::vector<CongruenceCertificate> out;
    for (auto [eps, pred] : scan_signs(A_.m, A_.ell, p)) {
      std::optional<CongruenceCertificate> agreed;
      for (const auto& h : fs) {
        auto c = detail::atkin_certificate(A_.m, A_.ell, p, eps, pred, N_, "hecke", [&](i64 n) { return hecke_coeff(h, n); });
        if (agreed && (agreed->status != c.status || agreed->counterexample != c.counterexample)) {
          throw InconsistencyError("Hecke scan: both signs of the middle term fit for p = " + std::to_string(p) + " and give different certificates");
        }
        agreed = c;
      }
      out.push_back(*agreed);
    }
    return out;
  }

 private:
  static constexpr size_t kMaxEquations = 64;
  const FLArtifact& A_;
  PrimeField F_;
  i64 N_;
  i64 r_ = 0;
  i64 lambda_ = 0;
  std::vector<FpSeries> V_;
  std::vector<i64> eq_n_;
  FpSeries big_{PrimeField(2), Exponent24(0)};
};

// Certificates for each p and each tested sign. Auto uses the direct method when the largest
// cphi argument stays below max_direct_index, else the Hecke method (which needs an artifact).
inline std::vector<CongruenceCertificate> scan_atkin_congruence(i64 m, i64 ell, const std::vector<i64>& primes, i64 N, const ScanOptions& opt = {}) {
  if (m < 1) throw DomainError("scan: m must be positive");
  if (!is_prime(ell) || ell < 5) throw DomainError("scan: l must be a prime >= 5");
  for (i64 p : primes) detail::require_scan_prime(m, ell, p);
  if (primes.empty()) return {};
  i64 pmax = *std::max_element(primes.begin(), primes.end());
  bool direct_ok = (ell * pmax * pmax * N + m) / 24 <= opt.max_direct_index;
  ScanMethod method = opt.method;
  if (method == ScanMethod::Auto) method = direct_ok ? ScanMethod::Direct : ScanMethod::Hecke;
  if (method == ScanMethod::Direct) {
    if (!direct_ok) throw DomainError("scan: direct method would need cphi beyond index " + std::to_string(opt.max_direct_index));
    return scan_atkin_direct(m, ell, primes, N);
  }
  if (!opt.artifact) throw DomainError("scan: the Hecke method needs F_l from construct_f_ell");
  if (opt.artifact->m != m || opt.artifact->ell != ell) throw DomainError("scan: artifact is for a different (m, l)");
  HeckeScanner S(*opt.artifact, primes, N, opt.extra_equations);
  std::vector<CongruenceCertificate> out;
  for (i64 p : primes) {
    auto c = S.certify(p);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

}  // namespace frobcong
