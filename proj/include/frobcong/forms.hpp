#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "frobcong/eta.hpp"
#include "frobcong/linalg.hpp"
#include "frobcong/series.hpp"

namespace frobcong {

// dim S_k(Gamma_0(N)) for even k >= 2 (k = 0 gives 0).
inline i64 dim_cusp_forms(i64 k, i64 N) {
  if (k < 0 || k % 2) throw DomainError("dim_cusp_forms: k must be even and nonnegative");
  if (k == 0) return 0;
  i64 mu = gamma0_index(N);
  auto fac = factorize(N);
  i64 nu2 = N % 4 == 0 ? 0 : 1, nu3 = N % 9 == 0 ? 0 : 1;
  for (auto [p, e] : fac) {
    if (nu2) nu2 *= p == 2 ? 1 : 1 + kronecker(-4, p);
    if (nu3) nu3 *= p == 3 ? 1 : 1 + kronecker(-3, p);
  }
  i64 cusps = 0;
  for (i64 d : divisors(N)) cusps += euler_phi(std::gcd(d, N / d));
  // 12 * dim, to stay in integers.
  i64 twelve_dim = (k - 1) * mu + (12 * (k / 4) - 3 * (k - 1)) * nu2 + (12 * (k / 3) - 4 * (k - 1)) * nu3 - 6 * cusps;
  if (k == 2) twelve_dim += 12;
  return twelve_dim / 12;
}

inline i64 dim_modular_forms(i64 k, i64 N) {
  if (k == 0) return 1;
  i64 cusps = 0;
  for (i64 d : divisors(N)) cusps += euler_phi(std::gcd(d, N / d));
  return dim_cusp_forms(k, N) + cusps - (k == 2 ? 1 : 0);
}

// ceil(k * [SL_2(Z) : Gamma_0(N)] / 12).
inline i64 sturm_bound(const mpq_class& k, i64 N) {
  mpq_class v = k * mpq_class(to_mpz(gamma0_index(N))) / 12;
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return c.get_si();
}
inline i64 sturm_bound(i64 k, i64 N) { return sturm_bound(mpq_class(to_mpz(k)), N); }

// Level-one Eisenstein series E_2, E_4, E_6 to K terms.
inline std::vector<mpz_class> eisenstein_level1(i64 k, i64 K) {
  i64 c;
  switch (k) {
    case 2: c = -24; break;
    case 4: c = 240; break;
    case 6: c = -504; break;
    default: throw DomainError("eisenstein_level1: k must be 2, 4 or 6");
  }
  std::vector<mpz_class> sig(static_cast<size_t>(K), 0);
  for (i64 d = 1; d < K; ++d) {
    mpz_class dk = mpz_pow(d, static_cast<unsigned long>(k - 1));
    for (i64 n = d; n < K; n += d) sig[static_cast<size_t>(n)] += dk;
  }
  std::vector<mpz_class> e(static_cast<size_t>(K));
  if (K > 0) e[0] = 1;
  for (i64 n = 1; n < K; ++n) e[static_cast<size_t>(n)] = c * sig[static_cast<size_t>(n)];
  return e;
}

// E = m E_2(mz) - E_2(z) = (m - 1) + 24 q + ... in M_2(Gamma_0(m)).
inline ZSeries eisenstein_weight2(i64 m, i64 K) {
  auto e2 = eisenstein_level1(2, K);
  std::vector<mpz_class> c(static_cast<size_t>(K), 0);
  for (i64 n = 0; n < K; ++n) {
    c[static_cast<size_t>(n)] = -e2[static_cast<size_t>(n)];
    if (n % m == 0) c[static_cast<size_t>(n)] += m * e2[static_cast<size_t>(n / m)];
  }
  return ZSeries::from_coeffs(IntegerRing{}, std::move(c));
}

// A list of integer-exponent forms with strictly increasing leading exponents.
struct EchelonBasis {
  i64 level = 1;
  i64 weight = 0;
  std::vector<QSeries> forms;
  std::string source;
  // When set, form i is exactly this eta quotient (times the seed, if any); used to re-expand at higher precision.
  std::vector<EtaQuotient> recipes;
  std::optional<ZSeries> seed;

  size_t size() const { return forms.size(); }

  Exponent24 prec() const {
    Exponent24 p(std::numeric_limits<i64>::max() / 4);
    for (const auto& f : forms) p = std::min(p, f.prec());
    return p;
  }

  // (leading exponent j, leading coefficient b_j) of each form.
  std::vector<std::pair<i64, mpq_class>> leading() const {
    std::vector<std::pair<i64, mpq_class>> out;
    for (const auto& f : forms) {
      if (f.is_zero()) throw DomainError("EchelonBasis: zero form");
      out.emplace_back(f.leading_exponent()->num / 24, f.leading_coefficient());
    }
    return out;
  }

  void validate() const {
    std::optional<i64> prev;
    for (const auto& f : forms) {
      if (!f.has_integral_exponents()) throw DomainError("EchelonBasis: forms must have integer exponents");
      if (f.is_zero()) throw DomainError("EchelonBasis: zero form");
      i64 j = f.leading_exponent()->num / 24;
      if (prev && j <= *prev) {
        throw DomainError("EchelonBasis: leading exponents not strictly increasing (" + std::to_string(*prev) + ", " + std::to_string(j) + ")");
      }
      prev = j;
    }
  }

  // Every form is l-integral and its leading coefficient is an l-unit.
  bool unit_leads_mod(i64 ell) const {
    PrimeField F(ell);
    for (const auto& [j, b] : leading()) {
      if (F.from_mpz(b.get_num()) == 0 || F.from_mpz(b.get_den()) == 0) return false;
    }
    return true;
  }

  std::vector<FpSeries> reduce(i64 ell) const {
    std::vector<FpSeries> out;
    for (const auto& f : forms) out.push_back(reduce_mod(f, ell));
    return out;
  }

  // Reductions scaled to G_j = q^j + O(q^{j+1}); requires unit leading coefficients.
  std::vector<FpSeries> normalized_mod(i64 ell) const {
    if (!unit_leads_mod(ell)) throw NonUnitError("EchelonBasis: a leading coefficient is divisible by " + std::to_string(ell));
    std::vector<FpSeries> out;
    for (const auto& g : reduce(ell)) out.push_back(scale(g, g.ring().inv(g.leading_coefficient())));
    return out;
  }
};

inline EchelonBasis echelon_from_integral(std::vector<ZSeries> forms, i64 level, i64 weight, std::string source) {
  EchelonBasis B;
  B.level = level;
  B.weight = weight;
  B.source = std::move(source);
  for (auto& f : forms) B.forms.push_back(to_rational(f));
  B.validate();
  return B;
}

// Row echelon form over Z_(l) (ell > 0) or Q (ell = 0) of integer-exponent series, using columns q^0..q^{K-1}.
// Over Z_(l) the pivot in each column has minimal l-adic valuation, so row operations stay l-integral
// and the Z_(l)-span is preserved; unit pivots are scaled to 1. Over Q pivots are scaled to 1.
inline std::vector<QSeries> integral_echelon(const std::vector<QSeries>& forms, i64 K, i64 ell) {
  auto val = [&](const mpq_class& x) -> i64 {
    if (sgn(x) == 0) return std::numeric_limits<i64>::max();
    i64 v = 0;
    mpz_class n = x.get_num(), d = x.get_den();
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(ell))) {
      n /= static_cast<unsigned long>(ell);
      ++v;
    }
    while (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(ell))) {
      d /= static_cast<unsigned long>(ell);
      --v;
    }
    return v;
  };
  std::vector<std::vector<mpq_class>> rows;
  for (const auto& f : forms) {
    if (!f.has_integral_exponents()) throw DomainError("integral_echelon: forms must have integer exponents");
    if (f.prec().num < 24 * K) throw PrecisionError("integral_echelon: form known only to " + f.prec().str());
    std::vector<mpq_class> r(static_cast<size_t>(K));
    for (i64 n = 0; n < K; ++n) r[static_cast<size_t>(n)] = f.coeff_int(n);
    rows.push_back(std::move(r));
  }
  std::vector<std::vector<mpq_class>> out;
  std::vector<bool> used(rows.size(), false);
  for (i64 c = 0; c < K; ++c) {
    std::optional<size_t> piv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (used[i] || sgn(rows[i][static_cast<size_t>(c)]) == 0) continue;
      if (!piv || (ell > 0 && val(rows[i][static_cast<size_t>(c)]) < val(rows[*piv][static_cast<size_t>(c)]))) piv = i;
    }
    if (!piv) continue;
    used[*piv] = true;
    auto& P = rows[*piv];
    mpq_class lead = P[static_cast<size_t>(c)];
    mpq_class scale_by = 1 / lead;
    if (ell > 0) {
      i64 v = val(lead);
      // Keep the l-power part of the pivot; scale away the unit part.
      mpq_class lp = v >= 0 ? mpq_class(mpz_pow(ell, static_cast<unsigned long>(v))) : mpq_class(1, mpz_pow(ell, static_cast<unsigned long>(-v)));
      scale_by = lp / lead;
    }
    for (auto& x : P) x *= scale_by;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (used[i] || sgn(rows[i][static_cast<size_t>(c)]) == 0) continue;
      mpq_class t = rows[i][static_cast<size_t>(c)] / P[static_cast<size_t>(c)];
      for (i64 j = c; j < K; ++j) rows[i][static_cast<size_t>(j)] -= t * P[static_cast<size_t>(j)];
    }
    out.push_back(P);
  }
  std::vector<QSeries> res;
  for (auto& r : out) res.push_back(QSeries::from_coeffs(RationalRing{}, r));
  return res;
}

// Integral basis G_j = q^j + O(q^{d+1}) of S_k(1) from Delta^j E_4^b E_6^c with 12 j + 4 b + 6 c = k.
inline EchelonBasis level1_basis(i64 k, i64 K) {
  if (k % 2 || k < 0) throw DomainError("level1_basis: k must be even and nonnegative");
  std::vector<ZSeries> rows;
  Exponent24 prec = Exponent24::integer(K);
  auto E4 = ZSeries::from_coeffs(IntegerRing{}, eisenstein_level1(4, K));
  auto E6 = ZSeries::from_coeffs(IntegerRing{}, eisenstein_level1(6, K));
  auto D = eta_power(1, 24, prec);
  for (i64 j = 1; 12 * j <= k; ++j) {
    i64 r = k - 12 * j;
    if (r == 2) continue;
    i64 c = (r % 4 == 0) ? 0 : 1;
    i64 b = (r - 6 * c) / 4;
    auto g = pow(D, static_cast<u64>(j)) * pow(E4, static_cast<u64>(b)) * pow(E6, static_cast<u64>(c));
    rows.push_back(g.truncated(prec));
  }
  // Clear entries above each later leading term; leading coefficients are 1, so this stays integral.
  for (size_t i = rows.size(); i-- > 0;) {
    for (size_t t = i + 1; t < rows.size(); ++t) {
      i64 j = rows[t].leading_exponent()->num / 24;
      if (j >= K) continue;
      mpz_class c = rows[i].coeff_int(j);
      if (sgn(c) != 0) rows[i] = rows[i] - scale(rows[t], c);
    }
  }
  return echelon_from_integral(std::move(rows), 1, k, "level 1 Miller basis");
}

// Expand eta quotients (optionally times a seed form) into an echelon basis.
inline EchelonBasis eta_basis_from_spec(const std::vector<EtaQuotient>& spec, const std::optional<ZSeries>& seed, i64 level,
                                        i64 weight, Exponent24 prec, std::string source) {
  EchelonBasis B;
  B.level = level;
  B.weight = weight;
  B.source = std::move(source);
  B.recipes = spec;
  B.seed = seed;
  for (const auto& E : spec) {
    for (auto [d, r] : E.factors) {
      if (level % d) throw DomainError("eta_basis_from_spec: " + E.str() + " is not on level " + std::to_string(level));
    }
    ZSeries f(IntegerRing{}, prec);
    if (seed) {
      f = E.expand(prec - seed->order_bound()) * *seed;
      f = f.truncated(prec);
      if (f.prec() < prec) throw PrecisionError("eta_basis_from_spec: seed form known only to " + seed->prec().str());
    } else {
      f = E.expand(prec);
    }
    B.forms.push_back(to_rational(f));
  }
  try {
    B.validate();
  } catch (const DomainError& e) {
    throw DomainError(std::string("eta_basis_from_spec: leading-term collision: ") + e.what());
  }
  return B;
}

// eta(13z)^{2i-6} eta(z)^{30-2i} h, i = 1..16, with h in S_4(13).
inline std::vector<EtaQuotient> eta_spec_level13_weight16() {
  std::vector<EtaQuotient> s;
  for (i64 i = 1; i <= 16; ++i) s.push_back(EtaQuotient{{13, 2 * i - 6}, {1, 30 - 2 * i}});
  return s;
}

// eta(13z)^{2i-8} eta(z)^{104-2i}, i = 1..55.
inline std::vector<EtaQuotient> eta_spec_level13_weight48() {
  std::vector<EtaQuotient> s;
  for (i64 i = 1; i <= 55; ++i) s.push_back(EtaQuotient{{13, 2 * i - 8}, {1, 104 - 2 * i}});
  return s;
}

// Holomorphic eta quotients eta(z)^a eta(mz)^b on Gamma_0(m) with trivial character and weight w,
// vanishing to order at least min_order at both cusps; sorted by order at infinity.
inline std::vector<EtaQuotient> eta_quotients_level_m(i64 m, i64 w, i64 min_order) {
  if (!is_prime(m) || m < 5) throw DomainError("eta_quotients_level_m: m must be a prime >= 5");
  std::vector<EtaQuotient> out;
  for (i64 b = -2 * w * m; b <= 2 * w * m; b += 2) {
    i64 a = 2 * w - b;
    i64 inf = a + m * b, zero = m * a + b;
    if (inf % 24 || zero % 24) continue;
    if (inf < 24 * min_order || zero < 24 * min_order) continue;
    out.push_back(EtaQuotient{{1, a}, {m, b}});
  }
  return out;
}

// Cusp forms eta(z)^a eta(mz)^b of weight w; an echelon list since the order at infinity grows with b.
inline EchelonBasis eta_family_basis(i64 m, i64 w, Exponent24 prec) {
  return eta_basis_from_spec(eta_quotients_level_m(m, w, 1), std::nullopt, m, w, prec,
                             "eta quotients eta(z)^a eta(" + std::to_string(m) + "z)^b");
}

// Which factors make up a product-basis form: E^{e} H_g^{q} H_s.
struct ProductRecipe {
  i64 n;       // leading exponent
  i64 e_power; // power of E
  i64 g_power; // power of H_g
  i64 s;       // index of the extra H (0 if none)
};

inline std::vector<ProductRecipe> product_recipes(i64 g, i64 k, i64 target_count) {
  if (g < 1) throw DomainError("product_basis: H must be nonempty");
  if (g * k < target_count) {
    throw DomainError("product_basis: insufficient H: g*k = " + std::to_string(g * k) + " < " + std::to_string(target_count));
  }
  std::vector<ProductRecipe> out;
  for (i64 n = 1; n <= target_count; ++n) {
    i64 q = n / g, s = n % g;
    i64 e = k - q - (s > 0 ? 1 : 0);
    if (e < 0) throw DomainError("product_basis: leading exponent " + std::to_string(n) + " needs more than k factors");
    out.push_back({n, e, q, s});
  }
  return out;
}

// Forms E^{k-j} H_{i_1} ... H_{i_j} of weight 2k with leading exponents 1..target_count.
// H must be an echelon list with H_i = a_i q^i + ...
inline EchelonBasis product_basis(const ZSeries& E, const std::vector<ZSeries>& H, i64 k, i64 target_count, i64 level) {
  for (size_t i = 0; i < H.size(); ++i) {
    if (H[i].is_zero() || *H[i].leading_exponent() != Exponent24::integer(static_cast<i64>(i) + 1)) {
      throw DomainError("product_basis: H_" + std::to_string(i + 1) + " must have leading term q^" + std::to_string(i + 1));
    }
  }
  const i64 g = static_cast<i64>(H.size());
  std::vector<ZSeries> rows;
  for (const auto& r : product_recipes(g, k, target_count)) {
    ZSeries f = pow(E, static_cast<u64>(r.e_power)) * pow(H[static_cast<size_t>(g - 1)], static_cast<u64>(r.g_power));
    if (r.s > 0) f = f * H[static_cast<size_t>(r.s - 1)];
    rows.push_back(f);
  }
  return echelon_from_integral(std::move(rows), level, 2 * k, "products of E and H");
}

// Choose, in pool order, candidates whose reductions mod p are independent, stopping at dim.
// Independence mod p implies independence over Q.
inline std::vector<ZSeries> select_independent_mod(const std::function<std::optional<ZSeries>()>& next, i64 dim, i64 K, i64 p) {
  PrimeField F(p);
  std::vector<std::vector<u32>> ech;  // reduced rows with their pivot columns
  std::vector<size_t> piv;
  std::vector<ZSeries> chosen;
  while (static_cast<i64>(chosen.size()) < dim) {
    auto cand = next();
    if (!cand) break;
    std::vector<u32> v(static_cast<size_t>(K));
    for (i64 n = 0; n < K; ++n) v[static_cast<size_t>(n)] = F.from_mpz(cand->coeff_int(n));
    for (size_t r = 0; r < ech.size(); ++r) {
      u32 c = v[piv[r]];
      if (!c) continue;
      for (i64 j = 0; j < K; ++j) v[static_cast<size_t>(j)] = F.sub(v[static_cast<size_t>(j)], F.mul(c, ech[r][static_cast<size_t>(j)]));
    }
    size_t pc = 0;
    while (pc < v.size() && v[pc] == 0) ++pc;
    if (pc == v.size()) continue;
    u32 inv = F.inv(v[pc]);
    for (auto& x : v) x = F.mul(x, inv);
    for (size_t r = 0; r < ech.size(); ++r) {
      u32 c = ech[r][pc];
      if (!c) continue;
      for (i64 j = 0; j < K; ++j) ech[r][static_cast<size_t>(j)] = F.sub(ech[r][static_cast<size_t>(j)], F.mul(c, v[static_cast<size_t>(j)]));
    }
    ech.push_back(std::move(v));
    piv.push_back(pc);
    chosen.push_back(*cand);
  }
  return chosen;
}

// Spanning set for S_w(Gamma_0(m)): cusp seeds (eta quotient cusp forms and any supplied cusp forms)
// times monomials in E, E_4, E_4(mz), E_6, E_6(mz). Candidates are chosen independent mod p until
// the dimension formula is met.
struct SeedForm {
  i64 weight;
  ZSeries form;
};

inline std::vector<ZSeries> cusp_form_spanning_set(i64 m, i64 w, i64 K, i64 p, const std::vector<SeedForm>& extra_seeds = {}) {
  const i64 dim = dim_cusp_forms(w, m);
  Exponent24 prec = Exponent24::integer(K);
  std::vector<std::pair<i64, ZSeries>> gens;
  gens.emplace_back(2, eisenstein_weight2(m, K));
  auto e4 = eisenstein_level1(4, K), e6 = eisenstein_level1(6, K);
  gens.emplace_back(4, ZSeries::from_coeffs(IntegerRing{}, e4));
  gens.emplace_back(6, ZSeries::from_coeffs(IntegerRing{}, e6));
  std::vector<mpz_class> e4m(static_cast<size_t>(K), 0), e6m(static_cast<size_t>(K), 0);
  for (i64 n = 0; n * m < K; ++n) {
    e4m[static_cast<size_t>(n * m)] = e4[static_cast<size_t>(n)];
    e6m[static_cast<size_t>(n * m)] = e6[static_cast<size_t>(n)];
  }
  gens.emplace_back(4, ZSeries::from_coeffs(IntegerRing{}, e4m));
  gens.emplace_back(6, ZSeries::from_coeffs(IntegerRing{}, e6m));

  std::vector<SeedForm> seeds;
  for (i64 ws = w; ws >= 1; --ws) {
    auto qs = eta_quotients_level_m(m, ws, 1);
    for (auto it = qs.rbegin(); it != qs.rend(); ++it) seeds.push_back({ws, it->expand(prec)});
  }
  for (const auto& s : extra_seeds) seeds.push_back(s);

  // Lazy enumeration: for each seed, all monomials of the remaining weight.
  size_t si = 0;
  std::vector<std::vector<i64>> monos;
  size_t mi = 0;
  std::function<void(size_t, i64, std::vector<i64>&)> gen_monos = [&](size_t g, i64 rest, std::vector<i64>& e) {
    if (g == gens.size()) {
      if (rest == 0) monos.push_back(e);
      return;
    }
    for (i64 k = 0; k * gens[g].first <= rest; ++k) {
      e[g] = k;
      gen_monos(g + 1, rest - k * gens[g].first, e);
    }
    e[g] = 0;
  };
  auto load_seed = [&]() {
    monos.clear();
    mi = 0;
    i64 rest = w - seeds[si].weight;
    if (rest < 0 || rest % 2) return;
    std::vector<i64> e(gens.size(), 0);
    gen_monos(0, rest, e);
  };
  if (!seeds.empty()) load_seed();
  auto next = [&]() -> std::optional<ZSeries> {
    while (si < seeds.size()) {
      if (mi < monos.size()) {
        ZSeries f = seeds[si].form;
        for (size_t g = 0; g < gens.size(); ++g) {
          if (monos[mi][g]) f = f * pow(gens[g].second, static_cast<u64>(monos[mi][g]));
        }
        ++mi;
        return f.truncated(prec);
      }
      if (++si < seeds.size()) load_seed();
    }
    return std::nullopt;
  };
  auto chosen = select_independent_mod(next, dim, K, p);
  if (static_cast<i64>(chosen.size()) < dim) {
    throw InconsistencyError("cusp_form_spanning_set: pool spans " + std::to_string(chosen.size()) + " of " +
                             std::to_string(dim) + " dimensions of S_" + std::to_string(w) + "(" + std::to_string(m) + ")");
  }
  return chosen;
}

// Replace a list of independent integral forms by one spanning the l-saturation of their Z-span:
// while the reductions are dependent, swap a row for (sum c_j f_j)/l. Exact division needs the
// forms known past the Sturm bound, so a combination vanishing mod l below K vanishes entirely.
inline std::vector<ZSeries> saturate_at(std::vector<ZSeries> forms, i64 K, i64 ell) {
  PrimeField F(ell);
  while (true) {
    Matrix<PrimeField> M(F, forms.size(), static_cast<size_t>(K));
    for (size_t i = 0; i < forms.size(); ++i) {
      for (i64 n = 0; n < K; ++n) M(i, static_cast<size_t>(n)) = F.from_mpz(forms[i].coeff_int(n));
    }
    auto rr = rref_mod(M);
    if (rr.rank() == forms.size()) return forms;
    // A zero row of the rref gives a kernel vector in the transform.
    size_t k = rr.rank();
    std::vector<mpz_class> c(forms.size());
    size_t pick = forms.size();
    for (size_t j = 0; j < forms.size(); ++j) {
      c[j] = rr.transform(k, j);
      if (c[j] != 0 && pick == forms.size()) pick = j;
    }
    std::vector<mpz_class> acc(static_cast<size_t>(K), 0);
    for (size_t j = 0; j < forms.size(); ++j) {
      if (c[j] == 0) continue;
      for (i64 n = 0; n < K; ++n) acc[static_cast<size_t>(n)] += c[j] * forms[j].coeff_int(n);
    }
    for (auto& x : acc) {
      if (!mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(ell))) {
        throw InconsistencyError("saturate_at: kernel combination is not divisible by " + std::to_string(ell));
      }
      mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(ell));
    }
    forms[pick] = ZSeries::from_coeffs(IntegerRing{}, std::move(acc));
  }
}

// Echelon basis of S_w(Gamma_0(m)) built from the pool above, saturated at l and echelonized
// over Z_(l) with minimal-valuation pivots. Needs K past the Sturm bound.
inline EchelonBasis cusp_form_basis(i64 m, i64 w, i64 K, i64 ell, const std::vector<SeedForm>& extra_seeds = {}) {
  if (K <= sturm_bound(w, m)) throw PrecisionError("cusp_form_basis: K must exceed the Sturm bound " + std::to_string(sturm_bound(w, m)));
  constexpr i64 kSelectionPrime = 1000000007;
  auto chosen = saturate_at(cusp_form_spanning_set(m, w, K, kSelectionPrime, extra_seeds), K, ell);
  std::vector<QSeries> q;
  for (auto& f : chosen) q.push_back(to_rational(f));
  EchelonBasis B;
  B.level = m;
  B.weight = w;
  B.source = "products of cusp forms and Eisenstein series";
  B.forms = integral_echelon(q, K, ell);
  B.validate();
  return B;
}

// Result of writing f mod l in a basis.
struct Expression {
  std::optional<std::vector<u32>> coeffs;
  std::optional<Exponent24> first_mismatch;
  bool ok() const { return coeffs.has_value(); }
};

// Find c with sum c_i B_i = f mod l below prec, or report the first exponent where no such c exists.
inline Expression express_in_basis(const FpSeries& f, const std::vector<FpSeries>& basis, Exponent24 prec) {
  const PrimeField& F = f.ring();
  for (const auto& b : basis) {
    if (!(b.ring() == F)) throw RingMismatch("express_in_basis: basis and target over different fields");
    if (b.prec() < prec) throw PrecisionError("express_in_basis: basis form known only to " + b.prec().str());
  }
  if (f.prec() < prec) throw PrecisionError("express_in_basis: target known only to " + f.prec().str());
  // Common residue class of exponents.
  std::optional<i64> cls = f.residue_class();
  for (const auto& b : basis) {
    if (auto c = b.residue_class()) {
      if (cls && *cls != *c) {
        if (f.is_zero()) continue;
        return {std::nullopt, *f.leading_exponent()};
      }
      cls = c;
    }
  }
  if (!cls) return {std::vector<u32>(basis.size(), 0), std::nullopt};
  i64 lo = std::numeric_limits<i64>::max();
  if (!f.is_zero()) lo = f.start_num();
  for (const auto& b : basis) {
    if (!b.is_zero()) lo = std::min(lo, b.start_num());
  }
  size_t cols = lo >= prec.num ? 0 : static_cast<size_t>(ceil_div(prec.num - lo, 24));
  Matrix<PrimeField> M(F, basis.size(), cols);
  for (size_t i = 0; i < basis.size(); ++i) {
    for (size_t j = 0; j < cols; ++j) M(i, j) = basis[i].coeff(Exponent24(lo + 24 * static_cast<i64>(j)));
  }
  std::vector<u32> target(cols);
  for (size_t j = 0; j < cols; ++j) target[j] = f.coeff(Exponent24(lo + 24 * static_cast<i64>(j)));
  auto rr = rref_mod(M);
  auto sol = solve_row_combination(rr, target);
  if (!sol.x) return {std::nullopt, Exponent24(lo + 24 * static_cast<i64>(*sol.first_bad_column))};
  return {std::move(sol.x), std::nullopt};
}

// Text basis file: header "N k count prec", then count rows of prec integers (coefficients of q^0..q^{prec-1}).
struct BasisFile {
  i64 level = 1;
  i64 weight = 0;
  i64 prec = 0;
  std::vector<ZSeries> forms;
};

inline BasisFile parse_basis(std::istream& in, const std::string& name = "basis") {
  BasisFile b;
  i64 count;
  std::string line;
  // Skip comment lines starting with '#'.
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      if (!out.empty() && out[0] == '#') continue;
      if (out.find_first_not_of(" \t\r") == std::string::npos) continue;
      return true;
    }
    return false;
  };
  if (!next_line(line)) throw ParseError(name + ": missing header");
  {
    std::istringstream hs(line);
    if (!(hs >> b.level >> b.weight >> count >> b.prec)) throw ParseError(name + ": malformed header '" + line + "'");
    std::string extra;
    if (hs >> extra) throw ParseError(name + ": trailing data in header");
    if (b.level < 1 || count < 0 || b.prec < 0) throw ParseError(name + ": header values out of range");
  }
  for (i64 r = 0; r < count; ++r) {
    if (!next_line(line)) throw ParseError(name + ": expected " + std::to_string(count) + " rows, found " + std::to_string(r));
    std::istringstream rs(line);
    std::vector<mpz_class> c;
    std::string tok;
    while (rs >> tok) {
      mpz_class v;
      if (v.set_str(tok, 10) != 0) throw ParseError(name + ": row " + std::to_string(r + 1) + ": bad integer '" + tok + "'");
      c.push_back(v);
    }
    if (static_cast<i64>(c.size()) != b.prec) {
      throw ParseError(name + ": row " + std::to_string(r + 1) + " has " + std::to_string(c.size()) + " entries, expected " + std::to_string(b.prec));
    }
    b.forms.push_back(ZSeries::from_coeffs(IntegerRing{}, std::move(c)));
  }
  if (next_line(line)) throw ParseError(name + ": more rows than the header count");
  return b;
}

inline std::string serialize_basis(const BasisFile& b) {
  std::ostringstream os;
  os << b.level << ' ' << b.weight << ' ' << b.forms.size() << ' ' << b.prec << '\n';
  for (const auto& f : b.forms) {
    auto c = f.integer_coeffs(b.prec);
    for (i64 n = 0; n < b.prec; ++n) os << (n ? " " : "") << c[static_cast<size_t>(n)].get_str();
    os << '\n';
  }
  return os.str();
}

inline BasisFile load_basis_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open basis file " + path);
  return parse_basis(in, path);
}

inline void save_basis_file(const std::string& path, const BasisFile& b) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write basis file " + path);
  out << serialize_basis(b);
}

// The file's forms as an echelon basis; rejects repeated or decreasing leading exponents.
inline EchelonBasis basis_from_file(const BasisFile& b, const std::string& source) {
  return echelon_from_integral(b.forms, b.level, b.weight, source);
}

}  // namespace frobcong
