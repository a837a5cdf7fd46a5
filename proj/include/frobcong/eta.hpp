#pragma once

#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "frobcong/series.hpp"

namespace frobcong {

// Sparse expansion of E(x) = prod (1 - x^n) by the pentagonal number theorem:
// (exponent, sign) pairs with exponent < K, ascending.
inline std::vector<std::pair<i64, int>> pentagonal_terms(i64 K) {
  std::vector<std::pair<i64, int>> t;
  if (K <= 0) return t;
  t.emplace_back(0, 1);
  for (i64 j = 1;; ++j) {
    i64 e1 = j * (3 * j - 1) / 2, e2 = j * (3 * j + 1) / 2;
    if (e1 >= K) break;
    int s = (j & 1) ? -1 : 1;
    t.emplace_back(e1, s);
    if (e2 < K) t.emplace_back(e2, s);
  }
  return t;
}

namespace detail {

// E(x)^r to K terms for r >= 0 by the J.C.P. Miller recurrence
// n B_n = sum_k ((r+1)k - n) A_k B_{n-k}, exact over Z.
inline std::vector<mpz_class> euler_power_z(i64 r, i64 K) {
  std::vector<mpz_class> B(static_cast<size_t>(std::max<i64>(K, 0)));
  if (K <= 0) return B;
  B[0] = 1;
  if (r == 0) return B;
  auto pent = pentagonal_terms(K);
  mpz_class acc, tmp;
  for (i64 n = 1; n < K; ++n) {
    acc = 0;
    for (size_t i = 1; i < pent.size() && pent[i].first <= n; ++i) {
      i64 k = pent[i].first;
      i64 w = (r + 1) * k - n;
      if (w == 0 || sgn(B[static_cast<size_t>(n - k)]) == 0) continue;
      tmp = B[static_cast<size_t>(n - k)] * to_mpz(w);
      if (pent[i].second > 0) {
        acc += tmp;
      } else {
        acc -= tmp;
      }
    }
    mpz_divexact_ui(acc.get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(n));
    B[static_cast<size_t>(n)] = acc;
  }
  return B;
}

// Spread a dense series in x = q^delta onto integer exponents of q, keeping K terms.
template <class T>
std::vector<T> dilate(const std::vector<T>& c, i64 delta, i64 K, const T& zero) {
  std::vector<T> out(static_cast<size_t>(std::max<i64>(K, 0)), zero);
  for (size_t i = 0; i < c.size(); ++i) {
    i64 e = static_cast<i64>(i) * delta;
    if (e >= K) break;
    out[static_cast<size_t>(e)] = c[i];
  }
  return out;
}

}  // namespace detail

// E(q^delta)^r = prod (1 - q^{delta n})^r to K integer terms over Z, any integer r.
inline std::vector<mpz_class> euler_power(i64 delta, i64 r, i64 K) {
  if (delta < 1) throw DomainError("euler_power: delta must be positive");
  i64 Kx = ceil_div(std::max<i64>(K, 0), delta);
  std::vector<mpz_class> c;
  if (r >= 0) {
    c = detail::euler_power_z(r, Kx);
  } else {
    c = detail::inverse_dense(IntegerRing{}, detail::euler_power_z(-r, Kx), static_cast<size_t>(Kx));
  }
  return detail::dilate(c, delta, K, mpz_class(0));
}

// E(q^delta)^r mod ell to K terms. Uses E(x)^ell = E(x^ell) mod ell to keep exponents below ell.
inline std::vector<u32> euler_power_mod(i64 delta, i64 r, i64 K, i64 ell) {
  PrimeField F(ell);
  if (delta < 1) throw DomainError("euler_power_mod: delta must be positive");
  if (K <= 0) return {};
  if (r < 0) {
    return detail::inverse_dense(F, euler_power_mod(delta, -r, K, ell), static_cast<size_t>(K));
  }
  i64 Kx = ceil_div(K, delta);
  const u32 p = F.characteristic();
  std::vector<u32> out(static_cast<size_t>(Kx), 0);
  out[0] = 1;
  i64 a = r / ell, b = r % ell;
  if (b > 0) {
    std::vector<u32> e(static_cast<size_t>(Kx), 0);
    for (auto [k, s] : pentagonal_terms(Kx)) e[static_cast<size_t>(k)] = s > 0 ? 1 : p - 1;
    if (Kx < ell) {
      // Miller recurrence: every index n < Kx is invertible mod ell here.
      auto pent = pentagonal_terms(Kx);
      for (i64 n = 1; n < Kx; ++n) {
        u64 acc = 0;
        for (size_t i = 1; i < pent.size() && pent[i].first <= n; ++i) {
          i64 k = pent[i].first;
          i64 w = pos_mod((b + 1) * k - n, ell);
          if (pent[i].second < 0) w = (ell - w) % ell;
          acc = (acc + static_cast<u64>(w) * out[static_cast<size_t>(n - k)]) % p;
        }
        out[static_cast<size_t>(n)] = static_cast<u32>(acc * F.inv(static_cast<u32>(n % ell)) % p);
      }
    } else {
      std::vector<u32> base = e;
      i64 bb = b;
      bool first = true;
      while (bb) {
        if (bb & 1) {
          if (first) {
            out = base;
            first = false;
          } else {
            out = ntt::mul_mod(out, base, p, static_cast<size_t>(Kx));
          }
        }
        bb >>= 1;
        if (bb) base = ntt::mul_mod(base, base, p, static_cast<size_t>(Kx));
      }
      out.resize(static_cast<size_t>(Kx), 0);
    }
  }
  if (a > 0) {
    auto hi = euler_power_mod(ell, a, Kx, ell);
    out = ntt::mul_mod(out, hi, p, static_cast<size_t>(Kx));
    out.resize(static_cast<size_t>(Kx), 0);
  }
  return detail::dilate(out, delta, K, u32{0});
}

// Expansion of eta(delta z)^r to precision prec. Negative powers are inverses of positive ones.
inline ZSeries eta_power(i64 delta, i64 r, Exponent24 prec) {
  if (delta < 1) throw DomainError("eta_power: delta must be positive");
  IntegerRing Z;
  Exponent24 lead(delta * r);
  if (prec <= lead) {
    throw PrecisionError("eta_power: precision " + prec.str() + " does not exceed the leading exponent " + lead.str());
  }
  if (r < 0) {
    // invert() maps precision P to P - 2 lead, so the positive power needs P = prec + 2|lead|.
    return invert(eta_power(delta, -r, Exponent24(prec.num - 2 * delta * r)));
  }
  i64 K = ceil_div(prec.num - lead.num, 24);
  return ZSeries::dense(Z, lead.num, euler_power(delta, r, K), prec);
}

// A formal product prod eta(delta z)^{r_delta}.
struct EtaQuotient {
  std::map<i64, i64> factors;  // delta -> r_delta

  EtaQuotient() = default;
  EtaQuotient(std::initializer_list<std::pair<const i64, i64>> f) : factors(f) { prune(); }
  explicit EtaQuotient(std::map<i64, i64> f) : factors(std::move(f)) { prune(); }

  bool operator==(const EtaQuotient&) const = default;

  // Twice the weight, sum r_delta.
  i64 twice_weight() const {
    i64 s = 0;
    for (auto [d, r] : factors) s += r;
    return s;
  }
  mpq_class weight() const { return rational(twice_weight(), 2); }
  Exponent24 order_at_infinity() const {
    i64 s = 0;
    for (auto [d, r] : factors) s += d * r;
    return Exponent24(s);
  }
  // Least common multiple of the deltas.
  i64 minimal_level() const {
    i64 l = 1;
    for (auto [d, r] : factors) l = std::lcm(l, d);
    return l;
  }
  EtaQuotient operator*(const EtaQuotient& o) const {
    auto f = factors;
    for (auto [d, r] : o.factors) f[d] += r;
    return EtaQuotient(f);
  }
  EtaQuotient inverse() const {
    auto f = factors;
    for (auto& [d, r] : f) r = -r;
    return EtaQuotient(f);
  }

  std::string str() const {
    std::string s;
    for (auto [d, r] : factors) {
      if (!s.empty()) s += "*";
      s += "eta(" + std::to_string(d) + "z)^" + std::to_string(r);
    }
    return s.empty() ? "1" : s;
  }

  // Exact expansion to precision prec.
  ZSeries expand(Exponent24 prec) const {
    IntegerRing Z;
    Exponent24 lead = order_at_infinity();
    if (prec <= lead) return ZSeries(Z, prec);
    i64 K = ceil_div(prec.num - lead.num, 24);
    std::vector<mpz_class> acc(static_cast<size_t>(K), 0);
    acc[0] = 1;
    for (auto [d, r] : factors) {
      acc = detail::convolve(Z, acc, euler_power(d, r, K), static_cast<size_t>(K));
    }
    return ZSeries::dense(Z, lead.num, std::move(acc), prec);
  }

  // Expansion reduced mod ell, computed without integer growth.
  FpSeries expand_mod(Exponent24 prec, i64 ell) const {
    PrimeField F(ell);
    Exponent24 lead = order_at_infinity();
    if (prec <= lead) return FpSeries(F, prec);
    i64 K = ceil_div(prec.num - lead.num, 24);
    std::vector<u32> acc(static_cast<size_t>(K), 0);
    acc[0] = 1;
    for (auto [d, r] : factors) {
      acc = ntt::mul_mod(acc, euler_power_mod(d, r, K, ell), F.characteristic(), static_cast<size_t>(K));
    }
    acc.resize(static_cast<size_t>(K), 0);
    return FpSeries::dense(F, lead.num, std::move(acc), prec);
  }

 private:
  void prune() {
    for (auto it = factors.begin(); it != factors.end();) {
      if (it->first < 1) throw DomainError("EtaQuotient: delta must be positive");
      it = it->second == 0 ? factors.erase(it) : std::next(it);
    }
  }
};

// Order of vanishing of an eta quotient at the cusp a/c of Gamma_0(N), in the local uniformizer,
// normalized so that the cusp at infinity (c = N) reports the leading q-exponent.
inline mpq_class eta_quotient_order_at_cusp(const EtaQuotient& E, i64 N, i64 a, i64 c) {
  if (N < 1 || c < 1) throw DomainError("cusp order: level and cusp denominator must be positive");
  if (N % c != 0) throw DomainError("cusp order: denominator " + std::to_string(c) + " does not divide level " + std::to_string(N));
  if (std::gcd(a, c) != 1) throw DomainError("cusp order: cusp must be in lowest terms");
  for (auto [d, r] : E.factors) {
    if (N % d != 0) throw DomainError("cusp order: delta " + std::to_string(d) + " does not divide level " + std::to_string(N));
  }
  mpq_class sum = 0;
  for (auto [d, r] : E.factors) {
    i64 g = std::gcd(c, d);
    sum += mpq_class(to_mpz(g * g * r), to_mpz(d));
  }
  i64 g2 = std::gcd(c * c, N);
  mpq_class out = sum * mpq_class(to_mpz(N), to_mpz(24 * g2));
  out.canonicalize();
  return out;
}

// Cusp classes of Gamma_0(N): for each c | N, there are phi(gcd(c, N/c)) cusps a/c, all with the same eta-quotient order.
struct CuspClass {
  i64 c;
  i64 count;
  i64 width;
};

inline i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

inline std::vector<CuspClass> cusp_classes(i64 N) {
  std::vector<CuspClass> out;
  for (i64 c : divisors(N)) {
    i64 g = std::gcd(c, N / c);
    out.push_back({c, euler_phi(g), N / std::gcd(c * c, N)});
  }
  return out;
}

// Sum over all cusps of the local orders; equals k * index / 12 for an eta quotient of weight k on Gamma_0(N).
inline mpq_class total_cusp_order(const EtaQuotient& E, i64 N) {
  mpq_class t = 0;
  for (const auto& cc : cusp_classes(N)) {
    t += eta_quotient_order_at_cusp(E, N, 1, cc.c) * mpq_class(to_mpz(cc.count));
  }
  return t;
}

}  // namespace frobcong
