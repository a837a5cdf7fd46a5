#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "frobcong/eta.hpp"
#include "frobcong/series.hpp"

namespace frobcong {

// Weight and level carried alongside a series as metadata only.
struct WeightTag {
  mpq_class k;
  i64 level = 1;
};

// sum_{n<N} p(n) q^n, by inverting prod (1 - q^n).
inline ZSeries partition_series(i64 N) {
  if (N < 1) throw DomainError("partition_series: N must be positive");
  return ZSeries::from_coeffs(IntegerRing{}, euler_power(1, -1, N));
}

// p(0), ..., p(N-1) mod ell.
inline std::vector<u32> partitions_mod(i64 N, i64 ell) { return euler_power_mod(1, -1, N, ell); }

// r_m(0), ..., r_m(N-1): representations by sum x_i^2 + sum_{i<j} x_i x_j in m-1 variables.
// Uses 2Q(x) = (sum x_i)^2 + sum x_i^2 and a DP over coordinates on (partial sum s, partial square sum t).
inline std::vector<__int128> r_m_counts(i64 m, i64 N) {
  if (m < 2) throw DomainError("r_m_series: m must be at least 2");
  if (N < 1) throw DomainError("r_m_series: N must be positive");
  const i64 T = 2 * (N - 1);  // 2Q <= T
  const i64 S = static_cast<i64>(std::sqrt(static_cast<double>(T) * static_cast<double>(m - 1))) + 1;
  const i64 W = 2 * S + 1;
  std::vector<__int128> cur(static_cast<size_t>(W * (T + 1)), 0), nxt;
  auto at = [&](std::vector<__int128>& v, i64 s, i64 t) -> __int128& { return v[static_cast<size_t>((s + S) * (T + 1) + t)]; };
  at(cur, 0, 0) = 1;
  for (i64 layer = 0; layer < m - 1; ++layer) {
    nxt.assign(cur.size(), 0);
    for (i64 s = -S; s <= S; ++s) {
      for (i64 t = 0; t <= T; ++t) {
        __int128 c = at(cur, s, t);
        if (c == 0) continue;
        for (i64 x = 0; t + x * x <= T; ++x) {
          i64 t2 = t + x * x;
          if (s + x <= S) at(nxt, s + x, t2) += c;
          if (x > 0 && s - x >= -S) at(nxt, s - x, t2) += c;
        }
      }
    }
    cur.swap(nxt);
  }
  std::vector<__int128> r(static_cast<size_t>(N), 0);
  for (i64 s = -S; s <= S; ++s) {
    for (i64 t = 0; t <= T; ++t) {
      __int128 c = at(cur, s, t);
      if (c == 0) continue;
      i64 q2 = s * s + t;
      if (q2 <= T && q2 % 2 == 0) r[static_cast<size_t>(q2 / 2)] += c;
    }
  }
  return r;
}

inline ZSeries r_m_series(i64 m, i64 N) {
  auto r = r_m_counts(m, N);
  std::vector<mpz_class> c;
  c.reserve(r.size());
  for (auto v : r) c.push_back(to_mpz(v));
  return ZSeries::from_coeffs(IntegerRing{}, std::move(c));
}

// Brute-force r_m(n) for n < N by enumerating the box |x_i| <= sqrt(2n).
inline std::vector<i64> r_m_brute_force(i64 m, i64 N) {
  std::vector<i64> r(static_cast<size_t>(N), 0);
  i64 B = static_cast<i64>(std::sqrt(2.0 * static_cast<double>(N))) + 1;
  std::vector<i64> x(static_cast<size_t>(m - 1), -B);
  if (m == 1) {
    r[0] = 1;
    return r;
  }
  while (true) {
    i64 s = 0, t = 0;
    for (i64 v : x) {
      s += v;
      t += v * v;
    }
    i64 q2 = s * s + t;
    if (q2 / 2 < N) ++r[static_cast<size_t>(q2 / 2)];
    size_t i = 0;
    while (i < x.size() && x[i] == B) x[i++] = -B;
    if (i == x.size()) break;
    ++x[i];
  }
  return r;
}

// sum_{n<N} cphi_m(n) q^n = (sum r_m(n) q^n) / prod (1 - q^n)^m; partitions when m = 1.
inline ZSeries cphi_series(i64 m, i64 N) {
  if (m < 1) throw DomainError("cphi_series: m must be positive");
  if (N < 1) throw DomainError("cphi_series: N must be positive");
  if (m == 1) return partition_series(N);
  return r_m_series(m, N) * ZSeries::from_coeffs(IntegerRing{}, euler_power(1, -m, N));
}

// The same series on the 1/24 grid: sum cphi_m((n+m)/24) q^{n/24} = eta^{-m}(z) sum r_m(n) q^n.
inline ZSeries cphi_grid_series(i64 m, i64 N) {
  auto c = cphi_series(m, N);
  return ZSeries::dense(IntegerRing{}, -m, c.integer_coeffs(N), Exponent24(24 * N - m));
}

namespace detail {

// q prod (1 - q^{13n}) / (1 - q^n)^2, N terms.
inline std::vector<mpz_class> cphi13_correction(i64 N) {
  auto num = euler_power(13, 1, N);
  auto den = euler_power(1, -2, N);
  auto prod = convolve(IntegerRing{}, num, den, static_cast<size_t>(N));
  prod.resize(static_cast<size_t>(N), 0);
  std::vector<mpz_class> a(static_cast<size_t>(N), 0);
  for (i64 n = 1; n < N; ++n) a[static_cast<size_t>(n)] = prod[static_cast<size_t>(n - 1)];
  return a;
}

inline void require_closed_form_m(i64 m) {
  if (m != 5 && m != 7 && m != 11 && m != 13) {
    throw DomainError("cphi_closed_form: no closed form for m = " + std::to_string(m) + " (supported: 5, 7, 11, 13)");
  }
}

}  // namespace detail

// cphi_m(n) = p(n/m) + m p(mn - (m^2-1)/24), plus 26 a(n) when m = 13.
inline ZSeries cphi_closed_form(i64 m, i64 N) {
  detail::require_closed_form_m(m);
  if (N < 1) throw DomainError("cphi_closed_form: N must be positive");
  const i64 beta = (m * m - 1) / 24;
  auto P = euler_power(1, -1, m * (N - 1) - beta + 1 > 0 ? m * (N - 1) - beta + 1 : 1);
  auto p = [&](i64 k) -> mpz_class { return k < 0 ? mpz_class(0) : P[static_cast<size_t>(k)]; };
  std::vector<mpz_class> c(static_cast<size_t>(N));
  std::vector<mpz_class> a;
  if (m == 13) a = detail::cphi13_correction(N);
  for (i64 n = 0; n < N; ++n) {
    mpz_class v = (n % m == 0 ? p(n / m) : mpz_class(0)) + m * p(m * n - beta);
    if (m == 13) v += 26 * a[static_cast<size_t>(n)];
    c[static_cast<size_t>(n)] = v;
  }
  return ZSeries::from_coeffs(IntegerRing{}, std::move(c));
}

// Where cphi values come from in the mod-ell paths.
enum class CphiSource { Series, ClosedForm };

// cphi_m(0..N-1) mod ell.
inline std::vector<u32> cphi_mod(i64 m, i64 N, i64 ell, CphiSource src) {
  PrimeField F(ell);
  const u32 l = F.characteristic();
  if (m == 1) return partitions_mod(N, ell);
  if (src == CphiSource::ClosedForm) {
    detail::require_closed_form_m(m);
    const i64 beta = (m * m - 1) / 24;
    auto P = partitions_mod(std::max<i64>(m * (N - 1) - beta + 1, 1), ell);
    std::vector<u32> a;
    if (m == 13) {
      auto num = euler_power_mod(13, 1, N, ell);
      auto den = euler_power_mod(1, -2, N, ell);
      auto prod = ntt::mul_mod(num, den, l, static_cast<size_t>(N));
      prod.resize(static_cast<size_t>(N), 0);
      a.assign(static_cast<size_t>(N), 0);
      for (i64 n = 1; n < N; ++n) a[static_cast<size_t>(n)] = prod[static_cast<size_t>(n - 1)];
    }
    std::vector<u32> c(static_cast<size_t>(N));
    for (i64 n = 0; n < N; ++n) {
      u64 v = (n % m == 0 ? P[static_cast<size_t>(n / m)] : 0);
      i64 k = m * n - beta;
      if (k >= 0) v += static_cast<u64>(m % ell) * P[static_cast<size_t>(k)];
      if (m == 13) v += static_cast<u64>(26 % ell) * a[static_cast<size_t>(n)];
      c[static_cast<size_t>(n)] = static_cast<u32>(v % l);
    }
    return c;
  }
  auto r = r_m_counts(m, N);
  std::vector<u32> rm(r.size());
  for (size_t i = 0; i < r.size(); ++i) {
    __int128 v = r[i] % static_cast<__int128>(l);
    rm[i] = static_cast<u32>(v < 0 ? v + l : v);
  }
  auto c = ntt::mul_mod(rm, euler_power_mod(1, -m, N, ell), l, static_cast<size_t>(N));
  c.resize(static_cast<size_t>(N), 0);
  return c;
}

// Number of m-colored generalized Frobenius symbols of weight n, by enumerating rows.
// A row is a strictly decreasing sequence of colored parts, ordered by value and then by color.
inline i64 brute_force_cphi(i64 m, i64 n) {
  if (m < 1) throw DomainError("brute_force_cphi: m must be positive");
  if (n < 0) return 0;
  if (n > 12) throw DomainError("brute_force_cphi: n > 12 is too large for enumeration");
  // rows[len][sum]: rows of the given length and entry sum.
  std::vector<std::vector<i64>> rows(static_cast<size_t>(n + 2), std::vector<i64>(static_cast<size_t>(n + 1), 0));
  std::function<void(i64, i64, i64, i64)> extend = [&](i64 last_v, i64 last_c, i64 len, i64 sum) {
    ++rows[static_cast<size_t>(len)][static_cast<size_t>(sum)];
    if (len + 1 > n + 1) return;
    // Next part must be strictly smaller than (last_v, last_c).
    for (i64 v = 0; v <= last_v && sum + v <= n; ++v) {
      for (i64 c = 0; c < m; ++c) {
        if (v == last_v && c >= last_c) break;
        extend(v, c, len + 1, sum + v);
      }
    }
  };
  extend(n + 1, 0, 0, 0);
  i64 total = 0;
  for (i64 r = 0; r <= n; ++r) {
    i64 rest = n - r;
    for (i64 sa = 0; sa <= rest; ++sa) total += rows[static_cast<size_t>(r)][static_cast<size_t>(sa)] * rows[static_cast<size_t>(r)][static_cast<size_t>(rest - sa)];
  }
  return total;
}

// A_m = prod (1 - q^n)^m sum cphi_m(n) q^n, which must equal the theta series sum r_m(n) q^n.
struct AmSeries {
  ZSeries series;
  WeightTag weight;
};

inline AmSeries A_m_series(i64 m, i64 N) {
  if (m < 1 || m % 2 == 0) throw DomainError("A_m_series: m must be odd");
  auto theta = m == 1 ? ZSeries::one(IntegerRing{}, Exponent24::integer(N)) : r_m_series(m, N);
  auto via_cphi = ZSeries::from_coeffs(IntegerRing{}, euler_power(1, m, N)) * cphi_series(m, N);
  if (auto d = first_difference(theta, via_cphi)) {
    throw InconsistencyError("A_m_series: theta series and eta-product forms differ at q^" + d->str());
  }
  return {theta, {rational(m - 1, 2), m}};
}

}  // namespace frobcong
