#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <tuple>
#include <numeric>
#include <utility>
#include <vector>

#include "frobcong/error.hpp"

namespace frobcong {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;

inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

inline i64 pos_mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

inline u64 pow_mod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Inverse of a modulo m; throws when gcd(a, m) != 1.
inline i64 inv_mod(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, r = pos_mod(a, m);
  while (r) {
    i64 q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw NonUnitError("inv_mod: " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return pos_mod(x, m);
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline bool is_prime(i64 n) { return n > 0 && is_prime(static_cast<u64>(n)); }
inline bool is_prime(int n) { return n > 0 && is_prime(static_cast<u64>(n)); }

inline std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  std::vector<bool> sieve(static_cast<size_t>(n + 1), true);
  for (i64 i = 2; i <= n; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= n; j += i) sieve[j] = false;
  }
  return out;
}

// Prime factorization by trial division, ascending primes.
inline std::vector<std::pair<i64, int>> factorize(i64 n) {
  if (n < 1) throw DomainError("factorize: n must be positive");
  std::vector<std::pair<i64, int>> f;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> d;
  for (i64 i = 1; i * i <= n; ++i) {
    if (n % i) continue;
    d.push_back(i);
    if (i * i != n) d.push_back(n / i);
  }
  std::sort(d.begin(), d.end());
  return d;
}

// Legendre symbol (n/p) for an odd prime p.
inline int legendre(i64 n, i64 p) {
  if (p < 3 || !is_prime(p)) throw DomainError("legendre: p must be an odd prime");
  i64 a = pos_mod(n, p);
  if (a == 0) return 0;
  return pow_mod(static_cast<u64>(a), static_cast<u64>((p - 1) / 2), static_cast<u64>(p)) == 1 ? 1 : -1;
}

// Kronecker symbol (a/n) for arbitrary integers, including n <= 0 and even n.
inline int kronecker(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  int v = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++v;
  }
  if (v > 0) {
    if ((a & 1) == 0) return 0;
    i64 r8 = pos_mod(a, 8);
    if ((v & 1) && (r8 == 3 || r8 == 5)) result = -result;
  }
  // Jacobi symbol (a/n), n odd positive.
  a = pos_mod(a, n);
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      i64 r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

// Index of Gamma_0(N) in SL_2(Z): N * prod_{p | N} (1 + 1/p).
inline i64 gamma0_index(i64 N) {
  i64 idx = N;
  for (auto [p, e] : factorize(N)) idx = idx / p * (p + 1);
  return idx;
}

// l mod 24 taken in {1, ..., 23}; defined for l coprime to 6.
inline i64 ell_bar(i64 ell) {
  if (std::gcd(ell, i64{6}) != 1) throw DomainError("ell_bar: ell must be coprime to 6");
  return pos_mod(ell, 24);
}

inline mpz_class to_mpz(i64 v) {
  mpz_class z;
  mpz_set_si(z.get_mpz_t(), v);
  return z;
}

inline mpz_class to_mpz(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class hi, lo;
  mpz_set_ui(hi.get_mpz_t(), static_cast<unsigned long>(u >> 64));
  mpz_set_ui(lo.get_mpz_t(), static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

// n/d in lowest terms.
inline mpq_class rational(i64 n, i64 d = 1) {
  mpq_class r(to_mpz(n), to_mpz(d));
  r.canonicalize();
  return r;
}

inline u32 mpz_mod_u32(const mpz_class& z, u32 p) {
  return static_cast<u32>(mpz_fdiv_ui(z.get_mpz_t(), p));
}

inline mpz_class mpz_pow(i64 base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), to_mpz(base).get_mpz_t(), e);
  return r;
}

}  // namespace frobcong
