#pragma once

#include <vector>

#include "frobcong/series.hpp"

namespace frobcong {

// f | U_p: the coefficient at exponent e is the coefficient of f at p e.
// For p = 2, 3 only integer-exponent series are accepted, and the result keeps integer exponents.
template <class Ring>
QExpansion<Ring> U_p(const QExpansion<Ring>& f, i64 p) {
  if (!is_prime(p)) throw DomainError("U_p: p must be prime");
  Exponent24 prec(ceil_div(f.prec().num, p));
  if (f.is_zero()) return QExpansion<Ring>(f.ring(), prec);
  if (24 % p == 0 && !f.has_integral_exponents()) {
    throw DomainError("U_p: p = " + std::to_string(p) + " needs an integer-exponent series");
  }
  const auto& c = f.dense_coeffs();
  const i64 s = f.start_num();
  // Stored numerators are s + 24 i; keep those divisible by 24 p when p | 24, by p otherwise.
  const i64 step = 24 % p == 0 ? 24 * p : p;
  // First stored numerator divisible by step; later hits follow every p entries.
  i64 i0 = -1;
  for (i64 i = 0; i < step && i < static_cast<i64>(c.size()); ++i) {
    if (pos_mod(s + 24 * i, step) == 0) {
      i0 = i;
      break;
    }
  }
  if (i0 < 0) return QExpansion<Ring>(f.ring(), prec);
  std::vector<typename Ring::value_type> out;
  for (i64 i = i0; i < static_cast<i64>(c.size()); i += p) out.push_back(c[static_cast<size_t>(i)]);
  return QExpansion<Ring>::dense(f.ring(), (s + 24 * i0) / p, std::move(out), prec);
}

// f | V_p: exponents dilated by p.
template <class Ring>
QExpansion<Ring> V_p(const QExpansion<Ring>& f, i64 p) {
  if (p < 1) throw DomainError("V_p: p must be positive");
  Exponent24 prec(f.prec().num * p);
  if (f.is_zero()) return QExpansion<Ring>(f.ring(), prec);
  const auto& c = f.dense_coeffs();
  std::vector<typename Ring::value_type> out((c.size() - 1) * static_cast<size_t>(p) + 1, f.ring().zero());
  for (size_t i = 0; i < c.size(); ++i) out[i * static_cast<size_t>(p)] = c[i];
  return QExpansion<Ring>::dense(f.ring(), f.start_num() * p, std::move(out), prec);
}

// f | T_p = U_p f + p^{k-1} V_p f in even weight k on an integer-exponent series.
template <class Ring>
QExpansion<Ring> T_p(const QExpansion<Ring>& f, i64 p, i64 k) {
  if (!f.has_integral_exponents()) throw DomainError("T_p: series must have integer exponents");
  if (k < 2 || k % 2) throw DomainError("T_p: weight must be even and at least 2");
  auto u = U_p(f, p);
  auto v = scale(V_p(f, p), f.ring().from_mpz(mpz_pow(p, static_cast<unsigned long>(k - 1))));
  return u + v.truncated(u.prec());
}

// The weight (l + lbar - 2)/2; checked to be the only positive w with
// w = (l lbar - 1)/2 mod (l - 1) and w <= l + lbar/2 - 3/(2l).
inline i64 target_weight(i64 ell) {
  if (ell < 5 || !is_prime(ell)) throw DomainError("target_weight: l must be a prime >= 5");
  const i64 lb = ell_bar(ell);
  const i64 w = (ell + lb - 2) / 2;
  const i64 residue = pos_mod((ell * lb - 1) / 2, ell - 1);
  const mpq_class bound = mpq_class(to_mpz(ell)) + rational(lb, 2) - rational(3, 2 * ell);
  std::vector<i64> hits;
  for (i64 v = 1; mpq_class(to_mpz(v)) <= bound; ++v) {
    if (pos_mod(v, ell - 1) == residue) hits.push_back(v);
  }
  if (hits.size() != 1 || hits[0] != w) {
    throw InconsistencyError("target_weight: weight congruence and bound do not single out " + std::to_string(w));
  }
  return w;
}

// Upper bound (w - 1)/l + l on the filtration of a U_l image.
inline mpq_class filtration_u_bound(i64 w, i64 ell) {
  if (w < 1) throw DomainError("filtration_u_bound: w must be positive");
  return rational(w - 1, ell) + mpq_class(to_mpz(ell));
}

}  // namespace frobcong
