#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frobcong/arith.hpp"
#include "frobcong/newform.hpp"
#include "frobcong/rings.hpp"

namespace frobcong {

struct SuitabilityConditions {
  bool c1 = false;  // 2^{l-4} is not 2 or 1/2 mod l
  bool c2 = false;  // l - 3 differs from (l+1)/2 and (l+3)/2
  bool c3 = false;  // (l+1)/(l+1, l-4) >= 6 and (l-1)/(l-1, l-4) >= 6
  bool all() const { return c1 && c2 && c3; }
};

inline SuitabilityConditions suitability_conditions(i64 ell) {
  if (ell < 5 || !is_prime(ell)) throw DomainError("suitability_conditions: l must be a prime >= 5");
  SuitabilityConditions c;
  const u64 L = static_cast<u64>(ell);
  const u64 t = pow_mod(2, L - 4, L);
  const u64 half = static_cast<u64>(inv_mod(2, ell));
  c.c1 = t != 2 && t != half;
  c.c2 = 2 * (ell - 3) != ell + 1 && 2 * (ell - 3) != ell + 3;
  c.c3 = (ell + 1) / std::gcd(ell + 1, ell - 4) >= 6 && (ell - 1) / std::gcd(ell - 1, ell - 4) >= 6;
  return c;
}

// Distinct primes l, m >= 5 with l lbar > m^2, or m = 13 and l >= 7, or m in {5, 7, 11}.
inline bool pair_hypothesis(i64 ell, i64 m) {
  if (ell < 5 || m < 5 || ell == m || !is_prime(ell) || !is_prime(m)) return false;
  if (ell * ell_bar(ell) > m * m) return true;
  if (m == 13) return ell >= 7;
  return m == 5 || m == 7 || m == 11;
}

// Pairs satisfying the hypothesis for which some condition fails. Pairs with both l, m <= 11 are
// left out: the linear congruences settle them.
inline std::vector<std::pair<i64, i64>> exception_pairs(i64 ell_max, i64 m_max) {
  std::vector<std::pair<i64, i64>> out;
  for (i64 ell : primes_up_to(ell_max)) {
    if (ell < 5 || suitability_conditions(ell).all()) continue;
    for (i64 m : primes_up_to(m_max)) {
      if (ell <= 11 && m <= 11) continue;
      if (pair_hypothesis(ell, m)) out.emplace_back(ell, m);
    }
  }
  return out;
}

// Real character n -> (n/N) for odd N >= 1 (N = 1 is the trivial character).
struct RealCharacter {
  i64 modulus = 1;
  int operator()(i64 n) const { return modulus == 1 ? 1 : kronecker(n, modulus); }
};

inline RealCharacter legendre_character(i64 m) {
  if (m < 3 || !is_prime(m)) throw DomainError("legendre_character: m must be an odd prime");
  return RealCharacter{m};
}

// -psi(p) (4p/r) for p in {2, 3}.
inline int epsilon_pair(i64 r, const RealCharacter& psi, i64 p) {
  if (std::gcd(r, i64{6}) != 1) throw DomainError("epsilon_pair: r must be coprime to 6");
  if (p != 2 && p != 3) throw DomainError("epsilon_pair: p must be 2 or 3");
  if (psi.modulus < 1 || psi.modulus % 2 == 0) throw DomainError("epsilon_pair: character modulus must be odd");
  return -psi(p) * kronecker(4 * p, r);
}

// Atkin-Lehner signs (eps_2, eps_3) of the newform space attached to (l, m).
inline std::pair<int, int> space_signs(i64 ell, i64 m) {
  const auto psi = legendre_character(m);
  return {epsilon_pair(-m * ell, psi, 2), epsilon_pair(-m * ell, psi, 3)};
}

inline std::string space_name(i64 ell, i64 m) {
  auto [e2, e3] = space_signs(ell, m);
  return "S^new_" + std::to_string(ell - 3) + "(" + std::to_string(6 * m) + ", " + std::to_string(e2) + ", " + std::to_string(e3) + ")";
}

// -p^{1-k/2} a(p); the quotient a(p) / p^{k/2-1} must be +-1.
inline int al_eigenvalue(const mpz_class& a_p, i64 p, i64 k) {
  if (!is_prime(p)) throw DomainError("al_eigenvalue: p must be prime");
  if (k < 2 || k % 2) throw DomainError("al_eigenvalue: weight must be even and >= 2");
  const mpz_class d = mpz_pow(p, static_cast<unsigned long>(k / 2 - 1));
  if (a_p == d) return -1;
  if (a_p == -d) return 1;
  throw InconsistencyError("al_eigenvalue: a(" + std::to_string(p) + ") = " + a_p.get_str() + " is not +-" + d.get_str());
}

// a(p)^2 / p^{k-1} in the field of a_p; the default weight is l - 3.
inline FFElement u_invariant(const FFElement& a_p, i64 p, std::optional<i64> k = std::nullopt) {
  const i64 ell = a_p.field().characteristic();
  if (!is_prime(p)) throw DomainError("u_invariant: p must be prime");
  if (p % ell == 0) throw DomainError("u_invariant: p must differ from l");
  const i64 w = k.value_or(ell - 3);
  const auto pk = FFElement::from_int(a_p.field(), p).pow(static_cast<u64>(w - 1));
  return a_p * a_p / pk;
}

inline FFElement u_invariant(const mpz_class& a_p, i64 p, i64 ell, std::optional<i64> k = std::nullopt) {
  ExtField F(ell, {0, 1});
  return u_invariant(FFElement(F, F.from_mpz(a_p)), p, k);
}

struct ExceptionalResult {
  bool witness = false;  // u rules out an exceptional image
  FFElement value;       // u^2 - 3u + 1
};

inline ExceptionalResult exceptional_test(const FFElement& u) {
  const auto& F = u.field();
  auto c = [&](i64 v) { return FFElement::from_int(F, v); };
  FFElement value = u * u - c(3) * u + c(1);
  bool small = u == c(0) || u == c(1) || u == c(2) || u == c(4);
  return {!small && !value.is_zero(), value};
}

// Least prime Q with (Q/l) = -1, Q not dividing the level, and a(Q) nonzero mod l.
// Returns nullopt when a(Q) vanishes at every such Q that the data covers.
inline std::optional<i64> dihedral_witness(const ModlReduction& r, i64 level) {
  bool any = false;
  for (const auto& [Q, v] : r.coeffs) {
    if (Q == r.ell || level % Q == 0 || legendre(Q, r.ell) != -1) continue;
    any = true;
    if (!r.field.is_zero(v)) return Q;
  }
  if (!any) throw DomainError("dihedral_witness: no prime Q with (Q/l) = -1 in the data");
  return std::nullopt;
}

inline std::optional<i64> dihedral_witness(const NewformRecord& rec, i64 ell) {
  auto rs = rec.reductions(ell);
  if (rs.empty()) throw DomainError("dihedral_witness: " + rec.label + " has no reduction mod " + std::to_string(ell));
  std::optional<i64> worst;
  for (const auto& r : rs) {
    auto q = dihedral_witness(r, rec.level);
    if (!q) return std::nullopt;
    worst = std::max(worst.value_or(0), *q);
  }
  return worst;
}

struct ExceptionalWitness {
  i64 p = 0;
  FFElement u;
  FFElement value;
};

struct ReductionAudit {
  std::string label;
  size_t index = 0;  // which reduction of the record
  int degree = 1;
  bool reducible_ruled_out = false;
  bool dihedral_ruled_out = false;
  std::optional<i64> dihedral_q;
  bool exceptional_ruled_out = false;
  std::optional<ExceptionalWitness> exceptional;
  bool resolved() const { return reducible_ruled_out && dihedral_ruled_out && exceptional_ruled_out; }
};

struct SuitabilityReport {
  i64 ell = 0, m = 0;
  int eps2 = 0, eps3 = 0;
  std::string space;
  SuitabilityConditions conditions;
  bool claims_complete = false;
  std::string source;
  std::vector<std::string> skipped;  // records outside the space
  std::vector<ReductionAudit> audits;
  bool suitable = false;
  std::string verdict;
};

inline const std::vector<i64>& default_witness_primes() {
  static const std::vector<i64> v{5, 7, 11, 17, 23};
  return v;
}

// Runs the image trichotomy on every reduction of every record in the space
// S^new_{l-3}(6m, eps_2, eps_3) at levels 6 and 6m.
inline SuitabilityReport audit_suitability(i64 ell, i64 m, const NewformSet& set,
                                           const std::vector<i64>& witness_primes = default_witness_primes()) {
  if (ell < 5 || m < 5 || ell == m || !is_prime(ell) || !is_prime(m)) {
    throw DomainError("audit_suitability: l and m must be distinct primes >= 5");
  }
  SuitabilityReport R;
  R.ell = ell;
  R.m = m;
  std::tie(R.eps2, R.eps3) = space_signs(ell, m);
  R.space = space_name(ell, m);
  R.conditions = suitability_conditions(ell);
  R.claims_complete = set.claims_complete;
  R.source = set.source;
  if (R.conditions.all()) {
    R.suitable = true;
    R.verdict = "suitable by the conditions alone";
    return R;
  }
  const i64 k = ell - 3;
  for (const auto& rec : set.records) {
    if (rec.weight != k || (rec.level != 6 && rec.level != 6 * m)) {
      R.skipped.push_back(rec.label);
      continue;
    }
    // Signs at 2 and 3, checked against the formula whenever a(p) is rational.
    bool in_space = true;
    for (auto [p, want] : {std::pair<i64, int>{2, R.eps2}, {3, R.eps3}}) {
      auto a = rec.rational_coeff(p);
      auto it = rec.al_signs.find(p);
      if (!a && it == rec.al_signs.end()) throw DomainError("audit_suitability: " + rec.label + " lacks a(" + std::to_string(p) + ")");
      int s = a ? al_eigenvalue(a->get_num(), p, rec.weight) : it->second;
      if (a && it != rec.al_signs.end() && it->second != s) {
        throw InconsistencyError("audit_suitability: " + rec.label + " stated Atkin-Lehner sign at " + std::to_string(p) + " disagrees with a(p)");
      }
      if (s != want) in_space = false;
    }
    if (!in_space) {
      R.skipped.push_back(rec.label);
      continue;
    }
    auto reds = rec.reductions(ell);
    if (reds.empty()) throw DomainError("audit_suitability: " + rec.label + " has no reduction mod " + std::to_string(ell));
    for (size_t i = 0; i < reds.size(); ++i) {
      const auto& r = reds[i];
      ReductionAudit A;
      A.label = rec.label;
      A.index = i;
      A.degree = r.degree();
      A.reducible_ruled_out = R.conditions.c1;
      if (R.conditions.c2) {
        A.dihedral_ruled_out = true;
      } else {
        A.dihedral_q = dihedral_witness(r, rec.level);
        A.dihedral_ruled_out = A.dihedral_q.has_value();
      }
      if (R.conditions.c3) {
        A.exceptional_ruled_out = true;
      } else {
        for (i64 p : witness_primes) {
          if ((6 * ell * m) % p == 0) continue;
          if (!r.has(p)) throw DomainError("audit_suitability: " + rec.label + " lacks a(" + std::to_string(p) + ")");
          auto u = u_invariant(r.at(p), p, k);
          auto t = exceptional_test(u);
          if (t.witness) {
            A.exceptional = ExceptionalWitness{p, u, t.value};
            A.exceptional_ruled_out = true;
            break;
          }
        }
      }
      R.audits.push_back(std::move(A));
    }
  }
  bool all = true;
  for (const auto& a : R.audits) all = all && a.resolved();
  R.suitable = all && R.claims_complete;
  if (!R.claims_complete) {
    R.verdict = "unresolved: the record set is not asserted to be complete";
  } else if (!all) {
    R.verdict = "unresolved: some reduction has no witness";
  } else {
    R.verdict = "suitable";
  }
  return R;
}

}  // namespace frobcong
