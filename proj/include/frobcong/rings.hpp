#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "frobcong/arith.hpp"

namespace frobcong {

// The ring Z of exact integers.
class IntegerRing {
 public:
  using value_type = mpz_class;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(i64 v) const { return to_mpz(v); }
  value_type from_mpz(const mpz_class& v) const { return v; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  void addmul(value_type& acc, const value_type& a, const value_type& b) const {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_unit(const value_type& a) const { return a == 1 || a == -1; }
  value_type inv(const value_type& a) const {
    if (!is_unit(a)) throw NonUnitError("IntegerRing: " + a.get_str() + " is not a unit");
    return a;
  }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool operator==(const IntegerRing&) const { return true; }
  std::string name() const { return "ZZ"; }
  std::string format(const value_type& a) const { return a.get_str(); }
};

// The field Q, used for l-integral lifts.
class RationalRing {
 public:
  using value_type = mpq_class;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(i64 v) const { return mpq_class(to_mpz(v)); }
  value_type from_mpz(const mpz_class& v) const { return mpq_class(v); }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  void addmul(value_type& acc, const value_type& a, const value_type& b) const { acc += a * b; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_unit(const value_type& a) const { return sgn(a) != 0; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw NonUnitError("RationalRing: zero is not a unit");
    return 1 / a;
  }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool operator==(const RationalRing&) const { return true; }
  std::string name() const { return "QQ"; }
  std::string format(const value_type& a) const { return a.get_str(); }
};

// The prime field F_p, elements stored as residues in [0, p).
class PrimeField {
 public:
  using value_type = u32;

  explicit PrimeField(i64 p) : p_(static_cast<u32>(p)) {
    if (p < 2 || p >= (i64{1} << 31) || !is_prime(p)) {
      throw DomainError("PrimeField: modulus " + std::to_string(p) + " is not a prime below 2^31");
    }
  }

  u32 characteristic() const { return p_; }
  value_type zero() const { return 0; }
  value_type one() const { return 1 % p_; }
  value_type from_int(i64 v) const { return static_cast<u32>(pos_mod(v, p_)); }
  value_type from_mpz(const mpz_class& v) const { return mpz_mod_u32(v, p_); }
  value_type add(value_type a, value_type b) const {
    u32 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const { return static_cast<u32>(u64{a} * b % p_); }
  void addmul(value_type& acc, value_type a, value_type b) const { acc = static_cast<u32>((acc + u64{a} * b) % p_); }
  bool is_zero(value_type a) const { return a == 0; }
  bool is_unit(value_type a) const { return a != 0; }
  value_type inv(value_type a) const {
    if (a == 0) throw NonUnitError("PrimeField: zero is not a unit");
    return static_cast<u32>(pow_mod(a, p_ - 2, p_));
  }
  value_type pow(value_type a, u64 e) const { return static_cast<u32>(pow_mod(a, e, p_)); }
  bool equal(value_type a, value_type b) const { return a == b; }
  bool operator==(const PrimeField& o) const { return p_ == o.p_; }
  std::string name() const { return "GF(" + std::to_string(p_) + ")"; }
  std::string format(value_type a) const { return std::to_string(a); }

 private:
  u32 p_;
};

namespace detail {

// Dense polynomials over F_p, coefficients low to high, no trailing zeros.
using Poly = std::vector<u32>;

inline void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b, u32 p) {
  if (a.empty() || b.empty()) return {};
  std::vector<u64> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + u64{a[i]} * b[j]) % p;
  }
  Poly out(r.begin(), r.end());
  poly_trim(out);
  return out;
}

inline Poly poly_rem(Poly a, const Poly& m, u32 p) {
  poly_trim(a);
  size_t dm = m.size() - 1;
  u32 lead_inv = static_cast<u32>(pow_mod(m.back(), p - 2, p));
  while (a.size() > dm) {
    u32 c = static_cast<u32>(u64{a.back()} * lead_inv % p);
    size_t shift = a.size() - 1 - dm;
    for (size_t j = 0; j <= dm; ++j) {
      a[shift + j] = static_cast<u32>((a[shift + j] + u64{p - c} * m[j]) % p);
    }
    poly_trim(a);
  }
  return a;
}

inline Poly poly_sub(Poly a, const Poly& b, u32 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + p - b[i];
  poly_trim(a);
  return a;
}

inline Poly poly_gcd(Poly a, Poly b, u32 p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Poly poly_powmod(Poly base, u64 e, const Poly& m, u32 p) {
  Poly r{1};
  base = poly_rem(base, m, p);
  while (e) {
    if (e & 1) r = poly_rem(poly_mul(r, base, p), m, p);
    base = poly_rem(poly_mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

// x^(p^k) mod m by repeated p-th powering.
inline Poly poly_frobenius_x(int k, const Poly& m, u32 p) {
  Poly r{0, 1};
  for (int i = 0; i < k; ++i) r = poly_powmod(r, p, m, p);
  return r;
}

// Rabin's irreducibility test for a monic polynomial of degree d.
inline bool poly_is_irreducible(const Poly& m, u32 p) {
  int d = static_cast<int>(m.size()) - 1;
  if (d < 1) return false;
  if (d == 1) return true;
  Poly x{0, 1};
  if (!poly_sub(poly_frobenius_x(d, m, p), x, p).empty()) return false;
  for (auto [r, e] : factorize(d)) {
    Poly g = poly_gcd(m, poly_sub(poly_frobenius_x(d / static_cast<int>(r), m, p), x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

// The extension field F_{l^d} = F_l[x]/(modulus), elements as coefficient vectors of length d.
class ExtField {
 public:
  using value_type = std::vector<u32>;

  // modulus: monic polynomial coefficients, low to high, length d + 1.
  ExtField(i64 ell, std::vector<u32> modulus) : ell_(static_cast<u32>(ell)) {
    if (ell < 2 || ell >= (i64{1} << 31) || !is_prime(ell)) throw DomainError("ExtField: characteristic must be prime");
    if (modulus.size() < 2) throw DomainError("ExtField: modulus must have degree >= 1");
    for (auto& c : modulus) c %= ell_;
    if (modulus.back() != 1) throw DomainError("ExtField: modulus must be monic");
    if (!detail::poly_is_irreducible(modulus, ell_)) throw DomainError("ExtField: modulus is reducible mod " + std::to_string(ell));
    mod_ = std::make_shared<const std::vector<u32>>(std::move(modulus));
  }

  u32 characteristic() const { return ell_; }
  int degree() const { return static_cast<int>(mod_->size()) - 1; }
  const std::vector<u32>& modulus() const { return *mod_; }
  u64 order() const {
    u64 q = 1;
    for (int i = 0; i < degree(); ++i) q *= ell_;
    return q;
  }

  value_type zero() const { return value_type(degree(), 0); }
  value_type one() const {
    value_type v(degree(), 0);
    v[0] = 1 % ell_;
    return v;
  }
  value_type gen() const {
    value_type v(degree(), 0);
    if (degree() > 1) {
      v[1] = 1;
    } else {
      v[0] = (ell_ - (*mod_)[0]) % ell_;
    }
    return v;
  }
  value_type from_int(i64 v) const {
    value_type r(degree(), 0);
    r[0] = static_cast<u32>(pos_mod(v, ell_));
    return r;
  }
  value_type from_mpz(const mpz_class& v) const {
    value_type r(degree(), 0);
    r[0] = mpz_mod_u32(v, ell_);
    return r;
  }
  value_type from_coeffs(std::vector<i64> c) const {
    if (static_cast<int>(c.size()) != degree()) throw DomainError("ExtField: expected " + std::to_string(degree()) + " coefficients");
    value_type r(degree());
    for (int i = 0; i < degree(); ++i) r[i] = static_cast<u32>(pos_mod(c[i], ell_));
    return r;
  }
  value_type add(const value_type& a, const value_type& b) const {
    value_type r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<u32>((u64{a[i]} + b[i]) % ell_);
    return r;
  }
  value_type sub(const value_type& a, const value_type& b) const {
    value_type r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + ell_ - b[i];
    return r;
  }
  value_type neg(const value_type& a) const { return sub(zero(), a); }
  value_type mul(const value_type& a, const value_type& b) const {
    return pad(detail::poly_rem(detail::poly_mul(trimmed(a), trimmed(b), ell_), *mod_, ell_));
  }
  void addmul(value_type& acc, const value_type& a, const value_type& b) const { acc = add(acc, mul(a, b)); }
  bool is_zero(const value_type& a) const {
    for (u32 c : a) {
      if (c) return false;
    }
    return true;
  }
  bool is_unit(const value_type& a) const { return !is_zero(a); }
  value_type pow(value_type a, u64 e) const {
    value_type r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  value_type inv(const value_type& a) const {
    if (is_zero(a)) throw NonUnitError("ExtField: zero is not a unit");
    return pow(a, order() - 2);
  }
  value_type frobenius(const value_type& a) const { return pow(a, ell_); }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool operator==(const ExtField& o) const { return ell_ == o.ell_ && *mod_ == *o.mod_; }
  std::string name() const {
    return "GF(" + std::to_string(ell_) + "^" + std::to_string(degree()) + ")";
  }
  std::string format(const value_type& a) const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < a.size(); ++i) os << (i ? " " : "") << a[i];
    os << "]";
    return os.str();
  }

 private:
  static detail::Poly trimmed(const value_type& a) {
    detail::Poly p(a.begin(), a.end());
    detail::poly_trim(p);
    return p;
  }
  value_type pad(detail::Poly p) const {
    p.resize(degree(), 0);
    return p;
  }

  u32 ell_;
  std::shared_ptr<const std::vector<u32>> mod_;
};

// A field element bundled with its field; used by the Galois-image arithmetic.
class FFElement {
 public:
  FFElement(ExtField field, ExtField::value_type c) : field_(std::move(field)), c_(std::move(c)) {
    if (static_cast<int>(c_.size()) != field_.degree()) throw DomainError("FFElement: wrong coefficient count");
  }
  static FFElement from_int(const ExtField& f, i64 v) { return FFElement(f, f.from_int(v)); }
  static FFElement generator_power(const ExtField& f, u64 e) { return FFElement(f, f.pow(f.gen(), e)); }

  const ExtField& field() const { return field_; }
  const ExtField::value_type& coeffs() const { return c_; }
  bool is_zero() const { return field_.is_zero(c_); }

  FFElement operator+(const FFElement& o) const { return FFElement(field_, field_.add(c_, check(o).c_)); }
  FFElement operator-(const FFElement& o) const { return FFElement(field_, field_.sub(c_, check(o).c_)); }
  FFElement operator-() const { return FFElement(field_, field_.neg(c_)); }
  FFElement operator*(const FFElement& o) const { return FFElement(field_, field_.mul(c_, check(o).c_)); }
  FFElement operator/(const FFElement& o) const { return FFElement(field_, field_.mul(c_, field_.inv(check(o).c_))); }
  FFElement pow(u64 e) const { return FFElement(field_, field_.pow(c_, e)); }
  FFElement inv() const { return FFElement(field_, field_.inv(c_)); }
  FFElement frobenius() const { return FFElement(field_, field_.frobenius(c_)); }
  bool operator==(const FFElement& o) const { return field_ == o.field_ && c_ == o.c_; }
  bool operator!=(const FFElement& o) const { return !(*this == o); }

  // Multiplicative order (the element must be nonzero).
  u64 multiplicative_order() const {
    if (is_zero()) throw NonUnitError("FFElement: zero has no multiplicative order");
    u64 n = field_.order() - 1;
    u64 ord = n;
    for (auto [p, e] : factorize(static_cast<i64>(n))) {
      for (int i = 0; i < e; ++i) {
        if (pow(ord / static_cast<u64>(p)) == from_int(field_, 1)) {
          ord /= static_cast<u64>(p);
        } else {
          break;
        }
      }
    }
    return ord;
  }

  // Discrete log with respect to the class generator x; brute force, fields are tiny.
  std::optional<u64> log_gen() const;

  // Value as an element of the prime field when it lies there.
  std::optional<u32> as_prime_field() const {
    for (size_t i = 1; i < c_.size(); ++i) {
      if (c_[i]) return std::nullopt;
    }
    return c_[0];
  }

  std::string to_string() const { return field_.degree() == 1 ? std::to_string(c_[0]) : field_.format(c_); }

 private:
  const FFElement& check(const FFElement& o) const {
    if (!(field_ == o.field_)) throw RingMismatch("FFElement: operands in different fields");
    return o;
  }
  ExtField field_;
  ExtField::value_type c_;
};

inline std::optional<u64> FFElement::log_gen() const {
  if (is_zero()) return std::nullopt;
  auto g = field_.gen();
  auto cur = field_.one();
  u64 n = field_.order() - 1;
  for (u64 e = 0; e < n; ++e) {
    if (cur == c_) return e;
    cur = field_.mul(cur, g);
  }
  return std::nullopt;
}

}  // namespace frobcong
