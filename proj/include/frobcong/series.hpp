#pragma once

#include <compare>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "frobcong/arith.hpp"
#include "frobcong/ntt.hpp"
#include "frobcong/rings.hpp"

namespace frobcong {

// An exponent num/24 on the 1/24 grid.
struct Exponent24 {
  i64 num = 0;

  constexpr Exponent24() = default;
  constexpr explicit Exponent24(i64 n) : num(n) {}
  static constexpr Exponent24 integer(i64 n) { return Exponent24(24 * n); }

  constexpr bool is_integral() const { return num % 24 == 0; }
  constexpr auto operator<=>(const Exponent24&) const = default;
  constexpr Exponent24 operator+(Exponent24 o) const { return Exponent24(num + o.num); }
  constexpr Exponent24 operator-(Exponent24 o) const { return Exponent24(num - o.num); }
  constexpr Exponent24 operator-() const { return Exponent24(-num); }

  // Lowest-terms rendering, e.g. "35", "1/24", "-5/12".
  std::string str() const {
    i64 g = std::gcd(num < 0 ? -num : num, i64{24});
    if (num == 0) return "0";
    i64 n = num / g, d = 24 / g;
    return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d);
  }
  mpq_class as_rational() const {
    mpq_class r(to_mpz(num), 24);
    r.canonicalize();
    return r;
  }
};

template <class Ring>
class QExpansion;

namespace detail {

template <class Ring>
void require_same_ring(const Ring& a, const Ring& b) {
  if (!(a == b)) throw RingMismatch("series over " + a.name() + " and " + b.name());
}

// Truncated product of dense coefficient vectors.
template <class Ring>
std::vector<typename Ring::value_type> convolve(const Ring& R, const std::vector<typename Ring::value_type>& a,
                                                const std::vector<typename Ring::value_type>& b, size_t out_len) {
  using T = typename Ring::value_type;
  if (a.empty() || b.empty() || out_len == 0) return {};
  if constexpr (std::is_same_v<Ring, PrimeField>) {
    return ntt::mul_mod(a, b, R.characteristic(), out_len);
  } else {
    size_t len = std::min(out_len, a.size() + b.size() - 1);
    std::vector<T> out(len, R.zero());
    for (size_t i = 0; i < a.size() && i < len; ++i) {
      if (R.is_zero(a[i])) continue;
      size_t jmax = std::min(b.size(), len - i);
      for (size_t j = 0; j < jmax; ++j) {
        if (!R.is_zero(b[j])) R.addmul(out[i + j], a[i], b[j]);
      }
    }
    return out;
  }
}

// Power series inverse of a dense vector with unit constant term, to n terms.
template <class Ring>
std::vector<typename Ring::value_type> inverse_dense(const Ring& R, const std::vector<typename Ring::value_type>& a, size_t n) {
  using T = typename Ring::value_type;
  if (n == 0) return {};
  T c0inv = R.inv(a[0]);
  if constexpr (std::is_same_v<Ring, PrimeField>) {
    if (n > 512) {
      // Newton iteration g <- g (2 - a g).
      std::vector<T> g{c0inv};
      size_t cur = 1;
      while (cur < n) {
        size_t nxt = std::min(2 * cur, n);
        std::vector<T> head(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(std::min(a.size(), nxt)));
        std::vector<T> ag = ntt::mul_mod(head, g, R.characteristic(), nxt);
        ag.resize(nxt, 0);
        for (auto& v : ag) v = R.neg(v);
        ag[0] = R.add(ag[0], 2 % R.characteristic());
        g = ntt::mul_mod(g, ag, R.characteristic(), nxt);
        g.resize(nxt, 0);
        cur = nxt;
      }
      return g;
    }
  }
  std::vector<T> b(n, R.zero());
  b[0] = c0inv;
  std::vector<size_t> nz;
  for (size_t k = 1; k < a.size() && k < n; ++k) {
    if (!R.is_zero(a[k])) nz.push_back(k);
  }
  for (size_t i = 1; i < n; ++i) {
    T acc = R.zero();
    for (size_t k : nz) {
      if (k > i) break;
      R.addmul(acc, a[k], b[i - k]);
    }
    b[i] = R.neg(R.mul(acc, c0inv));
  }
  return b;
}

}  // namespace detail

// A truncated q-series on the 1/24 grid. Nonzero coefficients share one residue class of
// numerators mod 24 and are stored densely from the leading exponent up to the precision.
template <class Ring>
class QExpansion {
 public:
  using ring_type = Ring;
  using value_type = typename Ring::value_type;

  // The zero series known up to prec.
  QExpansion(Ring ring, Exponent24 prec) : ring_(std::move(ring)), start_(prec.num), prec_(prec.num) {}

  // Coefficient i of c sits at exponent (start_num + 24 i)/24; entries at or beyond prec are dropped.
  static QExpansion dense(Ring ring, i64 start_num, std::vector<value_type> c, Exponent24 prec) {
    QExpansion s(std::move(ring), prec);
    s.start_ = start_num;
    s.c_ = std::move(c);
    s.normalize();
    return s;
  }

  // Integer-exponent series sum c[n] q^n with precision c.size() unless given.
  static QExpansion from_coeffs(Ring ring, std::vector<value_type> c, std::optional<i64> prec_int = std::nullopt) {
    i64 p = prec_int ? *prec_int : static_cast<i64>(c.size());
    return dense(std::move(ring), 0, std::move(c), Exponent24::integer(p));
  }

  static QExpansion from_terms(Ring ring, const std::map<Exponent24, value_type>& terms, Exponent24 prec) {
    QExpansion s(ring, prec);
    std::optional<i64> cls;
    i64 lo = 0;
    for (const auto& [e, v] : terms) {
      if (ring.is_zero(v)) continue;
      if (e >= prec) throw PrecisionError("from_terms: exponent " + e.str() + " at or beyond precision " + prec.str());
      if (!cls) {
        cls = pos_mod(e.num, 24);
        lo = e.num;
      } else if (pos_mod(e.num, 24) != *cls) {
        throw DomainError("from_terms: exponents lie in different residue classes mod 1");
      }
    }
    if (!cls) return s;
    std::vector<value_type> c(static_cast<size_t>(ceil_div(prec.num - lo, 24)), ring.zero());
    for (const auto& [e, v] : terms) {
      if (!ring.is_zero(v)) c[static_cast<size_t>((e.num - lo) / 24)] = v;
    }
    return dense(std::move(ring), lo, std::move(c), prec);
  }

  static QExpansion monomial(Ring ring, Exponent24 e, value_type v, Exponent24 prec) {
    std::map<Exponent24, value_type> t;
    if (e < prec) t.emplace(e, std::move(v));
    return from_terms(std::move(ring), t, prec);
  }

  static QExpansion one(Ring ring, Exponent24 prec) {
    auto o = ring.one();
    return monomial(ring, Exponent24(0), o, prec);
  }

  const Ring& ring() const { return ring_; }
  Exponent24 prec() const { return Exponent24(prec_); }
  bool is_zero() const { return c_.empty(); }
  std::optional<Exponent24> leading_exponent() const {
    if (c_.empty()) return std::nullopt;
    return Exponent24(start_);
  }
  // Leading exponent, or the precision for a series with no known nonzero term.
  Exponent24 order_bound() const { return c_.empty() ? Exponent24(prec_) : Exponent24(start_); }
  value_type leading_coefficient() const {
    if (c_.empty()) throw PrecisionError("leading_coefficient: series is zero to its precision");
    return c_.front();
  }
  std::optional<i64> residue_class() const {
    if (c_.empty()) return std::nullopt;
    return pos_mod(start_, 24);
  }
  bool has_integral_exponents() const { return c_.empty() || pos_mod(start_, 24) == 0; }

  value_type coeff(Exponent24 e) const {
    if (e.num >= prec_) throw PrecisionError("coefficient at " + e.str() + " requested beyond precision " + prec().str());
    if (c_.empty() || e.num < start_ || pos_mod(e.num - start_, 24) != 0) return ring_.zero();
    size_t i = static_cast<size_t>((e.num - start_) / 24);
    return i < c_.size() ? c_[i] : ring_.zero();
  }
  value_type coeff_int(i64 n) const { return coeff(Exponent24::integer(n)); }

  std::map<Exponent24, value_type> terms() const {
    std::map<Exponent24, value_type> t;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (!ring_.is_zero(c_[i])) t.emplace(Exponent24(start_ + 24 * static_cast<i64>(i)), c_[i]);
    }
    return t;
  }

  i64 start_num() const { return start_; }
  const std::vector<value_type>& dense_coeffs() const { return c_; }

  // Coefficients of q^0 .. q^{n-1} of an integer-exponent series with nonnegative support.
  std::vector<value_type> integer_coeffs(i64 n) const {
    if (!has_integral_exponents()) throw DomainError("integer_coeffs: series has fractional exponents");
    if (24 * n > prec_) throw PrecisionError("integer_coeffs: " + std::to_string(n) + " terms requested, precision " + prec().str());
    std::vector<value_type> out(static_cast<size_t>(n), ring_.zero());
    for (i64 k = 0; k < n; ++k) out[static_cast<size_t>(k)] = coeff_int(k);
    return out;
  }

  QExpansion truncated(Exponent24 p) const {
    if (p.num >= prec_) return *this;
    QExpansion s = *this;
    s.prec_ = p.num;
    s.normalize();
    return s;
  }

  // Same ring, precision and nonzero terms.
  bool operator==(const QExpansion& o) const {
    if (!(ring_ == o.ring_) || prec_ != o.prec_ || c_.empty() != o.c_.empty()) return false;
    if (c_.empty()) return true;
    if (start_ != o.start_) return false;
    size_t n = significant_length(), m = o.significant_length();
    if (n != m) return false;
    for (size_t i = 0; i < n; ++i) {
      if (!ring_.equal(c_[i], o.c_[i])) return false;
    }
    return true;
  }

  std::string str(size_t max_terms = 12) const {
    std::ostringstream os;
    size_t shown = 0;
    for (size_t i = 0; i < c_.size() && shown < max_terms; ++i) {
      if (ring_.is_zero(c_[i])) continue;
      if (shown++) os << " + ";
      os << ring_.format(c_[i]) << "*q^(" << Exponent24(start_ + 24 * static_cast<i64>(i)).str() << ")";
    }
    if (shown == 0) os << "0";
    os << " + O(q^(" << prec().str() << "))";
    return os.str();
  }

 private:
  size_t significant_length() const {
    size_t n = c_.size();
    while (n > 0 && ring_.is_zero(c_[n - 1])) --n;
    return n;
  }

  void normalize() {
    size_t lead = 0;
    while (lead < c_.size() && ring_.is_zero(c_[lead])) ++lead;
    if (lead == c_.size()) {
      c_.clear();
      start_ = prec_;
      return;
    }
    start_ += 24 * static_cast<i64>(lead);
    if (start_ >= prec_) {
      c_.clear();
      start_ = prec_;
      return;
    }
    if (lead) c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
    size_t keep = static_cast<size_t>(ceil_div(prec_ - start_, 24));
    if (c_.size() > keep) c_.resize(keep);
  }

  Ring ring_;
  i64 start_;
  i64 prec_;
  std::vector<value_type> c_;
};

using ZSeries = QExpansion<IntegerRing>;
using QSeries = QExpansion<RationalRing>;
using FpSeries = QExpansion<PrimeField>;
using FqSeries = QExpansion<ExtField>;

namespace detail {

template <class Ring>
void require_same_class(const QExpansion<Ring>& a, const QExpansion<Ring>& b, const char* op) {
  if (!a.is_zero() && !b.is_zero() && pos_mod(a.start_num() - b.start_num(), 24) != 0) {
    throw DomainError(std::string(op) + ": series lie in different residue classes of exponents mod 1");
  }
}

}  // namespace detail

template <class Ring>
QExpansion<Ring> operator+(const QExpansion<Ring>& a, const QExpansion<Ring>& b) {
  detail::require_same_ring(a.ring(), b.ring());
  Exponent24 prec = std::min(a.prec(), b.prec());
  if (a.is_zero()) return b.truncated(prec);
  if (b.is_zero()) return a.truncated(prec);
  detail::require_same_class(a, b, "add");
  const Ring& R = a.ring();
  i64 start = std::min(a.start_num(), b.start_num());
  if (start >= prec.num) return QExpansion<Ring>(R, prec);
  size_t len = static_cast<size_t>(ceil_div(prec.num - start, 24));
  std::vector<typename Ring::value_type> c(len, R.zero());
  auto acc = [&](const QExpansion<Ring>& s) {
    size_t off = static_cast<size_t>((s.start_num() - start) / 24);
    const auto& d = s.dense_coeffs();
    for (size_t i = 0; i < d.size() && off + i < len; ++i) c[off + i] = R.add(c[off + i], d[i]);
  };
  acc(a);
  acc(b);
  return QExpansion<Ring>::dense(R, start, std::move(c), prec);
}

template <class Ring>
QExpansion<Ring> operator-(const QExpansion<Ring>& a) {
  std::vector<typename Ring::value_type> c = a.dense_coeffs();
  for (auto& v : c) v = a.ring().neg(v);
  return QExpansion<Ring>::dense(a.ring(), a.start_num(), std::move(c), a.prec());
}

template <class Ring>
QExpansion<Ring> operator-(const QExpansion<Ring>& a, const QExpansion<Ring>& b) {
  return a + (-b);
}

template <class Ring>
QExpansion<Ring> scale(const QExpansion<Ring>& a, const typename Ring::value_type& s) {
  std::vector<typename Ring::value_type> c = a.dense_coeffs();
  for (auto& v : c) v = a.ring().mul(v, s);
  return QExpansion<Ring>::dense(a.ring(), a.start_num(), std::move(c), a.prec());
}

// Multiply by q^e; precision shifts with it.
template <class Ring>
QExpansion<Ring> shift(const QExpansion<Ring>& a, Exponent24 e) {
  if (a.is_zero()) return QExpansion<Ring>(a.ring(), a.prec() + e);
  return QExpansion<Ring>::dense(a.ring(), a.start_num() + e.num, a.dense_coeffs(), a.prec() + e);
}

// Product with precision min(prec_a + lead_b, prec_b + lead_a).
template <class Ring>
QExpansion<Ring> operator*(const QExpansion<Ring>& a, const QExpansion<Ring>& b) {
  detail::require_same_ring(a.ring(), b.ring());
  Exponent24 prec = std::min(a.prec() + b.order_bound(), b.prec() + a.order_bound());
  if (a.is_zero() || b.is_zero()) return QExpansion<Ring>(a.ring(), prec);
  i64 start = a.start_num() + b.start_num();
  if (start >= prec.num) return QExpansion<Ring>(a.ring(), prec);
  size_t len = std::min(static_cast<size_t>(ceil_div(prec.num - start, 24)), a.dense_coeffs().size() + b.dense_coeffs().size() - 1);
  auto c = detail::convolve(a.ring(), a.dense_coeffs(), b.dense_coeffs(), len);
  return QExpansion<Ring>::dense(a.ring(), start, std::move(c), prec);
}

// Multiplicative inverse; the leading coefficient must be a unit.
template <class Ring>
QExpansion<Ring> invert(const QExpansion<Ring>& a) {
  if (a.is_zero()) throw NonUnitError("invert: series is zero to its precision " + a.prec().str());
  const Ring& R = a.ring();
  if (!R.is_unit(a.leading_coefficient())) {
    throw NonUnitError("invert: leading coefficient " + R.format(a.leading_coefficient()) + " is not a unit");
  }
  i64 e = a.start_num();
  Exponent24 prec(a.prec().num - 2 * e);
  size_t len = static_cast<size_t>(ceil_div(a.prec().num - e, 24));
  auto c = detail::inverse_dense(R, a.dense_coeffs(), len);
  return QExpansion<Ring>::dense(R, -e, std::move(c), prec);
}

template <class Ring>
QExpansion<Ring> pow(QExpansion<Ring> a, u64 n) {
  // a^0 = 1 is known to the relative precision of a.
  if (n == 0) return QExpansion<Ring>::one(a.ring(), a.prec() - a.order_bound());
  std::optional<QExpansion<Ring>> r;
  while (n) {
    if (n & 1) r = r ? *r * a : a;
    n >>= 1;
    if (n) a = a * a;
  }
  return *r;
}

// Coefficientwise image under a ring map.
template <class To, class From, class F>
QExpansion<To> map_coefficients(const QExpansion<From>& a, const To& target, F&& f) {
  std::vector<typename To::value_type> c;
  c.reserve(a.dense_coeffs().size());
  for (const auto& v : a.dense_coeffs()) c.push_back(f(v));
  return QExpansion<To>::dense(target, a.start_num(), std::move(c), a.prec());
}

// Coefficientwise reduction of an integer series into F_l.
inline FpSeries reduce_mod(const ZSeries& a, i64 ell) {
  PrimeField F(ell);
  return map_coefficients(a, F, [&](const mpz_class& v) { return F.from_mpz(v); });
}

// Reduction of an l-integral rational series into F_l.
inline FpSeries reduce_mod(const QSeries& a, i64 ell) {
  PrimeField F(ell);
  return map_coefficients(a, F, [&](const mpq_class& v) {
    u32 den = F.from_mpz(v.get_den());
    if (den == 0) throw NonUnitError("reduce_mod: coefficient " + v.get_str() + " is not " + std::to_string(ell) + "-integral");
    return F.mul(F.from_mpz(v.get_num()), F.inv(den));
  });
}

inline QSeries to_rational(const ZSeries& a) {
  RationalRing Q;
  return map_coefficients(a, Q, [](const mpz_class& v) { return mpq_class(v); });
}

inline FqSeries extend_scalars(const FpSeries& a, const ExtField& K) {
  if (a.ring().characteristic() != K.characteristic()) throw RingMismatch("extend_scalars: characteristic mismatch");
  return map_coefficients(a, K, [&](u32 v) { return K.from_int(v); });
}

// First exponent below the common precision where a and b differ, if any.
template <class Ring>
std::optional<Exponent24> first_difference(const QExpansion<Ring>& a, const QExpansion<Ring>& b) {
  detail::require_same_ring(a.ring(), b.ring());
  Exponent24 prec = std::min(a.prec(), b.prec());
  auto at = a.truncated(prec), bt = b.truncated(prec);
  if (!at.is_zero() && !bt.is_zero() && pos_mod(at.start_num() - bt.start_num(), 24) != 0) {
    return std::min(at.start_num(), bt.start_num()) == at.start_num() ? *at.leading_exponent() : *bt.leading_exponent();
  }
  auto d = at - bt;
  return d.leading_exponent();
}

}  // namespace frobcong
