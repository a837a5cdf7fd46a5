#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "frobcong/arith.hpp"

namespace frobcong::ntt {

// Montgomery arithmetic for an odd modulus below 2^31.
struct Montgomery {
  u32 mod;
  u32 neg_inv;  // -mod^{-1} mod 2^32
  u32 r2;       // 2^64 mod mod

  explicit Montgomery(u32 m) : mod(m) {
    u32 inv = m;
    for (int i = 0; i < 5; ++i) inv *= 2 - m * inv;
    neg_inv = ~inv + 1;
    r2 = static_cast<u32>((static_cast<unsigned __int128>(1) << 64) % m);
  }
  u32 reduce(u64 x) const {
    u32 q = static_cast<u32>(x) * neg_inv;
    u64 t = (x + u64{q} * mod) >> 32;
    return t >= mod ? static_cast<u32>(t - mod) : static_cast<u32>(t);
  }
  u32 mul(u32 a, u32 b) const { return reduce(u64{a} * b); }
  u32 to(u32 a) const { return reduce(u64{a} * r2); }
  u32 from(u32 a) const { return reduce(a); }
  u32 add(u32 a, u32 b) const {
    u32 s = a + b;
    return s >= mod ? s - mod : s;
  }
  u32 sub(u32 a, u32 b) const { return a >= b ? a - b : a + mod - b; }
};

inline u32 primitive_root(u32 p) {
  auto fac = factorize(p - 1);
  for (u32 g = 2;; ++g) {
    bool ok = true;
    for (auto [q, e] : fac) {
      if (pow_mod(g, (p - 1) / static_cast<u64>(q), p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

// One NTT-friendly prime. Twiddles are generated per butterfly level into a contiguous buffer.
class Transform {
 public:
  explicit Transform(u32 p) : m_(p), root_(primitive_root(p)) {
    u32 t = p - 1;
    while ((t & 1) == 0) {
      t >>= 1;
      ++max_log_;
    }
  }

  u32 modulus() const { return m_.mod; }
  int max_log() const { return max_log_; }

  // Linear convolution of a and b, whose entries are given as residues mod this prime.
  std::vector<u32> convolve(const std::vector<u32>& a, const std::vector<u32>& b, size_t out_len) {
    size_t need = a.size() + b.size() - 1;
    size_t n = 1;
    int lg = 0;
    while (n < need) {
      n <<= 1;
      ++lg;
    }
    if (lg > max_log_) throw DomainError("ntt: transform length exceeds prime's 2-adic capacity");
    std::vector<u32> fa(n, 0);
    for (size_t i = 0; i < a.size(); ++i) fa[i] = m_.to(a[i] % m_.mod);
    forward(fa);
    if (&a == &b) {
      for (size_t i = 0; i < n; ++i) fa[i] = m_.mul(fa[i], fa[i]);
    } else {
      std::vector<u32> fb(n, 0);
      for (size_t i = 0; i < b.size(); ++i) fb[i] = m_.to(b[i] % m_.mod);
      forward(fb);
      for (size_t i = 0; i < n; ++i) fa[i] = m_.mul(fa[i], fb[i]);
    }
    inverse(fa);
    u32 ninv = m_.to(static_cast<u32>(pow_mod(n % m_.mod, m_.mod - 2, m_.mod)));
    size_t len = std::min(out_len, need);
    fa.resize(len);
    for (size_t i = 0; i < len; ++i) fa[i] = m_.from(m_.mul(fa[i], ninv));
    fa.shrink_to_fit();
    return fa;
  }

 private:
  // w[j] = (primitive 2len-th root)^j, or its inverse, in Montgomery form, written at out[0..len).
  void level_twiddles(size_t len, bool inv, u32* out) const {
    u32 w = static_cast<u32>(pow_mod(root_, (m_.mod - 1) / (2 * len), m_.mod));
    if (inv) w = static_cast<u32>(pow_mod(w, m_.mod - 2, m_.mod));
    u32 cur = m_.to(1), wm = m_.to(w);
    for (size_t j = 0; j < len; ++j) {
      out[j] = cur;
      cur = m_.mul(cur, wm);
    }
  }

  // Twiddles of every level below kBlock, level len stored at [len, 2 len).
  void small_tables() {
    if (!small_fw_.empty()) return;
    small_fw_.assign(kBlock, 0);
    small_inv_.assign(kBlock, 0);
    for (size_t len = 1; len < kBlock; len <<= 1) {
      level_twiddles(len, false, small_fw_.data() + len);
      level_twiddles(len, true, small_inv_.data() + len);
    }
  }

  void dif_level(u32* a, size_t n, size_t len, const u32* w) const {
    const Montgomery m = m_;  // local copy: stores through a could otherwise alias the modulus
    for (size_t i = 0; i < n; i += 2 * len) {
      u32* x = a + i;
      u32* y = x + len;
      for (size_t j = 0; j < len; ++j) {
        u32 u = x[j], v = y[j];
        x[j] = m.add(u, v);
        y[j] = m.mul(m.sub(u, v), w[j]);
      }
    }
  }

  void dit_level(u32* a, size_t n, size_t len, const u32* w) const {
    const Montgomery m = m_;
    for (size_t i = 0; i < n; i += 2 * len) {
      u32* x = a + i;
      u32* y = x + len;
      for (size_t j = 0; j < len; ++j) {
        u32 u = x[j], v = m.mul(y[j], w[j]);
        x[j] = m.add(u, v);
        y[j] = m.sub(u, v);
      }
    }
  }

  // Decimation in frequency; output in bit-reversed order. Levels shorter than kBlock run block by block.
  void forward(std::vector<u32>& a) {
    small_tables();
    size_t n = a.size();
    size_t len = n / 2;
    for (; len >= kBlock; len >>= 1) {
      if (tw_.size() < len) tw_.resize(len);
      level_twiddles(len, false, tw_.data());
      dif_level(a.data(), n, len, tw_.data());
    }
    size_t blk = std::min(n, kBlock);
    for (size_t b = 0; b < n; b += blk) {
      for (size_t l = len; l >= 1; l >>= 1) dif_level(a.data() + b, blk, l, small_fw_.data() + l);
    }
  }

  // Decimation in time; input in bit-reversed order, output natural (unscaled).
  void inverse(std::vector<u32>& a) {
    small_tables();
    size_t n = a.size();
    size_t blk = std::min(n, kBlock);
    for (size_t b = 0; b < n; b += blk) {
      for (size_t l = 1; l < blk; l <<= 1) dit_level(a.data() + b, blk, l, small_inv_.data() + l);
    }
    for (size_t len = blk; len < n; len <<= 1) {
      if (tw_.size() < len) tw_.resize(len);
      level_twiddles(len, true, tw_.data());
      dit_level(a.data(), n, len, tw_.data());
    }
  }

  static constexpr size_t kBlock = size_t{1} << 12;
  Montgomery m_;
  u32 root_;
  int max_log_ = 0;
  std::vector<u32> tw_, small_fw_, small_inv_;
};

inline Transform& transform_for(int idx) {
  // Each thread keeps its own twiddle caches, so concurrent calls never share mutable state.
  thread_local Transform t0(2013265921u), t1(1811939329u), t2(469762049u);
  return idx == 0 ? t0 : (idx == 1 ? t1 : t2);
}

// Schoolbook product mod p, truncated to out_len terms.
inline std::vector<u32> naive_mul_mod(const std::vector<u32>& a, const std::vector<u32>& b, u32 p, size_t out_len) {
  if (a.empty() || b.empty()) return {};
  size_t len = std::min(out_len, a.size() + b.size() - 1);
  std::vector<u32> out(len, 0);
  // Accumulate in 64 bits; flush before overflow.
  const u64 limit = ~u64{0} - u64{p - 1} * (p - 1);
  for (size_t k = 0; k < len; ++k) {
    size_t lo = k >= b.size() ? k - b.size() + 1 : 0;
    size_t hi = std::min(k, a.size() - 1);
    u64 acc = 0;
    for (size_t i = lo; i <= hi; ++i) {
      acc += u64{a[i]} * b[k - i];
      if (acc >= limit) acc %= p;
    }
    out[k] = static_cast<u32>(acc % p);
  }
  return out;
}

// Product mod p of two residue vectors, truncated to out_len terms. Uses three-prime NTT with CRT when large.
inline std::vector<u32> mul_mod(const std::vector<u32>& a, const std::vector<u32>& b, u32 p, size_t out_len) {
  if (a.empty() || b.empty() || out_len == 0) return {};
  std::vector<u32> ta(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(std::min(a.size(), out_len)));
  const bool same = (&a == &b);
  std::vector<u32> tb;
  if (!same) tb.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(std::min(b.size(), out_len)));
  const std::vector<u32>& B = same ? ta : tb;
  if (std::min(ta.size(), B.size()) < 48) return naive_mul_mod(ta, B, p, out_len);

  // With residues centered in (-p/2, p/2], one prime suffices when every exact entry stays below half of it.
  const u32 P0 = transform_for(0).modulus();
  long double half = (p - 1) / 2 + 1;
  if (static_cast<long double>(std::min(ta.size(), B.size())) * half * half < P0 / 2) {
    auto center = [&](std::vector<u32>& v) {
      for (auto& x : v) x = x > p / 2 ? P0 - (p - x) : x;
    };
    center(ta);
    if (!same) center(tb);
    auto r = transform_for(0).convolve(ta, B, out_len);
    const u32 pm = P0 % p;
    for (auto& x : r) x = x > P0 / 2 ? static_cast<u32>((x % p + p - pm) % p) : x % p;
    return r;
  }

  // Bound on any convolution entry before reduction.
  long double bound = static_cast<long double>(std::min(ta.size(), B.size())) * (p - 1) * static_cast<long double>(p - 1);
  long double two_primes = 2013265921.0L * 1811939329.0L;
  int k = bound < two_primes ? 2 : 3;

  std::vector<std::vector<u32>> res(k);
  for (int i = 0; i < k; ++i) res[i] = transform_for(i).convolve(ta, B, out_len);
  size_t len = res[0].size();
  std::vector<u32> out(len);
  const u64 p0 = transform_for(0).modulus(), p1 = transform_for(1).modulus(), p2 = transform_for(2).modulus();
  const u64 inv01 = static_cast<u64>(inv_mod(static_cast<i64>(p0 % p1), static_cast<i64>(p1)));
  const u64 p01_mod2 = frobcong::mul_mod(p0, p1, p2);
  const u64 inv012 = k == 3 ? static_cast<u64>(inv_mod(static_cast<i64>(p01_mod2), static_cast<i64>(p2))) : 0;
  const u64 p0_mod_p = p0 % p, p01_mod_p = frobcong::mul_mod(p0, p1, p);
  for (size_t i = 0; i < len; ++i) {
    u64 r0 = res[0][i], r1 = res[1][i];
    u64 t1 = frobcong::mul_mod((r1 + p1 - r0 % p1) % p1, inv01, p1);  // x = r0 + p0*t1
    u64 v = (r0 % p + frobcong::mul_mod(p0_mod_p, t1 % p, p)) % p;
    if (k == 3) {
      u64 r2 = res[2][i];
      u64 x01_mod2 = (r0 % p2 + frobcong::mul_mod(p0 % p2, t1 % p2, p2)) % p2;
      u64 t2 = frobcong::mul_mod((r2 + p2 - x01_mod2) % p2, inv012, p2);
      v = (v + frobcong::mul_mod(p01_mod_p, t2 % p, p)) % p;
    }
    out[i] = static_cast<u32>(v);
  }
  return out;
}

}  // namespace frobcong::ntt
