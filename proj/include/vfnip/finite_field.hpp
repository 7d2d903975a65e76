#pragma once

#include <numeric>
#include <vector>

#include "rational.hpp"

namespace vfnip {

// Arithmetic context for F_q, q = p^d <= 2^16. Elements are longs in [0, q)
// encoding polynomials over the prime field in base p, least significant
// coefficient first. Multiplication runs through discrete log tables over a
// fixed generator, addition through base-p digits.
class FqCtx {
 public:
  using Elem = long;

  FqCtx(long p, long d) : p_(p), d_(d) {
    if (!is_prime(p_)) throw input_error("field characteristic must be prime");
    if (d_ < 1) throw input_error("field degree must be positive");
    q_ = 1;
    for (long i = 0; i < d_; ++i) {
      q_ *= p_;
      if (q_ > (1L << 16)) throw input_error("field size capped at 2^16");
    }
    if (d_ > 1) modulus_ = find_irreducible();
    build_tables();
  }

  long p() const { return p_; }
  long d() const { return d_; }
  long q() const { return q_; }
  const std::vector<long>& modulus() const { return modulus_; }
  Elem generator() const { return gen_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }

  Elem from_int(long n) const {
    n %= p_;
    if (n < 0) n += p_;
    return n;
  }

  Elem add(Elem a, Elem b) const {
    Elem out = 0, mul = 1;
    for (long i = 0; i < d_; ++i) {
      long s = (a % p_ + b % p_) % p_;
      out += s * mul;
      mul *= p_;
      a /= p_;
      b /= p_;
    }
    return out;
  }

  Elem neg(Elem a) const {
    Elem out = 0, mul = 1;
    for (long i = 0; i < d_; ++i) {
      long s = (p_ - a % p_) % p_;
      out += s * mul;
      mul *= p_;
      a /= p_;
    }
    return out;
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
  }

  Elem inv(Elem a) const {
    if (a == 0) throw input_error("division by zero in the coefficient field");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }

  Elem pow(Elem a, long e) const {
    if (a == 0) {
      if (e <= 0) throw input_error("zero to a nonpositive power");
      return 0;
    }
    long le = (log_[a] * (e % (q_ - 1))) % (q_ - 1);
    if (le < 0) le += q_ - 1;
    return exp_[le];
  }

  Elem frobenius(Elem a) const { return pow(a, p_); }

 private:
  // polynomials over F_p, ascending, no trailing zeros
  using Poly = std::vector<long>;

  static void strip(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
  }

  Poly pmul(const Poly& a, const Poly& b) const {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j)
        out[i + j] = (out[i + j] + a[i] * b[j]) % p_;
    strip(out);
    return out;
  }

  Poly pmod(Poly a, const Poly& m) const {
    long lead_inv = mod_inv(m.back());
    while (a.size() >= m.size()) {
      long c = a.back() * lead_inv % p_;
      size_t shift = a.size() - m.size();
      for (size_t i = 0; i < m.size(); ++i)
        a[shift + i] = ((a[shift + i] - c * m[i]) % p_ + p_) % p_;
      strip(a);
    }
    return a;
  }

  Poly pgcd(Poly a, Poly b) const {
    while (!b.empty()) {
      Poly r = pmod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  long mod_inv(long a) const {
    long r = 1;
    for (long e = p_ - 2; e > 0; e >>= 1) {
      if (e & 1) r = r * a % p_;
      a = a * a % p_;
    }
    return r;
  }

  // x^(p^k) mod m by repeated Frobenius
  Poly xq_power(long k, const Poly& m) const {
    Poly x = {0, 1};
    Poly acc = pmod(x, m);
    for (long i = 0; i < k; ++i) {
      Poly r = {1};
      Poly base = acc;
      for (long e = p_; e > 0; e >>= 1) {
        if (e & 1) r = pmod(pmul(r, base), m);
        base = pmod(pmul(base, base), m);
      }
      acc = std::move(r);
    }
    return acc;
  }

  bool irreducible(const Poly& m) const {
    Poly x = {0, 1};
    // x^(p^d) = x mod m
    Poly t = xq_power(d_, m);
    Poly diff = psub(t, x);
    if (!pmod(diff, m).empty()) return false;
    for (long r : prime_factors(Int(d_))) {
      Poly u = psub(xq_power(d_ / r, m), x);
      Poly g = pgcd(m, pmod(u, m));
      if (g.size() != 1) return false;
    }
    return true;
  }

  Poly psub(Poly a, const Poly& b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p_ + p_) % p_;
    strip(a);
    return a;
  }

  Poly find_irreducible() const {
    // monic degree d; scan constant-first encodings
    long span = 1;
    for (long i = 0; i < d_; ++i) span *= p_;
    for (long code = 1; code < span; ++code) {
      Poly m(d_ + 1, 0);
      long c = code;
      for (long i = 0; i < d_; ++i) {
        m[i] = c % p_;
        c /= p_;
      }
      m[d_] = 1;
      if (irreducible(m)) return m;
    }
    throw internal_error("no irreducible polynomial found");
  }

  Elem raw_mul(Elem a, Elem b) const {
    if (d_ == 1) return a * b % p_;
    Poly pa, pb;
    for (long i = 0, x = a; i < d_; ++i, x /= p_) pa.push_back(x % p_);
    for (long i = 0, x = b; i < d_; ++i, x /= p_) pb.push_back(x % p_);
    strip(pa);
    strip(pb);
    Poly r = pmod(pmul(pa, pb), modulus_);
    Elem out = 0, mul = 1;
    for (size_t i = 0; i < r.size(); ++i) {
      out += r[i] * mul;
      mul *= p_;
    }
    return out;
  }

  void build_tables() {
    // find a multiplicative generator, then fill exp/log
    std::vector<long> ord_factors = prime_factors(Int(q_ - 1));
    for (Elem g = 1; g < q_; ++g) {
      bool ok = true;
      for (long r : ord_factors) {
        if (raw_pow(g, (q_ - 1) / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        gen_ = g;
        break;
      }
    }
    if (gen_ == 0) throw internal_error("no generator found");
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    Elem cur = 1;
    for (long i = 0; i < q_ - 1; ++i) {
      exp_[i] = cur;
      log_[cur] = i;
      cur = raw_mul(cur, gen_);
    }
    if (cur != 1) throw internal_error("generator order mismatch");
  }

  Elem raw_pow(Elem a, long e) const {
    Elem r = 1;
    while (e > 0) {
      if (e & 1) r = raw_mul(r, a);
      a = raw_mul(a, a);
      e >>= 1;
    }
    return r;
  }

  long p_, d_, q_ = 0;
  Poly modulus_;  // empty when d = 1
  Elem gen_ = 0;
  std::vector<Elem> exp_, log_;
};

}  // namespace vfnip
