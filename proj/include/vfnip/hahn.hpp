#pragma once

#include <map>
#include <optional>
#include <vector>

#include "finite_field.hpp"
#include "oag.hpp"

namespace vfnip {

// Exact series arithmetic with finite support and exponents in a fixed
// ordered group. Ring and inversion operations are parametrized by a
// coefficient ring; supported rings are the rationals and FqCtx.

struct RatRing {
  using Elem = Rat;
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(const Elem& a) const { return a == 0; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const {
    if (a == 0) throw input_error("division by zero in the coefficient field");
    return 1 / a;
  }
  Elem from_int(long n) const { return n; }
};

struct FqRing {
  const FqCtx* ctx = nullptr;
  using Elem = FqCtx::Elem;
  Elem zero() const { return ctx->zero(); }
  Elem one() const { return ctx->one(); }
  bool is_zero(Elem a) const { return ctx->is_zero(a); }
  Elem add(Elem a, Elem b) const { return ctx->add(a, b); }
  Elem neg(Elem a) const { return ctx->neg(a); }
  Elem sub(Elem a, Elem b) const { return ctx->sub(a, b); }
  Elem mul(Elem a, Elem b) const { return ctx->mul(a, b); }
  Elem inv(Elem a) const { return ctx->inv(a); }
  Elem from_int(long n) const { return ctx->from_int(n); }
};

struct ExpLess {
  bool operator()(const GroupElement& a, const GroupElement& b) const {
    return less(a, b);
  }
};

template <class Ring>
struct Series {
  std::map<GroupElement, typename Ring::Elem, ExpLess> c;

  bool is_zero() const { return c.empty(); }
  friend bool operator==(const Series& a, const Series& b) { return a.c == b.c; }
};

template <class Ring>
Series<Ring> series_term(const Ring& R, const GroupElement& e,
                         typename Ring::Elem a) {
  Series<Ring> s;
  if (!R.is_zero(a)) s.c.emplace(e, std::move(a));
  return s;
}

template <class Ring>
Series<Ring> series_const(const Ring& R, const OAGDesc& g,
                          typename Ring::Elem a) {
  return series_term(R, zero_element(g), std::move(a));
}

template <class Ring>
std::optional<GroupElement> series_val(const Series<Ring>& s) {
  if (s.c.empty()) return std::nullopt;
  return s.c.begin()->first;
}

template <class Ring>
typename Ring::Elem leading_coeff(const Ring& R, const Series<Ring>& s) {
  if (s.c.empty()) return R.zero();
  return s.c.begin()->second;
}

// coefficient at exponent 0 when the valuation is nonnegative, else 0
template <class Ring>
typename Ring::Elem series_residue(const Ring& R, const OAGDesc& g,
                                   const Series<Ring>& s) {
  auto v = series_val(s);
  if (v && less(*v, zero_element(g))) return R.zero();
  auto it = s.c.find(zero_element(g));
  return it == s.c.end() ? R.zero() : it->second;
}

template <class Ring>
Series<Ring> series_add(const Ring& R, const Series<Ring>& a,
                        const Series<Ring>& b) {
  Series<Ring> out = a;
  for (const auto& [e, x] : b.c) {
    auto it = out.c.find(e);
    if (it == out.c.end()) {
      out.c.emplace(e, x);
    } else {
      it->second = R.add(it->second, x);
      if (R.is_zero(it->second)) out.c.erase(it);
    }
  }
  return out;
}

template <class Ring>
Series<Ring> series_neg(const Ring& R, const Series<Ring>& a) {
  Series<Ring> out = a;
  for (auto& [e, x] : out.c) x = R.neg(x);
  return out;
}

template <class Ring>
Series<Ring> series_sub(const Ring& R, const Series<Ring>& a,
                        const Series<Ring>& b) {
  return series_add(R, a, series_neg(R, b));
}

template <class Ring>
Series<Ring> series_mul(const Ring& R, const Series<Ring>& a,
                        const Series<Ring>& b) {
  Series<Ring> out;
  for (const auto& [ea, xa] : a.c)
    for (const auto& [eb, xb] : b.c) {
      auto e = add(ea, eb);
      auto prod = R.mul(xa, xb);
      auto it = out.c.find(e);
      if (it == out.c.end()) {
        if (!R.is_zero(prod)) out.c.emplace(std::move(e), std::move(prod));
      } else {
        it->second = R.add(it->second, prod);
        if (R.is_zero(it->second)) out.c.erase(it);
      }
    }
  return out;
}

template <class Ring>
Series<Ring> series_scale(const Ring& R, typename Ring::Elem a,
                          const Series<Ring>& s) {
  Series<Ring> out;
  if (R.is_zero(a)) return out;
  for (const auto& [e, x] : s.c) {
    auto prod = R.mul(a, x);
    if (!R.is_zero(prod)) out.c.emplace(e, std::move(prod));
  }
  return out;
}

// keep exponents <= bound
template <class Ring>
Series<Ring> series_truncate(const Series<Ring>& s, const GroupElement& bound) {
  Series<Ring> out;
  for (const auto& [e, x] : s.c) {
    if (less(bound, e)) break;
    out.c.emplace(e, x);
  }
  return out;
}

namespace detail {

// the constant 1 carrying the exponent rank of x
template <class Ring>
Series<Ring> one_like(const Ring& R, const Series<Ring>& x) {
  Series<Ring> s;
  GroupElement e;
  if (!x.c.empty()) e.coords.assign(x.c.begin()->first.coords.size(), Rat(0));
  s.c.emplace(std::move(e), R.one());
  return s;
}

}  // namespace detail

// Multiplicative inverse of x, correct on all exponents <= bound. Newton
// iteration doubles the valuation of 1 - x*y each round; it converges only
// when the support of x is commensurable with the gap to the bound, so the
// round count is capped.
template <class Ring>
Series<Ring> series_invert(const Ring& R, const Series<Ring>& x,
                           const GroupElement& bound) {
  auto v = series_val(x);
  if (!v) throw input_error("cannot invert the zero series");
  // window for the error term 1 - x*y: the inverse carries exponents down to
  // -val(x), so the product is exact on exponents <= bound + val(x)
  GroupElement window = add(bound, *v);
  auto one = detail::one_like(R, x);
  Series<Ring> y = series_term(R, neg(*v), R.inv(leading_coeff(R, x)));
  for (int round = 0; round < 64; ++round) {
    auto err =
        series_truncate(series_sub(R, one, series_mul(R, x, y)), window);
    if (err.is_zero()) return series_truncate(y, bound);
    if (y.c.size() > 4096 || err.c.size() > 4096)
      throw input_error("inversion did not stabilize at this precision");
    y = series_truncate(series_add(R, y, series_mul(R, y, err)), bound);
  }
  throw input_error("inversion did not stabilize at this precision");
}

// ---------------------------------------------------------------------------
// Simple-root lifting. F is a polynomial in one variable with series
// coefficients, ascending powers. All coefficients must be free of negative
// exponents; a0 must be a root of the reduction with invertible derivative.
// Each Newton round at least doubles the valuation of F(y).

template <class Ring>
Series<Ring> poly_eval(const Ring& R, const std::vector<Series<Ring>>& F,
                       const Series<Ring>& y, const GroupElement& bound) {
  Series<Ring> acc;
  for (size_t i = F.size(); i-- > 0;) {
    acc = series_truncate(series_add(R, series_mul(R, acc, y), F[i]), bound);
  }
  return acc;
}

template <class Ring>
std::vector<Series<Ring>> poly_derivative(const Ring& R,
                                          const std::vector<Series<Ring>>& F) {
  std::vector<Series<Ring>> out;
  for (size_t i = 1; i < F.size(); ++i)
    out.push_back(series_scale(R, R.from_int(static_cast<long>(i)), F[i]));
  return out;
}

template <class Ring>
Series<Ring> hensel_lift(const Ring& R, const std::vector<Series<Ring>>& F,
                         typename Ring::Elem a0, const OAGDesc& g,
                         const GroupElement& bound) {
  for (const auto& s : F) {
    auto v = series_val(s);
    if (v && less(*v, zero_element(g)))
      throw input_error("lifting needs coefficients without negative exponents");
  }
  auto Fd = poly_derivative(R, F);
  Series<Ring> y = series_const(R, g, a0);

  auto err = poly_eval(R, F, y, bound);
  auto v = series_val(err);
  if (v && !is_positive(*v))
    throw input_error("not a root of the reduction");
  auto d0 = poly_eval(R, Fd, y, bound);
  auto dv = series_val(d0);
  if (!dv || is_positive(*dv))
    throw input_error("not a simple root: the derivative vanishes");

  for (int round = 0; round < 64; ++round) {
    if (err.is_zero()) return y;
    auto step =
        series_truncate(series_mul(R, err, series_invert(R, d0, bound)), bound);
    y = series_sub(R, y, step);
    auto next = poly_eval(R, F, y, bound);
    auto nv = series_val(next);
    if (nv && less(*nv, scale(Rat(2), *v)))
      throw internal_error("lift lost quadratic convergence");
    err = std::move(next);
    v = nv;
    d0 = poly_eval(R, Fd, y, bound);
  }
  throw input_error("lifting did not stabilize at this precision");
}

}  // namespace vfnip
