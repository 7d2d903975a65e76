#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "finite_field.hpp"
#include "hahn.hpp"

namespace vfnip {

// Bases the extension oracle understands: a power-series field F_{p^d}((Z))
// with uniformizer t, and the p-adic integers carried modulo p^precision.
struct HahnBase {
  long p = 0;
  long d = 1;
};

struct PadicBase {
  long p = 0;
  long precision = 1;
};

// A tame extension of the base: an n-th root of the uniformizer, an
// unramified layer cut out by a monic residue polynomial, or both. The
// polynomial is given by ascending coefficient codes of the residue field;
// over a p-adic base the codes are integers and are reduced mod p.
struct ExtensionSpec {
  long radical = 1;
  std::vector<long> residue_poly;
};

// Both sides of the degree bookkeeping, computed from independent data: the
// left from certified minimal-polynomial degrees, the right from an explicit
// value-group index and an explicit residue root search.
struct FundEqReport {
  long lhs = 0;
  long rhs = 0;
  long ram_index = 1;
  long res_degree = 1;
  bool equal = false;
  bool conclusive = false;
  std::string detail;
};

namespace detail {

// index over Z of the subgroup of Q generated by Z and the given rationals
inline long index_over_Z(const std::vector<Rat>& gens) {
  Int L = 1;
  for (const auto& r : gens) L = L / gcd(L, den(r)) * den(r);
  Int g = L;
  for (const auto& r : gens) {
    Int n = num(r) * (L / den(r));
    if (n < 0) n = -n;
    g = gcd(g, n);
  }
  if (g == 0) g = L;
  return (L / g).convert_to<long>();
}

// remainder of a modulo a monic divisor, coefficients ascending
inline std::vector<long> poly_rem(const FqCtx& F, std::vector<long> a,
                                  const std::vector<long>& b) {
  while (a.size() >= b.size()) {
    long lead = a.back();
    if (lead != 0) {
      size_t off = a.size() - b.size();
      for (size_t i = 0; i + 1 < b.size(); ++i)
        a[off + i] = F.sub(a[off + i], F.mul(lead, b[i]));
    }
    a.pop_back();
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

// irreducibility by trial division against every monic divisor candidate of
// degree at most deg/2; independent of the table-construction internals
inline bool irreducible_trial(const FqCtx& F, const std::vector<long>& h) {
  long m = static_cast<long>(h.size()) - 1;
  for (long k = 1; k <= m / 2; ++k) {
    long count = 1;
    for (long i = 0; i < k; ++i) count *= F.q();
    for (long code = 0; code < count; ++code) {
      std::vector<long> cand;
      long c = code;
      for (long i = 0; i < k; ++i) {
        cand.push_back(c % F.q());
        c /= F.q();
      }
      cand.push_back(1);
      if (poly_rem(F, h, cand).empty()) return false;
    }
  }
  return true;
}

// degree over F_{p^d} of a root of h, found by enumerating the degree d*m
// extension; h must have prime-subfield coefficients
inline long root_degree(long p, long d, const std::vector<long>& h, long m) {
  FqCtx big(p, d * m);
  for (long a = 0; a < big.q(); ++a) {
    long acc = 0;
    for (size_t i = h.size(); i-- > 0;)
      acc = big.add(big.mul(acc, a), big.from_int(h[i]));
    if (acc != 0) continue;
    long q = 1;
    for (long i = 0; i < d; ++i) q *= p;
    long b = a;
    for (long k = 1; k <= m; ++k) {
      b = big.pow(b, q);
      if (b == a) return k;
    }
    throw internal_error("root degree exceeds the ambient field");
  }
  throw internal_error("no root found in the splitting field");
}

inline void validate_residue_poly(const std::vector<long>& h, long q,
                                  long subfield_bound) {
  if (h.size() < 2)
    throw input_error("unsupported extension kind: residue polynomial needs positive degree");
  if (h.back() != 1)
    throw input_error("unsupported extension kind: residue polynomial must be monic");
  for (long c : h)
    if (c < 0 || c >= q)
      throw input_error("residue polynomial coefficient out of range");
  if (subfield_bound > 0)
    for (long c : h)
      if (c >= subfield_bound)
        throw input_error(
            "unsupported extension kind: residue polynomial needs prime-subfield coefficients over a proper residue field");
}

}  // namespace detail

inline FundEqReport fundamental_equality_oracle(const HahnBase& base,
                                                const ExtensionSpec& ext) {
  if (!is_prime(base.p))
    throw input_error("base characteristic must be prime");
  if (base.d < 1) throw input_error("base residue degree must be positive");
  if (ext.radical < 1) throw input_error("radical index must be positive");
  if (ext.radical % base.p == 0)
    throw input_error("unsupported extension kind: wildly ramified radical");

  FqCtx F(base.p, base.d);
  long n = ext.radical;
  long m = 1;
  if (!ext.residue_poly.empty()) {
    detail::validate_residue_poly(ext.residue_poly, F.q(),
                                  base.d > 1 ? base.p : 0);
    if (!detail::irreducible_trial(F, ext.residue_poly))
      throw input_error("unsupported extension kind: reducible residue polynomial");
    m = static_cast<long>(ext.residue_poly.size()) - 1;
  }

  if (n > 1) {
    // the radical generator's minimal polynomial X^n - t is Eisenstein:
    // read its constant coefficient's valuation off the series engine
    FqRing R{&F};
    auto g = group_Q();
    auto a0 = series_neg(R, series_term(R, make_element(g, {Rat(1)}), F.one()));
    auto v0 = series_val(a0);
    if (!v0 || !(*v0 == make_element(g, {Rat(1)})))
      throw internal_error("radical minimal polynomial lost its shape");
  }

  // ramification index as an honest subgroup index over the base exponents
  long e = detail::index_over_Z({Rat(1, n)});

  // residue degree by explicit root search in the extended coefficient field,
  // cross-checked against the certified polynomial degree
  long f = 1;
  if (m > 1) {
    f = detail::root_degree(base.p, base.d, ext.residue_poly, m);
    if (f != m)
      throw internal_error("residue degree disagrees with the polynomial degree");
  }

  FundEqReport rep;
  rep.lhs = n * m;
  rep.ram_index = e;
  rep.res_degree = f;
  rep.rhs = e * f;
  rep.equal = rep.lhs == rep.rhs;
  rep.conclusive = true;
  rep.detail = "e=" + std::to_string(e) + ", f=" + std::to_string(f);
  return rep;
}

inline FundEqReport fundamental_equality_oracle(const PadicBase& base,
                                                const ExtensionSpec& ext) {
  if (!is_prime(base.p))
    throw input_error("base characteristic must be prime");
  if (base.precision < 1)
    throw input_error("base precision must be positive");
  if (ext.radical < 1) throw input_error("radical index must be positive");
  if (ext.radical % base.p == 0)
    throw input_error("unsupported extension kind: wildly ramified radical");

  FqCtx Fp(base.p, 1);
  long n = ext.radical;
  long m = 1;
  std::vector<long> reduced;
  if (!ext.residue_poly.empty()) {
    for (long c : ext.residue_poly) reduced.push_back(Fp.from_int(c));
    detail::validate_residue_poly(reduced, Fp.q(), 0);
    if (!detail::irreducible_trial(Fp, reduced))
      throw input_error("unsupported extension kind: reducible residue polynomial");
    m = static_cast<long>(reduced.size()) - 1;
  }

  FundEqReport rep;
  long e = 1;
  if (n > 1) {
    // the Newton slope of X^n - p needs v(p) = 1 pinned down, and one digit
    // of precision only shows v(p) >= 1
    if (base.precision < 2) {
      rep.detail = "inconclusive at this precision";
      return rep;
    }
    Int mod = 1;
    for (long i = 0; i < base.precision; ++i) mod *= base.p;
    Int c = Int(base.p) % mod;
    long v = 0;
    while (c != 0 && c % base.p == 0) {
      c /= base.p;
      ++v;
    }
    if (c == 0) {
      rep.detail = "inconclusive at this precision";
      return rep;
    }
    if (std::gcd(v, n) != 1)
      throw input_error("unsupported extension kind: composite slope");
    e = detail::index_over_Z({Rat(v, n)});
  }

  long f = 1;
  if (m > 1) {
    f = detail::root_degree(base.p, 1, reduced, m);
    if (f != m)
      throw internal_error("residue degree disagrees with the polynomial degree");
  }

  rep.lhs = n * m;
  rep.ram_index = e;
  rep.res_degree = f;
  rep.rhs = e * f;
  rep.equal = rep.lhs == rep.rhs;
  rep.conclusive = true;
  rep.detail = "e=" + std::to_string(e) + ", f=" + std::to_string(f);
  return rep;
}

}  // namespace vfnip
