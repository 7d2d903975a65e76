#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "classifier.hpp"

namespace vfnip {

// [G]_gamma, the set of x with n*x a multiple of gamma for some n > 0, as an
// isomorphism type of pairs (rank one group, distinguished positive element).
// gamma is reduced modulo the automorphisms of the group: 1 when the group is
// all of Q, otherwise an integer prime to the divisible primes.
struct RelDivHull {
  ArchSummand summand;
  Rat gamma = 1;
  friend bool operator==(const RelDivHull&, const RelDivHull&) = default;
};

inline RelDivHull relative_hull(const OAGDesc& g, const GroupElement& gamma) {
  if (!element_in_group(g, gamma.coords))
    throw input_error("element does not lie in the group");
  if (gamma.is_zero())
    throw input_error("relative hull of the zero element is trivial");

  std::vector<size_t> touched;
  for (size_t i = 0; i < g.rank(); ++i)
    if (gamma.coords[i] != 0) touched.push_back(i);

  bool all_div = true;
  for (size_t i : touched) all_div &= g.summands[i].all_divisible;
  if (all_div) return {summand_Q(), 1};

  // primes under which every touched summand is divisible
  std::set<long> div_primes;
  {
    bool first = true;
    for (size_t i : touched) {
      const auto& s = g.summands[i];
      if (s.all_divisible) continue;
      std::set<long> here(s.primes.begin(), s.primes.end());
      if (first) {
        div_primes = std::move(here);
        first = false;
      } else {
        std::set<long> keep;
        for (long q : div_primes)
          if (here.count(q)) keep.insert(q);
        div_primes = std::move(keep);
      }
    }
  }

  std::set<long> relevant;
  for (size_t i : touched) {
    for (long q : prime_factors(num(gamma.coords[i]))) relevant.insert(q);
    for (long q : prime_factors(den(gamma.coords[i]))) relevant.insert(q);
    for (long q : g.summands[i].primes) relevant.insert(q);
  }

  // r*gamma lies in the group iff, for every prime q outside div_primes,
  // vq(r) >= -m_q with m_q the least vq over the coordinates whose summand is
  // not q-divisible. The canonical distinguished element is prod q^(m_q);
  // membership of gamma makes every m_q nonnegative.
  Rat canon = 1;
  for (long q : relevant) {
    if (div_primes.count(q)) continue;
    std::optional<long> m;
    for (size_t i : touched)
      if (!summand_q_divisible(g.summands[i], q)) {
        long v = vq(q, gamma.coords[i]);
        m = m ? std::min(*m, v) : v;
      }
    if (!m || *m < 0) throw internal_error("bad hull exponent");
    for (long k = 0; k < *m; ++k) canon *= q;
  }

  ArchSummand s = div_primes.empty()
                      ? summand_Z()
                      : summand_dense({div_primes.begin(), div_primes.end()});
  return {std::move(s), std::move(canon)};
}

// ---------------------------------------------------------------------------
// Complete theory tags. Mixed characteristic tags keep the ambient group and
// the value of p; the canonical model behind a finite extension tag sits over
// the recorded residue field.

struct EqChar0 {
  FieldDesc k;
  OAGDesc g;
  friend bool operator==(const EqChar0&, const EqChar0&) = default;
};

// separably defectless Kaplansky, equal characteristic p, imperfection e
struct EqCharPSd {
  long p = 2;
  std::optional<ImpDeg> e;
  FieldDesc k;
  OAGDesc g;
  friend bool operator==(const EqCharPSd&, const EqCharPSd&) = default;
};

// finitely ramified over the canonical unramified model
struct MixedFinRam {
  long p = 2;
  std::optional<ImpDeg> e;  // imperfection at the coarsening by p
  FieldDesc k;
  OAGDesc g;
  GroupElement gamma;  // value of p
  friend bool operator==(const MixedFinRam&, const MixedFinRam&) = default;
};

// algebraically maximal with dense ramification; pinned down by a compatible
// algebraic core whose invariants are recorded
struct MixedAlgMax {
  long p = 2;
  FieldDesc k;
  OAGDesc g;
  GroupElement gamma;
  RelDivHull core_spec;
  friend bool operator==(const MixedAlgMax&, const MixedAlgMax&) = default;
};

struct FiniteExtOf {
  MixedFinRam base;
  std::optional<long> degree;
  friend bool operator==(const FiniteExtOf&, const FiniteExtOf&) = default;
};

using TheoryTag =
    std::variant<EqChar0, EqCharPSd, MixedFinRam, MixedAlgMax, FiniteExtOf>;

namespace detail {

inline long small_positive_integer(const Rat& r, const char* what) {
  if (!is_integer(r) || r <= 0)
    throw internal_error(std::string("expected a positive integer ") + what);
  return static_cast<long>(num(r));
}

}  // namespace detail

inline TheoryTag theory_of(const ValuedFieldDesc& vf) {
  auto cls = classify_nip(vf);
  if (cls.verdict != Verdict::NIP)
    throw input_error("theory tags are only assigned to certified NIP descriptors");

  auto flat = flatten(vf);
  auto res = residue_field(vf);
  auto cp = char_pair(vf);

  if (!cp.mixed()) {
    if (cp.field_char == 0) return EqChar0{res, flat.group};
    return EqCharPSd{cp.field_char, imperfection(field_of(vf)), res, flat.group};
  }

  long p = cp.residue_char;
  auto dec = standard_decomposition(vf);
  auto gamma = *flat.vp;

  if (!dec.quotient_discrete)
    return MixedAlgMax{p, res, flat.group, gamma, relative_hull(flat.group, gamma)};

  auto e = imperfection(field_of(dec.Kvp_vbar));
  if (!dec.delta_p.trivial() && is_false(is_perfect(res)))
    throw internal_error(
        "finite ramification over nontrivial rank below p forces a perfect "
        "residue field");

  size_t l = leading_index(gamma);
  long e_ram = detail::small_positive_integer(gamma.coords[l], "ramification index");

  long degree = e_ram;
  FieldDesc inner_k = res;
  if (is_true(is_finite_field(res))) {
    // the canonical model sits over the prime field
    const auto& fk = std::get<FiniteField>(res);
    inner_k = FiniteField{p, 1};
    degree = e_ram * fk.d;
  }
  MixedFinRam inner{p, e, std::move(inner_k), flat.group, gamma};
  if (degree == 1) return inner;
  return FiniteExtOf{std::move(inner), degree};
}

// ---------------------------------------------------------------------------
// Completeness. The equal characteristic p criterion is an iff; the mixed
// ones are sufficient, so a missed hypothesis only yields unknown.

struct CompletenessReport {
  Tri complete = Tri::Unknown;
  std::vector<std::string> reasons;
};

namespace detail {

inline OAGDesc suffix_group(const OAGDesc& g, size_t from) {
  return OAGDesc{{g.summands.begin() + static_cast<long>(from), g.summands.end()}};
}

struct HypSet {
  Tri all = Tri::True;
  std::vector<std::string> reasons;
  void add(Tri v, const std::string& if_false, const std::string& if_unknown) {
    all = tri_and(all, v);
    if (is_false(v)) reasons.push_back(if_false);
    else if (is_unknown(v)) reasons.push_back(if_unknown);
  }
};

}  // namespace detail

inline CompletenessReport completeness_check(const TheoryTag& tag) {
  CompletenessReport out;
  if (const auto* t = std::get_if<EqChar0>(&tag)) {
    (void)t;
    out.complete = Tri::True;
    out.reasons.push_back(
        "equal characteristic 0: determined by residue field and value group");
    return out;
  }
  if (const auto* t = std::get_if<EqCharPSd>(&tag)) {
    if (t->g.trivial()) {
      out.complete = Tri::True;
      out.reasons.push_back("trivial valuation: the theory of the residue field");
      return out;
    }
    if (is_false(is_perfect(t->k))) {
      out.complete = Tri::Unknown;
      out.reasons.push_back(
          "no models: the residue field of a separably defectless Kaplansky "
          "field is perfect");
      return out;
    }
    detail::HypSet h;
    h.add(is_perfect(t->k), "residue field not perfect",
          "residue field perfection undetermined");
    h.add(no_galois_div_p(t->k, t->p),
          "residue field has a Galois extension of degree divisible by " +
              std::to_string(t->p),
          "residue field Galois " + std::to_string(t->p) +
              "-extensions undetermined");
    h.add(tri(is_p_divisible(t->g, t->p)),
          "value group not " + std::to_string(t->p) + "-divisible", "");
    out.complete = h.all;  // the criterion is an iff
    out.reasons = std::move(h.reasons);
    if (is_true(out.complete))
      out.reasons.push_back(
          "Kaplansky residue field over a p-divisible value group");
    return out;
  }
  if (const auto* t = std::get_if<MixedFinRam>(&tag)) {
    detail::HypSet h;
    h.add(is_perfect(t->k), "residue field not perfect",
          "residue field perfection undetermined");
    h.add(is_nip_field(t->k), "residue field not NIP",
          "residue field NIP status undetermined");
    size_t l = leading_index(t->gamma);
    h.add(tri(is_p_divisible(detail::suffix_group(t->g, l + 1), t->p)),
          "group below the value of p not " + std::to_string(t->p) + "-divisible",
          "");
    bool min_pos = t->g.summands[l].discrete && t->gamma.coords[l] == 1;
    h.add(tri(min_pos), "value of p is not minimal positive modulo the part below",
          "");
    out.complete = is_true(h.all) ? Tri::True : Tri::Unknown;
    out.reasons = std::move(h.reasons);
    if (is_true(out.complete))
      out.reasons.push_back("unramified over the canonical complete model");
    return out;
  }
  if (const auto* t = std::get_if<MixedAlgMax>(&tag)) {
    detail::HypSet h;
    h.add(tri_not(is_finite_field(t->k)), "residue field is finite",
          "residue field finiteness undetermined");
    h.add(is_perfect(t->k), "residue field not perfect",
          "residue field perfection undetermined");
    h.add(is_nip_field(t->k), "residue field not NIP",
          "residue field NIP status undetermined");
    size_t l = leading_index(t->gamma);
    bool group_ok = is_p_divisible(t->g, t->p) ||
                    is_p_divisible(detail::suffix_group(t->g, l), t->p);
    h.add(tri(group_ok),
          "neither the group nor the interval around the value of p is " +
              std::to_string(t->p) + "-divisible",
          "");
    out.complete = is_true(h.all) ? Tri::True : Tri::Unknown;
    out.reasons = std::move(h.reasons);
    if (is_true(out.complete))
      out.reasons.push_back(
          "algebraically maximal over a fixed compatible algebraic core");
    return out;
  }
  out.complete = Tri::Unknown;
  out.reasons.push_back("completeness depends on the particular finite extension");
  return out;
}

// ---------------------------------------------------------------------------
// Compatible algebraic cores for the densely ramified tags: algebraically
// maximal algebraic extensions of the rationals under the p-adic valuation,
// residue field the algebraic closure of the prime field, value group matching
// the relative hull of the target.

struct CompatibilityReport {
  Tri ok = Tri::Unknown;
  std::vector<std::string> notes;
};

inline CompatibilityReport compatible_check(const ValuedFieldDesc& cand,
                                            const OAGDesc& g,
                                            const GroupElement& gamma, long p) {
  CompatibilityReport out;
  detail::HypSet h;

  auto cp = char_pair(cand);
  if (!cp.mixed() || cp.residue_char != p) {
    out.ok = Tri::False;
    out.notes.push_back("candidate is not of mixed characteristic (0," +
                        std::to_string(p) + ")");
    return out;
  }
  h.add(tri(residue_field(cand) == FieldDesc{AlgClosedField{p}}),
        "residue field is not the algebraic closure of the prime field", "");
  h.add(structural_flags(cand).alg_max, "candidate is not algebraically maximal",
        "algebraic maximality undetermined");

  auto flat = flatten(cand);
  bool pair_ok = flat.group.rank() == 1 && flat.vp &&
                 relative_hull(flat.group, *flat.vp) == relative_hull(g, gamma);
  h.add(tri(pair_ok),
        "value group with the value of p does not match the relative hull", "");

  Tri algebraic = std::visit(
      [](const auto& c) -> Tri {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, QpExtCore> ||
                      std::is_same_v<T, TameKaplanskyCore>)
          return Tri::True;
        else if constexpr (std::is_same_v<T, CohenCore>)
          return Tri::False;  // complete unramified fields are transcendental
        else
          return Tri::Unknown;
      },
      cand.core);
  h.add(algebraic, "candidate is not algebraic over the rationals",
        "algebraicity over the rationals is not certified by the descriptor");

  out.ok = h.all;
  out.notes = std::move(h.reasons);
  return out;
}

// ---------------------------------------------------------------------------
// Rank one finitely ramified descriptors are finite extensions of the complete
// unramified field over their residue field.

struct CohenNormalForm {
  FieldDesc residue;
  long degree = 1;  // over the complete unramified model
};

inline CohenNormalForm cohen_normal_form(const ValuedFieldDesc& vf) {
  if (!is_true(structural_flags(vf).henselian))
    throw input_error("normal form needs a certified henselian descriptor");
  if (!char_pair(vf).mixed())
    throw input_error("normal form needs mixed characteristic");
  auto flat = flatten(vf);
  if (flat.group != group_Z())
    throw input_error("normal form needs value group Z");
  long deg = detail::small_positive_integer(flat.vp->coords[0], "value of p");
  return {residue_field(vf), deg};
}

// ---------------------------------------------------------------------------
// Routing into the catalogued unstable NIP families.

struct ShelahRoute {
  std::string family;  // "i".."vi", "degenerate", or "outside"
  std::string description;
  std::string note;
};

inline ShelahRoute shelah_family(const ValuedFieldDesc& vf) {
  if (flatten(vf).group.trivial()) {
    auto cls = classify_nip(vf);
    if (cls.verdict != Verdict::NIP)
      throw input_error("family routing is only defined for NIP descriptors");
    return {"degenerate",
            "trivially valued: nothing beyond the theory of the field", ""};
  }
  auto tag = theory_of(vf);
  const std::string cond = "conditional on the Shelah conjecture for NIP fields";
  ShelahRoute out{"outside", "not among the catalogued families", ""};

  if (const auto* t = std::get_if<EqChar0>(&tag)) {
    if (t->k == FieldDesc{AlgClosedField{0}})
      out = {"i", "equal characteristic 0, algebraically closed residue field",
             cond};
    else if (t->k == FieldDesc{RealClosedField{}})
      out = {"ii", "equal characteristic 0, real closed residue field", cond};
  } else if (const auto* t = std::get_if<EqCharPSd>(&tag)) {
    if (t->k == FieldDesc{AlgClosedField{t->p}})
      out = {"iii",
             "separably defectless Kaplansky over the algebraic closure of "
             "the prime field",
             cond};
  } else if (const auto* t = std::get_if<MixedFinRam>(&tag)) {
    if (t->k == FieldDesc{FiniteField{t->p, 1}})
      out = {"iv", "finitely ramified with finite residue field", cond};
    else if (t->k == FieldDesc{AlgClosedField{t->p}})
      out = {"v",
             "finitely ramified over the algebraic closure of the prime field",
             cond};
  } else if (const auto* t = std::get_if<FiniteExtOf>(&tag)) {
    if (t->base.k == FieldDesc{FiniteField{t->base.p, 1}})
      out = {"iv", "finitely ramified with finite residue field", cond};
    else if (t->base.k == FieldDesc{AlgClosedField{t->base.p}})
      out = {"v",
             "finitely ramified over the algebraic closure of the prime field",
             cond};
  } else if (const auto* t = std::get_if<MixedAlgMax>(&tag)) {
    if (t->k == FieldDesc{AlgClosedField{t->p}})
      out = {"vi",
             "densely ramified, algebraically maximal, over the algebraic "
             "closure of the prime field",
             cond + "; one completion for each compatible algebraic core"};
  }
  return out;
}

}  // namespace vfnip
