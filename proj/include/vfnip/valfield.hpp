#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "fields.hpp"
#include "oag.hpp"

namespace vfnip {

struct ValuedFieldDesc;

// Henselianity, defect and maximality flags of a valued field. Unknown means
// the descriptor does not determine the property.
struct CoreFlags {
  Tri henselian = Tri::Unknown;
  Tri defectless = Tri::Unknown;
  Tri sep_defectless = Tri::Unknown;
  Tri alg_max = Tri::Unknown;
  Tri sep_alg_max = Tri::Unknown;
  friend bool operator==(const CoreFlags&, const CoreFlags&) = default;
};

inline CoreFlags all_true_flags() {
  return {Tri::True, Tri::True, Tri::True, Tri::True, Tri::True};
}

// Innermost piece of a descriptor tower.
struct TrivialCore {
  FieldDesc k;
  friend bool operator==(const TrivialCore&, const TrivialCore&) = default;
};

// Finite extension of the p-adics with ramification e and inertia degree f;
// value group is normalized so the uniformizer has value 1, so v(p) = e.
struct QpExtCore {
  long p = 2;
  long e = 1;
  long f = 1;
  friend bool operator==(const QpExtCore&, const QpExtCore&) = default;
};

// Complete unramified mixed-characteristic field over a characteristic-p
// lower part: either a plain field (trivially valued) or a valued field whose
// valuation gets composed below the canonical one.
struct CohenCore {
  FieldDesc lower_field;
  std::shared_ptr<const ValuedFieldDesc> lower_valued;  // null for plain

  bool plain() const { return lower_valued == nullptr; }
  friend bool operator==(const CohenCore& a, const CohenCore& b);
};

// Algebraically maximal purely wild construction: mixed characteristic,
// defectless Kaplansky by construction, residue k, value group g, v(p) = vp.
struct TameKaplanskyCore {
  FieldDesc k;
  OAGDesc g;
  GroupElement vp;
  friend bool operator==(const TameKaplanskyCore&, const TameKaplanskyCore&) = default;
};

// A valued field given by invariants only. vp present iff mixed
// characteristic. field_sort optionally pins the underlying field.
struct AbstractCore {
  FieldDesc k;  // residue
  OAGDesc g;
  std::optional<GroupElement> vp;
  CoreFlags flags;
  std::optional<FieldDesc> field_sort;
  friend bool operator==(const AbstractCore&, const AbstractCore&) = default;
};

using Core = std::variant<TrivialCore, QpExtCore, CohenCore, TameKaplanskyCore,
                          AbstractCore>;

// Power series layers (outermost first) over a core. The composed valuation
// reads layer groups as the most significant part of the value group.
struct ValuedFieldDesc {
  std::vector<OAGDesc> layers;
  Core core;
  friend bool operator==(const ValuedFieldDesc&, const ValuedFieldDesc&) = default;
};

inline bool operator==(const CohenCore& a, const CohenCore& b) {
  if (a.plain() != b.plain()) return false;
  if (a.plain()) return a.lower_field == b.lower_field;
  return *a.lower_valued == *b.lower_valued;
}

inline ValuedFieldDesc triv(FieldDesc k) { return {{}, TrivialCore{std::move(k)}}; }

inline ValuedFieldDesc hahn(ValuedFieldDesc base, OAGDesc g) {
  base.layers.insert(base.layers.begin(), std::move(g));
  return base;
}

// ---------------------------------------------------------------------------
// Residue field, underlying field sort, characteristics.

inline FieldDesc residue_field(const ValuedFieldDesc& vf) {
  return std::visit(
      [](const auto& c) -> FieldDesc {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TrivialCore>) return c.k;
        else if constexpr (std::is_same_v<T, QpExtCore>) return FiniteField{c.p, c.f};
        else if constexpr (std::is_same_v<T, CohenCore>) {
          if (c.plain()) return c.lower_field;
          return residue_field(*c.lower_valued);
        } else if constexpr (std::is_same_v<T, TameKaplanskyCore>) return c.k;
        else return c.k;
      },
      vf.core);
}

inline long residue_char(const ValuedFieldDesc& vf) {
  return field_char(residue_field(vf));
}

namespace detail {

inline long count_non_p_div(const OAGDesc& g, long p) {
  long n = 0;
  for (const auto& s : g.summands)
    if (!summand_q_divisible(s, p)) ++n;
  return n;
}

// Underlying field of one power series layer over a known base field.
inline FieldDesc field_of_layer(const FieldDesc& base, const OAGDesc& g) {
  if (g.trivial()) return base;
  long c = field_char(base);
  if (c == 0) {
    if (fully_divisible(g)) {
      if (std::holds_alternative<AlgClosedField>(base)) return base;
      if (std::holds_alternative<RealClosedField>(base)) return base;
    }
    AbstractField out;
    out.char_p = 0;
    out.perfect = Tri::True;
    out.imp = ImpDeg::finite(0);
    out.no_p_ext = Tri::True;
    out.nip = is_nip_field(base);
    return out;
  }
  if (std::holds_alternative<AlgClosedField>(base) && fully_divisible(g)) return base;
  AbstractField out;
  out.char_p = c;
  bool pdiv = is_p_divisible(g, c);
  out.perfect = tri_and(is_perfect(base), tri(pdiv));
  if (auto e = imp_degree(base)) {
    long extra = count_non_p_div(g, c);
    out.imp = e->inf ? ImpDeg::infinite() : ImpDeg::finite(e->e + extra);
  }
  if (!pdiv) {
    // v(root) of an Artin-Schreier polynomial over a non-p-divisible exponent
    // gives a Galois extension of degree p
    out.no_p_ext = Tri::False;
  } else if (is_false(is_perfect(base)) ||
             (imp_degree(base) && imp_degree(base)->positive())) {
    out.no_p_ext = Tri::False;  // same construction with a non-p-th-power coefficient
  } else if (is_true(is_perfect(base)) && is_true(no_galois_div_p(base, c))) {
    // maximal and defectless with a p-divisible group kills the ramified part;
    // a perfect base without degree-p Galois extensions kills the residue part
    out.no_p_ext = Tri::True;
  }
  if (is_true(out.perfect) && !out.imp) out.imp = ImpDeg::finite(0);
  // Kaplansky tower over an NIP residue is NIP as a pure field
  if (pdiv && is_true(is_perfect(base)) && is_true(no_galois_div_p(base, c)) &&
      is_true(is_nip_field(base)))
    out.nip = Tri::True;
  return out;
}

inline OAGDesc concat_layers(const std::vector<OAGDesc>& layers) {
  OAGDesc g;
  for (const auto& l : layers) g = lex_concat(g, l);
  return g;
}

}  // namespace detail

inline FieldDesc field_of(const ValuedFieldDesc& vf) {
  FieldDesc base = std::visit(
      [](const auto& c) -> FieldDesc {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TrivialCore>) return c.k;
        else if constexpr (std::is_same_v<T, QpExtCore>) {
          AbstractField f;
          f.char_p = 0;
          f.perfect = Tri::True;
          f.imp = ImpDeg::finite(0);
          f.no_p_ext = Tri::True;  // vacuous in characteristic 0
          f.nip = Tri::True;
          return f;
        } else if constexpr (std::is_same_v<T, CohenCore>) {
          AbstractField f;
          f.char_p = 0;
          f.perfect = Tri::True;
          f.imp = ImpDeg::finite(0);
          f.no_p_ext = Tri::True;
          return f;
        } else if constexpr (std::is_same_v<T, TameKaplanskyCore>) {
          AbstractField f;
          f.char_p = 0;
          f.perfect = Tri::True;
          f.imp = ImpDeg::finite(0);
          f.no_p_ext = Tri::True;
          f.nip = Tri::True;
          return f;
        } else {
          if (c.field_sort) return *c.field_sort;
          AbstractField f;
          f.char_p = c.vp ? 0 : field_char(c.k);
          if (f.char_p == 0) {
            f.perfect = Tri::True;
            f.imp = ImpDeg::finite(0);
            f.no_p_ext = Tri::True;
          }
          return f;
        }
      },
      vf.core);
  for (auto it = vf.layers.rbegin(); it != vf.layers.rend(); ++it)
    base = detail::field_of_layer(base, *it);
  return base;
}

// ---------------------------------------------------------------------------
// Flattened value group with the position of v(p).

struct Flattened {
  OAGDesc group;
  std::optional<GroupElement> vp;  // mixed characteristic only
  long p = 0;                      // residue characteristic when vp is set
  size_t layers_end = 0;           // summands contributed by the layers
  size_t core_end = 0;             // layers + core's own group
};

inline Flattened flatten(const ValuedFieldDesc& vf) {
  Flattened out;
  out.group = detail::concat_layers(vf.layers);
  out.layers_end = out.group.rank();
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TrivialCore>) {
          out.core_end = out.group.rank();
        } else if constexpr (std::is_same_v<T, QpExtCore>) {
          out.group = lex_concat(out.group, group_Z());
          out.core_end = out.group.rank();
          auto v = zero_element(out.group);
          v.coords[out.core_end - 1] = c.e;
          out.vp = v;
          out.p = c.p;
        } else if constexpr (std::is_same_v<T, CohenCore>) {
          out.group = lex_concat(out.group, group_Z());
          out.core_end = out.group.rank();
          size_t at = out.core_end - 1;
          if (!c.plain()) {
            auto low = flatten(*c.lower_valued);
            out.group = lex_concat(out.group, low.group);
          }
          auto v = zero_element(out.group);
          v.coords[at] = 1;
          out.vp = v;
          out.p = field_char(c.plain() ? c.lower_field : field_of(*c.lower_valued));
        } else if constexpr (std::is_same_v<T, TameKaplanskyCore>) {
          size_t before = out.group.rank();
          out.group = lex_concat(out.group, c.g);
          out.core_end = out.group.rank();
          auto v = zero_element(out.group);
          for (size_t i = 0; i < c.vp.coords.size(); ++i)
            v.coords[before + i] = c.vp.coords[i];
          out.vp = v;
          out.p = field_char(c.k);
        } else {
          size_t before = out.group.rank();
          out.group = lex_concat(out.group, c.g);
          out.core_end = out.group.rank();
          if (c.vp) {
            auto v = zero_element(out.group);
            for (size_t i = 0; i < c.vp->coords.size(); ++i)
              v.coords[before + i] = c.vp->coords[i];
            out.vp = v;
            out.p = field_char(c.k);
          }
        }
      },
      vf.core);
  return out;
}

inline bool is_trivially_valued(const ValuedFieldDesc& vf) {
  return flatten(vf).group.trivial();
}

struct CharPair {
  long field_char = 0;
  long residue_char = 0;
  bool mixed() const { return field_char == 0 && residue_char > 0; }
  bool equal() const { return field_char == residue_char; }
};

inline CharPair char_pair(const ValuedFieldDesc& vf) {
  return {field_char(field_of(vf)), residue_char(vf)};
}

// ---------------------------------------------------------------------------
// Flag closure and composition.

namespace detail {

// Fixpoint of the implication system between the five flags, specialized by
// the characteristic of the underlying field. Throws on contradiction.
inline CoreFlags close_flags(CoreFlags f, long field_char_, long residue_char_) {
  auto set = [](Tri& slot, Tri v, const char* what) {
    if (v == Tri::Unknown) return;
    if (slot == Tri::Unknown) slot = v;
    else if (slot != v) throw input_error(std::string("inconsistent flags: ") + what);
  };
  for (int pass = 0; pass < 6; ++pass) {
    if (residue_char_ == 0) {
      set(f.defectless, Tri::True, "residue characteristic 0 forces defectless");
      set(f.sep_defectless, Tri::True, "residue characteristic 0 forces defectless");
    }
    if (field_char_ == 0) {
      // every extension is separable
      set(f.sep_defectless, f.defectless, "defectless vs separably defectless");
      set(f.defectless, f.sep_defectless, "defectless vs separably defectless");
      set(f.sep_alg_max, f.alg_max, "maximality flags in characteristic 0");
      set(f.alg_max, f.sep_alg_max, "maximality flags in characteristic 0");
    }
    if (is_true(f.defectless))
      set(f.sep_defectless, Tri::True, "defectless implies separably defectless");
    if (is_false(f.sep_defectless))
      set(f.defectless, Tri::False, "defectless implies separably defectless");
    if (is_true(f.defectless) && is_true(f.henselian))
      set(f.alg_max, Tri::True, "henselian defectless implies algebraically maximal");
    if (is_false(f.alg_max) && is_true(f.henselian))
      set(f.defectless, Tri::False, "henselian defectless implies algebraically maximal");
    if (is_true(f.alg_max))
      set(f.sep_alg_max, Tri::True, "algebraically maximal implies the separable variant");
    if (is_false(f.sep_alg_max))
      set(f.alg_max, Tri::False, "algebraically maximal implies the separable variant");
    if (is_true(f.sep_defectless) && is_true(f.henselian))
      set(f.sep_alg_max, Tri::True,
          "henselian separably defectless implies separably algebraically maximal");
    if (is_false(f.sep_alg_max) && is_true(f.henselian))
      set(f.sep_defectless, Tri::False,
          "henselian separably defectless implies separably algebraically maximal");
    // the henselization is a proper immediate separable extension of a
    // non-henselian field
    if (is_true(f.sep_alg_max))
      set(f.henselian, Tri::True, "separably algebraically maximal implies henselian");
    if (is_false(f.henselian)) {
      set(f.alg_max, Tri::False, "algebraically maximal implies henselian");
      set(f.sep_alg_max, Tri::False, "separably algebraically maximal implies henselian");
    }
  }
  return f;
}

// v = upper then lower. Henselianity and defect compose biconditionally; the
// separable variants only descend, except that a characteristic-0 field ties
// sep_defectless to defectless.
inline CoreFlags compose_flags(const CoreFlags& upper, const CoreFlags& lower,
                               long field_char_, long residue_char_) {
  CoreFlags out;
  out.henselian = tri_and(upper.henselian, lower.henselian);
  out.defectless = tri_and(upper.defectless, lower.defectless);
  if (field_char_ == 0) {
    out.sep_defectless = out.defectless;
  } else if (is_true(out.defectless)) {
    out.sep_defectless = Tri::True;
  } else if (is_false(upper.sep_defectless) || is_false(lower.sep_defectless)) {
    out.sep_defectless = Tri::False;
  } else {
    out.sep_defectless = Tri::Unknown;
  }
  if (is_true(out.defectless) && is_true(out.henselian)) out.alg_max = Tri::True;
  if (is_true(out.alg_max) ||
      (is_true(out.sep_defectless) && is_true(out.henselian)))
    out.sep_alg_max = Tri::True;
  return close_flags(out, field_char_, residue_char_);
}

inline CoreFlags refine_abstract_flags(const AbstractCore& c);

}  // namespace detail

// Flags of the composed valuation carried by the descriptor.
inline CoreFlags structural_flags(const ValuedFieldDesc& vf) {
  CoreFlags core = std::visit(
      [](const auto& c) -> CoreFlags {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, CohenCore>) {
          if (c.plain()) return all_true_flags();
          CoreFlags low = structural_flags(*c.lower_valued);
          return detail::compose_flags(all_true_flags(), low, 0,
                                       residue_char(*c.lower_valued));
        } else if constexpr (std::is_same_v<T, AbstractCore>) {
          return detail::refine_abstract_flags(c);
        } else {
          return all_true_flags();  // trivial, p-adic, Cohen, tame: all maximal
        }
      },
      vf.core);
  if (vf.layers.empty()) return core;
  // each layer is a maximal piece; compose top-down
  auto cp = char_pair(vf);
  return detail::compose_flags(all_true_flags(), core, cp.field_char,
                               cp.residue_char);
}

// ---------------------------------------------------------------------------
// Validation.

inline void validate_vf(const ValuedFieldDesc& vf);

namespace detail {

inline void validate_core(const Core& core) {
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TrivialCore>) {
          normalize_field(c.k);
        } else if constexpr (std::is_same_v<T, QpExtCore>) {
          if (!is_prime(c.p)) throw input_error("p-adic core needs a prime");
          if (c.e < 1 || c.f < 1)
            throw input_error("ramification and inertia must be positive");
        } else if constexpr (std::is_same_v<T, CohenCore>) {
          if (c.plain()) {
            normalize_field(c.lower_field);
            if (field_char(c.lower_field) == 0)
              throw input_error("Cohen construction needs positive characteristic");
          } else {
            validate_vf(*c.lower_valued);
            if (field_char(field_of(*c.lower_valued)) == 0)
              throw input_error("Cohen construction needs positive characteristic");
          }
        } else if constexpr (std::is_same_v<T, TameKaplanskyCore>) {
          normalize_field(c.k);
          long p = field_char(c.k);
          if (p == 0) throw input_error("tame core needs positive residue characteristic");
          validate_group(c.g);
          make_element(c.g, c.vp.coords);
          if (!is_positive(c.vp)) throw input_error("v(p) must be positive");
          if (!is_p_divisible(c.g, p))
            throw input_error("tame core needs a p-divisible value group");
          if (is_false(is_perfect(c.k)) || is_false(no_galois_div_p(c.k, p)))
            throw input_error("tame core needs a Kaplansky residue field");
        } else {
          normalize_field(c.k);
          validate_group(c.g);
          long rc = field_char(c.k);
          if (c.vp) {
            if (rc == 0) throw input_error("v(p) needs residue characteristic p");
            make_element(c.g, c.vp->coords);
            if (!is_positive(*c.vp)) throw input_error("v(p) must be positive");
            if (c.field_sort && field_char(*c.field_sort) != 0)
              throw input_error("mixed characteristic needs a characteristic 0 field");
          } else if (c.field_sort && field_char(*c.field_sort) != rc) {
            throw input_error("equal characteristic field/residue mismatch");
          }
        }
      },
      core);
}

// Extra facts the field sort forces on an abstract core's flags.
inline CoreFlags refine_abstract_flags(const AbstractCore& c) {
  CoreFlags f = c.flags;
  long fc = c.vp ? 0 : field_char(c.k);
  auto set = [](Tri& slot, Tri v, const char* what) {
    if (v == Tri::Unknown) return;
    if (slot == Tri::Unknown) slot = v;
    else if (slot != v) throw input_error(std::string("inconsistent flags: ") + what);
  };
  if (c.field_sort) {
    bool sep_closed = std::holds_alternative<SepClosedField>(*c.field_sort);
    bool alg_closed = std::holds_alternative<AlgClosedField>(*c.field_sort);
    if (sep_closed || alg_closed) {
      set(f.henselian, Tri::True, "separably closed fields are henselian for every valuation");
      set(f.sep_defectless, Tri::True,
          "no finite separable extensions to carry defect");
      set(f.sep_alg_max, Tri::True, "no proper separable algebraic extensions");
    }
    if (alg_closed) {
      set(f.defectless, Tri::True, "no finite extensions to carry defect");
      set(f.alg_max, Tri::True, "no proper algebraic extensions");
    }
    if (sep_closed && !c.g.trivial()) {
      // a proper purely inseparable extension is immediate
      set(f.defectless, Tri::False,
          "nontrivially valued separably closed imperfect fields carry defect");
      set(f.alg_max, Tri::False,
          "nontrivially valued separably closed imperfect fields carry defect");
    }
  }
  if (c.g.trivial()) {
    set(f.henselian, Tri::True, "trivial valuations are henselian");
    set(f.defectless, Tri::True, "trivial valuations are defectless");
    set(f.sep_defectless, Tri::True, "trivial valuations are defectless");
    set(f.alg_max, Tri::True, "trivial valuations are maximal");
    set(f.sep_alg_max, Tri::True, "trivial valuations are maximal");
  }
  return detail::close_flags(f, fc, field_char(c.k));
}

}  // namespace detail

inline void validate_vf(const ValuedFieldDesc& vf) {
  for (const auto& l : vf.layers) {
    validate_group(l);
  }
  detail::validate_core(vf.core);
  if (auto* a = std::get_if<AbstractCore>(&vf.core)) {
    detail::refine_abstract_flags(*a);  // throws on contradictions
  }
  structural_flags(vf);  // closure may also throw
}

// Normalized copy: fields canonicalized, abstract flags closed under the
// implication system and the field-sort refinements.
inline ValuedFieldDesc build(std::vector<OAGDesc> layers, Core core) {
  ValuedFieldDesc vf{std::move(layers), std::move(core)};
  std::visit(
      [](auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TrivialCore>) {
          c.k = normalize_field(c.k);
        } else if constexpr (std::is_same_v<T, CohenCore>) {
          if (c.plain()) c.lower_field = normalize_field(c.lower_field);
        } else if constexpr (std::is_same_v<T, TameKaplanskyCore>) {
          c.k = normalize_field(c.k);
        } else if constexpr (std::is_same_v<T, AbstractCore>) {
          c.k = normalize_field(c.k);
          if (c.field_sort) c.field_sort = normalize_field(*c.field_sort);
        }
      },
      vf.core);
  for (const auto& l : vf.layers) validate_group(l);
  detail::validate_core(vf.core);
  if (auto* a = std::get_if<AbstractCore>(&vf.core))
    a->flags = detail::refine_abstract_flags(*a);
  structural_flags(vf);  // cross-piece closure may throw
  return vf;
}

// Defect flags transfer across the immediate extension; maximality flags of
// the original field do not, so they are rederived from scratch.
inline ValuedFieldDesc henselize(ValuedFieldDesc vf) {
  std::visit(
      [](auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, AbstractCore>) {
          c.flags.alg_max = Tri::Unknown;
          c.flags.sep_alg_max = Tri::Unknown;
          c.flags.henselian = Tri::True;
          c.flags = detail::refine_abstract_flags(c);
        } else if constexpr (std::is_same_v<T, CohenCore>) {
          if (!c.plain())
            c.lower_valued = std::make_shared<const ValuedFieldDesc>(
                henselize(*c.lower_valued));
        }
      },
      vf.core);
  return vf;
}

// ---------------------------------------------------------------------------
// Standard decomposition of a mixed-characteristic valued field.

struct Decomposition {
  ConvexCut cut_p;  // flattened index of the maximal convex avoiding v(p)
  ConvexCut cut_0;  // flattened index of the minimal convex containing v(p)
  OAGDesc delta_p;
  OAGDesc delta_0;
  ArchSummand arch_quot;  // delta_0 / delta_p
  bool quotient_discrete = false;
  ValuedFieldDesc K_v0;       // (Kv_0, vbar): whole lower tower, group delta_0
  ValuedFieldDesc Kv0_vbar_p; // (Kv_0, vbar_p): the rank-ish middle step
  ValuedFieldDesc Kvp_vbar;   // (Kv_p, vbar): group delta_p
};

namespace detail {

inline FieldDesc unknown_field(long char_p) {
  AbstractField f;
  f.char_p = char_p;
  if (char_p == 0) {
    f.perfect = Tri::True;
    f.imp = ImpDeg::finite(0);
    f.no_p_ext = Tri::True;
  }
  return f;
}

// Downward transfer of flags from the whole composed valuation to a piece.
// True henselianity and defect descend; false cannot be attributed to one
// piece and degrades to unknown. exact_defect marks the one piece whose
// defect flag transfers biconditionally (the char-0 part above it is
// automatically defectless).
inline CoreFlags piece_flags(const CoreFlags& whole, long piece_field_char,
                             long piece_residue_char, bool exact_defect) {
  CoreFlags f;
  f.henselian = is_true(whole.henselian) ? Tri::True : Tri::Unknown;
  if (exact_defect) f.defectless = whole.defectless;
  else f.defectless = is_true(whole.defectless) ? Tri::True : Tri::Unknown;
  f.sep_defectless = is_true(whole.sep_defectless) ? Tri::True : Tri::Unknown;
  if (exact_defect && piece_field_char == 0) f.sep_defectless = whole.sep_defectless;
  return close_flags(f, piece_field_char, piece_residue_char);
}

}  // namespace detail

inline Decomposition standard_decomposition(const ValuedFieldDesc& vf) {
  auto cp = char_pair(vf);
  if (!cp.mixed())
    throw input_error("standard decomposition needs mixed characteristic");
  auto flat = flatten(vf);
  if (!flat.vp) throw internal_error("mixed characteristic without v(p)");
  Decomposition dec;
  auto cuts = gamma_cuts(flat.group, *flat.vp);
  dec.cut_p = cuts.minus;
  dec.cut_0 = cuts.plus;
  dec.delta_p = quotient_and_subgroup(flat.group, dec.cut_p).second;
  dec.delta_0 = quotient_and_subgroup(flat.group, dec.cut_0).second;
  dec.arch_quot = quotient_summand(flat.group, *flat.vp);
  dec.quotient_discrete = dec.arch_quot.discrete;

  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, QpExtCore>) {
          dec.K_v0 = build({}, c);
          dec.Kv0_vbar_p = dec.K_v0;
          dec.Kvp_vbar = build({}, TrivialCore{FiniteField{c.p, c.f}});
        } else if constexpr (std::is_same_v<T, CohenCore>) {
          if (c.plain()) {
            dec.K_v0 = build({}, c);
            dec.Kv0_vbar_p = dec.K_v0;
            dec.Kvp_vbar = build({}, TrivialCore{c.lower_field});
          } else {
            dec.K_v0 = build({}, c);
            dec.Kv0_vbar_p = build({}, CohenCore{field_of(*c.lower_valued), nullptr});
            dec.Kvp_vbar = *c.lower_valued;
          }
        } else if constexpr (std::is_same_v<T, TameKaplanskyCore> ||
                             std::is_same_v<T, AbstractCore>) {
          const OAGDesc& g = c.g;
          GroupElement vploc = [&]() {
            if constexpr (std::is_same_v<T, TameKaplanskyCore>) return c.vp;
            else return *c.vp;
          }();
          size_t l = leading_index(vploc);
          OAGDesc g0 = quotient_and_subgroup(g, ConvexCut{l}).second;
          OAGDesc gp = quotient_and_subgroup(g, ConvexCut{l + 1}).second;
          auto vp0 = restrict_to_subgroup(vploc, ConvexCut{l});
          // (Kv_0, vbar): residue is the final residue, group delta_0
          CoreFlags core_flags = [&]() {
            if constexpr (std::is_same_v<T, AbstractCore>) return c.flags;
            else return all_true_flags();
          }();
          FieldDesc kvp_field = gp.trivial()
                                    ? FieldDesc(c.k)
                                    : detail::unknown_field(field_char(c.k));
          if (l == 0) {
            dec.K_v0 = build({}, c);  // v_0 discards only the layers
          } else {
            AbstractCore a;
            a.k = c.k;
            a.g = g0;
            a.vp = vp0;
            a.flags = detail::piece_flags(core_flags, 0, field_char(c.k), true);
            a.field_sort = detail::unknown_field(0);
            dec.K_v0 = build({}, std::move(a));
          }
          {
            AbstractCore m;
            m.k = kvp_field;
            m.g = OAGDesc{{dec.arch_quot}};
            m.vp = GroupElement{{vploc.coords[l]}};
            m.flags = detail::piece_flags(core_flags, 0, field_char(c.k), false);
            m.field_sort = detail::unknown_field(0);
            dec.Kv0_vbar_p = build({}, std::move(m));
          }
          if (gp.trivial()) {
            dec.Kvp_vbar = build({}, TrivialCore{c.k});
          } else {
            AbstractCore low;
            low.k = c.k;
            low.g = gp;
            low.flags = detail::piece_flags(core_flags, field_char(c.k),
                                            field_char(c.k), false);
            dec.Kvp_vbar = build({}, std::move(low));
          }
        } else {
          throw internal_error("mixed characteristic with a trivial core");
        }
      },
      vf.core);
  return dec;
}

// ---------------------------------------------------------------------------
// Coarsening at a cut of the flattened value group. Returns the coarsened
// field (residue field of the fine part as its residue) and the fine part
// carrying the rest of the valuation.

struct Coarsening {
  ValuedFieldDesc coarse;
  ValuedFieldDesc fine;  // valued field structure on the residue of coarse
};

inline Coarsening coarsen_at(const ValuedFieldDesc& vf, ConvexCut cut) {
  auto flat = flatten(vf);
  size_t n = flat.group.rank();
  if (cut.index > n) throw input_error("cut index out of range");
  if (cut.index == 0)
    return {triv(field_of(vf)), vf};
  if (cut.index == n)
    return {vf, triv(residue_field(vf))};

  size_t c = cut.index;
  // inside the layer region?
  if (c <= flat.layers_end) {
    size_t acc = 0;
    for (size_t j = 0; j < vf.layers.size(); ++j) {
      size_t next = acc + vf.layers[j].rank();
      if (c < next || (c == next && c < flat.layers_end)) {
        // boundary after layer j when c == next, else split layer j
        std::vector<OAGDesc> coarse_layers(vf.layers.begin(),
                                           vf.layers.begin() + j);
        std::vector<OAGDesc> fine_layers;
        if (c > acc) {
          auto [pre, post] = quotient_and_subgroup(vf.layers[j], ConvexCut{c - acc});
          if (!pre.trivial()) coarse_layers.push_back(pre);
          if (!post.trivial()) fine_layers.push_back(post);
        }
        for (size_t t = (c > acc ? j + 1 : j); t < vf.layers.size(); ++t)
          fine_layers.push_back(vf.layers[t]);
        ValuedFieldDesc fine = build(std::move(fine_layers), vf.core);
        ValuedFieldDesc coarse =
            build(std::move(coarse_layers), TrivialCore{field_of(fine)});
        return {std::move(coarse), std::move(fine)};
      }
      acc = next;
    }
    // c == flat.layers_end: boundary between layers and core
    ValuedFieldDesc fine = build({}, vf.core);
    ValuedFieldDesc coarse = build(vf.layers, TrivialCore{field_of(fine)});
    return {std::move(coarse), std::move(fine)};
  }

  // inside the core's own group or the Cohen lower part
  return std::visit(
      [&](const auto& corec) -> Coarsening {
        using T = std::decay_t<decltype(corec)>;
        if constexpr (std::is_same_v<T, CohenCore>) {
          if (c == flat.core_end) {
            if (corec.plain()) throw internal_error("unreachable cut");
            ValuedFieldDesc coarse = build(
                vf.layers, CohenCore{field_of(*corec.lower_valued), nullptr});
            return {std::move(coarse), *corec.lower_valued};
          }
          // strictly below: recurse into the lower valued field
          auto sub = coarsen_at(*corec.lower_valued, ConvexCut{c - flat.core_end});
          ValuedFieldDesc coarse =
              build(vf.layers,
                    CohenCore{FieldDesc{}, std::make_shared<const ValuedFieldDesc>(
                                               std::move(sub.coarse))});
          return {std::move(coarse), std::move(sub.fine)};
        } else if constexpr (std::is_same_v<T, TameKaplanskyCore>) {
          throw input_error("cannot split a tame core at an interior cut");
        } else if constexpr (std::is_same_v<T, AbstractCore>) {
          size_t local = c - flat.layers_end;
          auto [gpre, gpost] = quotient_and_subgroup(corec.g, ConvexCut{local});
          bool vp_in_post = corec.vp && leading_index(*corec.vp) >= local;
          long whole_field_char = corec.vp ? 0 : field_char(corec.k);
          long fine_field_char = vp_in_post ? 0 : field_char(corec.k);

          AbstractCore finec;
          finec.k = corec.k;
          finec.g = gpost;
          if (vp_in_post)
            finec.vp = restrict_to_subgroup(*corec.vp, ConvexCut{local});
          // when the coarse part has residue characteristic 0 its defect is
          // automatic and the whole flag transfers to the fine part exactly
          finec.flags = detail::piece_flags(corec.flags, fine_field_char,
                                            field_char(corec.k),
                                            /*exact_defect=*/fine_field_char == 0);
          ValuedFieldDesc fine = build({}, std::move(finec));

          AbstractCore coarsec;
          coarsec.k = field_of(fine);
          coarsec.g = gpre;
          if (corec.vp && !vp_in_post)
            coarsec.vp = project_to_quotient(*corec.vp, ConvexCut{local});
          coarsec.flags = detail::piece_flags(corec.flags, whole_field_char,
                                              fine_field_char, false);
          coarsec.field_sort = corec.field_sort;
          ValuedFieldDesc coarse = build(vf.layers, std::move(coarsec));
          return {std::move(coarse), std::move(fine)};
        } else {
          throw internal_error("unreachable cut in an atomic core");
        }
      },
      vf.core);
}

// Flattened cut positions at which coarsen_at succeeds.
inline std::vector<size_t> legal_cuts(const ValuedFieldDesc& vf) {
  auto flat = flatten(vf);
  std::vector<size_t> out;
  for (size_t c = 0; c <= flat.group.rank(); ++c) {
    if (c > flat.layers_end && c < flat.core_end &&
        std::holds_alternative<TameKaplanskyCore>(vf.core))
      continue;
    out.push_back(c);
  }
  return out;
}

}  // namespace vfnip
