#pragma once

#include <optional>
#include <variant>

#include "rational.hpp"
#include "tri.hpp"

namespace vfnip {

// Imperfection degree: [k : k^p] = p^e, possibly infinite.
struct ImpDeg {
  bool inf = false;
  long e = 0;

  static ImpDeg finite(long e) { return {false, e}; }
  static ImpDeg infinite() { return {true, 0}; }
  bool positive() const { return inf || e > 0; }
  friend bool operator==(const ImpDeg&, const ImpDeg&) = default;
};

struct FiniteField {
  long p = 2;
  long d = 1;  // q = p^d
  friend bool operator==(const FiniteField&, const FiniteField&) = default;
};

struct AlgClosedField {
  long char_p = 0;
  friend bool operator==(const AlgClosedField&, const AlgClosedField&) = default;
};

struct RealClosedField {
  friend bool operator==(const RealClosedField&, const RealClosedField&) = default;
};

struct SepClosedField {
  long p = 2;
  ImpDeg e;  // > 0; degree 0 is the algebraically closed case
  friend bool operator==(const SepClosedField&, const SepClosedField&) = default;
};

// A field given only by its first-order invariants. no_p_ext means: no Galois
// extension of degree divisible by the characteristic. The flag is only
// meaningful in positive characteristic.
struct AbstractField {
  long char_p = 0;
  Tri perfect = Tri::Unknown;
  std::optional<ImpDeg> imp;
  Tri no_p_ext = Tri::Unknown;
  Tri nip = Tri::Unknown;
  friend bool operator==(const AbstractField&, const AbstractField&) = default;
};

using FieldDesc = std::variant<FiniteField, AlgClosedField, RealClosedField,
                               SepClosedField, AbstractField>;

inline long field_char(const FieldDesc& f) {
  return std::visit(
      [](const auto& v) -> long {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteField>) return v.p;
        else if constexpr (std::is_same_v<T, AlgClosedField>) return v.char_p;
        else if constexpr (std::is_same_v<T, RealClosedField>) return 0;
        else if constexpr (std::is_same_v<T, SepClosedField>) return v.p;
        else return v.char_p;
      },
      f);
}

inline Tri is_perfect(const FieldDesc& f) {
  return std::visit(
      [](const auto& v) -> Tri {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SepClosedField>)
          return tri(!v.e.positive());
        else if constexpr (std::is_same_v<T, AbstractField>) {
          if (v.char_p == 0) return Tri::True;
          return v.perfect;
        } else
          return Tri::True;
      },
      f);
}

inline std::optional<ImpDeg> imp_degree(const FieldDesc& f) {
  return std::visit(
      [](const auto& v) -> std::optional<ImpDeg> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SepClosedField>) return v.e;
        else if constexpr (std::is_same_v<T, AbstractField>) {
          if (v.char_p == 0) return ImpDeg::finite(0);
          return v.imp;
        } else
          return ImpDeg::finite(0);
      },
      f);
}

// No Galois extension of degree divisible by p. Queried with p equal to the
// residue characteristic in every use site; characteristic 0 is vacuous.
inline Tri no_galois_div_p(const FieldDesc& f, long p) {
  return std::visit(
      [&](const auto& v) -> Tri {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteField>)
          return Tri::False;  // F_{q^p}/F_q is Galois of degree p
        else if constexpr (std::is_same_v<T, AlgClosedField>)
          return Tri::True;
        else if constexpr (std::is_same_v<T, RealClosedField>)
          return tri(p != 2);
        else if constexpr (std::is_same_v<T, SepClosedField>)
          return Tri::True;  // Galois extensions are separable
        else {
          if (v.char_p == 0) return Tri::True;
          if (p != v.char_p) return Tri::Unknown;
          return v.no_p_ext;
        }
      },
      f);
}

inline Tri is_nip_field(const FieldDesc& f) {
  return std::visit(
      [](const auto& v) -> Tri {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AbstractField>) return v.nip;
        else return Tri::True;
      },
      f);
}

inline Tri is_finite_field(const FieldDesc& f) {
  return std::visit(
      [](const auto& v) -> Tri {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteField>) return Tri::True;
        else if constexpr (std::is_same_v<T, AbstractField>) {
          if (v.char_p == 0) return Tri::False;
          if (v.imp && v.imp->positive()) return Tri::False;
          if (is_true(v.no_p_ext)) return Tri::False;
          if (is_false(v.perfect)) return Tri::False;
          if (is_false(v.nip)) return Tri::False;  // finite fields are NIP
          return Tri::Unknown;
        } else
          return Tri::False;
      },
      f);
}

inline std::optional<ImpDeg> imperfection(const FieldDesc& f) {
  return std::visit(
      [](const auto& v) -> std::optional<ImpDeg> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SepClosedField>) return v.e;
        else if constexpr (std::is_same_v<T, AbstractField>) {
          if (v.char_p == 0) return ImpDeg::finite(0);
          if (v.imp) return v.imp;
          if (is_true(v.perfect)) return ImpDeg::finite(0);
          return std::nullopt;
        } else
          return ImpDeg::finite(0);
      },
      f);
}

// Canonicalization plus consistency checks. For abstract descriptors this
// also applies the forcing rule: an infinite NIP field of characteristic p
// admits no Galois extension of degree divisible by p, with positive known
// imperfection degree serving as the infiniteness witness.
inline FieldDesc normalize_field(FieldDesc f) {
  if (auto* s = std::get_if<SepClosedField>(&f)) {
    if (!is_prime(s->p)) throw input_error("separably closed field needs prime characteristic");
    if (!s->e.inf && s->e.e < 0) throw input_error("negative imperfection degree");
    if (!s->e.positive()) return AlgClosedField{s->p};
    return f;
  }
  if (auto* ff = std::get_if<FiniteField>(&f)) {
    if (!is_prime(ff->p) || ff->d < 1) throw input_error("bad finite field parameters");
    return f;
  }
  if (auto* ac = std::get_if<AlgClosedField>(&f)) {
    if (ac->char_p != 0 && !is_prime(ac->char_p))
      throw input_error("bad characteristic");
    return f;
  }
  auto* a = std::get_if<AbstractField>(&f);
  if (!a) return f;
  if (a->char_p != 0 && !is_prime(a->char_p)) throw input_error("bad characteristic");
  if (a->imp && !a->imp->inf && a->imp->e < 0)
    throw input_error("negative imperfection degree");
  if (a->char_p == 0) {
    if (a->imp && a->imp->positive())
      throw input_error("characteristic 0 field cannot be imperfect");
    if (is_false(a->perfect))
      throw input_error("characteristic 0 field cannot be imperfect");
    a->perfect = Tri::True;
    a->imp = ImpDeg::finite(0);
    a->no_p_ext = Tri::True;  // vacuous
    return f;
  }
  if (a->imp) {
    if (a->imp->positive()) {
      if (is_true(a->perfect))
        throw input_error("perfect field with positive imperfection degree");
      a->perfect = Tri::False;
    } else {
      if (is_false(a->perfect))
        throw input_error("imperfect field with imperfection degree 0");
      a->perfect = Tri::True;
    }
  } else if (is_true(a->perfect)) {
    a->imp = ImpDeg::finite(0);
  }
  if (is_true(a->nip) && a->imp && a->imp->positive()) {
    if (is_false(a->no_p_ext))
      throw input_error(
          "inconsistent descriptor: an infinite NIP field of characteristic p "
          "admits no Galois extension of degree divisible by p");
    a->no_p_ext = Tri::True;
  }
  return f;
}

struct FieldReport {
  long char_p;
  Tri perfect;
  std::optional<ImpDeg> imp;
  Tri no_p_ext;
  Tri nip;
  Tri finite;
};

inline FieldReport field_predicates(const FieldDesc& f) {
  return {field_char(f), is_perfect(f),     imp_degree(f),
          no_galois_div_p(f, field_char(f) == 0 ? 2 : field_char(f)),
          is_nip_field(f), is_finite_field(f)};
}

}  // namespace vfnip
