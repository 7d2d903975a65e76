#pragma once

#include <string>
#include <utility>
#include <vector>

#include "valfield.hpp"

namespace vfnip {

enum class Verdict { NIP, IP, Unknown };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NIP: return "NIP";
    case Verdict::IP: return "IP";
    default: return "unknown";
  }
}

struct ClauseEval {
  std::string id;
  Tri value = Tri::Unknown;
  std::string note;
};

struct Classification {
  Verdict verdict = Verdict::Unknown;
  char case_tag = 0;  // 'a' equal characteristic, 'b'/'c' the two mixed shapes
  std::string failing;  // first definitely failing clause id
  std::string reason;
  std::vector<ClauseEval> trail;
  std::vector<std::string> missing;
};

namespace detail {

struct Cond {
  Tri v;
  std::string if_false;
  std::string if_unknown;
};

// False anywhere dominates; otherwise the first undetermined part is blamed.
inline std::pair<Tri, std::string> conj(const std::vector<Cond>& cs) {
  for (const auto& c : cs)
    if (is_false(c.v)) return {Tri::False, c.if_false};
  for (const auto& c : cs)
    if (is_unknown(c.v)) return {Tri::Unknown, c.if_unknown};
  return {Tri::True, ""};
}

inline void kaplansky_conds(std::vector<Cond>& cs, const OAGDesc& g,
                            const FieldDesc& res, long p) {
  cs.push_back({tri(is_p_divisible(g, p)),
                "value group not " + std::to_string(p) + "-divisible", ""});
  cs.push_back({is_perfect(res), "residue field imperfect",
                "residue field perfection undetermined"});
  cs.push_back({no_galois_div_p(res, p),
                "residue field has a Galois extension of degree divisible by " +
                    std::to_string(p),
                "residue field Galois " + std::to_string(p) +
                    "-extensions undetermined"});
}

}  // namespace detail

// Clause-by-clause evaluation of the dividing line. Henselianity of the input
// is NOT assumed: every quantity involved (value group, residue field, defect
// flags) is insensitive to henselization, so a definite failure refutes NIP
// outright, while an all-true trail certifies NIP of the henselization.
inline Classification evaluate_clauses(const ValuedFieldDesc& vf) {
  Classification out;
  auto flags = structural_flags(vf);
  auto res = residue_field(vf);
  auto cp = char_pair(vf);
  auto flat = flatten(vf);
  bool trivial = flat.group.trivial();
  long p = cp.residue_char;

  auto push = [&](std::string id, Tri v, std::string note) {
    out.trail.push_back({std::move(id), v, std::move(note)});
  };

  {
    Tri v = is_nip_field(res);
    push("1", v,
         is_false(v) ? "residue field has the independence property"
         : is_unknown(v) ? "residue field NIP status undetermined"
                         : "");
  }

  if (!cp.mixed()) {
    out.case_tag = 'a';
    push("2a.i", Tri::True, "equal characteristic");
    if (trivial) {
      push("2a.ii", Tri::True, "trivial valuation");
    } else if (p == 0) {
      push("2a.ii", Tri::True, "residue characteristic 0");
    } else {
      std::vector<detail::Cond> cs;
      cs.push_back({flags.sep_defectless, "not separably defectless",
                    "separable defectlessness undetermined"});
      detail::kaplansky_conds(cs, flat.group, res, p);
      auto [v, note] = detail::conj(cs);
      push("2a.ii", v, std::move(note));
    }
  } else {
    auto dec = standard_decomposition(vf);
    if (dec.quotient_discrete) {
      out.case_tag = 'b';
      push("2b.i", Tri::True, "mixed characteristic");
      push("2b.ii", Tri::True, "coarsening at p is finitely ramified");
      if (dec.delta_p.trivial()) {
        push("2b.iii", Tri::True, "valuation has rank one at p");
      } else {
        auto pf = structural_flags(dec.Kvp_vbar);
        std::vector<detail::Cond> cs;
        cs.push_back({pf.sep_defectless,
                      "residue at p not separably defectless",
                      "separable defectlessness below p undetermined"});
        detail::kaplansky_conds(cs, dec.delta_p, res, p);
        auto [v, note] = detail::conj(cs);
        push("2b.iii", v, std::move(note));
      }
    } else {
      out.case_tag = 'c';
      push("2c.i", Tri::True, "mixed characteristic");
      auto f0 = structural_flags(dec.K_v0);
      std::vector<detail::Cond> cs;
      cs.push_back({f0.defectless, "not defectless below the rank 1 part",
                    "defectlessness undetermined"});
      detail::kaplansky_conds(cs, dec.delta_0, res, p);
      auto [v, note] = detail::conj(cs);
      push("2c.ii", v, std::move(note));
    }
  }

  {
    Tri fin = is_finite_field(res);
    bool ok = trivial || (cp.mixed() && interval_finite(flat.group, *flat.vp));
    Tri v = ok              ? Tri::True
            : is_false(fin) ? Tri::True
            : is_true(fin)  ? Tri::False
                            : Tri::Unknown;
    push("3", v,
         is_false(v)     ? "finite residue field without finite ramification"
         : is_unknown(v) ? "residue field finiteness undetermined"
                         : "");
  }

  for (const auto& c : out.trail) {
    if (is_false(c.value)) {
      out.verdict = Verdict::IP;
      out.failing = c.id;
      out.reason = c.note;
      return out;
    }
  }
  for (const auto& c : out.trail)
    if (is_unknown(c.value)) out.missing.push_back("clause " + c.id + ": " + c.note);
  out.verdict = out.missing.empty() ? Verdict::NIP : Verdict::Unknown;
  return out;
}

// Same conditions, read as necessary ones: no henselianity gate, so an NIP
// verdict only means no obstruction was found.
inline Classification necessary_conditions(const ValuedFieldDesc& vf) {
  return evaluate_clauses(vf);
}

// The dividing line for henselian inputs. A definitely non-henselian
// descriptor is rejected; undetermined henselianity degrades NIP to unknown
// (the failure direction needs no henselianity).
inline Classification classify_nip(const ValuedFieldDesc& vf) {
  auto flags = structural_flags(vf);
  if (is_false(flags.henselian))
    throw input_error("classification requires a henselian valuation");
  auto out = evaluate_clauses(vf);
  if (is_unknown(flags.henselian) && out.verdict != Verdict::IP) {
    out.verdict = Verdict::Unknown;
    out.missing.insert(out.missing.begin(), "henselianity undetermined");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Residues of all coarsenings: imperfection may occur only at the canonical
// position (the cut at p in mixed characteristic, the field itself in equal
// characteristic p).

struct CoarseningAudit {
  struct Entry {
    size_t cut;
    Tri residue_perfect;
  };
  std::vector<Entry> entries;
  std::optional<size_t> allowed_cut;
  bool ok = true;
};

inline CoarseningAudit imperfect_coarsening_audit(const ValuedFieldDesc& vf) {
  CoarseningAudit out;
  auto cp = char_pair(vf);
  if (cp.mixed())
    out.allowed_cut = standard_decomposition(vf).cut_p.index;
  else if (cp.residue_char > 0)
    out.allowed_cut = 0;
  for (size_t c : legal_cuts(vf)) {
    auto pieces = coarsen_at(vf, ConvexCut{c});
    Tri perf = is_perfect(field_of(pieces.fine));
    out.entries.push_back({c, perf});
    if (is_false(perf) && !(out.allowed_cut && *out.allowed_cut == c))
      out.ok = false;
  }
  return out;
}

}  // namespace vfnip
