#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rational.hpp"

namespace vfnip {

// Ordered abelian groups handled here are finite lexicographic products of
// subgroups of Q, most significant summand first. Each archimedean summand is
// either Z or a localization of Z at a set of primes (possibly all, giving Q).
struct ArchSummand {
  bool discrete = false;       // Z
  bool all_divisible = false;  // Q
  std::vector<long> primes;    // sorted; denominators restricted to these

  friend bool operator==(const ArchSummand&, const ArchSummand&) = default;
};

inline ArchSummand summand_Z() { return {true, false, {}}; }
inline ArchSummand summand_Q() { return {false, true, {}}; }
inline ArchSummand summand_dense(std::vector<long> ps) {
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return {false, false, std::move(ps)};
}

inline void validate_summand(const ArchSummand& s) {
  if (s.discrete) {
    if (s.all_divisible || !s.primes.empty())
      throw input_error("discrete summand cannot carry divisible primes");
    return;
  }
  if (!s.all_divisible && s.primes.empty())
    throw input_error("dense summand needs at least one divisible prime");
  for (long q : s.primes)
    if (!is_prime(q)) throw input_error("summand prime list contains a non-prime");
  if (!std::is_sorted(s.primes.begin(), s.primes.end()) ||
      std::adjacent_find(s.primes.begin(), s.primes.end()) != s.primes.end())
    throw input_error("summand prime list must be sorted and duplicate-free");
}

inline bool summand_q_divisible(const ArchSummand& s, long q) {
  if (s.discrete) return false;
  if (s.all_divisible) return true;
  return std::binary_search(s.primes.begin(), s.primes.end(), q);
}

struct OAGDesc {
  std::vector<ArchSummand> summands;  // empty = trivial group

  size_t rank() const { return summands.size(); }
  bool trivial() const { return summands.empty(); }
  friend bool operator==(const OAGDesc&, const OAGDesc&) = default;
};

inline void validate_group(const OAGDesc& g) {
  for (const auto& s : g.summands) validate_summand(s);
}

inline OAGDesc group_Z() { return {{summand_Z()}}; }
inline OAGDesc group_Q() { return {{summand_Q()}}; }
inline OAGDesc group_trivial() { return {}; }

inline OAGDesc lex_concat(const OAGDesc& a, const OAGDesc& b) {
  OAGDesc out = a;
  out.summands.insert(out.summands.end(), b.summands.begin(), b.summands.end());
  return out;
}

// Group elements are coordinate vectors over the summands. Validity of a
// coordinate depends only on its own summand.
struct GroupElement {
  std::vector<Rat> coords;

  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(),
                       [](const Rat& r) { return r == 0; });
  }
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

inline bool coord_in_summand(const ArchSummand& s, const Rat& r) {
  if (s.discrete) return is_integer(r);
  if (s.all_divisible) return true;
  for (long q : prime_factors(den(r)))
    if (!std::binary_search(s.primes.begin(), s.primes.end(), q)) return false;
  return true;
}

inline bool element_in_group(const OAGDesc& g, const std::vector<Rat>& coords) {
  if (coords.size() != g.rank()) return false;
  for (size_t i = 0; i < coords.size(); ++i)
    if (!coord_in_summand(g.summands[i], coords[i])) return false;
  return true;
}

inline GroupElement make_element(const OAGDesc& g, std::vector<Rat> coords) {
  if (coords.size() != g.rank())
    throw input_error("element has wrong number of coordinates");
  if (!element_in_group(g, coords))
    throw input_error("coordinate not in its summand");
  return {std::move(coords)};
}

inline GroupElement zero_element(const OAGDesc& g) {
  return {std::vector<Rat>(g.rank(), Rat(0))};
}

inline GroupElement add(const GroupElement& a, const GroupElement& b) {
  if (a.coords.size() != b.coords.size())
    throw internal_error("adding elements of different groups");
  GroupElement out = a;
  for (size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += b.coords[i];
  return out;
}

inline GroupElement neg(const GroupElement& a) {
  GroupElement out = a;
  for (auto& c : out.coords) c = -c;
  return out;
}

inline GroupElement sub(const GroupElement& a, const GroupElement& b) {
  return add(a, neg(b));
}

inline GroupElement scale(const Rat& r, const GroupElement& a) {
  GroupElement out = a;
  for (auto& c : out.coords) c *= r;
  return out;
}

// Lexicographic order, most significant coordinate first.
inline int cmp(const GroupElement& a, const GroupElement& b) {
  if (a.coords.size() != b.coords.size())
    throw internal_error("comparing elements of different groups");
  for (size_t i = 0; i < a.coords.size(); ++i) {
    if (a.coords[i] < b.coords[i]) return -1;
    if (a.coords[i] > b.coords[i]) return 1;
  }
  return 0;
}

inline bool less(const GroupElement& a, const GroupElement& b) {
  return cmp(a, b) < 0;
}

struct LexLess {
  bool operator()(const GroupElement& a, const GroupElement& b) const {
    return less(a, b);
  }
};

inline bool is_positive(const GroupElement& a) {
  return cmp(a, GroupElement{std::vector<Rat>(a.coords.size(), Rat(0))}) > 0;
}

// Convex subgroups are exactly the suffixes. A cut with index i denotes the
// suffix obtained by dropping the first i summands; 0 = whole group,
// rank = trivial subgroup.
struct ConvexCut {
  size_t index = 0;
  friend bool operator==(const ConvexCut&, const ConvexCut&) = default;
};

inline size_t leading_index(const GroupElement& a) {
  for (size_t i = 0; i < a.coords.size(); ++i)
    if (a.coords[i] != 0) return i;
  throw input_error("leading index of zero element");
}

struct GammaCuts {
  ConvexCut minus;  // maximal convex subgroup not containing gamma
  ConvexCut plus;   // minimal convex subgroup containing gamma
};

inline GammaCuts gamma_cuts(const OAGDesc& g, const GroupElement& gamma) {
  if (gamma.coords.size() != g.rank())
    throw input_error("element does not belong to this group");
  size_t l = leading_index(gamma);
  return {ConvexCut{l + 1}, ConvexCut{l}};
}

inline const ArchSummand& quotient_summand(const OAGDesc& g,
                                           const GroupElement& gamma) {
  return g.summands[leading_index(gamma)];
}

// The archimedean quotient (minimal convex containing gamma) / (maximal
// convex avoiding it) is a single summand in this group class.
inline bool is_quotient_discrete(const OAGDesc& g, const GroupElement& gamma) {
  return quotient_summand(g, gamma).discrete;
}

inline bool is_p_divisible(const OAGDesc& g, long p) {
  return std::all_of(g.summands.begin(), g.summands.end(),
                     [&](const ArchSummand& s) { return summand_q_divisible(s, p); });
}

inline bool fully_divisible(const OAGDesc& g) {
  return std::all_of(g.summands.begin(), g.summands.end(),
                     [](const ArchSummand& s) { return s.all_divisible; });
}

inline bool has_min_positive(const OAGDesc& g) {
  return !g.trivial() && g.summands.back().discrete;
}

inline GroupElement min_positive(const OAGDesc& g) {
  if (!has_min_positive(g)) throw input_error("group has no minimal positive element");
  GroupElement e = zero_element(g);
  e.coords.back() = 1;
  return e;
}

inline ConvexCut max_p_divisible_convex(const OAGDesc& g, long p) {
  size_t i = g.rank();
  while (i > 0 && summand_q_divisible(g.summands[i - 1], p)) --i;
  return ConvexCut{i};
}

// Whether the minimal convex subgroup containing gamma is p-divisible; for
// this group class that is the same as [-gamma, gamma] being inside p*G.
inline bool rough_p_divisible(const OAGDesc& g, const GroupElement& gamma, long p) {
  if (gamma.is_zero()) return true;
  for (size_t i = leading_index(gamma); i < g.rank(); ++i)
    if (!summand_q_divisible(g.summands[i], p)) return false;
  return true;
}

inline bool interval_finite(const OAGDesc& g, const GroupElement& gamma) {
  if (gamma.is_zero()) return true;
  return leading_index(gamma) + 1 == g.rank() && g.summands.back().discrete;
}

// Image of gamma in G / (maximal convex avoiding gamma) is the minimum
// positive element of that quotient.
inline bool min_positive_image(const OAGDesc& g, const GroupElement& gamma) {
  if (gamma.is_zero() || !is_positive(gamma)) return false;
  size_t l = leading_index(gamma);
  return g.summands[l].discrete && gamma.coords[l] == 1;
}

inline std::pair<OAGDesc, OAGDesc> quotient_and_subgroup(const OAGDesc& g,
                                                         ConvexCut cut) {
  if (cut.index > g.rank()) throw input_error("cut index out of range");
  OAGDesc quot, sub;
  quot.summands.assign(g.summands.begin(), g.summands.begin() + cut.index);
  sub.summands.assign(g.summands.begin() + cut.index, g.summands.end());
  return {quot, sub};
}

inline GroupElement project_to_quotient(const GroupElement& a, ConvexCut cut) {
  GroupElement out;
  out.coords.assign(a.coords.begin(), a.coords.begin() + cut.index);
  return out;
}

inline GroupElement restrict_to_subgroup(const GroupElement& a, ConvexCut cut) {
  for (size_t i = 0; i < cut.index && i < a.coords.size(); ++i)
    if (a.coords[i] != 0)
      throw internal_error("element not in the convex subgroup");
  GroupElement out;
  out.coords.assign(a.coords.begin() + cut.index, a.coords.end());
  return out;
}

// Rank-1 subgroup of Q containing 1, described by per-prime valuation floors.
// An absent floor means no constraint at that prime. Membership: r belongs
// iff vq(r) >= floor(q) for every prime q. Floors are <= 0 whenever the
// description arises from rel_div_hull on this group class.
struct Rank1Desc {
  bool default_neg_inf = false;  // floor 0 at unlisted primes unless set
  std::map<long, std::optional<long>> floors;

  std::optional<long> floor_at(long q) const {
    auto it = floors.find(q);
    if (it != floors.end()) return it->second;
    if (default_neg_inf) return std::nullopt;
    return 0;
  }

  bool contains(const Rat& r) const {
    if (r == 0) return true;
    std::set<long> qs;
    for (long q : prime_factors(num(r))) qs.insert(q);
    for (long q : prime_factors(den(r))) qs.insert(q);
    for (const auto& [q, f] : floors) qs.insert(q);
    for (long q : qs) {
      auto f = floor_at(q);
      if (f && vq(q, r) < *f) return false;
    }
    return true;
  }

  void normalize() {
    for (auto it = floors.begin(); it != floors.end();) {
      bool is_default = default_neg_inf ? !it->second.has_value()
                                        : (it->second && *it->second == 0);
      it = is_default ? floors.erase(it) : std::next(it);
    }
  }

  friend bool operator==(const Rank1Desc& a, const Rank1Desc& b) {
    Rank1Desc x = a, y = b;
    x.normalize();
    y.normalize();
    return x.default_neg_inf == y.default_neg_inf && x.floors == y.floors;
  }
};

// Relative divisible hull of gamma inside the minimal convex subgroup
// containing it, normalized so that gamma maps to 1: the set of rationals r
// with r*gamma still in that subgroup. Constraints come from coordinates
// sitting in summands that are not q-divisible.
inline Rank1Desc rel_div_hull(const OAGDesc& g, const GroupElement& gamma) {
  if (gamma.coords.size() != g.rank())
    throw input_error("element does not belong to this group");
  if (gamma.is_zero()) throw input_error("hull of zero element");
  Rank1Desc out;
  std::set<long> candidate;
  bool constrained = false;
  for (size_t i = leading_index(gamma); i < g.rank(); ++i) {
    if (gamma.coords[i] == 0) continue;
    const auto& s = g.summands[i];
    if (!s.all_divisible) constrained = true;
    for (long q : prime_factors(num(gamma.coords[i]))) candidate.insert(q);
    for (long q : prime_factors(den(gamma.coords[i]))) candidate.insert(q);
    for (long q : s.primes) candidate.insert(q);
  }
  out.default_neg_inf = !constrained;
  for (long q : candidate) {
    std::optional<long> fl;  // max of -vq over constraining coordinates
    for (size_t i = leading_index(gamma); i < g.rank(); ++i) {
      if (gamma.coords[i] == 0) continue;
      if (summand_q_divisible(g.summands[i], q)) continue;
      long c = -vq(q, gamma.coords[i]);
      if (!fl || c > *fl) fl = c;
    }
    out.floors[q] = fl;
  }
  out.normalize();
  return out;
}

// Elementary equivalence to Z: discrete minimal summand below a divisible
// head. Anything non-divisible above the last summand breaks [G:qG] = q.
inline bool is_Z_group(const OAGDesc& g) {
  if (g.trivial() || !g.summands.back().discrete) return false;
  for (size_t i = 0; i + 1 < g.rank(); ++i)
    if (!g.summands[i].all_divisible) return false;
  return true;
}

}  // namespace vfnip
