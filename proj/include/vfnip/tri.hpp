#pragma once

#include <optional>
#include <string>

namespace vfnip {

// Three-valued logic. Unknown means "not determined by the given data",
// never "don't care": it must propagate, and a definite False dominates it
// in conjunctions.
enum class Tri { False, True, Unknown };

constexpr Tri tri(bool b) { return b ? Tri::True : Tri::False; }

constexpr Tri tri_not(Tri a) {
  switch (a) {
    case Tri::False: return Tri::True;
    case Tri::True: return Tri::False;
    default: return Tri::Unknown;
  }
}

constexpr Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::True && b == Tri::True) return Tri::True;
  return Tri::Unknown;
}

constexpr Tri tri_or(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True) return Tri::True;
  if (a == Tri::False && b == Tri::False) return Tri::False;
  return Tri::Unknown;
}

constexpr bool is_true(Tri a) { return a == Tri::True; }
constexpr bool is_false(Tri a) { return a == Tri::False; }
constexpr bool is_unknown(Tri a) { return a == Tri::Unknown; }

inline Tri from_opt(std::optional<bool> b) {
  return b ? tri(*b) : Tri::Unknown;
}

inline std::optional<bool> to_opt(Tri a) {
  if (a == Tri::Unknown) return std::nullopt;
  return a == Tri::True;
}

inline std::string to_string(Tri a) {
  switch (a) {
    case Tri::False: return "false";
    case Tri::True: return "true";
    default: return "unknown";
  }
}

// Two Tri values clash when one is definitely true and the other definitely
// false. Used by invariance tests: unknown never clashes.
constexpr bool tri_consistent(Tri a, Tri b) {
  return !((a == Tri::True && b == Tri::False) ||
           (a == Tri::False && b == Tri::True));
}

}  // namespace vfnip
