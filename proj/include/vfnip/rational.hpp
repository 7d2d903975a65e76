#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace vfnip {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inconsistency that should have been caught earlier or a broken internal
// invariant; the CLI maps this to a distinct exit code.
struct internal_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rat& r) { return den(r) == 1; }

// q-adic valuation of a nonzero rational; q prime.
inline long vq(long q, const Rat& r) {
  if (r == 0) throw internal_error("vq of zero");
  long v = 0;
  Int n = num(r) < 0 ? Int(-num(r)) : num(r);
  Int d = den(r);
  while (n % q == 0) { n /= q; ++v; }
  while (d % q == 0) { d /= q; --v; }
  return v;
}

inline bool is_prime(long q) {
  if (q < 2) return false;
  for (long d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

inline std::vector<long> prime_factors(Int n) {
  if (n < 0) n = -n;
  std::vector<long> out;
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(static_cast<long>(d));
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(static_cast<long>(n));
  return out;
}

inline std::string rat_str(const Rat& r) {
  std::string s = num(r).str();
  if (!is_integer(r)) s += "/" + den(r).str();
  return s;
}

}  // namespace vfnip
