#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>

namespace oag {

// Exact arithmetic everywhere: arbitrary-precision integers and rationals.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int gcd_i(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

// lcm with the convention lcm(0, a) = 0: a zero divisor means "coordinate
// forced to zero", which absorbs any further divisibility constraint.
inline Int lcm_i(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

// d | x with d = 0 read as "x must be 0".
inline bool divides(const Int& d, const Int& x) {
  if (d == 0) return x == 0;
  return x % d == 0;
}

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rat& q) { return den(q) == 1; }

inline Int to_int(const Rat& q) {
  if (!is_integer(q)) throw std::logic_error("to_int: rational is not integral");
  return num(q);
}

// p-adic valuation of a nonzero integer; valuation of 0 is represented by -1
// standing in for +infinity at the call sites that need it.
inline long vp(Int x, const Int& p) {
  if (x == 0) return -1;
  long v = 0;
  while (x % p == 0) { x /= p; ++v; }
  return v;
}

inline long vp(const Rat& q, const Int& p) {
  if (q == 0) return -1;
  return vp(num(q), p) - vp(den(q), p);
}

// v_p(x) >= v_p(d): divisibility in the localization of Z at p.
inline bool divides_local(const Int& d, const Rat& x, const Int& p) {
  if (d == 0) return x == 0;
  if (x == 0) return true;
  return vp(x, p) >= vp(d, p);
}

inline Int mod_norm(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Inverse of a mod m for gcd(a, m) = 1; inv mod 1 is 0.
inline Int inv_mod(const Int& a, const Int& m) {
  if (m == 1) return 0;
  Int old_r = mod_norm(a, m), r = m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int t = old_r - q * r; old_r = r; r = t;
    t = old_s - q * s; old_s = s; s = t;
  }
  if (old_r != 1) throw std::logic_error("inv_mod: not invertible");
  return mod_norm(old_s, m);
}

inline Int pow_i(const Int& b, unsigned e) {
  Int r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

// Strips every factor of p (used to canonicalize divisors over Z_(p), where
// p-coprime factors are units).
inline Int p_part(const Int& x, const Int& p) {
  if (x == 0) return 0;
  long v = vp(x, p);
  return pow_i(p, static_cast<unsigned>(v));
}

}  // namespace oag
