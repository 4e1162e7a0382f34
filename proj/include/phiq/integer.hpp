#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace phiq {

// Exact integers everywhere; entries of Smith forms outgrow machine words quickly.
using Integer = mpz_class;
using Rational = mpq_class;

inline Integer to_integer(std::uint64_t v) {
  Integer r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

inline Integer to_integer(std::int64_t v) {
  if (v >= 0) return to_integer(static_cast<std::uint64_t>(v));
  // -(v+1) avoids overflow at INT64_MIN
  Integer r = to_integer(static_cast<std::uint64_t>(-(v + 1)));
  return -r - 1;
}

inline Integer to_integer(int v) { return Integer(v); }

inline std::string to_string(const Integer& v) { return v.get_str(); }

// Least nonnegative residue; modulus 0 leaves the value untouched (free coordinate).
inline Integer reduce_mod(const Integer& v, const Integer& m) {
  if (m == 0) return v;
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  if (r < 0) r += abs(m);
  return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Extended gcd: returns g = gcd(a, b) >= 0 with s*a + t*b = g.
inline Integer xgcd(const Integer& a, const Integer& b, Integer& s, Integer& t) {
  Integer g;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline bool divides(const Integer& d, const Integer& v) {
  if (d == 0) return v == 0;
  return mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Integer pow2(unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

}  // namespace phiq
