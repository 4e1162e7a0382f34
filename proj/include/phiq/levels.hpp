#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "phiq/integer.hpp"

namespace phiq {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  bool operator==(const PrimePower&) const = default;
};

struct Factorization {
  std::uint64_t value = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing

  bool divisible_by(std::uint64_t p) const;
};

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Canonical factorization; factorize(1) has no factors.
Factorization factorize(std::uint64_t n);

enum class CaseTag { Case1 = 1, Case2 = 2, Case3 = 3, Case4 = 4 };

const char* case_name(CaseTag tag);

/// Arithmetic of the pair (N, q) that every later stage is parameterized by.
///
/// `twelve_n` stores 12n = (q-1)Q exactly; n itself need not be integral, so
/// multiples of n are only ever taken through `n_times`.
struct LevelInvariants {
  std::uint64_t N = 1;
  std::uint64_t q = 5;
  Factorization factorization;
  unsigned nu = 0;
  int u = 0;
  int v = 0;
  Integer Q;
  Integer twelve_n;
  Integer s2;
  Integer s4;
  Integer s6;
  CaseTag case_tag = CaseTag::Case1;

  /// 2^nu
  Integer two_pow_nu() const { return pow2(nu); }

  /// k*n as an exact integer; throws DivisibilityViolation if 12 does not divide k*(12n).
  Integer n_times(const Integer& k) const;

  /// s2/2 + s4/4 + s6/6 == (q-1)Q/24 in exact rationals.
  bool mass_formula_holds() const;
};

/// Throws InvalidPrime, LevelNotCoprime, OutOfRange or InternalInconsistency.
LevelInvariants level_invariants(std::uint64_t N, std::uint64_t q);

}  // namespace phiq
