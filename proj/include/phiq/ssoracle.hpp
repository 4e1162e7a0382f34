#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phiq/compgroup.hpp"
#include "phiq/levels.hpp"

namespace phiq {

/// Arithmetic in F_q for a prime q < 2^63.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t q);

  std::uint64_t characteristic() const noexcept { return q_; }
  std::uint64_t reduce(std::int64_t v) const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t pow(std::uint64_t a, unsigned __int128 e) const;
  std::uint64_t inv(std::uint64_t a) const;
  bool is_square(std::uint64_t a) const;
  /// Tonelli-Shanks; `a` must be a square.
  std::uint64_t sqrt(std::uint64_t a) const;
  /// Smallest positive quadratic non-residue.
  std::uint64_t smallest_nonresidue() const;

 private:
  std::uint64_t q_;
};

/// a + b*theta with theta^2 = d, d the smallest non-residue mod q.
struct QuadElement {
  std::uint64_t a = 0;
  std::uint64_t b = 0;

  bool operator==(const QuadElement&) const = default;
  auto operator<=>(const QuadElement&) const = default;
  bool in_base_field() const { return b == 0; }
};

class QuadExtField {
 public:
  explicit QuadExtField(std::uint64_t q);

  const PrimeField& base() const noexcept { return fp_; }
  std::uint64_t nonresidue() const noexcept { return d_; }

  QuadElement from_base(std::uint64_t a) const { return {a % fp_.characteristic(), 0}; }
  QuadElement add(const QuadElement& x, const QuadElement& y) const;
  QuadElement sub(const QuadElement& x, const QuadElement& y) const;
  QuadElement mul(const QuadElement& x, const QuadElement& y) const;
  QuadElement inv(const QuadElement& x) const;
  QuadElement pow(QuadElement x, unsigned __int128 e) const;
  /// x^q, i.e. conjugation a + b*theta -> a - b*theta.
  QuadElement frobenius(const QuadElement& x) const;
  std::string to_string(const QuadElement& x) const;

 private:
  PrimeField fp_;
  std::uint64_t d_;
};

/// Dense polynomial over F_q, lowest degree first, no trailing zeros.
using FpPoly = std::vector<std::uint64_t>;

/// H(x) = sum_{i=0}^{m} binom(m,i)^2 x^i mod q, m = (q-1)/2.
FpPoly deuring_polynomial(std::uint64_t q);

struct SsPoint {
  QuadElement j;
  int aut_order = 2;  // 2, 4 or 6
};

struct SsCatalog {
  std::uint64_t q = 0;
  std::uint64_t nonresidue = 0;
  std::vector<SsPoint> points;                        // sorted by j
  std::vector<std::vector<std::size_t>> frobenius_orbits;  // singletons and pairs

  std::size_t count_with_aut(int order) const;
};

/// Supersingular j-invariants of characteristic q, all lying in F_{q^2}.
SsCatalog ss_catalog(std::uint64_t q, std::uint64_t seed = 0x5eed);

/// Level-1 counts and Frobenius behaviour against the mass-formula invariants.
VerificationReport check_mass_formula_level1(const SsCatalog& cat, const LevelInvariants& inv);

}  // namespace phiq
