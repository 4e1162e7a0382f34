#include "phiq/levels.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "phiq/error.hpp"

namespace phiq {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto f = [&](u64 t) { return (mul_mod(t, t, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void collect_factors(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  u64 d = pollard_rho(n);
  collect_factors(d, out);
  collect_factors(n / d, out);
}

}  // namespace

bool Factorization::divisible_by(std::uint64_t p) const {
  return std::any_of(factors.begin(), factors.end(),
                     [p](const PrimePower& f) { return f.prime == p; });
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a proven witness set below 3.3e24.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::OutOfRange, "factorize requires a positive integer");
  std::map<u64, unsigned> m;
  collect_factors(n, m);
  Factorization f;
  f.value = n;
  for (auto [p, e] : m) f.factors.push_back({p, e});
  return f;
}

const char* case_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::Case1: return "Case1";
    case CaseTag::Case2: return "Case2";
    case CaseTag::Case3: return "Case3";
    case CaseTag::Case4: return "Case4";
  }
  return "?";
}

Integer LevelInvariants::n_times(const Integer& k) const {
  Integer t = k * twelve_n;
  if (!divides(Integer(12), t)) {
    std::ostringstream os;
    os << k << "n is not an integer for (N=" << N << ", q=" << q << "), 12n=" << twelve_n;
    throw Error(ErrorKind::DivisibilityViolation, os.str());
  }
  return t / 12;
}

bool LevelInvariants::mass_formula_holds() const {
  Rational lhs = Rational(s2, 2) + Rational(s4, 4) + Rational(s6, 6);
  lhs.canonicalize();
  Rational rhs(to_integer(q - 1) * Q, 24);
  rhs.canonicalize();
  return lhs == rhs;
}

LevelInvariants level_invariants(std::uint64_t N, std::uint64_t q) {
  if (N == 0) throw Error(ErrorKind::OutOfRange, "level N must be positive");
  if (q < 5 || !is_prime(q)) {
    throw Error(ErrorKind::InvalidPrime, "q=" + std::to_string(q) + " is not a prime >= 5");
  }
  if (N % q == 0) {
    throw Error(ErrorKind::LevelNotCoprime,
                "q=" + std::to_string(q) + " divides N=" + std::to_string(N));
  }

  LevelInvariants inv;
  inv.N = N;
  inv.q = q;
  inv.factorization = factorize(N);

  bool has_p3mod4 = false;
  bool has_p2mod3 = false;
  inv.Q = 1;
  for (const auto& [p, e] : inv.factorization.factors) {
    if (p != 2 && p != 3) ++inv.nu;
    if (p % 4 == 3) has_p3mod4 = true;
    if (p % 3 == 2) has_p2mod3 = true;
    Integer pp = to_integer(p);
    Integer pk;
    mpz_pow_ui(pk.get_mpz_t(), pp.get_mpz_t(), e - 1);
    inv.Q *= pk * (pp + 1);
  }

  inv.u = (q % 4 == 1 || N % 4 == 0 || has_p3mod4) ? 0 : 1;
  inv.v = (q % 3 == 1 || N % 9 == 0 || has_p2mod3) ? 0 : 1;

  inv.twelve_n = to_integer(q - 1) * inv.Q;
  inv.s4 = inv.u * inv.two_pow_nu();
  inv.s6 = inv.v * inv.two_pow_nu();

  // 12*s2 = 12n - 6*s4 - 4*s6
  Integer twelve_s2 = inv.twelve_n - 6 * inv.s4 - 4 * inv.s6;
  if (twelve_s2 < 0 || !divides(Integer(12), twelve_s2)) {
    std::ostringstream os;
    os << "mass formula gives s2=" << twelve_s2 << "/12 for (N=" << N << ", q=" << q << ")";
    throw Error(ErrorKind::InternalInconsistency, os.str());
  }
  inv.s2 = twelve_s2 / 12;
  if (!inv.mass_formula_holds()) {
    throw Error(ErrorKind::InternalInconsistency, "mass formula does not balance");
  }

  if ((inv.u == 0 && inv.v == 0) || inv.nu == 0) {
    inv.case_tag = CaseTag::Case1;
  } else if (inv.u == 0) {
    inv.case_tag = CaseTag::Case2;
  } else if (inv.v == 0) {
    inv.case_tag = CaseTag::Case3;
  } else {
    inv.case_tag = CaseTag::Case4;
  }
  return inv;
}

}  // namespace phiq
