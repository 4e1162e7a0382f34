#include "phiq/ssoracle.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "phiq/error.hpp"

namespace phiq {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

PrimeField::PrimeField(u64 q) : q_(q) {
  if (q < 5 || !is_prime(q) || q >= (u64{1} << 63))
    throw Error(ErrorKind::InvalidPrime, "field characteristic " + std::to_string(q));
}

u64 PrimeField::reduce(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(q_);
  return static_cast<u64>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
}

u64 PrimeField::add(u64 a, u64 b) const {
  u64 s = a + b;
  return s >= q_ ? s - q_ : s;
}

u64 PrimeField::sub(u64 a, u64 b) const { return a >= b ? a - b : a + q_ - b; }

u64 PrimeField::mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % q_); }

u64 PrimeField::pow(u64 a, u128 e) const {
  u64 r = 1;
  a %= q_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

u64 PrimeField::inv(u64 a) const {
  if (a % q_ == 0) throw Error(ErrorKind::InternalInconsistency, "inverse of zero in F_q");
  return pow(a, q_ - 2);
}

bool PrimeField::is_square(u64 a) const { return a % q_ == 0 || pow(a, (q_ - 1) / 2) == 1; }

u64 PrimeField::smallest_nonresidue() const {
  for (u64 d = 2;; ++d)
    if (!is_square(d)) return d;
}

u64 PrimeField::sqrt(u64 a) const {
  a %= q_;
  if (a == 0) return 0;
  if (!is_square(a)) throw Error(ErrorKind::InternalInconsistency, "sqrt of a non-residue");
  u64 s = 0, odd = q_ - 1;
  while ((odd & 1) == 0) {
    odd >>= 1;
    ++s;
  }
  u64 z = smallest_nonresidue();
  u64 m = s, c = pow(z, odd), t = pow(a, odd), r = pow(a, (odd + 1) / 2);
  while (t != 1) {
    u64 i = 0, tt = t;
    while (tt != 1) {
      tt = mul(tt, tt);
      ++i;
    }
    u64 b = c;
    for (u64 k = 0; k + i + 1 < m; ++k) b = mul(b, b);
    m = i;
    c = mul(b, b);
    t = mul(t, c);
    r = mul(r, b);
  }
  return std::min(r, neg(r));
}

QuadExtField::QuadExtField(u64 q) : fp_(q), d_(fp_.smallest_nonresidue()) {}

QuadElement QuadExtField::add(const QuadElement& x, const QuadElement& y) const {
  return {fp_.add(x.a, y.a), fp_.add(x.b, y.b)};
}

QuadElement QuadExtField::sub(const QuadElement& x, const QuadElement& y) const {
  return {fp_.sub(x.a, y.a), fp_.sub(x.b, y.b)};
}

QuadElement QuadExtField::mul(const QuadElement& x, const QuadElement& y) const {
  u64 a = fp_.add(fp_.mul(x.a, y.a), fp_.mul(d_, fp_.mul(x.b, y.b)));
  u64 b = fp_.add(fp_.mul(x.a, y.b), fp_.mul(x.b, y.a));
  return {a, b};
}

QuadElement QuadExtField::inv(const QuadElement& x) const {
  // 1/(a + b theta) = (a - b theta) / (a^2 - d b^2)
  u64 norm = fp_.sub(fp_.mul(x.a, x.a), fp_.mul(d_, fp_.mul(x.b, x.b)));
  u64 ni = fp_.inv(norm);
  return {fp_.mul(x.a, ni), fp_.mul(fp_.neg(x.b), ni)};
}

QuadElement QuadExtField::pow(QuadElement x, u128 e) const {
  QuadElement r{1, 0};
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

QuadElement QuadExtField::frobenius(const QuadElement& x) const { return {x.a, fp_.neg(x.b)}; }

std::string QuadExtField::to_string(const QuadElement& x) const {
  if (x.b == 0) return std::to_string(x.a);
  std::ostringstream os;
  if (x.a != 0) os << x.a << "+";
  os << x.b << "*theta";
  return os.str();
}

namespace {

// Polynomial arithmetic over F_q.
class PolyRing {
 public:
  explicit PolyRing(const PrimeField& f) : f_(f) {}

  static void trim(FpPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  }
  static long degree(const FpPoly& p) { return static_cast<long>(p.size()) - 1; }

  FpPoly sub(FpPoly a, const FpPoly& b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = f_.sub(a[i], b[i]);
    trim(a);
    return a;
  }

  FpPoly mul(const FpPoly& a, const FpPoly& b) const {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f_.add(r[i + j], f_.mul(a[i], b[j]));
    }
    trim(r);
    return r;
  }

  // a = q*b + r
  void divmod(FpPoly a, const FpPoly& b, FpPoly& quo, FpPoly& rem) const {
    if (b.empty()) throw Error(ErrorKind::InternalInconsistency, "polynomial division by zero");
    trim(a);
    const u64 lead_inv = f_.inv(b.back());
    quo.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    while (a.size() >= b.size() && !a.empty()) {
      const std::size_t shift = a.size() - b.size();
      const u64 c = f_.mul(a.back(), lead_inv);
      quo[shift] = c;
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = f_.sub(a[shift + i], f_.mul(c, b[i]));
      trim(a);
    }
    rem = std::move(a);
    trim(quo);
  }

  FpPoly mod(const FpPoly& a, const FpPoly& b) const {
    FpPoly q, r;
    divmod(a, b, q, r);
    return r;
  }

  FpPoly div(const FpPoly& a, const FpPoly& b) const {
    FpPoly q, r;
    divmod(a, b, q, r);
    if (!r.empty()) throw Error(ErrorKind::InternalInconsistency, "inexact polynomial division");
    return q;
  }

  FpPoly monic(FpPoly p) const {
    if (p.empty()) return p;
    const u64 li = f_.inv(p.back());
    for (auto& c : p) c = f_.mul(c, li);
    return p;
  }

  FpPoly gcd(FpPoly a, FpPoly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      FpPoly r = mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }

  FpPoly powmod(FpPoly base, u128 e, const FpPoly& m) const {
    FpPoly r{1};
    base = mod(base, m);
    while (e) {
      if (e & 1) r = mod(mul(r, base), m);
      base = mod(mul(base, base), m);
      e >>= 1;
    }
    return mod(r, m);
  }

  FpPoly derivative(const FpPoly& p) const {
    FpPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(f_.mul(p[i], i % f_.characteristic()));
    trim(d);
    return d;
  }

  u64 eval(const FpPoly& p, u64 x) const {
    u64 acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = f_.add(f_.mul(acc, x), p[i]);
    return acc;
  }

 private:
  const PrimeField& f_;
};

// Cantor-Zassenhaus splitting of a squarefree product of monic degree-`deg` irreducibles.
void equal_degree_split(const PolyRing& ring, const PrimeField& fp, const FpPoly& f, int deg,
                        std::mt19937_64& rng, std::vector<FpPoly>& out) {
  const long n = PolyRing::degree(f);
  if (n <= 0) return;
  if (n == deg) {
    out.push_back(f);
    return;
  }
  const u64 q = fp.characteristic();
  u128 qd = 1;
  for (int i = 0; i < deg; ++i) qd *= q;
  const u128 e = (qd - 1) / 2;
  std::uniform_int_distribution<u64> dist(0, q - 1);
  for (;;) {
    FpPoly a{dist(rng), 1};  // x + c
    FpPoly h = ring.powmod(a, e, f);
    h = ring.sub(h, FpPoly{1});
    FpPoly g = ring.gcd(f, h);
    const long dg = PolyRing::degree(g);
    if (dg > 0 && dg < n) {
      equal_degree_split(ring, fp, g, deg, rng, out);
      equal_degree_split(ring, fp, ring.div(f, g), deg, rng, out);
      return;
    }
  }
}

}  // namespace

FpPoly deuring_polynomial(u64 q) {
  PrimeField fp(q);
  const u64 m = (q - 1) / 2;
  FpPoly h(m + 1);
  u64 binom = 1;
  for (u64 i = 0; i <= m; ++i) {
    if (i > 0) binom = fp.mul(fp.mul(binom, (m - i + 1) % q), fp.inv(i % q));
    h[i] = fp.mul(binom, binom);
  }
  PolyRing::trim(h);
  return h;
}

std::size_t SsCatalog::count_with_aut(int order) const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [order](const SsPoint& p) { return p.aut_order == order; }));
}

SsCatalog ss_catalog(u64 q, u64 seed) {
  if (q > 200000) throw Error(ErrorKind::OutOfRange, "catalog enumeration limited to q <= 200000");
  QuadExtField fq2(q);
  const PrimeField& fp = fq2.base();
  PolyRing ring(fp);
  FpPoly h = deuring_polynomial(q);

  if (ring.eval(h, 0) == 0 || ring.eval(h, 1) == 0)
    throw Error(ErrorKind::InternalInconsistency, "Deuring polynomial vanishes at 0 or 1");
  if (PolyRing::degree(ring.gcd(h, ring.derivative(h))) != 0)
    throw Error(ErrorKind::InternalInconsistency, "Deuring polynomial is not squarefree");

  h = ring.monic(h);
  const FpPoly x{0, 1};
  FpPoly xq = ring.powmod(x, q, h);
  FpPoly linear = ring.gcd(h, ring.sub(xq, x));
  FpPoly quadratic = ring.div(h, linear);
  if (PolyRing::degree(quadratic) > 0) {
    FpPoly xq2 = ring.powmod(x, static_cast<u128>(q) * q, quadratic);
    if (xq2 != x) throw Error(ErrorKind::InternalInconsistency, "Deuring root outside F_{q^2}");
  }

  std::mt19937_64 rng(seed);
  std::vector<FpPoly> lin_factors, quad_factors;
  equal_degree_split(ring, fp, linear, 1, rng, lin_factors);
  equal_degree_split(ring, fp, quadratic, 2, rng, quad_factors);

  std::vector<QuadElement> lambdas;
  for (const auto& f : lin_factors) lambdas.push_back(fq2.from_base(fp.neg(f[0])));
  const u64 d = fq2.nonresidue();
  const u64 half = fp.inv(2);
  for (const auto& f : quad_factors) {
    // x^2 + b x + c, discriminant a non-residue
    const u64 b = f[1], c = f[0];
    const u64 disc = fp.sub(fp.mul(b, b), fp.mul(4, c));
    const u64 s = fp.sqrt(fp.mul(disc, fp.inv(d)));
    const u64 re = fp.mul(fp.neg(b), half), im = fp.mul(s, half);
    lambdas.push_back({re, im});
    lambdas.push_back({re, fp.neg(im)});
  }

  std::map<QuadElement, int> js;
  const QuadElement one{1, 0};
  for (const auto& l : lambdas) {
    // j = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)
    QuadElement l2 = fq2.mul(l, l);
    QuadElement num = fq2.add(fq2.sub(l2, l), one);
    num = fq2.mul(fq2.mul(num, num), num);
    num = fq2.mul(fq2.from_base(256), num);
    QuadElement lm1 = fq2.sub(l, one);
    QuadElement den = fq2.mul(l2, fq2.mul(lm1, lm1));
    js.emplace(fq2.mul(num, fq2.inv(den)), 0);
  }

  SsCatalog cat;
  cat.q = q;
  cat.nonresidue = d;
  const QuadElement j0{0, 0}, j1728 = fq2.from_base(1728);
  for (const auto& [j, unused] : js) {
    int aut = 2;
    if (j == j0) aut = 6;
    else if (j == j1728) aut = 4;
    cat.points.push_back({j, aut});
  }
  for (std::size_t i = 0; i < cat.points.size(); ++i) {
    const QuadElement fj = fq2.frobenius(cat.points[i].j);
    if (fj == cat.points[i].j) {
      cat.frobenius_orbits.push_back({i});
      continue;
    }
    auto it = std::lower_bound(cat.points.begin(), cat.points.end(), fj,
                               [](const SsPoint& p, const QuadElement& v) { return p.j < v; });
    if (it == cat.points.end() || it->j != fj)
      throw Error(ErrorKind::InternalInconsistency, "Frobenius leaves the supersingular set");
    const std::size_t k = static_cast<std::size_t>(it - cat.points.begin());
    if (i < k) cat.frobenius_orbits.push_back({i, k});
  }
  return cat;
}

VerificationReport check_mass_formula_level1(const SsCatalog& cat, const LevelInvariants& inv) {
  VerificationReport rep;
  auto count_check = [&](const char* name, int aut, const Integer& expected) {
    const Integer got = to_integer(static_cast<std::uint64_t>(cat.count_with_aut(aut)));
    std::ostringstream os;
    os << "#{aut " << aut << "} = " << got << ", expected " << expected;
    rep.checks.push_back({name, got == expected, os.str()});
  };
  rep.checks.push_back({"level_one", inv.N == 1 && inv.q == cat.q, "invariants describe (1, q)"});
  count_check("s2", 2, inv.s2);
  count_check("s4", 4, inv.s4);
  count_check("s6", 6, inv.s6);

  Rational lhs = Rational(static_cast<unsigned long>(cat.count_with_aut(2)), 2) +
                 Rational(static_cast<unsigned long>(cat.count_with_aut(4)), 4) +
                 Rational(static_cast<unsigned long>(cat.count_with_aut(6)), 6);
  Rational rhs(to_integer(cat.q - 1), 24);
  lhs.canonicalize();
  rhs.canonicalize();
  rep.checks.push_back({"mass_formula", lhs == rhs, "sum 1/#Aut = " + lhs.get_str() + " vs " + rhs.get_str()});

  QuadExtField fq2(cat.q);
  bool involution = true;
  std::size_t covered = 0;
  for (const auto& orbit : cat.frobenius_orbits) {
    covered += orbit.size();
    const QuadElement& j = cat.points[orbit.front()].j;
    const QuadElement& image = cat.points[orbit.back()].j;
    involution = involution && fq2.frobenius(j) == image && fq2.frobenius(image) == j;
  }
  involution = involution && covered == cat.points.size();
  rep.checks.push_back({"frobenius_involution", involution, "j -> j^q squares to the identity"});

  bool special_fixed = true;
  for (const auto& p : cat.points)
    if (p.aut_order != 2) special_fixed = special_fixed && p.j.in_base_field();
  rep.checks.push_back({"special_points_fixed", special_fixed, "j = 0, 1728 lie in F_q"});
  return rep;
}

}  // namespace phiq
