#pragma once

// Brute-force oracles shared by the unit tests and the acceptance binary.
// Nothing here calls the Smith normal form code.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "phiq/abelian.hpp"
#include "phiq/compgroup.hpp"
#include "phiq/levels.hpp"

namespace phiq::testing {

/// Calls f on every x with 0 <= x_i < moduli_i, in lexicographic order.
inline void for_each_element(const std::vector<Integer>& moduli,
                             const std::function<void(const std::vector<Integer>&)>& f) {
  std::vector<Integer> x(moduli.size(), 0);
  for (;;) {
    f(x);
    std::size_t i = 0;
    for (; i < x.size(); ++i) {
      if (++x[i] < moduli[i]) break;
      x[i] = 0;
    }
    if (i == x.size()) return;
  }
}

inline Integer laplace_det(const std::vector<std::vector<Integer>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Integer det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    std::vector<std::vector<Integer>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    Integer term = m[0][c] * laplace_det(minor);
    det += (c % 2 == 0) ? term : Integer(-term);
  }
  return det;
}

inline void choose(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                   std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    choose(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// Nontrivial invariant factors via determinantal divisors d_k = gcd of k x k minors.
/// Free rank shows up as a 0 factor. Only for small matrices.
inline std::vector<Integer> invariant_factors_by_minors(const IntMatrix& a) {
  const std::size_t n = a.cols();
  std::vector<Integer> d{1};
  for (std::size_t k = 1; k <= std::min(a.rows(), n); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    choose(a.rows(), k, 0, cur, rs);
    choose(n, k, 0, cur, cs);
    Integer g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        std::vector<std::vector<Integer>> m(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m[i][j] = a(r[i], c[j]);
        Integer det = laplace_det(m);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), det.get_mpz_t());
      }
    if (g == 0) break;
    d.push_back(g);
  }
  std::vector<Integer> out;
  for (std::size_t k = 1; k < d.size(); ++k) {
    Integer s = d[k] / d[k - 1];
    if (s != 1) out.push_back(s);
  }
  for (std::size_t k = d.size() - 1; k < n; ++k) out.push_back(0);
  return out;
}

/// |Phi| by expanding the determinant of the square presentation:
/// sum_x prod_{y != x} e(y) = 2^s4 * 3^s6 * n.
inline Integer order_by_expansion(const LevelInvariants& inv) {
  Integer p = inv.twelve_n;
  for (Integer i = 0; i < inv.s4; ++i) p *= 2;
  for (Integer i = 0; i < inv.s6; ++i) p *= 3;
  return p / 12;
}

/// Elements x of (+) Z/orders_i killed by ell and by (M - c) for each
/// (M, c), M acting on columns. Returns the count.
inline std::uint64_t brute_kernel_count(const std::vector<Integer>& orders, std::uint64_t ell,
                                        const std::vector<std::pair<IntMatrix, Integer>>& terms) {
  std::uint64_t count = 0;
  for_each_element(orders, [&](const std::vector<Integer>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      Integer y = ell * x[i];
      if (mpz_divisible_p(y.get_mpz_t(), orders[i].get_mpz_t()) == 0) return;
    }
    for (const auto& [m, c] : terms) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        Integer y = -c * x[i];
        for (std::size_t j = 0; j < x.size(); ++j) y += m(i, j) * x[j];
        if (mpz_divisible_p(y.get_mpz_t(), orders[i].get_mpz_t()) == 0) return;
      }
    }
    ++count;
  });
  return count;
}

/// Frobenius on Psi symbols: T_q(sum c Psi_x) = sum c Psi_Frob(x).
inline PsiExpr frobenius_of(const SigmaModel& model, const PsiExpr& e) {
  PsiExpr out;
  for (const auto& [label, c] : e.terms) out.add(label == "s" ? "s" : model.frobenius(label), c);
  return out;
}

inline std::string w(std::size_t i) { return "w" + std::to_string(i); }
inline std::string t(std::size_t i) { return "t" + std::to_string(i); }

/// A generator and its T_q image, transcribed from the case-by-case statements.
struct FormulaRow {
  std::string label;
  Integer order;
  PsiExpr generator;
  PsiExpr tq_image;  // expected T_q(generator)
};

/// Generators and T_q formulas for Cases 2-4, written directly in Psi symbols.
inline std::vector<FormulaRow> transcribed_formulas(const LevelInvariants& inv) {
  std::vector<FormulaRow> rows;
  const std::size_t P = std::size_t{1} << inv.nu;
  const std::size_t H = P / 2;
  const Integer n12 = inv.twelve_n;
  auto plus = [](PsiExpr a, const PsiExpr& b, const Integer& k = 1) {
    for (const auto& [l, c] : b.terms) a.add(l, k * c);
    return a;
  };
  // B family, shared by Cases 2 and 4.
  auto b_family = [&] {
    const std::string tt = t(P - 1), tp = t(P);
    for (std::size_t k = 1; k <= H; ++k) {
      PsiExpr odd = PsiExpr::of(t(2 * k - 1)).add(t(2 * k), -1);
      PsiExpr even = PsiExpr::of(t(2 * k - 1)).add(t(2 * k), 1).add(tt, -1).add(tp, -1);
      rows.push_back({"v" + std::to_string(2 * k - 1), 3, odd, plus(PsiExpr{}, odd, -1)});
      if (2 * k <= P - 1) rows.push_back({"v" + std::to_string(2 * k), 3, even, even});
    }
  };
  // A family for Cases 3 and 4; `shift` is 2n or 6n.
  auto a_family = [&](const Integer& a0_order, const Integer& shift) {
    const std::string ww = w(P - 1), wp = w(P);
    std::vector<PsiExpr> u(P - 1);  // u[1..P-2]
    for (std::size_t k = 1; k + 2 <= H; ++k) {
      u[2 * k - 1] = PsiExpr::of(w(2 * k - 1)).add(ww, -1);
      u[2 * k] = PsiExpr::of(w(2 * k - 1)).add(w(2 * k), 1).add(ww, -1).add(wp, -1);
    }
    if (P >= 4) {
      u[P - 3] = PsiExpr::of(w(P - 3)).add(ww, -1);
      u[P - 2] = PsiExpr::of(w(P - 3)).add(w(P - 2), -1);
    }
    PsiExpr a0 = PsiExpr::of(ww);
    PsiExpr a0_img = PsiExpr::of(ww, 1 + shift);
    for (std::size_t i = 1; i <= H - 1; ++i) a0_img = plus(a0_img, u[2 * i]);
    rows.push_back({"A0", a0_order, a0, a0_img});
    for (std::size_t k = 1; k + 2 <= H; ++k) {
      rows.push_back({"u" + std::to_string(2 * k - 1), 2, u[2 * k - 1], plus(u[2 * k - 1], u[2 * k])});
      rows.push_back({"u" + std::to_string(2 * k), 2, u[2 * k], u[2 * k]});
    }
    if (P >= 4) {
      PsiExpr img = plus(PsiExpr::of(ww, shift), u[P - 3]);
      for (std::size_t i = 1; i + 2 <= H; ++i) img = plus(img, u[2 * i]);
      rows.push_back({"u" + std::to_string(P - 3), 2, u[P - 3], img});
      rows.push_back({"u" + std::to_string(P - 2), 2, u[P - 2], u[P - 2]});
    }
  };

  switch (inv.case_tag) {
    case CaseTag::Case2: {
      PsiExpr b0 = PsiExpr::of(t(P - 1), 3);
      rows.push_back({"B0", n12 / 4, b0, b0});
      b_family();
      break;
    }
    case CaseTag::Case3:
      a_family(n12 / 3, n12 / 6);
      break;
    case CaseTag::Case4:
      a_family(n12, n12 / 2);
      b_family();
      break;
    default:
      break;
  }
  return rows;
}

}  // namespace phiq::testing
