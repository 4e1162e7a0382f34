#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "phiq/error.hpp"
#include "phiq/hecke.hpp"
#include "support.hpp"

using namespace phiq;

namespace {

std::vector<Integer> ints(std::initializer_list<long> v) {
  std::vector<Integer> out;
  for (long x : v) out.push_back(x);
  return out;
}

struct Level {
  LevelInvariants inv;
  SigmaModel model;
  PresentedGroup pg;
};

Level level(std::uint64_t N, std::uint64_t q, PresentationKind kind = PresentationKind::Full) {
  LevelInvariants inv = level_invariants(N, q);
  SigmaModel model = build_sigma_model(inv);
  PresentedGroup pg = presented_group(build_presentation(model, kind));
  return {inv, model, pg};
}

ErrorKind parse_error_kind(std::string_view text, const LevelInvariants& inv) {
  try {
    parse_ideal(text, inv);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalInconsistency;
}

}  // namespace

TEST_CASE("scalars of Hecke operators") {
  LevelInvariants a = level_invariants(7, 5);
  CHECK(scalar_of(HeckeOp::tp(7, a), a) == Integer(7));
  CHECK(scalar_of(HeckeOp::tl(2, a), a) == Integer(3));
  CHECK_FALSE(scalar_of(HeckeOp::tq(a), a).has_value());
  LevelInvariants b = level_invariants(4, 7);
  CHECK(scalar_of(HeckeOp::tq(b), b) == Integer(1));
}

TEST_CASE("operator validation") {
  LevelInvariants a = level_invariants(7, 5);
  CHECK_THROWS_AS(HeckeOp::tp(5, a), Error);
  CHECK_THROWS_AS(HeckeOp::tp(3, a), Error);
  CHECK_THROWS_AS(HeckeOp::tl(7, a), Error);
  CHECK_THROWS_AS(HeckeOp::tl(5, a), Error);
  CHECK_THROWS_AS(HeckeOp::tl(4, a), Error);
  CHECK(HeckeOp::for_prime(5, a).kind() == HeckeKind::Tq);
  CHECK(HeckeOp::for_prime(7, a).kind() == HeckeKind::Tp);
  CHECK(HeckeOp::for_prime(2, a).kind() == HeckeKind::Tl);
}

TEST_CASE("ideal grammar") {
  LevelInvariants inv = level_invariants(91, 5);
  IdealSpec s = parse_ideal("3; T5+1, Tp(7)-1, Tp(13)-1", inv);
  CHECK(s.ell == 3);
  REQUIRE(s.terms.size() == 3);
  CHECK(s.terms[0].op.kind() == HeckeKind::Tq);
  CHECK(s.terms[0].target == -1);
  CHECK(s.terms[1].op.prime() == 7);
  CHECK(s.terms[1].target == 1);
  CHECK(s.to_string() == "3; Tq+1, Tp(7)-1, Tp(13)-1");
  // Whitespace does not matter.
  IdealSpec t = parse_ideal("  3 ;Tq + 1 ,T p ( 7 ) - 1,Tp(13)-1 ", inv);
  CHECK(t.to_string() == s.to_string());
  CHECK(parse_ideal("2; Tl(3)-4", inv).terms[0].op.kind() == HeckeKind::Tl);
  CHECK(parse_ideal("3;", inv).terms.empty());
  CHECK(parse_operator("T13", inv).kind() == HeckeKind::Tp);
}

TEST_CASE("ideal grammar errors carry offsets") {
  LevelInvariants inv = level_invariants(91, 5);
  CHECK(parse_error_kind("", inv) == ErrorKind::ParseError);
  CHECK(parse_error_kind("4; Tq+1", inv) == ErrorKind::ParseError);
  CHECK(parse_error_kind("3 Tq+1", inv) == ErrorKind::ParseError);
  CHECK(parse_error_kind("3; Tq+", inv) == ErrorKind::ParseError);
  CHECK(parse_error_kind("3; Tq+1,", inv) == ErrorKind::ParseError);
  CHECK(parse_error_kind("3; Tx", inv) == ErrorKind::ParseError);
  CHECK(parse_error_kind("3; Tp(11)-1", inv) == ErrorKind::InvalidOperator);
  CHECK(parse_error_kind("3; T9", inv) == ErrorKind::InvalidOperator);
  try {
    parse_ideal("3; Tp(7-1", inv);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("offset 7") != std::string::npos);
    CHECK(msg.find('^') != std::string::npos);
  }
  CHECK_THROWS_AS(parse_operator("Tq+1", inv), Error);
  CHECK_THROWS_AS(parse_operator("Tq Tq", inv), Error);
}

TEST_CASE("closed T_q matrices at worked levels") {
  CHECK(closed_form(level_invariants(4, 7)).tq_matrix == IntMatrix{{1}});
  CHECK(closed_form(level_invariants(7, 5)).tq_matrix == IntMatrix{{1, 0}, {0, -1}});
  CHECK(closed_form(level_invariants(13, 7)).tq_matrix == IntMatrix{{15}});
  // Columns: T_q(A0) = 253 A0 + u2, T_q(u1) = 252 A0 + u1, T_q(u2) = u2.
  CHECK(closed_form(level_invariants(221, 7)).tq_matrix == IntMatrix{{253, 252, 0}, {0, 1, 0}, {1, 0, 1}});
  Decomposition d = closed_form(level_invariants(13, 11));
  CHECK(d.orders() == ints({140, 3}));
  CHECK(d.tq_matrix == IntMatrix{{71, 0}, {0, -1}});
}

TEST_CASE("T_q through the presentation at N = 7, q = 5") {
  Level L = level(7, 5);
  GroupEndo tq = tq_presentation_endo(L.model, L.pg);
  // +1 on the Z/8 part, -1 on the Z/3 part.
  GroupElement b0 = L.pg.evaluate(PsiExpr::of("t1", 3));
  GroupElement v1 = L.pg.evaluate(PsiExpr::of("t1").add("t2", -1));
  CHECK(tq.apply(b0) == b0);
  CHECK(tq.apply(v1) == L.pg.group.scale(-1, v1));
  CHECK(check_involution(L.pg.group, tq));
}

TEST_CASE("a mis-specified Frobenius is rejected") {
  Level L = level(7, 5);
  const Presentation& p = L.pg.presentation;
  const std::size_t r = p.labels.size();
  IntMatrix perm(r, r);
  // Swap s1 and t1 (different weights), fix the others.
  for (std::size_t j = 0; j < r; ++j) {
    std::string l = p.labels[j];
    std::string img = l == "s1" ? "t1" : l == "t1" ? "s1" : l;
    perm(p.column_of(img), j) = 1;
  }
  CHECK_THROWS_AS(induced_endo(L.pg.group, perm), Error);
}

TEST_CASE("T_q does not depend on the choice of Frobenius on Sigma_2") {
  std::mt19937_64 rng(99);
  for (auto [N, q] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{7, 5}, {91, 5}, {221, 7}, {13, 11}, {4, 7}}) {
    LevelInvariants inv = level_invariants(N, q);
    SigmaModel base = build_sigma_model(inv);
    PresentedGroup pg = presented_group(build_presentation(base, PresentationKind::Full));
    GroupEndo ref = tq_presentation_endo(base, pg);
    const std::size_t s2 = inv.s2.get_ui();
    for (int trial = 0; trial < 5; ++trial) {
      // Random involution: shuffle, then pair off a random prefix.
      std::vector<std::size_t> idx(s2);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      std::vector<std::size_t> frob(s2);
      std::iota(frob.begin(), frob.end(), 0);
      const std::size_t pairs = s2 ? rng() % (s2 / 2 + 1) : 0;
      for (std::size_t k = 0; k < pairs; ++k) {
        frob[idx[2 * k]] = idx[2 * k + 1];
        frob[idx[2 * k + 1]] = idx[2 * k];
      }
      SigmaModel m = build_sigma_model(inv, frob);
      CHECK(tq_presentation_endo(m, pg) == ref);
    }
  }
}

TEST_CASE("involution checks") {
  Level L = level(13, 7);
  CHECK(check_involution(L.pg.group, tq_presentation_endo(L.model, L.pg)));
  CHECK(check_involution(L.pg.group, GroupEndo::identity(L.pg.group)));
  FinAbGroup z5 = group_from_orders(ints({5}));
  CHECK_FALSE(check_involution(z5, GroupEndo::scalar(z5, 2)));
}

TEST_CASE("closed T_q matches the presented T_q and the transcribed formulas") {
  for (std::uint64_t q : {5, 7, 11, 13, 17, 23}) {
    for (std::uint64_t N : {1, 2, 3, 4, 7, 13, 19, 37, 91, 133, 247, 481, 703}) {
      if (N % q == 0) continue;
      Level L = level(N, q, PresentationKind::Collapsed);
      Decomposition dec = closed_form(L.inv);
      GroupEndo tq = tq_presentation_endo(L.model, L.pg);
      for (const Check& c : cross_validate_tq(L.pg, tq, dec)) {
        INFO(N << " " << q << " " << c.name << " " << c.detail);
        CHECK(c.ok);
      }
      HeckeModule closed = hecke_module(dec);
      CHECK(check_involution(closed.group, closed.tq));
      for (const auto& row : testing::transcribed_formulas(L.inv)) {
        INFO(N << " " << q << " " << row.label);
        CHECK(L.pg.evaluate(testing::frobenius_of(L.model, row.generator)) ==
              L.pg.evaluate(row.tq_image));
      }
    }
  }
}

TEST_CASE("Eisenstein kernels at worked levels") {
  auto kernel = [](std::uint64_t N, std::uint64_t q, const char* ideal, bool closed) {
    LevelInvariants inv = level_invariants(N, q);
    IdealSpec spec = parse_ideal(ideal, inv);
    if (closed) return eisenstein_kernel(inv, hecke_module(closed_form(inv)), spec);
    SigmaModel model = build_sigma_model(inv);
    PresentedGroup pg = presented_group(build_presentation(model, PresentationKind::Collapsed));
    return eisenstein_kernel(inv, hecke_module(model, pg), spec);
  };
  for (bool closed : {true, false}) {
    KernelResult a = kernel(7, 5, "3; Tp(7)-1, T5+1", closed);
    CHECK(a.dimension == std::optional<std::size_t>(1));
    KernelResult b = kernel(91, 5, "3; Tp(7)-1, Tp(13)-1, Tq+1", closed);
    CHECK(b.dimension == std::optional<std::size_t>(2));
    KernelResult c = kernel(7, 5, "2; T5-1", closed);
    CHECK(c.kernel.structure.invariant_factors() == ints({2}));
    KernelResult d = kernel(2821, 5, "3; Tq+1, Tp(7)-1, Tp(13)-1, Tp(31)-1", closed);
    CHECK(d.dimension == std::optional<std::size_t>(4));
    // Not elementary: no dimension reported.
    KernelResult e = kernel(7, 5, "2;", closed);
    CHECK(e.kernel.structure.order() == 2);
  }
}

TEST_CASE("Eisenstein kernels agree with brute-force enumeration") {
  const char* ideals[] = {"2; Tq-1", "2; Tq+1", "3; Tq+1", "3; Tq-1", "5; Tq-1", "7; Tq-1, T2-3",
                          "2; T3-4", "3;", "2;"};
  for (std::uint64_t q : {5, 7, 11, 13, 17}) {
    for (std::uint64_t N = 1; N <= 40; ++N) {
      if (N % q == 0) continue;
      LevelInvariants inv = level_invariants(N, q);
      Decomposition dec = closed_form(inv);
      if (dec.order() > 100000) continue;
      SigmaModel model = build_sigma_model(inv);
      PresentedGroup pg = presented_group(build_presentation(model, PresentationKind::Collapsed));
      HeckeModule closed = hecke_module(dec);
      HeckeModule presented = hecke_module(model, pg);
      for (const char* text : ideals) {
        IdealSpec spec;
        try {
          spec = parse_ideal(text, inv);
        } catch (const Error&) {
          continue;  // e.g. T2 or T3 divides N here
        }
        std::vector<std::pair<IntMatrix, Integer>> terms;
        for (const auto& t : spec.terms) {
          auto s = scalar_of(t.op, inv);
          terms.emplace_back(s ? Integer(*s) * IntMatrix::identity(dec.summands.size()) : dec.tq_matrix,
                             t.target);
        }
        const std::uint64_t brute = testing::brute_kernel_count(dec.orders(), spec.ell, terms);
        KernelResult a = eisenstein_kernel(inv, closed, spec);
        KernelResult b = eisenstein_kernel(inv, presented, spec);
        INFO(N << " " << q << " " << text);
        CHECK(a.kernel.structure.order() == brute);
        CHECK(b.kernel.structure.invariant_factors() == a.kernel.structure.invariant_factors());
      }
    }
  }
}
