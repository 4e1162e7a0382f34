// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "phiq/hecke.hpp"
#include "phiq/ssoracle.hpp"
#include "support.hpp"

using namespace phiq;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Pair {
  std::uint64_t N, q;
};

std::vector<Pair> sweep_pairs() {
  std::vector<Pair> out;
  for (std::uint64_t q = 5; q <= 97; ++q) {
    if (!is_prime(q)) continue;
    for (std::uint64_t N = 1; N <= 100; ++N)
      if (N % q != 0) out.push_back({N, q});
  }
  return out;
}

struct Presented {
  LevelInvariants inv;
  SigmaModel model;
  PresentedGroup pg;
};

Presented present(std::uint64_t N, std::uint64_t q, PresentationKind kind) {
  LevelInvariants inv = level_invariants(N, q);
  SigmaModel model = build_sigma_model(inv);
  if (kind == PresentationKind::Full && model.point_count() > kFullPresentationLimit)
    kind = PresentationKind::Collapsed;
  PresentedGroup pg = presented_group(build_presentation(model, kind));
  return {inv, model, pg};
}

std::string pair_str(std::uint64_t N, std::uint64_t q) {
  return "(N=" + std::to_string(N) + ", q=" + std::to_string(q) + ")";
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// Runs a criterion body, turning exceptions into a failure line.
void criterion(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = Clock::now();
  try {
    auto [ok, detail] = body();
    std::ostringstream os;
    os << detail << " [" << seconds_since(t0) << " s]";
    report(id, name, ok, os.str());
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

// Enumerates canonical elements of a finite group.
std::uint64_t brute_count_presented(const FinAbGroup& g, const std::vector<GroupEndo>& endos) {
  std::uint64_t count = 0;
  testing::for_each_element(g.moduli(), [&](const std::vector<Integer>& x) {
    GroupElement e = g.reduce(x);
    for (const auto& f : endos)
      if (!f.apply(e).is_zero()) return;
    ++count;
  });
  return count;
}

}  // namespace

int main() {
  const std::vector<Pair> pairs = sweep_pairs();

  criterion(1, "structure cross-validation", [&] {
    const auto t0 = Clock::now();
    std::size_t agree = 0, full_checked = 0;
    std::string first_bad;
    for (const Pair& p : pairs) {
      Presented P = present(p.N, p.q, PresentationKind::Collapsed);
      Decomposition dec = closed_form(P.inv);
      const std::vector<Integer> orders = dec.orders();
      bool ok = P.pg.group.invariant_factors() == group_from_orders(orders).invariant_factors() &&
                P.pg.group.order() == testing::order_by_expansion(P.inv);
      if (P.model.point_count() <= kFullPresentationLimit) {
        Presented F = present(p.N, p.q, PresentationKind::Full);
        ok = ok && F.pg.group.invariant_factors() == P.pg.group.invariant_factors();
        ++full_checked;
      }
      if (ok)
        ++agree;
      else if (first_bad.empty())
        first_bad = pair_str(p.N, p.q);
    }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << agree << "/" << pairs.size() << " pairs agree (" << full_checked
       << " also via the one-generator-per-point presentation), " << secs << " s (limit 120 s)";
    if (!first_bad.empty()) os << ", first mismatch " << first_bad;
    return std::make_pair(agree == pairs.size() && secs < 120.0, os.str());
  });

  criterion(2, "T_q formulas for Cases 2-4 at nu = 1, 2, 3", [&] {
    struct Instance {
      std::uint64_t N, q;
      CaseTag tag;
      unsigned nu;
    };
    const std::vector<Instance> instances{
        {7, 5, CaseTag::Case2, 1},     {91, 5, CaseTag::Case2, 2},     {2821, 5, CaseTag::Case2, 3},
        {13, 7, CaseTag::Case3, 1},    {221, 7, CaseTag::Case3, 2},    {6409, 7, CaseTag::Case3, 3},
        {13, 11, CaseTag::Case4, 1},   {481, 11, CaseTag::Case4, 2},   {29341, 11, CaseTag::Case4, 3}};
    std::size_t identities = 0, bad = 0;
    std::string first_bad;
    for (const auto& in : instances) {
      Presented P = present(in.N, in.q, PresentationKind::Full);
      if (P.inv.case_tag != in.tag || P.inv.nu != in.nu) {
        ++bad;
        if (first_bad.empty()) first_bad = pair_str(in.N, in.q) + " has the wrong case or nu";
        continue;
      }
      Decomposition dec = closed_form(P.inv);
      // Structure of the decomposition inside the presented group.
      for (const Check& c : verify_decomposition(P.pg, dec).checks) {
        ++identities;
        if (!c.ok && ++bad && first_bad.empty()) first_bad = pair_str(in.N, in.q) + " " + c.name;
      }
      // Transcribed formulas, with T_q applied as Frobenius on the Psi symbols.
      for (const auto& row : testing::transcribed_formulas(P.inv)) {
        ++identities;
        const Summand* lib = nullptr;
        for (const auto& x : dec.summands)
          if (x.label == row.label) lib = &x;
        if (!lib || lib->order != row.order || P.pg.evaluate(lib->generator) != P.pg.evaluate(row.generator)) {
          ++bad;
          if (first_bad.empty()) first_bad = pair_str(in.N, in.q) + " generator " + row.label;
        }
        if (P.pg.evaluate(testing::frobenius_of(P.model, row.generator)) != P.pg.evaluate(row.tq_image)) {
          ++bad;
          if (first_bad.empty()) first_bad = pair_str(in.N, in.q) + " T_q(" + row.label + ")";
        }
      }
      // The library's matrix against the presented action.
      for (const Check& c : cross_validate_tq(P.pg, tq_presentation_endo(P.model, P.pg), dec)) {
        ++identities;
        if (!c.ok && ++bad && first_bad.empty()) first_bad = pair_str(in.N, in.q) + " " + c.name;
      }
    }
    std::ostringstream os;
    os << instances.size() << " levels, " << identities << " identities checked, " << bad << " failed";
    if (!first_bad.empty()) os << ", first failure " << first_bad;
    return std::make_pair(bad == 0, os.str());
  });

  criterion(3, "T_q is an involution", [&] {
    std::size_t ok = 0;
    std::string first_bad;
    for (const Pair& p : pairs) {
      Presented P = present(p.N, p.q, PresentationKind::Collapsed);
      HeckeModule closed = hecke_module(closed_form(P.inv));
      if (check_involution(P.pg.group, tq_presentation_endo(P.model, P.pg)) &&
          check_involution(closed.group, closed.tq))
        ++ok;
      else if (first_bad.empty())
        first_bad = pair_str(p.N, p.q);
    }
    std::ostringstream os;
    os << ok << "/" << pairs.size() << " pairs satisfy T_q^2 = id on both routes";
    if (!first_bad.empty()) os << ", first failure " << first_bad;
    return std::make_pair(ok == pairs.size(), os.str());
  });

  criterion(4, "Eisenstein kernel dimension 2^(nu-1)", [&] {
    struct Instance {
      std::uint64_t N, q;
      std::size_t dim;
    };
    std::ostringstream os;
    bool all = true;
    for (const Instance& in : std::vector<Instance>{{7, 5, 1}, {91, 5, 2}, {2821, 5, 4}}) {
      Presented P = present(in.N, in.q, PresentationKind::Collapsed);
      std::string text = "3; Tq+1";
      for (const auto& pp : P.inv.factorization.factors) text += ", Tp(" + std::to_string(pp.prime) + ")-1";
      IdealSpec spec = parse_ideal(text, P.inv);
      Decomposition dec = closed_form(P.inv);
      HeckeModule closed = hecke_module(dec);
      HeckeModule presented = hecke_module(P.model, P.pg);
      KernelResult a = eisenstein_kernel(P.inv, closed, spec);
      KernelResult b = eisenstein_kernel(P.inv, presented, spec);
      bool ok = a.dimension == in.dim && b.dimension == in.dim;
      os << pair_str(in.N, in.q) << " dim " << (a.dimension ? std::to_string(*a.dimension) : "-") << "/"
         << (b.dimension ? std::to_string(*b.dimension) : "-") << " expected " << in.dim;
      if (dec.order() <= 100000) {
        std::vector<std::pair<IntMatrix, Integer>> terms;
        std::vector<GroupEndo> endos{GroupEndo::scalar(presented.group, 3)};
        for (const auto& t : spec.terms) {
          auto s = scalar_of(t.op, P.inv);
          terms.emplace_back(s ? Integer(*s) * IntMatrix::identity(dec.summands.size()) : dec.tq_matrix, t.target);
          endos.push_back(operator_endo(presented, t.op, P.inv).minus_scalar(t.target));
        }
        std::uint64_t three_pow = 1;
        for (std::size_t i = 0; i < in.dim; ++i) three_pow *= 3;
        const std::uint64_t brute_closed = testing::brute_kernel_count(dec.orders(), 3, terms);
        const std::uint64_t brute_presented = brute_count_presented(presented.group, endos);
        ok = ok && brute_closed == three_pow && brute_presented == three_pow;
        os << " (brute force " << brute_closed << "/" << brute_presented << " elements)";
      } else {
        os << " (|Phi| = " << dec.order().get_str() << " > 1e5, no brute force)";
      }
      os << "; ";
      all = all && ok;
    }
    std::string detail = os.str();
    return std::make_pair(all, detail.substr(0, detail.size() - 2));
  });

  criterion(5, "level one, cyclic of order (q-1)/2", [&] {
    std::ostringstream os;
    bool all = true;
    for (std::uint64_t q : {11, 23, 47, 59, 71, 83}) {
      Presented P = present(1, q, PresentationKind::Full);
      Decomposition dec = closed_form(P.inv);
      const Integer want = Integer((q - 1) / 2);
      const bool ok = P.pg.group.invariant_factors() == std::vector<Integer>{want} &&
                      dec.orders() == std::vector<Integer>{want} && want == 6 * P.inv.s2 + 5;
      all = all && ok;
      os << "q=" << q << ": " << P.pg.group.structure_string() << (ok ? "" : " (mismatch)") << "; ";
    }
    std::string detail = os.str();
    return std::make_pair(all, detail.substr(0, detail.size() - 2));
  });

  criterion(6, "supersingular oracle for 5 <= q <= 499", [&] {
    const auto t0 = Clock::now();
    std::size_t primes = 0, ok = 0;
    std::string first_bad;
    for (std::uint64_t q = 5; q <= 499; ++q) {
      if (!is_prime(q)) continue;
      ++primes;
      SsCatalog cat = ss_catalog(q);
      if (check_mass_formula_level1(cat, level_invariants(1, q)).passed())
        ++ok;
      else if (first_bad.empty())
        first_bad = "q=" + std::to_string(q);
    }
    auto js = [](std::uint64_t q) {
      std::vector<QuadElement> out;
      for (const auto& p : ss_catalog(q).points) out.push_back(p.j);
      return out;
    };
    const bool anchors = js(5) == std::vector<QuadElement>{{0, 0}} && js(7) == std::vector<QuadElement>{{6, 0}} &&
                         js(11) == std::vector<QuadElement>{{0, 0}, {1, 0}} &&
                         js(13) == std::vector<QuadElement>{{5, 0}};
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << ok << "/" << primes << " catalogs match the mass formula with Frobenius an involution, anchors "
       << (anchors ? "reproduced" : "WRONG") << ", " << secs << " s (limit 60 s)";
    if (!first_bad.empty()) os << ", first failure " << first_bad;
    return std::make_pair(ok == primes && anchors && secs < 60.0, os.str());
  });

  criterion(7, "T_p = p commutes with T_q and respects the exponent", [&] {
    std::size_t ok = 0, ops = 0;
    std::string first_bad;
    for (const Pair& p : pairs) {
      Presented P = present(p.N, p.q, PresentationKind::Collapsed);
      HeckeModule mod = hecke_module(P.model, P.pg);
      const FinAbGroup& g = mod.group;
      const std::size_t r = g.ambient_rank();
      std::vector<HeckeOp> list;
      for (const auto& pp : P.inv.factorization.factors) list.push_back(HeckeOp::tp(pp.prime, P.inv));
      for (std::uint64_t l = 2; list.size() < P.inv.factorization.factors.size() + 1; ++l)
        if (is_prime(l) && p.N % l != 0 && l != p.q) list.push_back(HeckeOp::tl(l, P.inv));
      bool good = true;
      const Integer exp = g.exponent();
      for (const HeckeOp& op : list) {
        ++ops;
        GroupEndo t = operator_endo(mod, op, P.inv);
        const Integer s = *scalar_of(op, P.inv);
        good = good && t == induced_endo(g, s * IntMatrix::identity(r));
        good = good && t.compose(mod.tq) == mod.tq.compose(t);
        good = good && GroupEndo::scalar(g, exp).compose(t) == GroupEndo::scalar(g, 0);
        good = good && t == GroupEndo::scalar(g, s % exp);
      }
      if (good)
        ++ok;
      else if (first_bad.empty())
        first_bad = pair_str(p.N, p.q);
    }
    std::ostringstream os;
    os << ok << "/" << pairs.size() << " pairs, " << ops << " operators checked";
    if (!first_bad.empty()) os << ", first failure " << first_bad;
    return std::make_pair(ok == pairs.size(), os.str());
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
