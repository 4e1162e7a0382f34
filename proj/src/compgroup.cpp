#include "phiq/compgroup.hpp"

#include <algorithm>
#include <sstream>

#include "phiq/error.hpp"
#include "phiq/hecke.hpp"

namespace phiq {

namespace {

std::string label(char kind, std::size_t one_based) { return kind + std::to_string(one_based); }

std::vector<std::size_t> consecutive_pairing(std::size_t n) {
  std::vector<std::size_t> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = i;
  for (std::size_t i = 0; i + 1 < n; i += 2) std::swap(f[i], f[i + 1]);
  return f;
}

std::pair<char, std::size_t> parse_label(const std::string& l) {
  if (l.size() < 2 || (l[0] != 's' && l[0] != 'w' && l[0] != 't'))
    throw Error(ErrorKind::OutOfRange, "bad point label '" + l + "'");
  std::size_t idx = std::stoul(l.substr(1));
  if (idx == 0) throw Error(ErrorKind::OutOfRange, "bad point label '" + l + "'");
  return {l[0], idx};
}

}  // namespace

int weight_of(PointKind kind) {
  switch (kind) {
    case PointKind::Sigma2: return 1;
    case PointKind::Sigma4: return 2;
    case PointKind::Sigma6: return 3;
  }
  return 1;
}

std::string SigmaModel::frobenius(const std::string& l) const {
  if (l == "s") return l;
  auto [kind, idx] = parse_label(l);
  const std::vector<std::size_t>* f = nullptr;
  std::size_t count = 0;
  if (kind == 's') {
    if (frob2.empty()) return l;
    f = &frob2;
    count = frob2.size();
  } else if (kind == 'w') {
    f = &frob4;
    count = s4_count;
  } else {
    f = &frob6;
    count = s6_count;
  }
  if (idx > count) throw Error(ErrorKind::OutOfRange, "no point '" + l + "' in the model");
  return label(kind, (*f)[idx - 1] + 1);
}

SigmaModel build_sigma_model(const LevelInvariants& inv,
                             std::optional<std::vector<std::size_t>> frob2) {
  SigmaModel m;
  m.s2_count = inv.s2;
  if (!inv.s4.fits_ulong_p() || !inv.s6.fits_ulong_p())
    throw Error(ErrorKind::OutOfRange, "too many extra-automorphism points");
  m.s4_count = inv.s4.get_ui();
  m.s6_count = inv.s6.get_ui();
  m.frob4 = consecutive_pairing(m.s4_count);
  m.frob6 = consecutive_pairing(m.s6_count);
  if (frob2) {
    if (!inv.s2.fits_ulong_p() || frob2->size() != inv.s2.get_ui())
      throw Error(ErrorKind::InvalidPermutation, "frob2 must permute exactly s2 indices");
    std::vector<bool> seen(frob2->size(), false);
    for (std::size_t x : *frob2) {
      if (x >= seen.size() || seen[x])
        throw Error(ErrorKind::InvalidPermutation, "frob2 is not a permutation");
      seen[x] = true;
    }
    for (std::size_t i = 0; i < frob2->size(); ++i)
      if ((*frob2)[(*frob2)[i]] != i)
        throw Error(ErrorKind::InvalidPermutation, "frob2 is not an involution");
    m.frob2 = std::move(*frob2);
  }
  return m;
}

std::size_t Presentation::column_of(const std::string& l) const {
  std::string key = l;
  if (kind == PresentationKind::Collapsed && !l.empty() && l[0] == 's') key = "s";
  if (kind == PresentationKind::Full && l == "s") key = "s1";
  auto it = index.find(key);
  if (it == index.end()) throw Error(ErrorKind::OutOfRange, "no generator for '" + l + "'");
  return it->second;
}

Presentation build_presentation(const SigmaModel& model, PresentationKind kind) {
  Presentation p;
  p.kind = kind;
  // Sigma_2 generators, then w's, then t's; `mult` is the sum-row coefficient.
  std::vector<Integer> mult;
  if (kind == PresentationKind::Full) {
    if (model.point_count() > kFullPresentationLimit) {
      throw Error(ErrorKind::OutOfRange, "full presentation limited to " +
                                             std::to_string(kFullPresentationLimit) + " points");
    }
    const std::size_t s2 = model.s2_count.get_ui();
    for (std::size_t i = 1; i <= s2; ++i) {
      p.labels.push_back(label('s', i));
      p.weights.push_back(1);
      mult.push_back(1);
    }
  } else if (model.s2_count > 0) {
    p.labels.push_back("s");
    p.weights.push_back(1);
    mult.push_back(model.s2_count);
  }
  for (std::size_t i = 1; i <= model.s4_count; ++i) {
    p.labels.push_back(label('w', i));
    p.weights.push_back(2);
    mult.push_back(1);
  }
  for (std::size_t i = 1; i <= model.s6_count; ++i) {
    p.labels.push_back(label('t', i));
    p.weights.push_back(3);
    mult.push_back(1);
  }
  const std::size_t r = p.labels.size();
  if (r == 0) throw Error(ErrorKind::EmptySigma, "no supersingular points");
  for (std::size_t i = 0; i < r; ++i) p.index.emplace(p.labels[i], i);

  p.relations = SparseMatrix(r);
  for (std::size_t i = 1; i < r; ++i)
    p.relations.add_row({{0, Integer(p.weights[0])}, {i, Integer(-p.weights[i])}});
  SparseMatrix::Row sum;
  for (std::size_t i = 0; i < r; ++i) sum.emplace_back(i, mult[i]);
  p.relations.add_row(std::move(sum));
  return p;
}

std::string PsiExpr::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [l, c] : terms) {
    if (c == 0) continue;
    Integer a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (a != 1) os << a << "*";
    os << "Psi(" << l << ")";
    first = false;
  }
  return first ? "0" : os.str();
}

GroupElement PresentedGroup::psi(const std::string& l) const {
  std::vector<Integer> x(presentation.labels.size());
  x[presentation.column_of(l)] = 1;
  return group.element(x);
}

GroupElement PresentedGroup::evaluate(const PsiExpr& expr) const {
  std::vector<Integer> x(presentation.labels.size());
  for (const auto& [l, c] : expr.terms) x[presentation.column_of(l)] += c;
  return group.element(x);
}

PresentedGroup presented_group(Presentation pres) {
  PresentedGroup pg;
  pg.group = cokernel(pres.relations);
  if (!pg.group.is_finite()) {
    throw Error(ErrorKind::InfiniteQuotient,
                "presentation has free rank " + std::to_string(pg.group.rank_free()));
  }
  pg.presentation = std::move(pres);
  return pg;
}

Integer Decomposition::order() const {
  Integer o = 1;
  for (const auto& s : summands) o *= s.order;
  return o;
}

std::vector<Integer> Decomposition::orders() const {
  std::vector<Integer> o;
  for (const auto& s : summands) o.push_back(s.order);
  return o;
}

namespace {

std::string w(std::size_t i) { return label('w', i); }
std::string t(std::size_t i) { return label('t', i); }

// u_1 .. u_{2^nu - 2} over w_1 .. w_{2^nu}
void append_u_family(Decomposition& dec, std::size_t P) {
  if (P < 4) return;
  const std::size_t H = P / 2;
  const std::string wb = w(P - 1), wp = w(P);
  for (std::size_t k = 1; k + 2 <= H; ++k) {
    dec.summands.push_back({"u" + std::to_string(2 * k - 1), 2,
                            PsiExpr::of(w(2 * k - 1)).add(wb, -1), "A_" + std::to_string(2 * k - 1)});
    dec.summands.push_back({"u" + std::to_string(2 * k), 2,
                            PsiExpr::of(w(2 * k - 1)).add(w(2 * k), 1).add(wb, -1).add(wp, -1),
                            "A_" + std::to_string(2 * k)});
  }
  dec.summands.push_back({"u" + std::to_string(P - 3), 2, PsiExpr::of(w(P - 3)).add(wb, -1),
                          "A_" + std::to_string(P - 3) + " (last pair)"});
  dec.summands.push_back({"u" + std::to_string(P - 2), 2, PsiExpr::of(w(P - 3)).add(w(P - 2), -1),
                          "A_" + std::to_string(P - 2) + " (last pair)"});
}

// v_1 .. v_{2^nu - 1} over t_1 .. t_{2^nu}
void append_v_family(Decomposition& dec, std::size_t P) {
  const std::size_t H = P / 2;
  const std::string tb = t(P - 1), tp = t(P);
  for (std::size_t k = 1; k <= H; ++k) {
    dec.summands.push_back({"v" + std::to_string(2 * k - 1), 3,
                            PsiExpr::of(t(2 * k - 1)).add(t(2 * k), -1), "B_" + std::to_string(2 * k - 1)});
    if (2 * k <= P - 1) {
      dec.summands.push_back({"v" + std::to_string(2 * k), 3,
                              PsiExpr::of(t(2 * k - 1)).add(t(2 * k), 1).add(tb, -1).add(tp, -1),
                              "B_" + std::to_string(2 * k)});
    }
  }
}

}  // namespace

Decomposition closed_form(const LevelInvariants& inv) {
  Decomposition dec;
  dec.case_tag = inv.case_tag;
  dec.e_case = (inv.u ? 2 : 1) * (inv.v ? 3 : 1);
  if (inv.nu > 20) throw Error(ErrorKind::OutOfRange, "nu too large to enumerate summands");
  const std::size_t P = std::size_t{1} << inv.nu;

  switch (inv.case_tag) {
    case CaseTag::Case1: {
      Summand c{"Phi", inv.n_times(dec.e_case), {}, ""};
      if (inv.u == 0 && inv.v == 0) {
        c.generator = PsiExpr::of("s");
        c.note = "all Psi_s coincide; cyclic of order n";
      } else if (inv.u == 1 && inv.v == 1) {
        c.generator = PsiExpr::of("w1").add("t1", -1);
        c.note = "order 6n = 6*s2 + 5 generated by Psi_w - Psi_t";
        dec.notes.push_back(
            "deviation: (u,v)=(1,1) with nu=0 uses e=2^u*3^v=6, not e=2u+3v=5 (5n is not an "
            "integer here)");
      } else {
        c.generator = PsiExpr::of(inv.u ? "w1" : "t1");
        c.note = "order e*n = e*s2 + 1 generated by Psi_z";
      }
      dec.summands.push_back(std::move(c));
      break;
    }
    case CaseTag::Case2: {
      dec.summands.push_back({"B0", inv.n_times(3), PsiExpr::of(t(P - 1), 3),
                              "B_0 = Phi; 3*Psi_t equals Psi_s for every s in Sigma_2"});
      append_v_family(dec, P);
      break;
    }
    case CaseTag::Case3: {
      dec.summands.push_back({"A0", inv.n_times(4), PsiExpr::of(w(P - 1)),
                              "A_0 = Phi', generated by Psi_w with w = w_{2^nu-1}"});
      append_u_family(dec, P);
      break;
    }
    case CaseTag::Case4: {
      dec.summands.push_back({"A0", inv.n_times(12), PsiExpr::of(w(P - 1)),
                              "A_0 = Phi', generated by Psi_w with w = w_{2^nu-1}"});
      append_u_family(dec, P);
      append_v_family(dec, P);
      break;
    }
  }
  dec.tq_matrix = tq_closed_matrix(dec, inv);
  return dec;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

std::vector<Check> VerificationReport::failures() const {
  std::vector<Check> f;
  for (const auto& c : checks)
    if (!c.ok) f.push_back(c);
  return f;
}

VerificationReport verify_decomposition(const PresentedGroup& pg, const Decomposition& dec) {
  VerificationReport rep;
  const FinAbGroup& g = pg.group;
  std::vector<GroupElement> gens;
  Integer product = 1;
  for (const auto& s : dec.summands) {
    GroupElement x = pg.evaluate(s.generator);
    Integer ord = element_order(g, x);
    std::ostringstream os;
    os << "order(" << s.generator.to_string() << ") = " << ord << ", claimed " << s.order;
    rep.checks.push_back({"order:" + s.label, ord == s.order, os.str()});
    gens.push_back(std::move(x));
    product *= s.order;
  }
  {
    Integer sub = subgroup_order(g, gens);
    std::ostringstream os;
    os << "subgroup order " << sub << ", product of summand orders " << product;
    rep.checks.push_back({"direct_sum", sub == product, os.str()});
  }
  {
    std::ostringstream os;
    os << "presented order " << g.order() << ", closed-form order " << product;
    rep.checks.push_back({"total_order", g.order() == product, os.str()});
  }
  {
    std::vector<Integer> orders = dec.orders();
    FinAbGroup closed = group_from_orders(orders);
    bool same = closed.invariant_factors() == g.invariant_factors();
    rep.checks.push_back({"invariant_factors", same,
                          "presented " + g.structure_string() + ", closed " + closed.structure_string()});
  }
  return rep;
}

}  // namespace phiq
