#include "phiq/hecke.hpp"

#include <cctype>
#include <sstream>

#include "phiq/error.hpp"

namespace phiq {

HeckeOp HeckeOp::tq(const LevelInvariants& inv) { return HeckeOp(HeckeKind::Tq, inv.q); }

HeckeOp HeckeOp::tp(std::uint64_t p, const LevelInvariants& inv) {
  if (!is_prime(p) || inv.N % p != 0)
    throw Error(ErrorKind::InvalidOperator,
                "Tp(" + std::to_string(p) + ") needs a prime dividing N=" + std::to_string(inv.N));
  return HeckeOp(HeckeKind::Tp, p);
}

HeckeOp HeckeOp::tl(std::uint64_t l, const LevelInvariants& inv) {
  if (!is_prime(l) || inv.N % l == 0 || l == inv.q)
    throw Error(ErrorKind::InvalidOperator,
                "Tl(" + std::to_string(l) + ") needs a prime not dividing Nq");
  return HeckeOp(HeckeKind::Tl, l);
}

HeckeOp HeckeOp::for_prime(std::uint64_t n, const LevelInvariants& inv) {
  if (!is_prime(n)) throw Error(ErrorKind::InvalidOperator, "T" + std::to_string(n) + ": not prime");
  if (n == inv.q) return tq(inv);
  if (inv.N % n == 0) return tp(n, inv);
  return tl(n, inv);
}

std::string HeckeOp::to_string() const {
  switch (kind_) {
    case HeckeKind::Tq: return "Tq";
    case HeckeKind::Tp: return "Tp(" + std::to_string(prime_) + ")";
    case HeckeKind::Tl: return "Tl(" + std::to_string(prime_) + ")";
  }
  return "?";
}

std::optional<Integer> scalar_of(const HeckeOp& op, const LevelInvariants& inv) {
  switch (op.kind()) {
    case HeckeKind::Tp: return to_integer(op.prime());
    case HeckeKind::Tl: return to_integer(op.prime()) + 1;
    case HeckeKind::Tq:
      if (inv.case_tag == CaseTag::Case1) return Integer(1);
      return std::nullopt;
  }
  return std::nullopt;
}

std::string IdealSpec::to_string() const {
  std::ostringstream os;
  os << ell << ";";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    os << (i ? ", " : " ") << terms[i].op.to_string();
    const Integer& c = terms[i].target;
    if (c > 0) os << "-" << c;
    if (c < 0) os << "+" << -c;
  }
  return os.str();
}

namespace {

class IdealParser {
 public:
  IdealParser(std::string_view text, const LevelInvariants& inv) : s_(text), inv_(inv) {}

  IdealSpec parse() {
    IdealSpec spec;
    spec.ell = number("residue characteristic");
    if (spec.ell < 2 || !is_prime(spec.ell)) fail("ell must be a prime", 0);
    expect(';');
    skip_ws();
    if (pos_ == s_.size()) return spec;
    for (;;) {
      spec.terms.push_back(term());
      skip_ws();
      if (pos_ == s_.size()) break;
      expect(',');
    }
    return spec;
  }

  HeckeOp single() {
    IdealTerm t = term();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input", pos_);
    if (t.target != 0) fail("an operator takes no offset", 0);
    return t.op;
  }

 private:
  IdealTerm term() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || s_[pos_] != 'T') fail("expected an operator 'T...'", pos_);
    ++pos_;
    std::optional<HeckeOp> op;
    try {
      if (peek() == 'q') {
        ++pos_;
        op = HeckeOp::tq(inv_);
      } else if (peek() == 'p' || peek() == 'l') {
        char kind = s_[pos_++];
        expect('(');
        std::uint64_t p = number("prime");
        expect(')');
        op = kind == 'p' ? HeckeOp::tp(p, inv_) : HeckeOp::tl(p, inv_);
      } else {
        op = HeckeOp::for_prime(number("prime"), inv_);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidOperator) throw;
      throw Error(ErrorKind::InvalidOperator,
                  std::string(e.what()) + " (at offset " + std::to_string(start) + ")");
    }
    skip_ws();
    Integer target = 0;
    if (peek() == '+' || peek() == '-') {
      const bool plus = s_[pos_++] == '+';
      Integer c = to_integer(number("integer offset"));
      target = plus ? Integer(-c) : c;
    }
    return IdealTerm{*op, target};
  }

  std::uint64_t number(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      const std::uint64_t d = static_cast<std::uint64_t>(s_[pos_] - '0');
      if (v > (UINT64_MAX - d) / 10) fail("number too large", start);
      v = v * 10 + d;
      ++pos_;
    }
    if (pos_ == start) fail(std::string("expected ") + what, start);
    return v;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    std::ostringstream os;
    os << msg << " at offset " << at << "\n  " << s_ << "\n  " << std::string(at, ' ') << '^';
    throw Error(ErrorKind::ParseError, os.str());
  }

  std::string_view s_;
  const LevelInvariants& inv_;
  std::size_t pos_ = 0;
};

}  // namespace

IdealSpec parse_ideal(std::string_view text, const LevelInvariants& inv) {
  return IdealParser(text, inv).parse();
}

HeckeOp parse_operator(std::string_view text, const LevelInvariants& inv) {
  return IdealParser(text, inv).single();
}

GroupEndo tq_presentation_endo(const SigmaModel& model, const PresentedGroup& pg) {
  const Presentation& p = pg.presentation;
  const std::size_t r = p.labels.size();
  std::vector<std::size_t> image(r);
  for (std::size_t j = 0; j < r; ++j) image[p.column_of(model.frobenius(p.labels[j]))] = j;
  SparseMatrix perm(r);
  for (std::size_t i = 0; i < r; ++i) perm.add_row({{image[i], Integer(1)}});
  return induced_endo(pg.group, perm);
}

IntMatrix tq_closed_matrix(const Decomposition& dec, const LevelInvariants& inv) {
  const std::size_t k = dec.summands.size();
  IntMatrix m(k, k);
  auto at = [&](const std::string& label) -> std::size_t {
    for (std::size_t i = 0; i < k; ++i)
      if (dec.summands[i].label == label) return i;
    throw Error(ErrorKind::InternalInconsistency, "missing summand " + label);
  };
  auto u = [](std::size_t i) { return "u" + std::to_string(i); };
  auto v = [](std::size_t i) { return "v" + std::to_string(i); };
  const std::size_t P = std::size_t{1} << inv.nu;
  const std::size_t H = P / 2;

  switch (dec.case_tag) {
    case CaseTag::Case1:
      m(0, 0) = 1;
      return m;
    case CaseTag::Case2:
      m(0, 0) = 1;
      for (std::size_t i = 1; i < P; ++i) m(at(v(i)), at(v(i))) = (i % 2) ? -1 : 1;
      return m;
    case CaseTag::Case3:
    case CaseTag::Case4: {
      // 2n in Case3, 6n in Case4
      const Integer shift = inv.n_times(dec.case_tag == CaseTag::Case3 ? 2 : 6);
      m(0, 0) = 1 + shift;
      if (P >= 4) {
        for (std::size_t i = 1; i + 1 <= H; ++i) m(at(u(2 * i)), 0) += 1;
        for (std::size_t kk = 1; kk + 2 <= H; ++kk) {
          m(at(u(2 * kk - 1)), at(u(2 * kk - 1))) = 1;
          m(at(u(2 * kk)), at(u(2 * kk - 1))) = 1;
          m(at(u(2 * kk)), at(u(2 * kk))) = 1;
        }
        const std::size_t last = at(u(P - 3));
        m(0, last) = shift;
        m(last, last) += 1;
        for (std::size_t i = 1; i + 2 <= H; ++i) m(at(u(2 * i)), last) += 1;
        m(at(u(P - 2)), at(u(P - 2))) = 1;
      }
      if (dec.case_tag == CaseTag::Case4)
        for (std::size_t i = 1; i < P; ++i) m(at(v(i)), at(v(i))) = (i % 2) ? -1 : 1;
      return m;
    }
  }
  return m;
}

HeckeModule hecke_module(const SigmaModel& model, const PresentedGroup& pg) {
  return HeckeModule{pg.group, tq_presentation_endo(model, pg)};
}

HeckeModule hecke_module(const Decomposition& dec) {
  std::vector<Integer> orders = dec.orders();
  FinAbGroup g = group_from_orders(orders);
  GroupEndo tq = induced_endo(g, dec.tq_matrix);
  return HeckeModule{std::move(g), std::move(tq)};
}

GroupEndo operator_endo(const HeckeModule& mod, const HeckeOp& op, const LevelInvariants& inv) {
  if (op.kind() == HeckeKind::Tq) return mod.tq;
  return GroupEndo::scalar(mod.group, *scalar_of(op, inv));
}

KernelResult eisenstein_kernel(const LevelInvariants& inv, const HeckeModule& mod,
                               const IdealSpec& ideal) {
  std::vector<GroupEndo> endos;
  endos.push_back(GroupEndo::scalar(mod.group, to_integer(ideal.ell)));
  for (const auto& t : ideal.terms)
    endos.push_back(operator_endo(mod, t.op, inv).minus_scalar(t.target));

  KernelResult res;
  res.kernel = kernel_of_endos(mod.group, endos);
  const auto& f = res.kernel.structure.invariant_factors();
  bool elementary = res.kernel.structure.is_finite();
  for (const auto& d : f) elementary = elementary && d == to_integer(ideal.ell);
  if (elementary) res.dimension = f.size();
  return res;
}

bool check_involution(const FinAbGroup& g, const GroupEndo& endo) { return is_involution(g, endo); }

std::vector<Check> cross_validate_tq(const PresentedGroup& pg, const GroupEndo& tq,
                                     const Decomposition& dec) {
  std::vector<Check> out;
  const FinAbGroup& g = pg.group;
  std::vector<GroupElement> gens;
  for (const auto& s : dec.summands) gens.push_back(pg.evaluate(s.generator));
  for (std::size_t j = 0; j < gens.size(); ++j) {
    GroupElement lhs = tq.apply(gens[j]);
    GroupElement rhs = g.zero();
    std::ostringstream formula;
    bool first = true;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const Integer& c = dec.tq_matrix(i, j);
      if (c == 0) continue;
      rhs = g.add(rhs, g.scale(c, gens[i]));
      formula << (first ? "" : " + ") << c << "*" << dec.summands[i].label;
      first = false;
    }
    out.push_back({"tq:" + dec.summands[j].label, lhs == rhs,
                   "T_q(" + dec.summands[j].label + ") = " + (first ? "0" : formula.str())});
  }
  return out;
}

}  // namespace phiq
