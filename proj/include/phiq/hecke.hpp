#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phiq/abelian.hpp"
#include "phiq/compgroup.hpp"
#include "phiq/levels.hpp"

namespace phiq {

enum class HeckeKind { Tq, Tp, Tl };

/// T_q, T_p (p | N) or T_l (l prime to Nq), validated against a level.
class HeckeOp {
 public:
  static HeckeOp tq(const LevelInvariants& inv);
  static HeckeOp tp(std::uint64_t p, const LevelInvariants& inv);
  static HeckeOp tl(std::uint64_t l, const LevelInvariants& inv);
  /// T_n for a prime n, classified by how n meets the level.
  static HeckeOp for_prime(std::uint64_t n, const LevelInvariants& inv);

  HeckeKind kind() const noexcept { return kind_; }
  std::uint64_t prime() const noexcept { return prime_; }
  std::string to_string() const;

 private:
  HeckeOp(HeckeKind k, std::uint64_t p) : kind_(k), prime_(p) {}
  HeckeKind kind_;
  std::uint64_t prime_;
};

/// T_p -> p, T_l -> l+1, T_q -> 1 in Case1 and nullopt (not a scalar) otherwise.
std::optional<Integer> scalar_of(const HeckeOp& op, const LevelInvariants& inv);

/// Generator `op - target` of an ideal.
struct IdealTerm {
  HeckeOp op;
  Integer target;
};

struct IdealSpec {
  std::uint64_t ell = 0;
  std::vector<IdealTerm> terms;

  std::string to_string() const;
};

/// Grammar: `ell ; term, term, ...` with term = op [(+|-) integer] and
/// op = Tq | Tp(p) | Tl(l) | T<prime>. Whitespace is ignored.
/// Throws ParseError (message carries the 0-based offset) or InvalidOperator.
IdealSpec parse_ideal(std::string_view text, const LevelInvariants& inv);

/// A single operator token in the same grammar, e.g. "Tq", "Tp(7)", "T2".
HeckeOp parse_operator(std::string_view text, const LevelInvariants& inv);

/// psi_x -> psi_Frob(x) on the presentation, pushed to canonical coordinates.
GroupEndo tq_presentation_endo(const SigmaModel& model, const PresentedGroup& pg);

/// T_q on the summand basis of a closed-form decomposition.
IntMatrix tq_closed_matrix(const Decomposition& dec, const LevelInvariants& inv);

/// A group together with T_q; every other operator is a scalar.
struct HeckeModule {
  FinAbGroup group;
  GroupEndo tq;
};

HeckeModule hecke_module(const SigmaModel& model, const PresentedGroup& pg);
/// Closed route: Z/order_i summands with the closed T_q matrix (checked well defined).
HeckeModule hecke_module(const Decomposition& dec);

GroupEndo operator_endo(const HeckeModule& mod, const HeckeOp& op, const LevelInvariants& inv);

struct KernelResult {
  Subgroup kernel;
  std::optional<std::size_t> dimension;  // set only when the kernel is elementary ell-torsion
};

/// Common kernel of ell and every `op - target`.
KernelResult eisenstein_kernel(const LevelInvariants& inv, const HeckeModule& mod,
                               const IdealSpec& ideal);

bool check_involution(const FinAbGroup& g, const GroupEndo& endo);

/// T_q(gen_j) computed through the presentation equals sum_i M_ij gen_i for every summand.
std::vector<Check> cross_validate_tq(const PresentedGroup& pg, const GroupEndo& tq,
                                     const Decomposition& dec);

}  // namespace phiq
