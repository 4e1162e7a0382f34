#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "phiq/abelian.hpp"
#include "phiq/levels.hpp"

namespace phiq {

/// Uncollapsed presentations are only materialized up to this many points.
inline constexpr std::size_t kFullPresentationLimit = 4000;

enum class PointKind { Sigma2, Sigma4, Sigma6 };

/// e(s) = #Aut(s)/2
int weight_of(PointKind kind);

/// Abstract supersingular set split by automorphism order, with Frobenius.
///
/// Points are labelled s1.., w1.., t1.. for Sigma_2, Sigma_4, Sigma_6. Frobenius
/// pairs w_{2k-1} <-> w_{2k} and t_{2k-1} <-> t_{2k}; a stratum with a single
/// point (nu = 0) is fixed. On Sigma_2 it is `frob2` (empty means identity).
struct SigmaModel {
  Integer s2_count;
  std::size_t s4_count = 0;
  std::size_t s6_count = 0;
  std::vector<std::size_t> frob2;
  std::vector<std::size_t> frob4;
  std::vector<std::size_t> frob6;

  Integer point_count() const { return s2_count + s4_count + s6_count; }
  /// Frobenius image of a point label, e.g. "t1" -> "t2".
  std::string frobenius(const std::string& label) const;
};

SigmaModel build_sigma_model(const LevelInvariants& inv,
                             std::optional<std::vector<std::size_t>> frob2 = std::nullopt);

enum class PresentationKind {
  Full,       // one generator per point
  Collapsed,  // all of Sigma_2 identified to the single generator "s"
};

/// Generators psi_x with relations e(x0) psi_x0 - e(x) psi_x (star at the
/// first point) and sum_x psi_x = 0.
struct Presentation {
  PresentationKind kind = PresentationKind::Collapsed;
  std::vector<std::string> labels;
  std::vector<int> weights;
  SparseMatrix relations;
  std::unordered_map<std::string, std::size_t> index;

  /// Generator column carrying psi of a point label; "s" denotes the fixed Sigma_2 point.
  std::size_t column_of(const std::string& label) const;
};

Presentation build_presentation(const SigmaModel& model, PresentationKind kind);

/// Formal integer combination of Psi symbols.
struct PsiExpr {
  std::vector<std::pair<std::string, Integer>> terms;

  static PsiExpr of(const std::string& label, const Integer& coeff = 1) {
    return PsiExpr{{{label, coeff}}};
  }
  PsiExpr& add(const std::string& label, const Integer& coeff) {
    terms.emplace_back(label, coeff);
    return *this;
  }
  std::string to_string() const;
};

struct PresentedGroup {
  Presentation presentation;
  FinAbGroup group;

  GroupElement psi(const std::string& label) const;
  GroupElement evaluate(const PsiExpr& expr) const;
};

/// Throws InfiniteQuotient if the relations leave a free part.
PresentedGroup presented_group(Presentation pres);

struct Summand {
  std::string label;  // "Phi", "B0", "A0", "u<i>", "v<i>"
  Integer order;
  PsiExpr generator;
  std::string note;
};

struct Decomposition {
  CaseTag case_tag = CaseTag::Case1;
  Integer e_case;  // 2^u * 3^v
  std::vector<Summand> summands;
  IntMatrix tq_matrix;  // column j = T_q(summand j) in summand coordinates
  std::vector<std::string> notes;

  Integer order() const;
  std::vector<Integer> orders() const;
};

/// Structure of the component group with explicit generators, by case.
Decomposition closed_form(const LevelInvariants& inv);

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;

  bool passed() const;
  std::vector<Check> failures() const;
};

/// Orders of every summand generator, directness of the sum, total order and
/// matching invariant factors, all checked inside the presented group.
VerificationReport verify_decomposition(const PresentedGroup& pg, const Decomposition& dec);

}  // namespace phiq
