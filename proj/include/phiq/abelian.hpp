#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phiq/integer.hpp"

namespace phiq {

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(std::span<const Integer> entries);
  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Integer> row(std::size_t i) const;
  std::vector<Integer> column(std::size_t j) const;

  IntMatrix transpose() const;
  /// Column-vector action: returns M*x.
  std::vector<Integer> apply(std::span<const Integer> x) const;
  bool is_zero() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator*(const Integer& c, const IntMatrix& a);
  bool operator==(const IntMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

std::string to_string(const IntMatrix& m);

/// Row-sparse integer matrix; rows hold (column, nonzero value) in increasing column order.
class SparseMatrix {
 public:
  using Row = std::vector<std::pair<std::size_t, Integer>>;

  SparseMatrix() = default;
  explicit SparseMatrix(std::size_t cols) : cols_(cols) {}
  static SparseMatrix from_dense(const IntMatrix& m);
  IntMatrix to_dense() const;

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  const Row& row(std::size_t i) const { return rows_.at(i); }
  std::vector<Integer> dense_row(std::size_t i) const;

  /// Sorts by column, merges duplicates and drops zeros.
  void add_row(Row r);
  /// M x for a dense vector x.
  std::vector<Integer> apply(std::span<const Integer> x) const;
  /// M x for a sparse vector x.
  std::vector<Integer> apply(const Row& x) const;

 private:
  std::size_t cols_ = 0;
  std::vector<Row> rows_;
};

/// Bareiss fraction-free elimination; square input only.
Integer determinant(const IntMatrix& m);

/// U*A*V = D with U, V unimodular and d_1 | d_2 | ... | d_r, zeros last.
/// `V_inv` is carried along so that cokernel coordinates can be lifted back.
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix V_inv;
  std::vector<Integer> diagonal;  // min(rows, cols) entries, nonnegative
  std::size_t rank = 0;
};

struct SmithOptions {
  bool want_u = true;
  bool want_v = true;
};

SmithDecomposition smith_normal_form(const IntMatrix& a, SmithOptions options = {});

/// Integer basis (as columns) of {x : A x = 0}.
IntMatrix integer_kernel(const IntMatrix& a);

/// Coordinates in the canonical basis of a FinAbGroup, reduced modulo each invariant factor.
struct GroupElement {
  std::vector<Integer> coords;

  bool is_zero() const;
  bool operator==(const GroupElement& other) const = default;
};

/// Z^r / rowspace(relations), carried in Smith-canonical coordinates.
///
/// Canonical coordinates are indexed 0..k-1: first the finite invariant
/// factors (each >= 2, dividing chain), then `rank_free` copies of Z.
class FinAbGroup {
 public:
  FinAbGroup() = default;

  const std::vector<Integer>& invariant_factors() const noexcept { return invariant_factors_; }
  std::size_t rank_free() const noexcept { return rank_free_; }
  std::size_t ambient_rank() const noexcept { return relations_.cols(); }
  std::size_t canonical_rank() const noexcept { return invariant_factors_.size() + rank_free_; }
  bool is_finite() const noexcept { return rank_free_ == 0; }
  bool is_trivial() const noexcept { return canonical_rank() == 0; }

  /// Modulus of canonical coordinate i: the invariant factor, or 0 for a free coordinate.
  Integer modulus(std::size_t i) const;
  std::vector<Integer> moduli() const;

  const SparseMatrix& relations() const noexcept { return relations_; }
  const IntMatrix& to_canonical() const noexcept { return to_canonical_; }
  const IntMatrix& from_canonical() const noexcept { return from_canonical_; }

  Integer order() const;
  Integer exponent() const;

  GroupElement element(std::span<const Integer> ambient) const;
  GroupElement reduce(std::vector<Integer> canonical) const;
  GroupElement zero() const;
  GroupElement basis(std::size_t i) const;
  std::vector<Integer> lift(const GroupElement& x) const;

  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement sub(const GroupElement& a, const GroupElement& b) const;
  GroupElement scale(const Integer& c, const GroupElement& a) const;

  /// e.g. "Z/8 x Z/24", "0", "Z/5 x Z^1"
  std::string structure_string() const;

  friend FinAbGroup cokernel(SparseMatrix relations);

 private:
  std::vector<Integer> invariant_factors_;
  std::size_t rank_free_ = 0;
  SparseMatrix relations_;
  IntMatrix to_canonical_;    // k x r
  IntMatrix from_canonical_;  // r x k
};

/// Z^ambient_rank modulo the row space of `relations`; trivial factors dropped.
FinAbGroup cokernel(const IntMatrix& relations, std::size_t ambient_rank);
/// Same, for relations over relations.cols() generators.
FinAbGroup cokernel(SparseMatrix relations);

/// Finite abelian group with the given cyclic orders as ambient generators.
FinAbGroup group_from_orders(std::span<const Integer> orders);

/// Endomorphism in canonical coordinates (column convention).
class GroupEndo {
 public:
  GroupEndo() = default;

  const IntMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<Integer>& moduli() const noexcept { return moduli_; }

  GroupElement apply(const GroupElement& x) const;

  static GroupEndo identity(const FinAbGroup& g);
  static GroupEndo scalar(const FinAbGroup& g, const Integer& c);
  /// Throws IncompatibleEndo unless the matrix defines a homomorphism of g.
  static GroupEndo from_canonical(const FinAbGroup& g, const IntMatrix& m);

  /// (*this) o other
  GroupEndo compose(const GroupEndo& other) const;
  GroupEndo plus(const GroupEndo& other) const;
  GroupEndo minus(const GroupEndo& other) const;
  GroupEndo minus_scalar(const Integer& c) const;

  bool operator==(const GroupEndo& other) const = default;

 private:
  GroupEndo(IntMatrix m, std::vector<Integer> moduli);
  void normalize();

  IntMatrix matrix_;
  std::vector<Integer> moduli_;
};

/// Endomorphism of g induced by an ambient-generator matrix (column convention:
/// column j is the image of generator j). Throws IncompatibleEndo if the
/// relation lattice is not preserved.
GroupEndo induced_endo(const FinAbGroup& g, const IntMatrix& ambient);
GroupEndo induced_endo(const FinAbGroup& g, const SparseMatrix& ambient);

struct Subgroup {
  FinAbGroup structure;                 // abstract structure of the subgroup
  std::vector<GroupElement> generators;  // image of each canonical basis vector of `structure`
};

Subgroup subgroup_generated(const FinAbGroup& g, std::span<const GroupElement> gens);
Subgroup kernel_of_endos(const FinAbGroup& g, std::span<const GroupEndo> endos);

Integer element_order(const FinAbGroup& g, const GroupElement& x);
Integer subgroup_order(const FinAbGroup& g, std::span<const GroupElement> gens);
bool is_involution(const FinAbGroup& g, const GroupEndo& f);

}  // namespace phiq
