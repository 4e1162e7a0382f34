#include "phiq/abelian.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <sstream>

#include "phiq/error.hpp"

namespace phiq {

bool GroupElement::is_zero() const {
  for (const auto& c : coords)
    if (c != 0) return false;
  return true;
}

namespace {

using SparseRow = std::map<std::size_t, Integer>;

// Result of eliminating generators that occur with coefficient +-1.
struct Reduced {
  std::vector<std::size_t> alive;  // surviving ambient generators, increasing
  IntMatrix relations;             // relations among the survivors
  std::vector<SparseRow> embed;    // ambient generator -> combination of survivor positions
};

void add_to(SparseRow& row, std::size_t j, const Integer& v, std::vector<std::set<std::size_t>>& col_rows,
            std::size_t row_id) {
  if (v == 0) return;
  auto [it, fresh] = row.try_emplace(j, v);
  if (fresh) {
    col_rows[j].insert(row_id);
    return;
  }
  it->second += v;
  if (it->second == 0) {
    row.erase(it);
    col_rows[j].erase(row_id);
  }
}

// Tietze moves: a relation c*g + sum a_j x_j with c = +-1 lets g be replaced by
// -c * sum a_j x_j everywhere. Pivots are picked by Markowitz cost to limit fill-in.
Reduced eliminate_unit_pivots(const SparseMatrix& rel) {
  const std::size_t r = rel.cols();
  std::vector<SparseRow> rows(rel.rows());
  std::vector<std::set<std::size_t>> col_rows(r);
  for (std::size_t i = 0; i < rel.rows(); ++i)
    for (const auto& [j, v] : rel.row(i)) {
      rows[i].emplace(j, v);
      col_rows[j].insert(i);
    }
  std::vector<bool> row_alive(rows.size(), true), gen_alive(r, true);
  std::vector<std::pair<std::size_t, SparseRow>> subs;

  for (;;) {
    std::size_t best_row = 0, best_gen = 0;
    std::size_t best_cost = SIZE_MAX;
    for (std::size_t i = 0; i < rows.size() && best_cost > 0; ++i) {
      if (!row_alive[i]) continue;
      for (const auto& [g, c] : rows[i]) {
        if (c != 1 && c != -1) continue;
        const std::size_t cost = (rows[i].size() - 1) * (col_rows[g].size() - 1);
        if (cost < best_cost) {
          best_cost = cost;
          best_row = i;
          best_gen = g;
          if (cost == 0) break;
        }
      }
    }
    if (best_cost == SIZE_MAX) break;

    const SparseRow pivot = rows[best_row];
    const Integer c = pivot.at(best_gen);
    SparseRow expr;
    for (const auto& [j, a] : pivot)
      if (j != best_gen) expr.emplace(j, -c * a);
    const std::vector<std::size_t> touched(col_rows[best_gen].begin(), col_rows[best_gen].end());
    for (std::size_t s : touched) {
      if (s == best_row) continue;
      const Integer f = -rows[s].at(best_gen) * c;
      for (const auto& [j, b] : pivot) add_to(rows[s], j, f * b, col_rows, s);
    }
    for (const auto& [j, a] : pivot) col_rows[j].erase(best_row);
    rows[best_row].clear();
    row_alive[best_row] = false;
    gen_alive[best_gen] = false;
    subs.emplace_back(best_gen, std::move(expr));
  }

  Reduced out;
  std::vector<std::size_t> pos(r, SIZE_MAX);
  for (std::size_t j = 0; j < r; ++j)
    if (gen_alive[j]) {
      pos[j] = out.alive.size();
      out.alive.push_back(j);
    }
  std::size_t live_rows = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (row_alive[i] && !rows[i].empty()) ++live_rows;
  out.relations = IntMatrix(live_rows, out.alive.size());
  for (std::size_t i = 0, t = 0; i < rows.size(); ++i) {
    if (!row_alive[i] || rows[i].empty()) continue;
    for (const auto& [j, a] : rows[i]) out.relations(t, pos[j]) = a;
    ++t;
  }
  // Later eliminations only involve generators alive at that time, so walk backwards.
  out.embed.assign(r, {});
  for (std::size_t j : out.alive) out.embed[j].emplace(pos[j], 1);
  for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
    SparseRow img;
    for (const auto& [j, a] : it->second)
      for (const auto& [p, b] : out.embed[j]) {
        Integer& slot = img[p];
        slot += a * b;
        if (slot == 0) img.erase(p);
      }
    out.embed[it->first] = std::move(img);
  }
  return out;
}

}  // namespace

FinAbGroup cokernel(const IntMatrix& relations, std::size_t ambient_rank) {
  if (relations.rows() > 0 && relations.cols() != ambient_rank)
    throw Error(ErrorKind::OutOfRange, "relation width differs from ambient rank");
  if (relations.rows() == 0) return cokernel(SparseMatrix(ambient_rank));
  return cokernel(SparseMatrix::from_dense(relations));
}

FinAbGroup cokernel(SparseMatrix rel) {
  const std::size_t r = rel.cols();
  Reduced red = eliminate_unit_pivots(rel);
  const std::size_t a = red.alive.size();
  SmithDecomposition snf = smith_normal_form(red.relations, {.want_u = false, .want_v = true});

  // d_j for every surviving index; indices beyond the diagonal are free.
  std::vector<Integer> d(a, 0);
  for (std::size_t j = 0; j < snf.diagonal.size(); ++j) d[j] = snf.diagonal[j];

  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < a; ++j)
    if (d[j] != 1) kept.push_back(j);

  FinAbGroup g;
  g.relations_ = std::move(rel);
  for (std::size_t j : kept) {
    if (d[j] == 0)
      ++g.rank_free_;
    else
      g.invariant_factors_.push_back(d[j]);
  }
  const std::size_t k = kept.size();
  g.to_canonical_ = IntMatrix(k, r);
  g.from_canonical_ = IntMatrix(r, k);
  // Row-vector convention on survivors: y = x V, x = y V^{-1}; eliminated
  // generators go through their substitution and lift to zero.
  for (std::size_t amb = 0; amb < r; ++amb)
    for (const auto& [p, b] : red.embed[amb])
      for (std::size_t t = 0; t < k; ++t) g.to_canonical_(t, amb) += b * snf.V(p, kept[t]);
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t p = 0; p < a; ++p) g.from_canonical_(red.alive[p], t) = snf.V_inv(kept[t], p);
  return g;
}

FinAbGroup group_from_orders(std::span<const Integer> orders) {
  return cokernel(IntMatrix::diagonal(orders), orders.size());
}

Integer FinAbGroup::modulus(std::size_t i) const {
  return i < invariant_factors_.size() ? invariant_factors_[i] : Integer(0);
}

std::vector<Integer> FinAbGroup::moduli() const {
  std::vector<Integer> m = invariant_factors_;
  m.resize(canonical_rank(), 0);
  return m;
}

Integer FinAbGroup::order() const {
  if (!is_finite()) throw Error(ErrorKind::InfiniteOrder, "group has a free part");
  Integer o = 1;
  for (const auto& d : invariant_factors_) o *= d;
  return o;
}

Integer FinAbGroup::exponent() const {
  if (!is_finite()) throw Error(ErrorKind::InfiniteOrder, "group has a free part");
  return invariant_factors_.empty() ? Integer(1) : invariant_factors_.back();
}

GroupElement FinAbGroup::element(std::span<const Integer> ambient) const {
  return reduce(to_canonical_.apply(ambient));
}

GroupElement FinAbGroup::reduce(std::vector<Integer> c) const {
  if (c.size() != canonical_rank()) throw Error(ErrorKind::OutOfRange, "coordinate count mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = reduce_mod(c[i], modulus(i));
  return GroupElement{std::move(c)};
}

GroupElement FinAbGroup::zero() const { return GroupElement{std::vector<Integer>(canonical_rank())}; }

GroupElement FinAbGroup::basis(std::size_t i) const {
  GroupElement e = zero();
  e.coords.at(i) = 1;
  return reduce(std::move(e.coords));
}

std::vector<Integer> FinAbGroup::lift(const GroupElement& x) const {
  return from_canonical_.apply(x.coords);
}

GroupElement FinAbGroup::add(const GroupElement& a, const GroupElement& b) const {
  std::vector<Integer> c(canonical_rank());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] + b.coords[i];
  return reduce(std::move(c));
}

GroupElement FinAbGroup::sub(const GroupElement& a, const GroupElement& b) const {
  std::vector<Integer> c(canonical_rank());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] - b.coords[i];
  return reduce(std::move(c));
}

GroupElement FinAbGroup::scale(const Integer& s, const GroupElement& a) const {
  std::vector<Integer> c(canonical_rank());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = s * a.coords[i];
  return reduce(std::move(c));
}

std::string FinAbGroup::structure_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& d : invariant_factors_) {
    os << (first ? "" : " x ") << "Z/" << d;
    first = false;
  }
  if (rank_free_) os << (first ? "" : " x ") << "Z^" << rank_free_;
  return os.str();
}

// ---- endomorphisms ----

GroupEndo::GroupEndo(IntMatrix m, std::vector<Integer> moduli)
    : matrix_(std::move(m)), moduli_(std::move(moduli)) {
  normalize();
}

void GroupEndo::normalize() {
  for (std::size_t i = 0; i < matrix_.rows(); ++i)
    for (std::size_t j = 0; j < matrix_.cols(); ++j)
      matrix_(i, j) = reduce_mod(matrix_(i, j), moduli_[i]);
}

GroupElement GroupEndo::apply(const GroupElement& x) const {
  std::vector<Integer> y = matrix_.apply(x.coords);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = reduce_mod(y[i], moduli_[i]);
  return GroupElement{std::move(y)};
}

GroupEndo GroupEndo::identity(const FinAbGroup& g) { return scalar(g, 1); }

GroupEndo GroupEndo::scalar(const FinAbGroup& g, const Integer& c) {
  return GroupEndo(c * IntMatrix::identity(g.canonical_rank()), g.moduli());
}

GroupEndo GroupEndo::from_canonical(const FinAbGroup& g, const IntMatrix& m) {
  const std::size_t k = g.canonical_rank();
  if (m.rows() != k || m.cols() != k)
    throw Error(ErrorKind::IncompatibleEndo, "canonical matrix has the wrong shape");
  // Column j must be killed by d_j.
  for (std::size_t j = 0; j < k; ++j) {
    const Integer dj = g.modulus(j);
    for (std::size_t i = 0; i < k; ++i) {
      if (!divides(g.modulus(i), dj * m(i, j))) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << ")=" << m(i, j) << " does not respect Z/" << dj
           << " -> Z/" << g.modulus(i);
        throw Error(ErrorKind::IncompatibleEndo, os.str());
      }
    }
  }
  return GroupEndo(m, g.moduli());
}

GroupEndo GroupEndo::compose(const GroupEndo& other) const {
  return GroupEndo(matrix_ * other.matrix_, moduli_);
}

GroupEndo GroupEndo::plus(const GroupEndo& other) const {
  return GroupEndo(matrix_ + other.matrix_, moduli_);
}

GroupEndo GroupEndo::minus(const GroupEndo& other) const {
  return GroupEndo(matrix_ - other.matrix_, moduli_);
}

GroupEndo GroupEndo::minus_scalar(const Integer& c) const {
  return GroupEndo(matrix_ - c * IntMatrix::identity(matrix_.rows()), moduli_);
}

GroupEndo induced_endo(const FinAbGroup& g, const IntMatrix& ambient) {
  return induced_endo(g, SparseMatrix::from_dense(ambient));
}

GroupEndo induced_endo(const FinAbGroup& g, const SparseMatrix& ambient) {
  const std::size_t r = g.ambient_rank();
  if (ambient.rows() != r || ambient.cols() != r)
    throw Error(ErrorKind::IncompatibleEndo, "ambient matrix has the wrong shape");

  const SparseMatrix& rel = g.relations();
  for (std::size_t i = 0; i < rel.rows(); ++i) {
    if (!g.element(ambient.apply(rel.row(i))).is_zero()) {
      throw Error(ErrorKind::IncompatibleEndo,
                  "image of relation row " + std::to_string(i) + " is nonzero in the quotient");
    }
  }
  const std::size_t k = g.canonical_rank();
  IntMatrix m(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<Integer> x = g.lift(g.basis(j));
    GroupElement y = g.element(ambient.apply(x));
    for (std::size_t i = 0; i < k; ++i) m(i, j) = y.coords[i];
  }
  return GroupEndo::from_canonical(g, m);
}

// ---- subgroups and kernels ----

Subgroup subgroup_generated(const FinAbGroup& g, std::span<const GroupElement> gens) {
  const std::size_t k = g.canonical_rank();
  const std::size_t s = gens.size();
  // Relations among generators: c with sum c_i g_i in D Z^k, i.e. (c, w) with
  // c*G + w*D = 0; the kernel of [G; D]^T projected to c.
  IntMatrix mt(k, s + k);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t t = 0; t < k; ++t) mt(t, i) = gens[i].coords.at(t);
  for (std::size_t t = 0; t < k; ++t) mt(t, s + t) = g.modulus(t);

  IntMatrix ker = integer_kernel(mt);
  IntMatrix rel(ker.cols(), s);
  for (std::size_t c = 0; c < ker.cols(); ++c)
    for (std::size_t i = 0; i < s; ++i) rel(c, i) = ker(i, c);

  Subgroup out;
  out.structure = cokernel(rel, s);
  for (std::size_t t = 0; t < out.structure.canonical_rank(); ++t) {
    std::vector<Integer> c = out.structure.lift(out.structure.basis(t));
    GroupElement x = g.zero();
    for (std::size_t i = 0; i < s; ++i)
      if (c[i] != 0) x = g.add(x, g.scale(c[i], gens[i]));
    out.generators.push_back(std::move(x));
  }
  return out;
}

Subgroup kernel_of_endos(const FinAbGroup& g, std::span<const GroupEndo> endos) {
  const std::size_t k = g.canonical_rank();
  std::vector<GroupElement> gens;
  if (endos.empty()) {
    for (std::size_t i = 0; i < k; ++i) gens.push_back(g.basis(i));
    return subgroup_generated(g, gens);
  }
  // Solve E_t y = D z_t for all t: columns [y | z_1 ... z_T].
  const std::size_t T = endos.size();
  IntMatrix a(T * k, k + T * k);
  for (std::size_t t = 0; t < T; ++t) {
    const IntMatrix& e = endos[t].matrix();
    if (e.rows() != k) throw Error(ErrorKind::IncompatibleEndo, "endomorphism of another group");
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) a(t * k + i, j) = e(i, j);
      a(t * k + i, k + t * k + i) = -g.modulus(i);
    }
  }
  IntMatrix ker = integer_kernel(a);
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    std::vector<Integer> y(k);
    for (std::size_t i = 0; i < k; ++i) y[i] = ker(i, c);
    GroupElement x = g.reduce(std::move(y));
    if (!x.is_zero()) gens.push_back(std::move(x));
  }
  return subgroup_generated(g, gens);
}

Integer element_order(const FinAbGroup& g, const GroupElement& x) {
  Integer o = 1;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    const Integer d = g.modulus(i);
    if (d == 0) {
      if (x.coords[i] != 0) throw Error(ErrorKind::InfiniteOrder, "element has a free component");
      continue;
    }
    o = lcm(o, d / gcd(x.coords[i], d));
  }
  return o;
}

Integer subgroup_order(const FinAbGroup& g, std::span<const GroupElement> gens) {
  return subgroup_generated(g, gens).structure.order();
}

bool is_involution(const FinAbGroup& g, const GroupEndo& f) {
  return f.compose(f) == GroupEndo::identity(g);
}

}  // namespace phiq
