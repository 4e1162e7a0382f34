#include <algorithm>
#include <sstream>

#include "phiq/abelian.hpp"
#include "phiq/error.hpp"

namespace phiq {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::OutOfRange, "ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(std::span<const Integer> entries) {
  IntMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorKind::OutOfRange, "row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<Integer> IntMatrix::row(std::size_t i) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

std::vector<Integer> IntMatrix::column(std::size_t j) const {
  std::vector<Integer> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<Integer> IntMatrix::apply(std::span<const Integer> x) const {
  if (x.size() != cols_) throw Error(ErrorKind::OutOfRange, "matrix/vector size mismatch");
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < cols_; ++j)
    if (x[j] != 0) nz.push_back(j);
  std::vector<Integer> y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Integer& acc = y[i];
    for (std::size_t j : nz) {
      const Integer& a = (*this)(i, j);
      if (a != 0) acc += a * x[j];
    }
  }
  return y;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v == 0; });
}

SparseMatrix SparseMatrix::from_dense(const IntMatrix& m) {
  SparseMatrix s(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Row r;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) r.emplace_back(j, m(i, j));
    s.rows_.push_back(std::move(r));
  }
  return s;
}

IntMatrix SparseMatrix::to_dense() const {
  IntMatrix m(rows_.size(), cols_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [j, v] : rows_[i]) m(i, j) = v;
  return m;
}

std::vector<Integer> SparseMatrix::dense_row(std::size_t i) const {
  std::vector<Integer> out(cols_);
  for (const auto& [j, v] : row(i)) out[j] = v;
  return out;
}

void SparseMatrix::add_row(Row r) {
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Row merged;
  for (auto& [j, v] : r) {
    if (j >= cols_) throw Error(ErrorKind::OutOfRange, "sparse column out of range");
    if (!merged.empty() && merged.back().first == j)
      merged.back().second += v;
    else
      merged.emplace_back(j, std::move(v));
  }
  std::erase_if(merged, [](const auto& e) { return e.second == 0; });
  rows_.push_back(std::move(merged));
}

std::vector<Integer> SparseMatrix::apply(std::span<const Integer> x) const {
  if (x.size() != cols_) throw Error(ErrorKind::OutOfRange, "matrix/vector size mismatch");
  std::vector<Integer> y(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [j, v] : rows_[i])
      if (x[j] != 0) y[i] += v * x[j];
  return y;
}

std::vector<Integer> SparseMatrix::apply(const Row& x) const {
  std::vector<Integer> dense(cols_);
  for (const auto& [j, v] : x) dense.at(j) += v;
  return apply(dense);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::OutOfRange, "matrix product size mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (b(k, j) != 0) c(i, j) += x * b(k, j);
    }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::OutOfRange, "size mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::OutOfRange, "size mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

IntMatrix operator*(const Integer& s, const IntMatrix& a) {
  IntMatrix c = a;
  for (auto& v : c.data_) v *= s;
  return c;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

Integer determinant(const IntMatrix& input) {
  if (input.rows() != input.cols()) throw Error(ErrorKind::OutOfRange, "determinant of non-square");
  const std::size_t n = input.rows();
  if (n == 0) return 1;
  IntMatrix m = input;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

namespace {

int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }
int cmpabs(const Integer& a, unsigned long b) { return mpz_cmpabs_ui(a.get_mpz_t(), b); }

// Elimination state. Row operations act on A and U; column operations act on
// A, V and (inversely) on V_inv.
class SmithWorker {
 public:
  SmithWorker(const IntMatrix& a, SmithOptions opt)
      : a_(a), m_(a.rows()), n_(a.cols()), opt_(opt) {
    if (opt_.want_u) u_ = IntMatrix::identity(m_);
    if (opt_.want_v) {
      v_ = IntMatrix::identity(n_);
      vinv_ = IntMatrix::identity(n_);
    }
  }

  SmithDecomposition run() {
    const std::size_t lim = std::min(m_, n_);
    std::size_t rank = 0;
    for (std::size_t k = 0; k < lim; ++k) {
      std::size_t pi = 0, pj = 0;
      if (!find_min_pivot(k, pi, pj)) break;
      move_pivot(k, pi, pj);
      clear_cross(k);
      if (a_(k, k) < 0) negate_row(k);
      rank = k + 1;
    }

    std::vector<Integer> diag(lim);
    for (std::size_t i = 0; i < lim; ++i) diag[i] = a_(i, i);
    enforce_divisibility(diag, rank);

    SmithDecomposition out;
    out.D = IntMatrix(m_, n_);
    for (std::size_t i = 0; i < lim; ++i) out.D(i, i) = diag[i];
    out.diagonal = std::move(diag);
    out.rank = rank;
    out.U = std::move(u_);
    out.V = std::move(v_);
    out.V_inv = std::move(vinv_);
    return out;
  }

 private:
  bool find_min_pivot(std::size_t k, std::size_t& pi, std::size_t& pj) const {
    const Integer* best = nullptr;
    for (std::size_t i = k; i < m_; ++i) {
      for (std::size_t j = k; j < n_; ++j) {
        const Integer& x = a_(i, j);
        if (x == 0) continue;
        if (!best || cmpabs(x, *best) < 0) {
          best = &x;
          pi = i;
          pj = j;
          if (cmpabs(x, 1) == 0) return true;
        }
      }
    }
    return best != nullptr;
  }

  void move_pivot(std::size_t k, std::size_t pi, std::size_t pj) {
    if (pi != k) swap_rows(k, pi);
    if (pj != k) swap_cols(k, pj);
  }

  // Reduce row k and column k to the pivot alone, re-pivoting on remainders.
  void clear_cross(std::size_t k) {
    for (;;) {
      std::vector<std::size_t> row_nz;
      for (std::size_t j = k; j < n_; ++j)
        if (a_(k, j) != 0) row_nz.push_back(j);
      for (std::size_t i = k + 1; i < m_; ++i) {
        if (a_(i, k) == 0) continue;
        Integer q = floor_div(a_(i, k), a_(k, k));
        add_row(i, k, -q, row_nz);
      }
      std::vector<std::size_t> col_nz;
      for (std::size_t i = k; i < m_; ++i)
        if (a_(i, k) != 0) col_nz.push_back(i);
      for (std::size_t j = k + 1; j < n_; ++j) {
        if (a_(k, j) == 0) continue;
        Integer q = floor_div(a_(k, j), a_(k, k));
        add_col(j, k, -q, col_nz);
      }

      // Any leftover in the cross is a remainder smaller than the pivot.
      const Integer* best = nullptr;
      std::size_t bi = k, bj = k;
      for (std::size_t i = k + 1; i < m_; ++i)
        if (a_(i, k) != 0 && (!best || cmpabs(a_(i, k), *best) < 0)) {
          best = &a_(i, k);
          bi = i;
          bj = k;
        }
      for (std::size_t j = k + 1; j < n_; ++j)
        if (a_(k, j) != 0 && (!best || cmpabs(a_(k, j), *best) < 0)) {
          best = &a_(k, j);
          bi = k;
          bj = j;
        }
      if (!best) return;
      if (bi != k) swap_rows(k, bi);
      if (bj != k) swap_cols(k, bj);
    }
  }

  // diag(a, b) -> diag(gcd, lcm) until the chain condition holds.
  void enforce_divisibility(std::vector<Integer>& d, std::size_t rank) {
    for (std::size_t i = 0; i < rank; ++i) {
      for (std::size_t j = i + 1; j < rank; ++j) {
        if (divides(d[i], d[j])) continue;
        Integer s, t;
        const Integer a = d[i], b = d[j];
        const Integer g = xgcd(a, b, s, t);
        const Integer ag = a / g, bg = b / g;
        if (opt_.want_u) {
          for (std::size_t c = 0; c < m_; ++c) {
            Integer ui = u_(i, c), uj = u_(j, c);
            u_(i, c) = s * ui + t * uj;
            u_(j, c) = -bg * ui + ag * uj;
          }
        }
        if (opt_.want_v) {
          for (std::size_t r = 0; r < n_; ++r) {
            Integer vi = v_(r, i), vj = v_(r, j);
            v_(r, i) = vi + vj;
            v_(r, j) = -t * bg * vi + s * ag * vj;
          }
          for (std::size_t c = 0; c < n_; ++c) {
            Integer wi = vinv_(i, c), wj = vinv_(j, c);
            vinv_(i, c) = s * ag * wi + t * bg * wj;
            vinv_(j, c) = wj - wi;
          }
        }
        d[i] = g;
        d[j] = a * bg;
        a_(i, i) = d[i];
        a_(j, j) = d[j];
      }
    }
  }

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < n_; ++c) std::swap(a_(i, c), a_(j, c));
    if (opt_.want_u)
      for (std::size_t c = 0; c < m_; ++c) std::swap(u_(i, c), u_(j, c));
  }

  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < m_; ++r) std::swap(a_(r, i), a_(r, j));
    if (opt_.want_v) {
      for (std::size_t r = 0; r < n_; ++r) std::swap(v_(r, i), v_(r, j));
      for (std::size_t c = 0; c < n_; ++c) std::swap(vinv_(i, c), vinv_(j, c));
    }
  }

  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < n_; ++c) a_(i, c) = -a_(i, c);
    if (opt_.want_u)
      for (std::size_t c = 0; c < m_; ++c) u_(i, c) = -u_(i, c);
  }

  // row dst += c * row src
  void add_row(std::size_t dst, std::size_t src, const Integer& c,
               const std::vector<std::size_t>& src_nz) {
    for (std::size_t j : src_nz) a_(dst, j) += c * a_(src, j);
    if (opt_.want_u)
      for (std::size_t j = 0; j < m_; ++j)
        if (u_(src, j) != 0) u_(dst, j) += c * u_(src, j);
  }

  // col dst += c * col src; V_inv picks up the inverse row operation.
  void add_col(std::size_t dst, std::size_t src, const Integer& c,
               const std::vector<std::size_t>& src_nz) {
    for (std::size_t i : src_nz) a_(i, dst) += c * a_(i, src);
    if (opt_.want_v) {
      for (std::size_t r = 0; r < n_; ++r)
        if (v_(r, src) != 0) v_(r, dst) += c * v_(r, src);
      for (std::size_t j = 0; j < n_; ++j)
        if (vinv_(dst, j) != 0) vinv_(src, j) -= c * vinv_(dst, j);
    }
  }

  IntMatrix a_;
  std::size_t m_, n_;
  SmithOptions opt_;
  IntMatrix u_, v_, vinv_;
};

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a, SmithOptions options) {
  return SmithWorker(a, options).run();
}

IntMatrix integer_kernel(const IntMatrix& a) {
  SmithDecomposition snf = smith_normal_form(a, {.want_u = false, .want_v = true});
  const std::size_t n = a.cols();
  IntMatrix k(n, n - snf.rank);
  for (std::size_t j = snf.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) k(i, j - snf.rank) = snf.V(i, j);
  return k;
}

}  // namespace phiq
