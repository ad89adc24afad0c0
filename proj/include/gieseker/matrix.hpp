#pragma once

// Dense matrices over F_p, F_p[[s]] and F_p((s)), with Gauss-Jordan
// inversion over any of them.

#include <cassert>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "gieseker/error.hpp"
#include "gieseker/field.hpp"
#include "gieseker/series.hpp"

namespace gieseker {

// Scalar traits used by the generic algorithms below.
inline Fp zero_like(const Fp& x) { return Fp::zero(x.modulus()); }
inline Fp one_like(const Fp& x) { return Fp::one(x.modulus()); }
inline Fp inverse(const Fp& x) { return x.inverse(); }
inline bool is_zero(const Fp& x) { return x.is_zero(); }
inline std::optional<int> pivot_score(const Fp& x) {
  return x.is_zero() ? std::nullopt : std::optional<int>(0);
}

inline PowerSeries zero_like(const PowerSeries& x) { return PowerSeries(x.modulus(), x.precision()); }
inline PowerSeries one_like(const PowerSeries& x) { return PowerSeries::one(x.modulus(), x.precision()); }
inline PowerSeries inverse(const PowerSeries& x) { return x.inverse(); }
inline bool is_zero(const PowerSeries& x) { return x.is_zero(); }
inline std::optional<int> pivot_score(const PowerSeries& x) {
  return x.is_unit() ? std::optional<int>(0) : std::nullopt;
}

inline LaurentSeries zero_like(const LaurentSeries& x) { return LaurentSeries::exact_zero(x.modulus()); }
inline LaurentSeries one_like(const LaurentSeries& x) {
  return LaurentSeries::exact_monomial(Fp::one(x.modulus()), 0);
}
inline LaurentSeries inverse(const LaurentSeries& x) { return x.inverse(); }
inline bool is_zero(const LaurentSeries& x) { return x.is_zero(); }
inline std::optional<int> pivot_score(const LaurentSeries& x) {
  return x.is_zero() ? std::nullopt : std::optional<int>(x.valuation());
}

template <class T>
class Matrix {
 public:
  Matrix() = default;
  /// rows x cols matrix filled with `zero`, which also serves as the additive
  /// identity for empty sums.
  Matrix(int rows, int cols, T zero) : rows_(rows), cols_(cols), zero_(zero), d_(rows * cols, zero) {
    if (rows < 0 || cols < 0) throw DomainError("negative matrix dimension");
  }

  static Matrix identity(int n, const T& zero) {
    Matrix m(n, n, zero);
    for (int i = 0; i < n; ++i) m(i, i) = one_like(zero);
    return m;
  }
  static Matrix diagonal(std::span<const T> entries, const T& zero) {
    Matrix m(static_cast<int>(entries.size()), static_cast<int>(entries.size()), zero);
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  const T& zero() const { return zero_; }

  T& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return d_[i * cols_ + j];
  }
  const T& operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return d_[i * cols_ + j];
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw DomainError("matrix dimension mismatch in product");
    Matrix m(rows_, o.cols_, zero_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < o.cols_; ++j) {
        if (cols_ == 0) continue;
        T acc = (*this)(i, 0) * o(0, j);
        for (int k = 1; k < cols_; ++k) acc += (*this)(i, k) * o(k, j);
        m(i, j) = acc;
      }
    return m;
  }
  Matrix operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix m = *this;
    for (std::size_t k = 0; k < d_.size(); ++k) m.d_[k] = d_[k] + o.d_[k];
    return m;
  }
  Matrix operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix m = *this;
    for (std::size_t k = 0; k < d_.size(); ++k) m.d_[k] = d_[k] - o.d_[k];
    return m;
  }
  template <class S>
  Matrix scaled(const S& a) const {
    Matrix m = *this;
    for (auto& x : m.d_) x = x * a;
    return m;
  }

  /// Entrywise map into another scalar type.
  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    Matrix<U> m(rows_, cols_, f(zero_));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = f((*this)(i, j));
    return m;
  }

  Matrix block(int row0, int col0, int nrows, int ncols) const {
    Matrix m(nrows, ncols, zero_);
    for (int i = 0; i < nrows; ++i)
      for (int j = 0; j < ncols; ++j) m(i, j) = (*this)(row0 + i, col0 + j);
    return m;
  }

  /// Column j of the result is column perm[j] of this matrix.
  Matrix permute_columns(std::span<const int> perm) const {
    Matrix m(rows_, cols_, zero_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, perm[j]);
    return m;
  }

  Matrix transpose() const {
    Matrix m(cols_, rows_, zero_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  /// Entrywise equality (for series: agreement up to precision).
  bool operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t k = 0; k < d_.size(); ++k)
      if (!(d_[k] == o.d_[k])) return false;
    return true;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << "[";
    for (int i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (int j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j);
      os << "]";
    }
    return os << "]";
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix dimension mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  T zero_{};
  std::vector<T> d_;
};

using ConstMatrix = Matrix<Fp>;
using PowerMatrix = Matrix<PowerSeries>;
using LaurentMatrix = Matrix<LaurentSeries>;

inline ConstMatrix const_matrix(Residue p, const std::vector<std::vector<std::int64_t>>& rows) {
  const int n = static_cast<int>(rows.size());
  const int m = n ? static_cast<int>(rows[0].size()) : 0;
  ConstMatrix a(n, m, Fp::zero(p));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != m) throw DomainError("ragged matrix rows");
    for (int j = 0; j < m; ++j) a(i, j) = Fp(rows[i][j], p);
  }
  return a;
}

inline ConstMatrix identity_const(int n, Residue p) { return ConstMatrix::identity(n, Fp::zero(p)); }

/// Permutation matrix with entry (perm[j], j) = 1, so that M * P permutes
/// the columns of M by perm.
inline ConstMatrix permutation_matrix(std::span<const int> perm, Residue p) {
  const int n = static_cast<int>(perm.size());
  ConstMatrix m(n, n, Fp::zero(p));
  for (int j = 0; j < n; ++j) m(perm[j], j) = Fp::one(p);
  return m;
}

/// Result of Gauss-Jordan elimination: the inverse when it exists.
template <class T>
std::optional<Matrix<T>> try_inverse(const Matrix<T>& m) {
  if (!m.square()) throw DomainError("only square matrices can be inverted");
  const int n = m.rows();
  Matrix<T> a = m;
  Matrix<T> inv = Matrix<T>::identity(n, m.zero());
  for (int col = 0; col < n; ++col) {
    int best = -1;
    std::optional<int> best_score;
    for (int row = col; row < n; ++row) {
      auto s = pivot_score(a(row, col));
      if (s && (!best_score || *s < *best_score)) {
        best = row;
        best_score = s;
      }
    }
    if (best < 0) return std::nullopt;
    if (best != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a(best, j), a(col, j));
        std::swap(inv(best, j), inv(col, j));
      }
    const T pinv = inverse(a(col, col));
    for (int j = 0; j < n; ++j) {
      a(col, j) = a(col, j) * pinv;
      inv(col, j) = inv(col, j) * pinv;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || is_zero(a(row, col))) continue;
      const T f = a(row, col);
      for (int j = 0; j < n; ++j) {
        a(row, j) = a(row, j) - f * a(col, j);
        inv(row, j) = inv(row, j) - f * inv(col, j);
      }
    }
  }
  return inv;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  auto inv = try_inverse(m);
  if (!inv) throw DomainError("matrix is not invertible (at the available precision)");
  return *inv;
}

template <class T>
bool is_invertible(const Matrix<T>& m) {
  return m.square() && try_inverse(m).has_value();
}

template <class T>
T determinant(const Matrix<T>& m) {
  if (!m.square()) throw DomainError("determinant of a non-square matrix");
  const int n = m.rows();
  Matrix<T> a = m;
  T det = one_like(m.zero());
  for (int col = 0; col < n; ++col) {
    int best = -1;
    std::optional<int> best_score;
    for (int row = col; row < n; ++row) {
      auto s = pivot_score(a(row, col));
      if (s && (!best_score || *s < *best_score)) {
        best = row;
        best_score = s;
      }
    }
    if (best < 0) return zero_like(m.zero());
    if (best != col) {
      for (int j = 0; j < n; ++j) std::swap(a(best, j), a(col, j));
      det = -det;
    }
    det = det * a(col, col);
    const T pinv = inverse(a(col, col));
    for (int row = col + 1; row < n; ++row) {
      if (is_zero(a(row, col))) continue;
      const T f = a(row, col) * pinv;
      for (int j = col; j < n; ++j) a(row, j) = a(row, j) - f * a(col, j);
    }
  }
  return det;
}

// ---- linear algebra over F_p ----

/// Reduced row echelon form; returns the pivot columns.
inline std::vector<int> rref_in_place(ConstMatrix& a) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < a.cols() && row < a.rows(); ++col) {
    int pr = -1;
    for (int i = row; i < a.rows(); ++i)
      if (!a(i, col).is_zero()) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    for (int j = 0; j < a.cols(); ++j) std::swap(a(pr, j), a(row, j));
    const Fp inv = a(row, col).inverse();
    for (int j = 0; j < a.cols(); ++j) a(row, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col).is_zero()) continue;
      const Fp f = a(i, col);
      for (int j = 0; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline int rank(ConstMatrix a) { return static_cast<int>(rref_in_place(a).size()); }

/// Basis of the column space, as the columns of the returned matrix: the
/// nonzero rows of rref(M^T), each with leading entry 1.
inline ConstMatrix column_space_basis(const ConstMatrix& m) {
  ConstMatrix t = m.transpose();
  const auto pivots = rref_in_place(t);
  ConstMatrix basis(m.rows(), static_cast<int>(pivots.size()), m.zero());
  for (std::size_t k = 0; k < pivots.size(); ++k)
    for (int i = 0; i < m.rows(); ++i) basis(i, static_cast<int>(k)) = t(static_cast<int>(k), i);
  return basis;
}

/// Dimension of {x : M x = 0}.
inline int nullity(const ConstMatrix& m) { return m.cols() - rank(m); }

/// Stack matrices with equal row counts side by side.
inline ConstMatrix hconcat(const std::vector<ConstMatrix>& parts, int rows, Residue p) {
  int cols = 0;
  for (const auto& b : parts) cols += b.cols();
  ConstMatrix m(rows, cols, Fp::zero(p));
  int off = 0;
  for (const auto& b : parts) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < b.cols(); ++j) m(i, off + j) = b(i, j);
    off += b.cols();
  }
  return m;
}

inline ConstMatrix matrix_power(const ConstMatrix& m, int n) {
  ConstMatrix r = ConstMatrix::identity(m.rows(), m.zero());
  for (int k = 0; k < n; ++k) r = r * m;
  return r;
}

/// Constant (s^0) coefficients of a power series matrix.
inline ConstMatrix constant_term(const PowerMatrix& m) {
  return m.map([](const PowerSeries& x) { return x.constant_term(); });
}

inline PowerMatrix to_power_matrix(const ConstMatrix& m, int precision) {
  return m.map([precision](const Fp& x) { return PowerSeries::constant(x, precision); });
}

inline LaurentMatrix to_laurent_matrix(const ConstMatrix& m, int precision) {
  return m.map([precision](const Fp& x) { return LaurentSeries::monomial(x, 0, precision); });
}

inline LaurentMatrix to_laurent_matrix(const PowerMatrix& m) {
  return m.map([](const PowerSeries& x) { return x.to_laurent(); });
}

/// Smallest entry precision (the precision at which the matrix is known).
inline int precision_of(const LaurentMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return m.zero().precision();
  int prec = m(0, 0).precision();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) prec = std::min(prec, m(i, j).precision());
  return prec;
}

inline int precision_of(const PowerMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return m.zero().precision();
  int prec = m(0, 0).precision();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) prec = std::min(prec, m(i, j).precision());
  return prec;
}

}  // namespace gieseker
