#pragma once

#include <complex>
#include <cstdlib>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cospec/rational.hpp"

namespace cospec {

using cdouble = std::complex<double>;

namespace scalar {

inline double pivot_size(const cdouble& x) { return std::abs(x); }
inline double pivot_size(const double& x) { return std::abs(x); }
inline double pivot_size(const Rational& x) { return x == 0 ? 0.0 : 1.0; }

inline cdouble conj(const cdouble& x) { return std::conj(x); }
inline double conj(const double& x) { return x; }
inline Rational conj(const Rational& x) { return x; }

inline bool is_exact_zero(const cdouble& x) { return x == cdouble(0.0); }
inline bool is_exact_zero(const double& x) { return x == 0.0; }
inline bool is_exact_zero(const Rational& x) { return x == 0; }

}  // namespace scalar

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix over an exact or floating scalar. Values are
// immutable in spirit: every operation returns a fresh matrix.
template <typename T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, T(0)) {}
  Mat(int rows, int cols, std::initializer_list<T> vals) : Mat(rows, cols) {
    if (static_cast<int>(vals.size()) != rows * cols) throw std::invalid_argument("Mat: bad initializer size");
    std::size_t i = 0;
    for (const T& v : vals) a_[i++] = v;
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  Mat operator+(const Mat& o) const {
    check_same_shape(o);
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
  }
  Mat operator-(const Mat& o) const {
    check_same_shape(o);
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
  }
  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("Mat: shape mismatch in product");
    Mat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const T& aik = (*this)(i, k);
        if (scalar::is_exact_zero(aik)) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }
  Mat operator*(const T& s) const {
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
  }
  std::vector<T> operator*(const std::vector<T>& v) const {
    if (cols_ != static_cast<int>(v.size())) throw std::invalid_argument("Mat: shape mismatch in apply");
    std::vector<T> r(rows_, T(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  Mat transpose() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  Mat conjugate_transpose() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = scalar::conj((*this)(i, j));
    return r;
  }

  Mat submatrix(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
    Mat r(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
    for (int i = 0; i < r.rows_; ++i)
      for (int j = 0; j < r.cols_; ++j) r(i, j) = (*this)(row_idx[i], col_idx[j]);
    return r;
  }

  std::vector<T> row(int i) const {
    std::vector<T> r(cols_);
    for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }
  std::vector<T> col(int j) const {
    std::vector<T> r(rows_);
    for (int i = 0; i < rows_; ++i) r[i] = (*this)(i, j);
    return r;
  }

  // Gaussian elimination with full row pivoting on pivot_size. Exact over
  // Rational; partial-pivoted floating elimination over complex/double.
  T det() const {
    if (!square()) throw std::invalid_argument("det: non-square matrix");
    Mat u(*this);
    T d(1);
    for (int c = 0; c < cols_; ++c) {
      int p = -1;
      double best = 0.0;
      for (int r = c; r < rows_; ++r) {
        double sz = scalar::pivot_size(u(r, c));
        if (sz > best) {
          best = sz;
          p = r;
        }
      }
      if (p < 0) return T(0);
      if (p != c) {
        u.swap_rows(p, c);
        d = -d;
      }
      d = d * u(c, c);
      for (int r = c + 1; r < rows_; ++r) {
        T f = u(r, c) / u(c, c);
        for (int j = c; j < cols_; ++j) u(r, j) = u(r, j) - f * u(c, j);
      }
    }
    return d;
  }

  Mat inverse() const {
    if (!square()) throw std::invalid_argument("inverse: non-square matrix");
    int n = rows_;
    Mat u(*this);
    Mat inv = identity(n);
    for (int c = 0; c < n; ++c) {
      int p = -1;
      double best = 0.0;
      for (int r = c; r < n; ++r) {
        double sz = scalar::pivot_size(u(r, c));
        if (sz > best) {
          best = sz;
          p = r;
        }
      }
      if (p < 0) throw SingularMatrixError("inverse: singular matrix");
      if (p != c) {
        u.swap_rows(p, c);
        inv.swap_rows(p, c);
      }
      T piv = u(c, c);
      for (int j = 0; j < n; ++j) {
        u(c, j) = u(c, j) / piv;
        inv(c, j) = inv(c, j) / piv;
      }
      for (int r = 0; r < n; ++r) {
        if (r == c) continue;
        T f = u(r, c);
        if (scalar::is_exact_zero(f)) continue;
        for (int j = 0; j < n; ++j) {
          u(r, j) = u(r, j) - f * u(c, j);
          inv(r, j) = inv(r, j) - f * inv(c, j);
        }
      }
    }
    return inv;
  }

  void swap_rows(int i, int j) {
    for (int c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }

 private:
  void check_same_shape(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Mat: shape mismatch");
  }

  int rows_, cols_;
  std::vector<T> a_;
};

using CMat = Mat<cdouble>;
using QMat = Mat<Rational>;
using RMat = Mat<double>;

template <typename T>
double frobenius_norm(const Mat<T>& m);

double frobenius_norm(const CMat& m);
double frobenius_norm(const RMat& m);
double frobenius_norm(const QMat& m);  // norm of the double image, for diagnostics only

CMat to_complex(const QMat& m);
CMat to_complex(const RMat& m);
RMat to_real(const QMat& m);

// Exact rank / nullspace over the rationals (fraction-free in effect: plain
// elimination on mpq is exact).
int exact_rank(const QMat& m);
// Columns span the exact kernel {v : m v = 0}.
std::vector<std::vector<Rational>> exact_nullspace(const QMat& m);
// True iff the row spaces coincide (as subspaces of Q^n).
bool same_row_space(const QMat& a, const QMat& b);

}  // namespace cospec
