#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "cospec/linalg.hpp"
#include "cospec/matrix.hpp"
#include "cospec/rng.hpp"

namespace cospec {

namespace {

Eigen::MatrixXcd to_eigen(const CMat& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

CMat from_eigen(const Eigen::MatrixXcd& e) {
  CMat m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rational rational_reconstruct(double x, unsigned long max_den) {
  bool neg = x < 0;
  double v = std::abs(x);
  // continued fraction convergents of v
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(frac);
    if (fl > 9e17) break;
    long long a = static_cast<long long>(fl);
    long long p2 = a * p1 + p0;
    long long q2 = a * q1 + q0;
    if (q2 > static_cast<long long>(max_den) || q2 < 0) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - fl;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  Rational r(mpz_class(static_cast<long>(p1)), mpz_class(static_cast<long>(q1 == 0 ? 1 : q1)));
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

double frobenius_norm(const CMat& m) {
  double s = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

double frobenius_norm(const RMat& m) {
  double s = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

double frobenius_norm(const QMat& m) { return frobenius_norm(to_real(m)); }

CMat to_complex(const QMat& m) {
  CMat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}

CMat to_complex(const RMat& m) {
  CMat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

RMat to_real(const QMat& m) {
  RMat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}

int exact_rank(const QMat& m) {
  QMat u(m);
  int rank = 0;
  int rows = u.rows(), cols = u.cols();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i) {
      if (u(i, c) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    u.swap_rows(p, r);
    for (int i = r + 1; i < rows; ++i) {
      if (u(i, c) == 0) continue;
      Rational f = u(i, c) / u(r, c);
      for (int j = c; j < cols; ++j) u(i, j) = u(i, j) - f * u(r, j);
    }
    ++r;
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Rational>> exact_nullspace(const QMat& m) {
  int rows = m.rows(), cols = m.cols();
  QMat u(m);
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (u(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    u.swap_rows(p, r);
    Rational piv = u(r, c);
    for (int j = c; j < cols; ++j) u(r, j) = u(r, j) / piv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || u(i, c) == 0) continue;
      Rational f = u(i, c);
      for (int j = c; j < cols; ++j) u(i, j) = u(i, j) - f * u(r, j);
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t k = 0; k < pivot_col.size(); ++k) {
      v[pivot_col[k]] = -u(static_cast<int>(k), free);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

bool same_row_space(const QMat& a, const QMat& b) {
  if (a.cols() != b.cols()) return false;
  int ra = exact_rank(a);
  int rb = exact_rank(b);
  if (ra != rb) return false;
  QMat stacked(a.rows() + b.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) stacked(i, j) = a(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) stacked(a.rows() + i, j) = b(i, j);
  return exact_rank(stacked) == ra;
}

double SingularData::reconstruction_residual(const CMat& L) const {
  int n = L.rows();
  CMat s(n, n);
  for (int i = 0; i < n; ++i) s(i, i) = singular_values[i];
  CMat rec = left_frame * s * right_frame;
  double denom = frobenius_norm(L);
  return denom == 0 ? frobenius_norm(rec - L) : frobenius_norm(rec - L) / denom;
}

SingularData singular_decomposition(const CMat& L) {
  if (!L.square()) throw NumericError("singular_decomposition: non-square input");
  for (int i = 0; i < L.rows(); ++i)
    for (int j = 0; j < L.cols(); ++j)
      if (!std::isfinite(L(i, j).real()) || !std::isfinite(L(i, j).imag()))
        throw NumericError("singular_decomposition: non-finite entry");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(L), Eigen::ComputeFullU | Eigen::ComputeFullV);
  SingularData out;
  out.singular_values.assign(svd.singularValues().data(), svd.singularValues().data() + L.rows());
  out.left_frame = from_eigen(svd.matrixU());
  out.right_frame = from_eigen(svd.matrixV().adjoint());
  return out;
}

EigenData eigen_decomposition(const CMat& B) {
  if (!B.square()) throw NumericError("eigen_decomposition: non-square input");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(B));
  if (es.info() != Eigen::Success) throw NumericError("eigensolver diverged");
  int n = B.rows();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  const auto& vals = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double ma = std::abs(vals(a)), mb = std::abs(vals(b));
    if (std::abs(ma - mb) > 1e-14 * (ma + mb)) return ma > mb;
    return std::arg(vals(a)) < std::arg(vals(b));
  });
  EigenData out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMat(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = vals(order[k]);
    auto v = es.eigenvectors().col(order[k]);
    for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i);
  }
  return out;
}

double operator_norm(const CMat& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  return svd.singularValues()(0);
}

double smallest_singular(const CMat& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  return svd.singularValues()(svd.singularValues().size() - 1);
}

void thin_qr(const CMat& in, CMat& q, std::vector<double>& log_abs_diag) {
  int rows = in.rows(), cols = in.cols();
  Eigen::MatrixXcd a = to_eigen(in);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd thin_q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
  Eigen::MatrixXcd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  log_abs_diag.resize(cols);
  for (int j = 0; j < cols; ++j) {
    double d = std::abs(r(j, j));
    if (d <= 0) throw NumericError("thin_qr: rank collapse");
    log_abs_diag[j] = std::log(d);
  }
  q = from_eigen(thin_q);
}

CMat orthonormal_columns(const CMat& in, double tol) {
  Eigen::MatrixXcd a = to_eigen(in);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU);
  double top = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * top) ++rank;
  return from_eigen(svd.matrixU().leftCols(rank));
}

double vector_norm(const std::vector<cdouble>& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {
  std::uint64_t s = seed ^ 0xA3EC647659359ACDULL;
  std::uint64_t mixed = splitmix64(s);
  s = mixed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1));
  state_ = splitmix64(s);
}

std::uint64_t RandomSource::next_u64() { return splitmix64(state_); }

double RandomSource::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RandomSource::gaussian() {
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

std::complex<double> RandomSource::gaussian_complex() {
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  double r = std::sqrt(-std::log(u1));
  return {r * std::cos(6.283185307179586 * u2), r * std::sin(6.283185307179586 * u2)};
}

int RandomSource::uniform_int(int n) {
  return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
}

RandomSource RandomSource::split(std::uint64_t substream) const {
  std::uint64_t s = state_ ^ (0xD1B54A32D192ED03ULL * (substream + 1));
  std::uint64_t derived = splitmix64(s);
  return RandomSource(derived, substream);
}

int draw_index(RandomSource& rng, const std::vector<double>& weights) {
  double total = 0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  double acc = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace cospec
