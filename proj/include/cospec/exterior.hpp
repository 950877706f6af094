#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cospec/linalg.hpp"
#include "cospec/matrix.hpp"

namespace cospec {

long long binomial(int n, int k);

// All ell-subsets of {0,...,d-1} in lexicographic order of increasing tuples,
// with bitmask lookup. This fixed ordering is the canonical basis order of
// the exterior power everywhere in the library.
class SubsetBasis {
 public:
  SubsetBasis(int d, int ell);

  int d() const { return d_; }
  int ell() const { return ell_; }
  int size() const { return static_cast<int>(subsets_.size()); }
  const std::vector<int>& subset(int idx) const { return subsets_[idx]; }
  std::uint32_t mask(int idx) const { return masks_[idx]; }
  int index_of_mask(std::uint32_t mask) const;  // -1 if not a basis mask

  static const SubsetBasis& get(int d, int ell);

 private:
  int d_, ell_;
  std::vector<std::vector<int>> subsets_;
  std::vector<std::uint32_t> masks_;
  std::vector<int> mask_to_index_;
};

// Sign of e_S ^ e_T relative to e_{S union T}: parity of the number of pairs
// (s, t) with s in S, t in T, s > t. S and T must be disjoint masks.
int shuffle_sign(std::uint32_t s_mask, std::uint32_t t_mask);

// Element of the ell-th exterior power of C^d (or Q^d), coefficients indexed
// by the canonical subset order.
template <typename T>
struct BasicMultiVector {
  int d = 0;
  int ell = 0;
  std::vector<T> coeff;

  BasicMultiVector() = default;
  BasicMultiVector(int d_, int ell_) : d(d_), ell(ell_), coeff(binomial(d_, ell_), T(0)) {}

  const T& operator[](int i) const { return coeff[i]; }
  T& operator[](int i) { return coeff[i]; }
  int dim() const { return static_cast<int>(coeff.size()); }

  bool is_zero() const {
    for (const T& c : coeff)
      if (!scalar::is_exact_zero(c)) return false;
    return true;
  }
};

using MultiVector = BasicMultiVector<cdouble>;
using QMultiVector = BasicMultiVector<Rational>;

template <typename T>
BasicMultiVector<T> wedge(const BasicMultiVector<T>& a, const BasicMultiVector<T>& b) {
  if (a.d != b.d) throw std::invalid_argument("wedge: ambient dimension mismatch");
  if (a.ell + b.ell > a.d) throw std::invalid_argument("wedge: degree overflow");
  const SubsetBasis& ba = SubsetBasis::get(a.d, a.ell);
  const SubsetBasis& bb = SubsetBasis::get(b.d, b.ell);
  const SubsetBasis& bo = SubsetBasis::get(a.d, a.ell + b.ell);
  BasicMultiVector<T> out(a.d, a.ell + b.ell);
  for (int i = 0; i < ba.size(); ++i) {
    if (scalar::is_exact_zero(a.coeff[i])) continue;
    for (int j = 0; j < bb.size(); ++j) {
      if (scalar::is_exact_zero(b.coeff[j])) continue;
      std::uint32_t ms = ba.mask(i), mt = bb.mask(j);
      if (ms & mt) continue;
      int sign = shuffle_sign(ms, mt);
      int k = bo.index_of_mask(ms | mt);
      out.coeff[k] += (sign > 0 ? a.coeff[i] * b.coeff[j] : -(a.coeff[i] * b.coeff[j]));
    }
  }
  return out;
}

// Wedge of degree-1 vectors given as matrix columns.
template <typename T>
BasicMultiVector<T> wedge_columns(const Mat<T>& columns) {
  int d = columns.rows(), ell = columns.cols();
  const SubsetBasis& basis = SubsetBasis::get(d, ell);
  BasicMultiVector<T> out(d, ell);
  for (int k = 0; k < basis.size(); ++k) {
    std::vector<int> cols(ell);
    for (int j = 0; j < ell; ++j) cols[j] = j;
    out.coeff[k] = columns.submatrix(basis.subset(k), cols).det();
  }
  return out;
}

// Matrix of the induced map on the exterior power: entry (S, T) is the
// (S rows, T cols) minor of L. Functorial in L.
template <typename T>
Mat<T> exterior_power(const Mat<T>& L, int ell) {
  if (!L.square()) throw std::invalid_argument("exterior_power: non-square matrix");
  int d = L.rows();
  if (ell < 1 || ell > d) throw std::invalid_argument("exterior_power: degree out of range");
  const SubsetBasis& basis = SubsetBasis::get(d, ell);
  Mat<T> out(basis.size(), basis.size());
  for (int i = 0; i < basis.size(); ++i)
    for (int j = 0; j < basis.size(); ++j)
      out(i, j) = L.submatrix(basis.subset(i), basis.subset(j)).det();
  return out;
}

cdouble inner(const MultiVector& a, const MultiVector& b);  // Hermitian, conjugate on b
double mv_norm(const MultiVector& a);
MultiVector normalized(const MultiVector& a);
MultiVector apply_carrier(const CMat& big, const MultiVector& a);

// Residual of the Grassmann-Pluecker quadratic relations after unit
// normalization; zero iff decomposable.
double plucker_residual(const MultiVector& a);
bool plucker_relations_exact(const QMultiVector& a);

// Hodge-type dual: the (d-ell)-vector u with eta ^ u = <eta, a> e_{1..d}.
MultiVector hodge_dual(const MultiVector& a);

// One-particle reduced density matrix; equals (norm^2 x) the orthogonal
// projection onto the span when a is decomposable.
CMat reduced_density(const MultiVector& a);

// Projective class of a decomposable ell-vector with canonical representative:
// unit norm, first nonzero coordinate real positive.
class GrassmannPoint {
 public:
  GrassmannPoint() = default;
  // Checks the Pluecker relations within reltol unless trusted.
  explicit GrassmannPoint(const MultiVector& mv, bool trusted = false, double reltol = 1e-8);

  const MultiVector& plucker() const { return mv_; }
  int d() const { return mv_.d; }
  int ell() const { return mv_.ell; }

  bool approx_equal(const GrassmannPoint& o, double tol = 1e-8) const;

 private:
  MultiVector mv_;
};

double fs_distance(const GrassmannPoint& a, const GrassmannPoint& b);

GrassmannPoint plucker_embed(const CMat& basis_columns);
// Orthonormal d x ell matrix whose column span maps to the given point.
CMat subspace_basis(const GrassmannPoint& p);

// Subset of Grass(ell, d) of subspaces meeting the span of the defining
// (d-ell)-vector nontrivially.
struct HyperplaneSection {
  MultiVector defining;  // degree d - ell, decomposable, nonzero
};

bool hyperplane_contains(const HyperplaneSection& section, const GrassmannPoint& xi, double tol = 1e-8);

struct Eccentricity {
  double value = 1.0;             // a_ell / a_{ell+1}, always >= 1
  GrassmannPoint most_expanded;   // span of the top-ell right singular frame
  bool unique = true;             // false when value == 1 within tolerance
};

Eccentricity eccentricity(const CMat& L, int ell, double gap_tol = 1e-12);

// Norm-1 limit of exterior powers, acting on the ell-th exterior power.
struct QuasiProjectiveMap {
  int d = 0;
  int ell = 0;
  CMat carrier;                         // norm 1
  std::vector<MultiVector> kernel_basis;

  static QuasiProjectiveMap from_matrix(const CMat& L, int ell);
  // Accepts any nonzero matrix on the exterior power; normalizes and extracts
  // the numerical kernel at the given relative tolerance.
  static QuasiProjectiveMap from_carrier(const CMat& big, int d, int ell, double kernel_tol = 1e-10);
};

struct KernelInImage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GrassmannPoint quasi_projective_apply(const QuasiProjectiveMap& q, const GrassmannPoint& xi,
                                      double tol = 1e-10);

struct KernelSection {
  bool empty_kernel = false;  // sentinel: Q invertible, no section needed
  HyperplaneSection section;  // valid when !empty_kernel
};

KernelSection kernel_hyperplane(const QuasiProjectiveMap& q, double tol = 1e-10);

}  // namespace cospec
