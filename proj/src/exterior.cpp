#include "cospec/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace cospec {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

SubsetBasis::SubsetBasis(int d, int ell) : d_(d), ell_(ell) {
  if (d > 30) throw std::invalid_argument("SubsetBasis: ambient dimension too large");
  std::vector<int> cur(ell);
  for (int i = 0; i < ell; ++i) cur[i] = i;
  mask_to_index_.assign(1u << d, -1);
  while (true) {
    std::uint32_t m = 0;
    for (int x : cur) m |= (1u << x);
    mask_to_index_[m] = static_cast<int>(subsets_.size());
    subsets_.push_back(cur);
    masks_.push_back(m);
    // next lexicographic ell-subset
    int i = ell - 1;
    while (i >= 0 && cur[i] == d - ell + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < ell; ++j) cur[j] = cur[j - 1] + 1;
  }
}

int SubsetBasis::index_of_mask(std::uint32_t mask) const { return mask_to_index_[mask]; }

const SubsetBasis& SubsetBasis::get(int d, int ell) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<SubsetBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, ell);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<SubsetBasis>(d, ell)).first;
  return *it->second;
}

int shuffle_sign(std::uint32_t s_mask, std::uint32_t t_mask) {
  int inversions = 0;
  for (int t = 0; t < 31; ++t) {
    if (!(t_mask & (1u << t))) continue;
    std::uint32_t higher_s = s_mask >> (t + 1);
    inversions += __builtin_popcount(higher_s);
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

cdouble inner(const MultiVector& a, const MultiVector& b) {
  cdouble s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a.coeff[i] * std::conj(b.coeff[i]);
  return s;
}

double mv_norm(const MultiVector& a) {
  double s = 0;
  for (const auto& c : a.coeff) s += std::norm(c);
  return std::sqrt(s);
}

MultiVector normalized(const MultiVector& a) {
  double n = mv_norm(a);
  if (n == 0) throw std::invalid_argument("normalized: zero multivector");
  MultiVector r = a;
  for (auto& c : r.coeff) c /= n;
  return r;
}

MultiVector apply_carrier(const CMat& big, const MultiVector& a) {
  MultiVector r(a.d, a.ell);
  if (big.rows() != a.dim() || big.cols() != a.dim())
    throw std::invalid_argument("apply: carrier size mismatch");
  for (int i = 0; i < big.rows(); ++i) {
    cdouble s = 0;
    for (int j = 0; j < big.cols(); ++j) s += big(i, j) * a.coeff[j];
    r.coeff[i] = s;
  }
  return r;
}

namespace {

// Evaluates all Grassmann-Pluecker relations via a visitor over
// (R, S, term list). Shared by the float residual and the exact test.
template <typename T, typename F>
void for_each_plucker_relation(const BasicMultiVector<T>& a, F&& visit) {
  int d = a.d, ell = a.ell;
  if (ell <= 1 || ell >= d - 1) return;  // every vector is decomposable
  const SubsetBasis& br = SubsetBasis::get(d, ell - 1);
  const SubsetBasis& bs = SubsetBasis::get(d, ell + 1);
  const SubsetBasis& b = SubsetBasis::get(d, ell);
  for (int ri = 0; ri < br.size(); ++ri) {
    std::uint32_t rm = br.mask(ri);
    for (int si = 0; si < bs.size(); ++si) {
      std::uint32_t sm = bs.mask(si);
      T sum(0);
      int pos = 0;
      for (int j : bs.subset(si)) {
        int term_sign = (pos % 2 == 0) ? 1 : -1;
        ++pos;
        if (rm & (1u << j)) continue;  // omega with repeated index vanishes
        std::uint32_t rj = rm | (1u << j);
        int s1 = shuffle_sign(rm, 1u << j);
        int i1 = b.index_of_mask(rj);
        int i2 = b.index_of_mask(sm & ~(1u << j));
        T term = a.coeff[i1] * a.coeff[i2];
        int sign = term_sign * s1;
        sum += (sign > 0) ? term : T(-term);
      }
      visit(sum);
    }
  }
}

}  // namespace

double plucker_residual(const MultiVector& a) {
  double n = mv_norm(a);
  if (n == 0) return 0.0;
  MultiVector u = a;
  for (auto& c : u.coeff) c /= n;
  double worst = 0.0;
  for_each_plucker_relation(u, [&](const cdouble& sum) { worst = std::max(worst, std::abs(sum)); });
  return worst;
}

bool plucker_relations_exact(const QMultiVector& a) {
  bool ok = true;
  for_each_plucker_relation(a, [&](const Rational& sum) {
    if (sum != 0) ok = false;
  });
  return ok;
}

MultiVector hodge_dual(const MultiVector& a) {
  int d = a.d, ell = a.ell;
  const SubsetBasis& b = SubsetBasis::get(d, ell);
  const SubsetBasis& bc = SubsetBasis::get(d, d - ell);
  std::uint32_t full = (d == 32) ? 0xFFFFFFFFu : ((1u << d) - 1);
  MultiVector out(d, d - ell);
  for (int i = 0; i < b.size(); ++i) {
    std::uint32_t sm = b.mask(i);
    std::uint32_t cm = full & ~sm;
    int sign = shuffle_sign(sm, cm);
    int k = bc.index_of_mask(cm);
    out.coeff[k] = (sign > 0 ? std::conj(a.coeff[i]) : -std::conj(a.coeff[i]));
  }
  return out;
}

CMat reduced_density(const MultiVector& a) {
  int d = a.d, ell = a.ell;
  const SubsetBasis& b = SubsetBasis::get(d, ell);
  CMat rho(d, d);
  if (ell == 0) return rho;
  const SubsetBasis& bm = SubsetBasis::get(d, ell - 1);
  // annihilation: (c_x a)_S = sign * a_{S + x}
  for (int si = 0; si < bm.size(); ++si) {
    std::uint32_t sm = bm.mask(si);
    for (int x = 0; x < d; ++x) {
      if (sm & (1u << x)) continue;
      int sx = shuffle_sign(1u << x, sm);  // e_x ^ e_S ordering
      int ix = b.index_of_mask(sm | (1u << x));
      for (int y = 0; y < d; ++y) {
        if (sm & (1u << y)) continue;
        int sy = shuffle_sign(1u << y, sm);
        int iy = b.index_of_mask(sm | (1u << y));
        cdouble term = a.coeff[ix] * std::conj(a.coeff[iy]);
        rho(x, y) += (sx * sy > 0) ? term : -term;
      }
    }
  }
  return rho;
}

GrassmannPoint::GrassmannPoint(const MultiVector& mv, bool trusted, double reltol) {
  if (mv_norm(mv) == 0) throw std::invalid_argument("GrassmannPoint: zero multivector");
  if (!trusted && plucker_residual(mv) > reltol)
    throw std::invalid_argument("GrassmannPoint: multivector is not decomposable");
  mv_ = normalized(mv);
  // rotate first (in canonical order) non-negligible coordinate to positive real
  int lead = 0;
  double best = 0;
  for (int i = 0; i < mv_.dim(); ++i) {
    double m = std::abs(mv_.coeff[i]);
    if (m > best) {
      best = m;
      lead = i;
    }
  }
  // use the first coordinate that is within a stable factor of the largest,
  // so the choice is continuous under perturbation of the representative
  for (int i = 0; i < mv_.dim(); ++i) {
    if (std::abs(mv_.coeff[i]) > 0.5 * best) {
      lead = i;
      break;
    }
  }
  cdouble phase = mv_.coeff[lead] / std::abs(mv_.coeff[lead]);
  for (auto& c : mv_.coeff) c /= phase;
}

bool GrassmannPoint::approx_equal(const GrassmannPoint& o, double tol) const {
  if (mv_.d != o.mv_.d || mv_.ell != o.mv_.ell) return false;
  return std::abs(std::abs(inner(mv_, o.mv_)) - 1.0) < tol;
}

double fs_distance(const GrassmannPoint& a, const GrassmannPoint& b) {
  double c = std::abs(inner(a.plucker(), b.plucker()));
  c = std::min(1.0, std::max(-1.0, c));
  return std::acos(c);
}

GrassmannPoint plucker_embed(const CMat& basis_columns) {
  MultiVector mv = wedge_columns(basis_columns);
  double n = mv_norm(mv);
  // scale of a full-rank d x ell frame: product of column norms bounds the top minor
  double scale = 1.0;
  for (int j = 0; j < basis_columns.cols(); ++j) {
    double cn = 0;
    for (int i = 0; i < basis_columns.rows(); ++i) cn += std::norm(basis_columns(i, j));
    scale *= std::sqrt(cn);
  }
  if (n <= 1e-12 * (scale > 0 ? scale : 1.0))
    throw std::invalid_argument("plucker_embed: rank-deficient column set");
  return GrassmannPoint(mv, /*trusted=*/true);
}

CMat subspace_basis(const GrassmannPoint& p) {
  // eigenvectors of the reduced density with the ell largest eigenvalues
  CMat rho = reduced_density(p.plucker());
  EigenData ed = eigen_decomposition(rho);
  CMat cols(p.d(), p.ell());
  for (int j = 0; j < p.ell(); ++j)
    for (int i = 0; i < p.d(); ++i) cols(i, j) = ed.eigenvectors(i, j);
  return orthonormal_columns(cols);
}

bool hyperplane_contains(const HyperplaneSection& section, const GrassmannPoint& xi, double tol) {
  const MultiVector& up = section.defining;
  const MultiVector& om = xi.plucker();
  if (up.d != om.d || up.ell + om.ell != om.d)
    throw std::invalid_argument("hyperplane_contains: degree mismatch");
  MultiVector full = wedge(om, up);
  // degree-d component is a scalar
  double scalar_abs = std::abs(full.coeff[0]);
  return scalar_abs <= tol * mv_norm(up);
}

Eccentricity eccentricity(const CMat& L, int ell, double gap_tol) {
  int d = L.rows();
  if (ell < 1 || ell > d - 1) throw std::invalid_argument("eccentricity: degree out of range");
  SingularData sd = singular_decomposition(L);
  if (sd.singular_values[ell] <= 0) throw NumericError("eccentricity: singular input");
  Eccentricity out;
  out.value = sd.singular_values[ell - 1] / sd.singular_values[ell];
  // top-ell right singular frame: first ell columns of V = rows of right_frame conj-transposed
  CMat v = sd.right_frame.conjugate_transpose();
  CMat top(d, ell);
  for (int j = 0; j < ell; ++j)
    for (int i = 0; i < d; ++i) top(i, j) = v(i, j);
  out.most_expanded = plucker_embed(top);
  out.unique = out.value > 1.0 + gap_tol;
  return out;
}

QuasiProjectiveMap QuasiProjectiveMap::from_matrix(const CMat& L, int ell) {
  CMat big = exterior_power(L, ell);
  return from_carrier(big, L.rows(), ell);
}

QuasiProjectiveMap QuasiProjectiveMap::from_carrier(const CMat& big, int d, int ell, double kernel_tol) {
  QuasiProjectiveMap q;
  q.d = d;
  q.ell = ell;
  double n = operator_norm(big);
  if (n == 0) throw std::invalid_argument("QuasiProjectiveMap: zero carrier");
  q.carrier = big * cdouble(1.0 / n);
  SingularData sd = singular_decomposition(q.carrier);
  CMat v = sd.right_frame.conjugate_transpose();
  int m = q.carrier.rows();
  for (int j = 0; j < m; ++j) {
    if (sd.singular_values[j] <= kernel_tol) {
      MultiVector k(d, ell);
      for (int i = 0; i < m; ++i) k.coeff[i] = v(i, j);
      q.kernel_basis.push_back(std::move(k));
    }
  }
  return q;
}

GrassmannPoint quasi_projective_apply(const QuasiProjectiveMap& q, const GrassmannPoint& xi, double tol) {
  MultiVector image = apply_carrier(q.carrier, xi.plucker());
  if (mv_norm(image) < tol) throw KernelInImage("quasi_projective_apply: point in kernel");
  return GrassmannPoint(image, /*trusted=*/true);
}

KernelSection kernel_hyperplane(const QuasiProjectiveMap& q, double tol) {
  KernelSection out;
  if (q.kernel_basis.empty()) {
    // verify invertibility at the stated tolerance
    SingularData sd = singular_decomposition(q.carrier);
    if (sd.singular_values.back() > tol) {
      out.empty_kernel = true;
      return out;
    }
  }
  // top right-singular vector of the carrier; for a limit of exterior powers
  // it is decomposable and its orthogonal section contains the kernel
  SingularData sd = singular_decomposition(q.carrier);
  CMat v = sd.right_frame.conjugate_transpose();
  MultiVector top(q.d, q.ell);
  for (int i = 0; i < q.carrier.rows(); ++i) top.coeff[i] = v(i, 0);
  // snap to the closest decomposable vector through the reduced density
  CMat rho = reduced_density(top);
  EigenData ed = eigen_decomposition(rho);
  CMat frame(q.d, q.ell);
  for (int j = 0; j < q.ell; ++j)
    for (int i = 0; i < q.d; ++i) frame(i, j) = ed.eigenvectors(i, j);
  GrassmannPoint snapped = plucker_embed(orthonormal_columns(frame));
  out.section.defining = hodge_dual(snapped.plucker());
  return out;
}

}  // namespace cospec
