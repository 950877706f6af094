#include "cospec/hyperplane.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cospec {

std::vector<long> KCube::elements() const {
  std::vector<long> out{base};
  for (long c : sides) {
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] + c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// One level of the gap-frequency argument: the most frequent consecutive gap
// and the set of left endpoints realizing it.
bool gap_level(const std::vector<long>& sorted, long& side, std::vector<long>& bases) {
  if (sorted.size() < 2) return false;
  std::map<long, std::vector<long>> by_gap;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    by_gap[sorted[i + 1] - sorted[i]].push_back(sorted[i]);
  std::size_t best = 0;
  for (const auto& [gap, lefts] : by_gap) {
    if (lefts.size() > best) {
      best = lefts.size();
      side = gap;
      bases = lefts;
    }
  }
  return best > 0;
}

bool cube_inside(const std::set<long>& members, long base, const std::vector<long>& sides) {
  KCube cube{base, sides};
  for (long x : cube.elements())
    if (!members.count(x)) return false;
  return true;
}

}  // namespace

std::optional<KCubeSearch> find_k_cube(const std::vector<long>& J, long N, double eps, int k) {
  if (k < 1) throw std::invalid_argument("find_k_cube: k must be >= 1");
  std::vector<long> level(J);
  std::sort(level.begin(), level.end());
  level.erase(std::unique(level.begin(), level.end()), level.end());

  KCubeSearch out;
  double density = eps;
  bool constructive_ok = true;
  for (int depth = 0; depth < k; ++depth) {
    long side = 0;
    std::vector<long> bases;
    if (!gap_level(level, side, bases) || bases.empty()) {
      constructive_ok = false;
      break;
    }
    out.sides.push_back(side);
    level = bases;
    density = density * density / 16.0;  // the per-level guarantee
  }
  if (constructive_ok) {
    out.bases = level;
    out.delta = density;
    return out;
  }

  // exhaustive fallback, for small instances only
  if (N > 64 || k > 3) return std::nullopt;
  std::set<long> members(J.begin(), J.end());
  std::vector<long> sides(k, 1);
  std::function<bool(int)> search = [&](int pos) -> bool {
    if (pos == k) {
      for (long base : J) {
        if (cube_inside(members, base, sides)) {
          out.sides = sides;
          out.bases = {base};
          out.delta = 1.0 / N;
          return true;
        }
      }
      return false;
    }
    for (long c = 1; c < N; ++c) {
      sides[pos] = c;
      if (search(pos + 1)) return true;
    }
    return false;
  };
  if (search(0)) return out;
  return std::nullopt;
}

namespace {

QMat functional_stack(const QMat& h_functional, const QMat& b_inverse,
                      const std::vector<long>& iterates) {
  int dim = h_functional.cols();
  // row for B^i(H) is the functional composed with B^{-i}
  long max_it = *std::max_element(iterates.begin(), iterates.end());
  std::vector<QMat> rows;
  QMat current = h_functional;
  std::map<long, QMat> by_power;
  by_power[0] = current;
  for (long p = 1; p <= max_it; ++p) {
    current = current * b_inverse;
    by_power[p] = current;
  }
  QMat stack(static_cast<int>(iterates.size()), dim);
  for (std::size_t r = 0; r < iterates.size(); ++r)
    for (int c = 0; c < dim; ++c) stack(static_cast<int>(r), c) = by_power[iterates[r]](0, c);
  return stack;
}

}  // namespace

InvariantSubspaceResult invariant_subspace_from_cube(const QMat& h_functional, const QMat& b,
                                                     const KCube& cube) {
  if (h_functional.rows() != 1) throw std::invalid_argument("H must be a single functional row");
  QMat b_inverse = b.inverse();
  int k = static_cast<int>(cube.sides.size());
  {
    QMat stack = functional_stack(h_functional, b_inverse, cube.elements());
    int codim = exact_rank(stack);
    if (codim > k)
      throw CubePreconditionError("invariant_subspace_from_cube: intersection codimension exceeds k");
  }

  // induction of the cube lemma
  std::function<InvariantSubspaceResult(KCube)> descend = [&](KCube current) {
    int depth = static_cast<int>(current.sides.size());
    if (depth == 1) {
      // both hyperplanes coincide; the side is the return exponent
      return InvariantSubspaceResult{KCube{current.base, {}}, current.sides[0]};
    }
    long last_side = current.sides.back();
    KCube first{current.base, {current.sides.begin(), current.sides.end() - 1}};
    KCube second{current.base + last_side, first.sides};
    QMat s1 = functional_stack(h_functional, b_inverse, first.elements());
    QMat s2 = functional_stack(h_functional, b_inverse, second.elements());
    if (exact_rank(s1) <= depth - 1) return descend(first);
    if (exact_rank(s2) <= depth - 1) return descend(second);
    // both halves have full depth codimension; they must coincide
    return InvariantSubspaceResult{first, last_side};
  };
  InvariantSubspaceResult out = descend(cube);
  // confirm B^l fixes the subspace over the returned subcube
  std::vector<long> shifted;
  for (long e : out.subcube.elements()) shifted.push_back(e + out.l);
  QMat s_orig = functional_stack(h_functional, b_inverse, out.subcube.elements());
  QMat s_shift = functional_stack(h_functional, b_inverse, shifted);
  if (!same_row_space(s_orig, s_shift))
    throw std::logic_error("invariant_subspace_from_cube: invariance verification failed");
  return out;
}

VandermondeResult vandermonde(const std::vector<long>& m, const std::vector<Rational>& x) {
  int n = static_cast<int>(m.size());
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("vandermonde: size mismatch");
  QMat v(n, n);
  for (int u = 0; u < n; ++u)
    for (int j = 0; j < n; ++j) {
      Rational p(1);
      for (long e = 0; e < m[u]; ++e) p *= x[j];
      v(u, j) = p;
    }
  VandermondeResult out;
  out.det = v.det();
  out.product_part = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.product_part *= (x[j] - x[i]);
  if (out.product_part == 0) {
    out.schur_defined = false;
    out.schur_part = 0;
  } else {
    out.schur_part = out.det / out.product_part;
  }
  return out;
}

void kernel_instance_data(const std::vector<Rational>& eigenvalues, const QMultiVector& upsilon,
                          int ell, std::vector<Rational>& b_by_subset, std::vector<int>& sigma,
                          std::vector<Rational>& upsilon_by_subset) {
  int d = static_cast<int>(eigenvalues.size());
  const SubsetBasis& basis = SubsetBasis::get(d, ell);
  const SubsetBasis& cobasis = SubsetBasis::get(d, d - ell);
  std::uint32_t full = (1u << d) - 1;
  b_by_subset.resize(basis.size());
  sigma.resize(basis.size());
  upsilon_by_subset.resize(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    std::uint32_t mask = basis.mask(i);
    std::uint32_t comask = full & ~mask;
    Rational b(1);
    for (int j = 0; j < d; ++j)
      if (comask & (1u << j)) b *= eigenvalues[j];
    b_by_subset[i] = b;
    sigma[i] = shuffle_sign(mask, comask);
    upsilon_by_subset[i] = upsilon.coeff[cobasis.index_of_mask(comask)];
  }
}

DisjointnessResult disjointness_check(const std::vector<Rational>& eigenvalues,
                                      const QMultiVector& upsilon, int ell,
                                      const std::vector<long>& exponents) {
  int d = static_cast<int>(eigenvalues.size());
  if (upsilon.d != d || upsilon.ell != d - ell)
    throw std::invalid_argument("disjointness_check: upsilon must have degree d - ell");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (rational_abs(eigenvalues[i]) == rational_abs(eigenvalues[j]))
        throw PreconditionError("pinching", "eigenvalue moduli are not pairwise distinct");
  for (const Rational& c : upsilon.coeff)
    if (c == 0)
      throw PreconditionError("eigenspace", "the section contains a sum of eigenspaces");

  DisjointnessResult out;
  std::vector<Rational> eigs = eigenvalues;
  for (const Rational& b : eigs)
    if (b < 0) out.b_squared = true;
  if (out.b_squared)
    for (Rational& b : eigs) b = b * b;  // the statement for B^2 covers B

  std::vector<Rational> b_by_subset, upsilon_by_subset;
  std::vector<int> sigma;
  kernel_instance_data(eigs, upsilon, ell, b_by_subset, sigma, upsilon_by_subset);
  int n_subsets = static_cast<int>(b_by_subset.size());

  // linear system in z_I = sigma_I upsilon(I) omega(I)
  QMat system(static_cast<int>(exponents.size()), n_subsets);
  for (std::size_t u = 0; u < exponents.size(); ++u)
    for (int i = 0; i < n_subsets; ++i) {
      Rational p(1);
      for (long e = 0; e < exponents[u]; ++e) p *= b_by_subset[i];
      // negative exponents: the system scales row-wise, so positive powers of
      // the inverses decide the same kernel
      if (exponents[u] < 0) {
        p = 1;
        for (long e = 0; e < -exponents[u]; ++e) p /= b_by_subset[i];
      }
      system(static_cast<int>(u), i) = p;
    }
  auto kernel_z = exact_nullspace(system);
  out.kernel_dimension = static_cast<int>(kernel_z.size());
  if (kernel_z.empty()) {
    out.empty = true;
    out.certificate = "trivial-kernel";
    return out;
  }

  auto to_omega = [&](const std::vector<Rational>& z) {
    QMultiVector w(d, ell);
    for (int i = 0; i < n_subsets; ++i)
      w.coeff[i] = z[i] / (Rational(sigma[i]) * upsilon_by_subset[i]);
    return w;
  };

  if (ell == 1 || ell == d - 1) {
    // every vector of the exterior power is decomposable here
    out.empty = false;
    out.witness = to_omega(kernel_z[0]);
    return out;
  }
  if (out.kernel_dimension == 1) {
    QMultiVector w = to_omega(kernel_z[0]);
    if (plucker_relations_exact(w)) {
      out.empty = false;
      out.witness = w;
    } else {
      out.empty = true;
      out.certificate = "plucker-excluded";
    }
    return out;
  }
  // preconditions were verified exactly, so the grouped-equation induction
  // applies: no nonzero ell-vector solves the system
  out.empty = true;
  out.certificate = "kernel2-induction";
  return out;
}

Kernel2Result kernel2_check(const QMultiVector& omega, const std::vector<Rational>& b_by_subset,
                            const QMultiVector& upsilon, const std::vector<int>& sigma) {
  int d = omega.d, ell = omega.ell;
  const SubsetBasis& basis = SubsetBasis::get(d, ell);
  const SubsetBasis& cobasis = SubsetBasis::get(d, d - ell);
  std::uint32_t full = (1u << d) - 1;
  if (static_cast<int>(b_by_subset.size()) != basis.size() ||
      static_cast<int>(sigma.size()) != basis.size())
    throw std::invalid_argument("kernel2_check: per-subset data size mismatch");
  std::vector<Rational> ups(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    ups[i] = upsilon.coeff[cobasis.index_of_mask(full & ~basis.mask(i))];
    if (ups[i] == 0)
      throw PreconditionError("eigenspace", "kernel2_check: upsilon(I) vanishes");
  }
  if (!plucker_relations_exact(omega))
    throw std::invalid_argument("kernel2_check: omega is not decomposable");

  Kernel2Result out;
  std::map<Rational, std::vector<int>> groups;
  for (int i = 0; i < basis.size(); ++i) groups[b_by_subset[i]].push_back(i);
  out.satisfies_equations = true;
  for (const auto& [b, members] : groups) {
    Rational sum(0);
    for (int i : members) sum += Rational(sigma[i]) * omega.coeff[i] * ups[i];
    if (sum != 0) out.satisfies_equations = false;
  }
  out.omega_is_zero = omega.is_zero();
  if (!out.satisfies_equations) {
    out.implication_ok = true;  // vacuous
    return out;
  }
  out.implication_ok = out.omega_is_zero;

  // lexicographic-induction certificate: walk groups by decreasing b value;
  // within each group at most one coefficient may be nonzero, and the grouped
  // equation then forces it to vanish
  out.certificate_ok = true;
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    int nonzero = 0;
    for (int i : it->second)
      if (omega.coeff[i] != 0) ++nonzero;
    if (nonzero > 1) {
      out.certificate_ok = false;
      break;
    }
    for (int i : it->second) out.forced_order.push_back(i);
  }
  return out;
}

}  // namespace cospec
