#include "cospec/holonomy.hpp"

#include <cmath>
#include <functional>

namespace cospec {

BunchingReport check_fiber_bunching(const CocycleSpec& spec, int N, double nu) {
  BunchingReport out;
  out.N = N;
  out.nu = nu;
  out.theta = std::pow(spec.metric_theta(), N);
  long count = 1;
  for (int i = 0; i < N; ++i) {
    count *= spec.alphabet();
    if (count > 2000000L)
      throw CocycleError("check_fiber_bunching: cylinder family not finitely checkable");
  }
  double theta_nu = std::pow(out.theta, nu);
  std::vector<int> word(N, 0);
  std::function<void(int)> dfs = [&](int pos) {
    if (pos == N) {
      // evaluate A^N on the periodic representative of the cylinder word
      SymbolicPoint rep = SymbolicPoint::periodic(word);
      CMat prod = spec.forward_product(rep, N);
      double norm = operator_norm(prod);
      double inv_norm = operator_norm(prod.inverse());
      out.C = std::max({out.C, norm, inv_norm});
      double value = norm * inv_norm * theta_nu;
      if (value > out.tau) {
        out.tau = value;
        out.worst_word = word;
      }
      return;
    }
    for (int s = 0; s < spec.alphabet(); ++s) {
      word[pos] = s;
      dfs(pos + 1);
    }
  };
  dfs(0);
  out.satisfied = out.tau < 1.0;
  return out;
}

namespace {

HolonomyMap limit_of_products(const CocycleSpec& spec, const SymbolicPoint& x,
                              const SymbolicPoint& y, double tol, int cap,
                              HolonomyDirection dir) {
  int d = spec.dim();
  HolonomyMap out;
  out.source = x;
  out.target = y;
  out.direction = dir;
  out.matrix = CMat::identity(d);

  bool same_point = x.in_same_local_stable_set(y) && x.in_same_local_unstable_set(y);
  if (spec.locally_constant() || same_point) {
    // products along equal symbol words cancel exactly
    return out;
  }

  CMat prod_x = CMat::identity(d), prod_y = CMat::identity(d);
  CMat h_prev = CMat::identity(d);
  for (int n = 0; n < cap; ++n) {
    if (dir == HolonomyDirection::Stable) {
      prod_x = spec.matrix_at(x.shifted(n)) * prod_x;
      prod_y = spec.matrix_at(y.shifted(n)) * prod_y;
    } else {
      prod_x = prod_x * spec.matrix_at(x.shifted(-(n + 1)));
      prod_y = prod_y * spec.matrix_at(y.shifted(-(n + 1)));
    }
    // common rescaling keeps entries in range without changing H
    double scale = frobenius_norm(prod_y);
    if (scale > 1e6 || scale < 1e-6) {
      prod_x = prod_x * cdouble(1.0 / scale);
      prod_y = prod_y * cdouble(1.0 / scale);
    }
    CMat h(d, d);
    try {
      h = (dir == HolonomyDirection::Stable) ? prod_y.inverse() * prod_x
                                             : prod_y * prod_x.inverse();
    } catch (const SingularMatrixError&) {
      // the products left the representable regime; no Cauchy limit in sight
      throw HolonomyDiverged(out.increments);
    }
    double inc = frobenius_norm(h - h_prev);
    out.increments.push_back(inc);
    h_prev = h;
    if (inc < tol) {
      out.matrix = h;
      out.residual = inc;
      out.iterations_used = n + 1;
      return out;
    }
  }
  throw HolonomyDiverged(out.increments);
}

}  // namespace

HolonomyMap stable_holonomy(const CocycleSpec& spec, const SymbolicPoint& x,
                            const SymbolicPoint& y, double tol, int cap) {
  if (!x.in_same_local_stable_set(y))
    throw std::invalid_argument("stable_holonomy: points not on one local stable set");
  return limit_of_products(spec, x, y, tol, cap, HolonomyDirection::Stable);
}

HolonomyMap unstable_holonomy(const CocycleSpec& spec, const SymbolicPoint& x,
                              const SymbolicPoint& y, double tol, int cap) {
  if (!x.in_same_local_unstable_set(y))
    throw std::invalid_argument("unstable_holonomy: points not on one local unstable set");
  return limit_of_products(spec, x, y, tol, cap, HolonomyDirection::Unstable);
}

}  // namespace cospec
