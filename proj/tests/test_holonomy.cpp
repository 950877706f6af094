#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cospec/holonomy.hpp"

using namespace cospec;

namespace {

CMat rotation(double th) {
  CMat m(2, 2);
  m(0, 0) = std::cos(th); m(0, 1) = -std::sin(th);
  m(1, 0) = std::sin(th); m(1, 1) = std::cos(th);
  return m;
}

CMat diag2(double a, double b) {
  CMat m(2, 2);
  m(0, 0) = a; m(1, 1) = b;
  return m;
}

// near-conformal two-symbol cocycle with a small Hoelder perturbation
CocycleSpec bunched_spec(double amplitude) {
  CocycleSpec spec({rotation(0.3) * cdouble(1.1), rotation(-0.2) * cdouble(0.9)},
                   MarkovMeasure::bernoulli({0.5, 0.5}));
  HolderPerturbation p;
  p.amplitude = amplitude;
  p.nu = 1.0;
  p.max_depth = 40;
  p.salt = 77;
  spec.set_perturbation(p);
  return spec;
}

// stable pair: same future, different past
void stable_pair(SymbolicPoint& x, SymbolicPoint& y) {
  x = SymbolicPoint::periodic({0, 1});
  y = x;
  y.left_cycle = {1, 1, 0};
}

}  // namespace

TEST_CASE("fiber bunching: identity cocycle always satisfies") {
  CocycleSpec spec({CMat::identity(2), CMat::identity(2)}, MarkovMeasure::bernoulli({0.5, 0.5}));
  BunchingReport rep = check_fiber_bunching(spec, 1, 1.0);
  CHECK(rep.satisfied);
  CHECK(rep.tau == doctest::Approx(0.5));  // theta^nu with theta = 1/2
}

TEST_CASE("fiber bunching: diag(2, 1/2) fails at theta=1/2 and passes at theta=1/8") {
  CocycleSpec spec({diag2(2, 0.5)}, MarkovMeasure::bernoulli({1.0}));
  spec.set_metric_theta(0.5);
  BunchingReport rep = check_fiber_bunching(spec, 1, 1.0);
  CHECK(rep.tau == doctest::Approx(2.0));
  CHECK_FALSE(rep.satisfied);

  spec.set_metric_theta(0.125);
  BunchingReport rep2 = check_fiber_bunching(spec, 1, 1.0);
  CHECK(rep2.tau == doctest::Approx(0.5));
  CHECK(rep2.satisfied);
}

TEST_CASE("locally constant specs have identity holonomies with zero residual") {
  CocycleSpec spec({diag2(2, 0.5), rotation(0.4)}, MarkovMeasure::bernoulli({0.5, 0.5}));
  SymbolicPoint x, y;
  stable_pair(x, y);
  HolonomyMap hs = stable_holonomy(spec, x, y);
  CHECK(frobenius_norm(hs.matrix - CMat::identity(2)) == 0.0);
  CHECK(hs.residual == 0.0);
  CHECK(hs.iterations_used == 0);

  SymbolicPoint u = SymbolicPoint::periodic({0, 1});
  SymbolicPoint v = u;
  v.window = {1};  // same past, different coordinate 0
  v.right_cycle = {0, 1};
  HolonomyMap hu = unstable_holonomy(spec, u, v);
  CHECK(frobenius_norm(hu.matrix - CMat::identity(2)) == 0.0);
}

TEST_CASE("holonomy of a point with itself is the identity at n=0") {
  CocycleSpec spec = bunched_spec(0.05);
  SymbolicPoint x = SymbolicPoint::periodic({0, 1});
  HolonomyMap h = stable_holonomy(spec, x, x);
  CHECK(h.iterations_used == 0);
  CHECK(h.residual == 0.0);
}

TEST_CASE("holonomy requires the right local set") {
  CocycleSpec spec = bunched_spec(0.05);
  SymbolicPoint x = SymbolicPoint::periodic({0});
  SymbolicPoint y = SymbolicPoint::periodic({1});
  CHECK_THROWS_AS((void)stable_holonomy(spec, x, y), std::invalid_argument);
}

TEST_CASE("bunched perturbed cocycle: increments decay geometrically") {
  CocycleSpec spec = bunched_spec(0.05);
  BunchingReport bunching = check_fiber_bunching(spec, 1, 1.0);
  REQUIRE(bunching.satisfied);
  SymbolicPoint x, y;
  stable_pair(x, y);
  HolonomyMap h = stable_holonomy(spec, x, y, 1e-11);
  REQUIRE(h.increments.size() >= 6);
  // least-squares slope of log increments is a decay with ratio < 1
  std::vector<double> logs;
  for (double v : h.increments)
    if (v > 0) logs.push_back(std::log(v));
  double n = logs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    sx += i; sy += logs[i]; sxx += double(i) * i; sxy += i * logs[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double fitted_ratio = std::exp(slope);
  CHECK(fitted_ratio < 1.0);
  CHECK(h.residual < 1e-11);
  // with the bunching constants: increments below C' tau^n d(x,y)^nu
  for (std::size_t i = 1; i < h.increments.size(); ++i)
    CHECK(h.increments[i] < 50.0 * std::pow(std::max(fitted_ratio, bunching.tau), i));
}

TEST_CASE("unstable holonomy of the bunched cocycle converges the same way") {
  CocycleSpec spec = bunched_spec(0.05);
  SymbolicPoint u = SymbolicPoint::periodic({0, 1});
  SymbolicPoint v = u;
  v.window = {1, 0, 0};
  v.right_cycle = {1, 0};
  HolonomyMap h = unstable_holonomy(spec, u, v, 1e-11);
  CHECK(h.residual < 1e-11);
  CHECK(h.iterations_used > 3);
}

TEST_CASE("composition through an intermediate point on one local stable set") {
  CocycleSpec spec = bunched_spec(0.04);
  double tol = 1e-11;
  SymbolicPoint x = SymbolicPoint::periodic({0, 1});
  SymbolicPoint z = x, y = x;
  z.left_cycle = {1, 0};
  y.left_cycle = {1, 1, 0};
  CMat via = stable_holonomy(spec, z, y, tol).matrix * stable_holonomy(spec, x, z, tol).matrix;
  CMat direct = stable_holonomy(spec, x, y, tol).matrix;
  CHECK(frobenius_norm(via - direct) < 10 * 1e-9);
}

TEST_CASE("intertwining: A(y) H^s_{x,y} = H^s_{fx,fy} A(x)") {
  CocycleSpec spec = bunched_spec(0.04);
  double tol = 1e-11;
  SymbolicPoint x, y;
  stable_pair(x, y);
  CMat lhs = spec.matrix_at(y) * stable_holonomy(spec, x, y, tol).matrix;
  CMat rhs = stable_holonomy(spec, x.shifted(1), y.shifted(1), tol).matrix * spec.matrix_at(x);
  CHECK(frobenius_norm(lhs - rhs) / frobenius_norm(lhs) < 1e-8);
}

TEST_CASE("adjoint duality: unstable holonomy of the adjoint is the conjugate transpose") {
  CocycleSpec spec = bunched_spec(0.04);
  double tol = 1e-12;
  SymbolicPoint x, y;
  stable_pair(x, y);
  HolonomyMap hs = stable_holonomy(spec, y, x, tol);
  // adjoint cocycle products: B^{-n} over the inverse shift reduces to
  // A^n(y)^* (A^n(x)^*)^{-1}; iterate to the same tolerance
  int d = spec.dim();
  CMat px = CMat::identity(d), py = CMat::identity(d);
  CMat h = CMat::identity(d), h_prev = h;
  for (int n = 0; n < 300; ++n) {
    px = spec.matrix_at(x.shifted(n)) * px;
    py = spec.matrix_at(y.shifted(n)) * py;
    double scale = frobenius_norm(py);
    px = px * cdouble(1.0 / scale);
    py = py * cdouble(1.0 / scale);
    h = py.conjugate_transpose() * px.conjugate_transpose().inverse();
    if (frobenius_norm(h - h_prev) < tol && n > 2) break;
    h_prev = h;
  }
  CHECK(frobenius_norm(h - hs.matrix.conjugate_transpose()) < 1e-7);
}

TEST_CASE("holonomy divergence carries the increment history") {
  // violently non-bunched: expansion dominates the base contraction
  CocycleSpec spec({diag2(8, 0.125), diag2(0.125, 8)}, MarkovMeasure::bernoulli({0.5, 0.5}));
  HolderPerturbation p;
  p.amplitude = 0.2;
  p.nu = 1.0;
  p.max_depth = 30;
  p.salt = 3;
  spec.set_perturbation(p);
  // future word (0,0,1) so the shared products stay far from conformal
  SymbolicPoint x = SymbolicPoint::periodic({0, 0, 1});
  SymbolicPoint y = x;
  y.left_cycle = {1, 1, 0};
  try {
    (void)stable_holonomy(spec, x, y, 1e-14, 40);
    CHECK(false);
  } catch (const HolonomyDiverged& e) {
    CHECK(e.increments.size() >= 3);
    CHECK(e.increments.back() > 1e-10);
  }
}
