#pragma once

#include <stdexcept>
#include <vector>

#include "cospec/cocycle.hpp"
#include "cospec/linalg.hpp"

namespace cospec {

enum class HolonomyDirection { Stable, Unstable };

struct HolonomyMap {
  SymbolicPoint source, target;
  HolonomyDirection direction = HolonomyDirection::Stable;
  CMat matrix;
  double residual = 0;    // last Cauchy increment
  int iterations_used = 0;
  std::vector<double> increments;  // recorded ||H_{n+1} - H_n||
};

struct BunchingReport {
  int N = 1;
  double C = 0;      // sup of ||A^N|| and ||(A^N)^{-1}|| over cylinder words
  double nu = 1;
  double theta = 0;  // contraction of f^N on local stable sets: metric_theta^N
  double tau = 0;    // computed sup of ||A^N|| ||(A^N)^{-1}|| theta^nu
  bool satisfied = false;
  std::vector<int> worst_word;
};

struct HolonomyDiverged : std::runtime_error {
  explicit HolonomyDiverged(std::vector<double> history)
      : std::runtime_error("holonomy diverged"), increments(std::move(history)) {}
  std::vector<double> increments;
};

BunchingReport check_fiber_bunching(const CocycleSpec& spec, int N, double nu);

// H^s = lim A^n(y)^{-1} A^n(x) for y in the local stable set of x. Locally
// constant specs return the identity at n = 0 with residual 0.
HolonomyMap stable_holonomy(const CocycleSpec& spec, const SymbolicPoint& x,
                            const SymbolicPoint& y, double tol = 1e-10, int cap = 300);

// Mirror under time reversal: products of the inverses along backward orbits.
HolonomyMap unstable_holonomy(const CocycleSpec& spec, const SymbolicPoint& x,
                              const SymbolicPoint& y, double tol = 1e-10, int cap = 300);

}  // namespace cospec
