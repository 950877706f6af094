#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cospec/exterior.hpp"
#include "cospec/matrix.hpp"
#include "cospec/rng.hpp"

namespace cospec {

// Arithmetic k-cube {base + sum a_i sides_i : a_i in {0,1}} with 2^k distinct
// elements.
struct KCube {
  long base = 0;
  std::vector<long> sides;

  std::vector<long> elements() const;  // sorted, all 2^k of them
};

struct KCubeSearch {
  std::vector<long> sides;
  std::vector<long> bases;  // the cube sits inside J at every base
  double delta;             // guaranteed density from the constructive chain
};

// Constructive gap-frequency search; falls back to exhaustive search on small
// inputs before reporting absence.
std::optional<KCubeSearch> find_k_cube(const std::vector<long>& J, long N, double eps, int k);

struct CubePreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantSubspaceResult {
  KCube subcube;
  long l = 0;  // B^l fixes the intersection subspace over the subcube
};

// H is the codimension-1 kernel of the functional row; B exact invertible.
InvariantSubspaceResult invariant_subspace_from_cube(const QMat& h_functional, const QMat& b,
                                                     const KCube& cube);

struct VandermondeResult {
  Rational det;
  Rational product_part;  // prod_{i<j} (x_j - x_i)
  Rational schur_part;    // det / product_part
  bool schur_defined = true;
};

VandermondeResult vandermonde(const std::vector<long>& m, const std::vector<Rational>& x);

struct PreconditionError : std::runtime_error {
  PreconditionError(std::string which_, const std::string& msg)
      : std::runtime_error(msg), which(std::move(which_)) {}
  std::string which;  // "pinching" or "eigenspace"
};

struct DisjointnessResult {
  bool empty = false;
  std::optional<QMultiVector> witness;  // decomposable kernel vector if one exists
  std::string certificate;              // trivial-kernel | plucker-excluded | kernel2-induction
  int kernel_dimension = 0;
  bool b_squared = false;  // negative eigenvalues handled by passing to B^2
};

// Decides whether the translates B^{-m_u}(V) of the hyperplane section defined
// by upsilon (coefficients in the eigenbasis of B) have empty common
// intersection. Exact throughout.
DisjointnessResult disjointness_check(const std::vector<Rational>& eigenvalues,
                                      const QMultiVector& upsilon, int ell,
                                      const std::vector<long>& exponents);

struct Kernel2Result {
  bool satisfies_equations = false;
  bool omega_is_zero = false;
  bool implication_ok = false;       // equations hold only for the zero ell-vector
  bool certificate_ok = false;       // the lexicographic walk forced every coefficient
  std::vector<int> forced_order;     // subset indices in the order they were forced to zero
};

// upsilon has degree d-ell; its coefficient at the complement of I plays the
// role of upsilon(I). sigma_I is the orientation sign of I against its
// complement.
Kernel2Result kernel2_check(const QMultiVector& omega, const std::vector<Rational>& b_by_subset,
                            const QMultiVector& upsilon, const std::vector<int>& sigma);

// Convenience: the grouped-equation data (b_I, sigma_I, upsilon(I)) for a
// diagonal spectrum, indexed by the canonical ell-subset order.
void kernel_instance_data(const std::vector<Rational>& eigenvalues, const QMultiVector& upsilon,
                          int ell, std::vector<Rational>& b_by_subset, std::vector<int>& sigma,
                          std::vector<Rational>& upsilon_by_subset);

}  // namespace cospec
