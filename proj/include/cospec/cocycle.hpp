#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cospec/matrix.hpp"
#include "cospec/rng.hpp"
#include "cospec/shift_space.hpp"

namespace cospec {

// Two-sided eventually periodic point of the shift, represented by a periodic
// past, a finite window, and a periodic future. symbol(n) reads coordinate
// n + origin, so shifting is an origin move.
struct SymbolicPoint {
  std::vector<int> left_cycle;   // coordinates < 0, aligned so coordinate -1 is back()
  std::vector<int> window;       // coordinates 0 .. |window|-1
  std::vector<int> right_cycle;  // coordinates >= |window|, phase 0 at |window|
  long origin = 0;

  static SymbolicPoint periodic(const std::vector<int>& word);
  static SymbolicPoint homoclinic(const std::vector<int>& period_word,
                                  const std::vector<int>& insert, long l);

  int symbol(long n) const;
  SymbolicPoint shifted(long k) const;
  // local stable set: all coordinates n >= 0 agree; local unstable set: all
  // n < 0 agree. Decided exactly for eventually periodic data.
  bool in_same_local_stable_set(const SymbolicPoint& o) const;
  bool in_same_local_unstable_set(const SymbolicPoint& o) const;
};

struct HolderPerturbation {
  double amplitude = 0.0;  // overall size; keep << 1 so matrices stay invertible
  double nu = 1.0;         // declared Hoelder exponent
  int max_depth = 40;
  std::uint64_t salt = 0;
};

struct CocycleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shift space + matrix assignment + measure data. Locally constant when no
// perturbation is set; otherwise Hoelder with the declared exponent.
class CocycleSpec {
 public:
  CocycleSpec(std::vector<CMat> matrices, MarkovMeasure measure);
  CocycleSpec(std::vector<QMat> rational_matrices, MarkovMeasure measure);

  int alphabet() const { return static_cast<int>(matrices_.size()); }
  int dim() const { return matrices_.empty() ? 0 : matrices_[0].rows(); }
  bool locally_constant() const { return !perturbation_.has_value(); }
  bool exact() const { return !rational_.empty(); }

  const std::vector<CMat>& matrices() const { return matrices_; }
  const std::vector<QMat>& rational_matrices() const { return rational_; }
  const MarkovMeasure& measure() const { return measure_; }
  double metric_theta() const { return metric_theta_; }
  void set_metric_theta(double t) { metric_theta_ = t; }

  void set_perturbation(const HolderPerturbation& p) { perturbation_ = p; }
  const std::optional<HolderPerturbation>& perturbation() const { return perturbation_; }

  // Generator value at a point (depends only on symbol 0 when locally constant).
  CMat matrix_at(const SymbolicPoint& x) const;
  // Product along the forward orbit: A(f^{n-1} x) ... A(x).
  CMat forward_product(const SymbolicPoint& x, long n) const;

  // Ordered product along a symbol word: A(w_{r-1}) ... A(w_0).
  CMat word_product(std::span<const int> symbols) const;
  QMat word_product_exact(std::span<const int> symbols) const;

 private:
  std::vector<CMat> matrices_;
  std::vector<QMat> rational_;
  MarkovMeasure measure_;
  double metric_theta_ = 0.5;
  std::optional<HolderPerturbation> perturbation_;
};

// Locally constant cocycle over the induced full shift; the matrix on each
// return word is the ordered product of the base matrices before the return.
CocycleSpec induce_cocycle(const CocycleSpec& spec, const InducedSystem& ind);

// Cocycle over the inverse shift: conjugate-transposed step matrices, time
// reversed measure. Locally constant specs only.
CocycleSpec adjoint_cocycle(const CocycleSpec& spec);

// Stationary forward sampler of the symbol process.
class MarkovSampler {
 public:
  MarkovSampler(const MarkovMeasure& mu, RandomSource rng);
  int next();

 private:
  MarkovMeasure mu_;
  RandomSource rng_;
  int current_ = -1;
};

}  // namespace cospec
