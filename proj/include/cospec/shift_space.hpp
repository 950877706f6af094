#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cospec/matrix.hpp"

namespace cospec {

enum class Side { Unstable, Stable, Window };

struct Word {
  std::vector<int> symbols;
  Side side = Side::Unstable;

  int length() const { return static_cast<int>(symbols.size()); }
};

struct MeasureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Markov measure on the full shift over a finite alphabet, including the
// Bernoulli case. Rows of the transition matrix are stochastic and the
// stationary vector is invariant; both validated on construction.
class MarkovMeasure {
 public:
  MarkovMeasure(RMat transition, std::vector<double> stationary);
  static MarkovMeasure bernoulli(const std::vector<double>& probs);
  static MarkovMeasure from_transition(const RMat& transition);

  int alphabet() const { return static_cast<int>(stationary_.size()); }
  double transition(int i, int j) const { return transition_(i, j); }
  const RMat& transition_matrix() const { return transition_; }
  const std::vector<double>& stationary() const { return stationary_; }
  bool is_bernoulli(double tol = 1e-12) const;

  // Time reversal: p~(i,j) = pi_j p(j,i) / pi_i, same stationary vector.
  MarkovMeasure reversed() const;

  // Ratio bound K on J f^k_I over anchor points (eq-style bounded distortion);
  // equals 1 for Bernoulli measures and is independent of k >= 1 here.
  double distortion_bound() const;

 private:
  RMat transition_;
  std::vector<double> stationary_;
};

struct CylinderMass {
  double value = 0;
  bool null_cylinder = false;  // hit a zero transition
};

CylinderMass cylinder_measure(const MarkovMeasure& mu, const Word& w);

struct BackwardBranch {
  Word preimage;  // the k symbols prepended to x
  double weight;  // J f^k_I(x), the conditional cylinder mass
};

struct BackwardAverage {
  std::vector<BackwardBranch> branches;
  double weight_sum = 0;
  double unaccounted_mass = 0;
  bool truncated = false;  // enumeration cap hit
  bool warning = false;    // unaccounted mass above 1%
};

// Backward average at depth k anchored at a point starting with x_prefix;
// for Markov measures the weights depend on x only through its first symbol.
BackwardAverage backward_average(const MarkovMeasure& mu, const Word& x_prefix, int k,
                                 long truncation = 4000000L);

// Potential on one-sided sequences, evaluated on finite prefixes.
struct Potential {
  int alphabet = 2;
  int depth = -1;  // number of coordinates read; -1 = unbounded
  std::function<double(const std::vector<int>&)> eval;
  // bound on the value oscillation beyond a given evaluated depth (unbounded
  // potentials only)
  std::function<double(int)> tail_bound;
};

Potential first_coordinate_potential(int alphabet, std::vector<double> values);
Potential geometric_potential(int alphabet);  // sum_n 2^{-n-1} x_n
Potential log_jacobian_potential(const MarkovMeasure& mu);

// Upper bound on osc_k over all depth-k cylinders by interval evaluation over
// truncated continuations.
double oscillation(const Potential& psi, int k, long truncation = 1000000L);

struct ReturnWord {
  Word word;   // full cylinder word of length r + |base| starting and ending with base
  int r = 0;   // return time
  double mass = 0;  // conditional mass within the base cylinder
};

struct InducedSystem {
  Word base_cylinder;
  std::vector<ReturnWord> return_words;
  double measure_of_base = 0;
  double captured_mass = 0;      // fraction of the base cylinder covered
  double mean_return_time = 0;   // over enumerated words, mass-weighted
};

InducedSystem build_induced(const MarkovMeasure& mu, const Word& base, int max_return_time);

}  // namespace cospec
