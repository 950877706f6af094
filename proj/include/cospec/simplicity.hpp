#pragma once

#include <optional>
#include <vector>

#include "cospec/cocycle.hpp"
#include "cospec/exterior.hpp"
#include "cospec/holonomy.hpp"
#include "cospec/linalg.hpp"

namespace cospec {

// Exact characteristic polynomial by Faddeev-LeVerrier; coefficients c_0..c_d
// with p(x) = sum c_k x^k and c_d = 1.
std::vector<Rational> characteristic_polynomial(const QMat& a);

struct ExactEigensystem {
  std::vector<Rational> eigenvalues;  // ordered to match the float canonical order
  QMat eigenvectors;                  // matching columns, exact
};

// Available when every eigenvalue is rational and simple; candidates proposed
// from the float spectrum and verified exactly against the characteristic
// polynomial before use.
std::optional<ExactEigensystem> exact_rational_eigensystem(const QMat& a);

struct PeriodicData {
  SymbolicPoint point;
  int period = 0;
  std::vector<int> word;
  CMat return_matrix;
  EigenData eigen;
  bool has_exact = false;
  QMat return_matrix_exact;
  std::optional<ExactEigensystem> exact_eigen;
};

PeriodicData make_periodic_data(const CocycleSpec& spec, const std::vector<int>& word);

struct HomoclinicData {
  SymbolicPoint point;
  long l = 0;
  std::vector<int> window;  // the l symbols before the return to the periodic pattern
  CMat along_matrix;        // A^l(z)
  bool has_exact = false;
  QMat along_matrix_exact;
  HolonomyMap stable_h, unstable_h;  // identity maps for locally constant specs
};

HomoclinicData make_homoclinic_data(const CocycleSpec& spec, const PeriodicData& pd,
                                    const std::vector<int>& insert, long l,
                                    double holonomy_tol = 1e-11);

struct TransitionMap {
  CMat matrix;  // psi in the canonical eigenbasis of the return matrix
  std::optional<QMat> exact_matrix;
  EigenData basis;
};

TransitionMap transition_map(const CocycleSpec& spec, const PeriodicData& pd,
                             const HomoclinicData& hd);

struct PinchingResult {
  bool ok = false;
  double gap = 0;  // min over i of |l_i| / |l_{i+1}| - 1
  bool exact = false;
};

PinchingResult check_pinching(const PeriodicData& pd, double rel_gap_tol = 1e-6);

struct MinorWitness {
  std::vector<int> rows;  // 1-based row subset of the vanishing minor
  std::vector<int> cols;
};

struct TwistingResult {
  bool ok = false;
  double smallest_minor = 0;  // smallest |minor| (exact mode) or scale-aware margin (float)
  std::optional<MinorWitness> witness;
  bool exact = false;
};

// Enumerates every algebraic minor of every size 1..d (entries of the exterior
// powers); exact mode decides nonvanishing exactly.
TwistingResult check_twisting(const TransitionMap& tm, bool exact, double zero_tol = 1e-9);

struct SimplicityVerdict {
  PinchingResult pinching;
  TwistingResult twisting;
  bool simple = false;
};

SimplicityVerdict check_simple(const CocycleSpec& spec, const PeriodicData& pd,
                               const HomoclinicData& hd);

// Convenience: data built from symbol words.
SimplicityVerdict check_simple(const CocycleSpec& spec, const std::vector<int>& periodic_word,
                               const std::vector<int>& homoclinic_insert, long l);

struct MonoidTargets {
  CMat subject_basis;                  // d x ell frame F
  std::vector<CMat> obstacle_bases;    // d x (d - ell) frames G_1..G_N
};

struct MonoidReport {
  double best_eccentricity = 1.0;
  std::vector<int> best_ecc_word;      // generator indices, applied left to right
  bool pinching_evidence = false;      // eccentricity above the threshold
  bool twisting_evidence = false;      // some word clears every obstacle
  std::vector<int> twisting_word;
  int words_examined = 0;
};

MonoidReport monoid_pinching_twisting(const std::vector<CMat>& generators, int trials,
                                      RandomSource& rng,
                                      const std::optional<MonoidTargets>& targets = std::nullopt,
                                      double ecc_threshold = 1e3, int max_word_len = 12);

}  // namespace cospec
