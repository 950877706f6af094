#pragma once

#include <functional>
#include <vector>

#include "cospec/cocycle.hpp"
#include "cospec/exterior.hpp"
#include "cospec/rauzy.hpp"

namespace cospec {

struct WeightedAtom {
  MultiVector direction;  // unit norm, decomposable
  double weight;
};

// Finitely supported probability on Grass(ell, d), the empirical stand-in for
// the fiber conditional measures.
class EmpiricalFiberMeasure {
 public:
  EmpiricalFiberMeasure(int d, int ell) : d_(d), ell_(ell) {}

  // Atoms sampled from the unitarily invariant distribution (orthonormalized
  // Gaussian frames), so hyperplane sections carry zero mass almost surely.
  static EmpiricalFiberMeasure invariant_sample(int d, int ell, int atom_count, RandomSource& rng);

  int d() const { return d_; }
  int ell() const { return ell_; }
  const std::vector<WeightedAtom>& atoms() const { return atoms_; }
  void add_atom(const MultiVector& direction, double weight);
  double total_weight() const;

 private:
  int d_, ell_;
  std::vector<WeightedAtom> atoms_;
};

// Projective Grassmannian action of an invertible map on every atom; weights
// unchanged.
EmpiricalFiberMeasure pushforward(const EmpiricalFiberMeasure& measure, const CMat& L);

struct DispersionStat {
  GrassmannPoint mean_point;  // extrinsic mean, snapped to a decomposable point
  double dispersion = 0;      // weighted mean squared FS distance to the raw mean
};

DispersionStat dispersion(const EmpiricalFiberMeasure& measure);

// One matrix per backward step: the measure after n steps is the pushforward
// of the initial one by A(x_{-1}) ... A(x_{-n}).
using BackwardStream = std::function<CMat()>;

// Locally constant specs: exact reversed-chain sampling of the past.
BackwardStream spec_backward_stream(const CocycleSpec& spec, RandomSource rng);
// Zorich steps: a forward trajectory of accelerated steps is generated first
// and then served newest-first, which is precisely the past itinerary of the
// trajectory's endpoint. Each call returns one accelerated fiber matrix,
// normalized. The stream is exhausted after `length` calls.
BackwardStream zorich_backward_stream(const PermutationPair& start, RandomSource rng, long length,
                                      long burn_in = 200, long step_cap = 1000000L);

struct DiracTrace {
  std::vector<double> dispersions;
  GrassmannPoint final_location;
  double final_dispersion = 0;
  bool converged = false;  // below the threshold by the end of the run
};

DiracTrace dirac_convergence_experiment(const BackwardStream& stream, int d, int ell,
                                        int orbit_length, int atom_count, RandomSource& rng,
                                        double threshold = 1e-6);

struct EccentricityTrace {
  std::vector<double> steps;
  std::vector<double> log_eccentricity;
  double slope = 0, slope_se = 0;
};

EccentricityTrace eccentricity_divergence(const BackwardStream& stream, int d, int ell,
                                          int orbit_length);

struct TrackingTrace {
  std::vector<GrassmannPoint> points;  // image of the most expanded subspace
  std::vector<double> fs_increments;
  std::vector<bool> non_unique;        // eccentricity within tolerance of 1 at that step
};

TrackingTrace most_expanded_tracking(const BackwardStream& stream, int d, int ell,
                                     int orbit_length);

}  // namespace cospec
