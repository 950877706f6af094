#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cospec/cocycle.hpp"
#include "cospec/linalg.hpp"
#include "cospec/rauzy.hpp"
#include "cospec/rng.hpp"

namespace cospec {

struct SpectrumEstimate {
  std::vector<double> exponents;  // non-increasing
  std::vector<double> se;         // batch-means standard errors, >= 20 batches
  std::vector<std::vector<double>> batch_means;  // per full batch, per position
  long iterations = 0;
  int renorm_period = 0;
  double log_det_average = 0;  // Birkhoff average of log|det| along the same orbit

  double gap(int ell) const { return exponents.at(ell - 1) - exponents.at(ell); }
  double joint_se(int i, int j) const;
};

// Sampled cumulative log-diagonal sums of the QR sweep, for growth-rate fits.
struct QrTrace {
  std::vector<double> steps;                // x values
  std::vector<std::vector<double>> cumlog;  // per sample: prefix sums over positions
};

struct SpectrumOptions {
  int renorm_period = 10;
  int batches = 20;
  bool record_trace = false;
  std::optional<CMat> start_frame;  // orthonormal columns; defaults to the identity
};

// Generic QR-reorthonormalized product run over a stream of step matrices.
SpectrumEstimate estimate_spectrum_stream(const std::function<CMat()>& next_matrix, int dim,
                                          long iterations, const SpectrumOptions& opts = {},
                                          QrTrace* trace = nullptr);

// Spectrum of a cocycle spec along a stationary sampled orbit.
SpectrumEstimate estimate_spectrum(const CocycleSpec& spec, long iterations, RandomSource rng,
                                   const SpectrumOptions& opts = {}, QrTrace* trace = nullptr);

struct ZorichOptions {
  int renorm_period = 10;
  int batches = 20;
  bool restrict_to_invariant = true;  // evolve a frame of H_pi only
  bool record_trace = false;
  long burn_in = 1000;  // accelerated steps discarded before accumulating
  long step_cap_per_accel = 1000000;
};

struct ZorichSpectrumResult {
  SpectrumEstimate estimate;  // restricted exponents when restrict_to_invariant
  QrTrace trace;
  int genus = 0;
  PermutationPair start;
  bool symmetric(double nsigma = 3.0) const;  // lambda_i + lambda_{2g+1-i} = 0 within n sigma
};

ZorichSpectrumResult estimate_zorich_spectrum(const PermutationPair& start, long accelerated_steps,
                                              RandomSource rng, const ZorichOptions& opts = {});

struct GapDiagnostic {
  int ell = 0;
  int d_u = 0, d_s = 0;
  double slope = 0, slope_se = 0;          // fitted growth rate of (1/n) log Delta^n
  double predicted = 0, predicted_se = 0;  // d_s/(d_u+d_s) (lambda_u - lambda_s)
  bool agrees(double nsigma = 3.0, double abs_tol = 1e-6) const;
};

// Determinant-ratio growth diagnostic computed from a recorded QR trace.
GapDiagnostic gap_diagnostic(const QrTrace& trace, const SpectrumEstimate& spectrum, int ell);

struct InducingReport {
  SpectrumEstimate base;
  SpectrumEstimate induced;
  double base_cylinder_mass = 0;
  double mean_return_time = 0;      // mass-weighted over enumerated return words
  double kac_prediction = 0;        // 1 / mu(base)
  bool exponents_match(double nsigma = 3.0) const;  // induced = base / mass per index
  bool inconclusive = false;        // variance too large to decide
};

InducingReport verify_inducing_rescale(const CocycleSpec& base_spec, const CocycleSpec& induced_spec,
                                       const InducedSystem& ind, long iterations, RandomSource rng,
                                       const SpectrumOptions& opts = {});

struct AdjointReport {
  SpectrumEstimate original;
  SpectrumEstimate adjoint;
  bool match(double nsigma = 3.0, double abs_tol = 1e-9) const;
};

AdjointReport adjoint_spectrum_check(const CocycleSpec& spec, long iterations, RandomSource rng,
                                     const SpectrumOptions& opts = {});

// Least-squares slope with a batch-means error over the second half of (x, y).
void fit_growth_rate(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                     double& se);

}  // namespace cospec
