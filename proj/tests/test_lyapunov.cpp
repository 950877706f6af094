#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cospec/lyapunov.hpp"

using namespace cospec;

namespace {

CMat diag2(double a, double b) {
  CMat m(2, 2);
  m(0, 0) = a; m(1, 1) = b;
  return m;
}

CMat diag3(double a, double b, double c) {
  CMat m(3, 3);
  m(0, 0) = a; m(1, 1) = b; m(2, 2) = c;
  return m;
}

}  // namespace

TEST_CASE("constant diagonal cocycle has exact exponents") {
  CocycleSpec spec({diag2(2, 0.5)}, MarkovMeasure::bernoulli({1.0}));
  SpectrumEstimate est = estimate_spectrum(spec, 5000, RandomSource(7, 0));
  CHECK(std::abs(est.exponents[0] - std::log(2.0)) < 1e-9);
  CHECK(std::abs(est.exponents[1] + std::log(2.0)) < 1e-9);
}

TEST_CASE("iid symmetric diagonal choices average to zero exponents") {
  CocycleSpec spec({diag2(2, 0.5), diag2(0.5, 2)}, MarkovMeasure::bernoulli({0.5, 0.5}));
  SpectrumEstimate est = estimate_spectrum(spec, 40000, RandomSource(8, 0));
  for (int i = 0; i < 2; ++i) CHECK(std::abs(est.exponents[i]) < 3 * est.se[i]);
}

TEST_CASE("spectrum estimation is deterministic given the seed") {
  CocycleSpec spec({diag2(2, 0.5), diag2(0.5, 2)}, MarkovMeasure::bernoulli({0.5, 0.5}));
  SpectrumEstimate a = estimate_spectrum(spec, 5000, RandomSource(9, 1));
  SpectrumEstimate b = estimate_spectrum(spec, 5000, RandomSource(9, 1));
  CHECK(a.exponents == b.exponents);
}

TEST_CASE("sum rule: exponent total equals the log-determinant average") {
  RandomSource rng(10, 0);
  CMat a(2, 2), b(2, 2);
  a(0, 0) = 2; a(0, 1) = 1; a(1, 1) = 1;
  b(0, 0) = 1; b(1, 0) = -1; b(1, 1) = 3;
  CocycleSpec spec({a, b}, MarkovMeasure::bernoulli({0.4, 0.6}));
  SpectrumEstimate est = estimate_spectrum(spec, 20000, rng);
  double total = est.exponents[0] + est.exponents[1];
  CHECK(std::abs(total - est.log_det_average) < 1e-6);
}

TEST_CASE("zorich d=2 restricted spectrum is symmetric with positive top exponent") {
  ZorichOptions opts;
  ZorichSpectrumResult res =
      estimate_zorich_spectrum(PermutationPair({1, 2}, {2, 1}), 20000, RandomSource(11, 0), opts);
  REQUIRE(res.estimate.exponents.size() == 2);
  CHECK(res.genus == 1);
  CHECK(res.estimate.exponents[0] > 3 * res.estimate.se[0]);
  CHECK(res.symmetric(3.0));
}

TEST_CASE("zorich reversal classes d=3,4 have symmetric restricted spectra") {
  for (int d : {3, 4}) {
    ZorichSpectrumResult res =
        estimate_zorich_spectrum(PermutationPair::reversal(d), 20000, RandomSource(12, d));
    CHECK(res.symmetric(3.0));
    CHECK(res.estimate.exponents.front() > 0);
    // non-increasing order
    for (std::size_t i = 0; i + 1 < res.estimate.exponents.size(); ++i)
      CHECK(res.estimate.exponents[i] >= res.estimate.exponents[i + 1] - 1e-12);
  }
}

TEST_CASE("zorich d=4 reversal: top gap is simple at test scale") {
  ZorichSpectrumResult res =
      estimate_zorich_spectrum(PermutationPair::reversal(4), 60000, RandomSource(13, 0));
  REQUIRE(res.genus == 2);
  double gap = res.estimate.gap(1);
  CHECK(gap > 3 * res.estimate.joint_se(0, 1));
}

TEST_CASE("gap diagnostic on a deterministic diagonal cocycle is exact") {
  CocycleSpec spec({diag3(4, 2, 1)}, MarkovMeasure::bernoulli({1.0}));
  SpectrumOptions opts;
  opts.record_trace = true;
  QrTrace trace;
  SpectrumEstimate est = estimate_spectrum(spec, 2000, RandomSource(14, 0), opts, &trace);
  GapDiagnostic gd = gap_diagnostic(trace, est, 1);
  CHECK(gd.d_u == 1);
  CHECK(gd.d_s == 1);
  CHECK(std::abs(gd.slope - 0.5 * std::log(2.0)) < 1e-6);
  CHECK(std::abs(gd.predicted - 0.5 * std::log(2.0)) < 1e-9);
  CHECK(gd.agrees(3.0, 1e-6));
}

TEST_CASE("gap diagnostic sees no growth without a gap") {
  CocycleSpec spec({diag3(2, 2, 1)}, MarkovMeasure::bernoulli({1.0}));
  SpectrumOptions opts;
  opts.record_trace = true;
  QrTrace trace;
  SpectrumEstimate est = estimate_spectrum(spec, 2000, RandomSource(15, 0), opts, &trace);
  GapDiagnostic gd = gap_diagnostic(trace, est, 1);
  CHECK(std::abs(gd.slope) < 1e-9);
}

TEST_CASE("gap diagnostic cross-validates on zorich d=4") {
  ZorichOptions opts;
  opts.record_trace = true;
  ZorichSpectrumResult res =
      estimate_zorich_spectrum(PermutationPair::reversal(4), 60000, RandomSource(16, 0), opts);
  GapDiagnostic gd = gap_diagnostic(res.trace, res.estimate, 1);
  CHECK(gd.slope > 0);
  CHECK(gd.agrees(3.0));
}

TEST_CASE("monotone divergence: log Delta^n exceeds any fixed bound when a gap exists") {
  ZorichOptions opts;
  opts.record_trace = true;
  ZorichSpectrumResult res =
      estimate_zorich_spectrum(PermutationPair::reversal(4), 30000, RandomSource(17, 0), opts);
  const auto& trace = res.trace;
  double final_log_delta =
      trace.cumlog.back()[0] / 1.0 - trace.cumlog.back()[1] / 2.0;
  CHECK(final_log_delta > 100.0);
  // ergodic-lemma shadow: along returns, batch means of increments are positive
  std::size_t n = trace.steps.size();
  int positive = 0, batches = 8;
  for (int b = 0; b < batches; ++b) {
    std::size_t lo = n / 2 + b * (n / 2) / batches;
    std::size_t hi = std::min(n - 1, lo + (n / 2) / batches);
    double inc = (trace.cumlog[hi][0] - trace.cumlog[lo][0]) -
                 (trace.cumlog[hi][1] - trace.cumlog[lo][1]) / 2.0;
    if (inc > 0) ++positive;
  }
  CHECK(positive >= 7);
}

TEST_CASE("inducing rescales exponents by the mean return time") {
  MarkovMeasure mu = MarkovMeasure::bernoulli({0.5, 0.5});
  CocycleSpec base({diag2(2, 0.5), diag2(2, 0.5)}, mu);
  InducedSystem ind = build_induced(mu, Word{{0}}, 25);
  CocycleSpec induced = induce_cocycle(base, ind);
  InducingReport rep = verify_inducing_rescale(base, induced, ind, 20000, RandomSource(18, 0));
  CHECK_FALSE(rep.inconclusive);
  CHECK(std::abs(rep.mean_return_time - 2.0) / 2.0 < 0.05);
  CHECK(rep.exponents_match(3.0));
  CHECK(std::abs(rep.induced.exponents[0] - 2 * std::log(2.0)) <
        3 * rep.induced.se[0] + 1e-9);
}

TEST_CASE("inducing on the full space changes nothing") {
  MarkovMeasure mu = MarkovMeasure::bernoulli({1.0});
  CocycleSpec base({diag2(3, 0.25)}, mu);
  InducedSystem ind = build_induced(mu, Word{{0}}, 5);
  CocycleSpec induced = induce_cocycle(base, ind);
  InducingReport rep = verify_inducing_rescale(base, induced, ind, 3000, RandomSource(19, 0));
  CHECK(rep.base_cylinder_mass == doctest::Approx(1.0));
  CHECK(std::abs(rep.induced.exponents[0] - rep.base.exponents[0]) < 1e-9);
}

TEST_CASE("identity cocycle induces to zero exponents on both sides") {
  MarkovMeasure mu = MarkovMeasure::bernoulli({0.5, 0.5});
  CocycleSpec base({CMat::identity(2), CMat::identity(2)}, mu);
  InducedSystem ind = build_induced(mu, Word{{0}}, 15);
  InducingReport rep =
      verify_inducing_rescale(base, induce_cocycle(base, ind), ind, 3000, RandomSource(20, 0));
  for (double e : rep.base.exponents) CHECK(std::abs(e) < 1e-12);
  for (double e : rep.induced.exponents) CHECK(std::abs(e) < 1e-12);
}

TEST_CASE("adjoint spectrum: self-adjoint constant cocycle matches deterministically") {
  CMat h(2, 2);
  h(0, 0) = 3; h(0, 1) = cdouble(0, 1); h(1, 0) = cdouble(0, -1); h(1, 1) = 1;
  CocycleSpec spec({h}, MarkovMeasure::bernoulli({1.0}));
  AdjointReport rep = adjoint_spectrum_check(spec, 3000, RandomSource(21, 0));
  CHECK(std::abs(rep.original.exponents[0] - rep.adjoint.exponents[0]) < 1e-9);
  CHECK(rep.match());
}

TEST_CASE("adjoint spectrum matches for random integer cocycles") {
  CMat a(2, 2), b(2, 2);
  a(0, 0) = 2; a(0, 1) = 1; a(1, 0) = 1; a(1, 1) = 1;
  b(0, 0) = 1; b(0, 1) = 1; b(1, 0) = 0; b(1, 1) = 1;
  RMat t(2, 2);
  t(0, 0) = 0.7; t(0, 1) = 0.3; t(1, 0) = 0.4; t(1, 1) = 0.6;
  CocycleSpec spec({a, b}, MarkovMeasure::from_transition(t));
  AdjointReport rep = adjoint_spectrum_check(spec, 60000, RandomSource(22, 0));
  CHECK(rep.match(3.0, 1e-3));
}

TEST_CASE("conjugating a locally constant spec leaves the spectrum unchanged") {
  CMat a = diag2(2, 0.5), b(2, 2);
  b(0, 0) = 1; b(0, 1) = 1; b(1, 0) = 1; b(1, 1) = 2;
  CMat c(2, 2);
  c(0, 0) = 1; c(0, 1) = 2; c(1, 0) = 0.5; c(1, 1) = 3;
  CMat cinv = c.inverse();
  CocycleSpec spec({a, b}, MarkovMeasure::bernoulli({0.5, 0.5}));
  CocycleSpec conj({c * a * cinv, c * b * cinv}, MarkovMeasure::bernoulli({0.5, 0.5}));
  SpectrumEstimate e1 = estimate_spectrum(spec, 60000, RandomSource(23, 0));
  SpectrumEstimate e2 = estimate_spectrum(conj, 60000, RandomSource(23, 1));
  for (int i = 0; i < 2; ++i) {
    double se = std::sqrt(e1.se[i] * e1.se[i] + e2.se[i] * e2.se[i]);
    CHECK(std::abs(e1.exponents[i] - e2.exponents[i]) < 3 * std::max(se, 1e-12));
  }
}

TEST_CASE("zorich adjoint consistency across independent runs") {
  ZorichSpectrumResult r1 =
      estimate_zorich_spectrum(PermutationPair({1, 2}, {2, 1}), 20000, RandomSource(24, 0));
  ZorichSpectrumResult r2 =
      estimate_zorich_spectrum(PermutationPair({1, 2}, {2, 1}), 20000, RandomSource(24, 5));
  for (int i = 0; i < 2; ++i) {
    double se = std::sqrt(std::pow(r1.estimate.se[i], 2) + std::pow(r2.estimate.se[i], 2));
    CHECK(std::abs(r1.estimate.exponents[i] - r2.estimate.exponents[i]) < 3 * std::max(se, 1e-12));
  }
}

TEST_CASE("a weak perturbation barely moves the spectrum") {
  CMat a = diag2(2, 0.5), b(2, 2);
  b(0, 0) = 1; b(0, 1) = 1; b(1, 0) = 1; b(1, 1) = 2;
  CocycleSpec base({a, b}, MarkovMeasure::bernoulli({0.5, 0.5}));
  CocycleSpec pert = base;
  HolderPerturbation p;
  p.amplitude = 1e-4;
  p.nu = 1.0;
  p.max_depth = 25;
  p.salt = 12;
  pert.set_perturbation(p);
  SpectrumEstimate e0 = estimate_spectrum(base, 30000, RandomSource(25, 0));
  SpectrumEstimate e1 = estimate_spectrum(pert, 30000, RandomSource(25, 1));
  for (int i = 0; i < 2; ++i) {
    double se = std::sqrt(e0.se[i] * e0.se[i] + e1.se[i] * e1.se[i]);
    CHECK(std::abs(e0.exponents[i] - e1.exponents[i]) < 3 * se + 1e-3);
  }
}
