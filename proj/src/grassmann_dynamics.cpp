#include "cospec/grassmann_dynamics.hpp"

#include <cmath>
#include <memory>

#include "cospec/lyapunov.hpp"

namespace cospec {

EmpiricalFiberMeasure EmpiricalFiberMeasure::invariant_sample(int d, int ell, int atom_count,
                                                              RandomSource& rng) {
  EmpiricalFiberMeasure out(d, ell);
  for (int k = 0; k < atom_count; ++k) {
    CMat frame(d, ell);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < ell; ++j) frame(i, j) = rng.gaussian_complex();
    out.add_atom(plucker_embed(frame).plucker(), 1.0 / atom_count);
  }
  return out;
}

void EmpiricalFiberMeasure::add_atom(const MultiVector& direction, double weight) {
  if (direction.d != d_ || direction.ell != ell_)
    throw std::invalid_argument("EmpiricalFiberMeasure: degree mismatch");
  atoms_.push_back({normalized(direction), weight});
}

double EmpiricalFiberMeasure::total_weight() const {
  double t = 0;
  for (const auto& a : atoms_) t += a.weight;
  return t;
}

EmpiricalFiberMeasure pushforward(const EmpiricalFiberMeasure& measure, const CMat& L) {
  CMat big = exterior_power(L, measure.ell());
  EmpiricalFiberMeasure out(measure.d(), measure.ell());
  for (const auto& atom : measure.atoms()) {
    MultiVector image = apply_carrier(big, atom.direction);
    if (mv_norm(image) < 1e-300)
      throw std::invalid_argument("pushforward: atom numerically in the kernel");
    out.add_atom(image, atom.weight);
  }
  return out;
}

DispersionStat dispersion(const EmpiricalFiberMeasure& measure) {
  int n = static_cast<int>(measure.atoms().size());
  if (n == 0) throw std::invalid_argument("dispersion: empty measure");
  int big_dim = measure.atoms()[0].direction.dim();
  // extrinsic mean: top eigenvector of the weighted projector average
  CMat mean_proj(big_dim, big_dim);
  for (const auto& atom : measure.atoms())
    for (int i = 0; i < big_dim; ++i)
      for (int j = 0; j < big_dim; ++j)
        mean_proj(i, j) += atom.direction.coeff[i] * std::conj(atom.direction.coeff[j]) *
                           cdouble(atom.weight);
  EigenData ed = eigen_decomposition(mean_proj);
  MultiVector mean_raw(measure.d(), measure.ell());
  for (int i = 0; i < big_dim; ++i) mean_raw.coeff[i] = ed.eigenvectors(i, 0);

  DispersionStat out;
  double total = measure.total_weight();
  for (const auto& atom : measure.atoms()) {
    double c = std::abs(inner(atom.direction, mean_raw));
    c = std::min(1.0, std::max(-1.0, c));
    double dist = std::acos(c);
    out.dispersion += atom.weight / total * dist * dist;
  }
  // decomposable snap of the raw mean, for reporting only
  CMat rho = reduced_density(mean_raw);
  EigenData red = eigen_decomposition(rho);
  CMat frame(measure.d(), measure.ell());
  for (int j = 0; j < measure.ell(); ++j)
    for (int i = 0; i < measure.d(); ++i) frame(i, j) = red.eigenvectors(i, j);
  out.mean_point = plucker_embed(orthonormal_columns(frame));
  return out;
}

BackwardStream spec_backward_stream(const CocycleSpec& spec, RandomSource rng) {
  if (!spec.locally_constant())
    throw CocycleError("spec_backward_stream: locally constant specs only");
  auto sampler = std::make_shared<MarkovSampler>(spec.measure().reversed(), rng);
  auto matrices = spec.matrices();
  return [sampler, matrices]() { return matrices[sampler->next()]; };
}

BackwardStream zorich_backward_stream(const PermutationPair& start, RandomSource rng, long length,
                                      long burn_in, long step_cap) {
  RandomSource local = rng;
  ZorichOrbit orbit(start, local);
  int d = start.d;
  auto one_accel_step = [&]() {
    CMat composite = CMat::identity(d);
    long guard = 0;
    do {
      auto [row_to, row_from] = orbit.rauzy_update();
      for (int c = 0; c < d; ++c) composite(row_to, c) += composite(row_from, c);
      if (++guard > step_cap) throw TieError("zorich stream: acceleration cap exceeded");
      double top = 0;
      for (int i = 0; i < d; ++i)
        for (int c = 0; c < d; ++c) top = std::max(top, std::abs(composite(i, c)));
      if (top > 1e100) composite = composite * cdouble(1e-100);
    } while (!orbit.type_switched());
    double norm = operator_norm(composite);
    return composite * cdouble(1.0 / norm);
  };
  for (long t = 0; t < burn_in; ++t) (void)one_accel_step();
  // the forward trajectory read newest-first is the past of its endpoint
  auto steps = std::make_shared<std::vector<CMat>>();
  steps->reserve(length);
  for (long t = 0; t < length; ++t) steps->push_back(one_accel_step());
  auto cursor = std::make_shared<long>(static_cast<long>(steps->size()));
  return [steps, cursor]() {
    if (*cursor <= 0) throw std::out_of_range("zorich backward stream exhausted");
    return (*steps)[--(*cursor)];
  };
}

DiracTrace dirac_convergence_experiment(const BackwardStream& stream, int d, int ell,
                                        int orbit_length, int atom_count, RandomSource& rng,
                                        double threshold) {
  EmpiricalFiberMeasure initial = EmpiricalFiberMeasure::invariant_sample(d, ell, atom_count, rng);
  int big_dim = static_cast<int>(binomial(d, ell));
  CMat carrier = CMat::identity(big_dim);
  DiracTrace out;
  DispersionStat last;
  for (int n = 0; n < orbit_length; ++n) {
    CMat step = stream();
    carrier = carrier * exterior_power(step, ell);
    double norm = operator_norm(carrier);
    carrier = carrier * cdouble(1.0 / norm);
    EmpiricalFiberMeasure current(d, ell);
    for (const auto& atom : initial.atoms()) {
      MultiVector image = apply_carrier(carrier, atom.direction);
      current.add_atom(image, atom.weight);
    }
    last = dispersion(current);
    out.dispersions.push_back(last.dispersion);
  }
  out.final_dispersion = last.dispersion;
  out.final_location = last.mean_point;
  out.converged = out.final_dispersion < threshold;
  return out;
}

EccentricityTrace eccentricity_divergence(const BackwardStream& stream, int d, int ell,
                                          int orbit_length) {
  EccentricityTrace out;
  CMat product = CMat::identity(d);
  for (int n = 1; n <= orbit_length; ++n) {
    product = product * stream();
    double norm = operator_norm(product);
    product = product * cdouble(1.0 / norm);
    Eccentricity ecc = eccentricity(product, ell);
    out.steps.push_back(n);
    out.log_eccentricity.push_back(std::log(ecc.value));
    // the direct ratio saturates double precision; stop while it is reliable
    if (ecc.value > 1e13) break;
  }
  fit_growth_rate(out.steps, out.log_eccentricity, out.slope, out.slope_se);
  return out;
}

TrackingTrace most_expanded_tracking(const BackwardStream& stream, int d, int ell,
                                     int orbit_length) {
  TrackingTrace out;
  CMat product = CMat::identity(d);
  for (int n = 1; n <= orbit_length; ++n) {
    product = product * stream();
    double norm = operator_norm(product);
    product = product * cdouble(1.0 / norm);
    SingularData sd = singular_decomposition(product);
    bool unique = sd.singular_values[ell - 1] / sd.singular_values[ell] > 1.0 + 1e-12;
    // image of the most expanded subspace: the top-ell left singular frame
    CMat top(d, ell);
    for (int j = 0; j < ell; ++j)
      for (int i = 0; i < d; ++i) top(i, j) = sd.left_frame(i, j);
    GrassmannPoint p = plucker_embed(top);
    if (!out.points.empty()) out.fs_increments.push_back(fs_distance(out.points.back(), p));
    out.points.push_back(p);
    out.non_unique.push_back(!unique);
  }
  return out;
}

}  // namespace cospec
