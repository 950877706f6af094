#include "cospec/lyapunov.hpp"

#include <algorithm>
#include <map>
#include <cmath>

namespace cospec {

double SpectrumEstimate::joint_se(int i, int j) const {
  return std::sqrt(se.at(i) * se.at(i) + se.at(j) * se.at(j));
}

namespace {

struct Accumulator {
  std::vector<double> cum;               // cumulative log diag per position
  std::vector<std::vector<double>> batch_sums;
  long batch_len = 0;
  long in_batch = 0;
  int batches = 0;

  void init(int ncols, long iterations, int wanted_batches) {
    cum.assign(ncols, 0.0);
    batches = wanted_batches;
    batch_len = std::max<long>(1, iterations / wanted_batches);
    batch_sums.assign(1, std::vector<double>(ncols, 0.0));
  }
  void add(const std::vector<double>& log_diag, long weight_steps) {
    for (std::size_t i = 0; i < cum.size(); ++i) {
      cum[i] += log_diag[i];
      batch_sums.back()[i] += log_diag[i];
    }
    in_batch += weight_steps;
    while (in_batch >= batch_len) {
      in_batch -= batch_len;
      batch_sums.emplace_back(cum.size(), 0.0);
    }
  }
  void finalize(SpectrumEstimate& est, long total_steps) {
    int ncols = static_cast<int>(cum.size());
    est.exponents.resize(ncols);
    est.se.assign(ncols, 0.0);
    for (int i = 0; i < ncols; ++i) est.exponents[i] = cum[i] / total_steps;
    // discard a trailing partial batch
    int full = static_cast<int>(batch_sums.size()) - 1;
    if (full >= 2) {
      est.batch_means.assign(full, std::vector<double>(ncols, 0.0));
      for (int b = 0; b < full; ++b)
        for (int i = 0; i < ncols; ++i) est.batch_means[b][i] = batch_sums[b][i] / batch_len;
      for (int i = 0; i < ncols; ++i) {
        double mean = 0;
        for (int b = 0; b < full; ++b) mean += est.batch_means[b][i];
        mean /= full;
        double var = 0;
        for (int b = 0; b < full; ++b) {
          double dev = est.batch_means[b][i] - mean;
          var += dev * dev;
        }
        var /= (full - 1);
        est.se[i] = std::sqrt(var / full);
      }
    }
    est.iterations = total_steps;
  }
};

void record_sample(QrTrace* trace, double step, const std::vector<double>& cum) {
  if (!trace) return;
  trace->steps.push_back(step);
  std::vector<double> prefix(cum.size());
  double acc = 0;
  for (std::size_t i = 0; i < cum.size(); ++i) {
    acc += cum[i];
    prefix[i] = acc;
  }
  trace->cumlog.push_back(std::move(prefix));
}

}  // namespace

SpectrumEstimate estimate_spectrum_stream(const std::function<CMat()>& next_matrix, int dim,
                                          long iterations, const SpectrumOptions& opts,
                                          QrTrace* trace) {
  if (iterations < 1) throw std::invalid_argument("estimate_spectrum: iterations must be positive");
  CMat frame = opts.start_frame ? *opts.start_frame : CMat::identity(dim);
  int ncols = frame.cols();
  Accumulator acc;
  acc.init(ncols, iterations, opts.batches);
  double log_det_sum = 0;
  long done = 0;
  long since_renorm = 0;
  record_sample(trace, 0, acc.cum);
  auto renorm = [&]() {
    CMat q;
    std::vector<double> log_diag;
    thin_qr(frame, q, log_diag);
    frame = q;
    acc.add(log_diag, since_renorm);
    since_renorm = 0;
  };
  while (done < iterations) {
    CMat step = next_matrix();
    log_det_sum += std::log(std::abs(step.det()));
    frame = step * frame;
    ++done;
    ++since_renorm;
    double top = 0;
    for (int i = 0; i < frame.rows(); ++i)
      for (int c = 0; c < ncols; ++c) top = std::max(top, std::abs(frame(i, c)));
    // renorm on the period, at the end, and whenever the frame leaves the
    // well-conditioned range; two ill-conditioned steps must never compound
    if (since_renorm >= opts.renorm_period || done == iterations || top > 1e2 || top < 1e-2) {
      renorm();
      record_sample(trace, static_cast<double>(done), acc.cum);
    }
  }
  SpectrumEstimate est;
  acc.finalize(est, iterations);
  est.renorm_period = opts.renorm_period;
  est.log_det_average = log_det_sum / iterations;
  return est;
}

SpectrumEstimate estimate_spectrum(const CocycleSpec& spec, long iterations, RandomSource rng,
                                   const SpectrumOptions& opts, QrTrace* trace) {
  MarkovSampler sampler(spec.measure(), rng);
  if (spec.locally_constant()) {
    return estimate_spectrum_stream(
        [&]() { return spec.matrices()[sampler.next()]; }, spec.dim(), iterations, opts, trace);
  }
  // Hoelder specs: evaluate on the symbolic point cut from the sampled stream.
  // A window of past and future symbols large enough for the declared depth is
  // maintained around the current time.
  int depth = spec.perturbation()->max_depth;
  std::vector<int> stream;
  long pos = 0;
  for (int i = 0; i < 2 * depth + 2; ++i) stream.push_back(sampler.next());
  auto point_at = [&](long t) {
    SymbolicPoint x;
    x.window.assign(stream.begin(), stream.end());
    x.left_cycle = {stream[0]};
    x.right_cycle = {stream.back()};
    x.origin = t + depth;  // coordinate 0 of the point sits at stream index t+depth
    return x;
  };
  return estimate_spectrum_stream(
      [&]() {
        CMat m = spec.matrix_at(point_at(pos));
        ++pos;
        stream.push_back(sampler.next());
        if (static_cast<long>(stream.size()) > 4 * depth + 4) {
          stream.erase(stream.begin(), stream.begin() + (2 * depth + 2));
          pos -= (2 * depth + 2);
        }
        return m;
      },
      spec.dim(), iterations, opts, trace);
}

bool ZorichSpectrumResult::symmetric(double nsigma) const {
  int n = static_cast<int>(estimate.exponents.size());
  for (int i = 0; i < n; ++i) {
    int j = n - 1 - i;
    double sum = estimate.exponents[i] + estimate.exponents[j];
    double se = estimate.joint_se(i, j);
    if (std::abs(sum) > nsigma * std::max(se, 1e-12)) return false;
  }
  return true;
}

ZorichSpectrumResult estimate_zorich_spectrum(const PermutationPair& start, long accelerated_steps,
                                              RandomSource rng, const ZorichOptions& opts) {
  ZorichSpectrumResult out;
  out.start = start;
  SymplecticStructure sym = omega_matrix(start);
  out.genus = sym.genus;
  int d = start.d;

  ZorichOrbit orbit(start, rng);
  bool restricted = opts.restrict_to_invariant;
  // Restricted mode runs the cocycle in orthonormal coordinates of the moving
  // invariant plane H_pi: each fiber step B maps H_pi onto H_{pi'}, and the
  // coordinate matrix Q'^* B Q keeps the evolution inside the plane exactly.
  std::map<PermutationPair, CMat> basis_cache;
  auto plane_basis = [&](const PermutationPair& pi) -> const CMat& {
    auto it = basis_cache.find(pi);
    if (it == basis_cache.end()) {
      CMat q = orthonormal_columns(to_complex(omega_matrix(pi).range_basis));
      it = basis_cache.emplace(pi, std::move(q)).first;
    }
    return it->second;
  };
  // the coordinate step matrix depends only on (pair, type)
  std::map<std::pair<PermutationPair, int>, CMat> step_cache;

  int ncols = restricted ? 2 * sym.genus : d;
  CMat frame = CMat::identity(restricted ? ncols : d);

  Accumulator acc;
  acc.init(ncols, accelerated_steps, opts.batches);
  QrTrace* trace = opts.record_trace ? &out.trace : nullptr;

  long accel_done = 0;
  long accel_since_renorm = 0;
  long rauzy_since_renorm = 0;
  bool burning = opts.burn_in > 0;
  long burn_left = opts.burn_in;
  record_sample(trace, 0, acc.cum);

  auto renorm = [&](bool accumulate) {
    CMat q;
    std::vector<double> log_diag;
    thin_qr(frame, q, log_diag);
    frame = q;
    if (accumulate) {
      acc.add(log_diag, accel_since_renorm);
    }
    accel_since_renorm = 0;
    rauzy_since_renorm = 0;
  };

  while (accel_done < accelerated_steps) {
    PermutationPair prev_pair = orbit.pair();
    int prev_type = orbit.current_type();
    auto [row_to, row_from] = orbit.rauzy_update();
    double row_max = 0;
    if (restricted) {
      auto key = std::make_pair(prev_pair, prev_type);
      auto it = step_cache.find(key);
      if (it == step_cache.end()) {
        // carrier <- B * carrier (one row update), then pull back to coordinates
        CMat moved = plane_basis(prev_pair);
        for (int c = 0; c < moved.cols(); ++c) moved(row_to, c) += moved(row_from, c);
        CMat step = plane_basis(orbit.pair()).conjugate_transpose() * moved;  // 2g x 2g
        it = step_cache.emplace(key, std::move(step)).first;
      }
      frame = it->second * frame;
      for (int i = 0; i < ncols; ++i)
        for (int c = 0; c < ncols; ++c) row_max = std::max(row_max, std::abs(frame(i, c)));
    } else {
      for (int c = 0; c < ncols; ++c) {
        frame(row_to, c) += frame(row_from, c);
        row_max = std::max(row_max, std::abs(frame(row_to, c)));
      }
    }
    ++rauzy_since_renorm;
    bool boundary_done = false;
    if (orbit.type_switched()) {
      if (burning) {
        if (--burn_left == 0) {
          burning = false;
          renorm(false);
          boundary_done = true;
        }
      } else {
        ++accel_done;
        ++accel_since_renorm;
        if (accel_since_renorm >= opts.renorm_period || accel_done == accelerated_steps) {
          renorm(true);
          record_sample(trace, static_cast<double>(accel_done), acc.cum);
          boundary_done = true;
        }
      }
    }
    // runs within one accelerated step can be long, and the frame's condition
    // number grows like the square of its largest entry; renorm early enough
    // that the smallest QR diagonal stays clear of roundoff
    if (!boundary_done && (row_max > 1e4 || rauzy_since_renorm >= 64)) renorm(!burning);
    if (orbit.rauzy_steps() > opts.step_cap_per_accel * std::max<long>(1, accel_done + opts.burn_in))
      throw TieError("zorich spectrum: acceleration cap exceeded");
  }
  acc.finalize(out.estimate, accelerated_steps);
  out.estimate.renorm_period = opts.renorm_period;
  out.estimate.log_det_average = 0;  // elementary fiber steps have determinant 1
  return out;
}

void fit_growth_rate(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                     double& se) {
  if (x.size() != y.size() || x.size() < 4)
    throw std::invalid_argument("fit_growth_rate: need at least 4 samples");
  std::size_t lo = x.size() / 2;  // fit on the second half
  std::size_t n = x.size() - lo;
  double mx = 0, my = 0;
  for (std::size_t i = lo; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = lo; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  slope = sxy / sxx;
  // error from per-segment increment slopes (robust to serial correlation)
  int segments = std::min<std::size_t>(10, n / 2);
  if (segments >= 2) {
    std::vector<double> seg_slopes;
    std::size_t seg_len = n / segments;
    for (int s = 0; s < segments; ++s) {
      std::size_t a = lo + s * seg_len;
      std::size_t b = (s + 1 == segments) ? x.size() - 1 : a + seg_len;
      if (b <= a || x[b] == x[a]) continue;
      seg_slopes.push_back((y[b] - y[a]) / (x[b] - x[a]));
    }
    double mean = 0;
    for (double v : seg_slopes) mean += v;
    mean /= seg_slopes.size();
    double var = 0;
    for (double v : seg_slopes) var += (v - mean) * (v - mean);
    var /= std::max<std::size_t>(1, seg_slopes.size() - 1);
    se = std::sqrt(var / seg_slopes.size());
  } else {
    se = 0;
  }
}

GapDiagnostic gap_diagnostic(const QrTrace& trace, const SpectrumEstimate& spectrum, int ell) {
  GapDiagnostic out;
  out.ell = ell;
  int n = static_cast<int>(spectrum.exponents.size());
  if (ell < 1 || ell >= n) throw std::invalid_argument("gap_diagnostic: ell out of range");
  out.d_u = ell;
  // next block: exponents indistinguishable from exponent ell (0-based index ell)
  out.d_s = 1;
  for (int j = ell + 1; j < n; ++j) {
    double diff = spectrum.exponents[ell] - spectrum.exponents[j];
    if (diff <= 2 * spectrum.joint_se(ell, j)) {
      ++out.d_s;
    } else {
      break;
    }
  }
  int du = out.d_u, ds = out.d_s;
  std::vector<double> log_delta(trace.steps.size());
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const auto& prefix = trace.cumlog[t];
    double det_u = prefix[du - 1];
    double det_w = prefix[du + ds - 1];
    log_delta[t] = det_u / du - det_w / (du + ds);
  }
  fit_growth_rate(trace.steps, log_delta, out.slope, out.slope_se);
  double lam_u = 0;
  for (int i = 0; i < du; ++i) lam_u += spectrum.exponents[i];
  lam_u /= du;
  double lam_s = 0;
  for (int i = du; i < du + ds; ++i) lam_s += spectrum.exponents[i];
  lam_s /= ds;
  double c = static_cast<double>(ds) / (du + ds);
  out.predicted = c * (lam_u - lam_s);
  double var = 0;
  for (int i = 0; i < du; ++i) var += std::pow(c * spectrum.se[i] / du, 2);
  for (int i = du; i < du + ds; ++i) var += std::pow(c * spectrum.se[i] / ds, 2);
  out.predicted_se = std::sqrt(var);
  return out;
}

bool GapDiagnostic::agrees(double nsigma, double abs_tol) const {
  double tol = nsigma * std::sqrt(slope_se * slope_se + predicted_se * predicted_se);
  return std::abs(slope - predicted) <= std::max(tol, abs_tol);
}

InducingReport verify_inducing_rescale(const CocycleSpec& base_spec, const CocycleSpec& induced_spec,
                                       const InducedSystem& ind, long iterations, RandomSource rng,
                                       const SpectrumOptions& opts) {
  InducingReport out;
  out.base_cylinder_mass = ind.measure_of_base;
  out.kac_prediction = 1.0 / ind.measure_of_base;
  out.mean_return_time = ind.mean_return_time;
  out.base = estimate_spectrum(base_spec, iterations, rng.split(1), opts);
  out.induced = estimate_spectrum(induced_spec, iterations, rng.split(2), opts);
  // inconclusive when the scaled uncertainty dwarfs the base spectrum scale
  double scale = 0;
  for (double e : out.base.exponents) scale = std::max(scale, std::abs(e));
  double worst_se = 0;
  for (std::size_t i = 0; i < out.induced.se.size(); ++i)
    worst_se = std::max(worst_se, out.induced.se[i]);
  out.inconclusive = scale > 0 && worst_se > scale;
  return out;
}

bool InducingReport::exponents_match(double nsigma) const {
  double factor = 1.0 / base_cylinder_mass;
  for (std::size_t i = 0; i < base.exponents.size(); ++i) {
    double lhs = induced.exponents[i];
    double rhs = base.exponents[i] * factor;
    double se = std::sqrt(std::pow(induced.se[i], 2) + std::pow(factor * base.se[i], 2));
    if (std::abs(lhs - rhs) > nsigma * std::max(se, 1e-12)) return false;
  }
  return true;
}

AdjointReport adjoint_spectrum_check(const CocycleSpec& spec, long iterations, RandomSource rng,
                                     const SpectrumOptions& opts) {
  AdjointReport out;
  out.original = estimate_spectrum(spec, iterations, rng.split(1), opts);
  out.adjoint = estimate_spectrum(adjoint_cocycle(spec), iterations, rng.split(2), opts);
  return out;
}

bool AdjointReport::match(double nsigma, double abs_tol) const {
  for (std::size_t i = 0; i < original.exponents.size(); ++i) {
    double se = std::sqrt(std::pow(original.se[i], 2) + std::pow(adjoint.se[i], 2));
    double tol = std::max(nsigma * se, abs_tol);
    if (std::abs(original.exponents[i] - adjoint.exponents[i]) > tol) return false;
  }
  return true;
}

}  // namespace cospec
