#include "cospec/simplicity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cospec {

std::vector<Rational> characteristic_polynomial(const QMat& a) {
  if (!a.square()) throw std::invalid_argument("characteristic_polynomial: non-square");
  int d = a.rows();
  // Faddeev-LeVerrier: M_1 = I, c_{d-1} = -tr(A M_1),
  // M_{k+1} = A M_k + c_{d-k} I, c_{d-k-1} = -tr(A M_{k+1}) / (k+1)
  std::vector<Rational> c(d + 1, Rational(0));
  c[d] = 1;
  QMat m = QMat::identity(d);
  for (int k = 1; k <= d; ++k) {
    QMat am = a * m;
    Rational tr(0);
    for (int i = 0; i < d; ++i) tr += am(i, i);
    c[d - k] = -tr / Rational(k);
    if (k < d) {
      m = am;
      for (int i = 0; i < d; ++i) m(i, i) += c[d - k];
    }
  }
  return c;
}

namespace {

Rational eval_poly(const std::vector<Rational>& c, const Rational& x) {
  Rational acc(0);
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) acc = acc * x + c[k];
  return acc;
}

}  // namespace

std::optional<ExactEigensystem> exact_rational_eigensystem(const QMat& a) {
  int d = a.rows();
  std::vector<Rational> chi = characteristic_polynomial(a);
  EigenData fd = eigen_decomposition(to_complex(a));
  ExactEigensystem out;
  for (int k = 0; k < d; ++k) {
    cdouble lam = fd.eigenvalues[k];
    if (std::abs(lam.imag()) > 1e-9 * (1 + std::abs(lam))) return std::nullopt;
    Rational candidate = rational_reconstruct(lam.real(), 100000000UL);
    if (eval_poly(chi, candidate) != 0) return std::nullopt;
    out.eigenvalues.push_back(candidate);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (out.eigenvalues[i] == out.eigenvalues[j]) return std::nullopt;  // need simple roots
  out.eigenvectors = QMat(d, d);
  for (int k = 0; k < d; ++k) {
    QMat shifted = a;
    for (int i = 0; i < d; ++i) shifted(i, i) -= out.eigenvalues[k];
    auto kernel = exact_nullspace(shifted);
    if (kernel.size() != 1) return std::nullopt;
    for (int i = 0; i < d; ++i) out.eigenvectors(i, k) = kernel[0][i];
  }
  return out;
}

PeriodicData make_periodic_data(const CocycleSpec& spec, const std::vector<int>& word) {
  PeriodicData pd;
  pd.word = word;
  pd.period = static_cast<int>(word.size());
  pd.point = SymbolicPoint::periodic(word);
  pd.return_matrix = spec.word_product(word);
  pd.eigen = eigen_decomposition(pd.return_matrix);
  if (spec.exact() && spec.locally_constant()) {
    pd.return_matrix_exact = spec.word_product_exact(word);
    pd.has_exact = true;
    pd.exact_eigen = exact_rational_eigensystem(pd.return_matrix_exact);
  }
  return pd;
}

HomoclinicData make_homoclinic_data(const CocycleSpec& spec, const PeriodicData& pd,
                                    const std::vector<int>& insert, long l, double holonomy_tol) {
  if (l % pd.period != 0)
    throw std::invalid_argument("homoclinic data: l must be a multiple of the period");
  HomoclinicData hd;
  hd.point = SymbolicPoint::homoclinic(pd.word, insert, l);
  hd.l = l;
  hd.window.reserve(l);
  for (long n = 0; n < l; ++n) hd.window.push_back(hd.point.symbol(n));
  hd.along_matrix = spec.word_product(hd.window);
  if (spec.exact() && spec.locally_constant()) {
    hd.along_matrix_exact = spec.word_product_exact(hd.window);
    hd.has_exact = true;
  }
  int d = spec.dim();
  hd.stable_h.matrix = CMat::identity(d);
  hd.unstable_h.matrix = CMat::identity(d);
  if (!spec.locally_constant()) {
    hd.stable_h = stable_holonomy(spec, hd.point.shifted(l), pd.point, holonomy_tol);
    hd.unstable_h = unstable_holonomy(spec, pd.point, hd.point, holonomy_tol);
  }
  return hd;
}

TransitionMap transition_map(const CocycleSpec& spec, const PeriodicData& pd,
                             const HomoclinicData& hd) {
  (void)spec;  // the holonomy factors of hd already carry the spec dependence
  TransitionMap tm;
  tm.basis = pd.eigen;
  CMat psi = hd.stable_h.matrix * hd.along_matrix * hd.unstable_h.matrix;
  tm.matrix = pd.eigen.eigenvectors.inverse() * psi * pd.eigen.eigenvectors;
  if (pd.has_exact && hd.has_exact && pd.exact_eigen) {
    const QMat& p = pd.exact_eigen->eigenvectors;
    tm.exact_matrix = p.inverse() * hd.along_matrix_exact * p;
  }
  return tm;
}

PinchingResult check_pinching(const PeriodicData& pd, double rel_gap_tol) {
  PinchingResult out;
  int d = pd.return_matrix.rows();
  if (pd.exact_eigen) {
    out.exact = true;
    std::vector<Rational> mods;
    for (const Rational& v : pd.exact_eigen->eigenvalues) mods.push_back(rational_abs(v));
    std::sort(mods.rbegin(), mods.rend());
    out.ok = true;
    out.gap = 1e300;
    for (int i = 0; i + 1 < d; ++i) {
      if (mods[i] == mods[i + 1]) {
        out.ok = false;
        out.gap = 0;
        return out;
      }
      double ratio = to_double(mods[i]) / to_double(mods[i + 1]);
      out.gap = std::min(out.gap, ratio - 1.0);
    }
    return out;
  }
  out.ok = true;
  out.gap = 1e300;
  for (int i = 0; i + 1 < d; ++i) {
    double hi = std::abs(pd.eigen.eigenvalues[i]);
    double lo = std::abs(pd.eigen.eigenvalues[i + 1]);
    double ratio = hi / lo;
    out.gap = std::min(out.gap, ratio - 1.0);
    if (ratio < 1.0 + rel_gap_tol) out.ok = false;
  }
  return out;
}

namespace {

template <typename T>
double magnitude(const T& v);
template <>
double magnitude<Rational>(const Rational& v) {
  return std::abs(to_double(v));
}
template <>
double magnitude<cdouble>(const cdouble& v) {
  return std::abs(v);
}

// Scale-aware nonvanishing margin of the (S, T) minor: |minor| divided by its
// Hadamard bound (product of the norms of the participating rows).
double hadamard_scale(const CMat& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  double scale = 1;
  for (int i : rows) {
    double s = 0;
    for (int j : cols) s += std::norm(m(i, j));
    scale *= std::sqrt(std::max(s, 1e-300));
  }
  return scale;
}

}  // namespace

TwistingResult check_twisting(const TransitionMap& tm, bool exact, double zero_tol) {
  TwistingResult out;
  if (exact && !tm.exact_matrix)
    throw std::invalid_argument("check_twisting: exact mode requires an exact transition matrix");
  out.exact = exact;
  out.ok = true;
  out.smallest_minor = 1e300;
  int d = exact ? tm.exact_matrix->rows() : tm.matrix.rows();
  for (int ell = 1; ell <= d && out.ok; ++ell) {
    const SubsetBasis& basis = SubsetBasis::get(d, ell);
    if (exact) {
      QMat power = exterior_power(*tm.exact_matrix, ell);
      for (int i = 0; i < basis.size(); ++i)
        for (int j = 0; j < basis.size(); ++j) {
          if (power(i, j) == 0) {
            out.ok = false;
            out.smallest_minor = 0;
            MinorWitness w;
            for (int r : basis.subset(i)) w.rows.push_back(r + 1);
            for (int c : basis.subset(j)) w.cols.push_back(c + 1);
            out.witness = w;
            return out;
          }
          out.smallest_minor = std::min(out.smallest_minor, magnitude(power(i, j)));
        }
    } else {
      CMat power = exterior_power(tm.matrix, ell);
      for (int i = 0; i < basis.size(); ++i)
        for (int j = 0; j < basis.size(); ++j) {
          double margin =
              std::abs(power(i, j)) / hadamard_scale(tm.matrix, basis.subset(i), basis.subset(j));
          if (margin <= zero_tol) {
            out.ok = false;
            out.smallest_minor = margin;
            MinorWitness w;
            for (int r : basis.subset(i)) w.rows.push_back(r + 1);
            for (int c : basis.subset(j)) w.cols.push_back(c + 1);
            out.witness = w;
            return out;
          }
          out.smallest_minor = std::min(out.smallest_minor, margin);
        }
    }
  }
  return out;
}

SimplicityVerdict check_simple(const CocycleSpec& spec, const PeriodicData& pd,
                               const HomoclinicData& hd) {
  SimplicityVerdict out;
  out.pinching = check_pinching(pd);
  TransitionMap tm = transition_map(spec, pd, hd);
  bool exact = pd.has_exact && hd.has_exact && tm.exact_matrix.has_value();
  out.twisting = check_twisting(tm, exact);
  out.simple = out.pinching.ok && out.twisting.ok;
  return out;
}

SimplicityVerdict check_simple(const CocycleSpec& spec, const std::vector<int>& periodic_word,
                               const std::vector<int>& homoclinic_insert, long l) {
  PeriodicData pd = make_periodic_data(spec, periodic_word);
  HomoclinicData hd = make_homoclinic_data(spec, pd, homoclinic_insert, l);
  return check_simple(spec, pd, hd);
}

namespace {

double eccentricity_min_ratio(const CMat& b) {
  SingularData sd = singular_decomposition(b);
  double best = 1e300;
  int d = b.rows();
  for (int i = 0; i + 1 < d; ++i)
    best = std::min(best, sd.singular_values[i] / std::max(sd.singular_values[i + 1], 1e-300));
  return best;
}

CMat word_value(const std::vector<CMat>& gens, const std::vector<int>& word, int d) {
  CMat prod = CMat::identity(d);
  for (int g : word) prod = gens[g] * prod;
  return prod;
}

bool clears_all(const CMat& b, const MonoidTargets& targets, double tol = 1e-9) {
  CMat image = b * targets.subject_basis;
  MultiVector img_w = wedge_columns(image);
  double img_norm = mv_norm(img_w);
  if (img_norm <= tol) return false;  // image frame degenerate
  for (const CMat& g : targets.obstacle_bases) {
    MultiVector ob_w = wedge_columns(g);
    MultiVector full = wedge(img_w, ob_w);
    // trivial intersection iff the full wedge does not vanish
    if (std::abs(full.coeff[0]) <= tol * img_norm * mv_norm(ob_w)) return false;
  }
  return true;
}

}  // namespace

MonoidReport monoid_pinching_twisting(const std::vector<CMat>& generators, int trials,
                                      RandomSource& rng,
                                      const std::optional<MonoidTargets>& targets_in,
                                      double ecc_threshold, int max_word_len) {
  if (generators.empty()) throw std::invalid_argument("monoid: no generators");
  int d = generators[0].rows();
  int ngen = static_cast<int>(generators.size());
  MonoidReport out;

  MonoidTargets targets;
  if (targets_in) {
    targets = *targets_in;
  } else {
    int ell = std::max(1, d / 2);
    CMat f(d, ell), g(d, d - ell);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < ell; ++j) f(i, j) = rng.gaussian_complex();
      for (int j = 0; j < d - ell; ++j) g(i, j) = rng.gaussian_complex();
    }
    targets.subject_basis = f;
    targets.obstacle_bases = {g};
  }

  // exhaustive pass over short words, in order of length, so the shortest
  // witnesses are reported
  int exhaustive_len = 1;
  long count = ngen;
  while (exhaustive_len < max_word_len && count * ngen <= 4096) {
    count *= ngen;
    ++exhaustive_len;
  }
  for (int len = 1; len <= exhaustive_len; ++len) {
    std::vector<int> word(len, 0);
    for (;;) {
      ++out.words_examined;
      CMat b = word_value(generators, word, d);
      double ecc = eccentricity_min_ratio(b);
      if (ecc > out.best_eccentricity) {
        out.best_eccentricity = ecc;
        out.best_ecc_word = word;
      }
      if (!out.twisting_evidence && clears_all(b, targets)) {
        out.twisting_evidence = true;
        out.twisting_word = word;
      }
      int pos = len - 1;
      while (pos >= 0 && word[pos] == ngen - 1) word[pos--] = 0;
      if (pos < 0) break;
      ++word[pos];
    }
  }

  // random longer words within the trial budget
  for (int t = 0; t < trials; ++t) {
    int len = 1 + rng.uniform_int(max_word_len);
    std::vector<int> w(len);
    for (int& g : w) g = rng.uniform_int(ngen);
    ++out.words_examined;
    CMat b = word_value(generators, w, d);
    double ecc = eccentricity_min_ratio(b);
    if (ecc > out.best_eccentricity) {
      out.best_eccentricity = ecc;
      out.best_ecc_word = w;
    }
    if (!out.twisting_evidence && clears_all(b, targets)) {
      out.twisting_evidence = true;
      out.twisting_word = w;
    }
  }

  // amplify the best word by powers: eccentricity of W^k grows when W pinches
  if (!out.best_ecc_word.empty()) {
    CMat w = word_value(generators, out.best_ecc_word, d);
    CMat p = w;
    std::vector<int> amplified = out.best_ecc_word;
    for (int k = 1; k < 40 && out.best_eccentricity < ecc_threshold; ++k) {
      double norm = operator_norm(p);
      if (norm > 1e120) p = p * cdouble(1.0 / norm);
      p = p * w;
      amplified.insert(amplified.end(), out.best_ecc_word.begin(), out.best_ecc_word.end());
      double ecc = eccentricity_min_ratio(p);
      if (ecc > out.best_eccentricity) {
        out.best_ecc_word = amplified;
        out.best_eccentricity = ecc;
      }
    }
  }
  out.pinching_evidence = out.best_eccentricity >= ecc_threshold;

  // structured family W^n V W^n around the best pinching word
  if (!out.twisting_evidence && !out.best_ecc_word.empty()) {
    CMat w = word_value(generators, out.best_ecc_word, d);
    for (int n = 1; n <= 6 && !out.twisting_evidence; ++n) {
      CMat wn = CMat::identity(d);
      for (int k = 0; k < n; ++k) wn = w * wn;
      double norm = operator_norm(wn);
      wn = wn * cdouble(1.0 / norm);
      std::vector<int> mid(1, 0);
      for (int g = 0; g < ngen && !out.twisting_evidence; ++g) {
        CMat b = wn * generators[g] * wn;
        if (clears_all(b, targets)) {
          out.twisting_evidence = true;
          out.twisting_word.clear();
          for (int k = 0; k < n; ++k)
            out.twisting_word.insert(out.twisting_word.end(), out.best_ecc_word.begin(),
                                     out.best_ecc_word.end());
          out.twisting_word.push_back(g);
          for (int k = 0; k < n; ++k)
            out.twisting_word.insert(out.twisting_word.end(), out.best_ecc_word.begin(),
                                     out.best_ecc_word.end());
        }
      }
    }
  }
  return out;
}

}  // namespace cospec
