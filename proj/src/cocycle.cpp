#include "cospec/cocycle.hpp"

#include <cmath>
#include <numeric>

namespace cospec {

SymbolicPoint SymbolicPoint::periodic(const std::vector<int>& word) {
  SymbolicPoint p;
  p.left_cycle = word;
  p.right_cycle = word;
  return p;
}

SymbolicPoint SymbolicPoint::homoclinic(const std::vector<int>& period_word,
                                        const std::vector<int>& insert, long l) {
  long q = static_cast<long>(period_word.size());
  if (l % q != 0) throw std::invalid_argument("homoclinic: l must be a multiple of the period");
  if (static_cast<long>(insert.size()) > l)
    throw std::invalid_argument("homoclinic: insert longer than l");
  SymbolicPoint p;
  p.left_cycle = period_word;
  p.right_cycle = period_word;
  p.window = insert;
  // pad to length l so that coordinates >= l match the periodic point in phase
  while (static_cast<long>(p.window.size()) < l)
    p.window.push_back(period_word[p.window.size() % q]);
  return p;
}

int SymbolicPoint::symbol(long n) const {
  long m = n + origin;
  if (m < 0) {
    long len = static_cast<long>(left_cycle.size());
    return left_cycle[static_cast<std::size_t>(((m % len) + len) % len)];
  }
  if (m < static_cast<long>(window.size())) return window[static_cast<std::size_t>(m)];
  long len = static_cast<long>(right_cycle.size());
  return right_cycle[static_cast<std::size_t>((m - window.size()) % len)];
}

SymbolicPoint SymbolicPoint::shifted(long k) const {
  SymbolicPoint p = *this;
  p.origin += k;
  return p;
}

namespace {

long compare_depth(const SymbolicPoint& a, const SymbolicPoint& b) {
  long wa = static_cast<long>(a.window.size()) + std::abs(a.origin);
  long wb = static_cast<long>(b.window.size()) + std::abs(b.origin);
  long cyc = static_cast<long>(std::lcm(std::max<std::size_t>(1, a.right_cycle.size()),
                                        std::max<std::size_t>(1, b.right_cycle.size())));
  long cyc2 = static_cast<long>(std::lcm(std::max<std::size_t>(1, a.left_cycle.size()),
                                         std::max<std::size_t>(1, b.left_cycle.size())));
  return wa + wb + 2 * std::max(cyc, cyc2) + 2;
}

}  // namespace

bool SymbolicPoint::in_same_local_stable_set(const SymbolicPoint& o) const {
  long depth = compare_depth(*this, o);
  for (long n = 0; n < depth; ++n)
    if (symbol(n) != o.symbol(n)) return false;
  return true;
}

bool SymbolicPoint::in_same_local_unstable_set(const SymbolicPoint& o) const {
  long depth = compare_depth(*this, o);
  for (long n = -depth; n < 0; ++n)
    if (symbol(n) != o.symbol(n)) return false;
  return true;
}

CocycleSpec::CocycleSpec(std::vector<CMat> matrices, MarkovMeasure measure)
    : matrices_(std::move(matrices)), measure_(std::move(measure)) {
  if (static_cast<int>(matrices_.size()) != measure_.alphabet())
    throw CocycleError("CocycleSpec: one matrix per symbol required");
  for (const CMat& m : matrices_)
    if (!m.square() || m.rows() != matrices_[0].rows())
      throw CocycleError("CocycleSpec: matrices must be square of one size");
}

CocycleSpec::CocycleSpec(std::vector<QMat> rational_matrices, MarkovMeasure measure)
    : rational_(std::move(rational_matrices)), measure_(std::move(measure)) {
  for (const QMat& m : rational_)
    if (!m.square() || m.rows() != rational_[0].rows())
      throw CocycleError("CocycleSpec: matrices must be square of one size");
  for (const QMat& m : rational_) matrices_.push_back(to_complex(m));
  if (static_cast<int>(matrices_.size()) != measure_.alphabet())
    throw CocycleError("CocycleSpec: one matrix per symbol required");
}

namespace {

// Deterministic bounded matrix attached to a symbol window; entries in
// [-1, 1] scaled by 1/d so the operator norm stays at most 1.
CMat window_matrix(const std::vector<int>& window, int d, std::uint64_t salt) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ salt;
  for (int s : window) {
    h ^= static_cast<std::uint64_t>(s) + 0x9E3779B97F4A7C15ULL;
    h *= 0x100000001b3ULL;
  }
  RandomSource rng(h, 1);
  CMat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.uniform(-1.0, 1.0) / d;
  return m;
}

}  // namespace

CMat CocycleSpec::matrix_at(const SymbolicPoint& x) const {
  CMat base = matrices_[x.symbol(0)];
  if (!perturbation_) return base;
  const HolderPerturbation& p = *perturbation_;
  int d = dim();
  CMat sum(d, d);
  double theta_nu = std::pow(metric_theta_, p.nu);
  double scale = p.amplitude * theta_nu;
  for (int k = 1; k <= p.max_depth && scale > 1e-17; ++k) {
    std::vector<int> win;
    win.reserve(2 * k + 1);
    for (long n = -k; n <= k; ++n) win.push_back(x.symbol(n));
    sum = sum + window_matrix(win, d, p.salt + static_cast<std::uint64_t>(k)) * cdouble(scale);
    scale *= theta_nu;
  }
  return base * (CMat::identity(d) + sum);
}

CMat CocycleSpec::forward_product(const SymbolicPoint& x, long n) const {
  CMat prod = CMat::identity(dim());
  for (long j = 0; j < n; ++j) prod = matrix_at(x.shifted(j)) * prod;
  return prod;
}

CMat CocycleSpec::word_product(std::span<const int> symbols) const {
  CMat prod = CMat::identity(dim());
  for (int s : symbols) prod = matrices_[s] * prod;
  return prod;
}

QMat CocycleSpec::word_product_exact(std::span<const int> symbols) const {
  if (!exact()) throw CocycleError("word_product_exact: spec has no rational matrices");
  QMat prod = QMat::identity(dim());
  for (int s : symbols) prod = rational_[s] * prod;
  return prod;
}

CocycleSpec induce_cocycle(const CocycleSpec& spec, const InducedSystem& ind) {
  if (!spec.locally_constant())
    throw CocycleError("induce_cocycle: depth incompatibility, spec is not locally constant");
  std::vector<double> probs;
  probs.reserve(ind.return_words.size());
  for (const auto& rw : ind.return_words) probs.push_back(rw.mass / ind.captured_mass);
  MarkovMeasure induced_measure = MarkovMeasure::bernoulli(probs);
  if (spec.exact()) {
    std::vector<QMat> mats;
    for (const auto& rw : ind.return_words) {
      std::span<const int> pre(rw.word.symbols.data(), static_cast<std::size_t>(rw.r));
      mats.push_back(spec.word_product_exact(pre));
    }
    return CocycleSpec(std::move(mats), std::move(induced_measure));
  }
  std::vector<CMat> mats;
  for (const auto& rw : ind.return_words) {
    std::span<const int> pre(rw.word.symbols.data(), static_cast<std::size_t>(rw.r));
    mats.push_back(spec.word_product(pre));
  }
  return CocycleSpec(std::move(mats), std::move(induced_measure));
}

CocycleSpec adjoint_cocycle(const CocycleSpec& spec) {
  if (!spec.locally_constant())
    throw CocycleError("adjoint_cocycle: locally constant specs only");
  if (spec.exact()) {
    std::vector<QMat> mats;
    for (const QMat& m : spec.rational_matrices()) mats.push_back(m.transpose());
    return CocycleSpec(std::move(mats), spec.measure().reversed());
  }
  std::vector<CMat> mats;
  for (const CMat& m : spec.matrices()) mats.push_back(m.conjugate_transpose());
  return CocycleSpec(std::move(mats), spec.measure().reversed());
}

MarkovSampler::MarkovSampler(const MarkovMeasure& mu, RandomSource rng)
    : mu_(mu), rng_(rng) {}

int MarkovSampler::next() {
  int n = mu_.alphabet();
  std::vector<double> w(n);
  if (current_ < 0) {
    for (int j = 0; j < n; ++j) w[j] = mu_.stationary()[j];
  } else {
    for (int j = 0; j < n; ++j) w[j] = mu_.transition(current_, j);
  }
  current_ = draw_index(rng_, w);
  return current_;
}

}  // namespace cospec
