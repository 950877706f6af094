#include "cospec/rauzy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace cospec {

PermutationPair::PermutationPair(std::vector<int> top_, std::vector<int> bottom_)
    : d(static_cast<int>(top_.size())), top(std::move(top_)), bottom(std::move(bottom_)) {
  if (top.size() != bottom.size() || top.empty())
    throw std::invalid_argument("PermutationPair: rows must have equal positive length");
  auto is_perm = [this](const std::vector<int>& row) {
    std::vector<bool> seen(d + 1, false);
    for (int s : row) {
      if (s < 1 || s > d || seen[s]) return false;
      seen[s] = true;
    }
    return true;
  };
  if (!is_perm(top) || !is_perm(bottom))
    throw std::invalid_argument("PermutationPair: rows must be permutations of {1..d}");
}

int PermutationPair::position(int eps, int symbol) const {
  const std::vector<int>& row = eps == 0 ? top : bottom;
  for (int j = 0; j < d; ++j)
    if (row[j] == symbol) return j + 1;
  throw std::invalid_argument("PermutationPair: symbol not found");
}

bool PermutationPair::irreducible() const {
  // reducible iff the first k symbols of both rows coincide as sets, k < d
  std::uint64_t tmask = 0, bmask = 0;
  for (int k = 0; k < d - 1; ++k) {
    tmask |= 1ULL << top[k];
    bmask |= 1ULL << bottom[k];
    if (tmask == bmask) return false;
  }
  return true;
}

PermutationPair PermutationPair::reversal(int d) {
  std::vector<int> t(d), b(d);
  for (int i = 0; i < d; ++i) {
    t[i] = i + 1;
    b[i] = d - i;
  }
  return PermutationPair(t, b);
}

PermutationPair rauzy_pair_move(const PermutationPair& pi, int eps) {
  int winner = pi.last(eps);
  int loser = pi.last(1 - eps);
  const std::vector<int>& row = (1 - eps) == 0 ? pi.top : pi.bottom;
  std::vector<int> updated;
  updated.reserve(pi.d);
  for (int j = 0; j + 1 < pi.d; ++j) {  // drop the last symbol (the loser)
    updated.push_back(row[j]);
    if (row[j] == winner) updated.push_back(loser);
  }
  if (eps == 0) return PermutationPair(pi.top, updated);
  return PermutationPair(updated, pi.bottom);
}

namespace {

template <typename T>
RauzyStepT<T> rauzy_step_impl(const PermutationPair& pi, const std::vector<T>& lambda) {
  if (static_cast<int>(lambda.size()) != pi.d)
    throw std::invalid_argument("rauzy_step: length vector size mismatch");
  int a0 = pi.last(0), a1 = pi.last(1);
  const T& l0 = lambda[a0 - 1];
  const T& l1 = lambda[a1 - 1];
  if (l0 == l1) throw TieError("Rauzy undefined: tied lengths");
  int eps = (l0 > l1) ? 0 : 1;
  int winner = eps == 0 ? a0 : a1;
  int loser = eps == 0 ? a1 : a0;

  RauzyStepT<T> out;
  out.type_eps = eps;
  out.new_pair = rauzy_pair_move(pi, eps);
  // a = 1 - lambda_loser for a normalized vector; using the running sum keeps
  // floating-point orbits on the simplex instead of drifting off it
  T total(0);
  for (const T& v : lambda) total += v;
  out.normalizer = total - lambda[loser - 1];
  out.new_lambda = lambda;
  out.new_lambda[winner - 1] = lambda[winner - 1] - lambda[loser - 1];
  for (T& v : out.new_lambda) v = v / out.normalizer;
  out.matrix = QMat::identity(pi.d);
  out.matrix(winner - 1, loser - 1) = -1;
  out.inverse_matrix = QMat::identity(pi.d);
  out.inverse_matrix(winner - 1, loser - 1) = 1;
  return out;
}

template <typename T>
ZorichStepT<T> zorich_step_impl(const PermutationPair& pi, const std::vector<T>& lambda,
                                long step_cap) {
  ZorichStepT<T> out;
  PermutationPair cur = pi;
  std::vector<T> lam = lambda;
  out.forward = QMat::identity(pi.d);
  out.inverse = QMat::identity(pi.d);
  int first_type = -1;
  for (long n = 0;; ++n) {
    RauzyStepT<T> step = rauzy_step_impl<T>(cur, lam);
    if (first_type < 0) {
      first_type = step.type_eps;
    } else if (step.type_eps != first_type) {
      out.end_pair = cur;
      out.end_lambda = lam;
      return out;
    }
    if (n >= step_cap) throw TieError("zorich_step: acceleration cap exceeded");
    out.forward = step.matrix * out.forward;
    out.inverse = out.inverse * step.inverse_matrix;
    cur = step.new_pair;
    lam = step.new_lambda;
    out.n += 1;
    out.type_eps = first_type;
  }
}

}  // namespace

RauzyStep rauzy_step(const PermutationPair& pi, const std::vector<Rational>& lambda) {
  return rauzy_step_impl<Rational>(pi, lambda);
}

RauzyStepF rauzy_step(const PermutationPair& pi, const std::vector<double>& lambda) {
  return rauzy_step_impl<double>(pi, lambda);
}

ZorichStep zorich_step(const PermutationPair& pi, const std::vector<Rational>& lambda,
                       long step_cap) {
  return zorich_step_impl<Rational>(pi, lambda, step_cap);
}

ZorichStepF zorich_step(const PermutationPair& pi, const std::vector<double>& lambda,
                        long step_cap) {
  return zorich_step_impl<double>(pi, lambda, step_cap);
}

std::set<PermutationPair> rauzy_class(const PermutationPair& pi) {
  if (!pi.irreducible()) throw std::invalid_argument("rauzy_class: reducible pair");
  std::set<PermutationPair> seen{pi};
  std::deque<PermutationPair> queue{pi};
  while (!queue.empty()) {
    PermutationPair cur = queue.front();
    queue.pop_front();
    for (int eps = 0; eps < 2; ++eps) {
      PermutationPair next = rauzy_pair_move(cur, eps);
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return seen;
}

SymplecticStructure omega_matrix(const PermutationPair& pi) {
  if (!pi.irreducible()) throw std::invalid_argument("omega_matrix: reducible pair");
  int d = pi.d;
  SymplecticStructure out;
  out.omega = QMat(d, d);
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j) {
      int v = 0;
      if (pi.position(1, j) < pi.position(1, i)) v += 1;
      if (pi.position(0, j) < pi.position(0, i)) v -= 1;
      out.omega(i - 1, j - 1) = v;
    }
  // exact column-space basis: pivot columns of the reduced form
  QMat work = out.omega;
  std::vector<int> pivot_cols;
  int r = 0;
  for (int c = 0; c < d && r < d; ++c) {
    int p = -1;
    for (int i = r; i < d; ++i)
      if (work(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    work.swap_rows(p, r);
    for (int i = r + 1; i < d; ++i) {
      if (work(i, c) == 0) continue;
      Rational f = work(i, c) / work(r, c);
      for (int j = c; j < d; ++j) work(i, j) = work(i, j) - f * work(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  int rank = static_cast<int>(pivot_cols.size());
  if (rank % 2 != 0) throw std::logic_error("omega_matrix: odd rank of an antisymmetric map");
  out.genus = rank / 2;
  out.range_basis = QMat(d, rank);
  for (int k = 0; k < rank; ++k)
    for (int i = 0; i < d; ++i) out.range_basis(i, k) = out.omega(i, pivot_cols[k]);
  return out;
}

bool check_symplectic_invariance(const RauzyStep& step, const PermutationPair& pi_before,
                                 const PermutationPair& pi_after) {
  QMat lhs = omega_matrix(pi_after).omega * step.matrix;
  QMat rhs = step.inverse_matrix.transpose() * omega_matrix(pi_before).omega;
  return lhs == rhs;
}

std::vector<double> random_simplex_point(int d, RandomSource& rng) {
  std::vector<double> v(d);
  double total = 0;
  for (double& x : v) {
    x = -std::log(1.0 - rng.uniform());
    total += x;
  }
  for (double& x : v) x /= total;
  return v;
}

std::vector<Rational> random_rational_simplex_point(int d, RandomSource& rng, int denom_scale) {
  std::vector<Rational> v(d);
  Rational total(0);
  for (Rational& x : v) {
    Rational q(1 + rng.uniform_int(denom_scale), 1 + rng.uniform_int(denom_scale));
    q.canonicalize();
    x = q;
    total += q;
  }
  for (Rational& x : v) x /= total;
  return v;
}

ZorichOrbit::ZorichOrbit(PermutationPair start, std::vector<double> lambda)
    : pair_(std::move(start)), lambda_(std::move(lambda)) {
  last_type_ = current_type();
}

ZorichOrbit::ZorichOrbit(PermutationPair start, RandomSource& rng) : pair_(std::move(start)) {
  lambda_ = random_simplex_point(pair_.d, rng);
  last_type_ = current_type();
}

int ZorichOrbit::current_type() const {
  double l0 = lambda_[pair_.last(0) - 1];
  double l1 = lambda_[pair_.last(1) - 1];
  if (l0 == l1) throw TieError("Rauzy undefined: tied lengths");
  return l0 > l1 ? 0 : 1;
}

std::pair<int, int> ZorichOrbit::rauzy_update() {
  int eps = current_type();
  int winner = pair_.last(eps);
  int loser = pair_.last(1 - eps);
  lambda_[winner - 1] -= lambda_[loser - 1];
  double total = 0;
  for (double v : lambda_) total += v;
  for (double& v : lambda_) v /= total;
  pair_ = rauzy_pair_move(pair_, eps);
  ++rauzy_steps_;
  int new_type = current_type();
  switched_ = (new_type != eps);
  if (switched_) ++accel_steps_;
  last_type_ = new_type;
  // fiber update: row alpha(1-eps) += row alpha(eps)
  return {loser - 1, winner - 1};
}

}  // namespace cospec
