#pragma once

#include <set>
#include <stdexcept>
#include <vector>

#include "cospec/matrix.hpp"
#include "cospec/rng.hpp"

namespace cospec {

struct TieError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Irreducible pair of permutations of {1..d}, stored as symbol lists: top[j]
// is the symbol at position j+1 of the top row.
struct PermutationPair {
  int d = 0;
  std::vector<int> top;
  std::vector<int> bottom;

  PermutationPair() = default;
  PermutationPair(std::vector<int> top_, std::vector<int> bottom_);

  // last symbol of the given row: alpha(eps)
  int last(int eps) const { return eps == 0 ? top.back() : bottom.back(); }
  // position (1-based) of a symbol in the given row
  int position(int eps, int symbol) const;
  bool irreducible() const;
  bool operator<(const PermutationPair& o) const {
    return std::tie(top, bottom) < std::tie(o.top, o.bottom);
  }
  bool operator==(const PermutationPair& o) const { return top == o.top && bottom == o.bottom; }

  static PermutationPair reversal(int d);  // top 1..d, bottom d..1
};

// Pair move of the induction: the row opposite to eps loses its last symbol,
// reinserted right after the winner's position.
PermutationPair rauzy_pair_move(const PermutationPair& pi, int eps);

template <typename T>
struct RauzyStepT {
  int type_eps = 0;
  PermutationPair new_pair;
  std::vector<T> new_lambda;
  T normalizer;       // a = 1 - lambda_{alpha(1-eps)}
  QMat matrix;        // R with lambda' = R(lambda)/a; integer entries
  QMat inverse_matrix;  // R^{-1}, non-negative integer entries
};
using RauzyStep = RauzyStepT<Rational>;
using RauzyStepF = RauzyStepT<double>;

RauzyStep rauzy_step(const PermutationPair& pi, const std::vector<Rational>& lambda);
RauzyStepF rauzy_step(const PermutationPair& pi, const std::vector<double>& lambda);

template <typename T>
struct ZorichStepT {
  int n = 0;          // accelerated count: consecutive steps of one type
  int type_eps = 0;
  PermutationPair end_pair;
  std::vector<T> end_lambda;
  QMat forward;       // ordered product R_n ... R_1
  QMat inverse;       // forward^{-1} = R_1^{-1} ... R_n^{-1}, non-negative integers
  QMat cocycle_matrix() const { return inverse.transpose(); }
};
using ZorichStep = ZorichStepT<Rational>;
using ZorichStepF = ZorichStepT<double>;

ZorichStep zorich_step(const PermutationPair& pi, const std::vector<Rational>& lambda,
                       long step_cap = 1000000L);
ZorichStepF zorich_step(const PermutationPair& pi, const std::vector<double>& lambda,
                        long step_cap = 1000000L);

// Closure of {pi} under both pair moves.
std::set<PermutationPair> rauzy_class(const PermutationPair& pi);

struct SymplecticStructure {
  QMat omega;        // antisymmetric, entries in {-1, 0, 1}
  QMat range_basis;  // d x 2g, exact basis of H_pi = range(omega)
  int genus = 0;     // dim H_pi = 2 g
};

SymplecticStructure omega_matrix(const PermutationPair& pi);

// Omega_{pi'} R = R^{-1*} Omega_pi, exactly in integer arithmetic.
bool check_symplectic_invariance(const RauzyStep& step, const PermutationPair& pi_before,
                                 const PermutationPair& pi_after);

// Uniform point of the open simplex.
std::vector<double> random_simplex_point(int d, RandomSource& rng);
std::vector<Rational> random_rational_simplex_point(int d, RandomSource& rng, int denom_scale = 1000);

// Forward orbit state of the accelerated induction over double lengths, with
// per-step renormalization of the length vector.
class ZorichOrbit {
 public:
  ZorichOrbit(PermutationPair start, std::vector<double> lambda);
  ZorichOrbit(PermutationPair start, RandomSource& rng);

  const PermutationPair& pair() const { return pair_; }
  const std::vector<double>& lambda() const { return lambda_; }
  int current_type() const;

  // One Rauzy step in place. Returns the 0-based (row_add_to, row_add_from)
  // indices of the fiber update v_a += v_b.
  std::pair<int, int> rauzy_update();
  // True when the type at the current state differs from the previous state's.
  bool type_switched() const { return switched_; }
  long rauzy_steps() const { return rauzy_steps_; }
  long accelerated_steps() const { return accel_steps_; }

 private:
  PermutationPair pair_;
  std::vector<double> lambda_;
  int last_type_ = -1;
  bool switched_ = false;
  long rauzy_steps_ = 0;
  long accel_steps_ = 0;
};

}  // namespace cospec
