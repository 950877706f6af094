#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cospec/cocycle.hpp"
#include "cospec/shift_space.hpp"

using namespace cospec;

namespace {

MarkovMeasure two_state_chain() {
  RMat t(2, 2);
  t(0, 0) = 0.9; t(0, 1) = 0.1;
  t(1, 0) = 0.5; t(1, 1) = 0.5;
  return MarkovMeasure(t, {5.0 / 6.0, 1.0 / 6.0});
}

}  // namespace

TEST_CASE("cylinder measure of a Bernoulli word") {
  MarkovMeasure mu = MarkovMeasure::bernoulli({0.5, 0.5});
  CHECK(cylinder_measure(mu, Word{{0, 1}}).value == doctest::Approx(0.25));
  CHECK(cylinder_measure(mu, Word{{}}).value == doctest::Approx(1.0));
}

TEST_CASE("cylinder measure of a Markov word, by hand product") {
  MarkovMeasure mu = two_state_chain();
  CHECK(cylinder_measure(mu, Word{{0, 0, 1}}).value == doctest::Approx((5.0 / 6.0) * 0.9 * 0.1));
}

TEST_CASE("null cylinder flag") {
  RMat t(2, 2);
  t(0, 0) = 1.0; t(1, 0) = 1.0;
  MarkovMeasure mu(t, {1.0, 0.0});
  auto cm = cylinder_measure(mu, Word{{0, 1}});
  CHECK(cm.null_cylinder);
  CHECK(cm.value == 0);
}

TEST_CASE("backward average of a Bernoulli measure") {
  MarkovMeasure mu = MarkovMeasure::bernoulli({0.3, 0.7});
  auto ba = backward_average(mu, Word{{0}}, 1);
  REQUIRE(ba.branches.size() == 2);
  CHECK(ba.branches[0].weight == doctest::Approx(0.3));
  CHECK(ba.branches[1].weight == doctest::Approx(0.7));
  CHECK(ba.weight_sum == doctest::Approx(1.0));

  auto ba2 = backward_average(mu, Word{{1}}, 2);
  REQUIRE(ba2.branches.size() == 4);
  CHECK(ba2.weight_sum == doctest::Approx(1.0));
  // branch (0,1): p * (1-p) with p = 0.3
  CHECK(ba2.branches[1].preimage.symbols == std::vector<int>{0, 1});
  CHECK(ba2.branches[1].weight == doctest::Approx(0.3 * 0.7));
}

TEST_CASE("backward average of a Markov chain is the reversed-chain step") {
  MarkovMeasure mu = two_state_chain();
  auto ba = backward_average(mu, Word{{0}}, 1);
  REQUIRE(ba.branches.size() == 2);
  // weight(i) = pi_i p(i, 0) / pi_0
  CHECK(ba.branches[0].weight == doctest::Approx(0.9));
  CHECK(ba.branches[1].weight == doctest::Approx(0.1));
  CHECK(std::abs(ba.weight_sum - 1.0) < 1e-12);
}

TEST_CASE("backward average weights sum to 1 across measures and depths") {
  std::vector<MarkovMeasure> measures = {MarkovMeasure::bernoulli({0.2, 0.3, 0.5}),
                                         two_state_chain()};
  RMat t(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t(i, j) = (i == j) ? 0.4 : 0.2;
  measures.push_back(MarkovMeasure::from_transition(t));
  for (const auto& mu : measures) {
    for (int k = 1; k <= 6; ++k) {
      auto ba = backward_average(mu, Word{{0}}, k);
      CHECK(std::abs(ba.weight_sum - 1.0) < 1e-12);
      CHECK_FALSE(ba.warning);
    }
  }
}

TEST_CASE("mu-average of the backward average of a cylinder indicator") {
  // exact summation on a finite alphabet: E_x[ mu_{k,x}(psi) ] = integral of psi
  MarkovMeasure mu = two_state_chain();
  int k = 3;
  Word target{{1, 0}};  // indicator of the depth-2 cylinder [10]
  double target_mass = cylinder_measure(mu, target).value;
  double avg = 0;
  for (int x0 = 0; x0 < 2; ++x0) {
    auto ba = backward_average(mu, Word{{x0}}, k);
    double inner = 0;
    for (const auto& br : ba.branches) {
      // the preimage point starts with br.preimage then x0; psi reads 2 coords
      std::vector<int> head = br.preimage.symbols;
      head.push_back(x0);
      if (head[0] == target.symbols[0] && head[1] == target.symbols[1]) inner += br.weight;
    }
    avg += mu.stationary()[x0] * inner;
  }
  CHECK(std::abs(avg - target_mass) < 1e-8);
}

TEST_CASE("bounded distortion constant") {
  CHECK(MarkovMeasure::bernoulli({0.3, 0.7}).distortion_bound() == doctest::Approx(1.0));
  CHECK(two_state_chain().distortion_bound() > 1.0);
}

TEST_CASE("oscillation of a one-coordinate potential vanishes from depth 1 on") {
  Potential p = first_coordinate_potential(2, {0.0, 1.0});
  CHECK(oscillation(p, 2) == doctest::Approx(0.0));
  CHECK(oscillation(p, 1) == doctest::Approx(0.0));
}

TEST_CASE("oscillation of the geometric potential decays summably") {
  Potential p = geometric_potential(2);
  double prev = 1e300;
  double total = 0;
  for (int k = 1; k <= 10; ++k) {
    double o = oscillation(p, k, 100000);
    CHECK(o <= std::pow(2.0, -(k - 1)) + 1e-12);
    CHECK(o <= prev + 1e-15);
    prev = o;
    total += o;
  }
  CHECK(total < 4.0);
}

TEST_CASE("oscillation of a Markov log-Jacobian vanishes beyond depth 2") {
  Potential p = log_jacobian_potential(two_state_chain());
  CHECK(oscillation(p, 3) == doctest::Approx(0.0));
}

TEST_CASE("summable oscillation goes with a finite stable distortion bound") {
  MarkovMeasure mu = two_state_chain();
  Potential p = log_jacobian_potential(mu);
  double sum = 0;
  for (int k = 1; k <= 8; ++k) sum += oscillation(p, k, 100000);
  CHECK(std::isfinite(sum));
  double k1 = mu.distortion_bound();
  CHECK(std::isfinite(k1));
  CHECK(k1 >= 1.0);
}

TEST_CASE("induced system of the full 2-shift on the base (0)") {
  MarkovMeasure mu = MarkovMeasure::bernoulli({0.5, 0.5});
  InducedSystem ind = build_induced(mu, Word{{0}}, 3);
  REQUIRE(ind.return_words.size() == 3);
  CHECK(ind.return_words[0].word.symbols == std::vector<int>{0, 0});
  CHECK(ind.return_words[0].r == 1);
  CHECK(ind.return_words[1].word.symbols == std::vector<int>{0, 1, 0});
  CHECK(ind.return_words[1].r == 2);
  CHECK(ind.return_words[2].word.symbols == std::vector<int>{0, 1, 1, 0});
  CHECK(ind.return_words[2].r == 3);
  CHECK(ind.return_words[0].mass == doctest::Approx(0.5));
}

TEST_CASE("induced system on a one-letter alphabet") {
  MarkovMeasure mu = MarkovMeasure::bernoulli({1.0});
  InducedSystem ind = build_induced(mu, Word{{0}}, 5);
  REQUIRE(ind.return_words.size() == 1);
  CHECK(ind.return_words[0].r == 1);
  CHECK(ind.captured_mass == doctest::Approx(1.0));
}

TEST_CASE("mean return time approaches Kac's reciprocal measure") {
  MarkovMeasure mu = MarkovMeasure::bernoulli({0.5, 0.5});
  InducedSystem ind = build_induced(mu, Word{{0}}, 20);
  CHECK(std::abs(ind.mean_return_time - 2.0) / 2.0 < 0.05);
  CHECK(ind.captured_mass > 0.99);
}

TEST_CASE("return words are prefix-free and their cylinders disjoint") {
  MarkovMeasure mu = two_state_chain();
  InducedSystem ind = build_induced(mu, Word{{0}}, 8);
  for (std::size_t i = 0; i < ind.return_words.size(); ++i)
    for (std::size_t j = 0; j < ind.return_words.size(); ++j) {
      if (i == j) continue;
      const auto& a = ind.return_words[i].word.symbols;
      const auto& b = ind.return_words[j].word.symbols;
      // no full return word may be a prefix of another, so cylinders are disjoint
      if (a.size() <= b.size()) {
        bool prefix = std::equal(a.begin(), a.end(), b.begin());
        CHECK_FALSE(prefix);
      }
    }
  double mass = 0;
  for (const auto& rw : ind.return_words) mass += rw.mass;
  CHECK(mass <= 1.0 + 1e-12);
}

TEST_CASE("induced cocycle matrices are ordered word products") {
  MarkovMeasure mu = MarkovMeasure::bernoulli({0.5, 0.5});
  CMat a0(2, 2), a1(2, 2);
  a0(0, 0) = 2; a0(1, 1) = 1;
  a1(0, 0) = 1; a1(0, 1) = 1; a1(1, 0) = 1; a1(1, 1) = 2;
  CocycleSpec spec({a0, a1}, mu);
  InducedSystem ind = build_induced(mu, Word{{0}}, 3);
  CocycleSpec induced = induce_cocycle(spec, ind);
  // return word (0,1,0) with r = 2 carries A1 * A0
  CMat expect = a1 * a0;
  CHECK(frobenius_norm(induced.matrices()[1] - expect) < 1e-12);
  // constant-cocycle sanity: r = 3 word carries the cube
  CocycleSpec const_spec({a0, a0}, mu);
  CocycleSpec const_ind = induce_cocycle(const_spec, ind);
  CHECK(frobenius_norm(const_ind.matrices()[2] - a0 * a0 * a0) < 1e-12);
  // identity cocycle stays the identity
  CocycleSpec id_spec({CMat::identity(2), CMat::identity(2)}, mu);
  CHECK(frobenius_norm(induce_cocycle(id_spec, ind).matrices()[2] - CMat::identity(2)) < 1e-15);
}

TEST_CASE("symbolic points: periodic and homoclinic coordinates") {
  SymbolicPoint p = SymbolicPoint::periodic({0, 1, 2});
  CHECK(p.symbol(0) == 0);
  CHECK(p.symbol(1) == 1);
  CHECK(p.symbol(3) == 0);
  CHECK(p.symbol(-1) == 2);
  CHECK(p.symbol(-3) == 0);

  SymbolicPoint fixed = SymbolicPoint::periodic({0});
  SymbolicPoint z = SymbolicPoint::homoclinic({0}, {1}, 2);
  CHECK(z.symbol(-1) == 0);
  CHECK(z.symbol(0) == 1);
  CHECK(z.symbol(1) == 0);
  CHECK(z.symbol(2) == 0);
  CHECK(z.in_same_local_unstable_set(fixed));               // past agrees with the periodic point
  CHECK(z.shifted(2).in_same_local_stable_set(fixed));  // future agrees after l steps
  CHECK_FALSE(z.in_same_local_stable_set(fixed));
}

TEST_CASE("adjoint cocycle transposes matrices and reverses the chain") {
  MarkovMeasure mu = two_state_chain();
  CMat a0(2, 2), a1(2, 2);
  a0(0, 0) = cdouble(1, 1); a0(1, 1) = 2;
  a1(0, 1) = 1; a1(1, 0) = -1;
  CocycleSpec spec({a0, a1}, mu);
  CocycleSpec adj = adjoint_cocycle(spec);
  CHECK(frobenius_norm(adj.matrices()[0] - a0.conjugate_transpose()) == doctest::Approx(0.0));
  CocycleSpec adj2 = adjoint_cocycle(adj);
  CHECK(frobenius_norm(adj2.matrices()[0] - a0) == doctest::Approx(0.0));
  CHECK(frobenius_norm(adj2.measure().transition_matrix() - mu.transition_matrix()) < 1e-12);
  // self-adjoint constant cocycle maps to itself over the reversed shift
  CMat h(2, 2);
  h(0, 0) = 3; h(0, 1) = cdouble(0, 1); h(1, 0) = cdouble(0, -1); h(1, 1) = 1;
  CocycleSpec sa({h, h}, MarkovMeasure::bernoulli({0.5, 0.5}));
  CHECK(frobenius_norm(adjoint_cocycle(sa).matrices()[0] - h) < 1e-15);
}
