#include <doctest.h>

#include <set>

#include "fockgen/lossy.hpp"
#include "fockgen/random_state.hpp"
#include "test_util.hpp"

using fock::Recipe;
using fock::State;
using testutil::Complex;

namespace {

Recipe bare_photon_recipe(double t) {
  Recipe recipe;
  recipe.coeffs = Eigen::VectorXcd::Zero(2);
  recipe.coeffs[1] = 1.0;
  recipe.roots = Eigen::VectorXcd::Zero(1);
  recipe.alphas = Eigen::VectorXcd::Zero(2);
  recipe.transmittance = t;
  return recipe;
}

Recipe planned(std::uint64_t seed, int n) {
  const State target = fock::generate_random_state({n, 0.0, seed});
  return fock::plan(target);
}

}  // namespace

TEST_CASE("single-step branches by hand") {
  const double t = 0.8;
  const auto branches = fock::branch_states(bare_photon_recipe(t), 12);
  const double r = std::sqrt(1.0 - t * t);
  REQUIRE(branches.absorbed.size() == 1);

  // No absorption: R |1>. Absorbed: the creation never fires, R^0 |0>.
  CHECK(std::abs(branches.ideal.amplitudes[1] - Complex(r, 0)) <= 1e-15);
  CHECK(std::abs(fock::squared_norm(branches.ideal) - r * r) <= 1e-15);
  CHECK(std::abs(branches.absorbed[0].amplitudes[0] - Complex(1, 0)) <=
        1e-15);
}

TEST_CASE("branch count matches the step count") {
  const Recipe recipe = planned(91ULL, 5);
  const auto branches =
      fock::branch_states(recipe, fock::auto_workspace_dim(recipe));
  CHECK(branches.absorbed.size() == 5);

  std::set<int> labels;
  for (std::size_t k = 0; k < branches.absorbed.size(); ++k)
    labels.insert(branches.environment_label(k));
  CHECK(labels.size() == branches.absorbed.size());
}

TEST_CASE("the no-absorption branch is the engineered state") {
  const Recipe recipe = planned(92ULL, 4);
  const Eigen::Index dim = fock::auto_workspace_dim(recipe);
  const auto branches = fock::branch_states(recipe, dim);
  const auto sim = fock::simulate_recipe(recipe, dim);
  const State renorm = fock::normalize(branches.ideal);
  CHECK(fock::overlap_fidelity(renorm, sim.state) >= 1.0 - 1e-10);
}

TEST_CASE("perfect detectors mean perfect fidelity") {
  for (std::uint64_t seed : {93ULL, 94ULL}) {
    const Recipe recipe = planned(seed, 3);
    CHECK(std::abs(fock::fidelity_with_loss(recipe, 1.0) - 1.0) <= 1e-12);
  }
}

TEST_CASE("fidelity increases strictly with eta") {
  const Recipe recipe = planned(95ULL, 5);
  const Eigen::Index dim = fock::auto_workspace_dim(recipe);
  const auto branches = fock::branch_states(recipe, dim);
  double previous = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double eta = 0.90 + 0.01 * k;
    const double f = fock::fidelity_from_branches(branches, eta);
    CHECK(f > previous);
    previous = f;
  }
  CHECK(previous == 1.0);  // eta = 1 closes the sweep exactly
}

TEST_CASE("first-order loss expansion matches the derivative") {
  const Recipe recipe = planned(96ULL, 5);
  const Eigen::Index dim = fock::auto_workspace_dim(recipe);
  const auto branches = fock::branch_states(recipe, dim);

  // d F / d eta at eta0, analytic versus central difference.
  const double eta0 = 1.0 - 1e-4;
  double absorbed_sum = 0.0;
  for (const State& b : branches.absorbed)
    absorbed_sum += fock::squared_norm(b);
  const double analytic =
      absorbed_sum / std::pow(1.0 + (1.0 - eta0) * absorbed_sum, 2.0);
  // h balances the O(h^2) truncation against cancellation in F ~ 1 - tiny.
  const double h = 1e-5;
  const double numeric =
      (fock::fidelity_from_branches(branches, eta0 + h) -
       fock::fidelity_from_branches(branches, eta0 - h)) /
      (2.0 * h);
  CHECK(std::abs(numeric - analytic) <= 1e-6 * analytic);

  // 1 - F stays below the first-order bound (equality to first order); the
  // branch-norm ratio against the heralded branch bounds it from above too.
  const double f = fock::fidelity_from_branches(branches, eta0);
  double ratio_sum = 0.0;
  for (const State& b : branches.absorbed)
    ratio_sum += fock::squared_norm(b) / fock::squared_norm(branches.ideal);
  CHECK(1.0 - f <= (1.0 - eta0) * absorbed_sum + 1e-15);
  CHECK(1.0 - f <= (1.0 - eta0) * ratio_sum + 1e-15);
  CHECK(1.0 - f == doctest::Approx((1.0 - eta0) * absorbed_sum).epsilon(1e-3));
}

TEST_CASE("high-efficiency fidelity of an engineered state") {
  const Recipe recipe = planned(97ULL, 5);
  const double f = fock::fidelity_with_loss(recipe, 0.95);
  CHECK(f >= 0.99);
  CHECK(f < 1.0);
}

TEST_CASE("deeper chains stay in the trusted fidelity band") {
  const Recipe recipe = planned(300ULL, 13);
  const double f = fock::fidelity_with_loss(recipe, 0.90);
  CHECK(f >= 0.97);
  CHECK(f < 1.0);
}

TEST_CASE("eta validation and the trust boundary") {
  const Recipe recipe = bare_photon_recipe(0.8);
  for (double bad : {0.0, -0.2, 1.0001})
    CHECK_THROWS_AS(fock::fidelity_with_loss(recipe, bad), fock::Error);
  CHECK(fock::eta_within_model_validity(0.93));
  CHECK(!fock::eta_within_model_validity(0.85));
  CHECK(fock::kDroppedEtaOrder == 2);
}
