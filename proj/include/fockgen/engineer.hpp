// Conditional-measurement engineering of a finite Fock superposition:
// factor the target into creation-operator steps via polynomial roots, map
// the roots onto per-step displacement parameters and a beam-splitter
// transmittance, and verify the whole recipe against an exact two-mode
// post-selection simulation.
#pragma once

#include <optional>
#include <string>
#include <utility>

#include "fockgen/fock.hpp"

namespace fock {

struct Recipe {
  Eigen::VectorXcd coeffs;  // normalized target amplitudes C_0..C_N
  Eigen::VectorXcd roots;   // beta_1..beta_N, canonical (|beta|, phase) order
  Eigen::VectorXcd alphas;  // alpha_1..alpha_{N+1} step displacements
  double transmittance = 0;
  double success_prob = 0;
  // Largest |p(beta_k)| of the factorization polynomial over the roots.
  double residual = 0;

  Eigen::Index steps() const { return roots.size(); }
};

// Roots of sum_k coeffs[k] x^k, found by Aberth-Ehrlich simultaneous
// iteration on the balanced monic polynomial with a Newton polish per root.
// Deterministic ordering by (|root|, phase). Each root satisfies
// |p(root)| <= 1e-10 * sum|c_k| * max(1,|root|)^N.
Eigen::VectorXcd characteristic_roots(const Eigen::VectorXcd& coeffs);

// Coefficients of the polynomial whose roots factor the state into
// creation-operator steps: d_n = conj(C_n)/sqrt(n!). With beta_k the roots
// of d, prod_k (a^dag - conj(beta_k)) |0> is proportional to sum_n C_n |n>.
Eigen::VectorXcd factorization_coefficients(const Eigen::VectorXcd& coeffs);

// alpha_1..alpha_{N+1} for the given root order:
//   alpha_{N+1} = beta_N,
//   alpha_k     = T^{N-k+1} (beta_{k-1} - beta_k)      k = 2..N,
//   alpha_1     = -sum_{l=1..N} T^{-l} alpha_{l+1}
// (the last condition cancels the accumulated displacement of the chain).
Eigen::VectorXcd displacement_parameters(const Eigen::VectorXcd& roots,
                                         double transmittance);

struct SimulationResult {
  State state;           // normalized conditional output
  double probability;    // product of all post-selection probabilities
};

// Exact two-mode oracle: per step, displace the signal, couple it to a fresh
// |1> ancilla through the beam-splitter unitary exp(theta (a^dag b - a b^dag))
// with T = cos(theta) (each total-photon block exponentiated numerically),
// project the ancilla on |0>; afterwards apply the final displacement.
SimulationResult simulate_recipe(const Recipe& recipe, Eigen::Index dim);

// The unnormalized operator chain
//   R^N D(alpha_{N+1}) a^dag T^n D(alpha_N) ... a^dag T^n D(alpha_1) |0>
// built step by step from the fock-core primitives.
State chain_state(const Recipe& recipe, Eigen::Index dim);

// Success probability from the two-mode simulation (the normative path).
double success_probability(const Recipe& recipe, Eigen::Index dim);

// Cross-check path: squared norm of chain_state. Agrees with
// success_probability to better than 1e-10 relative on planned recipes.
double chain_success_probability(const Recipe& recipe, Eigen::Index dim);

// Same probability evaluated in closed form: displacements and attenuations
// are telescoped into scalar factors and the leftover polynomial norm is
// summed directly, O(N^2) per call and free of any workspace truncation.
// Returns log(P) (-inf when P underflows).
double chain_log_probability(const Eigen::VectorXcd& alphas,
                             double transmittance);

struct TransmittanceGrid {
  double lo = 0.5;
  double hi = 0.99;
  double step = 1e-3;
};

// Grid scan of the chain probability over T followed by golden-section
// refinement around the best grid point down to 1e-4 resolution in T.
// Returns (T*, P(T*)). Grid points whose displacement parameters would need
// a workspace beyond `max_workspace_dim` are treated as P = 0; their true
// probability is crushed by the attenuation of the huge intermediate
// displacement.
std::pair<double, double> optimize_transmittance(
    const Eigen::VectorXcd& coeffs, const TransmittanceGrid& grid,
    Eigen::Index max_workspace_dim = 512);

struct PlanOptions {
  std::optional<double> fixed_transmittance;
  TransmittanceGrid grid;
  Eigen::Index workspace_dim = 0;  // 0 = choose automatically
  Eigen::Index max_workspace_dim = 512;
};

// Full pipeline: roots -> transmittance (optimized unless fixed) -> alphas
// -> success probability -> oracle verification. Never returns a recipe the
// simulation did not reproduce (VerificationFailed instead).
Recipe plan(const State& target, const PlanOptions& options = {});

// Workspace large enough for every displacement in the recipe.
Eigen::Index auto_workspace_dim(const Recipe& recipe);

// Text table of the recipe, one row per step: k, |beta_k|, phi_beta_k,
// |alpha_k|, phi_alpha_k (3 decimals); the final row carries only
// alpha_{N+1}.
std::string format_recipe_table(const Recipe& recipe);

}  // namespace fock
