// Detector-inefficiency model for engineered states: the conditional chain is
// expanded into a no-absorption branch plus one branch per detector in which
// that step's photon was absorbed (noise-operator bookkeeping keeps the
// branches mutually orthogonal in the environment). Absorption in more than
// one detector is dropped, so the expansion is valid to first order in
// (1 - eta).
#pragma once

#include <vector>

#include "fockgen/engineer.hpp"

namespace fock {

// Branch expansion keeps absorption multiplicity <= 1; O((1-eta)^2) terms are
// dropped, which is why efficiencies below kTrustedEtaMin only earn a
// validity warning instead of hard trust.
inline constexpr int kDroppedEtaOrder = 2;
inline constexpr double kTrustedEtaMin = 0.9;

inline bool eta_within_model_validity(double eta) {
  return eta >= kTrustedEtaMin;
}

struct LossBranches {
  State ideal;                  // R^N chain, no absorption, unnormalized
  std::vector<State> absorbed;  // branch k: k-th creation deleted, R^{N-1}
  double eta = 1.0;

  // Environment label of absorbed branch k (detector index, 1-based); the
  // labels being pairwise distinct is what kills cross-branch interference.
  int environment_label(std::size_t k) const { return int(k) + 1; }
};

// Builds branch 0 and the N single-absorption branches from the fock-core
// primitives. Branch k omits the k-th creation operator (counting from the
// D(alpha_1) end) and carries one fewer reflectance factor.
LossBranches branch_states(const Recipe& recipe, Eigen::Index dim,
                           double eta = 1.0);

// F = <Psi| rho |Psi> for the branch mixture with noise weights
// <L L^dag> = 1 - eta. The no-absorption branch is the target itself and
// enters normalized, so F = 1 / (1 + (1 - eta) sum_k ||phi_k||^2) with the
// absorbed branches keeping their expansion norms.
double fidelity_from_branches(const LossBranches& branches, double eta);

// Convenience wrapper: branches at an automatic workspace dim, then the
// mixture fidelity. dim = 0 selects the workspace automatically.
double fidelity_with_loss(const Recipe& recipe, double eta,
                          Eigen::Index dim = 0);

}  // namespace fock
