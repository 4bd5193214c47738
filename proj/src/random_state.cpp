#include "fockgen/random_state.hpp"

#include <cmath>
#include <string>

namespace fock {

std::uint64_t derived_seed(std::uint64_t base, int realization) {
  if (realization == 0) return base;
  std::uint64_t z = base + std::uint64_t(realization) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

static void validate(const RandomStateSpec& spec) {
  if (spec.n_top < 0)
    throw Error(ErrorCode::ConfigInvalid, "n_top must be >= 0");
  if (!std::isfinite(spec.theta))
    throw Error(ErrorCode::ConfigInvalid, "theta must be finite");
}

Eigen::VectorXd draw_moduli(const RandomStateSpec& spec) {
  validate(spec);
  SplitMix64 rng(spec.seed);
  Eigen::VectorXd r(spec.n_top + 1);
  for (Eigen::Index n = 0; n <= spec.n_top; ++n) r[n] = rng.next_unit();
  return r;
}

State state_from_moduli(const Eigen::VectorXd& moduli, double theta) {
  if (moduli.size() == 0)
    throw Error(ErrorCode::ConfigInvalid, "need at least one modulus");
  if (moduli.maxCoeff() < 1e-12)
    throw Error(ErrorCode::DegenerateDraw,
                "all moduli below 1e-12; state would be numerically null");
  State s;
  s.amplitudes.resize(moduli.size());
  for (Eigen::Index n = 0; n < moduli.size(); ++n)
    s.amplitudes[n] = std::polar(moduli[n], double(n) * theta);
  return normalize(s);
}

State generate_random_state(const RandomStateSpec& spec) {
  return state_from_moduli(draw_moduli(spec), spec.theta);
}

std::vector<State> ensemble_states(const EnsembleSpec& spec) {
  if (spec.realizations < 1)
    throw Error(ErrorCode::ConfigInvalid, "realizations must be >= 1");
  std::vector<State> states;
  states.reserve(spec.realizations);
  for (int j = 0; j < spec.realizations; ++j) {
    RandomStateSpec run = spec.base;
    run.seed = derived_seed(spec.base.seed, j);
    try {
      states.push_back(generate_random_state(run));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateDraw)
        throw Error(ErrorCode::DegenerateDraw,
                    "realization " + std::to_string(j) + ": " + e.what());
      throw;
    }
  }
  return states;
}

}  // namespace fock
