// Seeded construction of truncated states with random coefficients
// C_n = r_n e^{i n theta}, plus deterministic multi-realization ensembles.
#pragma once

#include <cstdint>
#include <vector>

#include "fockgen/fock.hpp"

namespace fock {

// PRNG identifier pinned into every output file so figures can be re-emitted
// bit-exactly.
inline constexpr const char* kPrngId = "splitmix64-1.0";

enum class AmplitudeLaw { UniformUnit };

constexpr const char* to_string(AmplitudeLaw law) {
  switch (law) {
    case AmplitudeLaw::UniformUnit: return "uniform-unit";
  }
  return "unknown";
}

struct RandomStateSpec {
  Eigen::Index n_top = 0;   // top Fock index N; the state has N+1 amplitudes
  double theta = 0.0;       // constant phase step between neighboring |n>
  std::uint64_t seed = 0;
  AmplitudeLaw law = AmplitudeLaw::UniformUnit;
};

struct EnsembleSpec {
  RandomStateSpec base;
  int realizations = 30;
};

// splitmix64 (Steele/Lea/Flood): 64-bit state advanced by the golden gamma,
// output mixed by the murmur-style finalizer. Splittable and portable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0,1) with 53 random bits.
  double next_unit() { return double(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Realization 0 reuses the base seed (a 1-realization ensemble equals the
// base run); realization j > 0 gets the splitmix64 finalizer of
// base + j * 0x9E3779B97F4A7C15.
std::uint64_t derived_seed(std::uint64_t base, int realization);

// The r_n draws behind a spec, before phases and normalization. Exposed so
// callers can inspect e.g. the leading modulus r_N.
Eigen::VectorXd draw_moduli(const RandomStateSpec& spec);

// Builds the normalized state from an explicit list of moduli (the entry
// point for externally supplied sequences). Throws DegenerateDraw when all
// moduli are below 1e-12.
State state_from_moduli(const Eigen::VectorXd& moduli, double theta);

// Normalized state with amplitudes r_n e^{i n theta}; identical spec gives a
// bit-identical state.
State generate_random_state(const RandomStateSpec& spec);

// One state per realization, in realization order.
std::vector<State> ensemble_states(const EnsembleSpec& spec);

}  // namespace fock
