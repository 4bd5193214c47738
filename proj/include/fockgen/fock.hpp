// Truncated Fock-space states and the operator primitives built on them:
// normalization, inner products, ladder/attenuation operators, displacement
// matrices and coherent-state overlaps. All operations are pure functions on
// value types; dense Eigen vectors/matrices carry the amplitudes.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "fockgen/errors.hpp"

namespace fock {

// Norm^2 lost to truncation above this threshold is reported as an error
// instead of being dropped silently.
inline constexpr double kLeakageTolerance = 1e-8;

// |<psi|psi> - 1| tolerance for states that claim to be normalized.
inline constexpr double kNormTolerance = 1e-12;

template <typename Scalar = double>
struct FockState {
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  Vector amplitudes;
  // Norm^2 lost to truncation by the most recent operation; 0 for freshly
  // constructed states.
  Scalar leakage = Scalar(0);

  Eigen::Index dim() const { return amplitudes.size(); }

  static FockState vacuum(Eigen::Index dim) {
    FockState s;
    s.amplitudes = Vector::Zero(dim);
    s.amplitudes[0] = Complex(1);
    return s;
  }

  static FockState basis(Eigen::Index n, Eigen::Index dim) {
    if (n < 0 || n >= dim)
      throw Error(ErrorCode::ConfigInvalid,
                  "basis index " + std::to_string(n) + " outside dim " +
                      std::to_string(dim));
    FockState s;
    s.amplitudes = Vector::Zero(dim);
    s.amplitudes[n] = Complex(1);
    return s;
  }
};

using State = FockState<double>;

template <typename Scalar>
Scalar squared_norm(const FockState<Scalar>& state) {
  return state.amplitudes.squaredNorm();
}

template <typename Scalar>
bool is_normalized(const FockState<Scalar>& state,
                   Scalar tol = Scalar(1e-10)) {
  using std::abs;
  return abs(squared_norm(state) - Scalar(1)) <= tol;
}

// Scales amplitudes to unit norm, leaving relative phases untouched. States
// already within 2.5e-13 of unit norm are returned unchanged, which makes
// repeated normalization bit-stable.
template <typename Scalar>
FockState<Scalar> normalize(const FockState<Scalar>& state) {
  const Scalar n2 = squared_norm(state);
  if (!(n2 > Scalar(1e-300)))
    throw Error(ErrorCode::ZeroNorm, "cannot normalize state with norm^2 " +
                                         std::to_string(double(n2)));
  FockState<Scalar> out = state;
  out.leakage = Scalar(0);
  if (std::abs(n2 - Scalar(1)) > Scalar(2.5e-13))
    out.amplitudes /= std::sqrt(n2);
  return out;
}

// <a|b> = sum_n conj(a_n) b_n.
template <typename Scalar>
std::complex<Scalar> inner(const FockState<Scalar>& a,
                           const FockState<Scalar>& b) {
  if (a.dim() != b.dim())
    throw Error(ErrorCode::DimMismatch,
                "inner product needs equal dims, got " +
                    std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  return a.amplitudes.dot(b.amplitudes);
}

// |<a|b>|^2.
template <typename Scalar>
Scalar overlap_fidelity(const FockState<Scalar>& a, const FockState<Scalar>& b) {
  return std::norm(inner(a, b));
}

// a^dagger. The amplitude at |dim-1> would leave the workspace; its norm^2
// contribution |a_{dim-1}|^2 * dim is recorded as leakage and dropped.
template <typename Scalar>
FockState<Scalar> apply_creation(const FockState<Scalar>& state) {
  const Eigen::Index dim = state.dim();
  FockState<Scalar> out;
  out.amplitudes.setZero(dim);
  for (Eigen::Index n = 0; n + 1 < dim; ++n)
    out.amplitudes[n + 1] = std::sqrt(Scalar(n + 1)) * state.amplitudes[n];
  out.leakage = std::norm(state.amplitudes[dim - 1]) * Scalar(dim);
  return out;
}

// T^{n_hat}: a_n <- T^n a_n. Non-unitary by design (conditional operator).
template <typename Scalar>
FockState<Scalar> apply_attenuation(const FockState<Scalar>& state, Scalar t) {
  if (!(t > Scalar(0)) || t > Scalar(1))
    throw Error(ErrorCode::BadTransmittance,
                "transmittance must lie in (0,1], got " + std::to_string(double(t)));
  FockState<Scalar> out;
  out.amplitudes.resize(state.dim());
  for (Eigen::Index n = 0; n < state.dim(); ++n)
    out.amplitudes[n] = std::pow(t, Scalar(n)) * state.amplitudes[n];
  out.leakage = Scalar(0);
  return out;
}

// Dense dim x dim matrix of <m|D(beta)|n>. Magnitudes are generated by a
// three-term recurrence on the fully scaled matrix elements (factorial ratios
// and the Gaussian factor folded into the seed in log space), so entries stay
// bounded by 1 and no factorial ever overflows.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
displacement_matrix(std::complex<Scalar> beta, Eigen::Index dim) {
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  if (dim <= 0)
    throw Error(ErrorCode::ConfigInvalid, "displacement_matrix needs dim >= 1");
  const Scalar babs = std::abs(beta);
  if (babs == Scalar(0)) return Matrix::Identity(dim, dim);

  const Scalar lambda = babs * babs;
  const Complex phase = beta / babs;
  Matrix d(dim, dim);

  Complex phase_d(1);
  Scalar sign_d(1);
  for (Eigen::Index off = 0; off < dim; ++off) {
    // Seed u_0 = e^{-lambda/2} |beta|^off / sqrt(off!) in log space.
    const double log_u0 = -0.5 * double(lambda) +
                          (off > 0 ? double(off) * std::log(double(babs)) : 0.0) -
                          0.5 * std::lgamma(double(off) + 1.0);
    Scalar u_prev = Scalar(std::exp(log_u0));
    Scalar u_curr = (dim - off >= 2)
                        ? u_prev * (Scalar(1 + off) - lambda) /
                              std::sqrt(Scalar(1 + off))
                        : Scalar(0);
    for (Eigen::Index n = 0; n + off < dim; ++n) {
      const Scalar u = (n == 0) ? u_prev : u_curr;
      d(n + off, n) = u * phase_d;
      if (off > 0) d(n, n + off) = u * sign_d * std::conj(phase_d);
      if (n >= 1) {
        const Scalar u_next =
            ((Scalar(2 * n + 1 + off) - lambda) * u_curr -
             std::sqrt(Scalar(n) * Scalar(n + off)) * u_prev) /
            std::sqrt(Scalar(n + 1) * Scalar(n + 1 + off));
        u_prev = u_curr;
        u_curr = u_next;
      }
    }
    phase_d *= phase;
    sign_d = -sign_d;
  }
  return d;
}

// Applies D(beta) on the truncated workspace. Norm lost above |dim-1> becomes
// leakage; more than kLeakageTolerance relative loss is an error.
template <typename Scalar>
FockState<Scalar> displace(const FockState<Scalar>& state,
                           std::complex<Scalar> beta) {
  FockState<Scalar> out;
  out.amplitudes = displacement_matrix(beta, state.dim()) * state.amplitudes;
  const Scalar in2 = state.amplitudes.squaredNorm();
  const Scalar out2 = out.amplitudes.squaredNorm();
  out.leakage = std::max(Scalar(0), in2 - out2);
  if (out.leakage > Scalar(kLeakageTolerance) * std::max(in2, Scalar(1e-300)))
    throw Error(ErrorCode::TruncationOverflow,
                "displacement leaked norm^2 " + std::to_string(double(out.leakage)) +
                    " at dim " + std::to_string(state.dim()));
  return out;
}

// Number-basis expansion of |beta>: e^{-|beta|^2/2} beta^n / sqrt(n!).
template <typename Scalar>
typename FockState<Scalar>::Vector coherent_amplitudes(
    std::complex<Scalar> beta, Eigen::Index dim) {
  typename FockState<Scalar>::Vector v(dim);
  std::complex<Scalar> c = std::exp(std::complex<Scalar>(
      -Scalar(0.5) * std::norm(beta), Scalar(0)));
  for (Eigen::Index n = 0; n < dim; ++n) {
    v[n] = c;
    c *= beta / std::sqrt(Scalar(n + 1));
  }
  return v;
}

// Upper bound on the Poisson(lambda) mass at or above `dim`. Returns 1 when
// the bound does not apply (dim at or below the mean).
inline double coherent_tail_bound(double lambda, Eigen::Index dim) {
  if (lambda <= 0.0) return 0.0;
  const double d = double(dim);
  if (d <= lambda) return 1.0;
  const double log_pmf = -lambda + d * std::log(lambda) - std::lgamma(d + 1.0);
  return std::exp(log_pmf) * (d + 1.0) / (d + 1.0 - lambda);
}

// <beta|state>. The workspace must hold essentially all of |beta>: the
// coherent mass above dim-1 has to be below 1e-12, otherwise the overlap
// against a truncated state could silently lose weight.
template <typename Scalar>
std::complex<Scalar> coherent_overlap(const FockState<Scalar>& state,
                                      std::complex<Scalar> beta) {
  const double lambda = double(std::norm(beta));
  if (coherent_tail_bound(lambda, state.dim()) > 1e-12)
    throw Error(ErrorCode::TruncationOverflow,
                "coherent state |beta|^2 = " + std::to_string(lambda) +
                    " does not fit in dim " + std::to_string(state.dim()));
  const auto bra = coherent_amplitudes(beta, state.dim());
  return bra.dot(state.amplitudes);
}

// Zero-pads a state into a larger workspace (exact embedding).
template <typename Scalar>
FockState<Scalar> embed(const FockState<Scalar>& state, Eigen::Index dim) {
  if (dim < state.dim())
    throw Error(ErrorCode::ConfigInvalid,
                "embed cannot shrink dim " + std::to_string(state.dim()) +
                    " to " + std::to_string(dim));
  FockState<Scalar> out;
  out.amplitudes.setZero(dim);
  out.amplitudes.head(state.dim()) = state.amplitudes;
  out.leakage = state.leakage;
  return out;
}

// Workspace size that keeps coherent tails below ~1e-12 for any pipeline
// touching displacements of magnitude up to beta_abs on top index n_top.
inline Eigen::Index recommended_dim(Eigen::Index n_top, double beta_abs) {
  const double b = std::abs(beta_abs);
  return n_top + 1 + Eigen::Index(std::ceil(b * b + 6.0 * b)) + 8;
}

}  // namespace fock
