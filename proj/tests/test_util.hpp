// Shared test-side oracles, deliberately independent of the library paths
// they check: a Taylor/scaling matrix exponential, dense operator matrices,
// polynomial expansion, and a plain mt19937-based state generator.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>

#include "fockgen/fock.hpp"

namespace testutil {

using Complex = std::complex<double>;

// exp(A) by scaling-and-squaring with a straight Taylor series.
inline Eigen::MatrixXcd expm(Eigen::MatrixXcd a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = int(std::ceil(std::log2(norm / 0.5)));
    a /= std::pow(2.0, squarings);
  }
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd term = result;
  for (int k = 1; k <= 40; ++k) {
    term = (term * a) / double(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-20) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

inline Eigen::MatrixXcd creation_matrix(Eigen::Index dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index n = 0; n + 1 < dim; ++n)
    a(n + 1, n) = std::sqrt(double(n + 1));
  return a;
}

inline Eigen::MatrixXcd annihilation_matrix(Eigen::Index dim) {
  return creation_matrix(dim).adjoint();
}

// Displacement generator beta a^dag - conj(beta) a.
inline Eigen::MatrixXcd displacement_generator(Complex beta,
                                               Eigen::Index dim) {
  return beta * creation_matrix(dim) -
         std::conj(beta) * annihilation_matrix(dim);
}

// Expands leading * prod_k (x - roots[k]), ascending coefficients.
inline Eigen::VectorXcd expand_poly(Complex leading,
                                    const Eigen::VectorXcd& roots) {
  Eigen::VectorXcd q = Eigen::VectorXcd::Zero(roots.size() + 1);
  q[0] = leading;
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    for (Eigen::Index j = k + 1; j >= 1; --j)
      q[j] = q[j - 1] - roots[k] * q[j];
    q[0] = -roots[k] * q[0];
  }
  return q;
}

// Random normalized state with support on the first `support` levels.
inline fock::State random_state(std::mt19937& rng, Eigen::Index dim,
                                Eigen::Index support) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  fock::State s;
  s.amplitudes.setZero(dim);
  for (Eigen::Index n = 0; n < support; ++n)
    s.amplitudes[n] = Complex(gauss(rng), gauss(rng));
  return fock::normalize(s);
}

// Truncated coherent state |alpha> on the given workspace.
inline fock::State coherent_state(Complex alpha, Eigen::Index dim) {
  fock::State s;
  s.amplitudes = fock::coherent_amplitudes(alpha, dim);
  return fock::normalize(s);
}

}  // namespace testutil
