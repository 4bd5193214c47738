#include "fockgen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fock {

namespace {

void require_normalized(const State& state) {
  if (!is_normalized(state))
    throw Error(ErrorCode::NotNormalized,
                "norm^2 = " + std::to_string(squared_norm(state)));
}

struct NumberMoments {
  double mean = 0;
  double mean_sq = 0;
  double variance() const { return std::max(0.0, mean_sq - mean * mean); }
};

NumberMoments number_moments(const State& state) {
  NumberMoments m;
  for (Eigen::Index n = 0; n < state.dim(); ++n) {
    const double p = std::norm(state.amplitudes[n]);
    m.mean += p * double(n);
    m.mean_sq += p * double(n) * double(n);
  }
  return m;
}

double require_mean(const NumberMoments& m) {
  if (m.mean <= 1e-15)
    throw Error(ErrorCode::VacuumUndefined,
                "observable undefined at <n> = " + std::to_string(m.mean));
  return m.mean;
}

}  // namespace

Eigen::VectorXd photon_distribution(const State& state) {
  require_normalized(state);
  return state.amplitudes.array().abs2();
}

std::pair<double, double> mean_and_variance(const State& state) {
  require_normalized(state);
  const auto m = number_moments(state);
  return {m.mean, std::sqrt(m.variance())};
}

double mandel_q(const State& state) {
  require_normalized(state);
  const auto m = number_moments(state);
  const double mean = require_mean(m);
  return (m.variance() - mean) / mean;
}

double g2_zero(const State& state) {
  require_normalized(state);
  const auto m = number_moments(state);
  const double mean = require_mean(m);
  return (m.mean_sq - mean) / (mean * mean);
}

std::pair<double, double> quadrature_variances(const State& state) {
  require_normalized(state);
  // <a> and <a^2> from neighboring amplitudes; everything else follows from
  // ladder algebra: <X1^2> = (2 Re<a^2> + 2<n> + 1)/4 and the X2 mirror.
  std::complex<double> a_mean = 0, a2_mean = 0;
  for (Eigen::Index n = 0; n + 1 < state.dim(); ++n)
    a_mean += std::conj(state.amplitudes[n]) * std::sqrt(double(n + 1)) *
              state.amplitudes[n + 1];
  for (Eigen::Index n = 0; n + 2 < state.dim(); ++n)
    a2_mean += std::conj(state.amplitudes[n]) *
               std::sqrt(double(n + 1) * double(n + 2)) *
               state.amplitudes[n + 2];
  const double mean_n = number_moments(state).mean;

  const double x1_sq = (2.0 * a2_mean.real() + 2.0 * mean_n + 1.0) / 4.0;
  const double x2_sq = (-2.0 * a2_mean.real() + 2.0 * mean_n + 1.0) / 4.0;
  const double x1_mean = a_mean.real();
  const double x2_mean = a_mean.imag();
  const double dx1 = std::sqrt(std::max(0.0, x1_sq - x1_mean * x1_mean));
  const double dx2 = std::sqrt(std::max(0.0, x2_sq - x2_mean * x2_mean));
  return {dx1, dx2};
}

double shannon_entropy(const State& state) {
  require_normalized(state);
  double s = 0.0;
  for (Eigen::Index n = 0; n < state.dim(); ++n) {
    const double p = std::norm(state.amplitudes[n]);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

StatsReport compute_report(const State& state) {
  StatsReport r;
  r.p = photon_distribution(state);
  std::tie(r.mean_n, r.delta_n) = mean_and_variance(state);
  r.mandel_q = mandel_q(state);
  r.g2 = g2_zero(state);
  std::tie(r.x1_var, r.x2_var) = quadrature_variances(state);
  r.entropy = shannon_entropy(state);
  r.squeezed = std::min(r.x1_var, r.x2_var) < 0.5;
  return r;
}

HusimiGrid husimi(const State& state, const HusimiWindow& window,
                  int resolution) {
  require_normalized(state);
  if (resolution < 1)
    throw Error(ErrorCode::ConfigInvalid, "husimi resolution must be >= 1");

  HusimiGrid grid;
  grid.resolution = resolution;
  if (window.automatic) {
    const double radius =
        1.5 * (std::sqrt(number_moments(state).mean) + 2.0);
    grid.re_min = grid.im_min = -radius;
    grid.re_max = grid.im_max = radius;
  } else {
    if (!(window.re_max > window.re_min) || !(window.im_max > window.im_min))
      throw Error(ErrorCode::ConfigInvalid, "husimi window is empty");
    grid.re_min = window.re_min;
    grid.re_max = window.re_max;
    grid.im_min = window.im_min;
    grid.im_max = window.im_max;
  }

  // Pad the workspace so the farthest sampled |beta> fits with tail < 1e-12.
  const double corner =
      std::hypot(std::max(std::abs(grid.re_min), std::abs(grid.re_max)),
                 std::max(std::abs(grid.im_min), std::abs(grid.im_max)));
  Eigen::Index need = recommended_dim(state.dim() - 1, corner);
  while (coherent_tail_bound(corner * corner, need) > 1e-13) need += 8;
  const State padded = need > state.dim() ? embed(state, need) : state;

  const double d_re = (grid.re_max - grid.re_min) / resolution;
  const double d_im = (grid.im_max - grid.im_min) / resolution;
  grid.values.resize(Eigen::Index(resolution) * resolution);
  for (int i = 0; i < resolution; ++i) {
    const double re = grid.re_min + (i + 0.5) * d_re;
    for (int j = 0; j < resolution; ++j) {
      const double im = grid.im_min + (j + 0.5) * d_im;
      const auto amp = coherent_overlap(padded, std::complex<double>(re, im));
      grid.values[Eigen::Index(i) * resolution + j] = std::norm(amp) / M_PI;
    }
  }
  return grid;
}

std::vector<SweepRow> scaling_sweep(const std::vector<int>& n_values,
                                    const EnsembleSpec& ensemble) {
  if (n_values.empty())
    throw Error(ErrorCode::ConfigInvalid, "sweep needs at least one N");
  if (!std::is_sorted(n_values.begin(), n_values.end()))
    throw Error(ErrorCode::ConfigInvalid, "sweep N values must be ascending");

  std::vector<SweepRow> rows;
  for (int n : n_values) {
    EnsembleSpec spec = ensemble;
    spec.base.n_top = n;
    const auto states = ensemble_states(spec);

    SweepRow mean{};
    mean.n = n;
    mean.realization = -1;
    int count = 0;
    for (int j = 0; j < int(states.size()); ++j) {
      const StatsReport rep = compute_report(states[j]);
      SweepRow row{n,       j,          rep.mean_n, rep.delta_n, rep.mandel_q,
                   rep.g2,  rep.x1_var, rep.x2_var, rep.entropy};
      rows.push_back(row);
      // Welford running means, stable across large ensembles.
      ++count;
      const double k = 1.0 / count;
      mean.mean_n += (row.mean_n - mean.mean_n) * k;
      mean.delta_n += (row.delta_n - mean.delta_n) * k;
      mean.mandel_q += (row.mandel_q - mean.mandel_q) * k;
      mean.g2 += (row.g2 - mean.g2) * k;
      mean.x1_var += (row.x1_var - mean.x1_var) * k;
      mean.x2_var += (row.x2_var - mean.x2_var) * k;
      mean.entropy += (row.entropy - mean.entropy) * k;
    }
    if (states.size() > 1) rows.push_back(mean);
  }
  return rows;
}

}  // namespace fock
