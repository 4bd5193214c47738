// Photon-counting statistics of a single mode: number distribution and its
// moments, Mandel Q, g2(0), quadrature spreads, Shannon entropy, Husimi Q
// grids, and the N-scaling ensemble sweeps.
#pragma once

#include <utility>
#include <vector>

#include "fockgen/fock.hpp"
#include "fockgen/random_state.hpp"

namespace fock {

struct StatsReport {
  Eigen::VectorXd p;   // photon distribution P_n = |a_n|^2
  double mean_n = 0;   // <n>
  double delta_n = 0;  // sqrt(<n^2> - <n>^2)
  double mandel_q = 0;
  double g2 = 0;
  double x1_var = 0;   // standard deviation of X1 = (a + a^dag)/2
  double x2_var = 0;   // standard deviation of X2 = (a - a^dag)/2i
  double entropy = 0;  // S = -sum P_n ln P_n
  bool squeezed = false;
};

Eigen::VectorXd photon_distribution(const State& state);

// (<n>, sqrt(<n^2> - <n>^2)).
std::pair<double, double> mean_and_variance(const State& state);

// (Var n - <n>) / <n>. Undefined on vacuum.
double mandel_q(const State& state);

// (<n^2> - <n>) / <n>^2. Undefined on vacuum.
double g2_zero(const State& state);

// (Delta X1, Delta X2); a value below 0.5 signals squeezing.
std::pair<double, double> quadrature_variances(const State& state);

double shannon_entropy(const State& state);

// Full report; propagates VacuumUndefined for states with <n> ~ 0.
StatsReport compute_report(const State& state);

struct HusimiWindow {
  bool automatic = true;
  double re_min = 0, re_max = 0, im_min = 0, im_max = 0;

  static HusimiWindow square(double re_min, double re_max, double im_min,
                             double im_max) {
    return HusimiWindow{false, re_min, re_max, im_min, im_max};
  }
};

struct HusimiGrid {
  double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
  int resolution = 0;
  // Row-major over (re, im) cell centers: values[i_re * resolution + i_im].
  Eigen::VectorXd values;

  double cell_area() const {
    return (re_max - re_min) * (im_max - im_min) /
           (double(resolution) * double(resolution));
  }
  double riemann_integral() const { return values.sum() * cell_area(); }
};

// Q(beta) = |<beta|state>|^2 / pi sampled at cell centers. The automatic
// window is the square covering |beta| <= 1.5 (sqrt(<n>) + 2); the state is
// padded internally so every sampled beta fits the workspace.
HusimiGrid husimi(const State& state, const HusimiWindow& window,
                  int resolution);

struct SweepRow {
  int n = 0;
  int realization = 0;  // -1 marks the ensemble-mean row
  double mean_n = 0, delta_n = 0, mandel_q = 0, g2 = 0;
  double x1_var = 0, x2_var = 0, entropy = 0;
};

// For each N (ascending): one row per realization followed by a Welford
// ensemble-mean row (omitted when realizations == 1, where it would repeat
// the single row). template.base.n_top is replaced by each swept N.
std::vector<SweepRow> scaling_sweep(const std::vector<int>& n_values,
                                    const EnsembleSpec& ensemble);

}  // namespace fock
