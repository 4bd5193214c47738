#include "fockgen/engineer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <vector>

namespace fock {

namespace {

using Complex = std::complex<double>;

Complex horner(const Eigen::VectorXcd& coeffs, Complex z) {
  Complex p(0);
  for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k)
    p = p * z + coeffs[k];
  return p;
}

Complex horner_derivative(const Eigen::VectorXcd& coeffs, Complex z) {
  Complex p(0);
  for (Eigen::Index k = coeffs.size() - 1; k >= 1; --k)
    p = p * z + coeffs[k] * double(k);
  return p;
}

// Orders by (|root|, phase). Moduli within 1e-10 relative are treated as
// ties and resolved by phase alone, so conjugate pairs (whose computed
// moduli can differ by an ulp) always come out in the same order.
void sort_canonical(Eigen::VectorXcd& roots) {
  std::vector<Complex> v(roots.data(), roots.data() + roots.size());
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return std::abs(a) < std::abs(b);
  });
  size_t group = 0;
  for (size_t i = 1; i <= v.size(); ++i) {
    const bool tied =
        i < v.size() &&
        std::abs(v[i]) - std::abs(v[i - 1]) <=
            1e-10 * std::max({std::abs(v[i]), std::abs(v[i - 1]), 1e-300});
    if (!tied) {
      std::sort(v.begin() + group, v.begin() + i, [](Complex a, Complex b) {
        return std::arg(a) < std::arg(b);
      });
      group = i;
    }
  }
  for (Eigen::Index i = 0; i < roots.size(); ++i) roots[i] = v[size_t(i)];
}

// Monic polynomial with the given roots, ascending coefficients.
Eigen::VectorXcd poly_from_roots(const Eigen::VectorXcd& roots) {
  Eigen::VectorXcd q(roots.size() + 1);
  q.setZero();
  q[0] = Complex(1);
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    for (Eigen::Index j = k + 1; j >= 1; --j)
      q[j] = q[j - 1] - roots[k] * q[j];
    q[0] = -roots[k] * q[0];
  }
  return q;
}

// y <- exp(K) y for the antisymmetric tridiagonal generator with
// superdiagonal -c / subdiagonal +c, by scaled repeated Taylor application:
// exp(K) = (exp(K / 2^s))^(2^s) with the inner factor summed to machine
// precision (norm after scaling <= 1/2).
void apply_tridiag_exp(const Eigen::VectorXd& c, Eigen::VectorXd& y) {
  const Eigen::Index m = y.size() - 1;
  double norm1 = 0.0;
  for (Eigen::Index i = 0; i <= m; ++i) {
    double col = 0.0;
    if (i > 0) col += std::abs(c[i - 1]);
    if (i < m) col += std::abs(c[i]);
    norm1 = std::max(norm1, col);
  }
  int s = 0;
  if (norm1 > 0.5) s = int(std::ceil(std::log2(norm1 / 0.5)));
  const double scale = std::pow(2.0, -s);

  Eigen::VectorXd term(m + 1), next(m + 1);
  for (long rep = 0; rep < (1L << s); ++rep) {
    term = y;
    for (int j = 1; j <= 24; ++j) {
      next.setZero();
      for (Eigen::Index i = 0; i <= m; ++i) {
        double v = 0.0;
        if (i > 0) v += c[i - 1] * term[i - 1];
        if (i < m) v -= c[i] * term[i + 1];
        next[i] = v * scale / double(j);
      }
      term = next;
      y += term;
      if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
  }
}

// Beam-splitter amplitudes <M, 0| exp(theta (a^dag b - a b^dag)) |M-1, 1>
// for M = 1..total_max, obtained by exponentiating the tridiagonal generator
// within each total-photon sector against the |M-1, 1> column.
std::vector<double> bs_step_amplitudes(double theta, Eigen::Index total_max) {
  std::vector<double> amp(size_t(total_max) + 1, 0.0);
  for (Eigen::Index m = 1; m <= total_max; ++m) {
    Eigen::VectorXd c(m);
    for (Eigen::Index i = 0; i < m; ++i)
      c[i] = theta * std::sqrt(double(i + 1) * double(m - i));
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m + 1);
    y[m - 1] = 1.0;
    apply_tridiag_exp(c, y);
    amp[size_t(m)] = y[m];
  }
  return amp;
}

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void validate_recipe_shape(const Recipe& recipe) {
  if (!(recipe.transmittance > 0.0) || !(recipe.transmittance < 1.0))
    throw Error(ErrorCode::BadTransmittance,
                "recipe transmittance must lie in (0,1), got " +
                    std::to_string(recipe.transmittance));
  if (recipe.alphas.size() != recipe.roots.size() + 1)
    throw Error(ErrorCode::ConfigInvalid,
                "recipe needs N+1 displacement parameters for N roots");
}

double log_sum_exp(const std::vector<double>& logs) {
  double top = -std::numeric_limits<double>::infinity();
  for (double l : logs) top = std::max(top, l);
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - top);
  return top + std::log(acc);
}

}  // namespace

Eigen::VectorXcd factorization_coefficients(const Eigen::VectorXcd& coeffs) {
  Eigen::VectorXcd d(coeffs.size());
  for (Eigen::Index n = 0; n < coeffs.size(); ++n)
    d[n] = std::conj(coeffs[n]) * std::exp(-0.5 * std::lgamma(double(n) + 1.0));
  return d;
}

Eigen::VectorXcd characteristic_roots(const Eigen::VectorXcd& coeffs) {
  const Eigen::Index n = coeffs.size() - 1;
  if (n < 0)
    throw Error(ErrorCode::ConfigInvalid, "empty coefficient vector");
  const double max_c = coeffs.cwiseAbs().maxCoeff();
  if (!(max_c > 0.0) || std::abs(coeffs[n]) < 1e-9 * max_c)
    throw Error(ErrorCode::LeadingCoefficientZero,
                "leading coefficient too small relative to the others");
  if (n == 0) return Eigen::VectorXcd(0);

  Eigen::VectorXcd roots(n);
  if (n == 1) {
    roots[0] = -coeffs[0] / coeffs[1];
    return roots;
  }

  // Balance: scale the variable so the monic coefficients are O(1).
  double scale = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double ck = std::abs(coeffs[k] / coeffs[n]);
    if (ck > 0.0)
      scale = std::max(scale, std::pow(ck, 1.0 / double(n - k)));
  }
  if (scale == 0.0) {
    roots.setZero();  // x^n: all roots at the origin
    return roots;
  }

  Eigen::VectorXcd b(n + 1);
  for (Eigen::Index k = 0; k <= n; ++k)
    b[k] = coeffs[k] / coeffs[n] * std::pow(scale, double(k - n));

  // Initial guesses on a circle with an angular offset breaking symmetry.
  Eigen::VectorXcd w(n);
  for (Eigen::Index j = 0; j < n; ++j)
    w[j] = std::polar(1.0 + 0.3 * double(j) / double(n),
                      2.0 * M_PI * double(j) / double(n) + 0.4);

  bool converged = false;
  for (int iter = 0; iter < 200 && !converged; ++iter) {
    converged = true;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex p = horner(b, w[j]);
      const Complex dp = horner_derivative(b, w[j]);
      if (std::abs(p) == 0.0) continue;
      if (std::abs(dp) == 0.0) {
        w[j] *= Complex(1.0 + 1e-6, 1e-6);
        converged = false;
        continue;
      }
      const Complex ratio = p / dp;
      Complex repel(0);
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == j) continue;
        Complex diff = w[j] - w[k];
        if (std::abs(diff) < 1e-300) diff = Complex(1e-12, 1e-12);
        repel += Complex(1) / diff;
      }
      const Complex denom = Complex(1) - ratio * repel;
      const Complex delta = (std::abs(denom) == 0.0) ? ratio : ratio / denom;
      w[j] -= delta;
      if (std::abs(delta) > 1e-14 * std::max(1.0, std::abs(w[j])))
        converged = false;
    }
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    Complex z = w[j] * scale;
    for (int step = 0; step < 3; ++step) {  // Newton polish on the raw poly
      const Complex p = horner(coeffs, z);
      const Complex dp = horner_derivative(coeffs, z);
      if (std::abs(dp) == 0.0) break;
      z -= p / dp;
    }
    roots[j] = z;
  }

  const double coeff_sum = coeffs.cwiseAbs().sum();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double tol = 1e-10 * coeff_sum *
                       std::pow(std::max(1.0, std::abs(roots[j])), double(n));
    if (!(std::abs(horner(coeffs, roots[j])) <= tol))
      throw Error(ErrorCode::NoConvergence,
                  "root residual above tolerance after iteration cap");
  }

  sort_canonical(roots);
  return roots;
}

Eigen::VectorXcd displacement_parameters(const Eigen::VectorXcd& roots,
                                         double transmittance) {
  if (!(transmittance > 0.0) || !(transmittance < 1.0))
    throw Error(ErrorCode::BadTransmittance,
                "transmittance must lie in (0,1), got " +
                    std::to_string(transmittance));
  const Eigen::Index n = roots.size();
  Eigen::VectorXcd alphas(n + 1);
  if (n > 0) {
    alphas[n] = roots[n - 1];
    for (Eigen::Index k = 2; k <= n; ++k)
      alphas[k - 1] = std::pow(transmittance, double(n - k + 1)) *
                      (roots[k - 2] - roots[k - 1]);
    Complex head(0);
    for (Eigen::Index l = 1; l <= n; ++l)
      head -= std::pow(transmittance, -double(l)) * alphas[l];
    alphas[0] = head;
  } else {
    alphas[0] = Complex(0);
  }
  return alphas;
}

State chain_state(const Recipe& recipe, Eigen::Index dim) {
  validate_recipe_shape(recipe);
  const double t = recipe.transmittance;
  const double r = std::sqrt(1.0 - t * t);
  State u = State::vacuum(dim);
  double leak = 0.0;
  for (Eigen::Index k = 0; k < recipe.steps(); ++k) {
    u = displace(u, recipe.alphas[k]);
    leak += u.leakage;
    u = apply_attenuation(u, t);
    u = apply_creation(u);
    leak += u.leakage;
    u.amplitudes *= r;
  }
  u = displace(u, recipe.alphas[recipe.steps()]);
  leak += u.leakage;
  u.leakage = leak;
  return u;
}

SimulationResult simulate_recipe(const Recipe& recipe, Eigen::Index dim) {
  validate_recipe_shape(recipe);
  if (dim < recipe.coeffs.size() || dim < 2)
    throw Error(ErrorCode::ConfigInvalid,
                "workspace dim too small for the recipe");
  const Eigen::Index n_steps = recipe.steps();
  State s = State::vacuum(dim);
  double probability = 1.0;
  double leak = 0.0;

  if (n_steps > 0) {
    const double theta = std::acos(recipe.transmittance);
    const auto step_amp = bs_step_amplitudes(theta, dim);
    for (Eigen::Index k = 0; k < n_steps; ++k) {
      s = displace(s, recipe.alphas[k]);
      leak += s.leakage;
      Eigen::VectorXcd next = Eigen::VectorXcd::Zero(dim);
      for (Eigen::Index m = 1; m < dim; ++m)
        next[m] = step_amp[size_t(m)] * s.amplitudes[m - 1];
      leak += std::norm(step_amp[size_t(dim)] * s.amplitudes[dim - 1]);
      const double p_step = next.squaredNorm();
      if (p_step < 1e-300)
        throw Error(ErrorCode::ZeroProbability,
                    "post-selection probability vanished at step " +
                        std::to_string(k + 1));
      probability *= p_step;
      s.amplitudes = next / std::sqrt(p_step);
    }
  }
  s = displace(s, recipe.alphas[n_steps]);
  leak += s.leakage;
  if (leak > kLeakageTolerance)
    throw Error(ErrorCode::TruncationOverflow,
                "simulation leaked norm^2 " + std::to_string(leak));
  s.leakage = leak;
  return {normalize(s), probability};
}

double success_probability(const Recipe& recipe, Eigen::Index dim) {
  return simulate_recipe(recipe, dim).probability;
}

double chain_success_probability(const Recipe& recipe, Eigen::Index dim) {
  return squared_norm(chain_state(recipe, dim));
}

double chain_log_probability(const Eigen::VectorXcd& alphas,
                             double transmittance) {
  const double t = transmittance;
  if (!(t > 0.0) || !(t < 1.0))
    throw Error(ErrorCode::BadTransmittance,
                "transmittance must lie in (0,1)");
  const Eigen::Index n = alphas.size() - 1;

  // Running form: scalar * prod_i (a^dag - sigma_i) D(shift) |0>.
  double log_mag = 0.0;
  Complex shift(0);
  Eigen::VectorXcd sigma(n);
  Eigen::Index filled = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex alpha = alphas[k];
    shift += alpha;                                     // D(alpha_k)
    sigma.head(filled).array() += std::conj(alpha);
    log_mag += double(filled) * std::log(t) +           // T^{n_hat}
               std::norm(shift) * (t * t - 1.0) / 2.0;
    sigma.head(filled) /= t;
    shift *= t;
    sigma[filled++] = Complex(0);                       // a^dag
  }
  shift += alphas[n];                                   // final displacement
  sigma.array() += std::conj(alphas[n]);
  sigma.array() -= std::conj(shift);  // absorb any residual displacement

  const Eigen::VectorXcd q = poly_from_roots(sigma);
  std::vector<double> logs(size_t(q.size()));
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    const double aj = std::abs(q[j]);
    logs[size_t(j)] = (aj > 0.0)
                          ? 2.0 * std::log(aj) + std::lgamma(double(j) + 1.0)
                          : -std::numeric_limits<double>::infinity();
  }
  const double log_poly_norm2 = log_sum_exp(logs);
  return 2.0 * log_mag + double(n) * std::log1p(-t * t) + log_poly_norm2;
}

namespace {

// Workspace needed by a chain with these step displacements. Each step
// displaces the running center before the attenuation pulls it back, so the
// workspace has to hold the farthest displaced intermediate (plus the
// n-spread the creation steps add), not just the largest single alpha.
Eigen::Index chain_workspace_dim(const Eigen::VectorXcd& alphas, double t) {
  const Eigen::Index n = alphas.size() - 1;
  double reach = 0.0;
  Complex center(0);
  for (Eigen::Index k = 0; k < n; ++k) {
    center += alphas[k];
    reach = std::max(reach, std::abs(center));
    center *= t;
  }
  center += alphas[n];
  reach = std::max(reach, std::abs(center));
  const double spread = reach + std::sqrt(double(n) + 1.0);
  return Eigen::Index(std::ceil(spread * spread + 6.0 * spread)) + n + 1 + 8;
}

}  // namespace

Eigen::Index auto_workspace_dim(const Recipe& recipe) {
  const double t =
      (recipe.transmittance > 0.0 && recipe.transmittance < 1.0)
          ? recipe.transmittance
          : 1.0;
  return chain_workspace_dim(recipe.alphas, t);
}

namespace {

double grid_log_probability(const Eigen::VectorXcd& roots, double t,
                            Eigen::Index max_dim) {
  const Eigen::VectorXcd alphas = displacement_parameters(roots, t);
  if (chain_workspace_dim(alphas, t) > max_dim)
    return -std::numeric_limits<double>::infinity();
  return chain_log_probability(alphas, t);
}

}  // namespace

std::pair<double, double> optimize_transmittance(
    const Eigen::VectorXcd& coeffs, const TransmittanceGrid& grid,
    Eigen::Index max_workspace_dim) {
  if (!(grid.lo > 0.0) || !(grid.lo < grid.hi) || !(grid.hi < 1.0) ||
      !(grid.step > 0.0))
    throw Error(ErrorCode::ConfigInvalid,
                "transmittance grid must satisfy 0 < lo < hi < 1, step > 0");
  const Eigen::VectorXcd roots =
      characteristic_roots(factorization_coefficients(coeffs));

  const auto objective = [&](double t) {
    return grid_log_probability(roots, t, max_workspace_dim);
  };

  double best_t = grid.lo;
  double best_log = objective(grid.lo);
  for (double t = grid.lo + grid.step; t <= grid.hi + 1e-15; t += grid.step) {
    const double clamped = std::min(t, grid.hi);
    const double value = objective(clamped);
    if (value > best_log) {
      best_log = value;
      best_t = clamped;
    }
  }

  // Golden-section refinement around the best grid point.
  double lo = std::max(grid.lo, best_t - grid.step);
  double hi = std::min(grid.hi, best_t + grid.step);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = objective(c);
  double fd = objective(d);
  while (hi - lo > 1e-4) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = objective(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double f_mid = objective(mid);
  if (f_mid > best_log) {
    best_t = mid;
    best_log = f_mid;
  }
  if (!std::isfinite(best_log))
    throw Error(ErrorCode::TruncationOverflow,
                "no transmittance in the grid keeps the chain inside a "
                "workspace of " + std::to_string(max_workspace_dim) +
                "; the target needs displacements too large to verify");
  return {best_t, std::exp(best_log)};
}

Recipe plan(const State& target, const PlanOptions& options) {
  if (!is_normalized(target))
    throw Error(ErrorCode::NotNormalized,
                "plan requires a normalized target");
  // Trim trailing numerically-zero amplitudes to find the true top index.
  const double max_amp = target.amplitudes.cwiseAbs().maxCoeff();
  Eigen::Index top = target.dim() - 1;
  while (top > 0 && std::abs(target.amplitudes[top]) <= 1e-14 * max_amp) --top;
  Eigen::VectorXcd coeffs = target.amplitudes.head(top + 1);
  if (top > 0 && std::abs(coeffs[top]) < 1e-9)
    throw Error(ErrorCode::LeadingCoefficientZero,
                "|C_N| below 1e-9; the characteristic polynomial degenerates");

  Recipe recipe;
  recipe.coeffs = coeffs;

  if (top == 0) {  // the target is |0> up to a global phase
    recipe.roots = Eigen::VectorXcd(0);
    recipe.alphas = Eigen::VectorXcd::Zero(1);
    recipe.transmittance = options.fixed_transmittance.value_or(
        0.5 * (options.grid.lo + options.grid.hi));
    recipe.success_prob = 1.0;
    recipe.residual = 0.0;
    return recipe;
  }

  const Eigen::VectorXcd d = factorization_coefficients(coeffs);
  recipe.roots = characteristic_roots(d);
  recipe.residual = 0.0;
  for (Eigen::Index k = 0; k < recipe.roots.size(); ++k)
    recipe.residual = std::max(recipe.residual,
                               std::abs(horner(d, recipe.roots[k])));

  if (options.fixed_transmittance) {
    recipe.transmittance = *options.fixed_transmittance;
    if (!(recipe.transmittance > 0.0) || !(recipe.transmittance < 1.0))
      throw Error(ErrorCode::BadTransmittance,
                  "fixed transmittance must lie in (0,1)");
  } else {
    recipe.transmittance =
        optimize_transmittance(coeffs, options.grid, options.max_workspace_dim)
            .first;
  }
  recipe.alphas = displacement_parameters(recipe.roots, recipe.transmittance);

  Eigen::Index dim = options.workspace_dim;
  if (dim <= 0) {
    dim = auto_workspace_dim(recipe);
    if (dim > options.max_workspace_dim)
      throw Error(ErrorCode::TruncationOverflow,
                  "recipe needs workspace dim " + std::to_string(dim) +
                      " beyond the cap of " +
                      std::to_string(options.max_workspace_dim));
  }

  // Verification ladder: a convention bug shows up as a dim-independent
  // fidelity/probability miss, while truncation-limited precision improves
  // with the workspace; retry the latter until the cap decides.
  SimulationResult sim;
  for (int attempt = 0;; ++attempt) {
    const Eigen::Index next = Eigen::Index(double(dim) * 1.4) + 16;
    const bool can_grow =
        attempt < 4 && next <= 2 * options.max_workspace_dim;
    try {
      sim = simulate_recipe(recipe, dim);
      const double chain_p = chain_success_probability(recipe, dim);
      const double mismatch = std::abs(chain_p - sim.probability) /
                              std::max(sim.probability, 1e-300);
      if (mismatch > 1e-3)
        throw Error(ErrorCode::VerificationFailed,
                    "success-probability paths disagree grossly: " +
                        fmt_g(sim.probability) + " vs " + fmt_g(chain_p));
      if (mismatch > 1e-9) {
        if (can_grow) {
          dim = next;
          continue;
        }
        throw Error(ErrorCode::TruncationOverflow,
                    "success-probability paths still disagree at the "
                    "workspace cap: " + fmt_g(sim.probability) + " vs " +
                        fmt_g(chain_p));
      }
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TruncationOverflow || !can_grow) throw;
      dim = next;
    }
  }

  const State padded = embed(State{coeffs, 0.0}, dim);
  const double fid = overlap_fidelity(padded, sim.state);
  if (!(fid >= 1.0 - 1e-6))
    throw Error(ErrorCode::VerificationFailed,
                "oracle fidelity " + fmt_g(fid) +
                    " signals a convention or convergence bug");

  recipe.success_prob = sim.probability;
  return recipe;
}

std::string format_recipe_table(const Recipe& recipe) {
  std::string out =
      "  k   |beta_k|   phi_beta_k   |alpha_k|   phi_alpha_k\n";
  char line[128];
  for (Eigen::Index k = 0; k < recipe.alphas.size(); ++k) {
    if (k < recipe.roots.size()) {
      std::snprintf(line, sizeof(line),
                    "%3lld   %8.3f   %10.3f   %9.3f   %11.3f\n",
                    (long long)(k + 1), std::abs(recipe.roots[k]),
                    std::arg(recipe.roots[k]), std::abs(recipe.alphas[k]),
                    std::arg(recipe.alphas[k]));
    } else {
      std::snprintf(line, sizeof(line),
                    "%3lld   %8s   %10s   %9.3f   %11.3f\n",
                    (long long)(k + 1), "", "", std::abs(recipe.alphas[k]),
                    std::arg(recipe.alphas[k]));
    }
    out += line;
  }
  return out;
}

}  // namespace fock
