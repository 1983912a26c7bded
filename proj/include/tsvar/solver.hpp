#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tsvar/calculus.hpp"
#include "tsvar/errors.hpp"
#include "tsvar/variational.hpp"

namespace tsvar {

struct SolverConfig {
  int max_iterations = 10000;
  double gradient_tolerance = 1e-10;  // sup-norm of the interior gradient
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  std::uint64_t seed = 0;
  bool maximize = false;  // minimize −J instead of J

  void validate() const {
    if (max_iterations < 0) throw ValidationError("max_iterations must be non-negative");
    if (!(gradient_tolerance > 0)) throw ValidationError("gradient_tolerance must be positive");
    if (!(armijo_c > 0 && armijo_c < 1)) throw ValidationError("armijo_c must lie in (0,1)");
    if (!(backtrack_factor > 0 && backtrack_factor < 1)) {
      throw ValidationError("backtrack_factor must lie in (0,1)");
    }
    if (!(initial_step > 0) || !std::isfinite(initial_step)) {
      throw ValidationError("initial_step must be positive");
    }
  }
};

struct SolveResult {
  GridFunction y;
  double j_value;
  double gradient_norm;
  int iterations;
  bool converged;
  ELReport el1;
  ELReport el2;
  /// J after every accepted step, starting with J(y0).
  std::vector<double> j_history;
};

/// Smallest step the line search tries before giving up.
inline constexpr double kMinStep = 1e-300;

/// Relative J tolerance under which the line search switches to the
/// gradient-based acceptance test (a few ulps).
inline constexpr double kRoundingSlack = 16 * std::numeric_limits<double>::epsilon();

/// Steepest descent on the interior values of y with Armijo backtracking.
///
/// The gradient is the exact first variation along the hat functions. The
/// first trial step is config.initial_step; later trial steps use the
/// Barzilai-Borwein length of the previous move, then backtrack until the
/// Armijo condition holds. Near the rounding floor of J a step is also
/// accepted when J stays within a few ulps and the gradient norm drops.
/// Running out of iterations is reported through `converged`, not thrown.
inline SolveResult solve(const VariationalProblem& p, const SolverConfig& config = {},
                         std::optional<GridFunction> y0 = std::nullopt) {
  config.validate();
  GridFunction start = y0 ? *y0 : p.chord();
  if (!(start.scale() == p.scale())) throw ValidationError("initial guess is not on the problem's scale");
  if (!p.satisfies_boundary(start)) throw ValidationError("initial guess violates the boundary conditions");

  const double sign = config.maximize ? -1.0 : 1.0;
  std::vector<double> x(start.values().begin() + 1, start.values().end() - 1);
  auto objective = [&](const std::vector<double>& z) { return sign * j_product(p, p.with_interior(z)); };
  auto gradient = [&](const std::vector<double>& z) {
    std::vector<double> g = first_variation_gradient(p, p.with_interior(z));
    for (double& gk : g) gk *= sign;
    return g;
  };
  auto dot = [](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
    return s;
  };

  double phi = objective(x);
  std::vector<double> grad = gradient(x);
  std::vector<double> history{sign * phi};
  double step = config.initial_step;
  int iterations = 0;
  bool converged = false;

  while (true) {
    if (sup_norm(grad) <= config.gradient_tolerance) {
      converged = true;
      break;
    }
    if (iterations >= config.max_iterations) break;

    const double g2 = dot(grad, grad);
    double t = step;
    std::vector<double> trial(x.size());
    double phi_trial = 0.0;
    bool accepted = false;
    bool moved = false;
    std::string last_domain_error;
    std::optional<std::vector<double>> trial_grad;
    while (t >= kMinStep) {
      moved = false;
      for (std::size_t k = 0; k < x.size(); ++k) {
        trial[k] = x[k] - t * grad[k];
        moved = moved || trial[k] != x[k];
      }
      if (!moved) break;
      bool domain_failure = false;
      try {
        phi_trial = objective(trial);
      } catch (const DomainError& e) {
        domain_failure = true;
        last_domain_error = e.what();
      }
      if (!domain_failure && phi_trial <= phi - config.armijo_c * t * g2 && phi_trial <= phi) {
        accepted = true;
        break;
      }
      // Approximate Wolfe test: once J no longer resolves the decrease, accept
      // a step that keeps J within rounding and shrinks the gradient.
      if (!domain_failure && phi_trial <= phi + kRoundingSlack * std::abs(phi)) {
        std::vector<double> g_trial = gradient(trial);
        const double slope = -dot(g_trial, grad);
        if (slope >= -0.9 * g2 && slope <= 0.8 * g2 && sup_norm(g_trial) < sup_norm(grad)) {
          trial_grad = std::move(g_trial);
          accepted = true;
          break;
        }
      }
      t *= config.backtrack_factor;
      if (t < kMinStep && domain_failure) {
        throw DomainError("line search step underflow after Lagrangian domain errors; last: " +
                          last_domain_error);
      }
    }
    if (!accepted) break;  // no representable decrease left

    std::vector<double> next_grad = trial_grad ? std::move(*trial_grad) : gradient(trial);
    std::vector<double> s(x.size()), yk(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      s[k] = trial[k] - x[k];
      yk[k] = next_grad[k] - grad[k];
    }
    const double sy = dot(s, yk);
    const double bb = sy > 0 ? dot(s, s) / sy : config.initial_step;
    step = std::isfinite(bb) && bb > 0 ? bb : config.initial_step;

    x = std::move(trial);
    phi = phi_trial;
    grad = std::move(next_grad);
    history.push_back(sign * phi);
    ++iterations;
  }

  GridFunction y = p.with_interior(x);
  const double gnorm = sup_norm(grad);
  return SolveResult{y,
                     j_product(p, y),
                     gnorm,
                     iterations,
                     converged,
                     el_residual_1(p, y),
                     el_residual_2(p, y),
                     std::move(history)};
}

struct OracleResult {
  GridFunction y;
  double j_value;
  double cell_width;  ///< spacing of the refinement grid
};

/// Exhaustive search over the interior values (at most 3 interior points):
/// a `resolution`-per-axis grid over [lower, upper], then one pass of
/// `resolution` points per axis across the best coarse cell. Ties go to the
/// lexicographically smallest interior vector; points where a Lagrangian
/// raises a domain error are skipped.
inline OracleResult brute_force_oracle(const VariationalProblem& p, double lower, double upper,
                                       int resolution) {
  const std::size_t k = p.scale().size() - 2;
  if (k > 3) throw ValidationError("brute_force_oracle supports at most 3 interior points");
  if (resolution < 11) throw ValidationError("brute_force_oracle needs resolution >= 11");
  if (!(lower < upper)) throw ValidationError("brute_force_oracle needs lower < upper");

  const auto res = static_cast<std::size_t>(resolution);
  std::vector<double> best;
  double best_j = INFINITY;

  auto sweep = [&](const std::vector<double>& lo, double width) {
    std::vector<std::size_t> idx(k, 0);
    std::vector<double> z(k);
    while (true) {
      for (std::size_t a = 0; a < k; ++a) {
        z[a] = lo[a] + width * static_cast<double>(idx[a]) / static_cast<double>(res - 1);
      }
      try {
        const double j = j_product(p, p.with_interior(z));
        if (j < best_j) {
          best_j = j;
          best = z;
        }
      } catch (const DomainError&) {
      }
      // Odometer with the last axis fastest: lexicographic order.
      std::size_t a = k;
      bool wrapped = true;
      while (a > 0) {
        --a;
        if (++idx[a] < res) {
          wrapped = false;
          break;
        }
        idx[a] = 0;
      }
      if (wrapped) return;
    }
  };

  sweep(std::vector<double>(k, lower), upper - lower);
  if (best.empty()) throw DomainError("brute_force_oracle: objective undefined on the whole grid");
  const double h = (upper - lower) / static_cast<double>(res - 1);
  std::vector<double> lo(k);
  for (std::size_t a = 0; a < k; ++a) lo[a] = best[a] - h;
  sweep(lo, 2.0 * h);
  return {p.with_interior(best), best_j, 2.0 * h / static_cast<double>(res - 1)};
}

enum class AuditVerdict { local_min, local_max, indeterminate };

inline constexpr std::string_view to_string(AuditVerdict v) noexcept {
  switch (v) {
    case AuditVerdict::local_min: return "local-min evidence";
    case AuditVerdict::local_max: return "local-max evidence";
    case AuditVerdict::indeterminate: return "saddle/indeterminate";
  }
  return "?";
}

struct AuditRecord {
  double j_hat = 0.0;
  double j_min = 0.0;
  double j_max = 0.0;
  double fraction_below = 0.0;  ///< samples with J < J(ŷ) − 1e-12
  double fraction_above = 0.0;  ///< samples with J > J(ŷ) + 1e-12
  int trials = 0;
  AuditVerdict verdict = AuditVerdict::indeterminate;
};

/// Samples boundary-respecting perturbations y = ŷ + η with ‖η‖₁,∞ ≤ radius and
/// compares J(y) against J(ŷ).
inline AuditRecord perturbation_audit(const VariationalProblem& p, const SolveResult& result,
                                      double radius, int trials, std::uint64_t seed) {
  if (!result.converged) throw ValidationError("perturbation_audit needs a converged result");
  if (!(radius > 0)) throw ValidationError("perturbation_audit needs a positive radius");
  constexpr double kMargin = 1e-12;
  const TimeScale& ts = p.scale();
  const std::size_t k = ts.size() - 2;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> fraction(0.0, 1.0);

  AuditRecord rec;
  rec.j_hat = j_product(p, result.y);
  rec.j_min = INFINITY;
  rec.j_max = -INFINITY;
  rec.trials = trials;
  int below = 0;
  int above = 0;
  std::vector<double> eta(ts.size(), 0.0);
  for (int n = 0; n < trials; ++n) {
    double norm = 0.0;
    do {
      for (std::size_t a = 1; a <= k; ++a) eta[a] = coord(rng);
      norm = c1_diamond_norm(GridFunction(ts, eta));
    } while (norm == 0.0);
    const double scale = radius * (1.0 - fraction(rng)) / norm;  // in (0, radius]
    std::vector<double> values(result.y.values().begin(), result.y.values().end());
    for (std::size_t a = 1; a <= k; ++a) values[a] += scale * eta[a];
    const double j = j_product(p, GridFunction(ts, std::move(values)));
    rec.j_min = std::min(rec.j_min, j);
    rec.j_max = std::max(rec.j_max, j);
    if (j < rec.j_hat - kMargin) ++below;
    if (j > rec.j_hat + kMargin) ++above;
  }
  if (trials > 0) {
    rec.fraction_below = static_cast<double>(below) / trials;
    rec.fraction_above = static_cast<double>(above) / trials;
  }
  if (below == 0 && above > 0) {
    rec.verdict = AuditVerdict::local_min;
  } else if (above == 0 && below > 0) {
    rec.verdict = AuditVerdict::local_max;
  } else {
    rec.verdict = AuditVerdict::indeterminate;
  }
  return rec;
}

}  // namespace tsvar
