#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "tsvar/errors.hpp"
#include "tsvar/grid_function.hpp"
#include "tsvar/timescale.hpp"

namespace tsvar {

namespace detail {

template <Kappa K>
constexpr Kappa delta_result_kind() {
  if constexpr (K == Kappa::full) {
    return Kappa::upper;
  } else {
    static_assert(K == Kappa::upper, "delta derivative is defined for full and upper-kappa functions");
    return Kappa::upper2;
  }
}

template <Kappa K>
constexpr Kappa nabla_result_kind() {
  if constexpr (K == Kappa::full) {
    return Kappa::lower;
  } else {
    static_assert(K == Kappa::lower, "nabla derivative is defined for full and lower-kappa functions");
    return Kappa::lower2;
  }
}

}  // namespace detail

/// y^Δ(t) = (y(σ(t)) − y(t)) / μ(t). A full grid function yields a function on
/// [a,b]^κ; a function on [a,b]^κ yields one on [a,b]^{κ²}.
template <Kappa K>
PointFunction<detail::delta_result_kind<K>()> delta_derivative(const PointFunction<K>& y) {
  const TimeScale& ts = y.scale();
  return tabulate<detail::delta_result_kind<K>()>(
      ts, [&](Index i) { return (y(ts.sigma(i)) - y(i)) / ts.mu(i); });
}

/// y^∇(t) = (y(t) − y(ρ(t))) / ν(t), on [a,b]_κ (or [a,b]_{κ²} from [a,b]_κ).
template <Kappa K>
PointFunction<detail::nabla_result_kind<K>()> nabla_derivative(const PointFunction<K>& y) {
  const TimeScale& ts = y.scale();
  return tabulate<detail::nabla_result_kind<K>()>(
      ts, [&](Index i) { return (y(i) - y(ts.rho(i))) / ts.nu(i); });
}

/// ∫_{t_from}^{t_to} f Δt = Σ_{from ≤ i < to} μ(i) f(i).
template <Kappa K>
double delta_integral(const PointFunction<K>& f, Index from, Index to) {
  const TimeScale& ts = f.scale();
  if (from > to) throw ValidationError("delta_integral: from > to");
  if (to > ts.last()) throw ValidationError("delta_integral: upper limit out of range");
  double sum = 0.0;
  for (Index i = from; i < to; ++i) sum += ts.mu(i) * f(i);
  return sum;
}

/// ∫_{t_from}^{t_to} f ∇t = Σ_{from < i ≤ to} ν(i) f(i).
template <Kappa K>
double nabla_integral(const PointFunction<K>& f, Index from, Index to) {
  const TimeScale& ts = f.scale();
  if (from > to) throw ValidationError("nabla_integral: from > to");
  if (to > ts.last()) throw ValidationError("nabla_integral: upper limit out of range");
  double sum = 0.0;
  for (Index i = from + 1; i <= to; ++i) sum += ts.nu(i) * f(i);
  return sum;
}

/// Integral over the whole interval [a,b].
template <Kappa K>
double delta_integral(const PointFunction<K>& f) {
  return delta_integral(f, 0, f.scale().last());
}

template <Kappa K>
double nabla_integral(const PointFunction<K>& f) {
  return nabla_integral(f, 0, f.scale().last());
}

/// f^σ = f ∘ σ.
inline GridFunction compose_sigma(const GridFunction& f) {
  const TimeScale& ts = f.scale();
  return tabulate<Kappa::full>(ts, [&](Index i) { return f(ts.sigma(i)); });
}

/// f^ρ = f ∘ ρ.
inline GridFunction compose_rho(const GridFunction& f) {
  const TimeScale& ts = f.scale();
  return tabulate<Kappa::full>(ts, [&](Index i) { return f(ts.rho(i)); });
}

/// Outcome of checking one identity LHS = RHS.
struct Residual {
  double absolute = 0.0;   ///< |LHS − RHS|
  double reference = 0.0;  ///< |RHS| at the same place

  double relative() const noexcept { return absolute / (1.0 + reference); }
  bool passes(double tol) const noexcept { return absolute <= tol * (1.0 + reference); }

  static Residual of(double lhs, double rhs) noexcept {
    return {std::abs(lhs - rhs), std::abs(rhs)};
  }

  /// Keeps whichever of the two has the larger relative residual.
  static Residual worse(const Residual& x, const Residual& y) noexcept {
    return y.relative() > x.relative() ? y : x;
  }
};

/// Relative tolerance for the exact identities below; it only absorbs rounding.
inline constexpr double kIdentityTolerance = 1e-10;

/// The four integration-by-parts formulas, in order:
///   ∫ f^σ g^Δ Δt = [fg]_a^b − ∫ f^Δ g Δt
///   ∫ f g^Δ Δt   = [fg]_a^b − ∫ f^Δ g^σ Δt
///   ∫ f^ρ g^∇ ∇t = [fg]_a^b − ∫ f^∇ g ∇t
///   ∫ f g^∇ ∇t   = [fg]_a^b − ∫ f^∇ g^ρ ∇t
inline std::array<Residual, 4> check_parts_formulas(const GridFunction& f, const GridFunction& g) {
  if (!(f.scale() == g.scale())) throw ValidationError("check_parts_formulas: scale mismatch");
  const TimeScale& ts = f.scale();
  const double boundary = f(ts.last()) * g(ts.last()) - f(0) * g(0);

  const auto f_d = delta_derivative(f);
  const auto g_d = delta_derivative(g);
  const auto f_n = nabla_derivative(f);
  const auto g_n = nabla_derivative(g);
  constexpr Kappa up = Kappa::upper;
  constexpr Kappa lo = Kappa::lower;

  return {
      Residual::of(delta_integral(restrict_to<up>(compose_sigma(f)) * g_d),
                   boundary - delta_integral(f_d * restrict_to<up>(g))),
      Residual::of(delta_integral(restrict_to<up>(f) * g_d),
                   boundary - delta_integral(f_d * restrict_to<up>(compose_sigma(g)))),
      Residual::of(nabla_integral(restrict_to<lo>(compose_rho(f)) * g_n),
                   boundary - nabla_integral(f_n * restrict_to<lo>(g))),
      Residual::of(nabla_integral(restrict_to<lo>(f) * g_n),
                   boundary - nabla_integral(f_n * restrict_to<lo>(compose_rho(g)))),
  };
}

/// f^∇ = (f^Δ)^ρ on [a,b]_κ and f^Δ = (f^∇)^σ on [a,b]^κ; worst point of each.
inline std::array<Residual, 2> check_derivative_relation(const GridFunction& f) {
  const TimeScale& ts = f.scale();
  const auto f_d = delta_derivative(f);
  const auto f_n = nabla_derivative(f);
  Residual nabla_side;
  for (Index i : f_n.domain().indices()) {
    nabla_side = Residual::worse(nabla_side, Residual::of(f_n(i), f_d(ts.rho(i))));
  }
  Residual delta_side;
  for (Index i : f_d.domain().indices()) {
    delta_side = Residual::worse(delta_side, Residual::of(f_d(i), f_n(ts.sigma(i))));
  }
  return {nabla_side, delta_side};
}

/// ∫ f Δt = ∫ f^ρ ∇t and ∫ f ∇t = ∫ f^σ Δt over [a,b].
inline std::array<Residual, 2> check_integral_conversion(const GridFunction& f) {
  return {
      Residual::of(delta_integral(f), nabla_integral(compose_rho(f))),
      Residual::of(nabla_integral(f), delta_integral(compose_sigma(f))),
  };
}

/// Splitting a delta or nabla integral at ρ(b) or σ(a):
///   ∫_a^b f Δt = ∫_a^{ρ(b)} f Δt + (b − ρ(b)) f^ρ(b)
///   ∫_a^b f Δt = (σ(a) − a) f(a) + ∫_{σ(a)}^b f Δt
///   ∫_a^b f ∇t = ∫_a^{ρ(b)} f ∇t + (b − ρ(b)) f(b)
///   ∫_a^b f ∇t = (σ(a) − a) f^σ(a) + ∫_{σ(a)}^b f ∇t
inline std::array<Residual, 4> check_integral_splitting(const GridFunction& f) {
  const TimeScale& ts = f.scale();
  const Index a = 0;
  const Index b = ts.last();
  const Index rho_b = ts.rho(b);
  const Index sigma_a = ts.sigma(a);
  const double left_gap = ts[sigma_a] - ts[a];
  const double right_gap = ts[b] - ts[rho_b];
  const double whole_delta = delta_integral(f, a, b);
  const double whole_nabla = nabla_integral(f, a, b);
  return {
      Residual::of(whole_delta, delta_integral(f, a, rho_b) + right_gap * f(rho_b)),
      Residual::of(whole_delta, left_gap * f(a) + delta_integral(f, sigma_a, b)),
      Residual::of(whole_nabla, nabla_integral(f, a, rho_b) + right_gap * f(b)),
      Residual::of(whole_nabla, left_gap * f(sigma_a) + nabla_integral(f, sigma_a, b)),
  };
}

namespace detail {

template <Kappa K>
double sup_norm(const PointFunction<K>& f) {
  double sup = 0.0;
  for (double x : f.values()) sup = std::max(sup, std::abs(x));
  return sup;
}

}  // namespace detail

/// ‖y‖₁,∞ = ‖y^σ‖∞ + ‖y^ρ‖∞ + ‖y^Δ‖∞ + ‖y^∇‖∞.
///
/// The sups of y^σ and y^ρ run over [a,b]_κ^κ; the derivative sups run over
/// the derivative's own domain ([a,b]^κ for y^Δ, [a,b]_κ for y^∇).
inline double c1_diamond_norm(const GridFunction& y) {
  return detail::sup_norm(restrict_to<Kappa::both>(compose_sigma(y))) +
         detail::sup_norm(restrict_to<Kappa::both>(compose_rho(y))) +
         detail::sup_norm(delta_derivative(y)) + detail::sup_norm(nabla_derivative(y));
}

/// Hat function: 1 at point k, 0 elsewhere.
inline GridFunction hat_function(const TimeScale& ts, Index k) {
  return tabulate<Kappa::full>(ts, [k](Index i) { return i == k ? 1.0 : 0.0; });
}

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

/// Matrix of the linear map g ↦ (∫ g η_k^Δ Δt)_k where η_k ranges over the
/// hat functions of the interior points (so η(a) = η(b) = 0) and g over
/// values on [a,b]^κ. Row k−1 belongs to interior point k; column j to point j.
inline Matrix delta_variation_matrix(const TimeScale& ts) {
  Matrix m{ts.size() - 2, ts.size() - 1, {}};
  m.data.assign(m.rows * m.cols, 0.0);
  for (Index k = 1; k < ts.last(); ++k) {
    const auto eta_d = delta_derivative(hat_function(ts, k));
    for (Index j : eta_d.domain().indices()) m(k - 1, j) = ts.mu(j) * eta_d(j);
  }
  return m;
}

/// Nabla counterpart: g on [a,b]_κ, column j belongs to point j + 1.
inline Matrix nabla_variation_matrix(const TimeScale& ts) {
  Matrix m{ts.size() - 2, ts.size() - 1, {}};
  m.data.assign(m.rows * m.cols, 0.0);
  for (Index k = 1; k < ts.last(); ++k) {
    const auto eta_n = nabla_derivative(hat_function(ts, k));
    for (Index j : eta_n.domain().indices()) m(k - 1, j - 1) = ts.nu(j) * eta_n(j);
  }
  return m;
}

}  // namespace tsvar
