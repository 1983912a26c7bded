#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsvar/calculus.hpp"
#include "tsvar/errors.hpp"
#include "tsvar/grid_function.hpp"
#include "tsvar/lagrangian.hpp"
#include "tsvar/timescale.hpp"

namespace tsvar {

/// Minimize J(y) = J_Δ(y)·J_∇(y) over y on `scale` with y(a) = alpha, y(b) = beta.
class VariationalProblem {
 public:
  VariationalProblem(TimeScale scale, Lagrangian l_delta, Lagrangian l_nabla, double alpha,
                     double beta)
      : scale_(std::move(scale)),
        l_delta_(std::move(l_delta)),
        l_nabla_(std::move(l_nabla)),
        alpha_(alpha),
        beta_(beta) {
    if (!std::isfinite(alpha_) || !std::isfinite(beta_)) {
      throw ValidationError("boundary values must be finite");
    }
  }

  const TimeScale& scale() const noexcept { return scale_; }
  const Lagrangian& l_delta() const noexcept { return l_delta_; }
  const Lagrangian& l_nabla() const noexcept { return l_nabla_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  /// Straight line from (a, alpha) to (b, beta) sampled on the scale.
  GridFunction chord() const {
    const double a = scale_.a();
    const double len = scale_.length();
    return tabulate<Kappa::full>(scale_, [&](Index i) {
      if (i == 0) return alpha_;
      if (i == scale_.last()) return beta_;
      const double s = (scale_[i] - a) / len;
      return alpha_ + (beta_ - alpha_) * s;
    });
  }

  /// Same problem with interior values replaced; boundary values are enforced.
  GridFunction with_interior(std::span<const double> interior) const {
    if (interior.size() != scale_.size() - 2) {
      throw ValidationError("expected " + std::to_string(scale_.size() - 2) + " interior values");
    }
    std::vector<double> values(scale_.size());
    values.front() = alpha_;
    values.back() = beta_;
    std::copy(interior.begin(), interior.end(), values.begin() + 1);
    return GridFunction(scale_, std::move(values));
  }

  bool satisfies_boundary(const GridFunction& y) const {
    return y(0) == alpha_ && y(scale_.last()) == beta_;
  }

 private:
  TimeScale scale_;
  Lagrangian l_delta_;
  Lagrangian l_nabla_;
  double alpha_;
  double beta_;
};

/// L, ∂₂L and ∂₃L evaluated along y in one slot, on that slot's κ-set.
template <Kappa K>
struct SlotTrace {
  PointFunction<K> value;
  PointFunction<K> d2;
  PointFunction<K> d3;
};

namespace detail {

inline void require_on_scale(const VariationalProblem& p, const GridFunction& y) {
  if (!(y.scale() == p.scale())) throw ValidationError("grid function is not on the problem's scale");
}

template <Kappa K, class Args>
SlotTrace<K> evaluate_slot(const TimeScale& ts, const Lagrangian& l, Args&& args) {
  const KappaSet dom = kappa_set(ts, K);
  std::vector<double> value, d2, d3;
  value.reserve(dom.size());
  d2.reserve(dom.size());
  d3.reserve(dom.size());
  for (Index i = dom.begin; i < dom.end; ++i) {
    const auto [u, v] = args(i);
    const LagrangianValue lv = l.evaluate(ts[i], u, v);
    value.push_back(lv.value);
    d2.push_back(lv.d2);
    d3.push_back(lv.d3);
  }
  return {PointFunction<K>(ts, std::move(value)), PointFunction<K>(ts, std::move(d2)),
          PointFunction<K>(ts, std::move(d3))};
}

}  // namespace detail

/// L_Δ[y](t) = L_Δ(t, y^σ(t), y^Δ(t)) and partials on [a,b]^κ.
inline SlotTrace<Kappa::upper> delta_slot(const VariationalProblem& p, const GridFunction& y) {
  detail::require_on_scale(p, y);
  const TimeScale& ts = p.scale();
  const auto y_d = delta_derivative(y);
  return detail::evaluate_slot<Kappa::upper>(
      ts, p.l_delta(), [&](Index i) { return std::pair{y(ts.sigma(i)), y_d(i)}; });
}

/// L_∇{y}(t) = L_∇(t, y^ρ(t), y^∇(t)) and partials on [a,b]_κ.
inline SlotTrace<Kappa::lower> nabla_slot(const VariationalProblem& p, const GridFunction& y) {
  detail::require_on_scale(p, y);
  const TimeScale& ts = p.scale();
  const auto y_n = nabla_derivative(y);
  return detail::evaluate_slot<Kappa::lower>(
      ts, p.l_nabla(), [&](Index i) { return std::pair{y(ts.rho(i)), y_n(i)}; });
}

/// J_Δ(y) = ∫_a^b L_Δ[y](t) Δt.
inline double j_delta(const VariationalProblem& p, const GridFunction& y) {
  return delta_integral(delta_slot(p, y).value);
}

/// J_∇(y) = ∫_a^b L_∇{y}(t) ∇t.
inline double j_nabla(const VariationalProblem& p, const GridFunction& y) {
  return nabla_integral(nabla_slot(p, y).value);
}

/// J(y) = J_Δ(y)·J_∇(y).
inline double j_product(const VariationalProblem& p, const GridFunction& y) {
  return j_delta(p, y) * j_nabla(p, y);
}

/// d/dε J_Δ(y + εη) at ε = 0: ∫ (∂₂L_Δ[y] η^σ + ∂₃L_Δ[y] η^Δ) Δt.
inline double delta_first_variation(const VariationalProblem& p, const GridFunction& y,
                                    const GridFunction& eta) {
  const auto slot = delta_slot(p, y);
  const auto integrand = slot.d2 * restrict_to<Kappa::upper>(compose_sigma(eta)) +
                         slot.d3 * delta_derivative(eta);
  return delta_integral(integrand);
}

/// d/dε J_∇(y + εη) at ε = 0: ∫ (∂₂L_∇{y} η^ρ + ∂₃L_∇{y} η^∇) ∇t.
inline double nabla_first_variation(const VariationalProblem& p, const GridFunction& y,
                                    const GridFunction& eta) {
  const auto slot = nabla_slot(p, y);
  const auto integrand = slot.d2 * restrict_to<Kappa::lower>(compose_rho(eta)) +
                         slot.d3 * nabla_derivative(eta);
  return nabla_integral(integrand);
}

/// φ'(0) for φ(ε) = J(y + εη): J_∇·δJ_Δ(η) + J_Δ·δJ_∇(η).
inline double first_variation(const VariationalProblem& p, const GridFunction& y,
                              const GridFunction& eta) {
  return j_nabla(p, y) * delta_first_variation(p, y, eta) +
         j_delta(p, y) * nabla_first_variation(p, y, eta);
}

/// ∂J_Δ/∂y_k for every interior point k (entry k − 1), i.e. the first
/// variation along the hat function e_k. Only the two intervals touching k
/// contribute, so this runs in O(n).
inline std::vector<double> delta_gradient(const VariationalProblem& p, const GridFunction& y) {
  const TimeScale& ts = p.scale();
  const auto slot = delta_slot(p, y);
  std::vector<double> grad(ts.size() - 2, 0.0);
  for (Index i : slot.value.domain().indices()) {
    const double mu = ts.mu(i);
    // e_k^σ(i) = 1 and e_k^Δ(i) = 1/μ(i) for k = σ(i); e_k^Δ(i) = −1/μ(i) for k = i.
    const Index next = ts.sigma(i);
    if (next < ts.last()) grad[next - 1] += mu * (slot.d2(i) + slot.d3(i) / mu);
    if (i > 0) grad[i - 1] += mu * (slot.d3(i) * (-1.0 / mu));
  }
  return grad;
}

/// ∂J_∇/∂y_k for every interior point k (entry k − 1).
inline std::vector<double> nabla_gradient(const VariationalProblem& p, const GridFunction& y) {
  const TimeScale& ts = p.scale();
  const auto slot = nabla_slot(p, y);
  std::vector<double> grad(ts.size() - 2, 0.0);
  for (Index i : slot.value.domain().indices()) {
    const double nu = ts.nu(i);
    // e_k^ρ(i) = 1 and e_k^∇(i) = −1/ν(i) for k = ρ(i); e_k^∇(i) = 1/ν(i) for k = i.
    const Index prev = ts.rho(i);
    if (prev > 0) grad[prev - 1] += nu * (slot.d2(i) - slot.d3(i) / nu);
    if (i < ts.last()) grad[i - 1] += nu * (slot.d3(i) / nu);
  }
  return grad;
}

/// Gradient of J with respect to the interior values of y, from the first
/// variation along each hat function.
inline std::vector<double> first_variation_gradient(const VariationalProblem& p,
                                                    const GridFunction& y) {
  const double jd = j_delta(p, y);
  const double jn = j_nabla(p, y);
  std::vector<double> grad = delta_gradient(p, y);
  const std::vector<double> gn = nabla_gradient(p, y);
  for (std::size_t k = 0; k < grad.size(); ++k) grad[k] = jn * grad[k] + jd * gn[k];
  return grad;
}

inline double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Pieces of the Euler-Lagrange integral equations along y:
///   A(t) = ∫_a^t ∂₂L_Δ[y] Δτ,   B(t) = ∫_a^t ∂₂L_∇{y} ∇τ,
///   f = ∂₃L_Δ[y] − A on [a,b]^κ,   g = ∂₃L_∇{y} − B on [a,b]_κ.
struct ELTerms {
  GridFunction running_delta;  // A
  GridFunction running_nabla;  // B
  PointFunction<Kappa::upper> f;
  PointFunction<Kappa::lower> g;
  double j_delta;
  double j_nabla;
};

inline ELTerms el_terms(const VariationalProblem& p, const GridFunction& y) {
  const TimeScale& ts = p.scale();
  const auto ds = delta_slot(p, y);
  const auto ns = nabla_slot(p, y);

  // Prefix sums, one pass each.
  std::vector<double> a(ts.size(), 0.0), b(ts.size(), 0.0);
  for (Index i = 1; i < ts.size(); ++i) {
    a[i] = a[i - 1] + ts.mu(i - 1) * ds.d2(i - 1);
    b[i] = b[i - 1] + ts.nu(i) * ns.d2(i);
  }
  GridFunction running_delta(ts, std::move(a));
  GridFunction running_nabla(ts, std::move(b));
  auto f = ds.d3 - restrict_to<Kappa::upper>(running_delta);
  auto g = ns.d3 - restrict_to<Kappa::lower>(running_nabla);
  return {std::move(running_delta), std::move(running_nabla), std::move(f), std::move(g),
          delta_integral(ds.value), nabla_integral(ns.value)};
}

enum class ELForm { el1, el2, corollary_el1, corollary_el2 };

inline constexpr std::string_view to_string(ELForm form) noexcept {
  switch (form) {
    case ELForm::el1: return "EL1";
    case ELForm::el2: return "EL2";
    case ELForm::corollary_el1: return "corollary-EL1";
    case ELForm::corollary_el2: return "corollary-EL2";
  }
  return "?";
}

inline ELForm el_form_from_string(std::string_view name) {
  for (ELForm f : {ELForm::el1, ELForm::el2, ELForm::corollary_el1, ELForm::corollary_el2}) {
    if (to_string(f) == name) return f;
  }
  throw ValidationError("unknown EL form '" + std::string(name) + "'");
}

/// Default relative tolerance for "the trace is constant".
inline constexpr double kELTolerance = 1e-6;

/// Residual trace of one Euler-Lagrange integral equation. The equation holds
/// when the trace is constant; `constant_c` is its mean and `deviation` the
/// largest distance from that mean.
struct ELReport {
  ELForm which = ELForm::el1;
  KappaSet domain;
  std::vector<double> t;
  std::vector<double> residual_trace;
  double constant_c = 0.0;
  double deviation = 0.0;
  double j_delta = 0.0;
  double j_nabla = 0.0;

  bool passes(double tol = kELTolerance) const {
    return deviation <= tol * (1.0 + std::abs(constant_c));
  }
};

namespace detail {

template <Kappa K, class F>
ELReport make_report(ELForm which, const TimeScale& ts, double jd, double jn, F&& trace_at) {
  ELReport r;
  r.which = which;
  r.domain = kappa_set(ts, K);
  r.j_delta = jd;
  r.j_nabla = jn;
  for (Index i = r.domain.begin; i < r.domain.end; ++i) {
    r.t.push_back(ts[i]);
    r.residual_trace.push_back(trace_at(i));
  }
  double sum = 0.0;
  for (double x : r.residual_trace) sum += x;
  r.constant_c = sum / static_cast<double>(r.residual_trace.size());
  for (double x : r.residual_trace) r.deviation = std::max(r.deviation, std::abs(x - r.constant_c));
  return r;
}

}  // namespace detail

/// J_∇(y)·f(ρ(t)) + J_Δ(y)·g(t) on [a,b]_κ.
inline ELReport el_residual_1(const VariationalProblem& p, const GridFunction& y) {
  const ELTerms e = el_terms(p, y);
  const TimeScale& ts = p.scale();
  return detail::make_report<Kappa::lower>(ELForm::el1, ts, e.j_delta, e.j_nabla, [&](Index i) {
    return e.j_nabla * e.f(ts.rho(i)) + e.j_delta * e.g(i);
  });
}

/// J_∇(y)·f(t) + J_Δ(y)·g(σ(t)) on [a,b]^κ.
inline ELReport el_residual_2(const VariationalProblem& p, const GridFunction& y) {
  const ELTerms e = el_terms(p, y);
  const TimeScale& ts = p.scale();
  return detail::make_report<Kappa::upper>(ELForm::el2, ts, e.j_delta, e.j_nabla, [&](Index i) {
    return e.j_nabla * e.f(i) + e.j_delta * e.g(ts.sigma(i));
  });
}

/// g(t) = ∂₃L_∇{y}(t) − ∫_a^t ∂₂L_∇{y} ∇τ on [a,b]_κ; the delta slot is ignored.
inline ELReport el_residual_cor1(const VariationalProblem& p, const GridFunction& y) {
  const ELTerms e = el_terms(p, y);
  return detail::make_report<Kappa::lower>(ELForm::corollary_el1, p.scale(), e.j_delta,
                                           e.j_nabla, [&](Index i) { return e.g(i); });
}

/// f(t) = ∂₃L_Δ[y](t) − ∫_a^t ∂₂L_Δ[y] Δτ on [a,b]^κ; the nabla slot is ignored.
inline ELReport el_residual_cor2(const VariationalProblem& p, const GridFunction& y) {
  const ELTerms e = el_terms(p, y);
  return detail::make_report<Kappa::upper>(ELForm::corollary_el2, p.scale(), e.j_delta,
                                           e.j_nabla, [&](Index i) { return e.f(i); });
}

/// Pointwise residuals of the delta and nabla Euler-Lagrange differential
/// equations: (∂₃L_Δ[y])^Δ − ∂₂L_Δ[y] on [a,b]^{κ²} and
/// (∂₃L_∇{y})^∇ − ∂₂L_∇{y} on [a,b]_{κ²}. Needs at least 4 points.
struct ClassicResiduals {
  PointFunction<Kappa::upper2> delta;
  PointFunction<Kappa::lower2> nabla;
};

inline ClassicResiduals classic_el_residuals(const VariationalProblem& p, const GridFunction& y) {
  const TimeScale& ts = p.scale();
  if (ts.size() < 4) throw ValidationError("classic EL residuals need at least 4 points");
  const auto ds = delta_slot(p, y);
  const auto ns = nabla_slot(p, y);
  return {
      delta_derivative(ds.d3) - tabulate<Kappa::upper2>(ts, [&](Index i) { return ds.d2(i); }),
      nabla_derivative(ns.d3) - tabulate<Kappa::lower2>(ts, [&](Index i) { return ns.d2(i); }),
  };
}

}  // namespace tsvar
