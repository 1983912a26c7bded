#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "tsvar/dual.hpp"
#include "tsvar/errors.hpp"
#include "tsvar/expression.hpp"

namespace tsvar {

/// L and its partials ∂₂L (w.r.t. the state slot) and ∂₃L (w.r.t. the
/// derivative slot) at one point.
struct LagrangianValue {
  double value = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// An integrand L(t, u, v). In a delta slot u = y^σ(t) and v = y^Δ(t); in a
/// nabla slot u = y^ρ(t) and v = y^∇(t).
///
/// Immutable; copies share the underlying model. Every result is checked for
/// finiteness and failures surface as DomainError carrying (t, u, v).
class Lagrangian {
 public:
  using Scalar = std::function<double(double, double, double)>;

  /// Closed-form Lagrangian with analytic partials.
  static Lagrangian closed_form(std::string origin, Scalar value, Scalar d2, Scalar d3) {
    auto model = std::make_shared<ClosedForm>();
    model->value = std::move(value);
    model->d2_fn = std::move(d2);
    model->d3_fn = std::move(d3);
    return Lagrangian(std::move(origin), std::move(model));
  }

  /// Lagrangian interpreting an expression over the variables (t, y, dy);
  /// partials come from dual-number evaluation.
  static Lagrangian from_expression(std::string origin, Expression expr) {
    auto model = std::make_shared<Parsed>();
    model->expr = std::move(expr);
    return Lagrangian(std::move(origin), std::move(model));
  }

  const std::string& origin() const noexcept { return origin_; }

  double eval(double t, double u, double v) const {
    return guarded({t, u, v}, [&] { return model_->eval(t, u, v); });
  }
  double d2(double t, double u, double v) const {
    return guarded({t, u, v}, [&] { return model_->d2(t, u, v); });
  }
  double d3(double t, double u, double v) const {
    return guarded({t, u, v}, [&] { return model_->d3(t, u, v); });
  }

  /// Value and both partials in one pass.
  LagrangianValue evaluate(double t, double u, double v) const {
    const EvalPoint at{t, u, v};
    LagrangianValue out;
    try {
      out = model_->all(t, u, v);
    } catch (const DomainError& e) {
      throw DomainError(e.detail(), at);
    }
    if (!std::isfinite(out.value) || !std::isfinite(out.d2) || !std::isfinite(out.d3)) {
      throw DomainError("non-finite Lagrangian value", at);
    }
    return out;
  }

 private:
  struct Model {
    virtual ~Model() = default;
    virtual double eval(double t, double u, double v) const = 0;
    virtual double d2(double t, double u, double v) const = 0;
    virtual double d3(double t, double u, double v) const = 0;
    virtual LagrangianValue all(double t, double u, double v) const = 0;
  };

  struct ClosedForm final : Model {
    Scalar value, d2_fn, d3_fn;

    double eval(double t, double u, double v) const override { return value(t, u, v); }
    double d2(double t, double u, double v) const override { return d2_fn(t, u, v); }
    double d3(double t, double u, double v) const override { return d3_fn(t, u, v); }
    LagrangianValue all(double t, double u, double v) const override {
      return {value(t, u, v), d2_fn(t, u, v), d3_fn(t, u, v)};
    }
  };

  struct Parsed final : Model {
    Expression expr;

    double eval(double t, double u, double v) const override {
      const std::array<double, 3> args{t, u, v};
      return expr.evaluate<double>(args);
    }
    double d2(double t, double u, double v) const override { return seeded(t, u, v, 1); }
    double d3(double t, double u, double v) const override { return seeded(t, u, v, 2); }
    LagrangianValue all(double t, double u, double v) const override {
      using D = Dual<2>;
      const std::array<D, 3> args{D::constant(t), D::variable(u, 0), D::variable(v, 1)};
      const D r = expr.evaluate<D>(args);
      return {r.value, r.grad[0], r.grad[1]};
    }

   private:
    double seeded(double t, double u, double v, std::size_t slot) const {
      using D = Dual<1>;
      std::array<D, 3> args{D::constant(t), D::constant(u), D::constant(v)};
      args[slot] = D::variable(slot == 1 ? u : v, 0);
      return expr.evaluate<D>(args).grad[0];
    }
  };

  Lagrangian(std::string origin, std::shared_ptr<const Model> model)
      : origin_(std::move(origin)), model_(std::move(model)) {}

  template <class F>
  static double guarded(EvalPoint at, F&& f) {
    double r;
    try {
      r = f();
    } catch (const DomainError& e) {
      throw DomainError(e.detail(), at);
    }
    if (!std::isfinite(r)) throw DomainError("non-finite Lagrangian value", at);
    return r;
  }

  std::string origin_;
  std::shared_ptr<const Model> model_;
};

/// Parses an expression over t, y, dy into a Lagrangian.
inline Lagrangian parse_lagrangian(std::string_view source) {
  return Lagrangian::from_expression(std::string(source),
                                     Expression::parse(source, {"t", "y", "dy"}));
}

/// Endpoints a, b made available to catalog arguments, e.g. "const(1/(b-a))".
struct CatalogContext {
  double a = 0.0;
  double b = 1.0;
};

/// Built-in closed-form Lagrangians:
///   const(k)                      L = k
///   dy_squared                    L = v²
///   y_squared_plus_dy_squared     L = u² + v²
///   kinetic_minus_potential(w)    L = v²/2 − w² u²/2
/// Arguments are constant expressions; with a context they may use a and b.
inline Lagrangian catalog(std::string_view name, std::optional<CatalogContext> context = {}) {
  std::string_view head = name;
  std::optional<double> arg;
  if (const auto open = name.find('('); open != std::string_view::npos) {
    if (name.back() != ')') throw ValidationError("malformed catalog name '" + std::string(name) + "'");
    head = name.substr(0, open);
    const std::string_view inner = name.substr(open + 1, name.size() - open - 2);
    if (context) {
      const Expression e = Expression::parse(inner, {"a", "b"});
      const std::array<double, 2> ab{context->a, context->b};
      arg = e.evaluate<double>(ab);
    } else {
      arg = Expression::parse(inner, {}).evaluate<double>({});
    }
    if (!std::isfinite(*arg)) throw ValidationError("non-finite catalog argument");
  }
  const std::string origin(name);
  auto require_arg = [&](bool wanted) {
    if (wanted != arg.has_value()) {
      throw ValidationError("catalog entry '" + std::string(head) +
                            (wanted ? "' needs an argument" : "' takes no argument"));
    }
  };

  if (head == "const") {
    require_arg(true);
    const double k = *arg;
    return Lagrangian::closed_form(
        origin, [k](double, double, double) { return k; },
        [](double, double, double) { return 0.0; }, [](double, double, double) { return 0.0; });
  }
  if (head == "dy_squared") {
    require_arg(false);
    return Lagrangian::closed_form(
        origin, [](double, double, double v) { return v * v; },
        [](double, double, double) { return 0.0; }, [](double, double, double v) { return 2.0 * v; });
  }
  if (head == "y_squared_plus_dy_squared") {
    require_arg(false);
    return Lagrangian::closed_form(
        origin, [](double, double u, double v) { return u * u + v * v; },
        [](double, double u, double) { return 2.0 * u; },
        [](double, double, double v) { return 2.0 * v; });
  }
  if (head == "kinetic_minus_potential") {
    require_arg(true);
    const double w2 = *arg * *arg;
    return Lagrangian::closed_form(
        origin, [w2](double, double u, double v) { return 0.5 * v * v - 0.5 * w2 * u * u; },
        [w2](double, double u, double) { return -w2 * u; },
        [](double, double, double v) { return v; });
  }
  throw ValidationError("unknown catalog entry '" + std::string(name) + "'");
}

}  // namespace tsvar
