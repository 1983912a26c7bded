#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsvar/errors.hpp"
#include "tsvar/timescale.hpp"

namespace tsvar {

/// Real values attached to the points of one κ-set of a time scale.
///
/// The κ-set is part of the type, so a delta derivative (living on [a,b]^κ)
/// cannot be combined with a nabla derivative (living on [a,b]_κ) by accident.
/// Values are indexed by point index, not by position in the domain.
template <Kappa K>
class PointFunction {
 public:
  static constexpr Kappa kind = K;

  PointFunction(TimeScale scale, std::vector<double> values)
      : scale_(std::move(scale)), domain_(kappa_set(scale_, K)), values_(std::move(values)) {
    if (values_.size() != domain_.size()) {
      throw ValidationError("expected " + std::to_string(domain_.size()) + " values on " +
                            std::string(to_string(K)) + ", got " + std::to_string(values_.size()));
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (!std::isfinite(values_[j])) {
        throw ValidationError("non-finite value at point index " +
                              std::to_string(domain_.begin + j));
      }
    }
  }

  const TimeScale& scale() const noexcept { return scale_; }
  const KappaSet& domain() const noexcept { return domain_; }
  bool defined_at(Index i) const noexcept { return domain_.contains(i); }

  /// Values in domain order.
  std::span<const double> values() const noexcept { return values_; }

  /// Value at point index i; throws if i lies outside the domain.
  double operator()(Index i) const {
    if (!domain_.contains(i)) {
      throw ValidationError("point index " + std::to_string(i) + " outside " +
                            std::string(to_string(K)));
    }
    return values_[i - domain_.begin];
  }

  friend PointFunction operator+(const PointFunction& lhs, const PointFunction& rhs) {
    return combine(lhs, rhs, std::plus<>{});
  }
  friend PointFunction operator-(const PointFunction& lhs, const PointFunction& rhs) {
    return combine(lhs, rhs, std::minus<>{});
  }
  /// Pointwise product on the shared domain.
  friend PointFunction operator*(const PointFunction& lhs, const PointFunction& rhs) {
    return combine(lhs, rhs, std::multiplies<>{});
  }
  friend PointFunction operator*(double k, const PointFunction& f) {
    std::vector<double> out(f.values_);
    for (double& x : out) x *= k;
    return PointFunction(f.scale_, std::move(out));
  }

 private:
  template <class Op>
  static PointFunction combine(const PointFunction& lhs, const PointFunction& rhs, Op op) {
    if (!(lhs.scale_ == rhs.scale_)) throw ValidationError("functions live on different scales");
    std::vector<double> out(lhs.values_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = op(lhs.values_[j], rhs.values_[j]);
    return PointFunction(lhs.scale_, std::move(out));
  }

  TimeScale scale_;
  KappaSet domain_;
  std::vector<double> values_;
};

/// An admissible function y : [a,b] → ℝ; every grid function on a finite
/// isolated scale is admissible.
using GridFunction = PointFunction<Kappa::full>;

template <Kappa K>
using PartialGridFunction = PointFunction<K>;

/// Builds a function on κ-set K by calling `value(i)` for each point index.
template <Kappa K, class F>
PointFunction<K> tabulate(const TimeScale& ts, F&& value) {
  const KappaSet dom = kappa_set(ts, K);
  std::vector<double> out;
  out.reserve(dom.size());
  for (Index i = dom.begin; i < dom.end; ++i) out.push_back(value(i));
  return PointFunction<K>(ts, std::move(out));
}

/// Restriction of a grid function to a κ-set.
template <Kappa K>
PointFunction<K> restrict_to(const GridFunction& f) {
  return tabulate<K>(f.scale(), [&](Index i) { return f(i); });
}

/// Samples t ↦ fn(t) at every point of the scale.
template <class F>
GridFunction sample(const TimeScale& ts, F&& fn) {
  return tabulate<Kappa::full>(ts, [&](Index i) { return fn(ts[i]); });
}

}  // namespace tsvar
