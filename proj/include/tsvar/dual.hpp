#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace tsvar {

/// Forward-mode dual number with N independent infinitesimals:
/// value + Σ grad[k] ε_k, with ε_j ε_k = 0.
template <std::size_t N>
struct Dual {
  double value = 0.0;
  std::array<double, N> grad{};

  static Dual constant(double x) { return Dual{x, {}}; }

  /// x seeded with a unit infinitesimal in `slot`.
  static Dual variable(double x, std::size_t slot) {
    Dual d{x, {}};
    d.grad[slot] = 1.0;
    return d;
  }

  bool is_constant() const {
    for (double g : grad) {
      if (g != 0.0) return false;
    }
    return true;
  }
};

namespace detail {

// value = f(x), derivative factor df = f'(x); scales every slot.
template <std::size_t N>
Dual<N> chain(const Dual<N>& x, double value, double df) {
  Dual<N> out{value, {}};
  for (std::size_t k = 0; k < N; ++k) out.grad[k] = x.grad[k] == 0.0 ? 0.0 : df * x.grad[k];
  return out;
}

}  // namespace detail

template <std::size_t N>
Dual<N> operator-(const Dual<N>& x) {
  Dual<N> out{-x.value, {}};
  for (std::size_t k = 0; k < N; ++k) out.grad[k] = -x.grad[k];
  return out;
}

template <std::size_t N>
Dual<N> operator+(const Dual<N>& x, const Dual<N>& y) {
  Dual<N> out{x.value + y.value, {}};
  for (std::size_t k = 0; k < N; ++k) out.grad[k] = x.grad[k] + y.grad[k];
  return out;
}

template <std::size_t N>
Dual<N> operator-(const Dual<N>& x, const Dual<N>& y) {
  Dual<N> out{x.value - y.value, {}};
  for (std::size_t k = 0; k < N; ++k) out.grad[k] = x.grad[k] - y.grad[k];
  return out;
}

template <std::size_t N>
Dual<N> operator*(const Dual<N>& x, const Dual<N>& y) {
  Dual<N> out{x.value * y.value, {}};
  for (std::size_t k = 0; k < N; ++k) out.grad[k] = x.grad[k] * y.value + x.value * y.grad[k];
  return out;
}

template <std::size_t N>
Dual<N> operator/(const Dual<N>& x, const Dual<N>& y) {
  Dual<N> out{x.value / y.value, {}};
  const double inv2 = 1.0 / (y.value * y.value);
  for (std::size_t k = 0; k < N; ++k) {
    out.grad[k] = (x.grad[k] * y.value - x.value * y.grad[k]) * inv2;
  }
  return out;
}

template <std::size_t N>
Dual<N> sin(const Dual<N>& x) {
  return detail::chain(x, std::sin(x.value), std::cos(x.value));
}

template <std::size_t N>
Dual<N> cos(const Dual<N>& x) {
  return detail::chain(x, std::cos(x.value), -std::sin(x.value));
}

template <std::size_t N>
Dual<N> exp(const Dual<N>& x) {
  const double e = std::exp(x.value);
  return detail::chain(x, e, e);
}

template <std::size_t N>
Dual<N> log(const Dual<N>& x) {
  return detail::chain(x, std::log(x.value), 1.0 / x.value);
}

template <std::size_t N>
Dual<N> sqrt(const Dual<N>& x) {
  const double r = std::sqrt(x.value);
  return detail::chain(x, r, 0.5 / r);
}

/// x^y. A constant exponent uses the power rule, which stays valid for a
/// negative base with an integer exponent; a varying exponent adds the
/// x^y ln(x) term and needs x > 0.
template <std::size_t N>
Dual<N> pow(const Dual<N>& x, const Dual<N>& y) {
  const double value = std::pow(x.value, y.value);
  const double df = y.value == 0.0 ? 0.0 : y.value * std::pow(x.value, y.value - 1.0);
  Dual<N> out = detail::chain(x, value, df);
  if (!y.is_constant()) {
    const double log_term = value * std::log(x.value);
    for (std::size_t k = 0; k < N; ++k) out.grad[k] += log_term * y.grad[k];
  }
  return out;
}

}  // namespace tsvar
