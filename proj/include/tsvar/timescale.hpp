#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsvar/errors.hpp"

namespace tsvar {

/// Index of a point of a time scale. Indices are the canonical handles for
/// points; real values are looked up through the scale.
using Index = std::size_t;

/// Absolute distance below which two consecutive points count as duplicates.
inline constexpr double kDuplicateTolerance = 1e-12;

/// Finite time scale: a strictly increasing list of at least three reals.
/// a = front, b = back, and at least one point lies strictly between them.
///
/// Immutable after construction; copies share the point storage.
class TimeScale {
 public:
  /// Validates and wraps `points`. Throws ValidationError naming the first
  /// offending index; nothing is repaired.
  explicit TimeScale(std::vector<double> points) {
    if (points.size() < 3) {
      throw ValidationError("time scale needs at least 3 points, got " +
                            std::to_string(points.size()));
    }
    for (Index i = 0; i < points.size(); ++i) {
      if (!std::isfinite(points[i])) {
        throw ValidationError("non-finite point at index " + std::to_string(i));
      }
      if (i == 0) continue;
      const double gap = points[i] - points[i - 1];
      if (std::abs(gap) <= kDuplicateTolerance) {
        throw ValidationError("duplicate point at index " + std::to_string(i));
      }
      if (gap < 0) {
        throw ValidationError("non-increasing point at index " + std::to_string(i));
      }
    }
    points_ = std::make_shared<const std::vector<double>>(std::move(points));
  }

  std::size_t size() const noexcept { return points_->size(); }
  Index last() const noexcept { return size() - 1; }
  double a() const noexcept { return points_->front(); }
  double b() const noexcept { return points_->back(); }
  double length() const noexcept { return b() - a(); }

  std::span<const double> points() const noexcept { return *points_; }

  double operator[](Index i) const noexcept { return (*points_)[i]; }

  double at(Index i) const {
    check(i);
    return (*points_)[i];
  }

  /// Forward jump: next index, with σ(b) = b.
  Index sigma(Index i) const {
    check(i);
    return i == last() ? i : i + 1;
  }

  /// Backward jump: previous index, with ρ(a) = a.
  Index rho(Index i) const {
    check(i);
    return i == 0 ? 0 : i - 1;
  }

  /// Forward graininess σ(t) − t. Only defined on [a,b]^κ.
  double mu(Index i) const {
    check(i);
    if (i == last()) {
      throw ValidationError("mu is undefined at the last point (index " + std::to_string(i) + ")");
    }
    return (*points_)[i + 1] - (*points_)[i];
  }

  /// Backward graininess t − ρ(t). Only defined on [a,b]_κ.
  double nu(Index i) const {
    check(i);
    if (i == 0) throw ValidationError("nu is undefined at the first point (index 0)");
    return (*points_)[i] - (*points_)[i - 1];
  }

  friend bool operator==(const TimeScale& lhs, const TimeScale& rhs) noexcept {
    return lhs.points_ == rhs.points_ || *lhs.points_ == *rhs.points_;
  }

 private:
  void check(Index i) const {
    if (i >= size()) {
      throw ValidationError("point index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(size()) + ")");
    }
  }

  std::shared_ptr<const std::vector<double>> points_;
};

inline TimeScale make_timescale(std::vector<double> points) { return TimeScale(std::move(points)); }

/// n_points equally spaced points from a to b inclusive; the last point is b exactly.
inline TimeScale uniform_scale(double a, double b, std::size_t n_points) {
  if (!(a < b)) throw ValidationError("uniform_scale requires a < b");
  if (n_points < 3) throw ValidationError("uniform_scale requires at least 3 points");
  std::vector<double> points(n_points);
  const double span = b - a;
  const auto denom = static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i + 1 < n_points; ++i) {
    points[i] = a + span * static_cast<double>(i) / denom;
  }
  points.back() = b;
  return TimeScale(std::move(points));
}

/// The truncated index sets of a time scale:
///   upper = [a,b]^κ, lower = [a,b]_κ, upper2 = [a,b]^{κ²}, lower2 = [a,b]_{κ²},
///   both = [a,b]_κ^κ.
enum class Kappa { full, upper, lower, upper2, lower2, both };

inline constexpr std::string_view to_string(Kappa kind) noexcept {
  switch (kind) {
    case Kappa::full: return "full";
    case Kappa::upper: return "upper-kappa";
    case Kappa::lower: return "lower-kappa";
    case Kappa::upper2: return "upper-kappa-squared";
    case Kappa::lower2: return "lower-kappa-squared";
    case Kappa::both: return "both-kappa";
  }
  return "?";
}

inline Kappa kappa_from_string(std::string_view name) {
  for (Kappa k : {Kappa::full, Kappa::upper, Kappa::lower, Kappa::upper2, Kappa::lower2,
                  Kappa::both}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown kappa set '" + std::string(name) + "'");
}

/// Number of points dropped at the start and at the end of the scale.
struct KappaTrim {
  std::size_t front;
  std::size_t back;
};

inline constexpr KappaTrim kappa_trim(Kappa kind) noexcept {
  switch (kind) {
    case Kappa::full: return {0, 0};
    case Kappa::upper: return {0, 1};
    case Kappa::lower: return {1, 0};
    case Kappa::upper2: return {0, 2};
    case Kappa::lower2: return {2, 0};
    case Kappa::both: return {1, 1};
  }
  return {0, 0};
}

/// Contiguous index range [begin, end) of a κ-set on a particular scale.
struct KappaSet {
  Kappa kind = Kappa::full;
  Index begin = 0;
  Index end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(Index i) const noexcept { return i >= begin && i < end; }

  std::vector<Index> indices() const {
    std::vector<Index> out;
    out.reserve(size());
    for (Index i = begin; i < end; ++i) out.push_back(i);
    return out;
  }

  friend bool operator==(const KappaSet&, const KappaSet&) = default;
};

/// Squared variants need at least 4 points.
inline KappaSet kappa_set(const TimeScale& ts, Kappa kind) {
  if ((kind == Kappa::upper2 || kind == Kappa::lower2) && ts.size() < 4) {
    throw ValidationError(std::string(to_string(kind)) + " needs a scale of at least 4 points");
  }
  const KappaTrim trim = kappa_trim(kind);
  return KappaSet{kind, trim.front, ts.size() - trim.back};
}

}  // namespace tsvar
