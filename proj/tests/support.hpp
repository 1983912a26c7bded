#pragma once

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "tsvar/tsvar.hpp"

namespace tsvar::testing {

/// Example 1: minimize (∫ (y^Δ)² Δt)(∫ (y^∇)² ∇t) with y(a) = a, y(b) = b.
inline VariationalProblem example1(const TimeScale& ts) {
  return VariationalProblem(ts, catalog("dy_squared"), catalog("dy_squared"), ts.a(), ts.b());
}

/// Closed form of Example 1 on {0,1,2} as a function of the interior value.
inline double example1_three_point_j(double y1) {
  const double s = y1 * y1 + (2.0 - y1) * (2.0 - y1);
  return s * s;
}

inline double example1_three_point_dj(double y1) {
  return 2.0 * (y1 * y1 + (2.0 - y1) * (2.0 - y1)) * (2.0 * y1 - 2.0 * (2.0 - y1));
}

/// J_Δ by a direct loop over raw points: Σ (t_{i+1} − t_i) L(t_i, y_{i+1}, (y_{i+1} − y_i)/(t_{i+1} − t_i)).
inline double direct_j_delta(const Lagrangian& l, const std::vector<double>& t,
                             const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i];
    s += h * l.eval(t[i], y[i + 1], (y[i + 1] - y[i]) / h);
  }
  return s;
}

/// J_∇ by a direct loop: Σ (t_i − t_{i−1}) L(t_i, y_{i−1}, (y_i − y_{i−1})/(t_i − t_{i−1})).
inline double direct_j_nabla(const Lagrangian& l, const std::vector<double>& t,
                             const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double h = t[i] - t[i - 1];
    s += h * l.eval(t[i], y[i - 1], (y[i] - y[i - 1]) / h);
  }
  return s;
}

inline std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

/// Central finite-difference gradient of J over the interior, step 1e-6·(1 + |y_k|).
inline std::vector<double> fd_gradient(const VariationalProblem& p, const GridFunction& y) {
  std::vector<double> v = to_vector(y.values());
  std::vector<double> grad(v.size() - 2);
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const double h = 1e-6 * (1.0 + std::abs(v[k]));
    std::vector<double> plus = v, minus = v;
    plus[k] += h;
    minus[k] -= h;
    grad[k - 1] = (j_product(p, GridFunction(y.scale(), plus)) -
                   j_product(p, GridFunction(y.scale(), minus))) /
                  (2.0 * h);
  }
  return grad;
}

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("tsvar_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream f(path_ / name, std::ios::binary);
    f << content;
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace tsvar::testing
