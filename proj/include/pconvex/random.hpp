#pragma once

#include <cstdint>
#include <random>

#include "pconvex/types.hpp"

namespace pconvex {

/// Seeded sample source. The engine (mt19937_64) is pinned by the standard
/// and the value transforms below avoid std:: distributions, whose output is
/// implementation-defined; a scenario seed therefore pins every draw.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : eng_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double gauss() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  Vector gauss_vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss();
    return v;
  }

  /// Non-degenerate unit direction.
  Vector direction(int dim) {
    Vector v = gauss_vector(dim);
    while (v.norm() < 1e-12) v = gauss_vector(dim);
    return v / v.norm();
  }

  /// Uniform point in the axis box center +/- radius.
  Vector box_point(const Vector& center, double radius) {
    Vector v(center.size());
    for (int i = 0; i < center.size(); ++i)
      v[i] = center[i] + radius * uniform(-1.0, 1.0);
    return v;
  }

  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 step; used to derive independent per-task seeds from one
/// scenario seed so parallel and sequential runs draw identically.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace pconvex
