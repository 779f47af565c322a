#pragma once

#include "anc/dsp.hpp"

#include <random>

namespace anc::test {

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

/// O(N·L) convolution written independently of the library's loop.
inline std::vector<double> naive_convolution(const std::vector<double>& b, const std::vector<double>& x) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t n = i; n < x.size(); ++n) y[n] += b[i] * x[n - i];
  return y;
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace anc::test
