#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace epibvp::quad {

/// Composite weights for int_{x_0}^{x_m} on m uniform panels of width h:
/// Simpson for even m, Simpson plus a closing 3/8 panel triple for odd m >= 3,
/// trapezoid for m = 1.
inline std::vector<double> composite_weights(std::size_t m, double h) {
  std::vector<double> w(m + 1, 0.0);
  if (m == 0) return w;
  if (m == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  const std::size_t simpson_panels = (m % 2 == 0) ? m : m - 3;
  for (std::size_t i = 0; i + 2 <= simpson_panels; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (m % 2 == 1) {
    const std::size_t i = m - 3;
    w[i] += 3.0 * h / 8.0;
    w[i + 1] += 9.0 * h / 8.0;
    w[i + 2] += 9.0 * h / 8.0;
    w[i + 3] += 3.0 * h / 8.0;
  }
  return w;
}

inline double integrate(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  const auto w = composite_weights(f.size() - 1, h);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

/// tail[i] = int_{x_i}^{x_last} f on a uniform grid, fourth-order accurate:
/// Simpson pairs accumulated from the right, with a single leading panel
/// closed by the quadratic through three nodes when the count is odd.
inline std::vector<double> cumulative_tail(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> tail(n, 0.0);
  if (n < 2) return tail;
  const std::size_t last = n - 1;
  if (n == 2) {
    tail[0] = 0.5 * h * (f[0] + f[1]);
    return tail;
  }
  for (std::size_t step = 2; step <= last; step += 2) {
    const std::size_t i = last - step;
    tail[i] = tail[i + 2] + h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  }
  for (std::size_t step = 1; step <= last; step += 2) {
    const std::size_t i = last - step;
    if (i + 2 <= last) {
      // int_{x_i}^{x_{i+1}} of the parabola through x_i, x_{i+1}, x_{i+2}
      tail[i] = tail[i + 1] + h / 12.0 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
    } else {
      // last panel: parabola through x_{i-1}, x_i, x_{i+1}
      tail[i] = h / 12.0 * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]);
    }
  }
  return tail;
}

}  // namespace epibvp::quad
