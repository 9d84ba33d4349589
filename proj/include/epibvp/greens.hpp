#pragma once

// Green's functions of  u'' + k u = h  on (0, 1/2] with the regular condition
// at t = 0 and one of the three boundary conditions at t = 1/2.
//
// Every kernel has the product form
//     G(s, t) = -R(max(s, t)) L(min(s, t)) / (sqrt|k| D),
// where L(x) = sinh(sqrt|k| x) (sin for k > 0) is regular at 0 and R solves the
// homogeneous equation with the boundary condition at 1/2:
//     P1: R(x) = sinh(m(1/2 - x)),                  D = sinh(m/2)
//     P2: R(x) = cosh(m(1/2 - x)),                  D = cosh(m/2)
//     P3: R(x) = m cosh(m(1/2 - x)) - sinh(m(1/2 - x)),  D = m cosh(m/2) - sinh(m/2)
// (trigonometric twins for k > 0). The Wronskian normalization makes the
// t-derivative jump by exactly 1 across t = s.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "epibvp/errors.hpp"
#include "epibvp/problem.hpp"

namespace epibvp {

enum class KernelVariant { hyperbolic, trigonometric };

/// Upper limit of the admissible positive k for each problem.
inline double positive_k_limit(ProblemKind p) {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  switch (p) {
    case ProblemKind::P1_Dirichlet: return 4.0 * pi2;
    case ProblemKind::P2_NeumannAtHalf: return pi2;
    case ProblemKind::P3_Robin: return pi2 / 4.0;
  }
  return 0.0;
}

/// Empty string when k is admissible for p, otherwise the reason.
inline std::string validity_problem(ProblemKind p, double k) {
  std::ostringstream why;
  if (!std::isfinite(k)) return "k must be finite";
  if (k == 0.0) return "k = 0 has no shifted kernel";
  const double m = std::sqrt(std::abs(k));
  if (k < 0.0) {
    if (p == ProblemKind::P3_Robin && !(m * std::cosh(m / 2) - std::sinh(m / 2) > 0.0))
      return "P3 with k < 0 needs sqrt|k| cosh(sqrt|k|/2) - sinh(sqrt|k|/2) > 0";
    return {};
  }
  const double lim = positive_k_limit(p);
  switch (p) {
    case ProblemKind::P1_Dirichlet:
    case ProblemKind::P2_NeumannAtHalf:
      if (!(k < lim)) {
        why << tag(p) << " with k > 0 needs k < " << lim << ", got k = " << k;
        return why.str();
      }
      return {};
    case ProblemKind::P3_Robin:
      if (!(k <= lim)) {
        why << "p3 with k > 0 needs k <= pi^2/4 = " << lim << ", got k = " << k;
        return why.str();
      }
      if (!(m * std::cos(m / 2) - std::sin(m / 2) > 0.0))
        return "p3 with k > 0 needs sqrt(k) cos(sqrt(k)/2) - sin(sqrt(k)/2) > 0";
      return {};
  }
  return {};
}

class GreensKernel {
 public:
  GreensKernel(ProblemKind p, double k) : problem_(p), k_(k), m_(std::sqrt(std::abs(k))) {
    if (auto why = validity_problem(p, k); !why.empty()) throw OutOfValidity(why);
    denom_ = m_ * boundary_factor();
  }

  ProblemKind problem() const { return problem_; }
  /// sqrt|k| D
  double denominator() const { return denom_; }
  double k() const { return k_; }
  KernelVariant variant() const { return k_ < 0.0 ? KernelVariant::hyperbolic : KernelVariant::trigonometric; }

  double operator()(double s, double t) const {
    const double lo = std::min(s, t);
    const double hi = std::max(s, t);
    return -right(hi) * left(lo) / denom_;
  }

  /// Regular solution at t = 0 (sinh / sin).
  double left(double x) const { return variant() == KernelVariant::hyperbolic ? std::sinh(m_ * x) : std::sin(m_ * x); }

  /// Solution satisfying the boundary condition at t = 1/2.
  double right(double x) const {
    const double y = m_ * (0.5 - x);
    const bool hyp = variant() == KernelVariant::hyperbolic;
    switch (problem_) {
      case ProblemKind::P1_Dirichlet: return hyp ? std::sinh(y) : std::sin(y);
      case ProblemKind::P2_NeumannAtHalf: return hyp ? std::cosh(y) : std::cos(y);
      case ProblemKind::P3_Robin:
        return hyp ? m_ * std::cosh(y) - std::sinh(y) : m_ * std::cos(y) - std::sin(y);
    }
    return 0.0;
  }

 private:
  double boundary_factor() const {
    const double y = m_ / 2.0;
    const bool hyp = variant() == KernelVariant::hyperbolic;
    switch (problem_) {
      case ProblemKind::P1_Dirichlet: return hyp ? std::sinh(y) : std::sin(y);
      case ProblemKind::P2_NeumannAtHalf: return hyp ? std::cosh(y) : std::cos(y);
      case ProblemKind::P3_Robin: return hyp ? m_ * std::cosh(y) - std::sinh(y) : m_ * std::cos(y) - std::sin(y);
    }
    return 0.0;
  }

  ProblemKind problem_;
  double k_;
  double m_;
  double denom_ = 1.0;
};

inline double kernel_value(const GreensKernel& kern, double s, double t) {
  if (!(s >= 0.0 && s <= 0.5 && t >= 0.0 && t <= 0.5))
    throw DomainError("kernel arguments must lie in [0, 1/2]");
  return kern(s, t);
}

/// Uniform nodes x_j = j/(2 panels), j = 0..panels.
inline std::vector<double> half_interval_nodes(std::size_t panels) {
  std::vector<double> x(panels + 1);
  for (std::size_t j = 0; j <= panels; ++j) x[j] = 0.5 * static_cast<double>(j) / static_cast<double>(panels);
  return x;
}

/// u(t_i) = int_0^{1/2} G(s, t_i) h(s) ds on uniform nodes.
///
/// The kink of G sits on a node, so G is smooth inside every panel. Each panel
/// is integrated with 3-point Gauss-Legendre using G evaluated exactly and h
/// replaced by its cubic interpolant through the four nearest nodes (h itself
/// is smooth across the kink). Fourth order everywhere, including the
/// one-panel sides next to t = 0 and t = 1/2 where a Simpson split degrades.
/// The weight matrix is built once; apply() is a dense matrix-vector product.
class KernelOperator {
 public:
  KernelOperator(const GreensKernel& kern, std::size_t panels) : kern_(kern), panels_(panels) {
    if (panels < 3) throw ConfigError("kernel quadrature needs at least 3 panels");
    const std::size_t n = panels + 1;
    const double h = 0.5 / static_cast<double>(panels);
    nodes_ = half_interval_nodes(panels);
    weights_.assign(n * n, 0.0);

    static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    // Lagrange weights depend only on the position of the Gauss point inside
    // its 4-node stencil; three stencil placements occur (first, interior, last).
    struct Stencil {
      double lag[3][4];
    };
    // shift = stencil start minus panel start: 0, -1 or -2
    const auto make = [&](int shift) {
      Stencil st{};
      for (int q = 0; q < 3; ++q) {
        const double xi = 0.5 * (1.0 + gx[q]) - shift;  // Gauss point in units of h from stencil start
        for (int a = 0; a < 4; ++a) {
          double L = 1.0;
          for (int c = 0; c < 4; ++c)
            if (c != a) L *= (xi - c) / static_cast<double>(a - c);
          st.lag[q][a] = L;
        }
      }
      return st;
    };
    const Stencil first = make(0), interior = make(-1), last = make(-2);

    // G factorizes, so tabulate L and R once at nodes and Gauss points.
    std::vector<double> left_t(n), right_t(n);
    for (std::size_t i = 0; i < n; ++i) {
      left_t[i] = kern.left(nodes_[i]);
      right_t[i] = kern.right(nodes_[i]);
    }
    const double scale = -1.0 / kern.denominator();

    for (std::size_t j = 0; j < panels; ++j) {
      const Stencil& st = j == 0 ? first : (j + 1 == panels ? last : interior);
      const std::size_t b = j == 0 ? 0 : (j + 1 == panels ? j - 2 : j - 1);
      double ls[3], rs[3];
      for (int q = 0; q < 3; ++q) {
        const double s = nodes_[j] + h * 0.5 * (1.0 + gx[q]);
        ls[q] = kern.left(s);
        rs[q] = kern.right(s);
      }
      for (std::size_t i = 0; i < n; ++i) {
        double* row = weights_.data() + i * n;
        const bool below = j < i;  // panel lies in s < t_i
        for (int q = 0; q < 3; ++q) {
          const double g = scale * (below ? right_t[i] * ls[q] : rs[q] * left_t[i]);
          const double wq = gw[q] * 0.5 * h * g;
          for (int a = 0; a < 4; ++a) row[b + static_cast<std::size_t>(a)] += wq * st.lag[q][a];
        }
      }
    }
  }

  const GreensKernel& kernel() const { return kern_; }
  std::span<const double> nodes() const { return nodes_; }
  std::size_t panels() const { return panels_; }

  std::vector<double> apply(std::span<const double> h) const {
    const std::size_t n = nodes_.size();
    if (h.size() != n) throw ConfigError("sampled function does not match the kernel grid");
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = weights_.data() + i * n;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += row[j] * h[j];
      u[i] = s;
    }
    return u;
  }

 private:
  GreensKernel kern_;
  std::size_t panels_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// One-shot application on the uniform grid with h.size() - 1 panels.
inline std::vector<double> apply_kernel(const GreensKernel& kern, std::span<const double> h) {
  if (h.size() < 4) throw ConfigError("apply_kernel needs at least 4 samples");
  return KernelOperator(kern, h.size() - 1).apply(h);
}

struct SignReport {
  ProblemKind problem = ProblemKind::P1_Dirichlet;
  double k = 0.0;
  int resolution = 0;
  double max_value = 0.0;
  bool pass = false;
};

/// Samples G on a resolution x resolution grid of [0, 1/2]^2.
inline SignReport sign_check(const GreensKernel& kern, int resolution) {
  if (resolution < 2) throw ConfigError("sign_check resolution must be >= 2");
  const auto x = half_interval_nodes(static_cast<std::size_t>(resolution - 1));
  double mx = -std::numeric_limits<double>::infinity();
  for (double s : x)
    for (double t : x) mx = std::max(mx, kern(s, t));
  return {kern.problem(), kern.k(), resolution, mx, mx <= 1e-12};
}

}  // namespace epibvp
