#pragma once

// Monotone iteration between a lower solution alpha and an upper solution beta:
//     alpha_{n+1}'' + k alpha_{n+1} = alpha_n^2/(8t^2) + lambda/2 + k alpha_n,
// solved through the shifted Green's kernel, and likewise for beta. With a
// non-positive kernel the sequences close in from both sides,
//     beta_0 <= beta_1 <= ... <= alpha_1 <= alpha_0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "epibvp/errors.hpp"
#include "epibvp/greens.hpp"
#include "epibvp/power_series.hpp"
#include "epibvp/problem.hpp"

namespace epibvp {

/// beta(t) = -C t (A - sqrt(2t)).
struct SeedFunction {
  ProblemKind problem = ProblemKind::P1_Dirichlet;
  double C = 0.0;
  double A = 1.0;

  PowerSeries series() const {
    return PowerSeries::from_terms({{2, -C * A}, {3, C * std::numbers::sqrt2}});
  }
};

/// A of the seed and the cap on C: P1 (1, 48), P2 (3/2, 128/9), P3 (2, 6).
inline double seed_shape(ProblemKind p) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return 1.0;
    case ProblemKind::P2_NeumannAtHalf: return 1.5;
    case ProblemKind::P3_Robin: return 2.0;
  }
  return 0.0;
}

inline double seed_cap(ProblemKind p) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return 48.0;
    case ProblemKind::P2_NeumannAtHalf: return 128.0 / 9.0;
    case ProblemKind::P3_Robin: return 6.0;
  }
  return 0.0;
}

/// lambda <= ratio * C: 3, 2, 3/2.
inline double seed_ratio(ProblemKind p) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return 3.0;
    case ProblemKind::P2_NeumannAtHalf: return 2.0;
    case ProblemKind::P3_Robin: return 1.5;
  }
  return 1.0;
}

/// Largest lambda any admissible seed covers: 144, 256/9, 9.
inline double seed_lambda_max(ProblemKind p) { return seed_ratio(p) * seed_cap(p); }

/// Tightest seed (smallest C) for lambda; lambda <= 0 gives the zero seed.
inline SeedFunction seed_upper(ProblemKind p, double lambda) {
  if (!std::isfinite(lambda)) throw ConfigError("lambda must be finite");
  const double lmax = seed_lambda_max(p);
  if (lambda > lmax) {
    std::ostringstream msg;
    msg << "no admissible seed for " << tag(p) << " at lambda=" << lambda << " (seeds reach lambda <= " << lmax << ")";
    throw NoAdmissibleSeed(msg.str());
  }
  SeedFunction s;
  s.problem = p;
  s.A = seed_shape(p);
  s.C = lambda > 0.0 ? std::min(lambda / seed_ratio(p), seed_cap(p)) : 0.0;
  return s;
}

/// Default lower start: 0 for lambda >= 0; for lambda < 0 the c = 0 template
/// -(lambda/4) t (a - t) >= 0, since 0 is then an upper solution instead.
inline PowerSeries lower_start(ProblemKind p, double lambda) {
  if (lambda >= 0.0) return {};
  const double a = template_root(p);
  return PowerSeries::from_terms({{2, -0.25 * lambda * a}, {4, 0.25 * lambda}});
}

struct MonotoneOptions {
  double k = -1.0;
  int max_iter = 200;
  double tol = 1e-10;
  std::size_t panels = 2048;
  double ordering_tol = 1e-8;
  bool strict = true;  ///< throw OrderingViolation instead of only recording it
};

struct IterationStep {
  int n = 0;               ///< produces alpha_n, beta_n
  double alpha_change = 0; ///< max |alpha_n - alpha_{n-1}|
  double beta_change = 0;
  double alpha_margin = 0; ///< min (alpha_{n-1} - alpha_n)
  double beta_margin = 0;  ///< min (beta_n - beta_{n-1})
  double sandwich = 0;     ///< min (alpha_n - beta_n)
};

struct IterationTrace {
  ProblemKind problem = ProblemKind::P1_Dirichlet;
  double k = 0.0;
  double lambda = 0.0;
  SeedFunction seed;
  std::vector<double> grid;
  std::vector<std::vector<double>> alphas;
  std::vector<std::vector<double>> betas;
  std::vector<IterationStep> steps;
  bool converged = false;
  int iterations = 0;
  double final_gap = 0.0;
  double worst_margin = 0.0;  ///< most negative ordering margin seen (0 when none)
  bool ordering_ok = true;

  const std::vector<double>& alpha() const { return alphas.back(); }
  const std::vector<double>& beta() const { return betas.back(); }
};

namespace detail {

/// u^2/(8s^2) + lambda/2 + k u on the grid; at s = 0 the quotient takes the
/// limit (u/s)^2 / 8 with u/s extrapolated from the first two interior nodes.
inline std::vector<double> monotone_rhs(std::span<const double> s, std::span<const double> u, double lambda,
                                        double k) {
  std::vector<double> h(u.size());
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double q = u[i] / s[i];
    h[i] = q * q / 8.0 + 0.5 * lambda + k * u[i];
  }
  const double q0 = u.size() > 2 ? 2.0 * u[1] / s[1] - u[2] / s[2] : 0.0;
  h[0] = q0 * q0 / 8.0 + 0.5 * lambda + k * u[0];
  return h;
}

inline std::vector<double> sample(const PowerSeries& f, std::span<const double> t) {
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = f.eval(t[i]);
  return out;
}

inline double min_diff(std::span<const double> a, std::span<const double> b) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, a[i] - b[i]);
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// -max_t alpha(t)/(2t) over interior nodes.
inline double k_prime_bound(std::span<const double> t, std::span<const double> alpha) {
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < t.size(); ++i) mx = std::max(mx, alpha[i] / (2.0 * t[i]));
  return -mx;
}

}  // namespace detail

/// Runs both sequences from explicit starting functions.
inline IterationTrace iterate(ProblemKind p, double lambda, const PowerSeries& alpha0, const SeedFunction& seed,
                              const MonotoneOptions& opt) {
  if (opt.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(opt.tol > 0.0)) throw ConfigError("tol must be > 0");
  const GreensKernel kern(p, opt.k);  // throws OutOfValidity
  const KernelOperator op(kern, opt.panels);

  IterationTrace tr;
  tr.problem = p;
  tr.k = opt.k;
  tr.lambda = lambda;
  tr.seed = seed;
  tr.grid.assign(op.nodes().begin(), op.nodes().end());
  tr.alphas.push_back(detail::sample(alpha0, tr.grid));
  tr.betas.push_back(detail::sample(seed.series(), tr.grid));

  const auto note = [&](double margin, const char* what, int n) {
    tr.worst_margin = std::min(tr.worst_margin, margin);
    if (margin >= -opt.ordering_tol) return;
    tr.ordering_ok = false;
    if (opt.strict) {
      std::ostringstream msg;
      msg << what << " violated at iteration " << n << " by " << -margin;
      throw OrderingViolation(msg.str());
    }
  };
  note(detail::min_diff(tr.alphas[0], tr.betas[0]), "beta_0 <= alpha_0", 0);

  for (int n = 1; n <= opt.max_iter; ++n) {
    const auto& a = tr.alphas.back();
    const auto& b = tr.betas.back();
    if (opt.k > 0.0 && n > 1) {
      // positive shifts also need k < -max alpha/(2t); alpha_0 = 0 gives no information
      const double kp = std::min(positive_k_limit(p), detail::k_prime_bound(tr.grid, a));
      if (!(opt.k < kp)) {
        std::ostringstream msg;
        msg << "k=" << opt.k << " is not below k'=" << kp << " at iteration " << n;
        throw OutOfValidity(msg.str());
      }
    }
    auto a_next = op.apply(detail::monotone_rhs(tr.grid, a, lambda, opt.k));
    auto b_next = op.apply(detail::monotone_rhs(tr.grid, b, lambda, opt.k));

    IterationStep st;
    st.n = n;
    st.alpha_change = detail::max_abs_diff(a_next, a);
    st.beta_change = detail::max_abs_diff(b_next, b);
    st.alpha_margin = detail::min_diff(a, a_next);
    st.beta_margin = detail::min_diff(b_next, b);
    st.sandwich = detail::min_diff(a_next, b_next);
    tr.steps.push_back(st);
    tr.alphas.push_back(std::move(a_next));
    tr.betas.push_back(std::move(b_next));
    tr.iterations = n;

    note(st.alpha_margin, "alpha_n <= alpha_{n-1}", n);
    note(st.beta_margin, "beta_{n-1} <= beta_n", n);
    note(st.sandwich, "beta_n <= alpha_n", n);

    if (st.alpha_change < opt.tol && st.beta_change < opt.tol) {
      tr.converged = true;
      break;
    }
  }
  tr.final_gap = detail::max_abs_diff(tr.alpha(), tr.beta());
  return tr;
}

/// alpha_0 from lower_start(), beta_0 from seed_upper().
inline IterationTrace iterate(ProblemKind p, double lambda, const MonotoneOptions& opt = {}) {
  return iterate(p, lambda, lower_start(p, lambda), seed_upper(p, lambda), opt);
}

enum class SolutionKind { lower, upper };

struct LowerUpperReport {
  SolutionKind kind = SolutionKind::lower;
  bool pass = false;
  double worst_margin = 0.0;     ///< signed; >= -tol required in the interior
  double boundary_margin = 0.0;  ///< signed; >= -tol required at t = 1/2
  double origin_value = 0.0;     ///< candidate at t = 0, must vanish
};

/// Checks the differential inequality
///     lower:  u'' <= u^2/(8t^2) + lambda/2,     upper: u'' >= ...
/// at interior nodes by central differences, and the boundary inequality
/// oriented for a non-positive kernel:
///     P1  lower u(1/2) >= 0            upper u(1/2) <= 0
///     P2  lower u'(1/2) >= 0           upper u'(1/2) <= 0
///     P3  lower u(1/2) - u'(1/2) <= 0  upper u(1/2) - u'(1/2) >= 0
/// `t` must be uniform on [0, 1/2].
inline LowerUpperReport verify_lower_upper(ProblemKind p, std::span<const double> t, std::span<const double> u,
                                           double lambda, SolutionKind kind, double tol = 1e-4) {
  if (t.size() != u.size() || t.size() < 4) throw ConfigError("candidate needs >= 4 samples on its grid");
  const std::size_t n = t.size();
  const double h = t[1] - t[0];
  const double sgn = kind == SolutionKind::lower ? -1.0 : 1.0;

  LowerUpperReport rep;
  rep.kind = kind;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double upp = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (h * h);
    const double rhs = u[i] * u[i] / (8.0 * t[i] * t[i]) + 0.5 * lambda;
    rep.worst_margin = std::min(rep.worst_margin, sgn * (upp - rhs));
  }
  const double uh = u[n - 1];
  const double duh = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  const double b = bc_residual(p, uh, duh);
  // P1/P2 lower want b >= 0; P3 lower wants b <= 0; upper flips both.
  const double orient = (p == ProblemKind::P3_Robin ? -1.0 : 1.0) * (kind == SolutionKind::lower ? 1.0 : -1.0);
  rep.boundary_margin = orient * b;
  rep.origin_value = u[0];
  rep.pass = rep.worst_margin >= -tol && rep.boundary_margin >= -tol && std::abs(u[0]) <= tol;
  return rep;
}

/// Nonlinear residual u'' - u^2/(8t^2) - lambda/2 at interior nodes, central differences.
inline double fd_residual_max(std::span<const double> t, std::span<const double> u, double lambda) {
  const double h = t[1] - t[0];
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double upp = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (h * h);
    m = std::max(m, std::abs(upp - u[i] * u[i] / (8.0 * t[i] * t[i]) - 0.5 * lambda));
  }
  return m;
}

}  // namespace epibvp
