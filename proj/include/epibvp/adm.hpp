#pragma once

// Decomposition schemes for  u'' = u^2/(8t^2) + lambda/2  on (0, 1/2].
//
// Each boundary condition is folded into a Fredholm integral equation whose
// only unknown global quantity is the slope constant c in
//     u0(t) = -c t - (lambda/4) t (a - t).
// Once c is fixed the remaining recurrence is a Volterra map, shared by all
// three problems:
//     u_{n+1}(t) = (1/4) int_0^t (s - t) A_n(s) / s^2 ds,
//     A_n        = -(1/2) sum_{j=0}^{n} u_j u_{n-j}.
// c is then pinned by the self-consistency condition  F(c) = c - RHS(c) = 0,
//     RHS(c) = -int_0^{1/2} w(s) sum_{i<N} A_i(s)/s^2 ds,
// with weight w = 1/4 - s/2 (P1), 1/4 (P2), 1/4 + s/2 (P3).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "epibvp/errors.hpp"
#include "epibvp/power_series.hpp"
#include "epibvp/problem.hpp"

namespace epibvp {

enum class BranchLabel { trivial, lower, upper, positive, negative };

inline std::string_view to_string(BranchLabel b) {
  switch (b) {
    case BranchLabel::trivial: return "trivial";
    case BranchLabel::lower: return "lower";
    case BranchLabel::upper: return "upper";
    case BranchLabel::positive: return "positive";
    case BranchLabel::negative: return "negative";
  }
  return "?";
}

/// Uniform sample points t_i = i/(2m), i = 1..m.
inline std::vector<double> uniform_t_grid(int m) {
  std::vector<double> g(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) g[static_cast<std::size_t>(i - 1)] = 0.5 * i / m;
  return g;
}

struct AdmConfig {
  int n_terms = 15;  ///< correction terms u_1..u_N on top of u_0
  double c_lo = -60.0;
  double c_hi = 60.0;
  int scan_intervals = 1000;
  std::vector<double> grid = uniform_t_grid(100);
  double tol_c = 1e-9;  ///< bound on |F(c*)| at returned roots
  double tol_residual = 1e-8;

  static constexpr int kMaxTerms = 30;

  void validate() const {
    if (n_terms < 1 || n_terms > kMaxTerms)
      throw ConfigError("n_terms must lie in [1, " + std::to_string(kMaxTerms) + "], got " + std::to_string(n_terms));
    if (!(c_lo < c_hi)) throw ConfigError("c bracket must satisfy c_lo < c_hi");
    if (scan_intervals < 2) throw ConfigError("scan_intervals must be >= 2");
    if (!(tol_c > 0.0) || !(tol_residual > 0.0)) throw ConfigError("tolerances must be positive");
    for (double t : grid)
      if (!(t > 0.0 && t <= 0.5)) throw ConfigError("grid points must lie in (0, 1/2]");
  }
};

struct AdmBranch {
  ProblemKind problem = ProblemKind::P1_Dirichlet;
  double lambda = 0.0;
  double c = 0.0;
  int n_terms = 0;
  std::vector<PowerSeries> terms;  ///< u_0 .. u_N
  PowerSeries solution;            ///< sum of terms
  BranchLabel label = BranchLabel::trivial;
  double residual_max = 0.0;
  double f_at_c = 0.0;  ///< F(c), the self-consistency defect
  bool near_critical = false;
};

/// A_n for N(u) = -u^2/2:  -(1/2) sum_{j=0}^{n} u_j u_{n-j}.
inline PowerSeries adomian_poly(std::span<const PowerSeries> terms, int n) {
  if (n < 0 || static_cast<std::size_t>(n) >= terms.size())
    throw ConfigError("adomian_poly needs terms u_0..u_" + std::to_string(n));
  PowerSeries acc;
  for (int j = 0; 2 * j < n; ++j) acc += terms[static_cast<std::size_t>(j)] * terms[static_cast<std::size_t>(n - j)];
  acc *= 2.0;
  if (n % 2 == 0) acc += terms[static_cast<std::size_t>(n / 2)] * terms[static_cast<std::size_t>(n / 2)];
  return acc * -0.5;
}

/// u_0 = -c t - (lambda/4) t (a - t).
inline PowerSeries u0_template(ProblemKind p, double lambda, double c) {
  const double a = template_root(p);
  return PowerSeries::from_terms({{2, -c - 0.25 * lambda * a}, {4, 0.25 * lambda}});
}

/// (1/4) int_0^t (s - t) A(s)/s^2 ds, split as (1/4)[int s f - t int f].
inline PowerSeries volterra_step(const PowerSeries& a_n) {
  const PowerSeries f = a_n.scale_div_t2();
  PowerSeries out = f.mul_t().integrate();
  out -= f.integrate().mul_t();
  return out * 0.25;
}

namespace detail {

struct SchemeBuild {
  std::vector<PowerSeries> terms;
  PowerSeries sum_a;  ///< A_0 + ... + A_{N-1}
};

inline SchemeBuild build_scheme(ProblemKind p, double lambda, double c, int n_terms) {
  SchemeBuild b;
  b.terms.reserve(static_cast<std::size_t>(n_terms) + 1);
  b.terms.push_back(u0_template(p, lambda, c));
  for (int i = 0; i < n_terms; ++i) {
    PowerSeries a = adomian_poly(b.terms, i);
    b.terms.push_back(volterra_step(a));
    b.sum_a += a;
  }
  return b;
}

inline PowerSeries c_weight(ProblemKind p) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return PowerSeries::from_terms({{0, 0.25}, {2, -0.5}});
    case ProblemKind::P2_NeumannAtHalf: return PowerSeries::constant(0.25);
    case ProblemKind::P3_Robin: return PowerSeries::from_terms({{0, 0.25}, {2, 0.5}});
  }
  return {};
}

inline double c_rhs(ProblemKind p, const PowerSeries& sum_a) {
  const PowerSeries integrand = c_weight(p) * sum_a.scale_div_t2();
  return -integrand.integrate().eval(0.5);
}

}  // namespace detail

/// [u_0, ..., u_N] for a fixed slope constant c.
inline std::vector<PowerSeries> iterate_terms(ProblemKind p, double lambda, double c, int n_terms) {
  if (n_terms < 1) throw ConfigError("iterate_terms needs n_terms >= 1");
  return detail::build_scheme(p, lambda, c, n_terms).terms;
}

/// F(c) = c - RHS(c); roots are self-consistent slope constants.
inline double c_equation(ProblemKind p, double lambda, double c, int n_terms) {
  const auto b = detail::build_scheme(p, lambda, c, n_terms);
  return c - detail::c_rhs(p, b.sum_a);
}

struct ResidualPoint {
  double t = 0.0;
  double value = 0.0;
};

/// u'' - u^2/(8t^2) - lambda/2 using the series' exact second derivative.
/// t = 0 reports 0 (the u(0) = 0 limit).
inline double residual_at(const PowerSeries& u, const PowerSeries& u_dd, double lambda, double t) {
  if (t == 0.0) return 0.0;
  const double v = u.eval(t);
  return u_dd.eval(t) - v * v / (8.0 * t * t) - 0.5 * lambda;
}

inline std::vector<ResidualPoint> residual(const AdmBranch& branch, std::span<const double> grid) {
  const PowerSeries u_dd = branch.solution.derivative().derivative();
  std::vector<ResidualPoint> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back({t, residual_at(branch.solution, u_dd, branch.lambda, t)});
  return out;
}

inline double max_abs_residual(std::span<const ResidualPoint> pts) {
  double m = 0.0;
  for (const auto& p : pts) m = std::max(m, std::abs(p.value));
  return m;
}

/// Boundary-condition defect of a series at t = 1/2.
inline double boundary_defect(ProblemKind p, const PowerSeries& u) {
  return bc_residual(p, u.eval(0.5), u.derivative().eval(0.5));
}

/// All real roots of F inside [lo, hi]: dense sign scan, tangency probing
/// between samples, bisection, Newton polish.
inline std::vector<double> c_roots(ProblemKind p, double lambda, const AdmConfig& cfg) {
  const int n = cfg.scan_intervals;
  const auto F = [&](double c) { return c_equation(p, lambda, c, cfg.n_terms); };

  std::vector<double> cs(static_cast<std::size_t>(n) + 1);
  std::vector<double> fs(cs.size());
  for (int j = 0; j <= n; ++j) {
    cs[static_cast<std::size_t>(j)] = cfg.c_lo + (cfg.c_hi - cfg.c_lo) * j / n;
    fs[static_cast<std::size_t>(j)] = F(cs[static_cast<std::size_t>(j)]);
  }

  const auto refine = [&](double lo, double hi, double flo) {
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo));
         ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = F(mid);
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    double c = 0.5 * (lo + hi);
    // Newton with a forward-difference slope from a second series build.
    double fc = F(c);
    constexpr double h = 1e-6;
    for (int it = 0; it < 2 && fc != 0.0; ++it) {
      const double slope = (F(c + h) - fc) / h;
      if (slope == 0.0 || !std::isfinite(slope)) break;
      const double next = c - fc / slope;
      if (!(next >= lo - h && next <= hi + h)) break;
      const double fn = F(next);
      if (!(std::abs(fn) < std::abs(fc))) break;
      c = next;
      fc = fn;
    }
    return c;
  };

  std::vector<double> roots;
  for (int j = 0; j <= n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (fs[ju] == 0.0) {
      roots.push_back(cs[ju]);
      continue;
    }
    if (j < n && fs[ju + 1] != 0.0 && (fs[ju] < 0.0) != (fs[ju + 1] < 0.0)) {
      roots.push_back(refine(cs[ju], cs[ju + 1], fs[ju]));
      continue;
    }
    // Two roots hiding between samples show up as a local dip of |F|.
    if (j > 0 && j < n) {
      const double a = fs[ju - 1], b = fs[ju], d = fs[ju + 1];
      const bool same = (a < 0.0) == (b < 0.0) && (b < 0.0) == (d < 0.0) && a != 0.0 && d != 0.0;
      if (same && std::abs(b) <= std::abs(a) && std::abs(b) <= std::abs(d)) {
        const double s = b < 0.0 ? -1.0 : 1.0;
        double lo = cs[ju - 1], hi = cs[ju + 1];
        constexpr double g = 0.6180339887498949;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = s * F(x1), f2 = s * F(x2);
        for (int it = 0; it < 80 && f1 > 0.0 && f2 > 0.0; ++it) {
          if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = s * F(x1);
          } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = s * F(x2);
          }
        }
        const double xm = f1 <= f2 ? x1 : x2;
        if (std::min(f1, f2) < 0.0) {
          roots.push_back(refine(cs[ju - 1], xm, fs[ju - 1]));
          roots.push_back(refine(xm, cs[ju + 1], s * std::min(f1, f2)));
        }
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-10 * std::max(1.0, std::abs(x)); }),
              roots.end());
  return roots;
}

/// Builds the branch for one self-consistent c (label left as trivial).
inline AdmBranch make_branch(ProblemKind p, double lambda, double c, const AdmConfig& cfg) {
  AdmBranch b;
  b.problem = p;
  b.lambda = lambda;
  b.c = c;
  b.n_terms = cfg.n_terms;
  auto build = detail::build_scheme(p, lambda, c, cfg.n_terms);
  b.f_at_c = c - detail::c_rhs(p, build.sum_a);
  b.terms = std::move(build.terms);
  for (const auto& u : b.terms) b.solution += u;
  b.residual_max = max_abs_residual(residual(b, cfg.grid));
  return b;
}

namespace detail {

inline double grid_mean(const PowerSeries& u, std::span<const double> grid) {
  double s = 0.0;
  for (double t : grid) s += u.eval(t);
  return grid.empty() ? 0.0 : s / static_cast<double>(grid.size());
}

}  // namespace detail

/// Every real branch at (p, lambda), labelled by the radial profile
/// phi = -int_r^1 w/rho: a more negative u means a larger phi.
///   lambda > 0: lower (smaller phi) first, then upper;
///   lambda = 0: trivial (c = 0) and upper;
///   lambda < 0: positive (phi >= 0, u <= 0) / negative (phi <= 0, u >= 0).
inline std::vector<AdmBranch> solve_branches(ProblemKind p, double lambda, const AdmConfig& cfg) {
  cfg.validate();
  std::vector<double> roots = c_roots(p, lambda, cfg);
  if (lambda == 0.0 && cfg.c_lo <= 0.0 && cfg.c_hi >= 0.0) {
    std::erase_if(roots, [](double c) { return std::abs(c) < 1e-9; });
    roots.insert(roots.begin(), 0.0);
  }
  if (roots.empty()) {
    std::ostringstream msg;
    msg << "no real c in [" << cfg.c_lo << ", " << cfg.c_hi << "] for " << tag(p) << " at lambda=" << lambda
        << " with n_terms=" << cfg.n_terms;
    throw NoRealRoot(msg.str());
  }

  std::vector<AdmBranch> branches;
  std::vector<double> means;
  for (double c : roots) {
    branches.push_back(make_branch(p, lambda, c, cfg));
    means.push_back(detail::grid_mean(branches.back().solution, cfg.grid));
  }

  std::vector<std::size_t> order(branches.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });

  std::vector<AdmBranch> out;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    AdmBranch b = std::move(branches[order[rank]]);
    const double m = means[order[rank]];
    if (lambda > 0.0) {
      b.label = rank == 0 ? BranchLabel::lower : BranchLabel::upper;
    } else if (lambda == 0.0) {
      b.label = b.c == 0.0 ? BranchLabel::trivial : BranchLabel::upper;
    } else {
      b.label = m <= 0.0 ? BranchLabel::positive : BranchLabel::negative;
    }
    out.push_back(std::move(b));
  }
  for (std::size_t i = 0; i + 1 < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (std::abs(out[i].c - out[j].c) < 1e-4) out[i].near_critical = out[j].near_critical = true;
  return out;
}

}  // namespace epibvp
