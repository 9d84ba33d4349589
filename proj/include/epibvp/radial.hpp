#pragma once

// Back to the radial profile: t = r^2/2, w(r) = u(t) = r phi'(r), phi(1) = 0.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "epibvp/adm.hpp"
#include "epibvp/errors.hpp"

namespace epibvp {

struct RadialProfile {
  ProblemKind problem = ProblemKind::P1_Dirichlet;
  double lambda = 0.0;
  double c = 0.0;
  BranchLabel label = BranchLabel::trivial;
  int n_terms = 0;
  std::vector<double> r;
  std::vector<double> w;
  std::vector<double> phi;
  std::vector<double> residual;  ///< reduced-equation residual at t = r^2/2
};

/// Phi(rho) with Phi' = w(rho)/rho = sum_k a_k 2^(-k/2) rho^(k-1), as a
/// series in rho (integer powers, stored at lattice index 2k).
inline PowerSeries radial_antiderivative(const PowerSeries& u) {
  std::vector<PowerSeries::Term> terms;
  for (const auto& [k, a] : u.terms()) {
    if (k == 0) throw DomainError("u(0) != 0: w/rho is not integrable at rho = 0");
    terms.emplace_back(2 * k, a * std::pow(2.0, -0.5 * k) / k);
  }
  return PowerSeries::from_terms(terms);
}

/// Samples on `points` uniform radii in [0, 1]; phi(r) = Phi(r) - Phi(1)
/// from the exact antiderivative, with phi(1) = 0 imposed.
inline RadialProfile to_radial(const AdmBranch& b, std::size_t points = 1001) {
  if (points < 3) throw ConfigError("radial grid needs at least 3 points");
  RadialProfile prof{b.problem, b.lambda, b.c, b.label, b.n_terms, {}, {}, {}, {}};
  const PowerSeries u_dd = b.solution.derivative().derivative();
  const PowerSeries big_phi = radial_antiderivative(b.solution);
  const double phi_1 = big_phi.eval(1.0);
  const double h = 1.0 / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double r = i + 1 == points ? 1.0 : static_cast<double>(i) * h;
    const double t = 0.5 * r * r;
    prof.r.push_back(r);
    prof.w.push_back(b.solution.eval(t));
    prof.phi.push_back(big_phi.eval(r) - phi_1);
    prof.residual.push_back(residual_at(b.solution, u_dd, b.lambda, t));
  }
  prof.phi.back() = 0.0;
  return prof;
}

struct RadialBcCheck {
  ProblemKind problem = ProblemKind::P1_Dirichlet;
  double phi_at_1 = 0.0;
  double dphi = 0.0;   ///< phi'(1), one-sided sixth order
  double ddphi = 0.0;  ///< phi''(1), one-sided sixth order
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Radial conditions at r = 1 implied by each reduced one:
///   P1: phi'(1) = 0            (tol 1e-6)
///   P2: phi'(1) + phi''(1) = 0 (tol 1e-4)
///   P3: phi''(1) = 0           (tol 1e-4)
inline RadialBcCheck radial_bc_check(const RadialProfile& prof) {
  const std::size_t n = prof.phi.size();
  if (n < 8) throw ConfigError("radial profile too short for a boundary check");
  const double h = prof.r[n - 1] - prof.r[n - 2];
  // f[j] = phi(1 - j h); one-sided sixth-order stencils
  double f[8];
  for (std::size_t j = 0; j < 8; ++j) f[j] = prof.phi[n - 1 - j];
  RadialBcCheck chk;
  chk.problem = prof.problem;
  chk.phi_at_1 = prof.phi.back();
  chk.dphi = (147.0 * f[0] - 360.0 * f[1] + 450.0 * f[2] - 400.0 * f[3] + 225.0 * f[4] - 72.0 * f[5] + 10.0 * f[6]) /
             (60.0 * h);
  chk.ddphi = (938.0 * f[0] - 4014.0 * f[1] + 7911.0 * f[2] - 9490.0 * f[3] + 7380.0 * f[4] - 3618.0 * f[5] +
               1019.0 * f[6] - 126.0 * f[7]) /
              (180.0 * h * h);
  switch (prof.problem) {
    case ProblemKind::P1_Dirichlet:
      chk.defect = chk.dphi;
      chk.tolerance = 1e-6;
      break;
    case ProblemKind::P2_NeumannAtHalf:
      chk.defect = chk.dphi + chk.ddphi;
      chk.tolerance = 1e-4;
      break;
    case ProblemKind::P3_Robin:
      chk.defect = chk.ddphi;
      chk.tolerance = 1e-4;
      break;
  }
  chk.pass = chk.phi_at_1 == 0.0 && std::abs(chk.defect) <= chk.tolerance;
  return chk;
}

struct ResidualRow {
  double r = 0.0;
  double t = 0.0;
  double residual = 0.0;
};

inline std::vector<double> default_table_radii() {
  std::vector<double> r;
  for (int i = 0; i <= 9; ++i) r.push_back(i / 10.0);
  return r;
}

/// Reduced residual at t = r^2/2; r = 0 reports 0.
inline std::vector<ResidualRow> residual_table(const AdmBranch& b, std::span<const double> radii) {
  const PowerSeries u_dd = b.solution.derivative().derivative();
  std::vector<ResidualRow> rows;
  for (double r : radii) {
    if (r < 0.0 || r > 1.0) throw DomainError("table radius outside [0, 1]");
    const double t = 0.5 * r * r;
    rows.push_back({r, t, residual_at(b.solution, u_dd, b.lambda, t)});
  }
  return rows;
}

inline std::vector<ResidualRow> residual_table(const AdmBranch& b) {
  const auto radii = default_table_radii();
  return residual_table(b, radii);
}

}  // namespace epibvp
