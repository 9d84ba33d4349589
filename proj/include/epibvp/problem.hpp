#pragma once

#include <array>
#include <string>
#include <string_view>

#include "epibvp/errors.hpp"

namespace epibvp {

/// Which boundary condition closes  u'' = u^2/(8t^2) + lambda/2  at t = 1/2.
/// All three share the regularity condition sqrt(t) u'(t) -> 0 at t = 0.
enum class ProblemKind {
  P1_Dirichlet,      ///< u(1/2) = 0
  P2_NeumannAtHalf,  ///< u'(1/2) = 0
  P3_Robin,          ///< u(1/2) = u'(1/2)
};

inline constexpr std::array<ProblemKind, 3> kAllProblems{ProblemKind::P1_Dirichlet, ProblemKind::P2_NeumannAtHalf,
                                                         ProblemKind::P3_Robin};

/// Short CLI / file-name tag: p1, p2, p3.
inline std::string_view tag(ProblemKind p) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return "p1";
    case ProblemKind::P2_NeumannAtHalf: return "p2";
    case ProblemKind::P3_Robin: return "p3";
  }
  return "?";
}

inline ProblemKind parse_problem(std::string_view s) {
  if (s == "p1" || s == "P1" || s == "1") return ProblemKind::P1_Dirichlet;
  if (s == "p2" || s == "P2" || s == "2") return ProblemKind::P2_NeumannAtHalf;
  if (s == "p3" || s == "P3" || s == "3") return ProblemKind::P3_Robin;
  throw ConfigError("unknown problem '" + std::string(s) + "' (expected p1, p2 or p3)");
}

/// Boundary condition of the reduced problem at t = 1/2.
inline std::string_view reduced_bc(ProblemKind p) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return "u(1/2)=0";
    case ProblemKind::P2_NeumannAtHalf: return "u'(1/2)=0";
    case ProblemKind::P3_Robin: return "u(1/2)=u'(1/2)";
  }
  return "?";
}

/// Boundary condition of the radial profile at r = 1 implied by the reduced
/// one through w = r phi', t = r^2/2 (phi''(1) = u'(1/2) - u(1/2)).
inline std::string_view radial_bc(ProblemKind p) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return "phi(1)=0, phi'(1)=0";
    case ProblemKind::P2_NeumannAtHalf: return "phi(1)=0, phi'(1)+phi''(1)=0";
    case ProblemKind::P3_Robin: return "phi(1)=0, phi''(1)=0";
  }
  return "?";
}

/// Residual of the t = 1/2 boundary condition given u(1/2) and u'(1/2).
inline double bc_residual(ProblemKind p, double u_half, double du_half) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return u_half;
    case ProblemKind::P2_NeumannAtHalf: return du_half;
    case ProblemKind::P3_Robin: return u_half - du_half;
  }
  return 0.0;
}

/// The linear part of every iterate's leading term is  -(lambda/4) t (a - t);
/// a = 1/2, 1, 3/2 for P1, P2, P3.
inline double template_root(ProblemKind p) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return 0.5;
    case ProblemKind::P2_NeumannAtHalf: return 1.0;
    case ProblemKind::P3_Robin: return 1.5;
  }
  return 0.0;
}

}  // namespace epibvp
