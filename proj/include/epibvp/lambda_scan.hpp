#pragma once

// Existence in lambda: bisection for the largest lambda that still carries a
// pair of branches, and branch-count profiles over lambda grids.

#include <algorithm>
#include <cstddef>
#include <future>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include "epibvp/adm.hpp"
#include "epibvp/errors.hpp"
#include "epibvp/problem.hpp"

namespace epibvp {

/// Proven existence window for the critical lambda of each problem.
inline std::pair<double, double> critical_bounds(ProblemKind p) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return {144.0, 307.0};
    case ProblemKind::P2_NeumannAtHalf: return {256.0 / 9.0, 384.0 / 11.0};
    case ProblemKind::P3_Robin: return {9.0, 11.63};
  }
  return {0.0, 0.0};
}

struct ScanProbe {
  double lambda = 0.0;
  int count = 0;
  std::vector<double> c;  ///< ascending
};

struct CriticalReport {
  ProblemKind problem = ProblemKind::P1_Dirichlet;
  int n_terms = 0;
  double tol_lambda = 0.0;
  double lambda_lo = 0.0;  ///< largest probe with two branches
  double lambda_hi = 0.0;  ///< smallest probe without any
  std::pair<double, double> bound_interval;
  bool within_bounds = false;
  std::vector<ScanProbe> probes;  ///< in evaluation order

  double midpoint() const { return 0.5 * (lambda_lo + lambda_hi); }
};

/// Branch count and c values at one lambda; NoRealRoot counts as zero.
inline ScanProbe probe_existence(ProblemKind p, double lambda, const AdmConfig& cfg) {
  ScanProbe pr;
  pr.lambda = lambda;
  try {
    for (const auto& b : solve_branches(p, lambda, cfg)) pr.c.push_back(b.c);
  } catch (const NoRealRoot&) {
  }
  std::sort(pr.c.begin(), pr.c.end());
  pr.count = static_cast<int>(pr.c.size());
  return pr;
}

/// Bisection on [0, lambda_max] (default: upper bound + 10) for the edge of
/// existence, where "exists" means at least two branches.
inline CriticalReport find_critical(ProblemKind p, const AdmConfig& cfg, double tol_lambda,
                                    std::optional<double> lambda_max = std::nullopt) {
  cfg.validate();
  if (!(tol_lambda > 0.0)) throw ConfigError("tol_lambda must be > 0");
  const auto bounds = critical_bounds(p);
  const double top = lambda_max.value_or(bounds.second + 10.0);
  if (!(top > 0.0))
    throw ConfigError("critical scan needs a positive bracket; for lambda < 0 use an existence profile");

  CriticalReport rep;
  rep.problem = p;
  rep.n_terms = cfg.n_terms;
  rep.tol_lambda = tol_lambda;
  rep.bound_interval = bounds;

  const auto exists = [&](double lam) {
    rep.probes.push_back(probe_existence(p, lam, cfg));
    return rep.probes.back().count >= 2;
  };

  double lo = 0.0;
  double hi = top;
  if (!exists(lo)) throw BracketFailure("no branch pair at lambda=0 for " + std::string(tag(p)));
  if (exists(hi)) {
    std::ostringstream msg;
    msg << "branches still exist at the bracket end lambda=" << hi << " for " << tag(p)
        << "; raise the bracket or n_terms";
    throw BracketFailure(msg.str());
  }
  while (hi - lo > tol_lambda) {
    const double mid = 0.5 * (lo + hi);
    (exists(mid) ? lo : hi) = mid;
  }
  rep.lambda_lo = lo;
  rep.lambda_hi = hi;
  const double m = rep.midpoint();
  rep.within_bounds = m >= bounds.first && m <= bounds.second;
  return rep;
}

/// |c_upper - c_lower| at the last `count` existence-side probes, in
/// increasing lambda.
inline std::vector<std::pair<double, double>> merging_gaps(const CriticalReport& rep, std::size_t count = 5) {
  std::vector<std::pair<double, double>> out;
  for (const auto& pr : rep.probes)
    if (pr.count >= 2 && pr.lambda > 0.0) out.emplace_back(pr.lambda, pr.c.back() - pr.c.front());
  std::sort(out.begin(), out.end());
  if (out.size() > count) out.erase(out.begin(), out.end() - static_cast<std::ptrdiff_t>(count));
  return out;
}

struct ExistenceRow {
  double lambda = 0.0;
  int count = 0;
  std::vector<double> c;
  std::vector<BranchLabel> labels;
};

/// Branch structure at every lambda, probed concurrently; rows keep the
/// order of `lambdas`.
inline std::vector<ExistenceRow> existence_profile(ProblemKind p, const std::vector<double>& lambdas,
                                                   const AdmConfig& cfg, unsigned threads = 0) {
  cfg.validate();
  std::vector<ExistenceRow> rows(lambdas.size());
  const auto work = [&](std::size_t i) {
    ExistenceRow r;
    r.lambda = lambdas[i];
    try {
      for (const auto& b : solve_branches(p, r.lambda, cfg)) {
        r.c.push_back(b.c);
        r.labels.push_back(b.label);
      }
    } catch (const NoRealRoot&) {
    }
    r.count = static_cast<int>(r.c.size());
    rows[i] = std::move(r);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(lambdas.size(), 1)));
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < threads; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < lambdas.size(); i += threads) work(i);
    }));
  for (auto& j : jobs) j.get();
  return rows;
}

/// Non-increasing count over lambda >= 0 (rows taken in increasing lambda).
inline bool existence_is_monotone(std::vector<ExistenceRow> rows) {
  std::erase_if(rows, [](const ExistenceRow& r) { return r.lambda < 0.0; });
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].count > rows[i - 1].count) return false;
  return true;
}

}  // namespace epibvp
