#pragma once

// JSON / CSV artifacts. Every number goes out with 17 significant digits so
// doubles round-trip; objects keep insertion order so identical inputs give
// byte-identical files.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "epibvp/adm.hpp"
#include "epibvp/errors.hpp"
#include "epibvp/greens.hpp"
#include "epibvp/lambda_scan.hpp"
#include "epibvp/monotone.hpp"
#include "epibvp/power_series.hpp"
#include "epibvp/radial.hpp"

namespace epibvp::io {

using Json = nlohmann::ordered_json;

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Shortest round-trip text, for file names ("31.94", "-1", "0").
inline std::string short_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace detail {

inline void dump(const Json& j, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump(e, out, flat ? -1 : indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? fmt17(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Serializes with %.17g floats; indent < 0 gives a single line.
inline std::string dump17(const Json& j, int indent = 2) {
  std::string out;
  detail::dump(j, out, indent, 0);
  out += '\n';
  return out;
}

inline Json to_json(const PowerSeries& s) {
  Json arr = Json::array();
  for (const auto& [k, a] : s.terms()) arr.push_back(Json::array({k, a}));
  return arr;
}

inline Json branch_record(const AdmBranch& b, std::span<const double> grid) {
  Json j;
  j["problem"] = std::string(tag(b.problem));
  j["lambda"] = b.lambda;
  j["c"] = b.c;
  j["branch_label"] = std::string(to_string(b.label));
  j["n_terms"] = b.n_terms;
  j["residual_max"] = b.residual_max;
  j["f_at_c"] = b.f_at_c;
  j["near_critical"] = b.near_critical;
  j["boundary_condition"] = std::string(reduced_bc(b.problem));
  j["boundary_defect"] = boundary_defect(b.problem, b.solution);
  Json samples = Json::array();
  for (const auto& rp : residual(b, grid)) samples.push_back(Json::array({rp.t, b.solution.eval(rp.t), rp.value}));
  j["samples"] = std::move(samples);
  j["solution"] = to_json(b.solution);
  return j;
}

inline Json to_json(const SignReport& r) {
  Json j;
  j["problem"] = std::string(tag(r.problem));
  j["k"] = r.k;
  j["resolution"] = r.resolution;
  j["max_value"] = r.max_value;
  j["pass"] = r.pass;
  return j;
}

inline Json to_json(const IterationTrace& tr) {
  Json j;
  j["problem"] = std::string(tag(tr.problem));
  j["k"] = tr.k;
  j["lambda"] = tr.lambda;
  j["seed"] = {{"C", tr.seed.C}, {"A", tr.seed.A}};
  j["converged"] = tr.converged;
  j["iterations"] = tr.iterations;
  j["final_gap"] = tr.final_gap;
  j["ordering_ok"] = tr.ordering_ok;
  j["worst_margin"] = tr.worst_margin;
  Json steps = Json::array();
  for (const auto& s : tr.steps)
    steps.push_back({{"n", s.n},
                     {"alpha_change", s.alpha_change},
                     {"beta_change", s.beta_change},
                     {"alpha_margin", s.alpha_margin},
                     {"beta_margin", s.beta_margin},
                     {"sandwich", s.sandwich}});
  j["steps"] = std::move(steps);
  j["t"] = tr.grid;
  j["alpha"] = tr.alpha();
  j["beta"] = tr.beta();
  return j;
}

inline Json to_json(const CriticalReport& r) {
  Json j;
  j["problem"] = std::string(tag(r.problem));
  j["n_terms"] = r.n_terms;
  j["tol_lambda"] = r.tol_lambda;
  j["lambda_lo"] = r.lambda_lo;
  j["lambda_hi"] = r.lambda_hi;
  j["lambda_critical"] = r.midpoint();
  j["bound_interval"] = Json::array({r.bound_interval.first, r.bound_interval.second});
  j["within_bounds"] = r.within_bounds;
  Json probes = Json::array();
  for (const auto& p : r.probes) probes.push_back({{"lambda", p.lambda}, {"count", p.count}, {"c", p.c}});
  j["probes"] = std::move(probes);
  return j;
}

inline Json to_json(ProblemKind p, const std::vector<ExistenceRow>& rows) {
  Json j;
  j["problem"] = std::string(tag(p));
  j["monotone"] = existence_is_monotone(rows);
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json labels = Json::array();
    for (auto l : r.labels) labels.push_back(std::string(to_string(l)));
    arr.push_back({{"lambda", r.lambda}, {"count", r.count}, {"c", r.c}, {"labels", labels}});
  }
  j["rows"] = std::move(arr);
  return j;
}

inline std::string radial_csv(const RadialProfile& p) {
  std::string out = "r,w,phi,residual\n";
  for (std::size_t i = 0; i < p.r.size(); ++i)
    out += fmt17(p.r[i]) + ',' + fmt17(p.w[i]) + ',' + fmt17(p.phi[i]) + ',' + fmt17(p.residual[i]) + '\n';
  return out;
}

/// lambda,count,c_1,c_2,... (missing roots left empty).
inline std::string existence_csv(const std::vector<ExistenceRow>& rows) {
  std::size_t width = 2;
  for (const auto& r : rows) width = std::max(width, r.c.size());
  std::string out = "lambda,count";
  for (std::size_t i = 0; i < width; ++i) out += ",c" + std::to_string(i + 1);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt17(r.lambda) + ',' + std::to_string(r.count);
    for (std::size_t i = 0; i < width; ++i) out += ',' + (i < r.c.size() ? fmt17(r.c[i]) : std::string());
    out += '\n';
  }
  return out;
}

/// One column per branch, one row per radius.
struct TableColumn {
  std::string name;
  std::vector<ResidualRow> rows;
};

inline std::string residual_table_csv(const std::vector<TableColumn>& cols) {
  std::string out = "r";
  for (const auto& c : cols) out += ',' + c.name;
  out += '\n';
  if (cols.empty()) return out;
  for (std::size_t i = 0; i < cols.front().rows.size(); ++i) {
    out += fmt17(cols.front().rows[i].r);
    for (const auto& c : cols) out += ',' + fmt17(c.rows[i].residual);
    out += '\n';
  }
  return out;
}

inline std::string trace_csv(const IterationTrace& tr) {
  std::string out = "t,alpha,beta\n";
  for (std::size_t i = 0; i < tr.grid.size(); ++i)
    out += fmt17(tr.grid[i]) + ',' + fmt17(tr.alpha()[i]) + ',' + fmt17(tr.beta()[i]) + '\n';
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << content;
  if (!f) throw ConfigError("write failed for " + path.string());
}

}  // namespace epibvp::io
