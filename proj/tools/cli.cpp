#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epibvp/adm.hpp"
#include "epibvp/greens.hpp"
#include "epibvp/io.hpp"
#include "epibvp/lambda_scan.hpp"
#include "epibvp/monotone.hpp"
#include "epibvp/radial.hpp"

namespace epibvp::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(s), &used);
    if (used != trim(s).size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " '" + s + "'");
  }
}

/// key = value lines; '#' starts a comment; keys normalized to dashes.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') && val.back() == val.front())
      val = val.substr(1, val.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    kv.emplace_back(key, val);
  }
  return kv;
}

struct Common {
  std::string out = "out";
  std::string config;
};

struct Context {
  fs::path out_dir;
  std::ostream& out;
  std::ostream& err;
};

std::string branch_stem(ProblemKind p, double lambda, const std::string& label) {
  return std::string(tag(p)) + "_" + io::short_number(lambda) + "_" + label;
}

void emit(Context& ctx, const std::string& name, const std::string& content) {
  const fs::path path = ctx.out_dir / name;
  io::write_file(path, content);
  ctx.out << "wrote " << path.string() << '\n';
}

// ---- solve ---------------------------------------------------------------

struct SolveOpts {
  std::string problem;
  double lambda = 0.0;
  int n_terms = 15;
  std::string engine = "adm";
  double k = -1.0;
  int max_iter = 200;
  double tol = 1e-10;
  std::string format = "json";
  int points = 1001;
  double c_lo = -60.0;
  double c_hi = 60.0;
};

AdmConfig adm_config(int n_terms, double c_lo = -60.0, double c_hi = 60.0) {
  AdmConfig cfg;
  cfg.n_terms = n_terms;
  cfg.c_lo = c_lo;
  cfg.c_hi = c_hi;
  cfg.validate();
  return cfg;
}

Json monotone_limit_record(const IterationTrace& tr, const std::vector<double>& u, const std::string& limit) {
  Json j;
  j["problem"] = std::string(tag(tr.problem));
  j["lambda"] = tr.lambda;
  j["engine"] = "monotone";
  j["limit"] = limit;
  j["k"] = tr.k;
  j["converged"] = tr.converged;
  j["iterations"] = tr.iterations;
  j["final_gap"] = tr.final_gap;
  j["residual_max_fd"] = fd_residual_max(tr.grid, u, tr.lambda);
  Json samples = Json::array();
  for (std::size_t i = 0; i < tr.grid.size(); i += 16) samples.push_back(Json::array({tr.grid[i], u[i]}));
  j["samples"] = std::move(samples);
  return j;
}

int cmd_solve(const SolveOpts& o, Context& ctx) {
  const ProblemKind p = parse_problem(o.problem);
  if (o.engine != "adm" && o.engine != "monotone" && o.engine != "both")
    throw ConfigError("engine must be adm, monotone or both");
  if (o.format != "json" && o.format != "csv") throw ConfigError("format must be json or csv");
  if (o.points < 8) throw ConfigError("points must be >= 8");
  const bool run_adm = o.engine != "monotone";
  const bool run_mono = o.engine != "adm";
  if (run_mono) (void)GreensKernel(p, o.k);  // validate k before any work

  std::vector<AdmBranch> branches;
  if (run_adm) {
    const AdmConfig cfg = adm_config(o.n_terms, o.c_lo, o.c_hi);
    branches = solve_branches(p, o.lambda, cfg);
    Json summary = Json::array();
    for (const auto& b : branches) {
      const std::string stem = branch_stem(p, o.lambda, std::string(to_string(b.label)));
      const auto prof = to_radial(b, static_cast<std::size_t>(o.points));
      if (o.format == "json") emit(ctx, stem + ".json", io::dump17(io::branch_record(b, cfg.grid)));
      emit(ctx, stem + ".csv", io::radial_csv(prof));
      if (b.near_critical) ctx.err << "warning: " << stem << " is near-critical (roots within 1e-4)\n";
    }
    if (o.format == "csv") {
      std::string s = "problem,lambda,branch_label,c,n_terms,residual_max\n";
      for (const auto& b : branches)
        s += std::string(tag(p)) + ',' + io::fmt17(o.lambda) + ',' + std::string(to_string(b.label)) + ',' +
             io::fmt17(b.c) + ',' + std::to_string(b.n_terms) + ',' + io::fmt17(b.residual_max) + '\n';
      emit(ctx, std::string(tag(p)) + "_" + io::short_number(o.lambda) + "_branches.csv", s);
    }
  }

  if (run_mono) {
    MonotoneOptions mo;
    mo.k = o.k;
    mo.max_iter = o.max_iter;
    mo.tol = o.tol;
    const IterationTrace tr = iterate(p, o.lambda, mo);
    const std::string base = std::string(tag(p)) + "_" + io::short_number(o.lambda) + "_monotone";
    for (const auto& [limit, u] : {std::pair{std::string("alpha"), tr.alpha()}, std::pair{std::string("beta"), tr.beta()}}) {
      if (o.format == "json") {
        emit(ctx, base + "_" + limit + ".json", io::dump17(monotone_limit_record(tr, u, limit)));
      } else {
        std::string s = "t,u\n";
        for (std::size_t i = 0; i < tr.grid.size(); ++i) s += io::fmt17(tr.grid[i]) + ',' + io::fmt17(u[i]) + '\n';
        emit(ctx, base + "_" + limit + ".csv", s);
      }
    }
    if (!tr.converged) ctx.err << "warning: monotone iteration did not converge in " << o.max_iter << " steps\n";

    if (run_adm) {
      Json gap;
      gap["problem"] = std::string(tag(p));
      gap["lambda"] = o.lambda;
      Json rows = Json::array();
      for (const auto& [limit, u] : {std::pair{std::string("alpha"), tr.alpha()}, std::pair{std::string("beta"), tr.beta()}}) {
        Json per = Json::object();
        std::string nearest;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : branches) {
          double g = 0.0;
          for (std::size_t i = 0; i < tr.grid.size(); ++i) g = std::max(g, std::abs(b.solution.eval(tr.grid[i]) - u[i]));
          per[std::string(to_string(b.label))] = g;
          if (g < best) {
            best = g;
            nearest = std::string(to_string(b.label));
          }
        }
        rows.push_back({{"limit", limit}, {"nearest_branch", nearest}, {"max_gap", best}, {"gaps", per}});
      }
      gap["engines"] = Json::array({"adm", "monotone"});
      gap["comparisons"] = std::move(rows);
      emit(ctx, base + "_engine_gap.json", io::dump17(gap));
    }
  }
  return kOk;
}

// ---- scan ----------------------------------------------------------------

struct ScanOpts {
  std::string problem = "all";
  double tol = 1e-3;
  std::optional<double> lambda_max;
  int n_terms = 15;
};

std::vector<ProblemKind> problems_of(const std::string& s) {
  if (s == "all") return {kAllProblems.begin(), kAllProblems.end()};
  return {parse_problem(s)};
}

int cmd_scan(const ScanOpts& o, Context& ctx) {
  const AdmConfig cfg = adm_config(o.n_terms);
  for (ProblemKind p : problems_of(o.problem)) {
    const auto rep = find_critical(p, cfg, o.tol, o.lambda_max);
    emit(ctx, "scan_" + std::string(tag(p)) + ".json", io::dump17(io::to_json(rep)));
    ctx.out << tag(p) << " lambda_critical in [" << io::fmt17(rep.lambda_lo) << ", " << io::fmt17(rep.lambda_hi)
            << "]" << (rep.within_bounds ? "" : " (outside proven bounds)") << '\n';
  }
  return kOk;
}

// ---- existence-profile ---------------------------------------------------

struct ProfileOpts {
  std::string problem = "all";
  std::string lambdas;
  int n_terms = 15;
  int threads = 0;
  std::string format = "csv";
};

int cmd_profile(const ProfileOpts& o, Context& ctx) {
  const AdmConfig cfg = adm_config(o.n_terms);
  if (o.threads < 0) throw ConfigError("threads must be >= 0");
  if (o.format != "json" && o.format != "csv") throw ConfigError("format must be json or csv");
  for (ProblemKind p : problems_of(o.problem)) {
    std::vector<double> lams;
    if (o.lambdas.empty()) {
      const double top = critical_bounds(p).second + 10.0;
      for (int i = 0; 5.0 * i <= top; ++i) lams.push_back(5.0 * i);
    } else {
      lams = parse_lambda_list(o.lambdas);
    }
    const auto rows = existence_profile(p, lams, cfg, static_cast<unsigned>(o.threads));
    const std::string stem = "existence_" + std::string(tag(p));
    if (o.format == "csv")
      emit(ctx, stem + ".csv", io::existence_csv(rows));
    else
      emit(ctx, stem + ".json", io::dump17(io::to_json(p, rows)));
    if (!existence_is_monotone(rows)) ctx.err << "warning: " << tag(p) << " branch count is not monotone in lambda\n";
  }
  return kOk;
}

// ---- monotone ------------------------------------------------------------

struct MonotoneOpts {
  std::string problem;
  double lambda = 0.0;
  double k = -1.0;
  int max_iter = 200;
  double tol = 1e-10;
  int panels = 2048;
  std::string format = "json";
};

int cmd_monotone(const MonotoneOpts& o, Context& ctx) {
  const ProblemKind p = parse_problem(o.problem);
  if (o.panels < 8) throw ConfigError("panels must be >= 8");
  if (o.format != "json" && o.format != "csv") throw ConfigError("format must be json or csv");
  MonotoneOptions mo;
  mo.k = o.k;
  mo.max_iter = o.max_iter;
  mo.tol = o.tol;
  mo.panels = static_cast<std::size_t>(o.panels);
  const auto tr = iterate(p, o.lambda, mo);
  const std::string stem = "monotone_" + std::string(tag(p)) + "_" + io::short_number(o.lambda);
  if (o.format == "json")
    emit(ctx, stem + ".json", io::dump17(io::to_json(tr)));
  else
    emit(ctx, stem + ".csv", io::trace_csv(tr));
  ctx.out << (tr.converged ? "converged" : "not converged") << " after " << tr.iterations
          << " iterations, gap " << io::fmt17(tr.final_gap) << '\n';
  return tr.converged ? kOk : kNumericalFailure;
}

// ---- greens-check --------------------------------------------------------

struct GreensOpts {
  std::string problem = "all";
  std::string k;
  int samples = 5;
  int resolution = 200;
};

int cmd_greens(const GreensOpts& o, Context& ctx) {
  if (o.samples < 1) throw ConfigError("samples must be >= 1");
  if (o.resolution < 2) throw ConfigError("resolution must be >= 2");
  if (o.k.empty()) throw ConfigError("--k is required (value, list or a..b range)");
  const auto ks = parse_k_range(o.k, o.samples);
  bool any_valid = false;
  bool all_pass = true;
  for (ProblemKind p : problems_of(o.problem)) {
    Json j;
    j["problem"] = std::string(tag(p));
    Json reports = Json::array();
    bool problem_pass = true;
    for (double k : ks) {
      try {
        const GreensKernel kern(p, k);
        const auto rep = sign_check(kern, o.resolution);
        reports.push_back(io::to_json(rep));
        any_valid = true;
        problem_pass = problem_pass && rep.pass;
      } catch (const OutOfValidity& e) {
        reports.push_back({{"problem", std::string(tag(p))}, {"k", k}, {"error", "OutOfValidity"}, {"message", e.what()}});
        ctx.err << "OutOfValidity: " << e.what() << '\n';
      }
    }
    j["all_pass"] = problem_pass;
    j["reports"] = std::move(reports);
    all_pass = all_pass && problem_pass;
    emit(ctx, "greens_" + std::string(tag(p)) + ".json", io::dump17(j));
  }
  if (!any_valid) throw OutOfValidity("every requested k is outside the kernel validity range");
  return all_pass ? kOk : kNumericalFailure;
}

// ---- residual-table ------------------------------------------------------

struct TableOpts {
  std::string problem;
  std::string lambdas;
  int n_terms = 25;
};

std::string default_table_lambdas(ProblemKind p) {
  switch (p) {
    case ProblemKind::P1_Dirichlet: return "0,166,-1";
    case ProblemKind::P2_NeumannAtHalf: return "0,31.94,-1";
    case ProblemKind::P3_Robin: return "0,11.34,-1";
  }
  return "0";
}

int cmd_table(const TableOpts& o, Context& ctx) {
  const ProblemKind p = parse_problem(o.problem);
  const AdmConfig cfg = adm_config(o.n_terms);
  const auto lams = parse_lambda_list(o.lambdas.empty() ? default_table_lambdas(p) : o.lambdas);
  std::vector<io::TableColumn> cols;
  Json j;
  j["problem"] = std::string(tag(p));
  j["n_terms"] = o.n_terms;
  Json jc = Json::array();
  for (double lam : lams) {
    for (const auto& b : solve_branches(p, lam, cfg)) {
      io::TableColumn col{io::short_number(lam) + ":" + std::string(to_string(b.label)), residual_table(b)};
      Json rows = Json::array();
      for (const auto& r : col.rows) rows.push_back(Json::array({r.r, r.residual}));
      jc.push_back({{"lambda", lam}, {"branch_label", std::string(to_string(b.label))}, {"c", b.c}, {"rows", rows}});
      cols.push_back(std::move(col));
    }
  }
  j["columns"] = std::move(jc);
  const std::string stem = "residuals_" + std::string(tag(p));
  emit(ctx, stem + ".csv", io::residual_table_csv(cols));
  emit(ctx, stem + ".json", io::dump17(j));
  return kOk;
}

}  // namespace

std::vector<double> parse_lambda_list(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty lambda list");
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("lambda range must be start:step:stop");
    const double a = to_double(parts[0], "lambda start");
    const double step = to_double(parts[1], "lambda step");
    const double b = to_double(parts[2], "lambda stop");
    if (!(step > 0.0) || b < a) throw ConfigError("lambda range needs step > 0 and stop >= start");
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    if (n > 100000) throw ConfigError("lambda range too long");
    for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(to_double(part, "lambda"));
  return out;
}

std::vector<double> parse_k_range(const std::string& text, int samples) {
  const std::string s = trim(text);
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(to_double(part, "k"));
    if (out.empty()) throw ConfigError("empty k list");
    return out;
  }
  const double a = to_double(s.substr(0, dots), "k range start");
  const double b = to_double(s.substr(dots + 2), "k range end");
  if (b < a) throw ConfigError("k range must be ascending");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (samples == 1) return {a};
  std::vector<double> out;
  for (int i = 0; i < samples; ++i) out.push_back(a + (b - a) * i / (samples - 1));
  return out;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiple radial solutions of the stationary MBE boundary-value problems", "epibvp"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--out", common.out, "output directory (EPIBVP_OUT overrides the default and config value)");
  app.add_option("--config", common.config, "flat key = value file; command-line flags take precedence");

  SolveOpts so;
  auto* solve = app.add_subcommand("solve", "all branches at one lambda (ADM and/or monotone engine)");
  solve->add_option("--problem", so.problem, "p1 | p2 | p3")->required();
  solve->add_option("--lambda", so.lambda)->required();
  solve->add_option("--n-terms", so.n_terms, "ADM correction terms")->capture_default_str();
  solve->add_option("--engine", so.engine, "adm | monotone | both")->capture_default_str();
  solve->add_option("--k", so.k, "monotone shift")->capture_default_str();
  solve->add_option("--max-iter", so.max_iter)->capture_default_str();
  solve->add_option("--tol", so.tol, "monotone convergence tolerance")->capture_default_str();
  solve->add_option("--format", so.format, "json | csv")->capture_default_str();
  solve->add_option("--points", so.points, "radial grid points")->capture_default_str();
  solve->add_option("--c-lo", so.c_lo)->capture_default_str();
  solve->add_option("--c-hi", so.c_hi)->capture_default_str();

  ScanOpts sc;
  double lambda_max = 0.0;
  auto* scan = app.add_subcommand("scan", "bisect for the critical lambda");
  scan->add_option("--problem", sc.problem, "p1 | p2 | p3 | all")->capture_default_str();
  scan->add_option("--tol", sc.tol, "bisection width")->capture_default_str();
  auto* lmax_opt = scan->add_option("--lambda-max", lambda_max, "upper end of the bracket");
  scan->add_option("--n-terms", sc.n_terms)->capture_default_str();

  ProfileOpts po;
  auto* prof = app.add_subcommand("existence-profile", "branch count over a lambda grid");
  prof->add_option("--problem", po.problem, "p1 | p2 | p3 | all")->capture_default_str();
  prof->add_option("--lambdas", po.lambdas, "list a,b,c or range start:step:stop");
  prof->add_option("--n-terms", po.n_terms)->capture_default_str();
  prof->add_option("--threads", po.threads, "0 = hardware concurrency")->capture_default_str();
  prof->add_option("--format", po.format, "json | csv")->capture_default_str();

  MonotoneOpts mo;
  auto* mono = app.add_subcommand("monotone", "monotone lower/upper iteration");
  mono->add_option("--problem", mo.problem)->required();
  mono->add_option("--lambda", mo.lambda)->required();
  mono->add_option("--k", mo.k)->capture_default_str();
  mono->add_option("--max-iter", mo.max_iter)->capture_default_str();
  mono->add_option("--tol", mo.tol)->capture_default_str();
  mono->add_option("--panels", mo.panels)->capture_default_str();
  mono->add_option("--format", mo.format, "json | csv")->capture_default_str();

  GreensOpts go;
  auto* greens = app.add_subcommand("greens-check", "sign of the shifted Green's kernels");
  greens->add_option("--problem", go.problem, "p1 | p2 | p3 | all")->capture_default_str();
  greens->add_option("--k", go.k, "value, list or a..b range")->required();
  greens->add_option("--samples", go.samples, "points in an a..b range")->capture_default_str();
  greens->add_option("--resolution", go.resolution)->capture_default_str();

  TableOpts to;
  auto* table = app.add_subcommand("residual-table", "residuals at r = 0, 0.1, ..., 0.9");
  table->add_option("--problem", to.problem)->required();
  table->add_option("--lambdas", to.lambdas, "list or start:step:stop");
  table->add_option("--n-terms", to.n_terms)->capture_default_str();

  try {
    // Splice config values in right after the subcommand name so that later
    // command-line flags win (TakeLast).
    std::vector<std::string> args = args_in;
    std::string config_path;
    bool cli_out = false;
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
      if (args[i] == "--out" || args[i].rfind("--out=", 0) == 0) cli_out = true;
    }
    if (!config_path.empty()) {
      const auto kv = read_config(config_path);
      std::size_t sub_pos = 0;
      CLI::App* sub = nullptr;
      for (std::size_t i = 1; i < args.size() && !sub; ++i)
        for (auto* s : app.get_subcommands({}))
          if (s->get_name() == args[i]) {
            sub = s;
            sub_pos = i;
          }
      if (sub) {
        std::vector<std::string> injected;
        for (const auto& [key, val] : kv) {
          if (key == "config") throw ConfigError("config files cannot include other config files");
          if (sub->get_option_no_throw("--" + key) || key == "out") {
            injected.push_back("--" + key + "=" + val);
            continue;
          }
          bool known = false;
          for (auto* s : app.get_subcommands({})) known = known || s->get_option_no_throw("--" + key) != nullptr;
          if (!known) throw ConfigError("unknown config key '" + key + "'");
        }
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, injected.begin(), injected.end());
      }
    }

    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);

    if (!cli_out)
      if (const char* env = std::getenv("EPIBVP_OUT"); env && *env) common.out = env;
    Context ctx{fs::path(common.out), out, err};

    if (*solve) return cmd_solve(so, ctx);
    if (*scan) {
      if (lmax_opt->count() > 0) sc.lambda_max = lambda_max;
      return cmd_scan(sc, ctx);
    }
    if (*prof) return cmd_profile(po, ctx);
    if (*mono) return cmd_monotone(mo, ctx);
    if (*greens) return cmd_greens(go, ctx);
    if (*table) return cmd_table(to, ctx);
    return kConfigError;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NoRealRoot& e) {
    err << "no real c: " << e.what() << '\n';
    return kNoRealRoot;
  } catch (const BracketFailure& e) {
    err << "bracket failure: " << e.what() << '\n';
    return kBracketFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const OutOfValidity& e) {
    err << "OutOfValidity: " << e.what() << '\n';
    return kConfigError;
  } catch (const NoAdmissibleSeed& e) {
    err << "no admissible seed: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace epibvp::cli
