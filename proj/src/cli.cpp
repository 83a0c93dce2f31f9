#include "rrk/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rrk/analysis.hpp"
#include "rrk/errors.hpp"
#include "rrk/krylov.hpp"
#include "rrk/matrix_market.hpp"
#include "rrk/precond.hpp"
#include "rrk/problems.hpp"

namespace rrk::cli {
namespace {

struct SourceFlags {
  std::string problem;  // gp | index2 | random-range-sym
  std::string matrix;   // Matrix Market path
  bool transpose = false;
  bool compact = false;
  double rho = 12.0;
  double gamma = 12.0;
  std::size_t n = 32;
  std::size_t rank = 16;
  double cond = 1e3;
  std::uint64_t seed = 1;
};

struct SolveFlags {
  std::string rhs = "inconsistent";
  double noise = 0.01;
  std::string method = "ab-rrgmres";
  std::string precond = "auto";
  int inner_iters = 1;
  double omega = 1.0;
  double tol = 1e-7;
  std::size_t max_iters = 0;  // 0: min(m, 10000)
  double breakdown_tol = 1e-14;
  std::string orthogonalization = "mgs";
  bool record_time = false;
  std::string output;
};

struct Setup {
  std::string method;
  std::string precond;
  int inner_iters = 1;
};

void add_source_flags(CLI::App& app, SourceFlags& s) {
  auto* problem = app.add_option("--problem", s.problem, "Generated problem: gp, index2, random-range-sym (one of --problem or --matrix is required)")
                      ->check(CLI::IsMember({"gp", "index2", "random-range-sym"}));
  auto* matrix = app.add_option("--matrix", s.matrix, "Matrix Market file (coordinate real general|symmetric)");
  problem->excludes(matrix);
  app.add_flag("--transpose", s.transpose, "Transpose the matrix after loading")->capture_default_str();
  app.add_flag("--compact", s.compact, "Remove zero rows and columns")->capture_default_str();
  app.add_option("--rho", s.rho, "Exponent rho (alpha_16 = 10^-rho)")->capture_default_str();
  app.add_option("--gamma", s.gamma, "Exponent gamma (beta_32 = 10^-gamma)")->capture_default_str();
  app.add_option("--n", s.n, "Order of the random range-symmetric matrix")->capture_default_str();
  app.add_option("--rank", s.rank, "Rank of the random range-symmetric matrix")->capture_default_str();
  app.add_option("--cond", s.cond, "Condition of the nonsingular block of the random matrix")->capture_default_str();
  app.add_option("--seed", s.seed, "Seed for the random right-hand side and random matrices")->capture_default_str();
}

void add_solver_flags(CLI::App& app, SolveFlags& f, bool with_method) {
  app.add_option("--rhs", f.rhs, "Right-hand side: inconsistent (A1/|A1| + noise) or uniform (u[0,1))")
      ->check(CLI::IsMember({"inconsistent", "uniform"}))
      ->capture_default_str();
  app.add_option("--noise", f.noise, "Noise level of the inconsistent right-hand side")->capture_default_str();
  if (with_method) {
    app.add_option("--method", f.method, "gmres, rrgmres, ab-gmres, ab-rrgmres")
        ->check(CLI::IsMember({"gmres", "rrgmres", "ab-gmres", "ab-rrgmres"}))
        ->capture_default_str();
    app.add_option("--precond", f.precond, "auto, none, at, diag-at, nrssor (auto: none for plain methods, nrssor for ab-*)")
        ->check(CLI::IsMember({"auto", "none", "at", "diag-at", "nrssor"}))
        ->capture_default_str();
  }
  app.add_option("--inner-iters", f.inner_iters, "NR-SSOR inner iterations l")->capture_default_str();
  app.add_option("--omega", f.omega, "NR-SSOR relaxation parameter, 0 < omega < 2")->capture_default_str();
  app.add_option("--tol", f.tol, "Stop when ||A^T r||/||A^T b|| < tol")->capture_default_str();
  app.add_option("--max-iters", f.max_iters, "Iteration cap (0 means min(m, 10000))")->capture_default_str();
  app.add_option("--breakdown-tol", f.breakdown_tol, "Breakdown threshold on h_{k+1,k}, relative to the operator scale")
      ->capture_default_str();
  app.add_option("--orthogonalization", f.orthogonalization, "mgs (with reorthogonalization) or cgs")
      ->check(CLI::IsMember({"mgs", "cgs"}))
      ->capture_default_str();
  app.add_flag("--record-time", f.record_time, "Write measured times to CSV output (otherwise 0, keeping files reproducible)")
      ->capture_default_str();
  app.add_option("--output", f.output, "CSV output path (default: no file)");
}

SparseMatrixCSR load_matrix(const SourceFlags& s) {
  if (s.problem.empty() == s.matrix.empty()) throw CLI::ValidationError("exactly one of --problem or --matrix is required");
  ProblemSpec spec;
  spec.rho = s.rho;
  spec.gamma = s.gamma;
  spec.seed = s.seed;
  spec.n = s.n;
  spec.rank_r = s.rank;
  spec.cond = s.cond;
  if (!s.matrix.empty()) {
    spec.family = ProblemFamily::MATRIX_MARKET;
    spec.path = s.matrix;
  } else if (s.problem == "gp") {
    spec.family = ProblemFamily::GP;
  } else if (s.problem == "index2") {
    spec.family = ProblemFamily::INDEX2;
  } else {
    spec.family = ProblemFamily::RANDOM_RANGE_SYM;
  }
  SparseMatrixCSR a = build_matrix(spec);
  if (s.transpose) a = a.transpose();
  if (s.compact) a = compact(a).matrix;
  return a;
}

Vector make_rhs(const SparseMatrixCSR& a, const SolveFlags& f, std::uint64_t seed) {
  if (f.rhs == "uniform") return uniform_vector(a.nrows(), seed);
  return make_rhs_inconsistent(a, f.noise, seed);
}

SolverOptions solver_options(const SolveFlags& f, std::size_t dim) {
  SolverOptions o;
  o.max_iters = f.max_iters ? f.max_iters : std::min<std::size_t>(dim, 10000);
  o.tol_ne = f.tol;
  o.breakdown_tol = f.breakdown_tol;
  o.orthogonalization = f.orthogonalization == "cgs" ? Orthogonalization::CGS : Orthogonalization::MGS;
  o.record_history = true;
  return o;
}

bool is_plain(const std::string& method) { return method == "gmres" || method == "rrgmres"; }

Setup resolve(const std::string& method, std::string precond, int inner_iters) {
  if (precond == "auto") precond = is_plain(method) ? "none" : "nrssor";
  if (is_plain(method) && precond != "none")
    throw CLI::ValidationError("--method " + method + " runs unpreconditioned; use ab-" + method + " for --precond " + precond);
  if (!is_plain(method) && precond == "none")
    throw CLI::ValidationError("--precond none is only valid with --method gmres or rrgmres");
  if (precond == "nrssor" && inner_iters < 1) throw CLI::ValidationError("--inner-iters must be >= 1");
  return {method, precond, precond == "nrssor" ? inner_iters : 0};
}

SolveOutcome execute(const SparseMatrixCSR& a, const Vector& b, const Setup& s, double omega, const SolverOptions& o) {
  const KrylovMethod km = (s.method == "gmres" || s.method == "ab-gmres") ? KrylovMethod::GMRES : KrylovMethod::RRGMRES;
  if (s.precond == "none") {
    const Vector x0(a.ncols(), 0.0);
    return km == KrylovMethod::GMRES ? gmres(a, b, x0, o) : rrgmres(a, b, x0, o);
  }
  const RightPreconditioner p = s.precond == "at"        ? RightPreconditioner::transpose(a)
                                : s.precond == "diag-at" ? RightPreconditioner::diagonal(a)
                                                         : RightPreconditioner::nr_ssor(a, omega, s.inner_iters);
  return ab_solve(a, p, b, o, km);
}

bool succeeded(const SolveOutcome& r, double tol) {
  switch (r.status) {
    case SolveStatus::CONVERGED_NE:
    case SolveStatus::CONVERGED_RES: return true;
    case SolveStatus::HAPPY_BREAKDOWN: return r.final_ne < tol;
    default: return false;
  }
}

ConvergenceHistory for_output(const ConvergenceHistory& h, bool record_time) {
  if (record_time) return h;
  ConvergenceHistory out;
  for (HistoryEntry e : h.entries()) {
    e.elapsed_sec = 0.0;
    out.push(e);
  }
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int cmd_generate(const SourceFlags& s, const std::string& output, std::ostream& out) {
  const SparseMatrixCSR a = load_matrix(s);
  write_matrix_market(output, a);
  out << "wrote " << a.nrows() << "x" << a.ncols() << " nnz=" << a.nnz() << " to " << output << '\n';
  return kExitOk;
}

int cmd_solve(const SourceFlags& s, const SolveFlags& f, std::ostream& out) {
  const Setup setup = resolve(f.method, f.precond, f.inner_iters);
  const SparseMatrixCSR a = load_matrix(s);
  const Vector b = make_rhs(a, f, s.seed);
  const SolveOutcome r = execute(a, b, setup, f.omega, solver_options(f, a.nrows()));
  if (!f.output.empty() && !r.history.empty()) export_history_csv(for_output(r.history, f.record_time), f.output);
  const double min_ne = r.history.empty() ? r.final_ne : r.history.min_ne();
  out << setup.method << ' ' << setup.precond << ' ' << r.iterations << ' ' << fmt("%.6e", min_ne) << ' '
      << fmt("%.6f", r.solve_seconds) << '\n';
  return succeeded(r, f.tol) ? kExitOk : kExitNotConverged;
}

int cmd_verify(const SourceFlags& s, const SolveFlags& f, std::ostream& out) {
  const SparseMatrixCSR a = load_matrix(s);
  const SpectralReport rep = verify_clustering(a, f.omega, f.inner_iters);
  const DenseMatrix c = materialize_C(a, f.omega, f.inner_iters);
  const double c_asym = asymmetry(c) / c.max_abs();
  const bool c_spd = cholesky(c).ok();
  out << "m=" << a.nrows() << " n=" << a.ncols() << " nnz=" << a.nnz() << '\n'
      << "rank=" << rep.rank << " cond=" << fmt("%.6e", condition_number(a)) << '\n'
      << "omega=" << f.omega << " inner_iters=" << f.inner_iters << " rho_H=" << fmt("%.17g", rep.rho_h) << '\n'
      << "C_asymmetry=" << fmt("%.3e", c_asym) << " C_spd=" << (c_spd ? "yes" : "no") << '\n'
      << "interval=[" << fmt("%.17g", rep.lower) << ", " << fmt("%.17g", rep.upper) << "] slack=" << rep.slack << '\n'
      << "clustered=" << rep.clustered << " zero=" << rep.zero << " outliers=" << rep.outliers
      << " max_zero=" << fmt("%.3e", rep.max_zero_magnitude) << " lambda_max=" << fmt("%.17g", rep.lambda_max) << '\n'
      << "spectrum_mismatch=" << fmt("%.3e", rep.spectrum_mismatch) << " G_asymmetry=" << fmt("%.3e", rep.g_asymmetry)
      << '\n';
  const bool ok = rep.passes() && c_spd && c_asym <= 1e-11 && rep.g_asymmetry <= 1e-11;
  out << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitNotConverged;
}

std::vector<Setup> parse_sweep(const std::string& sweep, const std::string& method, int default_ell) {
  std::vector<Setup> out;
  std::stringstream ss(sweep);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::string name = item;
    int ell = default_ell;
    if (const auto colon = item.find(':'); colon != std::string::npos) {
      name = item.substr(0, colon);
      try {
        ell = std::stoi(item.substr(colon + 1));
      } catch (const std::exception&) {
        throw CLI::ValidationError("bad inner-iteration count in sweep item '" + item + "'");
      }
    }
    if (name != "none" && name != "at" && name != "diag-at" && name != "nrssor")
      throw CLI::ValidationError("unknown preconditioner '" + name + "' in --sweep");
    const std::string m = name == "none" ? (method == "ab-gmres" ? "gmres" : method == "ab-rrgmres" ? "rrgmres" : method)
                                         : method;
    out.push_back(resolve(m, name, ell));
  }
  if (out.empty()) throw CLI::ValidationError("--sweep is empty");
  return out;
}

int cmd_bench(const SourceFlags& s, const SolveFlags& f, const std::string& sweep, std::ostream& out) {
  const std::vector<Setup> setups = parse_sweep(sweep, f.method, f.inner_iters);
  const SparseMatrixCSR a = load_matrix(s);
  const Vector b = make_rhs(a, f, s.seed);
  const SolverOptions opts = solver_options(f, a.nrows());

  std::ostringstream csv;
  csv << "method,precond,inner_iters,iters,iter_at_min,min_ne,final_ne,tno_sec,status\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-11s %-8s %4s %7s %11s %13s %13s %10s  %s\n", "method", "precond", "ell", "iters",
                "iter_at_min", "min_ne", "final_ne", "tno_sec", "status");
  out << line;
  bool all_ok = true;
  for (const Setup& st : setups) {
    const SolveOutcome r = execute(a, b, st, f.omega, opts);
    const double min_ne = r.history.empty() ? r.final_ne : r.history.min_ne();
    const std::string status(to_string(r.status));
    std::snprintf(line, sizeof line, "%-11s %-8s %4d %7zu %11zu %13.6e %13.6e %10.4f  %s\n", st.method.c_str(),
                  st.precond.c_str(), st.inner_iters, r.iterations, r.history.argmin_ne(), min_ne, r.final_ne,
                  r.solve_seconds, status.c_str());
    out << line;
    std::snprintf(line, sizeof line, "%s,%s,%d,%zu,%zu,%.17g,%.17g,%.17g,%s\n", st.method.c_str(), st.precond.c_str(),
                  st.inner_iters, r.iterations, r.history.argmin_ne(), min_ne, r.final_ne,
                  f.record_time ? r.solve_seconds : 0.0, status.c_str());
    csv << line;
    all_ok = all_ok && succeeded(r, f.tol);
  }
  if (!f.output.empty()) {
    std::ofstream file(f.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + f.output + " for writing");
    file << csv.str();
  }
  return all_ok ? kExitOk : kExitNotConverged;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Range-restricted GMRES with NR-SSOR right preconditioning for singular and least-squares systems", "rrk"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  SourceFlags src;
  SolveFlags sf;
  std::string gen_output;
  std::string sweep;

  auto* generate = app.add_subcommand("generate", "Write a generated test matrix as Matrix Market");
  add_source_flags(*generate, src);
  generate->add_option("--output", gen_output, "Matrix Market output path")->required();

  auto* solve = app.add_subcommand("solve", "Run one solver configuration and report its convergence history");
  add_source_flags(*solve, src);
  add_solver_flags(*solve, sf, true);

  auto* verify = app.add_subcommand("verify", "Dense checks of C^(l) and the eigenvalue clustering of A C^(l) A^T");
  add_source_flags(*verify, src);
  verify->add_option("--inner-iters", sf.inner_iters, "NR-SSOR inner iterations l")->capture_default_str();
  verify->add_option("--omega", sf.omega, "NR-SSOR relaxation parameter")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Compare preconditioners: iterations and solver time per configuration");
  add_source_flags(*bench, src);
  add_solver_flags(*bench, sf, false);
  bench->add_option("--method", sf.method, "ab-gmres or ab-rrgmres (none entries fall back to the plain method)")
      ->check(CLI::IsMember({"ab-gmres", "ab-rrgmres"}))
      ->capture_default_str();
  bench->add_option("--sweep", sweep, "Comma list of preconditioners, e.g. nrssor:4,at,diag-at")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*generate) return cmd_generate(src, gen_output, out);
    if (*solve) return cmd_solve(src, sf, out);
    if (*verify) return cmd_verify(src, sf, out);
    if (*bench) return cmd_bench(src, sf, sweep, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace rrk::cli
