#include "rrk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rrk/errors.hpp"
#include "rrk/kernels.hpp"
#include "rrk/precond.hpp"

namespace rrk {

void ConvergenceHistory::push(const HistoryEntry& e) {
  if (!entries_.empty() && e.iteration <= entries_.back().iteration)
    throw ContractError("ConvergenceHistory: iteration numbers must increase");
  if (!std::isfinite(e.res_norm) || !std::isfinite(e.ne_res_rel) || e.res_norm < 0.0 || e.ne_res_rel < 0.0)
    throw ContractError("ConvergenceHistory: norms must be finite and nonnegative");
  entries_.push_back(e);
  if (e.ne_res_rel < min_ne_) {
    min_ne_ = e.ne_res_rel;
    argmin_ne_ = e.iteration;
  }
}

bool operator==(const ConvergenceHistory& a, const ConvergenceHistory& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    const auto& x = a.entries_[i];
    const auto& y = b.entries_[i];
    if (x.iteration != y.iteration || x.res_norm != y.res_norm || x.ne_res_rel != y.ne_res_rel ||
        x.elapsed_sec != y.elapsed_sec)
      return false;
  }
  return true;
}

double ne_residual_ratio(const SparseMatrixCSR& a, std::span<const double> b, std::span<const double> x) {
  if (b.size() != a.nrows() || x.size() != a.ncols()) throw StructuralError("ne_residual_ratio: dimension mismatch");
  const double denom = kernels::nrm2(matvec_transpose(a, b));
  if (denom == 0.0) throw DegenerateInputError("ne_residual_ratio: A^T b is zero");
  Vector r = matvec(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return kernels::nrm2(matvec_transpose(a, r)) / denom;
}

namespace {

Svd checked_svd(const SparseMatrixCSR& a, const char* who) {
  if (std::min(a.nrows(), a.ncols()) > kDenseSizeCap)
    throw ContractError(std::string(who) + ": matrix too large for the dense path");
  return dense_svd(a.to_dense());
}

}  // namespace

std::size_t numerical_rank(const SparseMatrixCSR& a, std::optional<double> tol) {
  const Svd svd = checked_svd(a, "numerical_rank");
  return rank_from_singular_values(svd.singular, a.nrows(), a.ncols(), tol);
}

double condition_number(const SparseMatrixCSR& a) {
  const Svd svd = checked_svd(a, "condition_number");
  const std::size_t r = rank_from_singular_values(svd.singular, a.nrows(), a.ncols());
  if (r == 0) throw DegenerateInputError("condition_number: matrix is numerically zero");
  return svd.singular.front() / svd.singular[r - 1];
}

double nullspace_component(const SparseMatrixCSR& a, std::span<const double> x) {
  if (x.size() != a.ncols()) throw StructuralError("nullspace_component: dimension mismatch");
  const Svd svd = checked_svd(a, "nullspace_component");
  const std::size_t r = rank_from_singular_values(svd.singular, a.nrows(), a.ncols());
  Vector rest(x.begin(), x.end());
  for (std::size_t c = 0; c < r; ++c) {
    const Vector v = svd.v.column(c);
    kernels::axpy(-kernels::dot(v, rest), v, rest);
  }
  return kernels::nrm2(rest);
}

SpectralReport verify_clustering(const SparseMatrixCSR& a, double omega, int inner_iters) {
  if (a.nrows() > 256 || a.ncols() > 256) throw ContractError("verify_clustering: desk scale only (m, n <= 256)");
  SpectralReport rep;
  rep.dimension = a.nrows();
  rep.inner_iters = inner_iters;
  rep.omega = omega;
  rep.rank = numerical_rank(a);
  rep.rho_h = spectral_radius_H(a, omega);
  const double rho_l = std::pow(rep.rho_h, inner_iters);
  rep.lower = 1.0 - rho_l;
  rep.upper = inner_iters % 2 == 1 ? 1.0 + rho_l : 1.0;

  const DenseMatrix c = materialize_C(a, omega, inner_iters);
  const DenseMatrix ad = a.to_dense();
  const DenseMatrix g = ad * c * ad.transpose();
  const double g_scale = g.max_abs();
  rep.g_asymmetry = g_scale > 0.0 ? asymmetry(g) / g_scale : 0.0;
  DenseMatrix gs(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) gs(i, j) = 0.5 * (g(i, j) + g(j, i));
  const SymmetricEigen eg = dense_symmetric_eig(gs);
  rep.lambda_max = eg.values.empty() ? 0.0 : std::max(std::abs(eg.values.front()), std::abs(eg.values.back()));

  for (std::size_t i = 0; i < eg.values.size(); ++i) {
    const double lam = eg.values[i];
    if (i < rep.rank) {
      rep.max_cluster_deviation = std::max(rep.max_cluster_deviation, std::abs(lam - 1.0));
      if (lam >= rep.lower - rep.slack && lam <= rep.upper + rep.slack)
        ++rep.clustered;
      else
        ++rep.outliers;
    } else {
      rep.max_zero_magnitude = std::max(rep.max_zero_magnitude, std::abs(lam));
      if (std::abs(lam) <= rep.slack * rep.lambda_max)
        ++rep.zero;
      else
        ++rep.outliers;
    }
  }

  // Second route: C A^T A is similar to L^T (A^T A) L with C = L L^T.
  DenseMatrix csym(c.rows(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) csym(i, j) = 0.5 * (c(i, j) + c(j, i));
  const CholeskyResult chol = cholesky(csym);
  if (!chol.ok()) {
    rep.spectrum_mismatch = std::numeric_limits<double>::infinity();
    return rep;
  }
  const DenseMatrix& l = *chol.lower;
  const DenseMatrix al = ad * l;
  DenseMatrix t = al.transpose() * al;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = i + 1; j < t.cols(); ++j) t(i, j) = t(j, i) = 0.5 * (t(i, j) + t(j, i));
  const SymmetricEigen et = dense_symmetric_eig(t);
  const double scale = rep.lambda_max > 0.0 ? rep.lambda_max : 1.0;
  for (std::size_t i = 0; i < std::min({rep.rank, et.values.size(), eg.values.size()}); ++i)
    rep.spectrum_mismatch = std::max(rep.spectrum_mismatch, std::abs(et.values[i] - eg.values[i]) / scale);
  return rep;
}

void export_history_csv(const ConvergenceHistory& h, std::ostream& out) {
  out << "iteration,res_norm,ne_res_rel,elapsed_sec\n";
  char buf[128];
  for (const HistoryEntry& e : h.entries()) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", e.iteration, e.res_norm, e.ne_res_rel, e.elapsed_sec);
    out << buf;
  }
}

void export_history_csv(const ConvergenceHistory& h, const std::filesystem::path& path) {
  if (h.empty()) throw ContractError("export_history_csv: history is empty");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  export_history_csv(h, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ConvergenceHistory read_history_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line != "iteration,res_norm,ne_res_rel,elapsed_sec")
    throw ParseError("unexpected CSV header", 1);
  ConvergenceHistory h;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    HistoryEntry e;
    const char* p = line.c_str();
    char* end = nullptr;
    e.iteration = std::strtoull(p, &end, 10);
    double* fields[] = {&e.res_norm, &e.ne_res_rel, &e.elapsed_sec};
    for (double* f : fields) {
      if (*end != ',') throw ParseError("expected 4 comma-separated fields", lineno);
      p = end + 1;
      *f = std::strtod(p, &end);
      if (end == p) throw ParseError("malformed number", lineno);
    }
    h.push(e);
  }
  return h;
}

ConvergenceHistory read_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return read_history_csv(in);
}

}  // namespace rrk
