#include "rrk/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "rrk/errors.hpp"
#include "rrk/kernels.hpp"

namespace rrk {

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::CONVERGED_NE: return "CONVERGED_NE";
    case SolveStatus::CONVERGED_RES: return "CONVERGED_RES";
    case SolveStatus::HAPPY_BREAKDOWN: return "HAPPY_BREAKDOWN";
    case SolveStatus::MAX_ITERS: return "MAX_ITERS";
    case SolveStatus::STAGNATED: return "STAGNATED";
  }
  return "?";
}

std::string_view to_string(KrylovMethod method) noexcept {
  return method == KrylovMethod::GMRES ? "gmres" : "rrgmres";
}

void SolverOptions::validate() const {
  if (max_iters < 1) throw ContractError("SolverOptions: max_iters must be >= 1");
  if (!(tol_ne > 0.0)) throw ContractError("SolverOptions: tol_ne must be > 0");
  if (tol_res && !(*tol_res > 0.0)) throw ContractError("SolverOptions: tol_res must be > 0");
  if (!(breakdown_tol > 0.0)) throw ContractError("SolverOptions: breakdown_tol must be > 0");
  if (stagnation_window < 1) throw ContractError("SolverOptions: stagnation_window must be >= 1");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// The operator the Arnoldi process runs on: A itself (square case) or the
// composition v -> A (B v) over R^m. `direction` receives the x-space image
// of v (B v), which is what the solution is assembled from.
class KrylovOperator {
 public:
  KrylovOperator(const SparseMatrixCSR& a, const RightPreconditioner* b_op) : a_(a), b_op_(b_op) {}

  bool composed() const noexcept { return b_op_ != nullptr; }
  std::size_t dim() const noexcept { return a_.nrows(); }

  void apply(std::span<const double> v, std::span<double> direction, std::span<double> w) const {
    if (b_op_) {
      b_op_->apply(v, direction);
      matvec(a_, direction, w);
    } else {
      matvec(a_, v, w);
    }
  }

 private:
  const SparseMatrixCSR& a_;
  const RightPreconditioner* b_op_;
};

// Orthogonalizes w against basis[0..j] and writes the coefficients into h[0..j].
void orthogonalize(std::vector<Vector>& basis, std::size_t j, Vector& w, Vector& h, Orthogonalization kind) {
  const double norm_before = kernels::nrm2(w);
  if (kind == Orthogonalization::CGS) {
    for (std::size_t i = 0; i <= j; ++i) h[i] = kernels::dot(basis[i], w);
    for (std::size_t i = 0; i <= j; ++i) kernels::axpy(-h[i], basis[i], w);
    return;
  }
  for (std::size_t i = 0; i <= j; ++i) {
    h[i] = kernels::dot(basis[i], w);
    kernels::axpy(-h[i], basis[i], w);
  }
  if (kernels::nrm2(w) < 0.5 * norm_before) {
    for (std::size_t i = 0; i <= j; ++i) {
      const double c = kernels::dot(basis[i], w);
      h[i] += c;
      kernels::axpy(-c, basis[i], w);
    }
  }
}

SolveOutcome run(const SparseMatrixCSR& a, const RightPreconditioner* b_op, std::span<const double> b,
                 std::span<const double> x0, const SolverOptions& opts, KrylovMethod method) {
  opts.validate();
  const std::size_t m = a.nrows(), n = a.ncols();
  if (b.size() != m) throw StructuralError("Krylov solve: right-hand side length does not match A");
  if (x0.size() != n) throw StructuralError("Krylov solve: initial guess length does not match A");
  if (b_op) {
    if (b_op->rows() != m || b_op->cols() != n) throw StructuralError("ab_solve: preconditioner does not map R^m -> R^n");
  } else if (m != n) {
    throw StructuralError("gmres/rrgmres: matrix must be square");
  }
  const bool range_restricted = method == KrylovMethod::RRGMRES;
  const KrylovOperator op(a, b_op);
  const std::size_t dim = op.dim();

  SolveOutcome out;
  out.x.assign(x0.begin(), x0.end());

  const double b_norm = kernels::nrm2(b);
  const double atb_norm = kernels::nrm2(matvec_transpose(a, b));
  const double ne_scale = atb_norm > 0.0 ? atb_norm : 1.0;
  Vector r(m), atr(n);
  auto diagnose = [&](std::span<const double> x, double& res, double& ne) {
    matvec(a, x, r);
    for (std::size_t i = 0; i < m; ++i) r[i] = b[i] - r[i];
    matvec_transpose(a, r, atr);
    res = kernels::nrm2(r);
    ne = kernels::nrm2(atr) / ne_scale;
  };

  double res0 = 0.0, ne0 = 0.0;
  diagnose(out.x, res0, ne0);
  out.final_res = res0;
  out.final_ne = ne0;
  const Vector r0 = r;
  if (res0 == 0.0) {
    out.status = SolveStatus::CONVERGED_RES;
    return out;
  }
  if (ne0 < opts.tol_ne) {
    out.status = SolveStatus::CONVERGED_NE;
    return out;
  }

  const auto t_start = Clock::now();
  double solve_time = 0.0;

  std::vector<Vector> basis;
  std::vector<Vector> directions;  // B v_j, composed operator only
  Vector direction(op.composed() ? n : 0);
  Vector w(m);

  Vector start = r0;
  if (range_restricted) {
    op.apply(r0, direction, start);
  }
  const double beta = kernels::nrm2(start);
  if (beta == 0.0) {
    // A r0 = 0: the range-restricted space is empty, x0 cannot be improved.
    out.status = SolveStatus::STAGNATED;
    return out;
  }
  kernels::scale(1.0 / beta, start);
  basis.push_back(std::move(start));

  HessenbergFactorization fact;
  Vector complement;
  if (range_restricted) {
    complement = r0;
    const double g1 = kernels::dot(basis[0], complement);
    kernels::axpy(-g1, basis[0], complement);
    fact.start(g1);
  } else {
    fact.start(beta);
  }

  double op_scale = op.composed() ? 0.0 : a.frobenius_norm();
  const std::size_t limit = std::min(opts.max_iters, dim);
  double best_ne = ne0;
  std::size_t without_progress = 0;
  Vector h;
  Vector xk(n);
  out.status = SolveStatus::MAX_ITERS;
  solve_time += seconds_since(t_start);

  for (std::size_t j = 0; j < limit; ++j) {
    const auto t_iter = Clock::now();
    op.apply(basis[j], direction, w);
    if (op.composed()) {
      directions.push_back(direction);
      op_scale = std::max(op_scale, kernels::nrm2(w));
    }
    h.assign(j + 2, 0.0);
    orthogonalize(basis, j, w, h, opts.orthogonalization);
    const double h_next = kernels::nrm2(w);
    h[j + 1] = h_next;
    const bool breakdown = !(h_next > opts.breakdown_tol * op_scale);

    double g_next = 0.0;
    if (!breakdown) {
      kernels::scale(1.0 / h_next, w);
      basis.push_back(w);
      if (range_restricted) {
        g_next = kernels::dot(basis[j + 1], complement);
        kernels::axpy(-g_next, basis[j + 1], complement);
      }
    }
    fact.add_column(h, g_next);
    const std::size_t k = j + 1;
    solve_time += seconds_since(t_iter);

    // Diagnostics: form x_k explicitly. Not counted in solve_time.
    const Vector y = fact.solve();
    std::copy(x0.begin(), x0.end(), xk.begin());
    for (std::size_t i = 0; i < k; ++i) kernels::axpy(y[i], op.composed() ? directions[i] : basis[i], xk);
    double res = 0.0, ne = 0.0;
    diagnose(xk, res, ne);
    out.x = xk;
    out.iterations = k;
    out.final_res = res;
    out.final_ne = ne;
    if (opts.record_history) {
      HistoryEntry e;
      e.iteration = k;
      e.res_norm = res;
      e.ne_res_rel = ne;
      e.elapsed_sec = solve_time;
      e.ls_residual = fact.residual_norm();
      e.complement_norm = range_restricted ? kernels::nrm2(complement) : 0.0;
      out.history.push(e);
    }

    if (ne < best_ne * (1.0 - 1e-16)) {
      best_ne = ne;
      without_progress = 0;
    } else {
      ++without_progress;
    }

    if (breakdown) {
      out.status = SolveStatus::HAPPY_BREAKDOWN;
      break;
    }
    if (ne < opts.tol_ne) {
      out.status = SolveStatus::CONVERGED_NE;
      break;
    }
    if (opts.tol_res && res < *opts.tol_res * b_norm) {
      out.status = SolveStatus::CONVERGED_RES;
      break;
    }
    if (without_progress >= opts.stagnation_window) {
      out.status = SolveStatus::STAGNATED;
      break;
    }
  }

  out.solve_seconds = solve_time;
  if (opts.record_history) out.hessenberg = fact.hessenberg();
  if (opts.keep_basis) {
    DenseMatrix v(dim, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
      for (std::size_t i = 0; i < dim; ++i) v(i, j) = basis[j][i];
    out.basis = std::move(v);
  }
  return out;
}

}  // namespace

SolveOutcome gmres(const SparseMatrixCSR& a, std::span<const double> b, std::span<const double> x0, const SolverOptions& opts) {
  return run(a, nullptr, b, x0, opts, KrylovMethod::GMRES);
}

SolveOutcome rrgmres(const SparseMatrixCSR& a, std::span<const double> b, std::span<const double> x0, const SolverOptions& opts) {
  return run(a, nullptr, b, x0, opts, KrylovMethod::RRGMRES);
}

SolveOutcome ab_solve(const SparseMatrixCSR& a, const RightPreconditioner& b_op, std::span<const double> b,
                      const SolverOptions& opts, KrylovMethod method) {
  const Vector x0(a.ncols(), 0.0);
  return run(a, &b_op, b, x0, opts, method);
}

DenseMatrix extract_hessenberg(const SolveOutcome& outcome) {
  if (!outcome.hessenberg) throw ContractError("extract_hessenberg: solve was run without record_history");
  return *outcome.hessenberg;
}

}  // namespace rrk
