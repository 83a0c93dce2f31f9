#include "rrk/precond.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rrk/errors.hpp"
#include "rrk/kernels.hpp"

namespace rrk {

std::string_view to_string(PreconditionerKind kind) noexcept {
  switch (kind) {
    case PreconditionerKind::AT: return "at";
    case PreconditionerKind::DIAG_AT: return "diag-at";
    case PreconditionerKind::NRSSOR: return "nrssor";
  }
  return "?";
}

namespace {

void require_omega(double omega) {
  if (!(omega > 0.0 && omega < 2.0))
    throw PreconditionError("relaxation parameter omega must lie strictly inside (0, 2), got " + std::to_string(omega));
}

void require_no_zero_columns(std::span<const double> norms, const char* who) {
  for (std::size_t j = 0; j < norms.size(); ++j)
    if (!(norms[j] > 0.0))
      throw PreconditionError(std::string(who) + ": column " + std::to_string(j) + " of A is zero");
}

}  // namespace

RightPreconditioner::RightPreconditioner(PreconditionerKind kind, const SparseMatrixCSR& a, double omega, int inner_iters)
    : kind_(kind), columns_(a.transpose()), col_sq_norms_(rrk::column_sq_norms(a)), omega_(omega), inner_iters_(inner_iters) {}

RightPreconditioner RightPreconditioner::transpose(const SparseMatrixCSR& a) {
  return RightPreconditioner(PreconditionerKind::AT, a, 1.0, 1);
}

RightPreconditioner RightPreconditioner::diagonal(const SparseMatrixCSR& a) {
  RightPreconditioner p(PreconditionerKind::DIAG_AT, a, 1.0, 1);
  require_no_zero_columns(p.col_sq_norms_, "diag-at preconditioner");
  return p;
}

RightPreconditioner RightPreconditioner::nr_ssor(const SparseMatrixCSR& a, double omega, int inner_iters) {
  require_omega(omega);
  if (inner_iters < 1) throw PreconditionError("NR-SSOR needs at least one inner iteration");
  RightPreconditioner p(PreconditionerKind::NRSSOR, a, omega, inner_iters);
  require_no_zero_columns(p.col_sq_norms_, "NR-SSOR preconditioner");
  return p;
}

Vector RightPreconditioner::apply(std::span<const double> c) const {
  Vector z(cols());
  apply(c, z);
  return z;
}

void RightPreconditioner::apply(std::span<const double> c, std::span<double> z) const {
  if (c.size() != rows() || z.size() != cols()) throw StructuralError("RightPreconditioner::apply: dimension mismatch");
  const auto& k = kernels::active();
  switch (kind_) {
    case PreconditionerKind::AT:
      for (std::size_t j = 0; j < cols(); ++j) {
        const auto v = columns_.row_values(j);
        z[j] = k.sparse_dot(v.data(), columns_.row_cols(j).data(), v.size(), c.data());
      }
      return;
    case PreconditionerKind::DIAG_AT:
      for (std::size_t j = 0; j < cols(); ++j) {
        const auto v = columns_.row_values(j);
        z[j] = k.sparse_dot(v.data(), columns_.row_cols(j).data(), v.size(), c.data()) / col_sq_norms_[j];
      }
      return;
    case PreconditionerKind::NRSSOR:
      apply_nr_ssor(c, z);
      return;
  }
}

void RightPreconditioner::apply_nr_ssor(std::span<const double> c, std::span<double> z) const {
  const auto& k = kernels::active();
  Vector r(c.begin(), c.end());
  std::fill(z.begin(), z.end(), 0.0);
  const std::size_t n = cols();
  auto relax = [&](std::size_t j) {
    const auto v = columns_.row_values(j);
    const auto idx = columns_.row_cols(j);
    const double d = omega_ * k.sparse_dot(v.data(), idx.data(), v.size(), r.data()) / col_sq_norms_[j];
    z[j] += d;
    k.sparse_axpy(-d, v.data(), idx.data(), v.size(), r.data());
  };
  for (int sweep = 0; sweep < inner_iters_; ++sweep) {
    for (std::size_t j = 0; j < n; ++j) relax(j);
    for (std::size_t j = n; j-- > 0;) relax(j);
  }
}

namespace {

struct Splitting {
  DenseMatrix lower_plus_d;  // D + omega L
  Vector diag;
  DenseMatrix normal;        // A^T A
};

Splitting split(const SparseMatrixCSR& a, double omega) {
  require_omega(omega);
  if (a.ncols() > kDenseSizeCap || a.nrows() > 4 * kDenseSizeCap)
    throw ContractError("dense preconditioner oracles are limited to n <= 512");
  require_no_zero_columns(column_sq_norms(a), "dense NR-SSOR oracle");
  const DenseMatrix ad = a.to_dense();
  DenseMatrix k = ad.transpose() * ad;
  const std::size_t n = k.rows();
  Splitting s{DenseMatrix(n, n), Vector(n), std::move(k)};
  for (std::size_t i = 0; i < n; ++i) {
    s.diag[i] = s.normal(i, i);
    s.lower_plus_d(i, i) = s.diag[i];
    for (std::size_t j = 0; j < i; ++j) s.lower_plus_d(i, j) = omega * s.normal(i, j);
  }
  return s;
}

}  // namespace

DenseMatrix materialize_M(const SparseMatrixCSR& a, double omega) {
  const Splitting s = split(a, omega);
  const std::size_t n = s.diag.size();
  DenseMatrix right = s.lower_plus_d.transpose();  // D + omega L^T
  for (std::size_t i = 0; i < n; ++i)
    for (double& v : right.row(i)) v /= s.diag[i];
  return (1.0 / (omega * (2.0 - omega))) * (s.lower_plus_d * right);
}

DenseMatrix materialize_M_inverse(const SparseMatrixCSR& a, double omega) {
  const Splitting s = split(a, omega);
  const std::size_t n = s.diag.size();
  // M^{-1} = omega (2 - omega) (D + omega L^T)^{-1} D (D + omega L)^{-1}
  DenseMatrix x = DenseMatrix::identity(n);
  solve_lower_in_place(s.lower_plus_d, x);
  for (std::size_t i = 0; i < n; ++i)
    for (double& v : x.row(i)) v *= s.diag[i];
  solve_upper_in_place(s.lower_plus_d.transpose(), x);
  return (omega * (2.0 - omega)) * x;
}

DenseMatrix materialize_C(const SparseMatrixCSR& a, double omega, int inner_iters) {
  if (inner_iters < 1) throw PreconditionError("materialize_C: inner_iters must be >= 1");
  const DenseMatrix m_inv = materialize_M_inverse(a, omega);
  const std::size_t n = m_inv.rows();
  if (inner_iters == 1) return m_inv;
  const DenseMatrix ad = a.to_dense();
  const DenseMatrix h = DenseMatrix::identity(n) - m_inv * (ad.transpose() * ad);
  DenseMatrix term = m_inv;
  DenseMatrix c = m_inv;
  for (int i = 1; i < inner_iters; ++i) {
    term = h * term;
    c = c + term;
  }
  return c;
}

double spectral_radius_H(const SparseMatrixCSR& a, double omega) {
  const Splitting s = split(a, omega);
  const std::size_t n = s.diag.size();
  // M = F F^T with F = (omega (2 - omega))^{-1/2} (D + omega L) D^{-1/2}
  DenseMatrix f = s.lower_plus_d;
  const double scale = 1.0 / std::sqrt(omega * (2.0 - omega));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) f(i, j) *= scale / std::sqrt(s.diag[j]);
  // S = F^{-1} K F^{-T}
  DenseMatrix y = s.normal;
  solve_lower_in_place(f, y);
  DenseMatrix yt = y.transpose();
  solve_lower_in_place(f, yt);
  DenseMatrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (yt(i, j) + yt(j, i));

  const Svd svd = dense_svd(a.to_dense());
  const std::size_t r = rank_from_singular_values(svd.singular, a.nrows(), a.ncols());
  const SymmetricEigen eig = dense_symmetric_eig(sym);
  double rho = 0.0;
  for (std::size_t i = 0; i < r; ++i) rho = std::max(rho, std::abs(1.0 - eig.values[i]));
  return std::min(rho, 1.0);
}

}  // namespace rrk
