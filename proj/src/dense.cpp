#include "rrk/dense.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "rrk/errors.hpp"

namespace rrk {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) throw StructuralError("DenseMatrix: entry count does not match dimensions");
  for (double v : data_)
    if (!std::isfinite(v)) throw StructuralError("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) throw StructuralError("DenseMatrix::block: out of range");
  DenseMatrix b(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
  return b;
}

double DenseMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw StructuralError("matrix product: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

namespace {

template <class Op>
DenseMatrix elementwise(const DenseMatrix& a, const DenseMatrix& b, Op op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw StructuralError("elementwise: dimension mismatch");
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = op(a(i, j), b(i, j));
  return c;
}

}  // namespace

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) { return elementwise(a, b, std::plus<>{}); }
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) { return elementwise(a, b, std::minus<>{}); }

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (double& v : c.row(i)) v *= s;
  return c;
}

Vector operator*(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw StructuralError("matrix-vector product: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    auto ai = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

double asymmetry(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw StructuralError("asymmetry: matrix is not square");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
  return m;
}

namespace {

using EigenMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMatrix> view(const DenseMatrix& a) {
  return {a.data().data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())};
}

DenseMatrix copy_reversed_columns(const Eigen::MatrixXd& src, bool reverse) {
  DenseMatrix out(static_cast<std::size_t>(src.rows()), static_cast<std::size_t>(src.cols()));
  const Eigen::Index nc = src.cols();
  for (Eigen::Index i = 0; i < src.rows(); ++i)
    for (Eigen::Index j = 0; j < nc; ++j) out(i, j) = src(i, reverse ? nc - 1 - j : j);
  return out;
}

}  // namespace

SymmetricEigen dense_symmetric_eig(const DenseMatrix& s) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw ContractError("dense_symmetric_eig: matrix is not square");
  if (n > kDenseSizeCap) throw ContractError("dense_symmetric_eig: size exceeds the dense cap");
  if (asymmetry(s) > 1e-12 * s.max_abs()) throw ContractError("dense_symmetric_eig: matrix is not symmetric");
  if (n == 0) return {};

  const Eigen::MatrixXd sym = 0.5 * (view(s) + view(s).transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw ContractError("dense_symmetric_eig: eigensolver did not converge");
  SymmetricEigen out{Vector(n), copy_reversed_columns(solver.eigenvectors(), true)};
  for (std::size_t k = 0; k < n; ++k) out.values[k] = solver.eigenvalues()(static_cast<Eigen::Index>(n - 1 - k));
  return out;
}

Svd dense_svd(const DenseMatrix& a) {
  if (std::min(a.rows(), a.cols()) > kDenseSizeCap) throw ContractError("dense_svd: size exceeds the dense cap");
  const std::size_t p = std::min(a.rows(), a.cols());
  if (p == 0) return {DenseMatrix(a.rows(), 0), Vector{}, DenseMatrix(a.cols(), 0)};
  const Eigen::MatrixXd m = view(a);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Svd out{copy_reversed_columns(svd.matrixU(), false), Vector(p), copy_reversed_columns(svd.matrixV(), false)};
  for (std::size_t k = 0; k < p; ++k) out.singular[k] = svd.singularValues()(static_cast<Eigen::Index>(k));
  return out;
}

std::size_t rank_from_singular_values(std::span<const double> singular, std::size_t m, std::size_t n,
                                      std::optional<double> tol) {
  if (singular.empty()) return 0;
  const double threshold = tol ? *tol : static_cast<double>(std::max(m, n)) * 0x1p-52 * singular.front();
  return static_cast<std::size_t>(std::count_if(singular.begin(), singular.end(), [&](double s) { return s > threshold; }));
}

CholeskyResult cholesky(const DenseMatrix& s) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw ContractError("cholesky: matrix is not square");
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return CholeskyResult{std::nullopt, j + 1};
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return CholeskyResult{std::move(l), 0};
}

void solve_lower_in_place(const DenseMatrix& l, DenseMatrix& b) {
  const std::size_t n = l.rows();
  if (l.cols() != n || b.rows() != n) throw StructuralError("solve_lower_in_place: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    auto bi = b.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = l(i, k);
      if (lik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) bi[j] -= lik * bk[j];
    }
    for (double& v : bi) v /= l(i, i);
  }
}

void solve_upper_in_place(const DenseMatrix& u, DenseMatrix& b) {
  const std::size_t n = u.rows();
  if (u.cols() != n || b.rows() != n) throw StructuralError("solve_upper_in_place: dimension mismatch");
  for (std::size_t ii = n; ii-- > 0;) {
    auto bi = b.row(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double uik = u(ii, k);
      if (uik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) bi[j] -= uik * bk[j];
    }
    for (double& v : bi) v /= u(ii, ii);
  }
}

void HessenbergFactorization::start(double g1) {
  *this = HessenbergFactorization{};
  g1_ = g1;
  rhs_.assign(1, g1);
}

void HessenbergFactorization::add_column(std::span<const double> column, double g_next) {
  const std::size_t k = k_;
  if (column.size() != k + 2) throw StructuralError("HessenbergFactorization: column length must be k+2");
  raw_.emplace_back(column.begin(), column.end());
  for (double v : column) h_norm_sq_ += v * v;

  Vector c(column.begin(), column.end());
  for (std::size_t i = 0; i < k; ++i) {
    const double t = cos_[i] * c[i] + sin_[i] * c[i + 1];
    c[i + 1] = -sin_[i] * c[i] + cos_[i] * c[i + 1];
    c[i] = t;
  }
  double cs = 1.0, sn = 0.0;
  if (c[k + 1] != 0.0) {
    const double r = std::hypot(c[k], c[k + 1]);
    cs = c[k] / r;
    sn = c[k + 1] / r;
    c[k] = r;
    c[k + 1] = 0.0;
  }
  cos_.push_back(cs);
  sin_.push_back(sn);

  rhs_.push_back(g_next);
  const double t = cs * rhs_[k] + sn * rhs_[k + 1];
  rhs_[k + 1] = -sn * rhs_[k] + cs * rhs_[k + 1];
  rhs_[k] = t;

  c.resize(k + 1);
  r_.push_back(std::move(c));
  ++k_;
}

bool HessenbergFactorization::pivot_is_zero(std::size_t j) const noexcept {
  return std::abs(r_[j][j]) < 1e-14 * std::sqrt(h_norm_sq_) || r_[j][j] == 0.0;
}

Vector HessenbergFactorization::solve() const {
  Vector y(k_, 0.0);
  for (std::size_t j = k_; j-- > 0;) {
    if (pivot_is_zero(j)) continue;
    double s = rhs_[j];
    for (std::size_t l = j + 1; l < k_; ++l) s -= r_[l][j] * y[l];
    y[j] = s / r_[j][j];
  }
  return y;
}

double HessenbergFactorization::residual_norm() const {
  if (k_ == 0) return std::abs(g1_);
  double res_sq = rhs_[k_] * rhs_[k_];
  bool deficient = false;
  for (std::size_t j = 0; j < k_; ++j) deficient = deficient || pivot_is_zero(j);
  if (deficient) {
    const Vector y = solve();
    for (std::size_t j = 0; j < k_; ++j) {
      if (!pivot_is_zero(j)) continue;
      double s = rhs_[j];
      for (std::size_t l = j + 1; l < k_; ++l) s -= r_[l][j] * y[l];
      res_sq += s * s;
    }
  }
  return std::sqrt(res_sq);
}

DenseMatrix HessenbergFactorization::hessenberg() const {
  DenseMatrix h(k_ + 1, k_);
  for (std::size_t j = 0; j < k_; ++j)
    for (std::size_t i = 0; i < raw_[j].size(); ++i) h(i, j) = raw_[j][i];
  return h;
}

HessenbergLsResult hessenberg_least_squares(const DenseMatrix& h, std::span<const double> g) {
  const std::size_t k = h.cols();
  if (h.rows() != k + 1 || g.size() != k + 1) throw StructuralError("hessenberg_least_squares: expected (k+1) x k and k+1");
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = j + 2; i <= k; ++i)
      if (h(i, j) != 0.0) throw StructuralError("hessenberg_least_squares: entry below the first subdiagonal");
  HessenbergFactorization f;
  f.start(g[0]);
  Vector col;
  for (std::size_t j = 0; j < k; ++j) {
    col.assign(j + 2, 0.0);
    for (std::size_t i = 0; i < j + 2; ++i) col[i] = h(i, j);
    f.add_column(col, g[j + 1]);
  }
  return {f.solve(), f.residual_norm()};
}

}  // namespace rrk
