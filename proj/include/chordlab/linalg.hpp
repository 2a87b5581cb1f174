#pragma once
//
// Small dense linear algebra: a row-major matrix and the cyclic Jacobi
// eigensolver for real symmetric matrices.
//

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "chordlab/errors.hpp"

namespace chordlab {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<double> operator*(std::span<const double> x) const {
    assert(x.size() == cols_);
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  Matrix operator*(const Matrix& b) const {
    assert(cols_ == b.rows_);
    Matrix c(rows_, b.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const double a = (*this)(i, k);
        if (a == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a * b(k, j);
      }
    return c;
  }

  /// Largest |a_ij - a_ji|.
  double asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Eigenvalues in ascending order; vectors(:, k) belongs to values[k].
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix, run until every
/// off-diagonal element underflows relative to its diagonal neighbours.
/// Only the upper triangle of `a` is read.
inline SymmetricEigen jacobi_eigen(Matrix a, int max_sweeps = 100) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DomainError("jacobi_eigen: matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(j, i) = a(i, j);

  SymmetricEigen out;
  out.vectors = Matrix::identity(n);
  Matrix& v = out.vectors;
  std::vector<double> d(n), b(n), z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = b[i] = a(i, i);

  auto rotate = [](Matrix& m, std::size_t i, std::size_t j, std::size_t k, std::size_t l,
                   double s, double tau) {
    const double g = m(i, j);
    const double h = m(k, l);
    m(i, j) = g - s * (h + g * tau);
    m(k, l) = h + s * (g - h * tau);
  };

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
    if (off == 0.0) break;

    const double thresh = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = 100.0 * std::abs(a(p, q));
        if (sweep > 3 && std::abs(d[p]) + g == std::abs(d[p]) &&
            std::abs(d[q]) + g == std::abs(d[q])) {
          a(p, q) = 0.0;
          continue;
        }
        if (std::abs(a(p, q)) <= thresh) continue;

        double h = d[q] - d[p];
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = a(p, q) / h;
        } else {
          const double theta = 0.5 * h / a(p, q);
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        h = t * a(p, q);
        z[p] -= h;
        z[q] += h;
        d[p] -= h;
        d[q] += h;
        a(p, q) = 0.0;
        for (std::size_t j = 0; j < p; ++j) rotate(a, j, p, j, q, s, tau);
        for (std::size_t j = p + 1; j < q; ++j) rotate(a, p, j, j, q, s, tau);
        for (std::size_t j = q + 1; j < n; ++j) rotate(a, p, j, q, j, s, tau);
        for (std::size_t j = 0; j < n; ++j) rotate(v, j, p, j, q, s, tau);
      }
    }
    for (std::size_t p = 0; p < n; ++p) {
      b[p] += z[p];
      d[p] = b[p];
      z[p] = 0.0;
    }
  }
  if (sweep == max_sweeps) throw AssumptionError("jacobi_eigen: no convergence");
  out.sweeps = sweep;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  out.values.resize(n);
  Matrix sorted(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    for (std::size_t i = 0; i < n; ++i) sorted(i, k) = v(i, order[k]);
  }
  out.vectors = std::move(sorted);
  return out;
}

/// Orthonormal basis (as columns) of the orthogonal complement of span(vs)
/// in R^n. Vectors whose residual after projection is below `drop` (relative
/// to their own norm) are treated as dependent.
inline Matrix orthogonal_complement(const std::vector<std::vector<double>>& vs, std::size_t n,
                                    double drop = 1e-10) {
  std::vector<std::vector<double>> q;
  for (const auto& v0 : vs) {
    std::vector<double> v = v0;
    const double n0 = norm2(v);
    if (n0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : q) {
        const double c = dot(u, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * u[i];
      }
    const double nv = norm2(v);
    if (nv <= drop * n0) continue;
    for (double& x : v) x /= nv;
    q.push_back(std::move(v));
  }
  // Complement: eigenvectors of I - QQ^T with eigenvalue 1.
  Matrix p = Matrix::identity(n);
  for (const auto& u : q)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p(i, j) -= u[i] * u[j];
  const auto eig = jacobi_eigen(p);
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < n; ++k)
    if (eig.values[k] > 0.5) keep.push_back(k);
  Matrix basis(n, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) basis(i, c) = eig.vectors(i, keep[c]);
  return basis;
}

}  // namespace chordlab
