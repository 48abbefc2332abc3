#pragma once

// Small dense complex linear algebra for bipartite density matrices.
// Everything here is sized for two-qudit problems (at most ~100x100), so the
// storage is a plain row-major vector and the eigensolver is cyclic Jacobi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qclab/error.hpp"

namespace qclab {

using complex = std::complex<double>;

namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double jacobi_offdiag = 1e-13;
inline constexpr int jacobi_max_sweeps = 100;
}  // namespace tol

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, complex{0.0, 0.0}) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(Errc::dimension_mismatch, "entry count " + std::to_string(data_.size()) +
                                                " does not match " + std::to_string(rows_) +
                                                "x" + std::to_string(cols_));
    }
  }
  ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(Errc::dimension_mismatch, "ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  /// Outer product |u><v|.
  static ComplexMatrix outer(std::span<const complex> u, std::span<const complex> v) {
    ComplexMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const complex> data() const noexcept { return data_; }

  complex trace() const {
    complex t{0.0, 0.0};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  /// Largest entrywise deviation |M_ij - conj(M_ji)|; infinite for non-square input.
  double hermiticity_error() const {
    if (!is_square()) return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
  }

  bool is_hermitian(double tolerance = tol::hermitian) const {
    return hermiticity_error() <= tolerance;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs_diff(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return INFINITY;
    double worst = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k)
      worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
    return worst;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
    require_same_shape(rhs);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
    require_same_shape(rhs);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix m, complex s) { return m *= s; }
  friend ComplexMatrix operator*(complex s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(ComplexMatrix m, double s) { return m *= complex{s, 0.0}; }
  friend ComplexMatrix operator*(double s, ComplexMatrix m) { return m *= complex{s, 0.0}; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw Error(Errc::dimension_mismatch, "matrix product of " + a.shape() + " and " + b.shape());
    }
    ComplexMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const complex aik = a(i, k);
        if (aik == complex{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_same_shape(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw Error(Errc::dimension_mismatch, shape() + " vs " + rhs.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complex> data_;
};

/// (A⊗B)[(i·rB+k),(j·cB+l)] = A[i][j]·B[k][l]
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t rb = b.rows(), cb = b.cols();
  ComplexMatrix out(a.rows() * rb, a.cols() * cb);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const complex aij = a(i, j);
      if (aij == complex{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < rb; ++k)
        for (std::size_t l = 0; l < cb; ++l) out(i * rb + k, j * cb + l) = aij * b(k, l);
    }
  return out;
}

/// Tensor product of two vectors, index i·|v|+k.
inline std::vector<complex> kron(std::span<const complex> u, std::span<const complex> v) {
  std::vector<complex> out;
  out.reserve(u.size() * v.size());
  for (const auto& x : u)
    for (const auto& y : v) out.push_back(x * y);
  return out;
}

/// Eigenvalues of a Hermitian matrix in ascending order (cyclic complex Jacobi).
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!m.is_square()) throw Error(Errc::dimension_mismatch, "eigenvalues of non-square " + m.shape());
  const double herr = m.hermiticity_error();
  const double scale = std::max(1.0, m.frobenius_norm());
  if (herr > tol::hermitian * scale) {
    throw Error(Errc::not_hermitian, "max |M_ij - conj(M_ji)| = " + std::to_string(herr));
  }

  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  const double threshold = tol::jacobi_offdiag * scale;
  bool converged = off_norm() < threshold;
  for (int sweep = 0; sweep < tol::jacobi_max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        // Phase the q-th basis vector so that a_pq becomes real, then apply a
        // real Jacobi rotation in the (p, q) plane.
        const complex e = apq / g;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const complex ec = std::conj(e);

        for (std::size_t k = 0; k < n; ++k) {
          const complex akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * ec * akq;
          a(k, q) = s * akp + c * ec * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
      }
    }
    converged = off_norm() < threshold;
  }
  if (!converged) {
    throw Error(Errc::not_converged, "Jacobi did not converge in " +
                                         std::to_string(tol::jacobi_max_sweeps) + " sweeps");
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

enum class Subsystem { A, B };

/// Bipartite state on C^dA ⊗ C^dB. Only obtainable through validate_density.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t dim() const noexcept { return dim_a_ * dim_b_; }

 private:
  DensityMatrix(ComplexMatrix m, std::size_t da, std::size_t db)
      : matrix_(std::move(m)), dim_a_(da), dim_b_(db) {}
  friend DensityMatrix validate_density(ComplexMatrix m, std::size_t dim_a, std::size_t dim_b);

  ComplexMatrix matrix_;
  std::size_t dim_a_ = 0;
  std::size_t dim_b_ = 0;
};

/// Block transpose on one factor of a (dA·dB)-dimensional operator.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                                       Subsystem which) {
  const std::size_t n = dim_a * dim_b;
  if (m.rows() != n || m.cols() != n) {
    throw Error(Errc::dimension_mismatch, "matrix " + m.shape() + " inconsistent with dims (" +
                                              std::to_string(dim_a) + "," +
                                              std::to_string(dim_b) + ")");
  }
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t k = 0; k < dim_b; ++k)
      for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t l = 0; l < dim_b; ++l) {
          const complex v = m(i * dim_b + k, j * dim_b + l);
          if (which == Subsystem::A) {
            out(j * dim_b + k, i * dim_b + l) = v;
          } else {
            out(i * dim_b + l, j * dim_b + k) = v;
          }
        }
  return out;
}

inline ComplexMatrix partial_transpose(const DensityMatrix& rho, Subsystem which) {
  return partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b(), which);
}

/// Sum of |negative eigenvalues| of ρ^{T_A}, i.e. (‖ρ^{T_A}‖₁ − 1)/2, clamped at 0.
inline double negativity_numeric(const DensityMatrix& rho) {
  const auto eig = hermitian_eigenvalues(partial_transpose(rho, Subsystem::A));
  double neg = 0.0;
  for (double v : eig)
    if (v < 0.0) neg -= v;
  return std::max(0.0, neg);
}

inline DensityMatrix validate_density(ComplexMatrix m, std::size_t dim_a, std::size_t dim_b) {
  if (dim_a == 0 || dim_b == 0 || m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b) {
    throw Error(Errc::dimension_mismatch, "matrix " + m.shape() + " vs dims (" +
                                              std::to_string(dim_a) + "," +
                                              std::to_string(dim_b) + ")");
  }
  const double herr = m.hermiticity_error();
  if (herr > tol::hermitian) {
    throw Error(Errc::not_hermitian, "max |M_ij - conj(M_ji)| = " + std::to_string(herr));
  }
  const complex tr = m.trace();
  if (std::abs(tr - complex{1.0, 0.0}) > tol::trace) {
    throw Error(Errc::trace_mismatch, "trace = " + std::to_string(tr.real()));
  }
  const auto eig = hermitian_eigenvalues(m);
  if (!eig.empty() && eig.front() < -tol::psd) {
    throw Error(Errc::negative_eigenvalue, "min eigenvalue = " + std::to_string(eig.front()));
  }
  return DensityMatrix(std::move(m), dim_a, dim_b);
}

}  // namespace qclab
