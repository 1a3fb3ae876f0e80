#pragma once

// Small dense complex matrices: enough for 2x2 single-mode and 4x4 two-mode
// density operators. Values are immutable from the caller's point of view;
// every operation returns a fresh matrix.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lossy/error.hpp"

namespace lossy {

using Complex = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorKind::InvalidDimension, "entry count does not match shape");
    }
  }

  // Row-major nested initializer: {{a, b}, {c, d}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw Error(ErrorKind::InvalidDimension, "ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::span<const Complex> entries() const noexcept { return data_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  Complex trace() const {
    require_square("trace");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) acc += (*this)(i, i);
    return acc;
  }

  double frobenius_norm() const {
    double acc = 0.0;
    for (const auto& z : data_) acc += std::norm(z);
    return std::sqrt(acc);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= Complex{s, 0.0}; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex{s, 0.0}; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::InvalidDimension, "matrix product shape mismatch");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_square(const char* what) const {
    if (!is_square()) throw Error(ErrorKind::InvalidDimension, std::string(what) + " needs a square matrix");
  }
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::InvalidDimension, "shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

namespace pauli {
inline ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() { return {{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}}; }
inline ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

inline double distance(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).frobenius_norm(); }

/// ‖h − h†‖_F
inline double hermiticity_residual(const ComplexMatrix& h) { return distance(h, h.adjoint()); }

inline ComplexMatrix hermitian_part(const ComplexMatrix& h) { return 0.5 * (h + h.adjoint()); }

/// Kronecker product; entry (i·u + k, j·v + l) = a(i,j)·b(k,l) with u = b.rows(), v = b.cols().
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t u = b.rows();
  const std::size_t v = b.cols();
  ComplexMatrix out(a.rows() * u, a.cols() * v);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < u; ++k)
        for (std::size_t l = 0; l < v; ++l) out(i * u + k, j * v + l) = a(i, j) * b(k, l);
  return out;
}

/// Partial trace of a two-qubit operator. `keep` is 1 or 2 and names the
/// subsystem that survives.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, int keep) {
  if (m.rows() != 4 || m.cols() != 4) throw Error(ErrorKind::InvalidDimension, "partial_trace needs a 4x4 matrix");
  if (keep != 1 && keep != 2) throw Error(ErrorKind::InvalidDimension, "partial_trace keeps subsystem 1 or 2");
  ComplexMatrix out(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t s = 0; s < 2; ++s) {
        if (keep == 1) {
          out(i, j) += m(2 * i + s, 2 * j + s);
        } else {
          out(i, j) += m(2 * s + i, 2 * s + j);
        }
      }
  return out;
}

struct HermitianEigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns

  ComplexMatrix reconstruct() const {
    return eigenvectors * ComplexMatrix::diagonal(eigenvalues) * eigenvectors.adjoint();
  }
  double min_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
  double max_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

// One unitary Jacobi rotation zeroing a(p,q). The rotation is
// J = [[c, s·e], [−s·e*, c]] on the (p,q) plane with e = a(p,q)/|a(p,q)|;
// a ← J† a J and v ← v J.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex e = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Complex jpq = s * e;
  const Complex jqp = -s * std::conj(e);
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * c + akq * jqp;
    a(k, q) = akp * jpq + akq * c;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * c + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * c;
  }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
/// Throws NotHermitian if ‖h − h†‖_F > 1e−10·max(1, ‖h‖_F) and NoConvergence
/// if 100 sweeps do not bring the off-diagonal mass below 1e−14·‖h‖_F.
inline HermitianEigenSystem eigh(const ComplexMatrix& h) {
  if (!h.is_square()) throw Error(ErrorKind::InvalidDimension, "eigh needs a square matrix");
  if (!h.all_finite()) throw Error(ErrorKind::NotHermitian, "eigh input has non-finite entries");
  const double norm = h.frobenius_norm();
  if (hermiticity_residual(h) > 1e-10 * std::max(1.0, norm)) {
    throw Error(ErrorKind::NotHermitian, "eigh input is not Hermitian");
  }

  constexpr int kMaxSweeps = 100;
  const std::size_t n = h.rows();
  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double target = 1e-14 * norm;

  bool converged = detail::off_diagonal_norm(a) <= target;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    converged = detail::off_diagonal_norm(a) <= target;
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "Jacobi sweeps exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  HermitianEigenSystem out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

/// f(H) = V·diag(f(λ))·V† for Hermitian H.
template <typename Fn>
ComplexMatrix hermitian_function(const ComplexMatrix& h, Fn&& fn) {
  const auto sys = eigh(h);
  std::vector<double> mapped(sys.eigenvalues.size());
  std::transform(sys.eigenvalues.begin(), sys.eigenvalues.end(), mapped.begin(), fn);
  return sys.eigenvectors * ComplexMatrix::diagonal(mapped) * sys.eigenvectors.adjoint();
}

/// ½‖a − b‖₁ for Hermitian a, b.
inline double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto sys = eigh(hermitian_part(a - b));
  double acc = 0.0;
  for (double lam : sys.eigenvalues) acc += std::abs(lam);
  return 0.5 * acc;
}

/// ⟨v|m|v⟩ for a column vector v given as a span.
inline Complex expectation(const ComplexMatrix& m, std::span<const Complex> v) {
  if (m.rows() != v.size() || m.cols() != v.size()) throw Error(ErrorKind::InvalidDimension, "expectation shape");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) acc += std::conj(v[i]) * m(i, j) * v[j];
  return acc;
}

inline ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b) {
  ComplexMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

}  // namespace lossy
