#pragma once

#include <algorithm>
#include <cmath>

#include "lossy/linalg.hpp"

namespace lossy {

struct StateSanity {
  double trace_error = 0.0;           // |tr ρ − 1|
  double hermiticity_residual = 0.0;  // ‖ρ − ρ†‖_F
  double min_eigenvalue = 0.0;

  bool ok(double trace_tol = 1e-12, double herm_tol = 1e-12, double psd_tol = 1e-10) const {
    return trace_error <= trace_tol && hermiticity_residual <= herm_tol && min_eigenvalue >= -psd_tol;
  }
};

/// A density operator in a fixed orthonormal basis. Construction symmetrizes
/// ρ ← (ρ + ρ†)/2 and remembers how far the assembled matrix was from Hermitian.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& assembled)
      : assembly_residual_(hermiticity_residual(assembled)), rho_(hermitian_part(assembled)) {
    if (!rho_.is_square()) throw Error(ErrorKind::InvalidDimension, "density matrix must be square");
    if (!rho_.all_finite()) throw Error(ErrorKind::InvalidParameter, "density matrix has non-finite entries");
  }

  const ComplexMatrix& matrix() const noexcept { return rho_; }
  std::size_t dim() const noexcept { return rho_.rows(); }
  const Complex& operator()(std::size_t i, std::size_t j) const { return rho_(i, j); }

  /// ‖ρ − ρ†‖_F of the matrix as it was assembled, before symmetrization.
  double assembly_residual() const noexcept { return assembly_residual_; }

  double purity() const { return (rho_ * rho_).trace().real(); }

  StateSanity sanity() const {
    return {std::abs(rho_.trace() - Complex{1.0, 0.0}), hermiticity_residual(rho_), eigh(rho_).min_eigenvalue()};
  }

 private:
  double assembly_residual_;
  ComplexMatrix rho_;
};

}  // namespace lossy
