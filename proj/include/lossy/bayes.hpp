#pragma once

// Delta-cost Bayesian optimality of the cat-state POVM family.
//
// The reduced output of one mode is ½(I + kχσx sin2θ − kσz cos2θ) with k = 1
// for the single channel and k = 2γ − 1 for a Schmidt probe. With a uniform
// prior 1/2π on θ the optimality conditions are Υ − W ≥ 0 and
// (Υ − W)·dΠ = 0.

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "lossy/channel.hpp"
#include "lossy/linalg.hpp"

namespace lossy {

enum class RiskMethod { ClosedForm, Quadrature };

namespace detail {

inline void require_bayes_domain(double chi, double k) {
  if (!(chi > 0.0 && chi <= 1.0)) throw Error(ErrorKind::InvalidParameter, "chi must lie in (0, 1]");
  if (!(std::abs(k) <= 1.0)) throw Error(ErrorKind::InvalidParameter, "|k| must be <= 1");
}

// I + kχσx sin2θ − kσz cos2θ
inline ComplexMatrix bloch_operator(double theta, double chi, double k) {
  const double sx = k * chi * std::sin(2.0 * theta);
  const double sz = -k * std::cos(2.0 * theta);
  return {{1.0 + sz, sx}, {sx, 1.0 - sz}};
}

}  // namespace detail

/// dΠ/dθ = (1/2π)(I + kχσx sin2θ − kσz cos2θ).
inline ComplexMatrix povm_density(double theta, double chi, double k) {
  detail::require_bayes_domain(chi, k);
  return detail::bloch_operator(theta, chi, k) * (0.5 / std::numbers::pi);
}

/// W(θ) = Z·ρ(θ) = (1/4π)(I + kχσx sin2θ − kσz cos2θ).
inline ComplexMatrix weighted_state(double theta, double chi, double k) {
  detail::require_bayes_domain(chi, k);
  return detail::bloch_operator(theta, chi, k) * (0.25 / std::numbers::pi);
}

/// Υ = ∫ W(θ) dΠ(θ) over θ ∈ [0, 2π). The closed form is
/// (I/4π)[1 + ½k²(χ² + 1)]; the quadrature route uses a composite trapezoid
/// rule with `nodes` points.
inline ComplexMatrix risk_operator(double chi, double k, RiskMethod method, std::size_t nodes = 10000) {
  detail::require_bayes_domain(chi, k);
  if (method == RiskMethod::ClosedForm) {
    return ComplexMatrix::identity(2) * ((1.0 + 0.5 * k * k * (chi * chi + 1.0)) / (4.0 * std::numbers::pi));
  }
  if (nodes == 0) throw Error(ErrorKind::InvalidParameter, "quadrature needs at least one node");
  const double h = 2.0 * std::numbers::pi / static_cast<double>(nodes);
  ComplexMatrix acc(2, 2);
  for (std::size_t n = 0; n < nodes; ++n) {
    const double theta = h * static_cast<double>(n);
    acc += weighted_state(theta, chi, k) * povm_density(theta, chi, k);
  }
  return acc * h;
}

/// Eigenvalues (λ₋, λ₊) of 8π(Υ − W(θ)), assembled from the matrices.
inline std::pair<double, double> gap_eigenvalues(double theta, double chi, double k) {
  const auto gap = (risk_operator(chi, k, RiskMethod::ClosedForm) - weighted_state(theta, chi, k)) * (8.0 * std::numbers::pi);
  const auto sys = eigh(gap);
  return {sys.eigenvalues[0], sys.eigenvalues[1]};
}

/// k²(χ² + 1) ± 2|k|·√(cos²2θ + χ² sin²2θ).
inline std::pair<double, double> gap_eigenvalues_closed_form(double theta, double chi, double k) {
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  const double centre = k * k * (chi * chi + 1.0);
  const double spread = 2.0 * std::abs(k) * std::sqrt(c * c + chi * chi * s * s);
  return {centre - spread, centre + spread};
}

/// ‖(Υ − W(θ))·dΠ/dθ‖_F.
inline double product_residual(double theta, double chi, double k) {
  const auto gap = risk_operator(chi, k, RiskMethod::ClosedForm) - weighted_state(theta, chi, k);
  return (gap * povm_density(theta, chi, k)).frobenius_norm();
}

/// Uniform grid of `count` points on [0, 2π) whose step divides π/4, so π/4
/// is always a node. `count` is rounded up to a multiple of 8.
inline std::vector<double> theta_grid(std::size_t count) {
  if (count < 8) throw Error(ErrorKind::InvalidParameter, "theta grid needs at least 8 points");
  const std::size_t n = ((count + 7) / 8) * 8;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
  return grid;
}

struct OptimalityReport {
  std::vector<double> theta;
  double chi = 1.0;
  double k = 1.0;
  std::vector<double> lambda_minus;
  std::vector<double> lambda_plus;
  std::vector<double> product_residual;
  std::vector<double> positivity_set;  // grid θ with λ₋ ≥ −1e−12
};

inline OptimalityReport optimality_scan(double chi, double k, std::span<const double> thetas) {
  detail::require_bayes_domain(chi, k);
  OptimalityReport report;
  report.theta.assign(thetas.begin(), thetas.end());
  report.chi = chi;
  report.k = k;
  for (double theta : report.theta) {
    const auto [lo, hi] = gap_eigenvalues(theta, chi, k);
    report.lambda_minus.push_back(lo);
    report.lambda_plus.push_back(hi);
    report.product_residual.push_back(product_residual(theta, chi, k));
    if (lo >= -1e-12) report.positivity_set.push_back(theta);
  }
  return report;
}

inline OptimalityReport optimality_scan(double chi, double k, std::size_t grid_size) {
  const auto grid = theta_grid(grid_size);
  return optimality_scan(chi, k, grid);
}

// ---------------------------------------------------------------------------
// Joint projective measurement on the two-mode output.

struct JointMeasurementResult {
  double p_mixed = 0.0;
  double p_double = 0.0;
  double theta = 0.0;
  double gamma = 0.0;
  double printed_formula_value = 0.0;
};

/// |Ψ⟩ = (|φφ⟩ + |ψψ⟩)/√2 in coherent coordinates.
inline std::array<Complex, 4> joint_projector_vector(double theta) {
  const auto basis = cat_basis(theta);
  std::array<Complex, 4> v{};
  const double norm = 1.0 / std::numbers::sqrt2;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) v[2 * i + j] = norm * (basis.phi[i] * basis.phi[j] + basis.psi[i] * basis.psi[j]);
  return v;
}

/// ½{1 + √(γ(1−γ))[sin²θ + 2γ(sin⁴θ + cos⁴θ)]}, the closed form printed for
/// both p′ and p″. Reported for comparison only.
inline double joint_probability_printed(double gamma, double theta) {
  const double s2 = std::pow(std::sin(theta), 2);
  const double c2 = std::pow(std::cos(theta), 2);
  return 0.5 * (1.0 + std::sqrt(gamma * (1.0 - gamma)) * (s2 + 2.0 * gamma * (s2 * s2 + c2 * c2)));
}

inline JointMeasurementResult joint_probability(const SchmidtInput& s, const ChannelParams& p) {
  const auto psi = joint_projector_vector(s.theta);
  JointMeasurementResult out;
  out.theta = s.theta;
  out.gamma = s.gamma;
  out.p_mixed = expectation(mixed_output(s, p).matrix(), psi).real();
  out.p_double = expectation(double_output(s, p).matrix(), psi).real();
  out.printed_formula_value = joint_probability_printed(s.gamma, s.theta);
  return out;
}

}  // namespace lossy
