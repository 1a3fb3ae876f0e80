#include <gtest/gtest.h>

#include <numbers>

#include "lossy/bayes.hpp"

using namespace lossy;
using std::numbers::pi;

TEST(PovmDensity, Examples) {
  const double chi = 0.6;
  const ComplexMatrix quarter{{1.0, chi}, {chi, 1.0}};
  EXPECT_LT(distance(povm_density(pi / 4, chi, 1.0), quarter * (1.0 / (2 * pi))), 1e-15);
  const ComplexMatrix zero{{0.0, 0.0}, {0.0, 2.0}};
  EXPECT_LT(distance(povm_density(0.0, chi, 1.0), zero * (1.0 / (2 * pi))), 1e-15);
  for (double th : {0.0, 0.7, 2.0}) {
    EXPECT_LT(distance(povm_density(th, chi, 0.0), ComplexMatrix::identity(2) * (1.0 / (2 * pi))), 1e-15);
  }
}

TEST(RiskOperator, ClosedFormValuesAndQuadrature) {
  const auto i2 = ComplexMatrix::identity(2);
  EXPECT_LT(distance(risk_operator(1.0, 1.0, RiskMethod::ClosedForm), i2 * (1.0 / (2 * pi))), 1e-15);
  EXPECT_LT(distance(risk_operator(0.5, 1.0, RiskMethod::ClosedForm), i2 * (3.25 / (8 * pi))), 1e-15);
  EXPECT_LT(distance(risk_operator(0.5, 0.0, RiskMethod::ClosedForm), i2 * (1.0 / (4 * pi))), 1e-15);
  for (double chi : {0.2, 0.7, 1.0})
    for (double k : {-1.0, 0.3, 1.0}) {
      EXPECT_LT(distance(risk_operator(chi, k, RiskMethod::Quadrature), risk_operator(chi, k, RiskMethod::ClosedForm)), 1e-9);
    }
  EXPECT_THROW(risk_operator(0.5, 1.0, RiskMethod::Quadrature, 0), Error);
}

TEST(GapEigenvalues, Examples) {
  auto [lo, hi] = gap_eigenvalues(pi / 4, 0.5, 1.0);
  EXPECT_NEAR(lo, 0.25, 1e-12);
  EXPECT_NEAR(hi, 2.25, 1e-12);
  std::tie(lo, hi) = gap_eigenvalues(0.0, 0.5, 1.0);
  EXPECT_NEAR(lo, -0.75, 1e-12);
  EXPECT_NEAR(hi, 3.25, 1e-12);
  std::tie(lo, hi) = gap_eigenvalues(pi / 4, 1.0, 1.0);
  EXPECT_NEAR(lo, 0.0, 1e-12);
  EXPECT_NEAR(hi, 4.0, 1e-12);
  // Same values as diagonalizing [[1+χ², −2χ], [−2χ, 1+χ²]].
  const auto es = eigh(ComplexMatrix{{1.25, -1.0}, {-1.0, 1.25}});
  EXPECT_NEAR(es.eigenvalues[0], 0.25, 1e-14);
  EXPECT_NEAR(es.eigenvalues[1], 2.25, 1e-14);
}

TEST(GapEigenvalues, QuarterPiIsOneMinusChiSquared) {
  for (int i = 1; i <= 10; ++i) {
    const double chi = i / 10.0;
    EXPECT_NEAR(gap_eigenvalues(pi / 4, chi, 1.0).first, (1 - chi) * (1 - chi), 1e-12);
  }
}

TEST(GapEigenvalues, AssembledMatchesClosedForm) {
  for (double chi : {0.1, 0.5, 0.95, 1.0})
    for (double k : {-0.8, 0.0, 0.4, 1.0})
      for (double th : theta_grid(48)) {
        const auto a = gap_eigenvalues(th, chi, k);
        const auto b = gap_eigenvalues_closed_form(th, chi, k);
        EXPECT_NEAR(a.first, b.first, 1e-12);
        EXPECT_NEAR(a.second, b.second, 1e-12);
      }
}

TEST(Optimality, PositivitySetShrinksTowardQuarterPi) {
  const auto wide = optimality_scan(0.9, 1.0, 720);
  const auto narrow = optimality_scan(0.999, 1.0, 720);
  EXPECT_GT(wide.positivity_set.size(), narrow.positivity_set.size());
  for (double th : narrow.positivity_set) EXPECT_LE(std::pow(std::cos(2 * th), 2), (1 - 0.999 * 0.999) / 4 + 1e-12);
  // Without noise the gap closes at every angle.
  const auto noiseless = optimality_scan(1.0, 1.0, 720);
  EXPECT_EQ(noiseless.positivity_set.size(), 720u);
  const auto flat = optimality_scan(0.4, 0.0, 64);
  for (std::size_t i = 0; i < flat.theta.size(); ++i) {
    EXPECT_NEAR(flat.lambda_minus[i], 0.0, 1e-12);
    EXPECT_LE(flat.product_residual[i], 1e-12);
  }
}

TEST(Optimality, DomainErrors) {
  EXPECT_THROW(optimality_scan(0.0, 1.0, 64), Error);
  EXPECT_THROW(optimality_scan(0.5, 1.5, 64), Error);
  EXPECT_THROW(theta_grid(4), Error);
  EXPECT_EQ(theta_grid(9).size() % 8, 0u);
}

TEST(JointProbability, MaximallyEntangledValues) {
  for (double chi : {0.2, 0.5, 0.8}) {
    const double tau = -std::log(chi) / (2.0 * 0.25);
    const auto r = joint_probability(SchmidtInput(0.5, pi / 4), ChannelParams(0.25, tau, 1.0));
    EXPECT_NEAR(r.p_mixed, (1 + chi) / 2, 1e-12);
    EXPECT_NEAR(r.p_double, (1 + chi * chi) / 2, 1e-12);
  }
}

TEST(JointProbability, ProductEdgeCasesAreFinite) {
  for (double th : {0.0, 0.3, pi / 4}) {
    const auto r = joint_probability(SchmidtInput(0.0, th), ChannelParams(0.25, 0.2, 1.0));
    EXPECT_GE(r.p_mixed, 0.0);
    EXPECT_LE(r.p_mixed, 1.0);
    EXPECT_GE(r.p_double, 0.0);
    EXPECT_LE(r.p_double, 1.0);
  }
  // Projector vector is θ-independent.
  const auto v = joint_projector_vector(0.8);
  EXPECT_NEAR(std::abs(v[0]), 1 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(std::abs(v[1]), 0.0, 1e-15);
}
