#pragma once

// Exact check of the cat-qubit approximation. The probe is written as a sum of
// coherent dyads over the frame {|α⟩, |−α⟩} (per mode), evolved with the
// closed-form dyad map, and re-expressed in the symmetrically (Löwdin)
// orthogonalized evolved frame. The input cat qubit is encoded in the
// orthogonalized input frame, so with no decay the two pictures coincide.

#include <array>
#include <cmath>

#include "lossy/channel.hpp"
#include "lossy/linalg.hpp"

namespace lossy {

namespace detail {

inline constexpr double kFrameSingularity = 1e-12;

inline ComplexMatrix gram_matrix(const std::array<Complex, 2>& amps) {
  ComplexMatrix g(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) g(i, j) = coherent_overlap(amps[i], amps[j]);
  return g;
}

inline void require_regular_frame(const ComplexMatrix& gram) {
  if (eigh(gram).min_eigenvalue() < kFrameSingularity) {
    throw Error(ErrorKind::DegenerateFrame, "coherent frame Gram matrix is numerically singular");
  }
}

inline ComplexMatrix gram_power(const ComplexMatrix& gram, double power) {
  return hermitian_function(gram, [power](double lam) { return std::pow(lam, power); });
}

}  // namespace detail

/// Single-mode dyad sum for a qubit operator written in the frame (|a₀⟩, |a₁⟩).
inline CoherentDyadSum to_dyads(const ComplexMatrix& coeffs, const std::array<Complex, 2>& frame) {
  CoherentDyadSum out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) out.terms.push_back({coeffs(i, j), frame[i], frame[j]});
  return out;
}

/// Matrix of a dyad sum over the frame in the Löwdin-orthogonalized basis of
/// that frame: G^½·C·G^½ with C the frame coefficients.
inline ComplexMatrix frame_matrix(const CoherentDyadSum& d, const std::array<Complex, 2>& frame) {
  ComplexMatrix coeffs(2, 2);
  for (const auto& term : d.canonical().terms) {
    std::size_t i = 2, j = 2;
    for (std::size_t k = 0; k < 2; ++k) {
      if (term.left == frame[k]) i = k;
      if (term.right == frame[k]) j = k;
    }
    if (i == 2 || j == 2) throw Error(ErrorKind::InvalidDimension, "dyad amplitude outside the frame");
    coeffs(i, j) += term.coeff;
  }
  const auto gram = detail::gram_matrix(frame);
  detail::require_regular_frame(gram);
  const auto half = detail::gram_power(gram, 0.5);
  return half * coeffs * half;
}

/// Channel output computed without the orthogonality approximation, in the
/// orthogonalized evolved frame and normalized to unit trace.
inline ComplexMatrix exact_output(ChannelKind kind, const SchmidtInput& s, const ChannelParams& p) {
  const Complex alpha{p.alpha(), 0.0};
  const std::array<Complex, 2> frame{alpha, -alpha};
  const std::array<Complex, 2> evolved{alpha * p.t(), -alpha * p.t()};

  const auto gram_in = detail::gram_matrix(frame);
  const auto gram_out = detail::gram_matrix(evolved);
  detail::require_regular_frame(gram_in);
  detail::require_regular_frame(gram_out);

  // Per-mode pieces: frame change on input, evolution factors, output Gram.
  const auto lowdin_in = detail::gram_power(gram_in, -0.5);
  ComplexMatrix factors(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) factors(i, j) = dyad_evolution_factor(frame[i], frame[j], p);
  const auto ones = ComplexMatrix{{1.0, 1.0}, {1.0, 1.0}};
  const auto half_in = detail::gram_power(gram_in, 0.5);
  const auto half_out = detail::gram_power(gram_out, 0.5);

  ComplexMatrix qubit_input = probe_input(kind, s);
  ComplexMatrix lowdin, evolution, half;
  switch (kind) {
    case ChannelKind::Single:
      lowdin = lowdin_in;
      evolution = factors;
      half = half_out;
      break;
    case ChannelKind::Mixed:
      lowdin = kron(lowdin_in, lowdin_in);
      evolution = kron(factors, ones);
      half = kron(half_out, half_in);
      break;
    case ChannelKind::Double:
      lowdin = kron(lowdin_in, lowdin_in);
      evolution = kron(factors, factors);
      half = kron(half_out, half_out);
      break;
  }

  ComplexMatrix coeffs = lowdin * qubit_input * lowdin;
  for (std::size_t i = 0; i < coeffs.rows(); ++i)
    for (std::size_t j = 0; j < coeffs.cols(); ++j) coeffs(i, j) *= evolution(i, j);
  ComplexMatrix out = half * coeffs * half;
  return out * (1.0 / out.trace().real());
}

/// Trace distance between the cat-qubit output (at the channel's exact
/// coherence factor) and the exact dyad computation. Measures only the error
/// of treating |±α⟩ as orthonormal.
inline double qubit_vs_exact_discrepancy(const SchmidtInput& s, const ChannelParams& p, ChannelKind kind) {
  const auto qubit = output_at_coherence(kind, s, p.exact_coherence());
  return trace_distance(qubit.matrix(), exact_output(kind, s, p));
}

/// Trace distance between the short-time output (χ = e^{−2|α|²ητ}) and the
/// cat-qubit output at the exact coherence factor e^{−2|α|²(1−t²)}.
inline double short_time_drift(const SchmidtInput& s, const ChannelParams& p, ChannelKind kind) {
  return trace_distance(channel_output(kind, s, p).matrix(), output_at_coherence(kind, s, p.exact_coherence()).matrix());
}

}  // namespace lossy
