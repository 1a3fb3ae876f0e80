#pragma once

// Lossy (amplitude-damping) channel acting on cat-state probes.
//
// Every output matrix is written in the evolved coherent product basis
// {|αt⟩, |−αt⟩}^⊗n, ordered with mode 1 as the high index: for two modes the
// rows are (αα, α−α, −αα, −α−α). In the cat-qubit picture the channel keeps
// populations and multiplies each coherence |a⟩⟨b| (a ≠ b) of an acted mode
// by the decoherence factor χ.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "lossy/density.hpp"
#include "lossy/linalg.hpp"

namespace lossy {

class ChannelParams {
 public:
  ChannelParams(double eta, double tau, double alpha) : eta_(eta), tau_(tau), alpha_(alpha) {
    if (!(std::isfinite(eta) && eta >= 0.0)) throw Error(ErrorKind::InvalidParameter, "eta must be finite and >= 0");
    if (!(std::isfinite(tau) && tau >= 0.0)) throw Error(ErrorKind::InvalidParameter, "tau must be finite and >= 0");
    if (!(std::isfinite(alpha) && alpha > 0.0)) throw Error(ErrorKind::InvalidParameter, "alpha must be finite and > 0");
  }

  double eta() const noexcept { return eta_; }
  double tau() const noexcept { return tau_; }
  double alpha() const noexcept { return alpha_; }

  /// Amplitude transmission t = exp(−ητ/2).
  double t() const { return std::exp(-0.5 * eta_ * tau_); }

  /// Short-time decoherence factor χ = exp(−2|α|²ητ).
  double chi() const { return chi_at(eta_); }
  double chi_at(double eta) const { return std::exp(-2.0 * alpha_ * alpha_ * eta * tau_); }

  /// dχ/dη = −2|α|²τ·χ.
  double dchi_deta() const { return -2.0 * alpha_ * alpha_ * tau_ * chi(); }

  /// Exact coherence factor |⟨−α|α⟩|^(1−t²) = exp(−2|α|²(1 − t²)) of the
  /// closed-form dyad evolution; tends to χ as ητ → 0.
  double exact_coherence() const { return std::exp(-2.0 * alpha_ * alpha_ * -std::expm1(-eta_ * tau_)); }

  ChannelParams with_eta(double eta) const { return {eta, tau_, alpha_}; }
  ChannelParams with_tau(double tau) const { return {eta_, tau, alpha_}; }
  ChannelParams with_alpha(double alpha) const { return {eta_, tau_, alpha}; }

 private:
  double eta_;
  double tau_;
  double alpha_;
};

enum class ChannelKind { Single, Mixed, Double };

inline std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Single: return "single";
    case ChannelKind::Mixed: return "mixed";
    case ChannelKind::Double: return "double";
  }
  return "unknown";
}

inline ChannelKind parse_channel_kind(std::string_view s) {
  if (s == "single") return ChannelKind::Single;
  if (s == "mixed") return ChannelKind::Mixed;
  if (s == "double") return ChannelKind::Double;
  throw Error(ErrorKind::InvalidParameter, "unknown channel kind '" + std::string(s) + "'");
}

/// Two-mode Schmidt probe √γ|φφ⟩ + √(1−γ)|ψψ⟩ with
/// |φ⟩ = sinθ|α⟩ + cosθ|−α⟩ and |ψ⟩ = cosθ|α⟩ − sinθ|−α⟩.
struct SchmidtInput {
  double gamma = 1.0;
  double theta = std::numbers::pi / 4.0;

  SchmidtInput() = default;
  SchmidtInput(double g, double th) : gamma(g), theta(th) {
    if (!(std::isfinite(g) && g >= 0.0 && g <= 1.0)) throw Error(ErrorKind::InvalidParameter, "gamma must lie in [0, 1]");
    if (!std::isfinite(th)) throw Error(ErrorKind::InvalidParameter, "theta must be finite");
  }

  /// 2(γ − ½), the weight of the reduced single-mode Bloch vector.
  double k() const { return 2.0 * gamma - 1.0; }
  double schmidt_cross() const { return std::sqrt(gamma * (1.0 - gamma)); }
};

/// |φ⟩ and |ψ⟩ in coherent coordinates (|α⟩, |−α⟩).
struct CatBasis {
  std::array<Complex, 2> phi;
  std::array<Complex, 2> psi;
};

inline CatBasis cat_basis(double theta) {
  // Rounding residue such as cos(π/2) ≈ 6e−17 is cleared so quadrant angles give exact axes.
  auto clean = [](double v) { return std::abs(v) < 1e-15 ? 0.0 : v; };
  const double s = clean(std::sin(theta));
  const double c = clean(std::cos(theta));
  return {{Complex{s}, Complex{c}}, {Complex{c}, Complex{-s}}};
}

/// ⟨a|b⟩ = exp(−|a|²/2 − |b|²/2 + a*·b).
inline Complex coherent_overlap(Complex a, Complex b) {
  return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

// ---------------------------------------------------------------------------
// Exact non-orthogonal representation.

struct DyadTerm {
  Complex coeff;
  Complex left;   // |left⟩
  Complex right;  // ⟨right|
};

/// Σ c·|a⟩⟨b| over coherent states, with no orthogonality assumption.
struct CoherentDyadSum {
  std::vector<DyadTerm> terms;

  /// tr(Σ c|a⟩⟨b|) = Σ c⟨b|a⟩.
  Complex trace() const {
    Complex acc{};
    for (const auto& term : terms) acc += term.coeff * coherent_overlap(term.right, term.left);
    return acc;
  }

  /// Merge terms with identical amplitudes and drop exact zeros; terms are
  /// sorted by (left, right) lexicographically on (re, im).
  CoherentDyadSum canonical() const {
    auto key_less = [](const DyadTerm& x, const DyadTerm& y) {
      const std::array<double, 4> kx{x.left.real(), x.left.imag(), x.right.real(), x.right.imag()};
      const std::array<double, 4> ky{y.left.real(), y.left.imag(), y.right.real(), y.right.imag()};
      return kx < ky;
    };
    std::vector<DyadTerm> sorted = terms;
    std::sort(sorted.begin(), sorted.end(), key_less);
    CoherentDyadSum out;
    for (const auto& term : sorted) {
      if (!out.terms.empty() && out.terms.back().left == term.left && out.terms.back().right == term.right) {
        out.terms.back().coeff += term.coeff;
      } else {
        out.terms.push_back(term);
      }
    }
    std::erase_if(out.terms, [](const DyadTerm& t) { return t.coeff == Complex{}; });
    return out;
  }

  /// True when every term (c, a, b) has a partner (c*, b, a).
  bool is_hermitian(double tol = 1e-12) const {
    const auto canon = canonical();
    for (const auto& term : canon.terms) {
      bool matched = false;
      for (const auto& other : canon.terms) {
        if (other.left == term.right && other.right == term.left &&
            std::abs(other.coeff - std::conj(term.coeff)) <= tol * std::max(1.0, std::abs(term.coeff))) {
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
    return true;
  }
};

/// Coefficient picked up by |a⟩⟨b| under the lossy channel:
/// |a⟩⟨b| ↦ ⟨b|a⟩^(1−t²)·|at⟩⟨bt|.
inline Complex dyad_evolution_factor(Complex a, Complex b, const ChannelParams& p) {
  const double one_minus_t2 = -std::expm1(-p.eta() * p.tau());
  return std::exp(one_minus_t2 * (-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(b) * a));
}

inline CoherentDyadSum evolve_dyad(const CoherentDyadSum& d, const ChannelParams& p) {
  const double t = p.t();
  CoherentDyadSum out;
  out.terms.reserve(d.terms.size());
  for (const auto& term : d.terms) {
    out.terms.push_back({term.coeff * dyad_evolution_factor(term.left, term.right, p), term.left * t, term.right * t});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cat-qubit picture.

/// Pure input states in coherent coordinates.
inline ComplexMatrix single_input(double theta) {
  const auto basis = cat_basis(theta);
  return outer(basis.phi, basis.phi);
}

inline std::array<Complex, 4> schmidt_vector(const SchmidtInput& s) {
  const auto basis = cat_basis(s.theta);
  const double a = std::sqrt(s.gamma);
  const double b = std::sqrt(1.0 - s.gamma);
  std::array<Complex, 4> v{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) v[2 * i + j] = a * basis.phi[i] * basis.phi[j] + b * basis.psi[i] * basis.psi[j];
  return v;
}

inline ComplexMatrix two_mode_input(const SchmidtInput& s) {
  const auto v = schmidt_vector(s);
  return outer(v, v);
}

/// The input |Φ⟩⟨Φ| in the Schmidt product basis (φφ, φψ, ψφ, ψψ).
inline DensityMatrix schmidt_state(const SchmidtInput& s) {
  const double a = std::sqrt(s.gamma);
  const double b = std::sqrt(1.0 - s.gamma);
  const std::array<Complex, 4> v{a, 0.0, 0.0, b};
  return DensityMatrix(outer(v, v));
}

/// Maps an operator written in the Schmidt basis (φ, ψ)^⊗n to coherent
/// coordinates (|α⟩, |−α⟩)^⊗n.
inline ComplexMatrix to_coherent_basis(const ComplexMatrix& m, double theta) {
  const auto basis = cat_basis(theta);
  const ComplexMatrix r{{basis.phi[0], basis.psi[0]}, {basis.phi[1], basis.psi[1]}};
  if (m.rows() == 2) return r * m * r.adjoint();
  if (m.rows() == 4) {
    const auto rr = kron(r, r);
    return rr * m * rr.adjoint();
  }
  throw Error(ErrorKind::InvalidDimension, "to_coherent_basis handles 2x2 and 4x4 operators");
}

/// Number of channel-acted modes on which row index i and column index j
/// differ; the cat-qubit channel scales entry (i, j) by χ to this power.
inline int coherence_order(ChannelKind kind, std::size_t i, std::size_t j) {
  switch (kind) {
    case ChannelKind::Single: return i != j ? 1 : 0;
    case ChannelKind::Mixed: return (i / 2) != (j / 2) ? 1 : 0;
    case ChannelKind::Double: return ((i / 2) != (j / 2) ? 1 : 0) + ((i % 2) != (j % 2) ? 1 : 0);
  }
  return 0;
}

inline std::size_t dimension(ChannelKind kind) { return kind == ChannelKind::Single ? 2 : 4; }

/// Applies the cat-qubit channel with an explicit coherence factor to an
/// input written in coherent coordinates.
inline ComplexMatrix apply_decoherence(const ComplexMatrix& input, ChannelKind kind, double coherence) {
  if (input.rows() != dimension(kind) || input.cols() != dimension(kind)) {
    throw Error(ErrorKind::InvalidDimension, "input dimension does not match channel kind");
  }
  ComplexMatrix out = input;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= std::pow(coherence, coherence_order(kind, i, j));
  return out;
}

inline ComplexMatrix probe_input(ChannelKind kind, const SchmidtInput& s) {
  return kind == ChannelKind::Single ? single_input(s.theta) : two_mode_input(s);
}

/// Channel output for a given decoherence factor (χ or an exact coherence).
inline DensityMatrix output_at_coherence(ChannelKind kind, const SchmidtInput& s, double coherence) {
  return DensityMatrix(apply_decoherence(probe_input(kind, s), kind, coherence));
}

/// ½I + χ sinθ cosθ σx + (sin²θ − ½)σz.
inline DensityMatrix single_output(double theta, const ChannelParams& p) {
  return output_at_coherence(ChannelKind::Single, SchmidtInput(1.0, theta), p.chi());
}

/// (ε ⊗ I)(|Φ⟩⟨Φ|).
inline DensityMatrix mixed_output(const SchmidtInput& s, const ChannelParams& p) {
  return output_at_coherence(ChannelKind::Mixed, s, p.chi());
}

/// (ε ⊗ ε)(|Φ⟩⟨Φ|).
inline DensityMatrix double_output(const SchmidtInput& s, const ChannelParams& p) {
  return output_at_coherence(ChannelKind::Double, s, p.chi());
}

inline DensityMatrix channel_output(ChannelKind kind, const SchmidtInput& s, const ChannelParams& p) {
  return output_at_coherence(kind, s, p.chi());
}

}  // namespace lossy
