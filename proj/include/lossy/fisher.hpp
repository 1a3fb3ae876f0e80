#pragma once

// SLD quantum Fisher information of lossy-channel outputs with respect to the
// decay rate η.

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lossy/channel.hpp"
#include "lossy/density.hpp"
#include "lossy/linalg.hpp"

namespace lossy {

enum class DerivativeMethod { Analytic, FiniteDifference };

inline std::string_view to_string(DerivativeMethod m) {
  return m == DerivativeMethod::Analytic ? "analytic" : "finite-difference";
}

struct DensityFamily {
  ChannelKind kind = ChannelKind::Single;
  SchmidtInput input;  // only theta is used for the single channel
  ChannelParams params{0.25, 0.1, 3.0};

  DensityMatrix rho() const { return channel_output(kind, input, params); }
};

/// Central-difference step in η.
inline double fd_step(double eta) { return 1e-6 * std::max(eta, 1.0); }

/// dρ/dη. Every output entry is c·χⁿ with n the coherence order, so the
/// analytic route is n·c·χⁿ·(−2|α|²τ).
inline ComplexMatrix d_rho_d_eta(const DensityFamily& f, DerivativeMethod method) {
  const auto& p = f.params;
  if (method == DerivativeMethod::Analytic) {
    const double chi = p.chi();
    const double dlog = -2.0 * p.alpha() * p.alpha() * p.tau();
    ComplexMatrix out = probe_input(f.kind, f.input);
    for (std::size_t i = 0; i < out.rows(); ++i)
      for (std::size_t j = 0; j < out.cols(); ++j) {
        const int n = coherence_order(f.kind, i, j);
        out(i, j) *= static_cast<double>(n) * std::pow(chi, n) * dlog;
      }
    return out;
  }
  const double h = fd_step(p.eta());
  const auto plus = apply_decoherence(probe_input(f.kind, f.input), f.kind, p.chi_at(p.eta() + h));
  const auto minus = apply_decoherence(probe_input(f.kind, f.input), f.kind, p.chi_at(p.eta() - h));
  return (plus - minus) * (0.5 / h);
}

struct SldSolution {
  ComplexMatrix sld;
  double j = 0.0;
  std::size_t kernel_rank = 0;
  double residual = 0.0;          // ‖dρ − ½(Lρ + ρL)‖_F
  double support_residual = 0.0;  // same, projected on the support of ρ
};

namespace detail {

inline void require_matching(const ComplexMatrix& rho, const ComplexMatrix& drho) {
  if (!rho.is_square() || rho.rows() != drho.rows() || rho.cols() != drho.cols()) {
    throw Error(ErrorKind::InvalidDimension, "rho and drho must be square with equal shape");
  }
  if (hermiticity_residual(drho) > 1e-10 * std::max(1.0, drho.frobenius_norm())) {
    throw Error(ErrorKind::NotHermitian, "drho is not Hermitian");
  }
}

}  // namespace detail

/// Solves dρ = ½(Lρ + ρL) in the eigenbasis of ρ. Pairs with
/// p_i + p_j ≤ 1e−12·max(p) form the kernel block, where L is set to zero;
/// a derivative reaching into that block has no SLD.
inline SldSolution solve_sld(const ComplexMatrix& rho, const ComplexMatrix& drho) {
  detail::require_matching(rho, drho);
  const auto sys = eigh(rho);
  const auto& p = sys.eigenvalues;
  const auto& v = sys.eigenvectors;
  const std::size_t n = p.size();
  const double threshold = 1e-12 * std::max(sys.max_eigenvalue(), 0.0);
  const ComplexMatrix d = v.adjoint() * drho * v;
  const double kernel_tol = 1e-9 * std::max(1.0, drho.frobenius_norm());

  SldSolution out;
  ComplexMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (2.0 * p[i] <= threshold) ++out.kernel_rank;
    for (std::size_t j = 0; j < n; ++j) {
      const double denom = p[i] + p[j];
      if (denom > threshold) {
        l(i, j) = 2.0 * d(i, j) / denom;
        out.j += 2.0 * std::norm(d(i, j)) / denom;
      } else if (std::abs(d(i, j)) > kernel_tol) {
        throw Error(ErrorKind::UnsupportedDerivative, "derivative leaves the support of rho");
      }
    }
  }
  out.sld = hermitian_part(v * l * v.adjoint());

  const ComplexMatrix mismatch = drho - 0.5 * (out.sld * rho + rho * out.sld);
  out.residual = mismatch.frobenius_norm();
  ComplexMatrix projector(n, n);
  for (std::size_t k = 0; k < n; ++k)
    if (2.0 * p[k] > threshold)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) projector(r, c) += v(r, k) * std::conj(v(c, k));
  out.support_residual = (projector * mismatch * projector).frobenius_norm();
  return out;
}

inline ComplexMatrix sld_solve(const ComplexMatrix& rho, const ComplexMatrix& drho) { return solve_sld(rho, drho).sld; }

/// Σ 2|dρ_ij|²/(p_i + p_j) over the support pairs; equals Tr(ρL²).
inline double fisher_j(const ComplexMatrix& rho, const ComplexMatrix& drho) { return solve_sld(rho, drho).j; }

// ---------------------------------------------------------------------------
// Closed-form catalog.

enum class Provenance { AsPrinted, Corrected, Derived, Exact };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::AsPrinted: return "as-printed";
    case Provenance::Corrected: return "corrected";
    case Provenance::Derived: return "derived";
    case Provenance::Exact: return "exact";
  }
  return "unknown";
}

struct ClosedFormEntry {
  std::string label;
  Provenance provenance;
  double value;
};

namespace detail {

inline constexpr double kAngleTol = 1e-12;
inline constexpr double kGammaTol = 1e-12;

inline bool optimal_basis(double theta) { return std::abs(std::cos(2.0 * theta)) <= kAngleTol; }
inline bool coherent_basis(double theta) { return std::abs(std::sin(2.0 * theta)) <= kAngleTol; }

inline void require_nondegenerate(const ChannelParams& p) {
  const double chi = p.chi();
  if (1.0 - chi * chi < 1e-12) {
    std::ostringstream msg;
    msg << "1 - chi^2 < 1e-12 (eta=" << p.eta() << ", tau=" << p.tau() << ", alpha=" << p.alpha() << ")";
    throw Error(ErrorKind::DegenerateParameter, msg.str());
  }
}

}  // namespace detail

/// Every cataloged closed form that applies to the family, in catalog order.
inline std::vector<ClosedFormEntry> closed_form_catalog(const DensityFamily& f) {
  detail::require_nondegenerate(f.params);
  const auto& p = f.params;
  const double a2 = p.alpha() * p.alpha();
  const double a4t2 = a2 * a2 * p.tau() * p.tau();
  const double chi = p.chi();
  const double chi2 = chi * chi;
  const double chi4 = chi2 * chi2;
  const double e4 = std::exp(-4.0 * a2 * p.eta() * p.tau());
  const double e8 = std::exp(-8.0 * a2 * p.eta() * p.tau());
  const double g = f.input.gamma;
  const double gg = g * (1.0 - g);

  std::vector<ClosedFormEntry> out;
  const double theta = f.input.theta;
  if (detail::optimal_basis(theta)) {
    const double single = 4.0 * a4t2 * e4 / (1.0 - e4);
    switch (f.kind) {
      case ChannelKind::Single:
        out.push_back({"single/optimal", Provenance::AsPrinted, single});
        break;
      case ChannelKind::Mixed:
        out.push_back({"mixed/optimal", Provenance::AsPrinted, single});
        break;
      case ChannelKind::Double:
        if (g <= detail::kGammaTol || g >= 1.0 - detail::kGammaTol) {
          out.push_back({"double/optimal/product", Provenance::AsPrinted, 8.0 * a4t2 * e4 / (1.0 - e4)});
        } else if (std::abs(g - 0.5) <= detail::kGammaTol) {
          out.push_back({"double/optimal/maximally-entangled", Provenance::AsPrinted, 16.0 * a4t2 * e8 / (1.0 - e8)});
        }
        break;
    }
  } else if (detail::coherent_basis(theta)) {
    const double poly = 8.0 * g * g - 8.0 * g + 1.0;
    const double k2 = (2.0 * g - 1.0) * (2.0 * g - 1.0);
    switch (f.kind) {
      case ChannelKind::Single:
        out.push_back({"single/coherent", Provenance::Exact, 0.0});
        break;
      case ChannelKind::Mixed: {
        const double printed_den = 4.0 * gg * std::pow(g, 4) + poly * g * g - k2;
        if (printed_den != 0.0) {
          out.push_back({"mixed/coherent", Provenance::AsPrinted, 16.0 * g * (g - 1.0) * chi4 * a4t2 / printed_den});
        }
        out.push_back({"mixed/coherent", Provenance::Corrected,
                       16.0 * g * (g - 1.0) * chi4 * a4t2 / (4.0 * gg * chi4 + poly * chi2 - k2)});
        out.push_back({"mixed/coherent", Provenance::Exact, 16.0 * gg * a4t2 * chi2 / (1.0 - chi2)});
        break;
      }
      case ChannelKind::Double: {
        const double chi8 = chi4 * chi4;
        out.push_back({"double/coherent", Provenance::AsPrinted,
                       64.0 * g * (g - 1.0) * chi8 * a4t2 / (4.0 * gg * chi4 + poly * chi2 - k2)});
        out.push_back({"double/coherent", Provenance::Derived,
                       64.0 * g * (g - 1.0) * chi8 * a4t2 / (4.0 * gg * chi8 + poly * chi4 - k2)});
        out.push_back({"double/coherent", Provenance::Exact, 64.0 * gg * a4t2 * chi4 / (1.0 - chi4)});
        break;
      }
    }
  }
  return out;
}

/// The preferred catalog value: printed forms where they are consistent, the
/// χ-corrected form for the mixed coherent basis and the derived conjecture
/// for the double coherent basis. Absent for uncataloged families.
inline std::optional<ClosedFormEntry> closed_form_j(const DensityFamily& f) {
  const auto entries = closed_form_catalog(f);
  if (entries.empty()) return std::nullopt;
  if (detail::coherent_basis(f.input.theta)) {
    const Provenance want = f.kind == ChannelKind::Mixed    ? Provenance::Corrected
                            : f.kind == ChannelKind::Double ? Provenance::Derived
                                                            : Provenance::Exact;
    for (const auto& e : entries)
      if (e.provenance == want) return e;
  }
  return entries.front();
}

/// Catalog entry with the given provenance, if any.
inline std::optional<ClosedFormEntry> closed_form_entry(const DensityFamily& f, Provenance provenance) {
  for (auto& e : closed_form_catalog(f))
    if (e.provenance == provenance) return e;
  return std::nullopt;
}

/// Whether a catalog entry is expected to equal the numeric J for this family.
/// The χ-corrected and derived coherent-basis forms only hold at γ = ½, and
/// the printed coherent-basis forms never do.
inline bool catalog_entry_is_exact(const DensityFamily& f, const ClosedFormEntry& e) {
  if (e.provenance == Provenance::Exact) return true;
  if (detail::optimal_basis(f.input.theta)) return true;
  return e.provenance != Provenance::AsPrinted && std::abs(f.input.gamma - 0.5) <= detail::kGammaTol;
}

// ---------------------------------------------------------------------------

struct FisherReport {
  double j_numeric = 0.0;
  std::optional<ClosedFormEntry> j_closed_form;
  double j_chi = 0.0;  // J with respect to χ: J_η / (dχ/dη)²
  double sld_residual = 0.0;
  double support_residual = 0.0;
  DerivativeMethod derivative_method = DerivativeMethod::Analytic;
  std::size_t kernel_rank = 0;

  bool agrees(double rel_tol = 1e-8) const {
    if (!j_closed_form) return false;
    const double ref = j_closed_form->value;
    return std::abs(j_numeric - ref) <= rel_tol * std::max(std::abs(ref), std::abs(j_numeric));
  }
};

inline FisherReport fisher_report(const DensityFamily& f, DerivativeMethod method = DerivativeMethod::Analytic) {
  detail::require_nondegenerate(f.params);
  const auto rho = f.rho();
  const auto drho = d_rho_d_eta(f, method);
  const auto sol = solve_sld(rho.matrix(), drho);
  FisherReport r;
  r.j_numeric = sol.j;
  r.j_closed_form = closed_form_j(f);
  const double dchi = f.params.dchi_deta();
  r.j_chi = dchi != 0.0 ? sol.j / (dchi * dchi) : 0.0;
  r.sld_residual = sol.residual;
  r.support_residual = sol.support_residual;
  r.derivative_method = method;
  r.kernel_rank = sol.kernel_rank;
  return r;
}

inline double fisher_information(const DensityFamily& f) { return fisher_report(f).j_numeric; }

// ---------------------------------------------------------------------------
// Grid sweeps.

struct SweepRow {
  double gamma = 0.0;
  double tau = 0.0;
  double j_numeric = 0.0;
  std::optional<double> j_closed_form;
};

struct SweepTemplate {
  ChannelKind kind = ChannelKind::Double;
  double theta = std::numbers::pi / 4.0;
  double alpha = 3.0;
  double eta = 0.25;
};

/// Numeric J over γ (outer) × τ (inner), computed in parallel and returned in
/// grid order. A failing point is rethrown with its coordinates; when several
/// fail, the first in grid order wins.
inline std::vector<SweepRow> sweep_j(const SweepTemplate& tmpl, std::span<const double> gammas, std::span<const double> taus,
                                     unsigned workers = 0) {
  if (gammas.empty() || taus.empty()) throw Error(ErrorKind::InvalidParameter, "sweep grids must be nonempty");
  const std::size_t total = gammas.size() * taus.size();
  std::vector<SweepRow> rows(total);
  std::vector<std::exception_ptr> errors(total);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const double g = gammas[idx / taus.size()];
      const double tau = taus[idx % taus.size()];
      try {
        const DensityFamily fam{tmpl.kind, SchmidtInput(g, tmpl.theta), ChannelParams(tmpl.eta, tau, tmpl.alpha)};
        const auto rep = fisher_report(fam);
        rows[idx] = {g, tau, rep.j_numeric, rep.j_closed_form ? std::optional(rep.j_closed_form->value) : std::nullopt};
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << e.message() << " at gamma=" << g << ", tau=" << tau;
        errors[idx] = std::make_exception_ptr(Error(e.kind(), msg.str()));
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return rows;
}

}  // namespace lossy
