#pragma once

// Self-check suite behind `lossy-estimator validate`.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lossy/bayes.hpp"
#include "lossy/channel.hpp"
#include "lossy/fisher.hpp"
#include "lossy/format.hpp"
#include "lossy/oracle.hpp"

namespace lossy {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool gating = true;  // non-gating checks report a claim without deciding the exit status
  std::string detail;
};

namespace detail {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& at) {
    if (v > value || where.empty()) {
      value = std::max(value, v);
      where = at;
    }
  }
};

inline std::string at(double alpha, double eta, double tau) {
  return "alpha=" + format_double(alpha) + " eta=" + format_double(eta) + " tau=" + format_double(tau);
}

}  // namespace detail

inline std::vector<CheckResult> run_validation() {
  using std::numbers::pi;
  std::vector<CheckResult> out;
  const std::vector<double> alphas{1, 2, 3, 4};
  const std::vector<double> etas{0.05, 0.25, 1};
  const std::vector<double> taus{0.01, 0.1, 0.5, 1};
  const std::vector<double> thetas{0.0, 0.3, pi / 4, 1.1, pi / 2, 2.5};
  const std::vector<double> gammas{0.0, 0.2, 0.5, 0.7, 1.0};
  const ChannelKind kinds[] = {ChannelKind::Single, ChannelKind::Mixed, ChannelKind::Double};

  auto report = [&](std::string name, bool ok, std::string detail, bool gating = true) {
    out.push_back({std::move(name), ok, gating, std::move(detail)});
  };

  {
    detail::Worst trace, herm, neg;
    for (double a : alphas)
      for (double tau : taus)
        for (double th : thetas)
          for (double g : gammas)
            for (auto kind : kinds) {
              const auto st = channel_output(kind, SchmidtInput(g, th), ChannelParams(0.25, tau, a)).sanity();
              const auto where = detail::at(a, 0.25, tau);
              trace.update(st.trace_error, where);
              herm.update(st.hermiticity_residual, where);
              neg.update(-st.min_eigenvalue, where);
            }
    report("output states are unit-trace Hermitian PSD", trace.value <= 1e-12 && herm.value <= 1e-12 && neg.value <= 1e-10,
           "max |tr-1|=" + format_double(trace.value) + " max herm=" + format_double(herm.value) +
               " min eig=" + format_double(-neg.value));
  }

  {
    double worst = 0.0;
    for (double tau : taus)
      for (double th : thetas)
        for (double g : gammas) {
          const ChannelParams p(0.25, tau, 3.0);
          const SchmidtInput s(g, th);
          const double k = s.k();
          const ComplexMatrix expect = 0.5 * (ComplexMatrix::identity(2) + k * p.chi() * std::sin(2 * th) * pauli::x() -
                                              k * std::cos(2 * th) * pauli::z());
          worst = std::max(worst, distance(partial_trace(mixed_output(s, p).matrix(), 1), expect));
          worst = std::max(worst, distance(partial_trace(double_output(s, p).matrix(), 1), expect));
        }
    report("reduced outputs match 1/2(I + k chi sin2θ σx - k cos2θ σz)", worst <= 1e-12, "max dist=" + format_double(worst));
  }

  {
    double worst = 0.0;
    for (double tau : taus)
      for (double th : thetas)
        for (double g : {0.0, 1.0}) {
          const ChannelParams p(0.25, tau, 3.0);
          const auto basis = cat_basis(th);
          const auto& v = g == 1.0 ? basis.phi : basis.psi;
          const auto pure = outer(v, v);
          const auto lossy1 = apply_decoherence(pure, ChannelKind::Single, p.chi());
          worst = std::max(worst, distance(mixed_output(SchmidtInput(g, th), p).matrix(), kron(lossy1, pure)));
          worst = std::max(worst, distance(double_output(SchmidtInput(g, th), p).matrix(), kron(lossy1, lossy1)));
        }
    report("product inputs factorize", worst <= 1e-12, "max dist=" + format_double(worst));
  }

  {
    double worst = 0.0;
    double worst_support = 0.0;
    for (double a : alphas)
      for (double eta : etas)
        for (double tau : taus)
          for (double th : thetas)
            for (double g : gammas)
              for (auto kind : kinds) {
                const DensityFamily f{kind, SchmidtInput(g, th), ChannelParams(eta, tau, a)};
                const auto an = d_rho_d_eta(f, DerivativeMethod::Analytic);
                const auto fd = d_rho_d_eta(f, DerivativeMethod::FiniteDifference);
                const double scale = std::max(an.max_abs(), 1e-300);
                for (std::size_t i = 0; i < an.rows(); ++i)
                  for (std::size_t j = 0; j < an.cols(); ++j)
                    worst = std::max(worst, std::abs(an(i, j) - fd(i, j)) / std::max(std::abs(an(i, j)), 1e-3 * scale));
                const auto sol = solve_sld(f.rho().matrix(), an);
                worst_support = std::max(worst_support, sol.support_residual);
              }
    report("analytic dρ/dη matches central differences", worst <= 1e-6, "max rel=" + format_double(worst));
    report("SLD support residual", worst_support <= 1e-9, "max=" + format_double(worst_support));
  }

  {
    detail::Worst worst;
    for (double a : alphas)
      for (double eta : etas)
        for (double tau : taus) {
          const ChannelParams p(eta, tau, a);
          std::vector<DensityFamily> cases{
              {ChannelKind::Single, SchmidtInput(1.0, pi / 4), p},   {ChannelKind::Mixed, SchmidtInput(0.37, pi / 4), p},
              {ChannelKind::Double, SchmidtInput(0.0, pi / 4), p},   {ChannelKind::Double, SchmidtInput(1.0, pi / 4), p},
              {ChannelKind::Double, SchmidtInput(0.5, pi / 4), p},   {ChannelKind::Mixed, SchmidtInput(0.5, 0.0), p},
              {ChannelKind::Double, SchmidtInput(0.5, 0.0), p},      {ChannelKind::Mixed, SchmidtInput(0.3, pi / 2), p},
              {ChannelKind::Double, SchmidtInput(0.3, pi / 2), p},
          };
          for (const auto& f : cases) {
            const double j = fisher_information(f);
            for (const auto& e : closed_form_catalog(f)) {
              if (catalog_entry_is_exact(f, e)) worst.update(detail::rel_err(j, e.value), e.label + " " + detail::at(a, eta, tau));
            }
          }
        }
    report("numeric J matches the closed-form catalog", worst.value <= 1e-8,
           "max rel=" + format_double(worst.value) + " at " + worst.where);
  }

  {
    double spread = 0.0;
    bool ordered = true;
    for (double a : alphas)
      for (double eta : etas)
        for (double tau : taus) {
          const ChannelParams p(eta, tau, a);
          double lo = INFINITY, hi = -INFINITY;
          for (int i = 0; i <= 10; ++i) {
            const double j = fisher_information({ChannelKind::Mixed, SchmidtInput(i / 10.0, pi / 4), p});
            lo = std::min(lo, j);
            hi = std::max(hi, j);
          }
          spread = std::max(spread, (hi - lo) / hi);
          if (a > 1.0) {
            const double ent = fisher_information({ChannelKind::Double, SchmidtInput(0.5, pi / 4), p});
            const double prod = fisher_information({ChannelKind::Double, SchmidtInput(1.0, pi / 4), p});
            ordered = ordered && ent < prod;
          }
        }
    report("mixed-channel J is independent of γ at θ=π/4", spread <= 1e-8, "max rel spread=" + format_double(spread));
    report("maximally entangled double-channel J below product J", ordered, ordered ? "holds" : "violated");
  }

  {
    double worst_gap = 0.0;
    double worst_quad = 0.0;
    for (double chi : {0.1, 0.5, 0.9, 1.0})
      for (double k : {1.0, 0.4, 0.0, -0.6}) {
        for (double th : theta_grid(64)) {
          const auto [lo, hi] = gap_eigenvalues(th, chi, k);
          const auto [clo, chi_] = gap_eigenvalues_closed_form(th, chi, k);
          worst_gap = std::max({worst_gap, std::abs(lo - clo), std::abs(hi - chi_)});
        }
        worst_quad = std::max(worst_quad, distance(risk_operator(chi, k, RiskMethod::Quadrature),
                                                   risk_operator(chi, k, RiskMethod::ClosedForm)));
      }
    report("gap eigenvalues match the closed form", worst_gap <= 1e-12, "max abs=" + format_double(worst_gap));
    report("quadrature risk operator matches closed form", worst_quad <= 1e-9, "max dist=" + format_double(worst_quad));
  }

  {
    double worst = 0.0;
    for (auto kind : kinds)
      for (double tau : {0.01, 0.1, 0.4})
        for (double th : {pi / 4, 0.0, 1.1}) worst = std::max(worst, qubit_vs_exact_discrepancy(SchmidtInput(0.3, th), ChannelParams(0.25, tau, 3.0), kind));
    report("cat-qubit approximation within 1e-5 of the exact dyad oracle (|α|=3)", worst <= 1e-5, "max=" + format_double(worst));
  }

  {
    // Reported only: p′, p″ maximal at θ = ±π/4.
    const auto grid = snap_quarter_pi(GridSpec{0.0, 2 * pi, 721}.values());
    int holds = 0, total = 0;
    for (double g : {0.1, 0.3, 0.7, 0.9})
      for (double tau : {0.1, 0.5}) {
        const ChannelParams p(0.25, tau, 1.0);
        double best = -1.0, best_th = 0.0;
        for (double th : grid) {
          const double v = joint_probability(SchmidtInput(g, th), p).p_mixed;
          if (v > best + 1e-12) {
            best = v;
            best_th = th;
          }
        }
        ++total;
        if (std::abs(std::cos(2 * best_th)) < 1e-9) ++holds;
      }
    report("joint probability maximal at θ=±π/4 (published claim)", holds == total,
           std::to_string(holds) + "/" + std::to_string(total) + " cases; direct contraction puts the maximum at θ=0 mod π/2",
           false);
  }
  return out;
}

}  // namespace lossy
