// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lossy/bayes.hpp"
#include "lossy/cli.hpp"
#include "lossy/fisher.hpp"
#include "lossy/oracle.hpp"

using namespace lossy;
using std::numbers::pi;

namespace {

const std::vector<double> kAlphas{1, 2, 3, 4};
const std::vector<double> kEtas{0.05, 0.25, 1};
const std::vector<double> kTaus{0.01, 0.1, 0.5, 1};

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Reference values written out independently of the library catalog.
double ref_single(double a, double eta, double tau) {
  const double e = std::exp(-4 * a * a * eta * tau);
  return 4 * std::pow(a, 4) * tau * tau * e / (1 - e);
}
double ref_entangled(double a, double eta, double tau) {
  const double e = std::exp(-8 * a * a * eta * tau);
  return 16 * std::pow(a, 4) * tau * tau * e / (1 - e);
}

int failures = 0;

void verdict(int id, const char* suffix, bool ok, const std::string& detail) {
  std::printf("%s  criterion %d%s  %s\n", ok ? "PASS" : "FAIL", id, suffix, detail.c_str());
  if (!ok) ++failures;
}

std::string num(double v) { return format_double(v); }

double j(ChannelKind kind, double g, double th, double a, double eta, double tau) {
  return fisher_information({kind, SchmidtInput(g, th), ChannelParams(eta, tau, a)});
}

// Parses the figure CSV into (tau -> gamma -> j_numeric).
std::map<double, std::map<double, double>> figure_surface(const std::string& name, std::size_t& rows) {
  cli::RunConfig cfg;
  cfg.command = cli::Command::Figure;
  cfg.figure = name;
  std::ostringstream out, err;
  if (cli::run(cfg, out, err) != cli::kExitOk) throw std::runtime_error("figure run failed: " + err.str());
  std::istringstream in(out.str());
  std::map<double, std::map<double, double>> surface;
  rows = 0;
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with("#")) continue;
    if (!header) {
      header = true;
      continue;
    }
    std::istringstream cells(line);
    std::string g, t, v;
    std::getline(cells, g, ',');
    std::getline(cells, t, ',');
    std::getline(cells, v, ',');
    surface[*parse_double(t)][*parse_double(g)] = *parse_double(v);
    ++rows;
  }
  return surface;
}

std::vector<double> argmax_per_tau(const std::map<double, std::map<double, double>>& s) {
  std::vector<double> out;
  for (const auto& [tau, row] : s) {
    auto best = row.begin();
    for (auto it = row.begin(); it != row.end(); ++it)
      if (it->second > best->second) best = it;
    out.push_back(best->first);
  }
  return out;
}

void criterion1() {
  double worst = 0;
  for (double a : kAlphas)
    for (double eta : kEtas)
      for (double tau : kTaus) worst = std::max(worst, rel(j(ChannelKind::Single, 1, pi / 4, a, eta, tau), ref_single(a, eta, tau)));
  verdict(1, "", worst <= 1e-8, "single-channel J vs closed form, max rel=" + num(worst));
}

void criterion2() {
  double spread = 0, offset = 0;
  for (double a : kAlphas)
    for (double eta : kEtas)
      for (double tau : kTaus) {
        double lo = INFINITY, hi = -INFINITY;
        for (int i = 0; i <= 10; ++i) {
          const double v = j(ChannelKind::Mixed, i / 10.0, pi / 4, a, eta, tau);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        spread = std::max(spread, (hi - lo) / hi);
        offset = std::max(offset, rel(hi, j(ChannelKind::Single, 1, pi / 4, a, eta, tau)));
      }
  verdict(2, "", spread <= 1e-8 && offset <= 1e-8,
          "mixed J spread over gamma=" + num(spread) + ", vs single=" + num(offset));
}

void criterion3() {
  double worst = 0;
  for (double a : kAlphas)
    for (double eta : kEtas)
      for (double tau : kTaus) {
        const double single = j(ChannelKind::Single, 1, pi / 4, a, eta, tau);
        for (double g : {0.0, 1.0}) worst = std::max(worst, rel(j(ChannelKind::Double, g, pi / 4, a, eta, tau), 2 * single));
      }
  verdict(3, "", worst <= 1e-8, "double product J vs 2x single, max rel=" + num(worst));
}

void criterion4() {
  double worst = 0;
  bool ordered = true;
  for (double a : kAlphas)
    for (double eta : kEtas)
      for (double tau : kTaus) {
        const double ent = j(ChannelKind::Double, 0.5, pi / 4, a, eta, tau);
        worst = std::max(worst, rel(ent, ref_entangled(a, eta, tau)));
        if (a > 1)
          for (double g : {0.0, 1.0}) ordered = ordered && ent < j(ChannelKind::Double, g, pi / 4, a, eta, tau);
      }
  verdict(4, "", worst <= 1e-8 && ordered,
          "entangled J max rel=" + num(worst) + ", entangled < product: " + (ordered ? "yes" : "no"));
}

void criterion5() {
  std::size_t rows = 0;
  const auto s = figure_surface("fig3", rows);
  bool argmax_ok = true;
  for (double g : argmax_per_tau(s)) argmax_ok = argmax_ok && (g == 0.0 || g == 1.0);
  double worst = 0;
  for (const auto& [tau, row] : s) {
    const double prod = 2 * ref_single(3, 0.25, tau);
    worst = std::max({worst, rel(row.at(0.0), prod), rel(row.at(1.0), prod), rel(row.at(0.5), ref_entangled(3, 0.25, tau))});
  }
  verdict(5, "", rows == 5100 && argmax_ok && worst <= 1e-8,
          "fig3 rows=" + std::to_string(rows) + ", argmax in {0,1}: " + (argmax_ok ? "yes" : "no") +
              ", slice max rel=" + num(worst));
}

void criterion6() {
  bool argmax_ok = true;
  for (const char* name : {"fig4", "fig5"}) {
    std::size_t rows = 0;
    for (double g : argmax_per_tau(figure_surface(name, rows))) argmax_ok = argmax_ok && g == 0.5;
  }
  double worst_mixed = 0, worst_double = 0, worst_ratio = 0;
  for (double tau : kTaus) {
    const ChannelParams p(0.25, tau, 3);
    const double chi2 = p.chi() * p.chi();
    const double a4t2 = 81 * tau * tau;
    worst_mixed = std::max(worst_mixed, rel(j(ChannelKind::Mixed, 0.5, 0, 3, 0.25, tau), 4 * a4t2 * chi2 / (1 - chi2)));
    const double dbl = j(ChannelKind::Double, 0.5, 0, 3, 0.25, tau);
    worst_double = std::max(worst_double, rel(dbl, ref_entangled(3, 0.25, tau)));
    const double printed = 16 * chi2 * chi2 * chi2 / (1 - chi2) * a4t2;
    worst_ratio = std::max(worst_ratio, rel(printed / dbl, chi2 * (1 - chi2 * chi2) / (1 - chi2)));
    std::printf("INFO  criterion 6  tau=%s printed/numeric double-channel coherent-basis ratio=%s\n", num(tau).c_str(),
                num(printed / dbl).c_str());
  }
  verdict(6, "", argmax_ok && worst_mixed <= 1e-8 && worst_double <= 1e-8,
          std::string("fig4/fig5 argmax at 1/2: ") + (argmax_ok ? "yes" : "no") + ", mixed max rel=" + num(worst_mixed) +
              ", double max rel=" + num(worst_double) + ", ratio model max rel=" + num(worst_ratio));
}

void criterion7() {
  double worst_gap = 0;
  for (int i = 1; i <= 10; ++i) {
    const double chi = i / 10.0;
    worst_gap = std::max(worst_gap, std::abs(gap_eigenvalues(pi / 4, chi, 1).first - (1 - chi) * (1 - chi)));
  }
  bool necessity = true;
  for (double th : snap_quarter_pi(GridSpec{0, 2 * pi, 721}.values())) {
    if (std::abs(std::cos(2 * th)) <= 0.05) continue;
    bool found = false;
    for (double chi : {0.99, 0.999, 1.0}) found = found || gap_eigenvalues(th, chi, 1).first < 0;
    necessity = necessity && found;
  }
  double worst_quad = 0;
  for (double chi : {0.1, 0.5, 0.9, 1.0})
    for (double k : {1.0, 0.5, 0.0, -0.5})
      worst_quad = std::max(worst_quad, distance(risk_operator(chi, k, RiskMethod::Quadrature), risk_operator(chi, k, RiskMethod::ClosedForm)));
  verdict(7, "", worst_gap <= 1e-12 && necessity && worst_quad <= 1e-9,
          "lambda- at pi/4 max err=" + num(worst_gap) + ", off-optimal angles refuted: " + (necessity ? "yes" : "no") +
              ", quadrature dist=" + num(worst_quad));
}

void criterion8() {
  const auto grid = snap_quarter_pi(GridSpec{0, 2 * pi, 721}.values());
  int at_quarter = 0, total = 0;
  std::string example;
  for (int gi = 1; gi <= 9; ++gi)
    for (double chi : {0.2, 0.5, 0.8}) {
      const double g = gi / 10.0;
      const ChannelParams p(0.25, -std::log(chi) / (2 * 0.25), 1.0);
      for (int which = 0; which < 2; ++which) {
        double best = -1, best_th = 0;
        for (double th : grid) {
          const auto r = joint_probability(SchmidtInput(g, th), p);
          const double v = which == 0 ? r.p_mixed : r.p_double;
          if (v > best + 1e-12) {
            best = v;
            best_th = th;
          }
        }
        ++total;
        if (std::abs(std::cos(2 * best_th)) < 1e-9) {
          ++at_quarter;
        } else if (example.empty()) {
          example = "e.g. gamma=" + num(g) + " chi=" + num(chi) + " argmax theta=" + num(best_th);
        }
      }
    }
  verdict(8, "a", at_quarter == total,
          "joint-probability maxima at theta=+-pi/4 in " + std::to_string(at_quarter) + "/" + std::to_string(total) +
              " scans" + (example.empty() ? "" : "; " + example));

  double worst = 0, printed_gap = 0;
  for (double chi : {0.2, 0.5, 0.8}) {
    const auto r = joint_probability(SchmidtInput(0.5, pi / 4), ChannelParams(0.25, -std::log(chi) / (2 * 0.25), 1.0));
    worst = std::max({worst, std::abs(r.p_mixed - (1 + chi) / 2), std::abs(r.p_double - (1 + chi * chi) / 2)});
    printed_gap = std::max(printed_gap, std::abs(r.printed_formula_value - r.p_mixed));
  }
  verdict(8, "b", worst <= 1e-12,
          "p' and p'' at gamma=1/2 max err=" + num(worst) + " (printed formula differs by up to " + num(printed_gap) + ")");
}

void criterion9() {
  double worst = 0, drift = 0;
  for (auto kind : {ChannelKind::Single, ChannelKind::Mixed, ChannelKind::Double})
    for (double eta : {0.05, 0.25, 1.0})
      for (double tau : {0.01, 0.05, 0.1})
        if (eta * tau <= 0.1 + 1e-15)
          for (double th : {0.0, 0.3, pi / 4, 1.2})
            for (double g : {0.0, 0.3, 0.5, 1.0}) {
              const SchmidtInput s(g, th);
              const ChannelParams p(eta, tau, 3.0);
              worst = std::max(worst, qubit_vs_exact_discrepancy(s, p, kind));
              drift = std::max(drift, short_time_drift(s, p, kind));
            }
  bool decreasing = true;
  for (auto kind : {ChannelKind::Single, ChannelKind::Mixed, ChannelKind::Double})
    for (double th : {0.3, pi / 4})
      for (double g : {0.3, 1.0}) {
        const SchmidtInput s(g, th);
        const double d2 = qubit_vs_exact_discrepancy(s, ChannelParams(0.25, 0.2, 2), kind);
        const double d3 = qubit_vs_exact_discrepancy(s, ChannelParams(0.25, 0.2, 3), kind);
        const double d4 = qubit_vs_exact_discrepancy(s, ChannelParams(0.25, 0.2, 4), kind);
        decreasing = decreasing && d2 > d3 && d3 > d4;
      }
  std::printf("INFO  criterion 9  short-time chi vs exact coherence drift, max trace distance=%s\n", num(drift).c_str());
  verdict(9, "", worst <= 1e-5 && decreasing,
          "qubit vs exact dyad oracle max trace distance=" + num(worst) + ", decreasing in |alpha|: " + (decreasing ? "yes" : "no"));
}

void criterion10() {
  double trace = 0, herm = 0, neg = 0, support = 0, deriv = 0;
  for (double a : kAlphas)
    for (double eta : kEtas)
      for (double tau : kTaus)
        for (double th : {0.0, 0.3, pi / 4, 1.1, pi / 2, 2.5})
          for (double g : {0.0, 0.2, 0.5, 0.7, 1.0})
            for (auto kind : {ChannelKind::Single, ChannelKind::Mixed, ChannelKind::Double}) {
              const DensityFamily f{kind, SchmidtInput(g, th), ChannelParams(eta, tau, a)};
              const auto rho = f.rho();
              const auto st = rho.sanity();
              trace = std::max(trace, st.trace_error);
              herm = std::max(herm, st.hermiticity_residual);
              neg = std::max(neg, -st.min_eigenvalue);
              const auto an = d_rho_d_eta(f, DerivativeMethod::Analytic);
              const auto fd = d_rho_d_eta(f, DerivativeMethod::FiniteDifference);
              const double scale = an.max_abs();
              for (std::size_t i = 0; i < an.rows(); ++i)
                for (std::size_t k = 0; k < an.cols(); ++k) {
                  const double mag = std::max(std::abs(an(i, k)), 1e-3 * scale);
                  if (mag > 0) deriv = std::max(deriv, std::abs(an(i, k) - fd(i, k)) / mag);
                }
              support = std::max(support, solve_sld(rho.matrix(), an).support_residual);
            }
  verdict(10, "", trace <= 1e-12 && herm <= 1e-12 && neg <= 1e-10 && support <= 1e-9 && deriv <= 1e-6,
          "|tr-1|=" + num(trace) + " herm=" + num(herm) + " min eig=" + num(-neg) + " SLD support=" + num(support) +
              " derivative rel=" + num(deriv));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
