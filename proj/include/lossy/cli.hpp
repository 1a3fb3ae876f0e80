#pragma once

// Command layer behind the lossy-estimator executable: run configuration,
// layered config (file, then flags), and CSV/JSON emission.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lossy/bayes.hpp"
#include "lossy/channel.hpp"
#include "lossy/fisher.hpp"
#include "lossy/format.hpp"
#include "lossy/validation.hpp"

namespace lossy::cli {

enum class Command { SingleFisher, Sweep, OptimalityScan, JointProb, Figure, Validate };
enum class Format { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Command parse_command(std::string_view s) {
  if (s == "single-fisher") return Command::SingleFisher;
  if (s == "sweep") return Command::Sweep;
  if (s == "optimality-scan") return Command::OptimalityScan;
  if (s == "joint-prob") return Command::JointProb;
  if (s == "figure") return Command::Figure;
  if (s == "validate") return Command::Validate;
  throw ConfigError("unknown command '" + std::string(s) + "'");
}

struct FigurePreset {
  std::string name;
  ChannelKind kind;
  double theta;
  double alpha = 3.0;
  double eta = 0.25;
  GridSpec gamma{0.0, 1.0, 51};
  GridSpec tau{0.02, 2.0, 100};
};

inline FigurePreset figure_preset(std::string_view name) {
  if (name == "fig3") return {"fig3", ChannelKind::Double, std::numbers::pi / 4.0};
  if (name == "fig4") return {"fig4", ChannelKind::Mixed, 0.0};
  if (name == "fig5") return {"fig5", ChannelKind::Double, 0.0};
  throw ConfigError("unknown figure preset '" + std::string(name) + "' (expected fig3, fig4 or fig5)");
}

struct RunConfig {
  Command command = Command::SingleFisher;
  ChannelKind channel = ChannelKind::Single;
  double alpha = 3.0;
  double eta = 0.25;
  double tau = 0.1;
  double theta = std::numbers::pi / 4.0;
  double gamma = 0.5;
  GridSpec grid_gamma{0.0, 1.0, 51};
  GridSpec grid_tau{0.02, 2.0, 100};
  GridSpec grid_theta{0.0, 2.0 * std::numbers::pi, 721};
  bool grid_gamma_set = false;
  std::string out;  // empty: standard output
  Format format = Format::Csv;
  std::string figure;  // preset name for the figure command
};

/// Applies one `key=value` setting. Keys match the long flag names.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  auto number = [&](auto parser) {
    const auto v = parser(value);
    if (!v) throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
    return *v;
  };
  auto grid = [&](bool angles) {
    try {
      return parse_grid(value, angles);
    } catch (const Error& e) {
      throw ConfigError("invalid " + std::string(key) + ": " + e.message());
    }
  };
  if (key == "command") {
    cfg.command = parse_command(value);
  } else if (key == "channel") {
    try {
      cfg.channel = parse_channel_kind(value);
    } catch (const Error& e) {
      throw ConfigError(e.message());
    }
  } else if (key == "alpha") {
    cfg.alpha = number(parse_double);
  } else if (key == "eta") {
    cfg.eta = number(parse_double);
  } else if (key == "tau") {
    cfg.tau = number(parse_double);
  } else if (key == "theta") {
    cfg.theta = number(parse_angle);
  } else if (key == "gamma") {
    cfg.gamma = number(parse_double);
  } else if (key == "grid-gamma") {
    cfg.grid_gamma = grid(false);
    cfg.grid_gamma_set = true;
  } else if (key == "grid-tau") {
    cfg.grid_tau = grid(false);
  } else if (key == "grid-theta") {
    cfg.grid_theta = grid(true);
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else if (key == "format") {
    if (value == "csv") {
      cfg.format = Format::Csv;
    } else if (value == "json") {
      cfg.format = Format::Json;
    } else {
      throw ConfigError("format must be csv or json");
    }
  } else if (key == "name") {
    figure_preset(value);
    cfg.figure = std::string(value);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

/// Flat `key=value` lines; blank lines and lines starting with '#' are skipped.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + " is not key=value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config_text(in);
}

inline void validate_config(const RunConfig& cfg) {
  if (!(cfg.alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(cfg.eta >= 0.0)) throw ConfigError("eta must be >= 0");
  if (!(cfg.tau >= 0.0)) throw ConfigError("tau must be >= 0");
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  if (cfg.grid_gamma.start < 0.0 || cfg.grid_gamma.stop > 1.0) throw ConfigError("grid-gamma must lie in [0, 1]");
  if (cfg.grid_tau.start < 0.0) throw ConfigError("grid-tau must be >= 0");
  if (cfg.command == Command::Figure && cfg.figure.empty()) throw ConfigError("figure needs a preset name (fig3, fig4, fig5)");
}

// ---------------------------------------------------------------------------
// Emission.

namespace detail {

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
};

inline void write_table(std::ostream& os, const Table& t, Format format) {
  if (format == Format::Csv) {
    for (const auto& [k, v] : t.metadata) os << "# " << k << '=' << v << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) os << ',';
        if (row[c]) os << format_double(*row[c]);
      }
      os << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) doc["metadata"][k] = v;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json rec;
    for (std::size_t c = 0; c < row.size(); ++c) rec[t.columns[c]] = row[c] ? nlohmann::ordered_json(*row[c]) : nullptr;
    doc["rows"].push_back(std::move(rec));
  }
  os << doc.dump(2) << '\n';
}

inline Table sweep_table(const SweepTemplate& tmpl, const GridSpec& gammas, const GridSpec& taus, std::string preset = {}) {
  Table t;
  if (!preset.empty()) t.metadata.emplace_back("figure", preset);
  t.metadata.emplace_back("channel", std::string(to_string(tmpl.kind)));
  t.metadata.emplace_back("theta", format_double(tmpl.theta));
  t.metadata.emplace_back("alpha", format_double(tmpl.alpha));
  t.metadata.emplace_back("eta", format_double(tmpl.eta));
  t.columns = {"gamma", "tau", "j_numeric", "j_closed_form"};
  const auto g = gammas.values();
  const auto tau = taus.values();
  for (const auto& row : sweep_j(tmpl, g, tau)) t.rows.push_back({row.gamma, row.tau, row.j_numeric, row.j_closed_form});
  return t;
}

}  // namespace detail

inline void emit_sweep(const RunConfig& cfg, std::ostream& os) {
  const SweepTemplate tmpl{cfg.channel, cfg.theta, cfg.alpha, cfg.eta};
  detail::write_table(os, detail::sweep_table(tmpl, cfg.grid_gamma, cfg.grid_tau), cfg.format);
}

inline void emit_figure(const RunConfig& cfg, std::ostream& os) {
  const auto preset = figure_preset(cfg.figure);
  const SweepTemplate tmpl{preset.kind, preset.theta, preset.alpha, preset.eta};
  detail::write_table(os, detail::sweep_table(tmpl, preset.gamma, preset.tau, preset.name), cfg.format);
}

/// Reduced-state weight used by the optimality scan: 1 for the single
/// channel, 2γ − 1 for a two-mode Schmidt probe.
inline double scan_weight(const RunConfig& cfg) { return cfg.channel == ChannelKind::Single ? 1.0 : 2.0 * cfg.gamma - 1.0; }

inline void emit_optimality(const RunConfig& cfg, std::ostream& os) {
  const ChannelParams p(cfg.eta, cfg.tau, cfg.alpha);
  const double k = scan_weight(cfg);
  const auto grid = snap_quarter_pi(cfg.grid_theta.values());
  const auto report = optimality_scan(p.chi(), k, grid);
  detail::Table t;
  t.metadata = {{"chi", format_double(report.chi)}, {"k", format_double(report.k)}};
  t.columns = {"theta", "lambda_minus", "lambda_plus", "product_residual"};
  for (std::size_t i = 0; i < report.theta.size(); ++i) {
    t.rows.push_back({report.theta[i], report.lambda_minus[i], report.lambda_plus[i], report.product_residual[i]});
  }
  detail::write_table(os, t, cfg.format);
}

inline void emit_joint(const RunConfig& cfg, std::ostream& os) {
  const ChannelParams p(cfg.eta, cfg.tau, cfg.alpha);
  const auto thetas = snap_quarter_pi(cfg.grid_theta.values());
  const std::vector<double> gammas = cfg.grid_gamma_set ? cfg.grid_gamma.values() : std::vector<double>{cfg.gamma};
  detail::Table t;
  t.metadata = {{"chi", format_double(p.chi())}, {"alpha", format_double(cfg.alpha)},
                {"eta", format_double(cfg.eta)}, {"tau", format_double(cfg.tau)}};
  t.columns = {"theta", "gamma", "p_mixed_direct", "p_double_direct", "p_printed_formula"};
  for (double g : gammas)
    for (double th : thetas) {
      const auto r = joint_probability(SchmidtInput(g, th), p);
      t.rows.push_back({th, g, r.p_mixed, r.p_double, r.printed_formula_value});
    }
  detail::write_table(os, t, cfg.format);
}

inline void emit_single_fisher(const RunConfig& cfg, std::ostream& os) {
  const DensityFamily f{cfg.channel, SchmidtInput(cfg.gamma, cfg.theta), ChannelParams(cfg.eta, cfg.tau, cfg.alpha)};
  const auto rep = fisher_report(f);
  const auto& cf = rep.j_closed_form;
  if (cfg.format == Format::Json) {
    nlohmann::ordered_json rec;
    rec["channel"] = std::string(to_string(f.kind));
    rec["alpha"] = cfg.alpha;
    rec["eta"] = cfg.eta;
    rec["tau"] = cfg.tau;
    rec["theta"] = cfg.theta;
    rec["gamma"] = cfg.gamma;
    rec["chi"] = f.params.chi();
    rec["j_numeric"] = rep.j_numeric;
    rec["j_closed_form"] = cf ? nlohmann::ordered_json(cf->value) : nullptr;
    rec["closed_form"] = cf ? nlohmann::ordered_json(cf->label + " (" + std::string(to_string(cf->provenance)) + ")") : nullptr;
    rec["agrees"] = rep.agrees();
    rec["j_chi"] = rep.j_chi;
    rec["sld_residual"] = rep.sld_residual;
    rec["kernel_rank"] = rep.kernel_rank;
    rec["derivative_method"] = std::string(to_string(rep.derivative_method));
    os << rec.dump(2) << '\n';
    return;
  }
  detail::Table t;
  t.metadata = {{"channel", std::string(to_string(f.kind))},
                {"closed_form", cf ? cf->label + " (" + std::string(to_string(cf->provenance)) + ")" : "none"},
                {"derivative_method", std::string(to_string(rep.derivative_method))}};
  t.columns = {"alpha", "eta", "tau", "theta", "gamma", "chi", "j_numeric", "j_closed_form", "j_chi", "sld_residual", "kernel_rank"};
  t.rows.push_back({cfg.alpha, cfg.eta, cfg.tau, cfg.theta, cfg.gamma, f.params.chi(), rep.j_numeric,
                    cf ? std::optional(cf->value) : std::nullopt, rep.j_chi, rep.sld_residual,
                    static_cast<double>(rep.kernel_rank)});
  detail::write_table(os, t, cfg.format);
}

inline bool emit_validation(std::ostream& os) {
  bool ok = true;
  for (const auto& check : run_validation()) {
    const char* tag = !check.gating ? "NOTE" : check.passed ? "PASS" : "FAIL";
    os << tag << "  " << check.name << "  [" << check.detail << "]\n";
    if (check.gating && !check.passed) ok = false;
  }
  os << (ok ? "validation passed\n" : "validation FAILED\n");
  return ok;
}

/// Runs one configured command. Output goes to `cfg.out`, or `default_out`
/// when no path is set; diagnostics go to `err`.
inline int run(const RunConfig& cfg, std::ostream& default_out, std::ostream& err) {
  try {
    validate_config(cfg);
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out, std::ios::binary | std::ios::trunc);
      if (!file) throw ConfigError("cannot open output file '" + cfg.out + "'");
    }
    // Render fully before writing so a numeric failure leaves no partial table.
    std::ostringstream buf;
    int status = kExitOk;
    switch (cfg.command) {
      case Command::SingleFisher: emit_single_fisher(cfg, buf); break;
      case Command::Sweep: emit_sweep(cfg, buf); break;
      case Command::OptimalityScan: emit_optimality(cfg, buf); break;
      case Command::JointProb: emit_joint(cfg, buf); break;
      case Command::Figure: emit_figure(cfg, buf); break;
      case Command::Validate: status = emit_validation(buf) ? kExitOk : kExitValidationFailed; break;
    }
    std::ostream& os = cfg.out.empty() ? default_out : file;
    os << buf.str();
    os.flush();
    return status;
  } catch (const ConfigError& e) {
    err << "lossy-estimator: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    if (e.is_numeric()) {
      err << "lossy-estimator: numeric error: " << e.what() << '\n';
      return kExitNumeric;
    }
    err << "lossy-estimator: config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace lossy::cli
