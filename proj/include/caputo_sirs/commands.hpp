#pragma once

/**
 * @file commands.hpp
 * @brief Subcommand bodies for the command-line tool, kept here so they can be tested in-process.
 */

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "caputo_sirs/io.hpp"

namespace caputo_sirs {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;
inline constexpr int numeric = 3;
inline constexpr int output = 4;
}  // namespace exit_code

inline constexpr const char* kOutputDirEnv = "CAPUTO_SIRS_OUT";

/// Output directory: explicit flag, then the environment, then the config value.
inline std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                                const std::optional<std::string>& config_value) {
  if (flag && !flag->empty()) {
    return *flag;
  }
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return env;
  }
  if (config_value && !config_value->empty()) {
    return *config_value;
  }
  return "out";
}

struct CommandContext {
  std::filesystem::path out_dir;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw OutputError("cannot create output directory '" + dir.string() + "'");
  }
}

inline void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw OutputError("cannot write '" + path.string() + "'");
  }
  body(f);
  f.flush();
  if (!f) {
    throw OutputError("write failed for '" + path.string() + "'");
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, [&](std::ostream& o) { o << text; });
}

inline void write_json(const std::filesystem::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

inline std::string alpha_tag(double alpha) { return "alpha_" + format_alpha(alpha); }

inline std::string fmt(double v, int precision = 6) {
  std::ostringstream o;
  o << std::setprecision(precision) << v;
  return o.str();
}

inline std::string fmt_state(const EpidemicState& x, int precision = 6) {
  return "(" + fmt(x.S, precision) + ", " + fmt(x.I, precision) + ", " + fmt(x.R, precision) + ")";
}

}  // namespace detail

/// Maps the library's exception types onto process exit codes.
template <class F>
int run_guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: configuration: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const OutputError& e) {
    err << "error: output: " << e.what() << '\n';
    return exit_code::output;
  } catch (const NonFiniteStateError& e) {
    err << "error: numeric: " << e.what() << '\n';
    return exit_code::numeric;
  } catch (const ConvergenceError& e) {
    err << "error: numeric: " << e.what() << '\n';
    return exit_code::numeric;
  } catch (const DomainError& e) {
    err << "error: numeric: " << e.what() << '\n';
    return exit_code::numeric;
  } catch (const InternalError& e) {
    err << "error: internal: " << e.what() << '\n';
    return exit_code::numeric;
  }
}

/// Writes analysis.json and prints R0 and the equilibria.
inline int cmd_analyze(const RunConfig& cfg, const std::vector<double>& alphas, const CommandContext& ctx) {
  cfg.validate();
  const ModelParams p = cfg.model();
  const json doc = analysis_report_json(p, alphas.empty() ? std::vector<double>{cfg.alpha} : alphas);
  detail::ensure_directory(ctx.out_dir);
  detail::write_json(ctx.out_dir / "analysis.json", doc);

  ctx.out << "R0 = " << format_number(doc["r0"].get<double>()) << '\n';
  ctx.out << "E0 = " << doc["e0"].dump() << '\n';
  ctx.out << "E* = " << (doc["endemic"].is_null() ? std::string("none (R0 <= 1)") : doc["endemic"].dump()) << '\n';
  for (const auto& flag : doc["open_flags"]) {
    ctx.out << "flag: " << flag.get<std::string>() << '\n';
  }
  ctx.out << "wrote " << (ctx.out_dir / "analysis.json").string() << '\n';
  return exit_code::ok;
}

/// Single run at the configured alpha.
inline int cmd_simulate(const RunConfig& cfg, bool force_svg, const CommandContext& ctx) {
  cfg.validate();
  const ModelParams p = cfg.model();
  const Trajectory traj = run(p, cfg.initial, cfg.grid());
  const RunReport rep = summarize(traj);
  detail::ensure_directory(ctx.out_dir);
  if (cfg.outputs.csv) {
    detail::write_file(ctx.out_dir / "trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, traj); });
  }
  if (cfg.outputs.json) {
    json doc = run_report_json(rep);
    doc["config"] = config_to_json(cfg);
    detail::write_json(ctx.out_dir / "run_report.json", doc);
  }
  if (cfg.outputs.svg || force_svg) {
    detail::write_text(ctx.out_dir / "trajectory.svg", trajectory_svg(traj));
  }
  ctx.out << "alpha = " << format_alpha(cfg.alpha) << ", steps = " << traj.states.size() - 1
          << ", final state = " << detail::fmt_state(traj.states.back(), 10) << '\n';
  if (rep.convergence_time) {
    ctx.out << "converged to " << detail::fmt_state(*rep.converged_to) << " at t = " << *rep.convergence_time
            << '\n';
  } else {
    ctx.out << "not within convergence tolerance at t = " << traj.times.back() << '\n';
  }
  if (!rep.invariant_violations.empty()) {
    ctx.err << "warning: " << rep.invariant_violations.size() << " invariant violation(s)\n";
  }
  return exit_code::ok;
}

/// Removes repeated alphas, keeping first occurrences; reports each dropped value.
inline std::vector<double> dedupe_alphas(const std::vector<double>& alphas, std::ostream& warn) {
  std::vector<double> out;
  for (double a : alphas) {
    if (std::find(out.begin(), out.end(), a) != out.end()) {
      warn << "warning: duplicate alpha " << format_alpha(a) << " ignored\n";
      continue;
    }
    out.push_back(a);
  }
  return out;
}

struct SweepOutcome {
  std::vector<SweepRun> runs;
  json summary;
};

/// Runs a sweep and writes per-alpha CSV, sweep_summary.json and the I(t) overlay.
inline SweepOutcome sweep_to_directory(const RunConfig& cfg, const std::vector<double>& alphas,
                                       const std::filesystem::path& dir, bool per_alpha_svg) {
  for (double a : alphas) {
    (void)FracOrder(a);
  }
  const ModelParams p = cfg.model();
  SweepOutcome outcome;
  outcome.runs = sweep(p, cfg.initial, alphas, GridSpec{cfg.step_h, cfg.horizon_T});
  detail::ensure_directory(dir);
  json runs = json::array();
  std::vector<const Trajectory*> plotted;
  for (const auto& r : outcome.runs) {
    json entry = run_report_json(r.report);
    if (r.trajectory) {
      const std::string stem = "trajectory_" + detail::alpha_tag(r.report.alpha);
      detail::write_file(dir / (stem + ".csv"), [&](std::ostream& o) { write_trajectory_csv(o, *r.trajectory); });
      entry["csv"] = stem + ".csv";
      if (per_alpha_svg) {
        detail::write_text(dir / (stem + ".svg"), trajectory_svg(*r.trajectory));
        entry["svg"] = stem + ".svg";
      }
      plotted.push_back(&*r.trajectory);
    }
    runs.push_back(std::move(entry));
  }
  outcome.summary = json{{"config", config_to_json(cfg)}, {"runs", runs}};
  detail::write_json(dir / "sweep_summary.json", outcome.summary);
  if (!plotted.empty()) {
    detail::write_text(dir / "sweep_infectives.svg", infectives_overlay_svg(plotted));
  }
  return outcome;
}

inline void print_sweep_table(const std::vector<SweepRun>& runs, std::ostream& out) {
  out << std::left << std::setw(8) << "alpha" << std::setw(44) << "final (S, I, R)" << std::setw(14) << "t_conv"
      << "status\n";
  for (const auto& r : runs) {
    out << std::setw(8) << format_alpha(r.report.alpha);
    if (r.report.error) {
      out << "error: " << *r.report.error << '\n';
      continue;
    }
    out << std::setw(44) << detail::fmt_state(*r.report.final_state, 8) << std::setw(14)
        << (r.report.convergence_time ? detail::fmt(*r.report.convergence_time) : std::string("-"))
        << (r.report.convergence_time ? "converged" : "not converged") << '\n';
  }
  out << std::right;
}

/// Exit status for a sweep: numeric error if any run failed.
inline int sweep_status(const std::vector<SweepRun>& runs, std::ostream& err) {
  int status = exit_code::ok;
  for (const auto& r : runs) {
    if (r.report.error) {
      err << "error: numeric: alpha " << format_alpha(r.report.alpha) << ": " << *r.report.error << '\n';
      status = exit_code::numeric;
    }
  }
  return status;
}

inline int cmd_sweep(const RunConfig& cfg, const std::vector<double>& alphas, const CommandContext& ctx) {
  cfg.validate();
  if (alphas.empty()) {
    throw ConfigError("--alphas", "at least one value is required");
  }
  const std::vector<double> unique = dedupe_alphas(alphas, ctx.err);
  const SweepOutcome outcome = sweep_to_directory(cfg, unique, ctx.out_dir, false);
  print_sweep_table(outcome.runs, ctx.out);
  ctx.out << "wrote " << (ctx.out_dir / "sweep_summary.json").string() << '\n';
  return sweep_status(outcome.runs, ctx.err);
}

/// One row of the reported-versus-computed table.
struct ComparisonRow {
  std::string quantity;
  std::string reported;
  std::string computed;
  bool agrees = true;
};

inline std::string comparison_table(const std::vector<ComparisonRow>& rows) {
  std::ostringstream o;
  o << std::left << std::setw(40) << "quantity" << std::setw(22) << "reported" << std::setw(34) << "computed"
    << "status\n";
  for (const auto& r : rows) {
    o << std::setw(40) << r.quantity << std::setw(22) << r.reported << std::setw(34) << r.computed
      << (r.agrees ? "agrees" : "DISCREPANCY") << '\n';
  }
  return o.str();
}

/// Compares published figure values against the computed ones.
inline std::vector<ComparisonRow> figure_comparison(int set, const ModelParams& p, const std::vector<SweepRun>& runs) {
  const EquilibriumReport eq = analyze_equilibria(p);
  const GlobalConditions g = global_conditions(p, eq);
  std::vector<ComparisonRow> rows;
  if (set == 1) {
    rows.push_back({"R0", "0.7407", detail::fmt(eq.r0, 8), std::abs(eq.r0 - 0.7407) < 5e-5});
    rows.push_back({"E0", "(8, 0, 0)", detail::fmt_state(eq.e0), sup_distance(eq.e0, {8.0, 0.0, 0.0}) < 1e-12});
    rows.push_back({"E0 globally stable (R0 <= 1)", "yes", g.e0_global ? "yes" : "no", g.e0_global});
  } else {
    rows.push_back({"R0", "1.5385", detail::fmt(eq.r0, 8), std::abs(eq.r0 - 1.5385) < 5e-5});
    const double r_star = eq.endemic ? eq.endemic->R : std::numeric_limits<double>::quiet_NaN();
    const double bound = eq.endemic ? (p.mu() / p.lambda()) * eq.endemic->S : std::numeric_limits<double>::quiet_NaN();
    rows.push_back({"E*", "-", eq.endemic ? detail::fmt_state(*eq.endemic, 8) : "none", eq.endemic.has_value()});
    rows.push_back({"R*", "0.552", detail::fmt(r_star, 8), std::abs(r_star - 0.552) < 1e-3});
    rows.push_back({"(mu/lambda) S*", "21.8944", detail::fmt(bound, 8), std::abs(bound - 21.8944) < 1e-3});
    rows.push_back({"R* <= (mu/lambda) S*", "holds", g.estar_global ? "holds" : "fails", g.estar_global});
    if (eq.s_star_closed_form && eq.endemic) {
      rows.push_back({"closed-form S* vs bisection S*", "-",
                      detail::fmt(*eq.s_star_closed_form, 8) + " vs " + detail::fmt(eq.endemic->S, 8),
                      *eq.closed_form_discrepancy <= kClosedFormFlagTol});
    }
  }
  const EpidemicState target = eq.endemic ? *eq.endemic : eq.e0;
  for (const auto& r : runs) {
    const std::string label = "converges, alpha = " + format_alpha(r.report.alpha);
    if (r.report.error) {
      rows.push_back({label, "yes", "error", false});
      continue;
    }
    const double dist = sup_distance(*r.report.final_state, target);
    rows.push_back({label, "yes",
                    "|x(T) - " + std::string(eq.endemic ? "E*" : "E0") + "| = " + detail::fmt(dist, 3),
                    r.report.convergence_time.has_value()});
  }
  return rows;
}

/// Regenerates a figure: runs alpha in {0.85, 0.9, 0.95, 1} and writes data, plots and a comparison table.
inline int cmd_reproduce(std::string_view figure, const CommandContext& ctx) {
  int set = 0;
  if (figure == "fig1") {
    set = 1;
  } else if (figure == "fig2") {
    set = 2;
  } else {
    throw ConfigError("--figure", "unknown figure '" + std::string(figure) + "' (expected fig1 or fig2)");
  }
  const RunConfig cfg = presets::config(set);
  const std::filesystem::path dir = ctx.out_dir / std::string(figure);
  const SweepOutcome outcome = sweep_to_directory(cfg, presets::figure_alphas(), dir, true);
  const ModelParams p = cfg.model();
  json analysis = analysis_report_json(p, presets::figure_alphas());
  const std::vector<ComparisonRow> rows = figure_comparison(set, p, outcome.runs);
  for (const auto& r : rows) {
    if (!r.agrees) {
      analysis["open_flags"].push_back(r.quantity + ": reported " + r.reported + ", computed " + r.computed);
    }
  }
  detail::write_json(dir / "analysis.json", analysis);
  const std::string table = comparison_table(rows);
  detail::write_text(dir / "comparison.txt", table);

  ctx.out << figure << ": parameter set " << set << ", T = " << cfg.horizon_T << ", h = " << cfg.step_h << '\n';
  print_sweep_table(outcome.runs, ctx.out);
  ctx.out << '\n' << table;
  ctx.out << "wrote " << dir.string() << '\n';
  return sweep_status(outcome.runs, ctx.err);
}

}  // namespace caputo_sirs
