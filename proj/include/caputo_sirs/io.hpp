#pragma once

/**
 * @file io.hpp
 * @brief Run configuration, presets, and the CSV / JSON / SVG writers.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "caputo_sirs/equilibria.hpp"
#include "caputo_sirs/error.hpp"
#include "caputo_sirs/frac_kernel.hpp"
#include "caputo_sirs/sim_engine.hpp"
#include "caputo_sirs/sirs_model.hpp"
#include "caputo_sirs/stability.hpp"

namespace caputo_sirs {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct OutputFlags {
  bool csv = true;
  bool json = true;
  bool svg = false;

  friend bool operator==(const OutputFlags&, const OutputFlags&) = default;
};

struct RunConfig {
  RawParams params;
  EpidemicState initial;
  double alpha = 0.85;
  double step_h = 0.05;
  double horizon_T = 200.0;
  OutputFlags outputs;
  std::string output_dir = "out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  ModelParams model() const {
    try {
      return ModelParams(params);
    } catch (const ConfigError& e) {
      throw ConfigError("params." + e.field(), message_of(e));
    }
  }

  FracGrid grid() const {
    try {
      return FracGrid::over_horizon(FracOrder(alpha), step_h, horizon_T);
    } catch (const ConfigError& e) {
      throw ConfigError("grid." + e.field(), message_of(e));
    }
  }

  /// Re-checks every model, grid and initial-state invariant.
  void validate() const {
    const ModelParams p = model();
    const FracGrid g = grid();
    try {
      check_step_guard(g, p.mu() + std::max(p.r(), p.lambda()));
    } catch (const ConfigError& e) {
      throw ConfigError("grid." + e.field(), message_of(e));
    }
    const std::pair<const char*, double> init[] = {{"S0", initial.S}, {"I0", initial.I}, {"R0", initial.R}};
    for (const auto& [name, v] : init) {
      if (!std::isfinite(v) || v < 0.0) {
        throw ConfigError(std::string("initial.") + name, "must be non-negative and finite");
      }
    }
    if (output_dir.empty()) {
      throw ConfigError("output_dir", "must not be empty");
    }
  }

 private:
  static std::string message_of(const ConfigError& e) {
    const std::string what = e.what();
    const auto pos = what.find(": ");
    return pos == std::string::npos ? what : what.substr(pos + 2);
  }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline void reject_unknown_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; });
    if (!known) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

inline const json& require_object(const json& parent, const char* key, const std::string& where) {
  const std::string path = where.empty() ? key : where + "." + key;
  if (!parent.contains(key)) {
    throw ConfigError(path, "missing");
  }
  const json& node = parent.at(key);
  if (!node.is_object()) {
    throw ConfigError(path, "must be an object");
  }
  return node;
}

inline double require_number(const json& parent, const char* key, const std::string& where) {
  const std::string path = where + "." + key;
  if (!parent.contains(key)) {
    throw ConfigError(path, "missing");
  }
  const json& node = parent.at(key);
  if (!node.is_number()) {
    throw ConfigError(path, "must be a number");
  }
  return node.get<double>();
}

inline bool optional_bool(const json& parent, const char* key, const std::string& where, bool fallback) {
  if (!parent.contains(key)) {
    return fallback;
  }
  const json& node = parent.at(key);
  if (!node.is_boolean()) {
    throw ConfigError(where + "." + key, "must be a boolean");
  }
  return node.get<bool>();
}

}  // namespace detail

/**
 * Parses and validates a flat JSON run configuration:
 *
 *   { "params":  {"Lambda", "mu", "beta", "lambda", "r", "k1", "k2", "k3"},
 *     "initial": {"S0", "I0", "R0"},
 *     "grid":    {"alpha", "step_h", "horizon_T"},
 *     "outputs": {"csv", "json", "svg"},      // optional
 *     "output_dir": "out" }                    // optional
 *
 * Unknown keys are rejected. Errors are ConfigError with a dotted field path,
 * or "line L, column C" for malformed JSON.
 */
inline RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col), "malformed JSON");
  }
  if (!doc.is_object()) {
    throw ConfigError("<root>", "configuration must be a JSON object");
  }
  detail::reject_unknown_keys(doc, "", {"params", "initial", "grid", "outputs", "output_dir"});

  RunConfig cfg;
  const json& params = detail::require_object(doc, "params", "");
  detail::reject_unknown_keys(params, "params", {"Lambda", "mu", "beta", "lambda", "r", "k1", "k2", "k3"});
  cfg.params.Lambda = detail::require_number(params, "Lambda", "params");
  cfg.params.mu = detail::require_number(params, "mu", "params");
  cfg.params.beta = detail::require_number(params, "beta", "params");
  cfg.params.lambda = detail::require_number(params, "lambda", "params");
  cfg.params.r = detail::require_number(params, "r", "params");
  cfg.params.k1 = detail::require_number(params, "k1", "params");
  cfg.params.k2 = detail::require_number(params, "k2", "params");
  cfg.params.k3 = detail::require_number(params, "k3", "params");

  const json& initial = detail::require_object(doc, "initial", "");
  detail::reject_unknown_keys(initial, "initial", {"S0", "I0", "R0"});
  cfg.initial.S = detail::require_number(initial, "S0", "initial");
  cfg.initial.I = detail::require_number(initial, "I0", "initial");
  cfg.initial.R = detail::require_number(initial, "R0", "initial");

  const json& grid = detail::require_object(doc, "grid", "");
  detail::reject_unknown_keys(grid, "grid", {"alpha", "step_h", "horizon_T"});
  cfg.alpha = detail::require_number(grid, "alpha", "grid");
  cfg.step_h = detail::require_number(grid, "step_h", "grid");
  cfg.horizon_T = detail::require_number(grid, "horizon_T", "grid");

  if (doc.contains("outputs")) {
    const json& outputs = detail::require_object(doc, "outputs", "");
    detail::reject_unknown_keys(outputs, "outputs", {"csv", "json", "svg"});
    cfg.outputs.csv = detail::optional_bool(outputs, "csv", "outputs", true);
    cfg.outputs.json = detail::optional_bool(outputs, "json", "outputs", true);
    cfg.outputs.svg = detail::optional_bool(outputs, "svg", "outputs", false);
  }
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) {
      throw ConfigError("output_dir", "must be a string");
    }
    cfg.output_dir = doc.at("output_dir").get<std::string>();
  }
  cfg.validate();
  return cfg;
}

inline json config_to_json(const RunConfig& cfg) {
  return json{{"params",
               {{"Lambda", cfg.params.Lambda},
                {"mu", cfg.params.mu},
                {"beta", cfg.params.beta},
                {"lambda", cfg.params.lambda},
                {"r", cfg.params.r},
                {"k1", cfg.params.k1},
                {"k2", cfg.params.k2},
                {"k3", cfg.params.k3}}},
              {"initial", {{"S0", cfg.initial.S}, {"I0", cfg.initial.I}, {"R0", cfg.initial.R}}},
              {"grid", {{"alpha", cfg.alpha}, {"step_h", cfg.step_h}, {"horizon_T", cfg.horizon_T}}},
              {"outputs", {{"csv", cfg.outputs.csv}, {"json", cfg.outputs.json}, {"svg", cfg.outputs.svg}}},
              {"output_dir", cfg.output_dir}};
}

inline std::string serialize_config(const RunConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("--config", "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace presets {

/// Shared constants; set 1 uses mu = 0.1, set 2 uses mu = 0.02.
inline RawParams base_params(double mu) {
  return RawParams{.Lambda = 0.8, .mu = mu, .beta = 0.1, .lambda = 0.5, .r = 0.5, .k1 = 0.1, .k2 = 0.02, .k3 = 0.003};
}

inline RawParams set1() { return base_params(0.1); }
inline RawParams set2() { return base_params(0.02); }

inline EpidemicState initial_state() { return {10.0, 1.0, 1.0}; }

inline constexpr double default_step = 0.05;
inline constexpr double set1_horizon = 200.0;
inline constexpr double set2_horizon = 500.0;

inline const std::vector<double>& figure_alphas() {
  static const std::vector<double> alphas = {0.85, 0.9, 0.95, 1.0};
  return alphas;
}

inline RunConfig config(int set) {
  if (set != 1 && set != 2) {
    throw ConfigError("preset", "unknown preset " + std::to_string(set));
  }
  RunConfig cfg;
  cfg.params = set == 1 ? set1() : set2();
  cfg.initial = initial_state();
  cfg.alpha = 0.85;
  cfg.step_h = default_step;
  cfg.horizon_T = set == 1 ? set1_horizon : set2_horizon;
  return cfg;
}

}  // namespace presets

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// 17 significant digits, C-locale decimal point ("nan"/"inf" for non-finite).
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr std::string_view kCsvHeader = "t,S,I,R,N,lyapunov";

/// One row per grid point, LF line endings.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kCsvHeader << '\n';
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const EpidemicState& x = traj.states[n];
    const double lyap = n < traj.diagnostics.size() ? traj.diagnostics[n].lyapunov
                                                     : std::numeric_limits<double>::quiet_NaN();
    out << format_number(traj.times[n]) << ',' << format_number(x.S) << ',' << format_number(x.I) << ','
        << format_number(x.R) << ',' << format_number(x.N()) << ',' << format_number(lyap) << '\n';
  }
}

struct CsvRow {
  double t, S, I, R, N, lyapunov;
};

inline std::vector<CsvRow> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError("csv", "unexpected header");
  }
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    double v[6];
    const char* cursor = line.c_str();
    for (int k = 0; k < 6; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(cursor, &end);
      if (end == cursor) {
        throw ConfigError("csv", "malformed row: " + line);
      }
      cursor = (*end == ',') ? end + 1 : end;
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

struct Ticks {
  double start = 0.0;
  double step = 1.0;
  static constexpr int count = 5;
  double at(int k) const noexcept { return start + step * k; }
  double end() const noexcept { return at(count - 1); }
};

namespace detail {

/// Smallest "nice" number (1, 2, 2.5, 5 times a power of ten) >= x.
inline double nice_ceil(double x) {
  const double exponent = std::floor(std::log10(x));
  const double base = std::pow(10.0, exponent);
  const double frac = x / base;
  for (double nice : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (frac <= nice * (1.0 + 1e-12)) {
      return nice * base;
    }
  }
  return 10.0 * base;
}

}  // namespace detail

/// Five evenly spaced nice ticks covering [lo, hi].
inline Ticks nice_ticks(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    lo -= pad;
    hi += pad;
  }
  double step = detail::nice_ceil((hi - lo) / (Ticks::count - 1));
  for (int guard = 0; guard < 64; ++guard) {
    const double start = std::floor(lo / step) * step;
    if (start + step * (Ticks::count - 1) >= hi * (1.0 - 1e-12) - 1e-300) {
      return {start, step};
    }
    step = detail::nice_ceil(step * (1.0 + 1e-9));
  }
  return {lo, (hi - lo) / (Ticks::count - 1)};
}

/**
 * Fixed 800x600 line chart: linear axes with five ticks each, axis labels,
 * legend, title. Long series are decimated by stride to at most 1500 vertices.
 */
inline std::string render_line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                                    const std::vector<PlotSeries>& series) {
  constexpr double width = 800.0;
  constexpr double height = 600.0;
  constexpr double left = 80.0;
  constexpr double right = 160.0;
  constexpr double top = 50.0;
  constexpr double bottom = 60.0;
  constexpr std::size_t max_vertices = 1500;

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        continue;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  const Ticks xt = nice_ticks(xmin, xmax);
  const Ticks yt = nice_ticks(std::min(0.0, ymin), ymax);
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - xt.start) / (xt.end() - xt.start) * pw; };
  auto sy = [&](double y) { return top + ph - (y - yt.start) / (yt.end() - yt.start) * ph; };

  std::ostringstream o;
  o << std::setprecision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  o << "<text x=\"" << left + pw / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"18\">" << title << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k < Ticks::count; ++k) {
    const double xv = xt.at(k);
    const double yv = yt.at(k);
    o << "<line x1=\"" << sx(xv) << "\" y1=\"" << top + ph << "\" x2=\"" << sx(xv) << "\" y2=\"" << top + ph + 6
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 22
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xv << "</text>\n";
    o << "<line x1=\"" << left - 6 << "\" y1=\"" << sy(yv) << "\" x2=\"" << left << "\" y2=\"" << sy(yv)
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << left - 10 << "\" y=\"" << sy(yv) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << yv << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << xlabel << "</text>\n";
  o << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"14\" transform=\"rotate(-90 20 " << top + ph / 2 << ")\">" << ylabel << "</text>\n";

  int row = 0;
  for (const auto& s : series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    const std::size_t stride = n > max_vertices ? (n + max_vertices - 1) / max_vertices : 1;
    o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < n; i += stride) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        continue;
      }
      o << (first ? "" : " ") << sx(s.x[i]) << ',' << sy(s.y[i]);
      first = false;
    }
    if (n > 0 && (n - 1) % stride != 0 && std::isfinite(s.x[n - 1]) && std::isfinite(s.y[n - 1])) {
      o << (first ? "" : " ") << sx(s.x[n - 1]) << ',' << sy(s.y[n - 1]);
    }
    o << "\"/>\n";
    const double ly = top + 20.0 + 22.0 * row;
    const double lx = left + pw + 15.0;
    o << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 25 << "\" y2=\"" << ly << "\" stroke=\""
      << s.color << "\" stroke-width=\"3\"/>\n";
    o << "<text x=\"" << lx + 32 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"13\">"
      << s.label << "</text>\n";
    ++row;
  }
  o << "</svg>\n";
  return o.str();
}

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  return colors;
}

inline std::string format_alpha(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", alpha);
  return buf;
}

/// S, I and R against t for one run.
inline std::string trajectory_svg(const Trajectory& traj) {
  PlotSeries s{"S", "#1f77b4", traj.times, {}};
  PlotSeries i{"I", "#d62728", traj.times, {}};
  PlotSeries r{"R", "#2ca02c", traj.times, {}};
  for (const auto& x : traj.states) {
    s.y.push_back(x.S);
    i.y.push_back(x.I);
    r.y.push_back(x.R);
  }
  return render_line_plot("SIRS trajectory, alpha = " + format_alpha(traj.alpha.value()), "t", "individuals",
                          {s, i, r});
}

/// I(t) overlaid for several runs.
inline std::string infectives_overlay_svg(const std::vector<const Trajectory*>& runs) {
  std::vector<PlotSeries> series;
  std::string alphas;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Trajectory& t = *runs[k];
    PlotSeries ps{"alpha = " + format_alpha(t.alpha.value()), palette()[k % palette().size()], t.times, {}};
    for (const auto& x : t.states) {
      ps.y.push_back(x.I);
    }
    series.push_back(std::move(ps));
    alphas += (k ? ", " : "") + format_alpha(t.alpha.value());
  }
  return render_line_plot("Infectives I(t), alpha in {" + alphas + "}", "t", "I", series);
}

// ---------------------------------------------------------------------------
// JSON documents
// ---------------------------------------------------------------------------

inline json state_json(const EpidemicState& x) { return json{{"S", x.S}, {"I", x.I}, {"R", x.R}}; }

template <class T, class F>
json optional_json(const std::optional<T>& v, F&& to) {
  return v ? to(*v) : json(nullptr);
}

inline json stability_json(const std::string& label, const ModelParams& p, const EpidemicState& eq,
                           const std::vector<double>& alphas) {
  json per_alpha = json::array();
  std::optional<StabilityReport> first;
  for (double a : alphas) {
    const StabilityReport rep = classify_local(p, eq, FracOrder(a));
    per_alpha.push_back({{"alpha", a},
                         {"matignon_stable", rep.matignon_stable},
                         {"rh_case", std::string(to_string(rep.rh_case))},
                         {"rh_verdict", std::string(to_string(rep.rh_verdict))}});
    if (!first) {
      first = rep;
    }
  }
  if (!first) {
    first = classify_local(p, eq, FracOrder(1.0));
  }
  json eig = json::array();
  for (const auto& z : first->eigenvalues) {
    eig.push_back(json::array({z.real(), z.imag()}));
  }
  return json{{"label", label},
              {"equilibrium", state_json(eq)},
              {"eigenvalues", eig},
              {"coeffs", {{"a1", first->coeffs.a1}, {"a2", first->coeffs.a2}, {"a3", first->coeffs.a3}}},
              {"discriminant", first->discriminant},
              {"per_alpha", per_alpha}};
}

/// Tolerance above which the closed-form S* is flagged as disagreeing.
inline constexpr double kClosedFormFlagTol = 1e-6;

/// Full equilibrium + stability analysis document.
inline json analysis_report_json(const ModelParams& p, const std::vector<double>& alphas) {
  const EquilibriumReport eq = analyze_equilibria(p);
  const GlobalConditions g = global_conditions(p, eq);
  json doc;
  doc["r0"] = eq.r0;
  doc["e0"] = state_json(eq.e0);
  doc["endemic"] = optional_json(eq.endemic, state_json);
  doc["endemic_residual"] = eq.endemic ? json(equilibrium_residual(p, *eq.endemic)) : json(nullptr);
  doc["closed_form_s_star"] = eq.s_star_closed_form ? json(*eq.s_star_closed_form) : json(nullptr);
  doc["closed_form_discrepancy"] = eq.closed_form_discrepancy ? json(*eq.closed_form_discrepancy) : json(nullptr);

  json stability = json::array();
  stability.push_back(stability_json("E0", p, eq.e0, alphas));
  if (eq.endemic) {
    stability.push_back(stability_json("E*", p, *eq.endemic, alphas));
  }
  doc["stability"] = stability;

  json gc{{"e0_global", g.e0_global}, {"estar_global", g.estar_global}};
  if (eq.endemic) {
    gc["r_star"] = eq.endemic->R;
    gc["mu_over_lambda_s_star"] =
        p.lambda() > 0.0 ? json((p.mu() / p.lambda()) * eq.endemic->S) : json(nullptr);
  } else {
    gc["r_star"] = nullptr;
    gc["mu_over_lambda_s_star"] = nullptr;
  }
  doc["global_conditions"] = gc;

  json flags = json::array();
  if (eq.closed_form_discrepancy && *eq.closed_form_discrepancy > kClosedFormFlagTol) {
    flags.push_back("closed-form S* = " + format_number(*eq.s_star_closed_form) +
                    " differs from the bisection root S* = " + format_number(eq.endemic->S) + " by " +
                    format_number(*eq.closed_form_discrepancy));
  }
  doc["open_flags"] = flags;
  return doc;
}

inline json lyapunov_json(const LyapunovRecord& rec) {
  return json{{"kind", std::string(to_string(rec.kind))},
              {"initial_value", rec.initial_value},
              {"max_increment", rec.max_increment},
              {"worst_step", rec.worst_step},
              {"tolerance", rec.tolerance},
              {"monotone", rec.monotone},
              {"condition_holds", rec.condition_holds}};
}

inline json run_report_json(const RunReport& rep) {
  json violations = json::array();
  for (const auto& v : rep.invariant_violations) {
    violations.push_back({{"step", v.step}, {"kind", std::string(to_string(v.kind))}, {"magnitude", v.magnitude}});
  }
  return json{{"alpha", rep.alpha},
              {"final_state", optional_json(rep.final_state, state_json)},
              {"converged_to", optional_json(rep.converged_to, state_json)},
              {"convergence_time", rep.convergence_time ? json(*rep.convergence_time) : json(nullptr)},
              {"invariant_violations", violations},
              {"lyapunov", optional_json(rep.lyapunov, lyapunov_json)},
              {"clamped", rep.clamped},
              {"error", rep.error ? json(*rep.error) : json(nullptr)}};
}

}  // namespace caputo_sirs
