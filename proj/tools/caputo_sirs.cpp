// Command-line front end: analyze, simulate, sweep, reproduce.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "caputo_sirs/caputo_sirs.hpp"

namespace cs = caputo_sirs;

namespace {

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw cs::ConfigError("--alphas", "'" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw cs::ConfigError("--alphas", "empty list");
  }
  return out;
}

cs::RunConfig config_from(const std::string& path, int preset) {
  if (!path.empty()) {
    return cs::load_config(path);
  }
  if (preset != 0) {
    return cs::presets::config(preset);
  }
  throw cs::ConfigError("--config", "a configuration file or --preset is required");
}

std::optional<std::string> flag_value(const std::string& s) {
  return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional-order SIRS model: equilibria, stability and Caputo simulations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::string alphas_text;
  std::string figure;
  int preset = 0;
  bool svg = false;

  auto* analyze = app.add_subcommand("analyze", "R0, equilibria and stability classification");
  analyze->add_option("--config", config_path, "JSON run configuration");
  analyze->add_option("--preset", preset, "built-in parameter set (1 or 2)");
  analyze->add_option("--alphas", alphas_text, "comma-separated orders to classify");
  analyze->add_option("--out", out_flag, "output directory");

  auto* simulate = app.add_subcommand("simulate", "single Caputo run");
  simulate->add_option("--config", config_path, "JSON run configuration");
  simulate->add_option("--preset", preset, "built-in parameter set (1 or 2)");
  simulate->add_flag("--svg", svg, "also write trajectory.svg");
  simulate->add_option("--out", out_flag, "output directory");

  auto* sweep = app.add_subcommand("sweep", "one run per fractional order");
  sweep->add_option("--config", config_path, "JSON run configuration");
  sweep->add_option("--preset", preset, "built-in parameter set (1 or 2)");
  sweep->add_option("--alphas", alphas_text, "comma-separated orders in (0, 1]")->required();
  sweep->add_option("--out", out_flag, "output directory");

  auto* reproduce = app.add_subcommand("reproduce", "regenerate a figure and its comparison table");
  reproduce->add_option("--figure", figure, "fig1 or fig2")->required();
  reproduce->add_option("--out", out_flag, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cs::exit_code::ok : cs::exit_code::usage;
  }

  return cs::run_guarded(std::cerr, [&]() -> int {
    if (reproduce->parsed()) {
      const cs::CommandContext ctx{cs::resolve_output_dir(flag_value(out_flag), std::nullopt), std::cout, std::cerr};
      return cs::cmd_reproduce(figure, ctx);
    }
    const cs::RunConfig cfg = config_from(config_path, preset);
    const cs::CommandContext ctx{cs::resolve_output_dir(flag_value(out_flag), cfg.output_dir), std::cout,
                                 std::cerr};
    if (analyze->parsed()) {
      return cs::cmd_analyze(cfg, alphas_text.empty() ? std::vector<double>{} : parse_alpha_list(alphas_text), ctx);
    }
    if (simulate->parsed()) {
      return cs::cmd_simulate(cfg, svg, ctx);
    }
    return cs::cmd_sweep(cfg, parse_alpha_list(alphas_text), ctx);
  });
}
