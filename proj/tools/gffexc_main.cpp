#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gffexc/config.hpp"
#include "gffexc/harness.hpp"

namespace {

std::optional<gffexc::ExperimentConfig> load(const std::string& path) {
  if (path.empty()) return gffexc::default_config();
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read config " << path << '\n';
    return std::nullopt;
  }
  std::ostringstream text;
  text << in.rdbuf();
  auto parsed = gffexc::parse_config(text.str());
  for (const auto& e : parsed.errors) {
    std::cerr << path;
    if (e.line > 0) std::cerr << ':' << e.line;
    std::cerr << ": " << e.message << '\n';
  }
  return parsed.config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sign-excursion decomposition experiments for the metric-graph Gaussian free field"};
  app.set_version_flag("--version", std::string(gffexc::version()));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> level;
  std::optional<std::size_t> samples;
  bool corrupt = false;
  app.add_option("--config", config_path, "Configuration file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Base seed (unsigned 64-bit)");
  app.add_option("--out", out, "Output directory");
  app.add_option("--n", level, "Refinement level, mesh 2^-n")->check(CLI::Range(2, 12));
  app.add_option("--samples", samples, "Number of replicas M")->check(CLI::PositiveNumber);
  app.add_flag("--corrupt", corrupt, "Overwrite sigma_2 by sigma_1 in the sign-independence test");

  std::string check;
  for (auto name : gffexc::subcommands()) {
    auto* sub = app.add_subcommand(std::string(name))->fallthrough();
    if (name == "stats") {
      sub->add_option("check", check, "l2 | moment | sign-independence | height-gap | tail | partial-sums | "
                                       "sign-covariance (default: the config's checks)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  auto config = load(config_path);
  if (!config) return 2;
  if (seed) config->seed = *seed;
  if (out) config->out = *out;
  if (level) {
    config->n = *level;
    config->n_list.clear();
  }
  if (samples) config->samples = *samples;
  if (corrupt) config->corrupt = true;

  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    const auto summary = gffexc::run(*config, subcommand, check, std::cout);
    for (const auto& f : summary.failures) std::cerr << "FAILED: " << f << '\n';
    return summary.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
