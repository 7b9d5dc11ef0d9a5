#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "akm/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive kernel models: experiments and diagnostics"};
  app.require_subcommand(1);

  akm::cli::CommonOptions opts;
  std::string config, out = "out";
  std::uint64_t seed = 0;
  std::size_t limit = 0;

  const char* names[][2] = {
      {"sysid-demo", "Fit a TM or trigonometric model to a known LTI frequency response"},
      {"kernel-bound", "Certify the truncated Laguerre kernel error bound on polar grids"},
      {"train-classifier", "Train an adaptive or RFF classifier on covtype (or a synthetic stand-in)"},
      {"rff-compare", "Random Fourier feature estimates against the exact Gaussian kernel"},
      {"grad-check", "Compare analytic gradients against central differences"},
  };
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--limit", limit, "row limit (train-classifier)");
    sub->add_option("--set", opts.overrides, "override a configuration key (key=value)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : akm::cli::kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (!config.empty()) opts.config = config;
  if (sub->count("--seed") > 0) opts.seed = seed;
  if (sub->count("--limit") > 0) opts.limit = limit;
  opts.out = out;
  return akm::cli::run_command(sub->get_name(), opts, std::cout, std::cerr);
}
