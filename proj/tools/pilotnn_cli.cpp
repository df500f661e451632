// Command-line front end: each subcommand runs one experiment from a key=value
// config file and writes its outputs into --out. The subcommand must agree
// with the config's `experiment` field when that field is present.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "pilotnn/experiments.hpp"
#include "pilotnn/runconfig.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::string out = ".";
  int threads = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out, "output directory (created if missing)");
  cmd->add_option("--threads", opts.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts.seed, "override the config's seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
}

int run(const std::string& name, const CommonOpts& opts) {
  auto cfg = pilotnn::RunConfig::parse_file(opts.config);
  if (cfg.has("experiment") && cfg.get_string("experiment") != name) {
    std::fprintf(stderr,
                 "error: config declares experiment '%s' but subcommand is '%s'\n",
                 cfg.get_string("experiment").c_str(), name.c_str());
    return 1;
  }
  cfg.set("experiment", name);
  if (opts.seed_set) cfg.set("seed", std::to_string(opts.seed));

  const auto files = pilotnn::run_experiment(cfg, opts.out, opts.threads);
  for (const auto& f : files) std::printf("%s\n", f.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Pilot-aided channel estimation and nearest-neighbor decoding toolkit"};
  app.require_subcommand(1);

  const char* names[] = {"scenario",   "interp-error", "prelog",
                         "decode-sim", "mac-region",   "mac-verdict",
                         "dump-fading"};
  const char* descriptions[] = {
      "Doppler bandwidth and L* from physical parameters",
      "analytic vs Monte Carlo interpolation error variances",
      "rate lower bounds across an SNR grid plus a pre-log fit",
      "block error rate of nearest-neighbor decoding",
      "two-user pre-log region (constraints, vertices, samples)",
      "joint transmission vs TDMA verdict with exact thresholds",
      "synthesize a fading path and dump it to a binary file"};

  CommonOpts opts[7];
  CLI::App* cmds[7];
  for (int i = 0; i < 7; ++i) {
    cmds[i] = app.add_subcommand(names[i], descriptions[i]);
    add_common(cmds[i], opts[i]);
  }

  CLI11_PARSE(app, argc, argv);

  for (int i = 0; i < 7; ++i)
    if (cmds[i]->parsed()) {
      try {
        return run(names[i], opts[i]);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
      }
    }
  return 1;
}
