// kgqagen command-line entry point: generate, verify, split, stats, eval.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kgqagen/commands.hpp"
#include "kgqagen/errors.hpp"

namespace {

kgqagen::Config load_or_exit(const std::string& path) {
  if (path.empty()) {
    std::cerr << "error: --config is required for this command\n";
    std::exit(kgqagen::ExitUsage);
  }
  return kgqagen::load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knowledge-graph QA benchmark generation and evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string seeds_path;
  std::string in_path;
  std::string out_path;
  std::string out_dir;
  std::string rejected_path;
  std::string gold_path;
  std::string pred_path;
  std::string report_path;
  std::string cache_path;
  std::string json_out;
  std::string mode = "em";
  std::size_t workers = 4;
  bool deterministic = false;
  std::optional<std::uint64_t> seed_override;
  double dev_fraction = 0.1;
  double test_fraction = 0.1;

  auto* generate = app.add_subcommand("generate", "generate candidate instances from seeds");
  generate->add_option("--config", config_path, "config file (JSON)")->required();
  generate->add_option("--seeds", seeds_path, "seed list (overrides paths.seeds)");
  generate->add_option("--out", out_dir, "output directory (overrides paths.out_dir)");
  generate->add_option("--workers", workers, "worker pool size");
  generate->add_flag("--deterministic", deterministic, "zero timestamps; scripted provider only");
  generate->add_option("--seed", seed_override, "rng seed override");

  auto* verify = app.add_subcommand("verify", "symbolically validate candidates");
  verify->add_option("--config", config_path, "config file (JSON)")->required();
  verify->add_option("--in", in_path, "candidate JSONL")->required();
  verify->add_option("--out", out_path, "accepted-instance JSONL")->required();
  verify->add_option("--rejected", rejected_path, "rejected-instance sidecar JSONL");
  verify->add_option("--workers", workers, "worker pool size");
  verify->add_flag("--deterministic", deterministic, "zero timestamps; scripted provider only");

  auto* split = app.add_subcommand("split", "deterministic train/dev/test split");
  split->add_option("--in", in_path, "dataset JSONL")->required();
  split->add_option("--out-dir", out_dir, "output directory")->required();
  split->add_option("--seed", seed_override, "shuffle seed");
  split->add_option("--dev-fraction", dev_fraction, "dev fraction (default 0.1)");
  split->add_option("--test-fraction", test_fraction, "test fraction (default 0.1)");

  auto* stats = app.add_subcommand("stats", "corpus statistics");
  stats->add_option("--in", in_path, "dataset JSONL")->required();
  stats->add_option("--json", json_out, "also write a JSON report here");

  auto* eval = app.add_subcommand("eval", "score predictions against gold answers");
  eval->add_option("--gold", gold_path, "gold dataset JSONL")->required();
  eval->add_option("--pred", pred_path, "prediction JSONL")->required();
  eval->add_option("--mode", mode, "em|lasm")->check(CLI::IsMember({"em", "lasm"}));
  eval->add_option("--report", report_path, "write the JSON report here");
  eval->add_option("--cache", cache_path, "judge verdict cache (JSONL, appended)");
  eval->add_option("--config", config_path, "config file (needed for lasm)");

  CLI11_PARSE(app, argc, argv);

  try {
    kgqagen::RunOptions opts;
    opts.workers = workers;
    opts.deterministic = deterministic;
    opts.seed_override = seed_override;

    if (generate->parsed()) {
      auto config = load_or_exit(config_path);
      const std::string dir = out_dir.empty() ? config.paths.out_dir : out_dir;
      return kgqagen::cmd_generate(std::move(config), seeds_path, dir, opts, std::cout);
    }
    if (verify->parsed()) {
      auto config = load_or_exit(config_path);
      return kgqagen::cmd_verify(std::move(config), in_path, out_path, rejected_path, opts,
                                 std::cout);
    }
    if (split->parsed()) {
      kgqagen::SplitSpec spec;
      spec.dev_fraction = dev_fraction;
      spec.test_fraction = test_fraction;
      spec.seed = seed_override.value_or(0);
      return kgqagen::cmd_split(in_path, spec, out_dir, std::cout);
    }
    if (stats->parsed()) {
      return kgqagen::cmd_stats(in_path, json_out, std::cout);
    }
    if (eval->parsed()) {
      const auto match_mode =
          mode == "lasm" ? kgqagen::eval::MatchMode::LASM : kgqagen::eval::MatchMode::EM;
      std::optional<kgqagen::Config> config;
      if (!config_path.empty()) config = kgqagen::load_config(config_path);
      return kgqagen::cmd_eval(gold_path, pred_path, match_mode, report_path, cache_path,
                               config ? &*config : nullptr, std::cout);
    }
  } catch (const kgqagen::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kgqagen::ExitUsage;
  } catch (const kgqagen::TransportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kgqagen::ExitInfrastructure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kgqagen::ExitInfrastructure;
  }
  return kgqagen::ExitUsage;
}
