#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "kgqagen/config.hpp"
#include "kgqagen/dataset.hpp"
#include "kgqagen/metrics.hpp"

namespace kgqagen {

// Stable across versions.
enum ExitStatus : int {
  ExitOk = 0,
  ExitUsage = 1,            // usage / config / input-schema errors
  ExitInfrastructure = 2,   // network, endpoint or provider failures
  ExitNoAccepted = 3,       // validation produced zero accepted instances
};

struct RunOptions {
  std::size_t workers = 4;
  bool deterministic = false;  // zero timestamps, require a scripted provider
  std::optional<std::uint64_t> seed_override;
};

// Runs the per-seed generation loop over the seed list; writes
// raw.jsonl and abandoned.jsonl under out_dir.
int cmd_generate(Config config, const std::string& seeds_path, const std::string& out_dir,
                 const RunOptions& opts, std::ostream& log);

// Symbolically validates candidates; accepted records (with the verified
// query and attempt count) go to out_path, rejections to rejected_path.
int cmd_verify(Config config, const std::string& in_path, const std::string& out_path,
               const std::string& rejected_path, const RunOptions& opts, std::ostream& log);

int cmd_split(const std::string& in_path, const SplitSpec& spec, const std::string& out_dir,
              std::ostream& log);

int cmd_stats(const std::string& in_path, const std::string& json_out, std::ostream& log);

// config may be null for EM-only scoring; LASM requires the judge provider
// from the config's llm block.
int cmd_eval(const std::string& gold_path, const std::string& pred_path, eval::MatchMode mode,
             const std::string& report_path, const std::string& cache_path, const Config* config,
             std::ostream& log);

}  // namespace kgqagen
