#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kgqagen/llm/provider.hpp"
#include "kgqagen/pipeline.hpp"
#include "kgqagen/sparql/backend.hpp"

namespace kgqagen {

struct KgConfig {
  std::string mode = "in-memory";  // in-memory | remote
  std::string fixture;             // TSV fixture (in-memory mode)
  std::string endpoint;            // SPARQL endpoint URL (remote mode)
  std::string user_agent;
  int timeout_ms = 30000;
  int max_in_flight = 2;
  std::size_t fetch_cap = 100;  // remote one-hop fetch bound
};

struct LlmConfig {
  std::string mode = "http";  // http | scripted
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key_env = "OPENAI_API_KEY";  // key comes only from here
  std::string generator_model = "gpt-4.1";
  std::string revision_model = "gpt-4o-mini";
  std::string judge_model = "gpt-4o-mini";
  int timeout_ms = 120000;
  int max_in_flight = 4;
  double requests_per_second = 0;
  // scripted mode: inline responses and/or a JSON file with an array of
  // strings or {"when": fingerprint, "respond": text} objects
  std::vector<std::string> script;
  std::vector<std::pair<std::string, std::string>> script_keyed;
  std::string script_file;
};

struct PathsConfig {
  std::string seeds;
  std::string out_dir = "out";
};

struct Config {
  KgConfig kg;
  LlmConfig llm;
  PipelineConfig pipeline;
  PathsConfig paths;
};

// Parses and validates the JSON config document. Relative input paths
// (fixture, seeds, script_file) resolve against the config file's
// directory; out_dir is taken as given.
Config load_config(const std::string& path);
Config parse_config(const std::string& content, const std::string& base_dir);

std::unique_ptr<sparql::KgBackend> make_backend(const Config& config);
std::unique_ptr<llm::Provider> make_provider(const Config& config);

// Seed list: one `Q-id<TAB>label` per line; `#` comments and blank lines
// are skipped; a missing label falls back to the id.
std::vector<EntityRef> load_seeds(const std::string& path);
std::vector<EntityRef> parse_seeds(const std::string& content, const std::string& origin);

}  // namespace kgqagen
