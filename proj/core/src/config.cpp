#include "kgqagen/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kgqagen/errors.hpp"
#include "kgqagen/ids.hpp"

namespace kgqagen {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::string("cannot open ") + what + ": " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

template <typename T>
void read_into(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void require_positive(std::size_t value, const char* key) {
  if (value == 0) throw ConfigError(std::string("config key '") + key + "' must be >= 1");
}

}  // namespace

Config parse_config(const std::string& content, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Config cfg;

  if (doc.contains("kg")) {
    const json& kg = doc["kg"];
    read_into(kg, "mode", cfg.kg.mode);
    read_into(kg, "fixture", cfg.kg.fixture);
    read_into(kg, "endpoint", cfg.kg.endpoint);
    read_into(kg, "user_agent", cfg.kg.user_agent);
    read_into(kg, "timeout_ms", cfg.kg.timeout_ms);
    read_into(kg, "max_in_flight", cfg.kg.max_in_flight);
    read_into(kg, "fetch_cap", cfg.kg.fetch_cap);
  }
  if (doc.contains("llm")) {
    const json& llm = doc["llm"];
    read_into(llm, "mode", cfg.llm.mode);
    read_into(llm, "base_url", cfg.llm.base_url);
    read_into(llm, "api_key_env", cfg.llm.api_key_env);
    read_into(llm, "generator_model", cfg.llm.generator_model);
    read_into(llm, "revision_model", cfg.llm.revision_model);
    read_into(llm, "judge_model", cfg.llm.judge_model);
    read_into(llm, "timeout_ms", cfg.llm.timeout_ms);
    read_into(llm, "max_in_flight", cfg.llm.max_in_flight);
    read_into(llm, "requests_per_second", cfg.llm.requests_per_second);
    read_into(llm, "script_file", cfg.llm.script_file);
    if (llm.contains("script")) {
      if (!llm["script"].is_array()) throw ConfigError("config key 'script' must be an array");
      for (const auto& entry : llm["script"]) {
        if (entry.is_string()) {
          cfg.llm.script.push_back(entry.get<std::string>());
        } else if (entry.is_object() && entry.contains("when") && entry.contains("respond")) {
          cfg.llm.script_keyed.emplace_back(entry["when"].get<std::string>(),
                                            entry["respond"].get<std::string>());
        } else {
          throw ConfigError("script entries must be strings or {when, respond} objects");
        }
      }
    }
  }
  if (doc.contains("pipeline")) {
    const json& p = doc["pipeline"];
    read_into(p, "init_k", cfg.pipeline.init_k);
    read_into(p, "expand_k", cfg.pipeline.expand_k);
    read_into(p, "max_iterations", cfg.pipeline.max_iterations);
    read_into(p, "max_subgraph_triples", cfg.pipeline.max_subgraph_triples);
    read_into(p, "rng_seed", cfg.pipeline.rng_seed);
    read_into(p, "generator_model", cfg.pipeline.generator_model);
    std::string direction = to_string(cfg.pipeline.direction);
    read_into(p, "direction", direction);
    auto dir = direction_from_string(direction);
    if (!dir) throw ConfigError("pipeline.direction must be out|in|both, got '" + direction + "'");
    cfg.pipeline.direction = *dir;
  }
  cfg.pipeline.generator_model = cfg.llm.generator_model;
  if (doc.contains("paths")) {
    const json& p = doc["paths"];
    read_into(p, "seeds", cfg.paths.seeds);
    read_into(p, "out_dir", cfg.paths.out_dir);
  }

  require_positive(cfg.pipeline.init_k, "pipeline.init_k");
  require_positive(cfg.pipeline.expand_k, "pipeline.expand_k");
  require_positive(cfg.pipeline.max_iterations, "pipeline.max_iterations");
  require_positive(cfg.pipeline.max_subgraph_triples, "pipeline.max_subgraph_triples");

  if (cfg.kg.mode != "in-memory" && cfg.kg.mode != "remote")
    throw ConfigError("kg.mode must be in-memory|remote, got '" + cfg.kg.mode + "'");
  if (cfg.llm.mode != "http" && cfg.llm.mode != "scripted")
    throw ConfigError("llm.mode must be http|scripted, got '" + cfg.llm.mode + "'");

  cfg.kg.fixture = resolve(base_dir, cfg.kg.fixture);
  cfg.paths.seeds = resolve(base_dir, cfg.paths.seeds);
  cfg.llm.script_file = resolve(base_dir, cfg.llm.script_file);

  if (cfg.kg.mode == "in-memory") {
    if (cfg.kg.fixture.empty()) throw ConfigError("kg.mode=in-memory requires kg.fixture");
    if (!fs::exists(cfg.kg.fixture))
      throw ConfigError("kg.fixture does not exist: " + cfg.kg.fixture);
  } else {
    if (cfg.kg.endpoint.empty()) throw ConfigError("kg.mode=remote requires kg.endpoint");
    if (cfg.kg.user_agent.empty())
      throw ConfigError("kg.mode=remote requires a descriptive kg.user_agent");
  }
  if (!cfg.llm.script_file.empty() && !fs::exists(cfg.llm.script_file))
    throw ConfigError("llm.script_file does not exist: " + cfg.llm.script_file);
  return cfg;
}

Config load_config(const std::string& path) {
  const std::string content = read_file(path, "config file");
  return parse_config(content, fs::path(path).parent_path().string());
}

std::unique_ptr<sparql::KgBackend> make_backend(const Config& config) {
  if (config.kg.mode == "in-memory") {
    auto store = std::make_shared<TripleStore>(load_tsv(config.kg.fixture));
    return std::make_unique<sparql::InMemoryBackend>(std::move(store),
                                                     config.pipeline.direction);
  }
  sparql::RemoteConfig rc;
  rc.endpoint_url = config.kg.endpoint;
  rc.user_agent = config.kg.user_agent;
  rc.timeout_ms = config.kg.timeout_ms;
  rc.max_in_flight = config.kg.max_in_flight;
  return std::make_unique<sparql::RemoteBackend>(std::move(rc), config.pipeline.direction,
                                                 config.kg.fetch_cap);
}

std::unique_ptr<llm::Provider> make_provider(const Config& config) {
  if (config.llm.mode == "scripted") {
    auto provider = std::make_unique<llm::ScriptedProvider>();
    for (const auto& [when, respond] : config.llm.script_keyed)
      provider->respond_when(when, respond);
    if (!config.llm.script_file.empty()) {
      json doc;
      try {
        doc = json::parse(read_file(config.llm.script_file, "script file"));
      } catch (const json::exception& e) {
        throw ConfigError(std::string("script file is not valid JSON: ") + e.what());
      }
      if (!doc.is_array()) throw ConfigError("script file must hold a JSON array");
      for (const auto& entry : doc) {
        if (entry.is_string()) {
          provider->enqueue(entry.get<std::string>());
        } else if (entry.is_object() && entry.contains("when") && entry.contains("respond")) {
          provider->respond_when(entry["when"].get<std::string>(),
                                 entry["respond"].get<std::string>());
        } else {
          throw ConfigError("script file entries must be strings or {when, respond} objects");
        }
      }
    }
    for (const auto& response : config.llm.script) provider->enqueue(response);
    return provider;
  }
  llm::HttpProviderConfig hc;
  hc.base_url = config.llm.base_url;
  hc.api_key_env = config.llm.api_key_env;
  hc.timeout_ms = config.llm.timeout_ms;
  hc.max_in_flight = config.llm.max_in_flight;
  hc.requests_per_second = config.llm.requests_per_second;
  return std::make_unique<llm::HttpProvider>(std::move(hc));
}

std::vector<EntityRef> parse_seeds(const std::string& content, const std::string& origin) {
  std::vector<EntityRef> seeds;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string qid = trim(tab == std::string::npos ? line : line.substr(0, tab));
    const std::string label = tab == std::string::npos ? "" : trim(line.substr(tab + 1));
    if (!is_qid(qid))
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": invalid seed id '" + qid +
                        "'");
    seeds.push_back({label.empty() ? qid : label, qid});
  }
  return seeds;
}

std::vector<EntityRef> load_seeds(const std::string& path) {
  return parse_seeds(read_file(path, "seeds file"), path);
}

}  // namespace kgqagen
