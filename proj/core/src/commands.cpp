#include "kgqagen/commands.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "kgqagen/errors.hpp"
#include "kgqagen/verifier.hpp"

namespace kgqagen {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kEpoch = "1970-01-01T00:00:00Z";

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const TransportError& e) {
    log << "error: " << e.what() << "\n";
    return ExitInfrastructure;
  } catch (const SchemaError& e) {
    log << "error: " << e.what() << "\n";
    return ExitUsage;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return ExitUsage;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    return ExitInfrastructure;
  }
}

void apply_run_options(Config& config, const RunOptions& opts) {
  if (opts.seed_override) config.pipeline.rng_seed = *opts.seed_override;
  if (opts.deterministic) {
    config.pipeline.fixed_timestamp = kEpoch;
    if (config.llm.mode != "scripted")
      throw ConfigError("--deterministic requires llm.mode=scripted");
  }
}

// A scripted provider consumes one global response queue, so seed order
// must be the call order.
std::size_t effective_workers(const Config& config, const RunOptions& opts) {
  if (config.llm.mode == "scripted") return 1;
  return std::max<std::size_t>(1, opts.workers);
}

double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

int cmd_generate(Config config, const std::string& seeds_path, const std::string& out_dir,
                 const RunOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    apply_run_options(config, opts);
    const auto seeds = load_seeds(seeds_path.empty() ? config.paths.seeds : seeds_path);
    const auto backend = make_backend(config);
    const auto provider = make_provider(config);

    const auto outcomes =
        run_batch(*backend, *provider, seeds, config.pipeline, effective_workers(config, opts));

    std::vector<InstanceRecord> records;
    std::vector<std::string> abandoned_lines;
    std::size_t infrastructure = 0;
    std::unordered_map<std::string, std::size_t> reason_counts;

    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (const auto* candidate = std::get_if<CandidateInstance>(&outcomes[i])) {
        records.push_back(record_from_candidate(*candidate));
        log << "[" << i + 1 << "/" << seeds.size() << "] " << seeds[i].qid << " -> "
            << candidate->id << " (iterations=" << candidate->meta.iterations << ")\n";
        continue;
      }
      const auto& abandoned = std::get<Abandoned>(outcomes[i]);
      const std::string reason = to_string(abandoned.reason);
      ++reason_counts[reason];
      if (abandoned.reason == AbandonReason::Infrastructure) ++infrastructure;
      ordered_json line;
      line["seed"] = seeds[i].qid;
      line["label"] = seeds[i].label;
      line["reason"] = reason;
      line["detail"] = abandoned.detail;
      abandoned_lines.push_back(line.dump());
      log << "[" << i + 1 << "/" << seeds.size() << "] " << seeds[i].qid << " abandoned: "
          << reason << "\n";
    }

    fs::create_directories(out_dir);
    write_jsonl(records, (fs::path(out_dir) / "raw.jsonl").string());
    {
      std::ofstream out(fs::path(out_dir) / "abandoned.jsonl", std::ios::binary);
      for (const auto& line : abandoned_lines) out << line << '\n';
    }

    log << "seeds: " << seeds.size() << ", candidates: " << records.size() << "\n";
    for (const auto& [reason, count] : std::map<std::string, std::size_t>(reason_counts.begin(),
                                                                          reason_counts.end()))
      log << "abandoned " << reason << ": " << count << "\n";
    return infrastructure > 0 ? ExitInfrastructure : ExitOk;
  });
}

int cmd_verify(Config config, const std::string& in_path, const std::string& out_path,
               const std::string& rejected_path, const RunOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    apply_run_options(config, opts);
    const auto candidates = read_jsonl(in_path, ReadMode::Strict);
    const auto backend = make_backend(config);
    const auto provider = make_provider(config);

    VerifierConfig vc;
    vc.revision_model = config.llm.revision_model;

    std::vector<ValidationOutcome> outcomes(candidates.size(),
                                            Rejected{RejectReason::Infrastructure, 0, "not run"});
    const std::size_t pool =
        std::min(effective_workers(config, opts), std::max<std::size_t>(1, candidates.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= candidates.size()) return;
        CandidateInstance candidate;
        candidate.id = candidates[i].id;
        candidate.seed = candidates[i].seed;
        candidate.question = candidates[i].question;
        candidate.answers = candidates[i].answers;
        candidate.sparql = candidates[i].sparql;
        outcomes[i] = validate(candidate, *backend, *provider, vc);
      }
    };
    if (pool <= 1) {
      work();
    } else {
      std::vector<std::thread> threads;
      for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(work);
      for (auto& t : threads) t.join();
    }

    std::vector<InstanceRecord> accepted;
    std::vector<std::string> rejected_lines;
    std::size_t infrastructure = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (const auto* ok = std::get_if<Accepted>(&outcomes[i])) {
        InstanceRecord record = candidates[i];
        record.sparql = ok->final_sparql;
        record.meta.validation_attempts = ok->attempts;
        accepted.push_back(std::move(record));
        log << candidates[i].id << " accepted (attempts=" << ok->attempts << ")\n";
        continue;
      }
      const auto& rejected = std::get<Rejected>(outcomes[i]);
      if (rejected.reason == RejectReason::Infrastructure) ++infrastructure;
      ordered_json line;
      line["id"] = candidates[i].id;
      line["reason"] = to_string(rejected.reason);
      line["attempts"] = rejected.attempts;
      line["detail"] = rejected.detail;
      line["question"] = candidates[i].question;
      line["sparql"] = candidates[i].sparql;
      rejected_lines.push_back(line.dump());
      log << candidates[i].id << " rejected: " << to_string(rejected.reason)
          << " (attempts=" << rejected.attempts << ")\n";
    }

    write_jsonl(accepted, out_path);
    if (!rejected_path.empty()) {
      std::ofstream out(rejected_path, std::ios::binary);
      if (!out) throw ConfigError("cannot write rejected sidecar: " + rejected_path);
      for (const auto& line : rejected_lines) out << line << '\n';
    }

    char retention[64];
    std::snprintf(retention, sizeof(retention), "%.1f%%",
                  percent(accepted.size(), candidates.size()));
    log << "candidates: " << candidates.size() << ", accepted: " << accepted.size()
        << ", rejected: " << rejected_lines.size() << ", retention: " << retention << "\n";

    if (infrastructure > 0) return static_cast<int>(ExitInfrastructure);
    if (accepted.empty()) return static_cast<int>(ExitNoAccepted);
    return static_cast<int>(ExitOk);
  });
}

int cmd_split(const std::string& in_path, const SplitSpec& spec, const std::string& out_dir,
              std::ostream& log) {
  return guarded(log, [&] {
    const auto records = read_jsonl(in_path, ReadMode::Strict);
    auto parts = split(records, spec);
    fs::create_directories(out_dir);
    write_jsonl(parts.train, (fs::path(out_dir) / "train.jsonl").string());
    write_jsonl(parts.dev, (fs::path(out_dir) / "dev.jsonl").string());
    write_jsonl(parts.test, (fs::path(out_dir) / "test.jsonl").string());
    log << "records: " << records.size() << " -> train: " << parts.train.size()
        << ", dev: " << parts.dev.size() << ", test: " << parts.test.size() << "\n";
    return ExitOk;
  });
}

int cmd_stats(const std::string& in_path, const std::string& json_out, std::ostream& log) {
  return guarded(log, [&] {
    const auto records = read_jsonl(in_path, ReadMode::Lenient);
    const DatasetStats s = stats(records);
    log << stats_table(s);
    if (!json_out.empty()) {
      std::ofstream out(json_out, std::ios::binary);
      if (!out) throw ConfigError("cannot write stats report: " + json_out);
      out << stats_json(s) << '\n';
    }
    return ExitOk;
  });
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path, eval::MatchMode mode,
             const std::string& report_path, const std::string& cache_path, const Config* config,
             std::ostream& log) {
  return guarded(log, [&] {
    const auto gold = read_jsonl(gold_path, ReadMode::Lenient);
    {
      std::unordered_map<std::string, bool> ids;
      for (const auto& g : gold)
        if (!ids.emplace(g.id, true).second)
          throw SchemaError("duplicate id in gold file: '" + g.id + "'");
    }
    const auto preds = eval::read_predictions(pred_path);

    std::unique_ptr<llm::Provider> judge;
    std::string judge_model;
    if (mode == eval::MatchMode::LASM) {
      if (!config) throw ConfigError("LASM scoring requires --config for the judge provider");
      judge = make_provider(*config);
      judge_model = config->llm.judge_model;
    }
    eval::JudgeCache cache(cache_path.empty() ? std::string() : cache_path);

    const eval::EvalRun run =
        eval::evaluate_predictions(gold, preds, mode, judge.get(), judge_model, &cache);

    log << eval::report_table(run);
    if (!report_path.empty()) {
      std::ofstream out(report_path, std::ios::binary);
      if (!out) throw ConfigError("cannot write report: " + report_path);
      out << eval::report_json(run) << '\n';
    }
    return ExitOk;
  });
}

}  // namespace kgqagen
