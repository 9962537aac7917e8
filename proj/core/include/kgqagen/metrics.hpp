#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgqagen/dataset.hpp"
#include "kgqagen/llm/provider.hpp"

namespace kgqagen::eval {

// Shared answer normalization: lowercase, trim, collapse whitespace, strip
// one trailing "(Q…)" (gold answers carry ids, predictions usually do not).
std::string normalize(const std::string& answer);

struct PredictionRecord {
  std::string id;
  std::vector<std::string> predictions;  // rank order, index 0 on top
};

std::vector<PredictionRecord> read_predictions(const std::string& path);
std::vector<PredictionRecord> parse_predictions(const std::string& content,
                                                const std::string& origin);

enum class MatchMode { EM, LASM };

std::string to_string(MatchMode mode);

struct MatchResult {
  std::string instance_id;
  MatchMode mode = MatchMode::EM;
  // one-to-one (prediction index, gold index) pairs
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

struct InstanceScores {
  double precision = 0, recall = 0, f1 = 0, hit1 = 0, accuracy = 0;
};

struct MetricReport {
  MatchMode mode = MatchMode::EM;
  double accuracy = 0, hit1 = 0, f1 = 0, precision = 0, recall = 0;  // x100, 2 decimals
  std::size_t instances = 0;
  std::size_t judge_calls = 0;  // LASM only
  std::size_t cache_hits = 0;   // LASM only
};

// Persistent (normalized prediction, normalized gold) -> verdict map.
// Verdicts are immutable once written; concurrent writers agree by
// construction. With an empty path the cache is memory-only.
class JudgeCache {
 public:
  JudgeCache() = default;
  explicit JudgeCache(std::string path);

  std::optional<bool> lookup(const std::string& normalized_pred,
                             const std::string& normalized_gold) const;
  void store(const std::string& normalized_pred, const std::string& normalized_gold,
             bool verdict);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, bool> verdicts_;
  std::string path_;
};

// One-to-one pairing of predictions to gold answers by normalized string
// equality (multiset intersection, rank order).
MatchResult match_em(const std::vector<std::string>& preds, const std::vector<std::string>& gold);

struct JudgeStats {
  std::size_t calls = 0;
  std::size_t cache_hits = 0;
};

// Semantic matching activates only for pairs the exact match missed: each
// unmatched prediction probes unmatched gold answers in rank order through
// the judge (cache first) and greedily binds the first affirmative. The
// result is always a superset of the EM pairing. Judge failures abort
// scoring; LASM never silently degrades to EM.
MatchResult match_lasm(const std::vector<std::string>& preds, const std::vector<std::string>& gold,
                       const std::string& question, llm::Provider& judge,
                       const std::string& judge_model, JudgeCache& cache, JudgeStats& stats);

InstanceScores score_instance(const MatchResult& match, const std::vector<std::string>& preds,
                              const std::vector<std::string>& gold);

// Unweighted macro average over instances, x100, rounded to 2 decimals.
MetricReport aggregate(const std::vector<InstanceScores>& scores, MatchMode mode,
                       const JudgeStats& judge_stats = {});

struct EvalRun {
  MetricReport em;
  std::optional<MetricReport> lasm;
};

// Scores a prediction file against gold records. Every gold instance is
// scored; gold ids without predictions count as empty prediction lists.
// Prediction ids missing from gold raise SchemaError.
EvalRun evaluate_predictions(const std::vector<InstanceRecord>& gold,
                             const std::vector<PredictionRecord>& preds, MatchMode mode,
                             llm::Provider* judge = nullptr, const std::string& judge_model = {},
                             JudgeCache* cache = nullptr);

std::string report_json(const EvalRun& run);
std::string report_table(const EvalRun& run);

}  // namespace kgqagen::eval
