#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgqagen/kg_store.hpp"
#include "kgqagen/pipeline.hpp"

namespace kgqagen {

// JSONL file violated the record schema; message carries file:line.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RecordMeta {
  std::uint64_t iterations = 0;
  std::uint64_t validation_attempts = 0;
  std::string model;
  std::string created_at;

  bool operator==(const RecordMeta&) const = default;
};

// The persisted instance shape. Keys serialize in this exact order:
// id, seed{label,qid}, question, answers, proof, sparql,
// meta{iterations, validation_attempts, model, created_at}.
struct InstanceRecord {
  std::string id;
  EntityRef seed;
  std::string question;
  std::vector<std::string> answers;
  std::vector<std::array<std::string, 3>> proof;  // surface-form triples
  std::string sparql;
  RecordMeta meta;

  bool operator==(const InstanceRecord&) const = default;
};

InstanceRecord record_from_candidate(const CandidateInstance& candidate);

std::string to_jsonl_line(const InstanceRecord& record);

enum class ReadMode {
  Strict,   // pipeline files: every field, unique non-empty ids
  Lenient,  // external QA files: question + answers suffice
};

// One JSON object per line. Strict reads reject duplicate ids and schema
// violations with the offending line number. Lenient reads accept records
// that carry at least a question and an answer list (an `answer` key is
// accepted as an alias), defaulting everything else.
std::vector<InstanceRecord> read_jsonl(const std::string& path, ReadMode mode = ReadMode::Strict);
std::vector<InstanceRecord> parse_jsonl(const std::string& content, const std::string& origin,
                                        ReadMode mode = ReadMode::Strict);

// Returns the number of records written.
std::size_t write_jsonl(const std::vector<InstanceRecord>& records, const std::string& path);

struct SplitSpec {
  double dev_fraction = 0.1;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct SplitResult {
  std::vector<InstanceRecord> train, dev, test;
};

// Deterministic shuffle, then dev/test sized by round-half-up of their
// fractions with train absorbing the remainder. Partitions are disjoint
// and exhaustive; infeasible fractions (an empty part) raise ConfigError.
SplitResult split(std::vector<InstanceRecord> records, const SplitSpec& spec);

struct DatasetStats {
  std::size_t count = 0;
  // question length in whitespace-delimited words
  std::size_t words_le15 = 0;
  std::size_t words_16_30 = 0;
  std::size_t words_gt30 = 0;
  // answer-set size
  std::size_t answers_1 = 0;
  std::size_t answers_2 = 0;
  std::size_t answers_3plus = 0;
  // percentages of count, rounded to one decimal
  double pct_words_le15 = 0, pct_words_16_30 = 0, pct_words_gt30 = 0;
  double pct_answers_1 = 0, pct_answers_2 = 0, pct_answers_3plus = 0;
};

DatasetStats stats(const std::vector<InstanceRecord>& records);

std::string stats_table(const DatasetStats& s);
std::string stats_json(const DatasetStats& s);

}  // namespace kgqagen
